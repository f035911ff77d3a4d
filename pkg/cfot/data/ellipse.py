"""
Ellipse worlds: the structural equations, the analytic counterfactual oracle
and the online conditional sampler used by the Markovian coupling.

A sample is a point on an axis aligned ellipse. The exogenous ``u`` holds the
semi-axis parameters, the parent ``pa`` is the angle and ``x`` the cartesian
coordinates::

    x0 = u0 * (2 + sin(pa))
    x1 = u1 * (2 + cos(pa))

In the frontdoor world the angle acts through a mediator ``m`` on the unit
circle and ``x = u * (2 + m)``.
"""

import logging
from dataclasses import dataclass

import numpy as np
import pandas as pd

from cfot.utils import TWO_PI, wrap_angle

GRAPH_VARIANTS = ('markovian', 'backdoor', 'frontdoor')
PRIOR_VARIANTS = ('original', 'bimodal', 'multimodal')

# shift added to u0 for the complex priors: (values, probabilities)
SHIFTS = {
    'original': (np.array([0.0]), np.array([1.0])),
    'bimodal': (np.array([-2.0, 2.0]), np.array([0.5, 0.5])),
    'multimodal': (np.array([-4.0, -2.0, 2.0, 4.0]),
                   np.array([0.3, 0.2, 0.2, 0.3])),
}

# structural coefficients
PA_SLOPE = 1.44254843
PA_OFFSET = 0.59701923
U0_SLOPE = 1.64985274
U0_OFFSET = 0.2656131
U1_SLOPE = 1.61323358
U1_OFFSET = -0.18070237

# mediator noise standard deviation (variance 0.01)
M_NOISE_STD = 0.1

NOISE_COLUMNS = ['eps_z', 'eps_pa', 'eps_u0', 'eps_u1', 'eps_m0', 'eps_m1',
                 'shift']
SAMPLE_COLUMNS = ['z', 'pa', 'u0', 'u1', 'm0', 'm1', 'x0', 'x1']

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DgpConfig():
    """
    Which ellipse world to sample from

    Args:
        graph_variant: ``markovian``, ``backdoor`` or ``frontdoor``
        prior_variant: ``original``, ``bimodal`` or ``multimodal``
        n_samples: number of samples
        seed: run seed
    """

    graph_variant: str = 'markovian'
    prior_variant: str = 'original'
    n_samples: int = 10000
    seed: int = 0

    def __post_init__(self):
        if self.graph_variant not in GRAPH_VARIANTS:
            raise ValueError(
                'Unknown graph_variant {}, expected one of {}'.format(
                    self.graph_variant, GRAPH_VARIANTS))
        if self.prior_variant not in PRIOR_VARIANTS:
            raise ValueError(
                'Unknown prior_variant {}, expected one of {}'.format(
                    self.prior_variant, PRIOR_VARIANTS))
        if int(self.n_samples) <= 0:
            raise ValueError(
                'n_samples must be > 0, got {}'.format(self.n_samples))

    @property
    def frontdoor(self):
        return self.graph_variant == 'frontdoor'


def draw_noise(rng, n, config):
    """
    Draw the exogenous noise of ``n`` samples

    ``eps_z`` and ``eps_u0`` are U(0, 1) draws, ``eps_u1`` is Exponential(1)
    by inverse CDF. ``eps_pa`` is N(0, 1) for the confounded worlds and a
    U(0, 1) draw for the Markovian world. Mediator noise is only drawn for
    the frontdoor world and is NaN otherwise.

    Returns:
        pandas.DataFrame with :data:`NOISE_COLUMNS`
    """
    noise = pd.DataFrame(index=pd.RangeIndex(n), columns=NOISE_COLUMNS,
                         dtype=np.float64)
    noise['eps_z'] = rng.uniform(0.0, 1.0, n)
    if config.graph_variant == 'markovian':
        noise['eps_pa'] = rng.uniform(0.0, 1.0, n)
    else:
        noise['eps_pa'] = rng.standard_normal(n)
    noise['eps_u0'] = rng.uniform(0.0, 1.0, n)
    noise['eps_u1'] = -np.log1p(-rng.uniform(0.0, 1.0, n))

    if config.frontdoor:
        noise['eps_m0'] = M_NOISE_STD * rng.standard_normal(n)
        noise['eps_m1'] = M_NOISE_STD * rng.standard_normal(n)
    else:
        noise['eps_m0'] = np.nan
        noise['eps_m1'] = np.nan

    values, probs = SHIFTS[config.prior_variant]
    noise['shift'] = values[rng.choice(len(values), size=n, p=probs)]
    return noise


def confounder(eps_z):
    return np.asarray(eps_z) - 0.5


def parent_angle(z, eps_pa, graph_variant):
    if graph_variant == 'markovian':
        return TWO_PI * np.asarray(eps_pa)
    return wrap_angle(PA_SLOPE * z + PA_OFFSET + eps_pa)


def exogenous(z, eps_u0, eps_u1, shift, graph_variant):
    """
    Semi-axis parameters ``u`` of shape (n, 2)

    The frontdoor world confounds through ``z**2``.
    """
    zz = np.square(z) if graph_variant == 'frontdoor' else np.asarray(z)
    u0 = np.exp(U0_SLOPE * zz + U0_OFFSET) + shift + eps_u0
    u1 = u0 * (1.0 + eps_u1 * np.exp(U1_SLOPE * zz + U1_OFFSET))
    return np.stack([u0, u1], axis=-1)


def mediator(pa, eps_m0, eps_m1):
    """Noised point on the unit circle, shape (n, 2)"""
    m = np.stack([np.sin(pa) + eps_m0, np.cos(pa) + eps_m1], axis=-1)
    return m / np.linalg.norm(m, axis=-1, keepdims=True)


def outcome(pa, u):
    """x = u * (2 + sin pa, 2 + cos pa)"""
    pa = np.asarray(pa, dtype=np.float64)
    u = np.asarray(u, dtype=np.float64)
    return u * np.stack([2.0 + np.sin(pa), 2.0 + np.cos(pa)], axis=-1)


def outcome_from_mediator(m, u):
    return np.asarray(u, dtype=np.float64) * (2.0 + np.asarray(m))


def mechanism(noise, graph_variant):
    """
    Run the structural equations on recorded noise

    Args:
        noise: DataFrame with :data:`NOISE_COLUMNS`
        graph_variant: one of :data:`GRAPH_VARIANTS`

    Returns:
        pandas.DataFrame with :data:`SAMPLE_COLUMNS`, mediator columns NaN
        outside the frontdoor world
    """
    z = confounder(noise['eps_z'].values)
    pa = parent_angle(z, noise['eps_pa'].values, graph_variant)
    u = exogenous(z, noise['eps_u0'].values, noise['eps_u1'].values,
                  noise['shift'].values, graph_variant)

    if graph_variant == 'frontdoor':
        m = mediator(pa, noise['eps_m0'].values, noise['eps_m1'].values)
        x = outcome_from_mediator(m, u)
    else:
        m = np.full((len(z), 2), np.nan)
        x = outcome(pa, u)

    return pd.DataFrame({
        'z': z, 'pa': pa, 'u0': u[:, 0], 'u1': u[:, 1],
        'm0': m[:, 0], 'm1': m[:, 1], 'x0': x[:, 0], 'x1': x[:, 1],
    }, index=noise.index, columns=SAMPLE_COLUMNS)


def true_abduct(pa, x, m=None):
    """
    Invert the outcome mechanism

    Args:
        pa: angle(s)
        x: point(s), shape (..., 2)
        m: mediator point(s); when given the frontdoor inverse
            ``x / (2 + m)`` is used and ``pa`` is ignored

    Returns:
        u of the same shape as ``x``
    """
    x = np.asarray(x, dtype=np.float64)
    if m is not None:
        return x / (2.0 + np.asarray(m, dtype=np.float64))
    pa = np.asarray(pa, dtype=np.float64)
    return x / np.stack([2.0 + np.sin(pa), 2.0 + np.cos(pa)], axis=-1)


def true_counterfactual(pa, x, pa_star):
    """x* = f(pa*, f^-1(pa, x)) for the Markovian and backdoor worlds"""
    x = np.asarray(x, dtype=np.float64)
    pa = np.asarray(pa, dtype=np.float64)
    pa_star = np.asarray(pa_star, dtype=np.float64)
    x_star = outcome(pa_star, true_abduct(pa, x))
    # a null intervention returns the observation untouched
    same = np.asarray(pa_star == pa)
    return np.where(same[..., None], x, x_star)


def true_counterfactual_frontdoor(u, eps_m, pa_star):
    """
    Frontdoor ground truth from the persisted mediator noise

    Args:
        u: exogenous semi-axes, shape (n, 2)
        eps_m: mediator noise, shape (n, 2)
        pa_star: counterfactual angle(s)

    Returns:
        tuple of counterfactual mediator and outcome, each (n, 2)
    """
    eps_m = np.asarray(eps_m, dtype=np.float64)
    m_star = mediator(pa_star, eps_m[..., 0], eps_m[..., 1])
    return m_star, outcome_from_mediator(m_star, u)


def ellipse_points(pa, x, k):
    """
    Ground-truth counterfactuals at ``k`` angles ``2 pi j / k``

    Returns:
        array of shape (k, 2)
    """
    if int(k) < 1:
        raise ValueError('k must be >= 1, got {}'.format(k))
    angles = TWO_PI * np.arange(k) / k
    u = true_abduct(pa, x)
    return outcome(angles, np.broadcast_to(u, (k, 2)))


class ConditionalSampler():
    """
    Online sampler of an ellipse world, one stage of it at a time

    Conditional draws re-sample every upstream exogenous variable from its
    marginal with the parent held fixed, which is the adjusted distribution
    P(obs | do(parent)). Without confounding this is P(obs | parent).

    Stages:
        ``outcome``: x given pa (x given m in the frontdoor world)
        ``mediator``: m given pa, frontdoor only
        ``joint``: (m, x) given pa, frontdoor only

    Args:
        config: :class:`DgpConfig`
        stage: one of the stages above
    """

    STAGES = ('outcome', 'mediator', 'joint')

    def __init__(self, config, stage='outcome'):
        if stage not in self.STAGES:
            raise ValueError(
                'Unknown sampler stage {}, expected one of {}'.format(
                    stage, self.STAGES))
        if stage != 'outcome' and not config.frontdoor:
            raise ValueError(
                'Stage {} only exists in the frontdoor world'.format(stage))
        self.config = config
        self.stage = stage

    @property
    def parent_dim(self):
        if self.config.frontdoor and self.stage == 'outcome':
            return 2
        return 1

    @property
    def obs_dim(self):
        return 4 if self.stage == 'joint' else 2

    def sample_joint(self, rng, n):
        """
        Observational draws of (parent, obs), shapes (n, parent_dim) and
        (n, obs_dim)
        """
        samples = mechanism(draw_noise(rng, n, self.config),
                            self.config.graph_variant)
        pa = samples[['pa']].values
        m = samples[['m0', 'm1']].values
        x = samples[['x0', 'x1']].values

        if self.stage == 'mediator':
            return pa, m
        if self.stage == 'joint':
            return pa, np.concatenate([m, x], axis=1)
        if self.config.frontdoor:
            return m, x
        return pa, x

    def sample_parents(self, rng, n):
        return self.sample_joint(rng, n)[0]

    def sample_conditional(self, rng, parent, n):
        """
        ``n`` draws of the stage's observation at ``parent``

        Args:
            rng: numpy Generator
            parent: one parent value or an (n, parent_dim) array of them
            n: number of draws

        Returns:
            array of shape (n, obs_dim)
        """
        parent = np.broadcast_to(
            np.asarray(parent, dtype=np.float64).reshape(-1, self.parent_dim),
            (n, self.parent_dim))
        noise = draw_noise(rng, n, self.config)
        z = confounder(noise['eps_z'].values)
        u = exogenous(z, noise['eps_u0'].values, noise['eps_u1'].values,
                      noise['shift'].values, self.config.graph_variant)

        if not self.config.frontdoor:
            return outcome(parent[:, 0], u)
        if self.stage == 'outcome':
            return outcome_from_mediator(parent, u)

        m = mediator(parent[:, 0], noise['eps_m0'].values,
                     noise['eps_m1'].values)
        if self.stage == 'mediator':
            return m
        return np.concatenate([m, outcome_from_mediator(m, u)], axis=1)

    def sample_intervention_parents(self, rng, n):
        """Counterfactual targets: angles uniform on [0, 2 pi)"""
        if self.parent_dim != 1:
            raise ValueError(
                'Interventions are drawn on the angle, not the mediator')
        return rng.uniform(0.0, TWO_PI, size=(n, 1))


class EllipseOracle():
    """
    The ground-truth counterfactual engine of the Markovian and backdoor
    worlds, exposing the same interface as a trained flow engine
    """

    def __init__(self, config=None):
        if config is not None and config.frontdoor:
            raise ValueError(
                'The analytic oracle needs the recorded mediator noise in '
                'the frontdoor world, use true_counterfactual_frontdoor')

    def abduct(self, obs, pa):
        return true_abduct(np.asarray(pa)[..., 0], obs)

    def predict(self, u, pa_star):
        return outcome(np.asarray(pa_star)[..., 0], u)

    def counterfactual(self, obs, pa, pa_star):
        return self.predict(self.abduct(obs, pa), pa_star)
