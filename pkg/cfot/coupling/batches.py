"""
Training pairs (u, x, pa) under the three coupling schemes:

* ``independent``: prior and data drawn independently, paired in draw order
* ``naive_ot``: batch optimal transport between prior draws and data rows
  with mixed parents, each u inheriting the parent of its partner
* ``markovian_ot``: one parent value per batch, conditional data drawn at
  that value and coupled to prior draws by optimal transport
"""

import logging
from dataclasses import dataclass

import dcor
import numpy as np
from scipy.spatial.distance import cdist

from cfot.coupling.assignment import solve_assignment

SCHEMES = ('independent', 'naive_ot', 'markovian_ot')

logger = logging.getLogger(__name__)


class ConditionalSamplingError(RuntimeError):
    """Raised when the Markovian coupling has neither an online sampler nor
    a dataset to bin"""


@dataclass(frozen=True)
class CouplingPlan():
    """
    Args:
        assignment: permutation pairing prior row ``i`` with data row
            ``assignment[i]``
        cost: total squared Euclidean cost of the pairing
        scheme: coupling scheme that produced it
    """

    assignment: np.ndarray
    cost: float
    scheme: str


@dataclass(frozen=True)
class PairedBatch():
    """Aligned rows of prior draws ``u``, data ``x`` and parents ``pa``"""

    u: np.ndarray
    x: np.ndarray
    pa: np.ndarray

    def __len__(self):
        return self.u.shape[0]

    def shared_parent(self):
        return bool(np.all(self.pa == self.pa[0]))


@dataclass(frozen=True)
class Observations():
    """
    Fixed rows of (parent, observation) for the dataset driven schemes

    Args:
        pa: parents, (n, k)
        obs: observations, (n, d)
        circular: the parents are angles
    """

    pa: np.ndarray
    obs: np.ndarray
    circular: bool = True

    def __len__(self):
        return self.pa.shape[0]

    @classmethod
    def from_dataset(cls, dataset, stage='outcome', split='train'):
        """
        Rows of one sampler stage of a :class:`~cfot.data.Dataset`, matching
        :class:`~cfot.data.ConditionalSampler`
        """
        pa = dataset.pa(split)
        if stage == 'mediator':
            return cls(pa, dataset.m(split))
        if stage == 'joint':
            return cls(pa, np.concatenate(
                [dataset.m(split), dataset.x(split)], axis=1))
        if dataset.config.frontdoor:
            return cls(dataset.m(split), dataset.x(split), circular=False)
        return cls(pa, dataset.x(split))


def squared_cost(u, x):
    return cdist(u, x, 'sqeuclidean')


def plan_cost(u, x, assignment):
    """sum_i ||u_i - x_assignment[i]||^2"""
    return float(np.sum(np.square(u - x[assignment])))


def _couple(u, x, pa, scheme):
    assignment = solve_assignment(squared_cost(u, x))
    plan = CouplingPlan(assignment, plan_cost(u, x, assignment), scheme)
    return PairedBatch(u, x[assignment], pa[assignment]), plan


def _draw_rows(rng, m, observations):
    if len(observations) == 0:
        raise ValueError('Cannot draw a batch from an empty dataset')
    n = len(observations)
    idx = rng.choice(n, size=m, replace=n < m)
    return observations.pa[idx], observations.obs[idx]


def markovian_batch(rng, m, sampler, prior, observations=None,
                    bin_width=None):
    """
    Markovian conditional batch optimal transport

    One parent value is drawn, ``m`` observations are generated online at
    that value and coupled to ``m`` prior draws.

    Args:
        rng: numpy Generator
        m: batch size
        sampler: :class:`~cfot.data.ConditionalSampler` or None
        prior: :class:`~cfot.coupling.prior.PriorConfig`
        observations: :class:`Observations` to bin when there is no sampler
        bin_width: parent bin width of the fixed-dataset variant

    Returns:
        tuple of :class:`PairedBatch` and :class:`CouplingPlan`
    """
    if m < 1:
        raise ValueError('Batch size must be >= 1, got {}'.format(m))

    if sampler is None:
        if observations is None or bin_width is None:
            raise ConditionalSamplingError(
                'Markovian coupling needs an online sampler or a dataset '
                'with a bin width')
        return binned_batch(rng, m, observations, prior, bin_width)

    pa = sampler.sample_parents(rng, 1)[0]
    x = sampler.sample_conditional(rng, pa, m)
    u = prior.sample(rng, m)
    batch, plan = _couple(u, x, np.tile(pa, (m, 1)), 'markovian_ot')

    assert batch.shared_parent()
    return batch, plan


def binned_batch(rng, m, observations, prior, bin_width):
    """
    Fixed-dataset Markovian coupling

    An anchor row is drawn, rows whose parent lies within ``bin_width / 2``
    of the anchor (circular distance for angles) are resampled to ``m``
    and all of them take the anchor's parent value.
    """
    if bin_width <= 0:
        raise ValueError('bin_width must be > 0, got {}'.format(bin_width))
    if len(observations) == 0:
        raise ValueError('Cannot draw a batch from an empty dataset')

    anchor = observations.pa[rng.integers(len(observations))]
    delta = observations.pa - anchor
    if observations.circular:
        delta = np.mod(delta + np.pi, 2.0 * np.pi) - np.pi
    distance = np.linalg.norm(delta, axis=1)

    members = np.flatnonzero(distance <= bin_width / 2.0)
    x = observations.obs[rng.choice(members, size=m, replace=True)]
    u = prior.sample(rng, m)
    return _couple(u, x, np.tile(anchor, (m, 1)), 'markovian_ot')


def naive_batch(rng, m, observations, prior):
    """
    Batch optimal transport on the observations alone, ignoring parents;
    each u inherits the parent of the row it is matched to
    """
    pa, x = _draw_rows(rng, m, observations)
    u = prior.sample(rng, m)
    return _couple(u, x, pa, 'naive_ot')


def independent_batch(rng, m, observations, prior):
    """Prior draws and data rows paired in draw order"""
    pa, x = _draw_rows(rng, m, observations)
    u = prior.sample(rng, m)
    return PairedBatch(u, x, pa)


def dependence(u, pa):
    """Distance correlation between paired prior draws and parents"""
    return float(dcor.distance_correlation(
        np.asarray(u, dtype=np.float64), np.asarray(pa, dtype=np.float64)))


class BatchBuilder():
    """
    Draws coupled batches for one scheme

    Args:
        scheme: one of :data:`SCHEMES`
        prior: :class:`~cfot.coupling.prior.PriorConfig`
        sampler: online :class:`~cfot.data.ConditionalSampler`
        observations: :class:`Observations` for the dataset schemes and the
            binned Markovian variant
        bin_width: use binned Markovian batches instead of online sampling
    """

    def __init__(self, scheme, prior, sampler=None, observations=None,
                 bin_width=None):
        if scheme not in SCHEMES:
            raise ValueError(
                'Unknown coupling scheme {}, expected one of {}'.format(
                    scheme, SCHEMES))
        if scheme != 'markovian_ot' and observations is None:
            raise ValueError(
                'The {} scheme draws from a dataset, none given'.format(
                    scheme))

        self.scheme = scheme
        self.prior = prior
        self.sampler = sampler
        self.observations = observations
        self.bin_width = bin_width
        self._logger = logging.getLogger(__name__)

        if scheme == 'markovian_ot':
            if bin_width:
                self.sampler = None
            elif sampler is None:
                raise ConditionalSamplingError(
                    'Markovian coupling needs an online sampler or a bin '
                    'width')

    def draw(self, rng, m):
        """
        Returns:
            tuple of :class:`PairedBatch` and :class:`CouplingPlan`
        """
        if self.scheme == 'markovian_ot':
            return markovian_batch(rng, m, self.sampler, self.prior,
                                   self.observations, self.bin_width)
        if self.scheme == 'naive_ot':
            return naive_batch(rng, m, self.observations, self.prior)

        batch = independent_batch(rng, m, self.observations, self.prior)
        identity = np.arange(m)
        return batch, CouplingPlan(
            identity, plan_cost(batch.u, batch.x, identity), 'independent')
