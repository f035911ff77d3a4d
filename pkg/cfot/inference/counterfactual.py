"""
Counterfactual inference with trained flows: abduction by integrating the
flow backwards from the observation to the exogenous prior, prediction by
integrating forwards from there under the intervened parents.

Engines share one interface with the analytic
:class:`~cfot.data.ellipse.EllipseOracle` so the metrics can run on either:

* ``abduct(obs, pa) -> latent``
* ``predict(latent, pa_star) -> obs``
* ``counterfactual(obs, pa, pa_star) -> obs``
"""

from dataclasses import dataclass, replace

import numpy as np

from cfot.inference.ode import integrate


@dataclass(frozen=True)
class CfQuery():
    """
    Args:
        x: observation, (d,) or (n, d)
        pa: factual parents
        pa_star: counterfactual parents
    """

    x: np.ndarray
    pa: np.ndarray
    pa_star: np.ndarray


def _leg(config, direction):
    return replace(config, direction=direction)


def abduct(model, x, pa, config):
    """u: integrate backwards from ``x`` at t=1 to t=0 under ``pa``"""
    return integrate(model, x, pa, _leg(config, 'backward'))


def predict(model, u, pa_star, config):
    """x*: integrate forwards from ``u`` at t=0 to t=1 under ``pa_star``"""
    return integrate(model, u, pa_star, _leg(config, 'forward'))


class FlowEngine():
    """
    Counterfactual engine of a single conditional flow

    Args:
        model: field callable, usually a
            :class:`~cfot.field.VectorFieldModel`
        config: :class:`~cfot.inference.ode.OdeConfig` shared by both legs
    """

    def __init__(self, model, config):
        self.model = model
        self.config = config

    def abduct(self, obs, pa):
        return abduct(self.model, obs, pa, self.config)

    def predict(self, u, pa_star):
        return predict(self.model, u, pa_star, self.config)

    def counterfactual(self, obs, pa, pa_star):
        return self.predict(self.abduct(obs, pa), pa_star)


class FrontdoorEngine():
    """
    Two stage engine for the frontdoor graph pa -> m -> x

    Observations are rows ``(m0, m1, x0, x1)`` and latents ``(w, u)`` with
    ``w`` the mediator noise and ``u`` the outcome noise.

    Args:
        mediator_model: flow of m given pa
        outcome_model: flow of x given m
        config: :class:`~cfot.inference.ode.OdeConfig` shared by all legs
    """

    def __init__(self, mediator_model, outcome_model, config):
        self.mediator = FlowEngine(mediator_model, config)
        self.outcome = FlowEngine(outcome_model, config)
        self.config = config

    @staticmethod
    def _split(rows):
        rows = np.atleast_2d(rows)
        return rows[:, :2], rows[:, 2:]

    def abduct(self, obs, pa):
        squeeze = np.ndim(obs) == 1
        m, x = self._split(obs)
        w = self.mediator.abduct(m, pa)
        u = self.outcome.abduct(x, m)
        latent = np.concatenate([w, u], axis=1)
        return latent[0] if squeeze else latent

    def predict(self, latent, pa_star):
        squeeze = np.ndim(latent) == 1
        w, u = self._split(latent)
        m_star = self.mediator.predict(w, pa_star)
        x_star = self.outcome.predict(u, m_star)
        obs = np.concatenate([m_star, x_star], axis=1)
        return obs[0] if squeeze else obs

    def counterfactual(self, obs, pa, pa_star):
        return self.predict(self.abduct(obs, pa), pa_star)


def as_engine(model, config):
    """Engines pass through, bare fields are wrapped in a
    :class:`FlowEngine`"""
    if hasattr(model, 'counterfactual'):
        return model
    return FlowEngine(model, config)


def counterfactual(model, query, config):
    """T*(pa*, pa, x) = predict(abduct(x, pa), pa*) with shared solver
    settings"""
    return as_engine(model, config).counterfactual(
        query.x, query.pa, query.pa_star)


def reverse_cycle(model, query, n_cycles, config):
    """
    Apply the intervention and its reversal ``n_cycles`` times

    Each cycle maps the factual point to the counterfactual world of
    ``pa_star`` and back to ``pa``; the final factual-side point is returned.
    """
    if int(n_cycles) < 1:
        raise ValueError('n_cycles must be >= 1, got {}'.format(n_cycles))

    engine = as_engine(model, config)
    x = np.array(query.x, dtype=np.float64)
    for _ in range(int(n_cycles)):
        x_star = engine.counterfactual(x, query.pa, query.pa_star)
        x = engine.counterfactual(x_star, query.pa_star, query.pa)
    return x


def frontdoor_counterfactual(mediator_model, outcome_model, pa, m, x, pa_star,
                             config):
    """
    Frontdoor counterfactual through the mediator

    w = abduct(m | pa), u = abduct(x | m), m* = predict(w | pa*),
    x* = predict(u | m*)

    Returns:
        tuple of the counterfactual mediator and outcome
    """
    engine = FrontdoorEngine(mediator_model, outcome_model, config)
    obs = np.concatenate([np.atleast_2d(m), np.atleast_2d(x)], axis=1)
    out = engine.counterfactual(obs, pa, pa_star)
    if np.ndim(x) == 1:
        out = out[0]
    return out[..., :2], out[..., 2:]

