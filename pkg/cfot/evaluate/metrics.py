"""
Counterfactual error and soundness metrics.

Every metric accepts either a trained field (wrapped into a
:class:`~cfot.inference.FlowEngine` with the given solver settings) or any
engine with ``abduct``, ``predict`` and ``counterfactual``, for instance the
analytic :class:`~cfot.data.EllipseOracle`.
"""

import logging
from dataclasses import dataclass

import numpy as np

from cfot.data.ellipse import (
    ConditionalSampler,
    EllipseOracle,
    true_counterfactual,
    true_counterfactual_frontdoor,
)
from cfot.evaluate.energy import energy_distance, energy_test
from cfot.inference import CfQuery, as_engine, reverse_cycle
from cfot.utils import TWO_PI

APE_FLOOR = 1e-8

logger = logging.getLogger(__name__)


@dataclass
class EvaluationSet():
    """
    Test observations with their ground-truth counterfactuals

    Args:
        pa: factual parent angles, (n, 1)
        obs: observations, (n, d)
        truth: callable mapping counterfactual angle(s) to the true
            counterfactual outcomes, (n, 2)
        outcome: slice of the observation columns compared to ``truth``
    """

    pa: np.ndarray
    obs: np.ndarray
    truth: object
    outcome: slice = slice(0, 2)

    def __len__(self):
        return self.pa.shape[0]

    @classmethod
    def from_dataset(cls, dataset, split='test', max_samples=None):
        """
        Rows of a :class:`~cfot.data.Dataset` split, the first
        ``max_samples`` of them when given
        """
        pa = dataset.pa(split)
        x = dataset.x(split)
        rows = slice(None) if not max_samples else slice(0, int(max_samples))

        if not dataset.config.frontdoor:
            pa, x = pa[rows], x[rows]
            return cls(pa, x,
                       lambda pa_star: true_counterfactual(pa[:, 0], x,
                                                           pa_star))

        m = dataset.m(split)[rows]
        u = dataset.u(split)[rows]
        eps_m = dataset.eps_m(split)[rows]
        pa, x = pa[rows], x[rows]
        return cls(
            pa, np.concatenate([m, x], axis=1),
            lambda pa_star: true_counterfactual_frontdoor(
                u, eps_m, pa_star)[1],
            slice(2, 4))

    @classmethod
    def mediator_from_dataset(cls, dataset, split='val', max_samples=None):
        """Frontdoor mediator rows (pa, m) with their true counterfactual m"""
        if not dataset.config.frontdoor:
            raise ValueError('Only the frontdoor world has a mediator')
        rows = slice(None) if not max_samples else slice(0, int(max_samples))
        u = dataset.u(split)[rows]
        eps_m = dataset.eps_m(split)[rows]
        return cls(
            dataset.pa(split)[rows], dataset.m(split)[rows],
            lambda pa_star: true_counterfactual_frontdoor(
                u, eps_m, pa_star)[0])


def target_angles(k_angles):
    if int(k_angles) < 1:
        raise ValueError('k_angles must be >= 1, got {}'.format(k_angles))
    return TWO_PI * np.arange(k_angles) / k_angles


def mu_ape(model, eval_set, k_angles, config):
    """
    Mean absolute percentage error of counterfactual predictions

    Each test observation is abducted once and predicted at ``k_angles``
    uniformly spaced target angles. The error is
    ``100 |x_hat - x_true| / max(|x_true|, 1e-8)`` per coordinate, averaged
    over samples, angles and coordinates.

    Returns:
        percentage
    """
    if len(eval_set) == 0:
        raise ValueError('mu_ape needs a non-empty test set')

    engine = as_engine(model, config)
    latent = engine.abduct(eval_set.obs, eval_set.pa)

    errors = []
    for angle in target_angles(k_angles):
        predicted = engine.predict(latent, np.full_like(eval_set.pa, angle))
        predicted = predicted[:, eval_set.outcome]
        truth = eval_set.truth(angle)
        errors.append(100.0 * np.abs(predicted - truth) /
                      np.maximum(np.abs(truth), APE_FLOOR))

    return float(np.mean(errors))


def cf_mae(model, eval_set, k_angles, config):
    """
    Mean absolute counterfactual error over samples, ``k_angles`` target
    angles and coordinates, for outcomes that may cross zero
    """
    engine = as_engine(model, config)
    latent = engine.abduct(eval_set.obs, eval_set.pa)
    errors = [
        np.abs(engine.predict(latent, np.full_like(eval_set.pa, angle))
               [:, eval_set.outcome] - eval_set.truth(angle))
        for angle in target_angles(k_angles)]
    return float(np.mean(errors))


def _l1(a, b):
    return float(np.mean(np.sum(np.abs(a - b), axis=1)))


def composition_mae(model, eval_set, n_cycles, config):
    """
    Mean L1 drift of ``n_cycles`` null interventions T_pa o T_pa^-1
    """
    if int(n_cycles) < 1:
        raise ValueError('n_cycles must be >= 1, got {}'.format(n_cycles))

    engine = as_engine(model, config)
    x = eval_set.obs
    for _ in range(int(n_cycles)):
        x = engine.counterfactual(x, eval_set.pa, eval_set.pa)
    return _l1(x, eval_set.obs)


def path_composition_mae(model, eval_set, config, rng):
    """
    Mean L1 gap between intervening in two steps and in one:
    ``T(pa2, pa1, T(pa1, pa, x))`` against ``T(pa2, pa, x)`` with both
    targets drawn uniformly per sample
    """
    engine = as_engine(model, config)
    n = len(eval_set)
    pa1 = rng.uniform(0.0, TWO_PI, size=(n, 1))
    pa2 = rng.uniform(0.0, TWO_PI, size=(n, 1))

    via = engine.counterfactual(
        engine.counterfactual(eval_set.obs, eval_set.pa, pa1), pa1, pa2)
    direct = engine.counterfactual(eval_set.obs, eval_set.pa, pa2)
    return _l1(via, direct)


def reversibility_mae(model, eval_set, n_cycles, config, rng):
    """
    Mean L1 distance between the observation and ``n_cycles`` intervention
    round trips to a uniformly drawn target angle
    """
    pa_star = rng.uniform(0.0, TWO_PI, size=eval_set.pa.shape)
    query = CfQuery(eval_set.obs, eval_set.pa, pa_star)
    x_r = reverse_cycle(as_engine(model, config), query, n_cycles, config)
    return _l1(x_r, eval_set.obs)


def monotonicity_violation_rate(model, sampler, n_pairs, config, rng):
    """
    Fraction of probe pairs on which the counterfactual map fails to be
    strictly monotone

    Pairs (x1, x2) are drawn at a shared factual angle from ``sampler`` and
    mapped to a shared uniform target angle; a pair violates monotonicity
    when ``<T(x1) - T(x2), x1 - x2> <= 0``.
    """
    if int(n_pairs) < 1:
        raise ValueError(
            'Monotonicity probe needs n_pairs >= 1, got {}'.format(n_pairs))

    engine = as_engine(model, config)
    pa = sampler.sample_parents(rng, n_pairs)
    x1 = sampler.sample_conditional(rng, pa, n_pairs)
    x2 = sampler.sample_conditional(rng, pa, n_pairs)
    pa_star = sampler.sample_intervention_parents(rng, n_pairs)

    t1 = engine.counterfactual(x1, pa, pa_star)
    t2 = engine.counterfactual(x2, pa, pa_star)
    inner = np.sum((t1 - t2) * (x1 - x2), axis=1)
    return float(np.mean(inner <= 0.0))


def oracle_monotonicity_rate(dgp_config, n_pairs, rng):
    """Violation rate of the true counterfactual map"""
    return monotonicity_violation_rate(
        EllipseOracle(dgp_config), ConditionalSampler(dgp_config), n_pairs,
        None, rng)


def _pushforward_samples(model, sampler, prior, pa, n, config, rng):
    engine = as_engine(model, config)
    pa = np.tile(np.asarray(pa, dtype=np.float64).reshape(1, -1), (n, 1))
    pushed = engine.predict(prior.sample(rng, n), pa)
    target = sampler.sample_conditional(rng, pa, n)
    return pushed, target


def pushforward_distance(model, sampler, prior, pa, n, config, rng):
    """
    Energy distance between ``n`` prior draws pushed through the flow at
    ``pa`` and ``n`` fresh conditional draws of the world at ``pa``
    """
    return energy_distance(
        *_pushforward_samples(model, sampler, prior, pa, n, config, rng))


def pushforward_test(model, sampler, prior, pa, n, config, rng,
                     num_resamples=1000):
    """Permutation energy test of the push-forward at ``pa``"""
    pushed, target = _pushforward_samples(
        model, sampler, prior, pa, n, config, rng)
    return energy_test(pushed, target, num_resamples, rng)
