"""
Metric rows of evaluated models and their aggregation across seeds.
"""

import logging
import os
from dataclasses import asdict, dataclass, fields

import numpy as np
import pandas as pd

from cfot.evaluate.metrics import (
    composition_mae,
    monotonicity_violation_rate,
    mu_ape,
    path_composition_mae,
    pushforward_distance,
    reversibility_mae,
)
from cfot.inference import as_engine

METRICS = (
    'mu_ape_percent',
    'composition_mae',
    'path_composition_mae',
    'reversibility_mae',
    'monotonicity_violation_rate',
    'pushforward_energy_distance',
)
GROUP_KEYS = ['graph_variant', 'prior_variant', 'scheme', 'model_kind',
              'nfe']
# evaluation settings that must agree within an aggregated group
SETTING_KEYS = ['k_angles', 'n_cycles', 'solver']

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EvalConfig():
    """
    Settings of one evaluation pass

    Args:
        nfe: field evaluations per leg for each evaluation
        k_angles: target angles per test sample for mu_ape
        n_cycles: cycles of the composition and reversibility metrics
        n_pairs: monotonicity probe pairs
        pushforward_n: samples per push-forward comparison
        pushforward_draws: parent values the push-forward is averaged over
        num_resamples: permutations of the energy test
        max_samples: cap on the test rows used, None for all
    """

    nfe: tuple = (2, 10, 50)
    k_angles: int = 100
    n_cycles: int = 20
    n_pairs: int = 10000
    pushforward_n: int = 1000
    pushforward_draws: int = 10
    num_resamples: int = 1000
    max_samples: int = None

    def __post_init__(self):
        if len(self.nfe) == 0:
            raise ValueError('The nfe list must not be empty')
        for name in ('k_angles', 'n_cycles', 'n_pairs', 'pushforward_n',
                     'pushforward_draws'):
            if int(getattr(self, name)) < 1:
                raise ValueError('{} must be >= 1, got {}'.format(
                    name, getattr(self, name)))


@dataclass(frozen=True)
class MetricsReport():
    """One evaluated (scheme, model kind, nfe, seed) combination"""

    mu_ape_percent: float
    composition_mae: float
    path_composition_mae: float
    reversibility_mae: float
    monotonicity_violation_rate: float
    pushforward_energy_distance: float
    nfe: int
    scheme: str
    model_kind: str
    graph_variant: str
    prior_variant: str
    seed: int
    k_angles: int
    n_cycles: int
    solver: str

    def __post_init__(self):
        for name in METRICS:
            value = getattr(self, name)
            if not value >= 0.0:
                raise ValueError(
                    'Metric {} must be nonnegative, got {}'.format(
                        name, value))
        if self.monotonicity_violation_rate > 1.0:
            raise ValueError('Violation rate above 1')

    def to_row(self):
        return asdict(self)


def evaluate_model(model, eval_set, sampler, prior, eval_config, ode_config,
                   rng, **labels):
    """
    Compute every metric of one model at one solver setting

    Args:
        model: trained field or engine
        eval_set: :class:`~cfot.evaluate.metrics.EvaluationSet`
        sampler: :class:`~cfot.data.ConditionalSampler` matching the
            engine's observations
        prior: prior of the engine's latent
        eval_config: :class:`EvalConfig`
        ode_config: :class:`~cfot.inference.OdeConfig`
        rng: numpy Generator for the randomised metrics
        labels: scheme, model_kind, graph_variant, prior_variant and seed

    Returns:
        :class:`MetricsReport`
    """
    engine = as_engine(model, ode_config)

    ape = mu_ape(engine, eval_set, eval_config.k_angles, ode_config)
    composition = composition_mae(
        engine, eval_set, eval_config.n_cycles, ode_config)
    path = path_composition_mae(engine, eval_set, ode_config, rng)
    reversibility = reversibility_mae(
        engine, eval_set, eval_config.n_cycles, ode_config, rng)
    violations = monotonicity_violation_rate(
        engine, sampler, eval_config.n_pairs, ode_config, rng)

    parents = sampler.sample_parents(rng, eval_config.pushforward_draws)
    pushforward = float(np.mean([
        pushforward_distance(engine, sampler, prior, pa,
                             eval_config.pushforward_n, ode_config, rng)
        for pa in parents]))

    report = MetricsReport(
        mu_ape_percent=ape,
        composition_mae=composition,
        path_composition_mae=path,
        reversibility_mae=reversibility,
        monotonicity_violation_rate=violations,
        pushforward_energy_distance=pushforward,
        nfe=int(ode_config.nfe),
        k_angles=int(eval_config.k_angles),
        n_cycles=int(eval_config.n_cycles),
        solver=ode_config.solver,
        **labels)

    logger.info(
        'scheme={} kind={} nfe={} seed={}: mu_ape={:.4f}% '
        'composition={:.4g} reversibility={:.4g} violations={:.4f}'.format(
            report.scheme, report.model_kind, report.nfe, report.seed,
            report.mu_ape_percent, report.composition_mae,
            report.reversibility_mae, report.monotonicity_violation_rate))
    return report


def reports_frame(reports):
    columns = [f.name for f in fields(MetricsReport)]
    return pd.DataFrame([r.to_row() for r in reports], columns=columns)


def write_reports(reports, path):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    reports_frame(reports).to_csv(path, index=False, float_format='%.17g')


def read_reports(path):
    return pd.read_csv(path, float_precision='round_trip')


def aggregate(frame):
    """
    Mean and population standard deviation of every metric per
    (graph_variant, prior_variant, scheme, model_kind, nfe), so runs of
    different worlds or priors never share a row

    Args:
        frame: metric rows as written by :func:`write_reports`

    Returns:
        DataFrame with ``<metric>_mean`` and ``<metric>_std`` columns and a
        ``n_seeds`` count
    """
    if len(frame) == 0:
        raise ValueError('No metric rows to aggregate')

    grouped = frame.groupby(GROUP_KEYS, sort=True)
    for key, group in grouped:
        for setting in SETTING_KEYS:
            if group[setting].nunique() > 1:
                raise ValueError(
                    'Cannot aggregate {}: rows disagree on eval '
                    'setting {}'.format(dict(zip(GROUP_KEYS, key)), setting))

    table = grouped[list(METRICS)].agg(
        [('mean', 'mean'), ('std', lambda s: float(np.std(s, ddof=0)))])
    table.columns = ['{}_{}'.format(m, stat) for m, stat in table.columns]
    table['n_seeds'] = grouped.size()
    return table.reset_index()
