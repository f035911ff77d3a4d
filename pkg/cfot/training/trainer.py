"""
Flow matching on coupled batches.

Each step draws a coupled batch, one time per pair, regresses the field at
``x_t = (1 - t) u + t x`` onto the straight-line velocity ``x - u`` and
takes an AdamW step with a linearly warmed up learning rate. Every
``eval_every`` steps a candidate is scored and the best one kept: the raw
parameters by their validation counterfactual error, or the EMA parameters
by their flow matching loss on fixed validation batches.
"""

import logging
import os
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from cfot.field import FieldDivergedError, save_field
from cfot.inference.ode import IntegrationError
from cfot.nn import (
    AdamWState,
    EmaParams,
    NonFiniteGradientError,
    adamw_step,
    ema_update,
)
from cfot.utils import STREAMS, stream_rng

SELECTIONS = ('val_mu_ape', 'ema_loss')
LOG_COLUMNS = ['step', 'loss', 'val_mu_ape', 'ema_loss', 'coupling_cost',
               'lr']


class NonFiniteLossError(RuntimeError):
    """
    Attributes:
        index: first pair of the batch with a non-finite loss
    """

    def __init__(self, index):
        self.index = index
        super().__init__(
            'Non-finite flow matching loss at batch pair {}'.format(index))


class TrainingDivergedError(RuntimeError):
    """
    Attributes:
        step: the step that diverged
        checkpoint: :class:`TrainedModel` as of the last completed
            evaluation
    """

    def __init__(self, step, checkpoint):
        self.step = step
        self.checkpoint = checkpoint
        super().__init__(
            'Training diverged at step {}, last good checkpoint from step '
            '{}'.format(step, checkpoint.step))


@dataclass(frozen=True)
class TrainConfig():
    """
    Args:
        steps: optimisation steps, 0 returns the initialisation
        batch: pairs per batch
        lr, weight_decay, beta1, beta2, eps: AdamW settings
        warmup_steps: steps of linear learning rate warmup
        scheme: coupling scheme
        seed: run seed
        eval_every: steps between evaluations
        nfe_eval: Euler steps of the validation counterfactuals
        val_k_angles: target angles of the validation error
        val_max_samples: cap on validation rows
        ema_decay: parameter EMA rate
        val_batches: fixed validation batches of the ``ema_loss`` selection
        selection: ``val_mu_ape`` or ``ema_loss``
        bin_width: parent bin width of the fixed-dataset Markovian coupling
    """

    steps: int = 50000
    batch: int = 256
    lr: float = 1e-4
    weight_decay: float = 1e-4
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    warmup_steps: int = 2000
    scheme: str = 'markovian_ot'
    seed: int = 0
    eval_every: int = 1000
    nfe_eval: int = 50
    val_k_angles: int = 8
    val_max_samples: int = 256
    ema_decay: float = 0.9999
    val_batches: int = 8
    selection: str = 'val_mu_ape'
    bin_width: float = None

    def __post_init__(self):
        if self.steps < 0 or self.warmup_steps < 0:
            raise ValueError('steps and warmup_steps must be >= 0')
        if self.steps > 0 and not self.steps > self.warmup_steps:
            raise ValueError(
                'steps ({}) must exceed warmup_steps ({})'.format(
                    self.steps, self.warmup_steps))
        if self.batch < 1:
            raise ValueError('batch must be >= 1, got {}'.format(self.batch))
        if self.eval_every < 1:
            raise ValueError(
                'eval_every must be >= 1, got {}'.format(self.eval_every))
        if self.val_batches < 1:
            raise ValueError(
                'val_batches must be >= 1, got {}'.format(self.val_batches))
        if self.selection not in SELECTIONS:
            raise ValueError(
                'Unknown selection {}, expected one of {}'.format(
                    self.selection, SELECTIONS))

    def learning_rate(self, step):
        """Linear warmup to ``lr`` over ``warmup_steps``"""
        if self.warmup_steps == 0:
            return self.lr
        return self.lr * min(1.0, step / self.warmup_steps)


@dataclass
class TrainedModel():
    """
    Args:
        model: the field the run started from, carrying kind and dims
        best: parameters with the best selection score, the EMA
            parameters under the ``ema_loss`` selection
        final: parameters after the last step
        ema: EMA parameters after the last step
        log: evaluation rows with :data:`LOG_COLUMNS`
        loss_history: training loss of every step
        best_score: selection score of ``best``
        step: last completed step
    """

    model: object
    best: object
    final: object
    ema: object
    log: pd.DataFrame = field(
        default_factory=lambda: pd.DataFrame(columns=LOG_COLUMNS))
    loss_history: np.ndarray = field(default_factory=lambda: np.zeros(0))
    best_score: float = np.inf
    step: int = 0

    def vector_field(self, which='best'):
        """The trained :class:`~cfot.field.VectorFieldModel`"""
        if which not in ('best', 'final', 'ema'):
            raise ValueError('Unknown parameter set {}'.format(which))
        return self.model.with_params(getattr(self, which))

    def save(self, out_dir, stem):
        """
        Write ``<stem>.ckpt.best``, ``.final``, ``.ema`` and the training
        log ``<stem>_log.csv``

        Returns:
            dict of artifact name to path
        """
        paths = {}
        for which in ('best', 'final', 'ema'):
            path = os.path.join(out_dir, '{}.ckpt.{}'.format(stem, which))
            save_field(self.vector_field(which), path)
            paths['{}_{}'.format(stem, which)] = path

        path = os.path.join(out_dir, '{}_log.csv'.format(stem))
        self.log.to_csv(path, index=False, float_format='%.17g')
        paths['{}_log'.format(stem)] = path
        return paths


def fm_loss(model, batch, t_draws):
    """
    Flow matching loss of a coupled batch

    loss = mean_i || v((1 - t_i) u_i + t_i x_i; pa_i, t_i) - (x_i - u_i) ||^2

    Args:
        model: :class:`~cfot.field.VectorFieldModel`
        batch: :class:`~cfot.coupling.PairedBatch`
        t_draws: one time in [0, 1] per pair

    Returns:
        tuple of the scalar loss and its parameter gradients
    """
    if len(batch) == 0:
        raise ValueError('Flow matching needs a non-empty batch')
    t = np.asarray(t_draws, dtype=np.float64).reshape(-1, 1)
    if t.shape[0] != len(batch):
        raise ValueError('Need one time per pair')
    if np.any(t < 0.0) or np.any(t > 1.0):
        raise ValueError('Times must lie in [0, 1]')

    xt = (1.0 - t) * batch.u + t * batch.x
    target = batch.x - batch.u
    per_pair, grads = model.regression(xt, batch.pa, t[:, 0], target)

    bad = np.flatnonzero(~np.isfinite(per_pair))
    if bad.size:
        raise NonFiniteLossError(int(bad[0]))
    return float(np.mean(per_pair)), grads


def draw_validation_batches(builder, config, stage=0):
    """
    Coupled batches and times that score the EMA parameters, drawn once per
    run from their own random stream

    Returns:
        list of (:class:`~cfot.coupling.PairedBatch`, times) tuples
    """
    rng = stream_rng(config.seed, STREAMS['validation'], stage)
    batches = []
    for _ in range(config.val_batches):
        batch, _ = builder.draw(rng, config.batch)
        batches.append((batch, rng.uniform(0.0, 1.0, size=len(batch))))
    return batches


def validation_loss(model, batches):
    """Flow matching loss of a field over fixed batches, forward pass only"""
    losses = []
    for batch, t in batches:
        s = t[:, None]
        xt = (1.0 - s) * batch.u + s * batch.x
        v = model(xt, batch.pa, t)
        losses.append(np.mean(np.sum(np.square(v - (batch.x - batch.u)),
                                     axis=1)))
    return float(np.mean(losses))


def train(config, builder, model, validate=None, stage=0, val_builder=None):
    """
    Train a field by flow matching

    Args:
        config: :class:`TrainConfig`
        builder: :class:`~cfot.coupling.BatchBuilder` for the scheme
        model: initial :class:`~cfot.field.VectorFieldModel`
        validate: callable scoring a field, lower is better; required for
            the ``val_mu_ape`` selection
        stage: index separating the random streams of several flows trained
            under one seed
        val_builder: :class:`~cfot.coupling.BatchBuilder` on held out data
            for the validation loss of the EMA parameters; required for the
            ``ema_loss`` selection

    Returns:
        :class:`TrainedModel`
    """
    log = logging.getLogger(__name__)
    if config.selection == 'val_mu_ape' and validate is None and \
            config.steps > 0:
        raise ValueError('val_mu_ape selection needs a validation function')
    if config.selection == 'ema_loss' and val_builder is None and \
            config.steps > 0:
        raise ValueError('ema_loss selection needs a validation builder')

    params = model.params
    result = TrainedModel(model, params, params, params)
    if config.steps == 0:
        log.info('steps=0, returning the initial parameters')
        return result

    rng_batches = stream_rng(config.seed, STREAMS['batches'], stage)
    rng_times = stream_rng(config.seed, STREAMS['times'], stage)

    state = AdamWState.init(
        params, lr=config.lr, weight_decay=config.weight_decay,
        beta1=config.beta1, beta2=config.beta2, eps=config.eps)
    ema = EmaParams.init(params, config.ema_decay)
    val_batches = None
    if val_builder is not None:
        val_batches = draw_validation_batches(val_builder, config, stage)

    losses = np.zeros(config.steps)
    rows = []
    window_cost = []
    last = 0

    log.info('Training {} field for {} steps with the {} coupling'.format(
        model.kind, config.steps, builder.scheme))

    for step in range(1, config.steps + 1):
        batch, plan = builder.draw(rng_batches, config.batch)
        t = rng_times.uniform(0.0, 1.0, size=len(batch))
        lr = config.learning_rate(step)

        try:
            loss, grads = fm_loss(model.with_params(params), batch, t)
            params, state = adamw_step(params, grads, state, lr=lr)
        except (NonFiniteLossError, NonFiniteGradientError) as e:
            log.error('Step {}: {}'.format(step, e))
            raise TrainingDivergedError(step, result) from e

        ema = ema_update(ema, params)
        losses[step - 1] = loss
        window_cost.append(plan.cost / len(batch))
        log.debug('step={} loss={:.6g} lr={:.3g}'.format(step, loss, lr))

        if step % config.eval_every != 0 and step != config.steps:
            continue

        val = np.nan
        ema_val = np.nan
        try:
            if validate is not None:
                val = float(validate(model.with_params(params)))
            if val_batches is not None:
                ema_val = validation_loss(model.with_params(ema.shadow),
                                          val_batches)
        except (IntegrationError, FieldDivergedError) as e:
            log.error('Validation at step {} failed: {}'.format(step, e))
            raise TrainingDivergedError(step, result) from e

        if config.selection == 'val_mu_ape':
            score, candidate = val, params
        else:
            score, candidate = ema_val, ema.shadow

        rows.append({
            'step': step,
            'loss': float(np.mean(losses[last:step])),
            'val_mu_ape': val,
            'ema_loss': ema_val,
            'coupling_cost': float(np.mean(window_cost)),
            'lr': lr,
        })
        last = step
        window_cost = []

        best, best_score = result.best, result.best_score
        if score < best_score:
            best, best_score = candidate, score

        result = TrainedModel(
            model, best, params, ema.shadow,
            pd.DataFrame(rows, columns=LOG_COLUMNS), losses[:step].copy(),
            best_score, step)

        log.info(
            'step={} loss={:.6g} val_mu_ape={:.4f} ema_loss={:.6g} '
            'best={:.6g}'.format(step, rows[-1]['loss'], val, ema_val,
                                 best_score))

    return result
