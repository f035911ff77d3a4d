"""
AdamW with decoupled weight decay and an exponential moving average of the
parameters.
"""

from dataclasses import dataclass, replace

import numpy as np

from cfot.nn.network import Params


class NonFiniteGradientError(ValueError):
    """Raised when a gradient contains NaN or infinity; the step is
    rejected and no state is modified."""


@dataclass(frozen=True)
class AdamWState():
    """
    First and second moment accumulators with the optimizer settings

    Args:
        m: first moments, :class:`~cfot.nn.network.Params` shaped
        v: second moments, :class:`~cfot.nn.network.Params` shaped
        step: number of applied updates
        lr: learning rate
        weight_decay: decoupled weight decay
        beta1: first moment decay
        beta2: second moment decay
        eps: denominator guard
    """

    m: Params
    v: Params
    step: int = 0
    lr: float = 1e-4
    weight_decay: float = 1e-4
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    @classmethod
    def init(cls, params, **kwargs):
        return cls(Params.zeros_like(params), Params.zeros_like(params),
                   **kwargs)


def adamw_step(params, grads, state, lr=None):
    """
    One AdamW update

    The decay is applied first, ``theta <- theta * (1 - lr * wd)``, then the
    bias corrected Adam step. Inputs are not modified.

    Args:
        params: :class:`~cfot.nn.network.Params`
        grads: gradients shaped like ``params``
        state: :class:`AdamWState`
        lr: learning rate for this step, defaults to ``state.lr`` (the
            trainer passes the warmed up value)

    Returns:
        tuple of updated params and state
    """

    if params.spec != grads.spec:
        raise ValueError('Gradient spec does not match parameter spec')

    for name, g in grads.items():
        if not np.all(np.isfinite(g)):
            raise NonFiniteGradientError(
                'Non-finite gradient for parameter {}'.format(name))

    lr = state.lr if lr is None else lr
    step = state.step + 1
    b1, b2 = state.beta1, state.beta2

    m = state.m.map(lambda m, g: b1 * m + (1.0 - b1) * g, grads)
    v = state.v.map(lambda v, g: b2 * v + (1.0 - b2) * g * g, grads)
    c1 = 1.0 - b1 ** step
    c2 = 1.0 - b2 ** step

    decay = 1.0 - lr * state.weight_decay
    updated = params.map(
        lambda p, mk, vk: p * decay - lr * (mk / c1) / (
            np.sqrt(vk / c2) + state.eps),
        m, v)

    return updated, replace(state, m=m, v=v, step=step)


@dataclass(frozen=True)
class EmaParams():
    """Shadow copy of the parameters with its decay rate"""

    shadow: Params
    decay: float = 0.9999

    @classmethod
    def init(cls, params, decay=0.9999):
        if not 0.0 <= decay <= 1.0:
            raise ValueError(
                'EMA decay must be in [0, 1], got {}'.format(decay))
        return cls(params.copy(), decay)


def ema_update(ema, params):
    """shadow <- decay * shadow + (1 - decay) * params"""
    d = ema.decay
    shadow = ema.shadow.map(lambda s, p: d * s + (1.0 - d) * p, params)
    return EmaParams(shadow, d)
