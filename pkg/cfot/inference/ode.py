"""
Fixed step and adaptive integration of the flow ODE dx/dt = v_t(x; pa).

Backward integration from t=1 to t=0 is forward integration of the negated
field in the reversed time s = 1 - t, so every solver has one code path.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from cfot.field import FieldDivergedError

SOLVERS = ('euler', 'rk4', 'adaptive_rk45')
DIRECTIONS = ('forward', 'backward')

logger = logging.getLogger(__name__)


class IntegrationError(RuntimeError):
    """
    Raised when the state becomes non-finite during integration

    Attributes:
        step: index of the step (field evaluation for the adaptive solver)
            that produced the non-finite state
    """

    def __init__(self, step, message=None):
        self.step = step
        super().__init__(
            message or 'Non-finite state at integration step {}'.format(step))


@dataclass(frozen=True)
class OdeConfig():
    """
    Args:
        solver: ``euler``, ``rk4`` or ``adaptive_rk45``
        nfe: field evaluations per leg for the fixed step solvers; rk4 takes
            ``nfe // 4`` steps and needs a multiple of 4
        rtol: relative tolerance of the adaptive solver
        atol: absolute tolerance of the adaptive solver
        direction: ``forward`` (t: 0 -> 1) or ``backward`` (t: 1 -> 0)
    """

    solver: str = 'euler'
    nfe: int = 50
    rtol: float = 1e-5
    atol: float = 1e-5
    direction: str = 'forward'

    def __post_init__(self):
        if self.solver not in SOLVERS:
            raise ValueError(
                'Unknown ODE solver {}, expected one of {}'.format(
                    self.solver, SOLVERS))
        if self.direction not in DIRECTIONS:
            raise ValueError(
                'Unknown direction {}, expected one of {}'.format(
                    self.direction, DIRECTIONS))
        if self.solver != 'adaptive_rk45' and int(self.nfe) < 1:
            raise ValueError('nfe must be >= 1, got {}'.format(self.nfe))
        if self.solver == 'rk4' and int(self.nfe) % 4 != 0:
            raise ValueError(
                'rk4 takes 4 field evaluations per step, nfe must be a '
                'multiple of 4, got {}'.format(self.nfe))
        if self.solver == 'adaptive_rk45' and not (
                self.rtol > 0 and self.atol > 0):
            raise ValueError(
                'Adaptive tolerances must be > 0, got rtol={} atol={}'.format(
                    self.rtol, self.atol))


def _oriented(field, pa, direction):
    sign = 1.0 if direction == 'forward' else -1.0

    def f(x, s, step):
        t = s if sign > 0 else 1.0 - s
        try:
            return sign * np.asarray(field(x, pa, t), dtype=np.float64)
        except FieldDivergedError as e:
            raise IntegrationError(step, str(e)) from e
    return f


def _check(x, step):
    if not np.all(np.isfinite(x)):
        raise IntegrationError(step)


def _euler(f, x, nfe):
    h = 1.0 / nfe
    for k in range(nfe):
        x = x + h * f(x, k * h, k)
        _check(x, k)
    return x


def _rk4(f, x, nfe):
    steps = nfe // 4
    h = 1.0 / steps
    for k in range(steps):
        s = k * h
        k1 = f(x, s, k)
        k2 = f(x + 0.5 * h * k1, s + 0.5 * h, k)
        k3 = f(x + 0.5 * h * k2, s + 0.5 * h, k)
        k4 = f(x + h * k3, s + h, k)
        x = x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        _check(x, k)
    return x


def _adaptive(f, x, rtol, atol):
    shape = x.shape
    count = [0]

    def rhs(s, y):
        count[0] += 1
        v = f(y.reshape(shape), s, count[0])
        _check(v, count[0])
        return v.ravel()

    sol = solve_ivp(rhs, (0.0, 1.0), x.ravel(), method='RK45', rtol=rtol,
                    atol=atol)
    if not sol.success:
        raise IntegrationError(count[0], sol.message)
    x = sol.y[:, -1].reshape(shape)
    _check(x, count[0])
    return x


def integrate(model, x0, pa, config):
    """
    Integrate the flow of ``model`` over one leg

    Args:
        model: field callable ``(x, pa, t) -> v``
        x0: initial state(s), (d,) or (n, d)
        pa: conditioning parent value(s)
        config: :class:`OdeConfig`

    Returns:
        final state(s) with the shape of ``x0``
    """
    x = np.array(x0, dtype=np.float64)
    _check(x, 0)
    f = _oriented(model, pa, config.direction)

    if config.solver == 'euler':
        return _euler(f, x, int(config.nfe))
    if config.solver == 'rk4':
        return _rk4(f, x, int(config.nfe))
    return _adaptive(f, x, config.rtol, config.atol)
