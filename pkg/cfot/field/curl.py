"""
Finite-difference curl diagnostics of two-dimensional vector fields.
"""

import logging
import os
from dataclasses import dataclass

import numpy as np
import pandas as pd

# safety factor on the truncation estimate of the noise floor
NOISE_FLOOR_SAFETY = 4.0
# relative round-off of one field evaluation
FIELD_ROUNDOFF = 1e-10

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GridSpec():
    """
    Rectangular lattice over (x0, x1)

    Args:
        x0_min, x0_max: bounds of the first axis
        x1_min, x1_max: bounds of the second axis
        n0, n1: number of points per axis, at least 3
    """

    x0_min: float
    x0_max: float
    x1_min: float
    x1_max: float
    n0: int = 50
    n1: int = 50

    def __post_init__(self):
        if self.n0 < 3 or self.n1 < 3:
            raise ValueError(
                'Curl grid needs at least 3 points per axis, got {}x{}'.format(
                    self.n0, self.n1))
        if not (self.x0_max > self.x0_min and self.x1_max > self.x1_min):
            raise ValueError(
                'Curl grid bounds must be strictly increasing, got '
                '[{}, {}] x [{}, {}]'.format(self.x0_min, self.x0_max,
                                             self.x1_min, self.x1_max))

    @classmethod
    def around(cls, points, n=50, pad=0.1):
        """Grid covering ``points`` with a relative padding"""
        lo = np.min(points, axis=0)
        hi = np.max(points, axis=0)
        margin = pad * np.maximum(hi - lo, 1e-6)
        lo = lo - margin
        hi = hi + margin
        return cls(float(lo[0]), float(hi[0]), float(lo[1]), float(hi[1]),
                   n, n)

    @property
    def axes(self):
        return (np.linspace(self.x0_min, self.x0_max, self.n0),
                np.linspace(self.x1_min, self.x1_max, self.n1))

    @property
    def spacing(self):
        a0, a1 = self.axes
        return a0[1] - a0[0], a1[1] - a1[0]

    def points(self):
        """Lattice points, (n0 * n1, 2) in row major (x0, x1) order"""
        g0, g1 = np.meshgrid(*self.axes, indexing='ij')
        return np.stack([g0.ravel(), g1.ravel()], axis=1)


@dataclass
class CurlMap():
    """Curl values on a :class:`GridSpec` at time ``t`` and parent ``pa``"""

    grid: GridSpec
    values: np.ndarray
    t: float
    pa: np.ndarray

    def __post_init__(self):
        if not np.all(np.isfinite(self.values)):
            raise ValueError('Curl map contains non-finite values')

    @property
    def max_abs(self):
        return float(np.max(np.abs(self.values)))

    def to_frame(self):
        p = self.grid.points()
        return pd.DataFrame({
            'x0': p[:, 0], 'x1': p[:, 1], 'curl': self.values.ravel()})

    def to_csv(self, path):
        """
        Write ``x0,x1,curl`` rows to ``path`` and the grid header to
        ``<stem>.hdr``
        """
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        self.to_frame().to_csv(path, index=False, float_format='%.17g')

        h0, h1 = self.grid.spacing
        header = [
            ('t', repr(float(self.t))),
            ('pa', ','.join(repr(float(p)) for p in np.ravel(self.pa))),
            ('x0_min', repr(self.grid.x0_min)),
            ('x0_max', repr(self.grid.x0_max)),
            ('x1_min', repr(self.grid.x1_min)),
            ('x1_max', repr(self.grid.x1_max)),
            ('n0', self.grid.n0),
            ('n1', self.grid.n1),
            ('h0', repr(float(h0))),
            ('h1', repr(float(h1))),
        ]
        with open(os.path.splitext(path)[0] + '.hdr', 'w') as f:
            for key, value in header:
                f.write('{}={}\n'.format(key, value))

        logger.debug('Wrote curl map {}'.format(path))


def _field_on_grid(evaluator, grid, pa, t):
    v = np.asarray(evaluator(grid.points(), pa, t), dtype=np.float64)
    if v.shape != (grid.n0 * grid.n1, 2):
        raise ValueError('Curl is only defined for two-dimensional fields')
    return v.reshape(grid.n0, grid.n1, 2)


def curl(evaluator, grid, pa, t):
    """
    Scalar curl dv1/dx0 - dv0/dx1 of a field on a grid

    Central differences inside the grid, second order one-sided differences
    on the boundary.

    Args:
        evaluator: callable ``(x, pa, t) -> v`` on (n, 2) states, for
            instance a :class:`~cfot.field.vector_field.VectorFieldModel`
        grid: :class:`GridSpec`
        pa: parent value
        t: time

    Returns:
        :class:`CurlMap`
    """
    v = _field_on_grid(evaluator, grid, pa, t)
    h0, h1 = grid.spacing
    dv1_dx0 = np.gradient(v[..., 1], h0, axis=0, edge_order=2)
    dv0_dx1 = np.gradient(v[..., 0], h1, axis=1, edge_order=2)
    return CurlMap(grid, dv1_dx0 - dv0_dx1, float(t),
                   np.atleast_1d(np.asarray(pa, dtype=np.float64)))


def curl_noise_floor(evaluator, grid, pa, t):
    """
    Largest curl the finite-difference scheme can report for a curl free
    field on ``grid``

    The truncation error of the second order differences is bounded by
    h^2 / 3 times the third derivative of the differentiated component,
    estimated on the grid itself, plus a round-off term that scales with the
    field magnitude over the grid spacing.
    """
    v = _field_on_grid(evaluator, grid, pa, t)
    h0, h1 = grid.spacing

    def third(f, h, axis):
        for _ in range(3):
            f = np.gradient(f, h, axis=axis, edge_order=2)
        return np.max(np.abs(f))

    truncation = (h0 ** 2 * third(v[..., 1], h0, 0) +
                  h1 ** 2 * third(v[..., 0], h1, 1)) / 3.0
    roundoff = FIELD_ROUNDOFF * np.max(np.abs(v)) / min(h0, h1)
    return float(NOISE_FLOOR_SAFETY * truncation + roundoff)
