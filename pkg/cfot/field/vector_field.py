"""
Conditional velocity fields v_t(x; pa) parameterised by the residual network.

Two kinds are supported:

* ``direct``: the network output on ``concat(x, pa, t)`` is the velocity
* ``energy``: the velocity is the input gradient of the scalar energy
  E(x, pa, t), the mean of the network output, so the field is curl free
"""

from collections import OrderedDict

import numpy as np

from cfot.nn import checkpoint
from cfot.nn import tape as T
from cfot.nn.network import (
    NetworkSpec,
    Params,
    backward_input,
    backward_params,
    forward,
    trace,
)


class FieldDivergedError(RuntimeError):
    """Raised when the field evaluates to NaN or infinity"""


class VectorFieldModel():
    """
    A velocity field over ``x_dim`` coordinates conditioned on ``pa_dim``
    parent values and time

    Args:
        kind: ``direct`` or ``energy``
        params: :class:`~cfot.nn.network.Params`
        x_dim: dimension of the state
        pa_dim: number of parent values
        periodic_pa: encode each parent angle as (sin pa, cos pa)
    """

    KINDS = ('direct', 'energy')

    def __init__(self, kind, params, x_dim=2, pa_dim=1, periodic_pa=False):
        if kind not in self.KINDS:
            raise ValueError(
                'Unknown field kind {}, expected one of {}'.format(
                    kind, self.KINDS))

        self.kind = kind
        self.params = params
        self.x_dim = int(x_dim)
        self.pa_dim = int(pa_dim)
        self.periodic_pa = bool(periodic_pa)

        expected = self.input_dim(self.x_dim, self.pa_dim, self.periodic_pa)
        if params.spec.input_dim != expected:
            raise ValueError(
                'Network input_dim {} does not match x_dim={}, pa_dim={}, '
                'periodic_pa={}'.format(params.spec.input_dim, x_dim, pa_dim,
                                        periodic_pa))
        if params.spec.output_dim != self.x_dim:
            raise ValueError(
                'Network output_dim {} does not match x_dim {}'.format(
                    params.spec.output_dim, x_dim))

        # picks the x slots out of an input gradient
        self._selection = np.eye(expected, self.x_dim)

    @staticmethod
    def input_dim(x_dim, pa_dim, periodic_pa=False):
        return x_dim + (2 * pa_dim if periodic_pa else pa_dim) + 1

    @classmethod
    def init(cls, kind, rng, x_dim=2, pa_dim=1, periodic_pa=False,
             hidden_dim=256, n_blocks=3, activation='silu', layer_norm=True):
        """Freshly initialised field"""
        spec = NetworkSpec(
            input_dim=cls.input_dim(x_dim, pa_dim, periodic_pa),
            hidden_dim=hidden_dim, n_blocks=n_blocks, output_dim=x_dim,
            activation=activation, layer_norm=layer_norm)
        return cls(kind, Params.init(spec, rng), x_dim, pa_dim, periodic_pa)

    def with_params(self, params):
        return VectorFieldModel(self.kind, params, self.x_dim, self.pa_dim,
                                self.periodic_pa)

    def encode(self, x, pa, t):
        """
        Network input rows ``concat(x, pa, t)``

        ``pa`` may be one parent vector or one per row, ``t`` a scalar or one
        per row.
        """
        x = np.atleast_2d(np.asarray(x, dtype=np.float64))
        n = x.shape[0]
        if x.shape[1] != self.x_dim:
            raise ValueError(
                'State has shape {}, expected (..., {})'.format(
                    x.shape, self.x_dim))

        pa = np.asarray(pa, dtype=np.float64).reshape(-1, self.pa_dim)
        pa = np.broadcast_to(pa, (n, self.pa_dim))
        if self.periodic_pa:
            pa = np.concatenate([np.sin(pa), np.cos(pa)], axis=1)

        t = np.broadcast_to(
            np.asarray(t, dtype=np.float64).reshape(-1, 1), (n, 1))
        return np.concatenate([x, pa, t], axis=1)

    def evaluate(self, x, pa, t):
        """
        Velocity at ``x``, same leading shape as ``x``
        """
        squeeze = np.ndim(x) == 1
        inputs = self.encode(x, pa, t)
        out, tape = forward(self.params, inputs)

        if self.kind == 'direct':
            v = out
        else:
            cot = np.full(out.shape, 1.0 / self.params.spec.output_dim)
            v = backward_input(tape, cot, x_dim=self.x_dim)

        if not np.all(np.isfinite(v)):
            raise FieldDivergedError(
                'Non-finite {} field value, the parameters have '
                'diverged'.format(self.kind))
        return v[0] if squeeze else v

    def __call__(self, x, pa, t):
        return self.evaluate(x, pa, t)

    def energy(self, x, pa, t):
        """E(x, pa, t), the mean of the network output per row"""
        out, _ = forward(self.params, self.encode(x, pa, t))
        return out.mean(axis=1)

    def regression(self, xt, pa, t, target):
        """
        Squared error of the field against a target velocity

        Args:
            xt: states, (n, x_dim)
            pa: parents, (n, pa_dim)
            t: times, (n,)
            target: target velocities, (n, x_dim)

        Returns:
            tuple of the per-pair squared errors (n,) and the parameter
            gradients of their mean
        """
        inputs = self.encode(xt, pa, t)
        target = np.asarray(target, dtype=np.float64)
        n = inputs.shape[0]

        if self.kind == 'direct':
            out, tape = forward(self.params, inputs)
            diff = out - target
            grads = backward_params(tape, 2.0 * diff / n)
            return np.sum(diff * diff, axis=1), grads

        # the energy field differentiates through its own input gradient
        input_node = T.Node(inputs)
        out, nodes = trace(self.params, input_node)
        energy = T.reduce_sum(T.mean(out, axis=-1))
        g = T.grad(energy, [input_node], create_graph=True)[0]
        diff = T.matmul(g, self._selection) - target
        per_pair = T.reduce_sum(diff * diff, axis=1)
        loss = T.mean(per_pair)

        names = list(nodes.keys())
        grad_nodes = T.grad(loss, [nodes[k] for k in names])
        grads = Params(self.params.spec, OrderedDict(
            (k, gk.value) for k, gk in zip(names, grad_nodes)))
        return per_pair.value[:, 0], grads


def eval_field(model, x, pa, t):
    """
    Evaluate a vector field

    Args:
        model: :class:`VectorFieldModel`
        x: state(s)
        pa: parent value(s)
        t: time in [0, 1]
    """
    if np.any(np.asarray(t) < 0.0) or np.any(np.asarray(t) > 1.0):
        raise ValueError('Field time must lie in [0, 1], got {}'.format(t))
    return model.evaluate(x, pa, t)


def save_field(model, path):
    """Checkpoint a :class:`VectorFieldModel` with its field settings"""
    checkpoint.save(model.params, path, extra={
        'kind': model.kind,
        'x_dim': model.x_dim,
        'pa_dim': model.pa_dim,
        'periodic_pa': model.periodic_pa,
    })


def load_field(path):
    params, extra = checkpoint.load(path)
    return VectorFieldModel(
        extra['kind'], params, x_dim=int(extra['x_dim']),
        pa_dim=int(extra['pa_dim']),
        periodic_pa=extra['periodic_pa'] == 'True')
