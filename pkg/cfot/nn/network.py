"""
Residual, layer-normalised dense network used for every vector field.

The network maps an input row to ``head(blocks(proj(input)))`` where each
block computes ``h + fc2(act(fc1(LN(h))))`` and the head is a final layer
normalisation followed by a linear projection onto ``output_dim``.
"""

from collections import OrderedDict
from dataclasses import dataclass

import numpy as np

from cfot.nn import tape as T
from cfot.nn.tape import StaleTapeError

LN_EPS = 1e-5

ACTIVATIONS = {
    'silu': T.silu,
    'identity': lambda a: a,
}


@dataclass(frozen=True)
class NetworkSpec():
    """
    Shape of the residual network

    Args:
        input_dim: size of the input row, dim(x) + dim(pa) + 1
        hidden_dim: width of the residual stream
        n_blocks: number of residual blocks
        output_dim: size of the output row
        activation: ``silu`` or ``identity``
        layer_norm: apply layer normalisation in blocks and head
    """

    input_dim: int
    hidden_dim: int = 256
    n_blocks: int = 3
    output_dim: int = 2
    activation: str = 'silu'
    layer_norm: bool = True

    def __post_init__(self):
        for name in ('input_dim', 'hidden_dim', 'output_dim'):
            if int(getattr(self, name)) < 1:
                raise ValueError(
                    'NetworkSpec {} must be >= 1, got {}'.format(
                        name, getattr(self, name)))
        if int(self.n_blocks) < 0:
            raise ValueError(
                'NetworkSpec n_blocks must be >= 0, got {}'.format(
                    self.n_blocks))
        if self.activation not in ACTIVATIONS:
            raise ValueError(
                'Unknown activation {}, expected one of {}'.format(
                    self.activation, sorted(ACTIVATIONS)))

    def shapes(self):
        """Parameter names and shapes in declaration order"""
        shapes = OrderedDict()
        shapes['proj.weight'] = (self.hidden_dim, self.input_dim)
        shapes['proj.bias'] = (self.hidden_dim,)
        for k in range(self.n_blocks):
            shapes['block{}.norm.gain'.format(k)] = (self.hidden_dim,)
            shapes['block{}.norm.bias'.format(k)] = (self.hidden_dim,)
            shapes['block{}.fc1.weight'.format(k)] = (
                self.hidden_dim, self.hidden_dim)
            shapes['block{}.fc1.bias'.format(k)] = (self.hidden_dim,)
            shapes['block{}.fc2.weight'.format(k)] = (
                self.hidden_dim, self.hidden_dim)
            shapes['block{}.fc2.bias'.format(k)] = (self.hidden_dim,)
        shapes['head.norm.gain'] = (self.hidden_dim,)
        shapes['head.norm.bias'] = (self.hidden_dim,)
        shapes['head.fc.weight'] = (self.output_dim, self.hidden_dim)
        shapes['head.fc.bias'] = (self.output_dim,)
        return shapes

    def to_dict(self):
        return OrderedDict([
            ('input_dim', self.input_dim),
            ('hidden_dim', self.hidden_dim),
            ('n_blocks', self.n_blocks),
            ('output_dim', self.output_dim),
            ('activation', self.activation),
            ('layer_norm', self.layer_norm),
        ])


class Params():
    """
    Ordered collection of named parameter arrays for a :class:`NetworkSpec`

    Writes through :meth:`set_flat` or item assignment bump :attr:`version`;
    tapes recorded against an older version refuse to run backward.
    """

    def __init__(self, spec, arrays):
        self.spec = spec
        shapes = spec.shapes()
        if list(arrays.keys()) != list(shapes.keys()):
            raise ValueError(
                'Parameter names do not match the network spec')
        self._arrays = OrderedDict()
        for name, shape in shapes.items():
            value = np.array(arrays[name], dtype=np.float64)
            if value.shape != shape:
                raise ValueError(
                    'Parameter {} has shape {}, expected {}'.format(
                        name, value.shape, shape))
            self._arrays[name] = value
        self.version = 0

    @classmethod
    def init(cls, spec, rng):
        """
        Fan-in uniform initialisation: weights ~ U(-a, a) with
        a = sqrt(1 / fan_in), biases zero, layer norm gains one.
        """
        arrays = OrderedDict()
        for name, shape in spec.shapes().items():
            if name.endswith('.weight'):
                a = np.sqrt(1.0 / shape[1])
                arrays[name] = rng.uniform(-a, a, size=shape)
            elif name.endswith('.gain'):
                arrays[name] = np.ones(shape)
            else:
                arrays[name] = np.zeros(shape)
        return cls(spec, arrays)

    @classmethod
    def zeros_like(cls, other):
        return cls(other.spec, OrderedDict(
            (k, np.zeros_like(v)) for k, v in other.items()))

    @classmethod
    def from_flat(cls, spec, flat):
        flat = np.asarray(flat, dtype=np.float64)
        arrays = OrderedDict()
        offset = 0
        for name, shape in spec.shapes().items():
            n = int(np.prod(shape))
            arrays[name] = flat[offset:offset + n].reshape(shape)
            offset += n
        if offset != flat.size:
            raise ValueError(
                'Flat vector has {} entries, spec needs {}'.format(
                    flat.size, offset))
        return cls(spec, arrays)

    def __getitem__(self, name):
        return self._arrays[name]

    def __setitem__(self, name, value):
        value = np.array(value, dtype=np.float64)
        if value.shape != self._arrays[name].shape:
            raise ValueError(
                'Parameter {} has shape {}, got {}'.format(
                    name, self._arrays[name].shape, value.shape))
        self._arrays[name] = value
        self.version += 1

    def keys(self):
        return self._arrays.keys()

    def items(self):
        return self._arrays.items()

    def values(self):
        return self._arrays.values()

    @property
    def size(self):
        return int(sum(v.size for v in self._arrays.values()))

    def flatten(self):
        return np.concatenate([v.ravel() for v in self._arrays.values()])

    def set_flat(self, flat):
        updated = Params.from_flat(self.spec, flat)
        self._arrays = updated._arrays
        self.version += 1

    def map(self, fn, *others):
        """New Params with ``fn`` applied entrywise across this and others"""
        return Params(self.spec, OrderedDict(
            (k, fn(v, *[o[k] for o in others])) for k, v in self.items()))

    def copy(self):
        return self.map(np.copy)

    def all_finite(self):
        return all(np.all(np.isfinite(v)) for v in self._arrays.values())

    def equals(self, other):
        return self.spec == other.spec and all(
            np.array_equal(v, other[k]) for k, v in self.items())


class Tape():
    """Trace of one forward pass, sufficient for the backward passes"""

    def __init__(self, params, inputs, param_nodes, output, squeeze):
        self.params = params
        self.version = params.version
        self.inputs = inputs
        self.param_nodes = param_nodes
        self.output = output
        self.squeeze = squeeze

    def check(self):
        if self.params.version != self.version:
            raise StaleTapeError(
                'Tape recorded at parameter version {} but parameters are '
                'now at version {}'.format(self.version, self.params.version))


def _linear(h, weight, bias):
    return T.matmul(h, T.transpose(weight)) + bias


def _layer_norm(h, gain, bias):
    centred = h - T.mean(h, axis=-1)
    var = T.mean(centred * centred, axis=-1)
    return centred * T.power(var + LN_EPS, -0.5) * gain + bias


def trace(params, inputs):
    """
    Record the network on a batch of input nodes

    Args:
        params: :class:`Params`
        inputs: :class:`~cfot.nn.tape.Node` of shape (n, input_dim)

    Returns:
        tuple of the output node and the parameter nodes by name
    """
    spec = params.spec
    act = ACTIVATIONS[spec.activation]
    p = OrderedDict((k, T.Node(v)) for k, v in params.items())

    h = _linear(inputs, p['proj.weight'], p['proj.bias'])
    for k in range(spec.n_blocks):
        key = 'block{}.'.format(k)
        z = h
        if spec.layer_norm:
            z = _layer_norm(
                z, p[key + 'norm.gain'], p[key + 'norm.bias'])
        z = act(_linear(z, p[key + 'fc1.weight'], p[key + 'fc1.bias']))
        h = h + _linear(z, p[key + 'fc2.weight'], p[key + 'fc2.bias'])

    if spec.layer_norm:
        h = _layer_norm(h, p['head.norm.gain'], p['head.norm.bias'])
    out = _linear(h, p['head.fc.weight'], p['head.fc.bias'])
    return out, p


def forward(params, inputs):
    """
    Evaluate the network

    Args:
        params: :class:`Params`
        inputs: array of shape (input_dim,) or (n, input_dim)

    Returns:
        tuple of the output array and a :class:`Tape`
    """
    inputs = np.asarray(inputs, dtype=np.float64)
    squeeze = inputs.ndim == 1
    batch = np.atleast_2d(inputs)
    if batch.ndim != 2 or batch.shape[1] != params.spec.input_dim:
        raise ValueError(
            'Network input has shape {}, expected (..., {})'.format(
                inputs.shape, params.spec.input_dim))

    input_node = T.Node(batch)
    out, param_nodes = trace(params, input_node)
    value = out.value[0] if squeeze else out.value
    return value.copy(), Tape(params, input_node, param_nodes, out, squeeze)


def _cotangent(tape, output_cotangent):
    cot = np.asarray(output_cotangent, dtype=np.float64)
    if tape.squeeze:
        cot = cot.reshape(1, -1)
    if cot.shape != tape.output.shape:
        raise ValueError(
            'Output cotangent has shape {}, expected {}'.format(
                cot.shape, tape.output.shape))
    return cot


def backward_params(tape, output_cotangent):
    """
    Gradient of ``<output, output_cotangent>`` with respect to every
    parameter, returned as :class:`Params`
    """
    tape.check()
    cot = _cotangent(tape, output_cotangent)
    names = list(tape.param_nodes.keys())
    grads = T.grad(tape.output, [tape.param_nodes[k] for k in names], cot)
    return Params(tape.params.spec, OrderedDict(
        (k, g.value) for k, g in zip(names, grads)))


def backward_input(tape, output_cotangent, x_dim=None):
    """
    Gradient of ``<output, output_cotangent>`` with respect to the input,
    restricted to the first ``x_dim`` input slots when given
    """
    tape.check()
    cot = _cotangent(tape, output_cotangent)
    g = T.grad(tape.output, [tape.inputs], cot)[0].value
    if x_dim is not None:
        g = g[:, :x_dim]
    return g[0] if tape.squeeze else g
