"""
The module :mod:`~cfot.nn.tape` records numpy computations on a graph of
:class:`Node` objects and differentiates them in reverse mode.

Every vector-Jacobian product is itself written with :class:`Node` operations,
so a gradient can be recorded on the graph (``create_graph=True``) and
differentiated a second time. The energy-based vector field relies on this to
obtain parameter gradients of a loss that contains an input gradient.

Example:
    >>> x = Node(np.array([1.0, 2.0]))
    >>> y = reduce_sum(x * x)
    >>> grad(y, [x])[0].value
    array([2., 4.])
"""

import numpy as np
from scipy.special import expit


class StaleTapeError(RuntimeError):
    """Raised when a tape is replayed against parameters written after it
    was recorded."""


class Node():
    """
    A value on the computation graph

    Args:
        value: numpy array (or scalar)
        parents: tuple of ``(parent_node, vjp)`` pairs where ``vjp`` maps the
            cotangent :class:`Node` of this node to the cotangent
            contribution of the parent
    """

    __array_priority__ = 100

    def __init__(self, value, parents=()):
        self.value = np.asarray(value, dtype=np.float64)
        self.parents = tuple(parents)

    @property
    def shape(self):
        return self.value.shape

    def __repr__(self):
        return 'Node(shape={})'.format(self.shape)

    def __add__(self, other):
        return add(self, other)

    def __radd__(self, other):
        return add(other, self)

    def __sub__(self, other):
        return add(self, neg(as_node(other)))

    def __rsub__(self, other):
        return add(other, neg(self))

    def __mul__(self, other):
        return mul(self, other)

    def __rmul__(self, other):
        return mul(other, self)

    def __neg__(self):
        return neg(self)

    def __matmul__(self, other):
        return matmul(self, other)

    def __pow__(self, p):
        return power(self, p)


def as_node(value):
    if isinstance(value, Node):
        return value
    return Node(value)


def detach(node):
    return Node(node.value)


def sum_to(a, shape):
    """Sum a broadcast value back down to ``shape``"""
    a = as_node(a)
    if a.shape == tuple(shape):
        return a

    value = a.value
    lead = value.ndim - len(shape)
    if lead > 0:
        value = value.sum(axis=tuple(range(lead)))
    axes = tuple(i for i, s in enumerate(shape)
                 if s == 1 and value.shape[i] != 1)
    if axes:
        value = value.sum(axis=axes, keepdims=True)
    value = value.reshape(shape)

    in_shape = a.shape
    return Node(value, ((a, lambda g: broadcast_to(g, in_shape)),))


def broadcast_to(a, shape):
    a = as_node(a)
    shape = tuple(shape)
    if a.shape == shape:
        return a

    in_shape = a.shape
    value = np.broadcast_to(a.value, shape).copy()
    return Node(value, ((a, lambda g: sum_to(g, in_shape)),))


def add(a, b):
    a = as_node(a)
    b = as_node(b)
    sa, sb = a.shape, b.shape
    return Node(
        a.value + b.value,
        ((a, lambda g: sum_to(g, sa)), (b, lambda g: sum_to(g, sb))))


def neg(a):
    a = as_node(a)
    return Node(-a.value, ((a, lambda g: neg(g)),))


def mul(a, b):
    a = as_node(a)
    b = as_node(b)
    sa, sb = a.shape, b.shape
    return Node(
        a.value * b.value,
        ((a, lambda g: sum_to(mul(g, b), sa)),
         (b, lambda g: sum_to(mul(g, a), sb))))


def transpose(a):
    a = as_node(a)
    return Node(a.value.T, ((a, lambda g: transpose(g)),))


def matmul(a, b):
    """Matrix product of two 2-D nodes"""
    a = as_node(a)
    b = as_node(b)
    if a.value.ndim != 2 or b.value.ndim != 2:
        raise ValueError(
            'matmul expects 2-D operands, got shapes {} and {}'.format(
                a.shape, b.shape))
    return Node(
        a.value @ b.value,
        ((a, lambda g: matmul(g, transpose(b))),
         (b, lambda g: matmul(transpose(a), g))))


def reduce_sum(a, axis=None):
    """
    Sum over ``axis`` keeping the reduced dimension, or over everything to a
    scalar when ``axis`` is None
    """
    a = as_node(a)
    in_shape = a.shape
    if axis is None:
        return Node(a.value.sum(),
                    ((a, lambda g: broadcast_to(g, in_shape)),))

    value = a.value.sum(axis=axis, keepdims=True)
    return Node(value, ((a, lambda g: broadcast_to(g, in_shape)),))


def mean(a, axis=None):
    a = as_node(a)
    n = a.value.size if axis is None else a.shape[axis]
    return reduce_sum(a, axis) * (1.0 / n)


def power(a, p):
    """Elementwise power with a constant exponent"""
    a = as_node(a)
    p = float(p)
    return Node(np.power(a.value, p),
                ((a, lambda g: g * (p * power(a, p - 1.0))),))


def sigmoid(a):
    a = as_node(a)
    out = Node(expit(a.value))
    out.parents = ((a, lambda g: g * out * (1.0 - out)),)
    return out


def silu(a):
    a = as_node(a)
    return a * sigmoid(a)


def topological_order(output):
    """Nodes reachable from ``output``, parents before children"""
    order = []
    seen = set()
    stack = [(output, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for parent, _ in node.parents:
            if id(parent) not in seen:
                stack.append((parent, False))
    return order


def grad(output, wrt, cotangent=None, create_graph=False):
    """
    Reverse-mode gradient of ``<output, cotangent>`` with respect to the
    nodes in ``wrt``

    Args:
        output: :class:`Node` to differentiate
        wrt: list of :class:`Node`
        cotangent: array shaped like ``output``, defaults to ones
        create_graph: record the gradient computation on the graph so the
            result can be differentiated again

    Returns:
        list of :class:`Node`, one per entry of ``wrt``; nodes that do not
        influence ``output`` receive zeros
    """

    if cotangent is None:
        cotangent = np.ones_like(output.value)
    cotangent = np.asarray(cotangent, dtype=np.float64)
    if cotangent.shape != output.shape:
        raise ValueError(
            'Cotangent shape {} does not match output shape {}'.format(
                cotangent.shape, output.shape))

    order = topological_order(output)
    targets = {id(n) for n in wrt}

    # only nodes that lie on a path to a requested input get a gradient
    relevant = set()
    for node in order:
        if id(node) in targets or any(
                id(p) in relevant for p, _ in node.parents):
            relevant.add(id(node))

    grads = {id(output): Node(cotangent)}
    for node in reversed(order):
        g = grads.pop(id(node), None) if id(node) not in targets \
            else grads.get(id(node))
        if g is None:
            continue
        for parent, vjp in node.parents:
            if id(parent) not in relevant:
                continue
            contribution = vjp(g)
            if not create_graph:
                contribution = detach(contribution)
            if id(parent) in grads:
                total = grads[id(parent)] + contribution
                grads[id(parent)] = total if create_graph else detach(total)
            else:
                grads[id(parent)] = contribution

    return [grads.get(id(n), Node(np.zeros_like(n.value))) for n in wrt]
