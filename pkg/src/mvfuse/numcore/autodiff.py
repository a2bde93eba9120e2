"""Minimal reverse-mode differentiation over dense 2-D float matrices.

Every value is a 2-D ``numpy.ndarray``. Nodes are created by the operation
functions in this module and remember their parents; calling
:func:`backward` on a 1x1 node walks the graph in reverse topological order
and returns the gradient for each parameter node.

Binary operations accept operands of identical shape, or one operand that is
a ``1 x n`` row (bias broadcast over rows) or a ``1 x 1`` scalar.
"""

import numpy as np

from ..errors import ContractError, DimensionError, DomainError, NumericalError

DTYPE = np.float64


def as_matrix(x, dtype=DTYPE):
    """Coerce scalars, 1-D and 2-D inputs to a 2-D float array.

    A 1-D input becomes a single row.
    """
    a = np.asarray(x, dtype=dtype)
    if a.ndim == 0:
        return a.reshape(1, 1)
    if a.ndim == 1:
        return a.reshape(1, -1)
    if a.ndim != 2:
        raise DimensionError(f"expected at most 2 dimensions, got shape {a.shape}")
    return a


class Node:
    """One vertex of the computation graph."""

    __slots__ = ("value", "parents", "op", "requires_grad", "_backward", "name")

    def __init__(self, value, parents=(), op="const", backward=None,
                 requires_grad=False, name=None):
        self.value = value
        self.parents = parents
        self.op = op
        self._backward = backward
        self.requires_grad = requires_grad or any(p.requires_grad for p in parents)
        self.name = name

    @property
    def shape(self):
        return self.value.shape

    @property
    def is_param(self):
        return self.op == "param"

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"Node({self.op}{label}, shape={self.shape})"

    def __add__(self, other):
        return add(self, other)

    def __radd__(self, other):
        return add(other, self)

    def __sub__(self, other):
        return sub(self, other)

    def __rsub__(self, other):
        return sub(other, self)

    def __mul__(self, other):
        if np.isscalar(other):
            return scale(self, other)
        return mul(self, other)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        if np.isscalar(other):
            return scale(self, 1.0 / other)
        return div(self, other)

    def __matmul__(self, other):
        return matmul(self, other)

    def __neg__(self):
        return scale(self, -1.0)


def param(value, name=None):
    """A trainable leaf."""
    return Node(as_matrix(value).copy(), op="param", requires_grad=True, name=name)


def const(value):
    """A leaf that never receives a gradient."""
    if isinstance(value, Node):
        return value
    return Node(as_matrix(value))


def _lift(x):
    return x if isinstance(x, Node) else const(x)


def _checked(value, op):
    if not np.all(np.isfinite(value)):
        raise NumericalError(f"{op} produced non-finite values")
    return value


def _make(value, parents, op, backward):
    return Node(_checked(value, op), parents, op, backward)


def _broadcast_ok(sa, sb):
    if sa == sb:
        return True
    for big, small in ((sa, sb), (sb, sa)):
        if small == (1, 1) or (small[0] == 1 and small[1] == big[1]):
            return True
    return False


def _unbroadcast(grad, shape):
    if grad.shape == shape:
        return grad
    if shape[0] == 1 and grad.shape[0] != 1:
        grad = grad.sum(axis=0, keepdims=True)
    if shape[1] == 1 and grad.shape[1] != 1:
        grad = grad.sum(axis=1, keepdims=True)
    return grad


def _binary(a, b, op):
    a, b = _lift(a), _lift(b)
    if not _broadcast_ok(a.shape, b.shape):
        raise DimensionError(f"{op}: incompatible shapes {a.shape} and {b.shape}")
    return a, b


# -- binary operations -------------------------------------------------------

def add(a, b):
    a, b = _binary(a, b, "add")

    def bw(g):
        return _unbroadcast(g, a.shape), _unbroadcast(g, b.shape)

    return _make(a.value + b.value, (a, b), "add", bw)


def sub(a, b):
    a, b = _binary(a, b, "sub")

    def bw(g):
        return _unbroadcast(g, a.shape), _unbroadcast(-g, b.shape)

    return _make(a.value - b.value, (a, b), "sub", bw)


def mul(a, b):
    a, b = _binary(a, b, "mul")

    def bw(g):
        return (_unbroadcast(g * b.value, a.shape),
                _unbroadcast(g * a.value, b.shape))

    return _make(a.value * b.value, (a, b), "mul", bw)


def div(a, b):
    a, b = _binary(a, b, "div")
    if np.any(b.value == 0):
        raise DomainError("div: division by zero")
    out = a.value / b.value

    def bw(g):
        return (_unbroadcast(g / b.value, a.shape),
                _unbroadcast(-g * out / b.value, b.shape))

    return _make(out, (a, b), "div", bw)


def matmul(a, b):
    a, b = _lift(a), _lift(b)
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"matmul: cannot multiply {a.shape} by {b.shape}")

    def bw(g):
        return g @ b.value.T, a.value.T @ g

    return _make(a.value @ b.value, (a, b), "matmul", bw)


# -- unary operations --------------------------------------------------------

def scale(a, c):
    """Multiply by a Python scalar constant."""
    a = _lift(a)
    c = float(c)
    return _make(a.value * c, (a,), "scale", lambda g: (g * c,))


def relu(a):
    a = _lift(a)
    mask = a.value > 0
    return _make(np.where(mask, a.value, 0.0), (a,), "relu", lambda g: (g * mask,))


def tanh(a):
    a = _lift(a)
    out = np.tanh(a.value)
    return _make(out, (a,), "tanh", lambda g: (g * (1.0 - out * out),))


def _sigmoid(x):
    return 0.5 * (1.0 + np.tanh(0.5 * x))


def sigmoid(a):
    a = _lift(a)
    out = _sigmoid(a.value)
    return _make(out, (a,), "sigmoid", lambda g: (g * out * (1.0 - out),))


def exp(a):
    a = _lift(a)
    with np.errstate(over="ignore"):
        out = np.exp(a.value)
    return _make(out, (a,), "exp", lambda g: (g * out,))


def log(a):
    a = _lift(a)
    if np.any(a.value <= 0):
        raise DomainError("log of non-positive value")
    return _make(np.log(a.value), (a,), "log", lambda g: (g / a.value,))


def softplus(a):
    """``ln(1 + e^x)`` evaluated without overflow."""
    a = _lift(a)
    return _make(np.logaddexp(0.0, a.value), (a,), "softplus",
                 lambda g: (g * _sigmoid(a.value),))


def sqrt(a):
    a = _lift(a)
    if np.any(a.value < 0):
        raise DomainError("sqrt of negative value")
    out = np.sqrt(a.value)
    return _make(out, (a,), "sqrt", lambda g: (g * 0.5 / out,))


def square(a):
    a = _lift(a)
    return _make(a.value * a.value, (a,), "square", lambda g: (2.0 * g * a.value,))


def transpose(a):
    a = _lift(a)
    return _make(a.value.T.copy(), (a,), "transpose", lambda g: (g.T,))


# -- reductions ----------------------------------------------------------------

def sum(a):  # noqa: A001 - mirrors numpy naming
    """Sum of all entries as a 1x1 node."""
    a = _lift(a)
    return _make(a.value.sum().reshape(1, 1), (a,), "sum",
                 lambda g: (np.broadcast_to(g, a.shape).copy(),))


def mean(a):
    a = _lift(a)
    n = a.value.size
    return _make(a.value.mean().reshape(1, 1), (a,), "mean",
                 lambda g: (np.broadcast_to(g / n, a.shape).copy(),))


def row_sum(a):
    """Sum across columns, giving an ``m x 1`` column."""
    a = _lift(a)
    return _make(a.value.sum(axis=1, keepdims=True), (a,), "row_sum",
                 lambda g: (np.broadcast_to(g, a.shape).copy(),))


def row_broadcast(a, cols):
    """Repeat an ``m x 1`` column across ``cols`` columns."""
    a = _lift(a)
    if a.shape[1] != 1:
        raise DimensionError(f"row_broadcast expects a column, got {a.shape}")
    return _make(np.repeat(a.value, cols, axis=1), (a,), "row_broadcast",
                 lambda g: (g.sum(axis=1, keepdims=True),))


# -- reverse pass ----------------------------------------------------------------

def _topological(root):
    order, seen = [], set()
    stack = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for p in node.parents:
            if p.requires_grad and id(p) not in seen:
                stack.append((p, False))
    return order


def backward(loss, params=None):
    """Gradients of a scalar ``loss`` node.

    Parameters
    ----------
    loss : Node
        A 1x1 node.
    params : iterable of Node, optional
        Parameters to report. Defaults to every parameter reachable from
        ``loss``. Unreachable parameters get a zero gradient.

    Returns
    -------
    dict
        Maps each parameter node to an array of its shape.
    """
    if loss.shape != (1, 1):
        raise ContractError(f"backward needs a 1x1 loss, got shape {loss.shape}")
    grads = {id(loss): np.ones((1, 1))}
    order = _topological(loss) if loss.requires_grad else []
    reached = []
    for node in reversed(order):
        g = grads.pop(id(node), None)
        if node.is_param:
            reached.append((node, g))
            continue
        if g is None or node._backward is None:
            continue
        for parent, pg in zip(node.parents, node._backward(g)):
            if not parent.requires_grad:
                continue
            key = id(parent)
            if key in grads:
                grads[key] = grads[key] + pg
            else:
                grads[key] = pg
    found = {node: g for node, g in reached}
    if params is None:
        return found
    return {p: found.get(p, np.zeros_like(p.value)) for p in params}
