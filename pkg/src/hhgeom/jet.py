"""Second-order forward-mode automatic differentiation in four variables.

A :class:`Jet2` carries a value together with its gradient and Hessian with
respect to the chart coordinates ``u1..u4``.  Jets may be batched: ``value`` has
an arbitrary shape ``S`` and ``grad``/``hess`` have shapes ``S + (4,)`` and
``S + (4, 4)``.  Batching is how many sample points (or all entries of a matrix)
go through the numeric kernels in a single call.

The elementary functions accept plain floats and arrays as well, so the same
component expression can be evaluated with or without derivatives.
"""

import numpy as np

from . import _kernels as K
from .errors import DivisionByZero, DomainError

DIM = 4


class Jet2:
    """Value, gradient and Hessian of a (possibly batched) function of four variables."""

    __slots__ = ("value", "grad", "hess")
    __array_ufunc__ = None  # make numpy defer to the reflected operators

    def __init__(self, value, grad=None, hess=None):
        value = np.asarray(value, dtype=float)
        shape = value.shape
        self.value = value
        self.grad = np.zeros(shape + (DIM,)) if grad is None else np.asarray(grad, dtype=float)
        self.hess = np.zeros(shape + (DIM, DIM)) if hess is None else np.asarray(hess, dtype=float)
        if self.grad.shape != shape + (DIM,) or self.hess.shape != shape + (DIM, DIM):
            raise ValueError(
                f"inconsistent jet shapes {shape}, {self.grad.shape}, {self.hess.shape}"
            )

    @classmethod
    def constant(cls, c, shape=()):
        return cls(np.broadcast_to(np.asarray(c, dtype=float), shape).copy())

    @property
    def shape(self):
        return self.value.shape

    def is_constant(self):
        return not (self.grad.any() or self.hess.any())

    def broadcast_to(self, shape):
        if self.shape == tuple(shape):
            return self
        return Jet2(
            np.broadcast_to(self.value, shape).copy(),
            np.broadcast_to(self.grad, tuple(shape) + (DIM,)).copy(),
            np.broadcast_to(self.hess, tuple(shape) + (DIM, DIM)).copy(),
        )

    def __getitem__(self, idx):
        if not isinstance(idx, tuple):
            idx = (idx,)
        nd = len(self.shape)
        if len(idx) > nd:
            raise IndexError("too many indices for jet")
        pad = (slice(None),)
        return Jet2(self.value[idx], self.grad[idx + pad], self.hess[idx + pad * 2])

    def __repr__(self):
        if self.shape == ():
            return f"Jet2(value={self.value!r}, grad={self.grad!r})"
        return f"Jet2(shape={self.shape})"

    # arithmetic -----------------------------------------------------------

    def __neg__(self):
        return Jet2(-self.value, -self.grad, -self.hess)

    def __pos__(self):
        return self

    def __add__(self, other):
        if isinstance(other, Jet2):
            a, b = _broadcast(self, other)
            return Jet2(a.value + b.value, a.grad + b.grad, a.hess + b.hess)
        c = _as_const(other)
        if c is None:
            return NotImplemented
        shape = np.broadcast_shapes(self.shape, np.shape(c))
        a = self.broadcast_to(shape)
        return Jet2(a.value + c, a.grad, a.hess)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Jet2):
            a, b = _broadcast(self, other)
            return Jet2(a.value - b.value, a.grad - b.grad, a.hess - b.hess)
        c = _as_const(other)
        if c is None:
            return NotImplemented
        return self + (-c)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet2):
            return _binary(K.jet_mul, self, other)
        c = _as_const(other)
        if c is None:
            return NotImplemented
        c = np.asarray(c)
        return Jet2(self.value * c, self.grad * c[..., None], self.hess * c[..., None, None])

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet2):
            if np.any(other.value == 0):
                raise DivisionByZero("jet division by a jet with zero value")
            return _binary(K.jet_div, self, other)
        c = _as_const(other)
        if c is None:
            return NotImplemented
        if np.any(np.asarray(c) == 0):
            raise DivisionByZero("jet division by zero")
        return self * (1.0 / np.asarray(c, dtype=float))

    def __rtruediv__(self, other):
        c = _as_const(other)
        if c is None:
            return NotImplemented
        return Jet2.constant(c, np.broadcast_shapes(self.shape, np.shape(c))) / self

    def __pow__(self, n):
        if isinstance(n, Jet2):
            raise TypeError("jet exponents are not supported; use exp")
        v = self.value
        if float(n).is_integer():
            n = int(n)
            if n == 0:
                return Jet2.constant(1.0, self.shape)
            if n == 1:
                return self
            if n < 0 and np.any(v == 0):
                raise DivisionByZero("negative power of a jet with zero value")
            f0 = v ** float(n)
            f1 = n * v ** float(n - 1)
            f2 = n * (n - 1) * v ** float(n - 2)
            return _chain(self, f0, f1, f2)
        if np.any(v <= 0):
            raise DomainError("non-integer power of a non-positive jet")
        f0 = v ** n
        return _chain(self, f0, n * f0 / v, n * (n - 1) * f0 / v ** 2)


def _as_const(x):
    if isinstance(x, (int, float, np.floating, np.integer)):
        return float(x)
    if isinstance(x, np.ndarray) and x.dtype.kind in "fiu":
        return x.astype(float)
    return None


def _broadcast(a, b):
    shape = np.broadcast_shapes(a.shape, b.shape)
    return a.broadcast_to(shape), b.broadcast_to(shape)


def _flat(j):
    n = int(np.prod(j.shape, dtype=int))
    return (
        np.ascontiguousarray(j.value.reshape(n)),
        np.ascontiguousarray(j.grad.reshape(n, DIM)),
        np.ascontiguousarray(j.hess.reshape(n, DIM, DIM)),
    )


def _binary(kernel, a, b):
    a, b = _broadcast(a, b)
    shape = a.shape
    v, g, h = kernel(*_flat(a), *_flat(b))
    return Jet2(v.reshape(shape), g.reshape(shape + (DIM,)), h.reshape(shape + (DIM, DIM)))


def _chain(a, f0, f1, f2):
    """Apply a univariate function given its value and first two derivatives at a.value."""
    shape = a.shape
    _, ag, ah = _flat(a)
    flat = lambda x: np.ascontiguousarray(np.broadcast_to(x, shape).reshape(-1), dtype=float)
    v, g, h = K.jet_chain(ag, ah, flat(f0), flat(f1), flat(f2))
    return Jet2(v.reshape(shape), g.reshape(shape + (DIM,)), h.reshape(shape + (DIM, DIM)))


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------

def seed(coords):
    """The four coordinate functions as jets at ``coords`` (shape ``(4,)`` or ``(..., 4)``)."""
    coords = np.asarray(coords, dtype=float)
    if coords.shape[-1] != DIM:
        raise ValueError(f"expected {DIM} coordinates, got shape {coords.shape}")
    batch = coords.shape[:-1]
    out = []
    for k in range(DIM):
        grad = np.zeros(batch + (DIM,))
        grad[..., k] = 1.0
        out.append(Jet2(coords[..., k].copy(), grad))
    return out


def stack(nested, shape=None):
    """Assemble a nested list of jets and numbers into one jet with trailing array axes.

    ``stack([[a, b], [c, d]])`` yields a jet of shape ``B + (2, 2)`` where ``B`` is
    the common batch shape of the entries.
    """
    if shape is None:
        shape = _batch_shape(nested)
    axis = len(shape)
    if isinstance(nested, (list, tuple)):
        parts = [stack(x, shape) for x in nested]
        return Jet2(
            np.stack([p.value for p in parts], axis=axis),
            np.stack([p.grad for p in parts], axis=axis),
            np.stack([p.hess for p in parts], axis=axis),
        )
    if isinstance(nested, Jet2):
        return nested.broadcast_to(shape)
    return Jet2.constant(nested, shape)


def _batch_shape(nested):
    if isinstance(nested, (list, tuple)):
        shapes = [_batch_shape(x) for x in nested]
        return np.broadcast_shapes(*shapes) if shapes else ()
    if isinstance(nested, Jet2):
        return nested.shape
    return np.shape(nested)


# ---------------------------------------------------------------------------
# arithmetic and elementary functions by name
# ---------------------------------------------------------------------------

_ARITH = {
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "mul": lambda a, b: a * b,
    "div": lambda a, b: a / b,
}


def arith(op, a, b=None):
    if op == "neg":
        return -a
    try:
        fn = _ARITH[op]
    except KeyError:
        raise ValueError(f"unknown arithmetic op {op!r}") from None
    return fn(a, b)


def sin(a):
    if not isinstance(a, Jet2):
        return np.sin(a)
    s, c = np.sin(a.value), np.cos(a.value)
    return _chain(a, s, c, -s)


def cos(a):
    if not isinstance(a, Jet2):
        return np.cos(a)
    s, c = np.sin(a.value), np.cos(a.value)
    return _chain(a, c, -s, -c)


def sinh(a):
    if not isinstance(a, Jet2):
        return np.sinh(a)
    s, c = np.sinh(a.value), np.cosh(a.value)
    return _chain(a, s, c, s)


def cosh(a):
    if not isinstance(a, Jet2):
        return np.cosh(a)
    s, c = np.sinh(a.value), np.cosh(a.value)
    return _chain(a, c, s, c)


def tanh(a):
    if not isinstance(a, Jet2):
        return np.tanh(a)
    t = np.tanh(a.value)
    d = 1.0 - t * t
    return _chain(a, t, d, -2.0 * t * d)


def coth(a):
    # deliberately cosh/sinh so that the zero set of sinh surfaces as a domain error
    v = a.value if isinstance(a, Jet2) else np.asarray(a)
    if np.any(v == 0):
        raise DomainError("coth is undefined at 0")
    if isinstance(a, Jet2):
        return cosh(a) / sinh(a)
    return np.cosh(a) / np.sinh(a)


def exp(a):
    if not isinstance(a, Jet2):
        return np.exp(a)
    e = np.exp(a.value)
    return _chain(a, e, e, e)


def sqrt(a):
    v = a.value if isinstance(a, Jet2) else np.asarray(a)
    if np.any(v <= 0) if isinstance(a, Jet2) else np.any(v < 0):
        raise DomainError("sqrt requires a positive argument")
    if not isinstance(a, Jet2):
        return np.sqrt(a)
    s = np.sqrt(v)
    return _chain(a, s, 0.5 / s, -0.25 / (s * v))


ELEMENTARY = {
    "sin": sin,
    "cos": cos,
    "sinh": sinh,
    "cosh": cosh,
    "tanh": tanh,
    "coth": coth,
    "exp": exp,
    "sqrt": sqrt,
}


def elementary(func, a):
    try:
        return ELEMENTARY[func](a)
    except KeyError:
        raise ValueError(f"unknown elementary function {func!r}") from None
