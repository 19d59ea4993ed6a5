"""Nested multivariate dual numbers for exact first derivatives.

A ``Dual`` carries a value and a tuple of partial derivatives with respect
to a set of seed variables.  Values may be Python scalars, numpy arrays
(vectorised over sample points, real or complex) or other ``Dual`` objects,
which gives higher derivatives by nesting.  Every seeding gets a fresh tag;
a larger tag always sits structurally outside a smaller one, so a ``Dual``
with a smaller tag is a constant from the point of view of a larger one.
"""

import itertools

import numpy as np

_tags = itertools.count(1)


def new_tag():
    return next(_tags)


class Dual:
    __slots__ = ("val", "eps", "tag")
    __array_ufunc__ = None

    def __init__(self, val, eps, tag):
        self.val = val
        self.eps = tuple(eps)
        self.tag = tag

    def __repr__(self):
        return f"Dual({self.val!r}, {self.eps!r}, tag={self.tag})"

    def _split(self, other):
        """Return other's (value, derivatives) relative to this tag, or None when other is outer.

        Python never tries the reflected method for operands of the same
        type, so the caller dispatches to it explicitly in that case.
        """
        if isinstance(other, Dual):
            if other.tag == self.tag:
                return other.val, other.eps
            if other.tag > self.tag:
                return None
        return other, (0.0,) * len(self.eps)

    def __add__(self, other):
        s = self._split(other)
        if s is None:
            return other.__radd__(self)
        return Dual(self.val + s[0], (a + b for a, b in zip(self.eps, s[1])), self.tag)

    def __radd__(self, other):
        return Dual(other + self.val, self.eps, self.tag)

    def __sub__(self, other):
        s = self._split(other)
        if s is None:
            return other.__rsub__(self)
        return Dual(self.val - s[0], (a - b for a, b in zip(self.eps, s[1])), self.tag)

    def __rsub__(self, other):
        return Dual(other - self.val, (-a for a in self.eps), self.tag)

    def __neg__(self):
        return Dual(-self.val, (-a for a in self.eps), self.tag)

    def __pos__(self):
        return self

    def __mul__(self, other):
        s = self._split(other)
        if s is None:
            return other.__rmul__(self)
        v, e = s
        return Dual(self.val * v, (a * v + self.val * b for a, b in zip(self.eps, e)), self.tag)

    def __rmul__(self, other):
        return Dual(other * self.val, (other * a for a in self.eps), self.tag)

    def __truediv__(self, other):
        s = self._split(other)
        if s is None:
            return other.__rtruediv__(self)
        v, e = s
        q = self.val / v
        return Dual(q, ((a - q * b) / v for a, b in zip(self.eps, e)), self.tag)

    def __rtruediv__(self, other):
        q = other / self.val
        return Dual(q, (-q * a / self.val for a in self.eps), self.tag)

    def __pow__(self, n):
        if n == 2:
            return self * self
        p = self.val ** (n - 1)
        return Dual(p * self.val, (n * p * a for a in self.eps), self.tag)

    def conjugate(self):
        return Dual(conj(self.val), (conj(a) for a in self.eps), self.tag)

    @property
    def real(self):
        return Dual(real(self.val), (real(a) for a in self.eps), self.tag)

    @property
    def imag(self):
        return Dual(imag(self.val), (imag(a) for a in self.eps), self.tag)


def _chain(x, f, df):
    v = f(x.val)
    d = df(x.val, v)
    return Dual(v, (d * a for a in x.eps), x.tag)


def sqrt(x):
    if isinstance(x, Dual):
        return _chain(x, sqrt, lambda u, v: 0.5 / v)
    return np.sqrt(x)


def exp(x):
    if isinstance(x, Dual):
        return _chain(x, exp, lambda u, v: v)
    return np.exp(x)


def log(x):
    if isinstance(x, Dual):
        return _chain(x, log, lambda u, v: 1.0 / u)
    return np.log(x)


def sin(x):
    if isinstance(x, Dual):
        return _chain(x, sin, lambda u, v: cos(u))
    return np.sin(x)


def cos(x):
    if isinstance(x, Dual):
        return _chain(x, cos, lambda u, v: -sin(u))
    return np.cos(x)


def arccos(x):
    if isinstance(x, Dual):
        return _chain(x, arccos, lambda u, v: -1.0 / sqrt(1.0 - u * u))
    return np.arccos(x)


def _parts(x, tag, n):
    if isinstance(x, Dual) and x.tag == tag:
        return x.val, x.eps
    return x, (0.0,) * n


def arctan2(y, x):
    if isinstance(y, Dual) or isinstance(x, Dual):
        t = max(d.tag for d in (x, y) if isinstance(d, Dual))
        n = next(len(d.eps) for d in (x, y) if isinstance(d, Dual) and d.tag == t)
        vx, ex = _parts(x, t, n)
        vy, ey = _parts(y, t, n)
        r2 = vx * vx + vy * vy
        return Dual(arctan2(vy, vx), ((vx * b - vy * a) / r2 for a, b in zip(ex, ey)), t)
    return np.arctan2(y, x)


def conj(x):
    if isinstance(x, Dual):
        return x.conjugate()
    return np.conj(x)


def real(x):
    if isinstance(x, Dual):
        return x.real
    return np.real(x)


def imag(x):
    if isinstance(x, Dual):
        return x.imag
    return np.imag(x)


def value(x):
    """Strip every dual layer and return the plain value."""
    while isinstance(x, Dual):
        x = x.val
    return x


def seed(values):
    """Seed independent variables; returns (tag, tuple of Duals)."""
    tag = new_tag()
    n = len(values)
    out = tuple(Dual(v, (1.0 if j == i else 0.0 for j in range(n)), tag) for i, v in enumerate(values))
    return tag, out


def partial(x, tag, i):
    """Derivative of x with respect to seed i of ``tag`` (zero if x does not depend on it)."""
    if isinstance(x, Dual):
        if x.tag == tag:
            return x.eps[i]
        if x.tag > tag:
            return Dual(partial(x.val, tag, i), (partial(e, tag, i) for e in x.eps), x.tag)
    return 0.0


def primal(x, tag):
    """Value of x with the perturbation of ``tag`` removed."""
    if isinstance(x, Dual):
        if x.tag == tag:
            return x.val
        if x.tag > tag:
            return Dual(primal(x.val, tag), (primal(e, tag) for e in x.eps), x.tag)
    return x
