"""Exact forward-mode differentiation: truncated Taylor arithmetic of order 3.

A :class:`Jet3` carries a value together with its gradient, Hessian and
third-derivative tensor with respect to ``n`` chart coordinates.  Order 3 is
exactly what the downstream pipeline needs (the conformal third-derivative
tensor of a metric requires three metric derivatives) and is fixed: no
configurable order, no higher slots.

Second and third derivatives are stored packed over sorted multi-indices,
n(n+1)/2 and n(n+1)(n+2)/6 entries, so the symmetries hold structurally:
there is no way to store, or observe, an asymmetric component.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np


class MetricNotPositive(ValueError):
    """Metric evaluation produced a matrix that is not positive definite."""


@lru_cache(maxsize=None)
class SymIndex:
    """Packed-index bookkeeping for symmetric order-2 and order-3 storage."""

    def __init__(self, n: int):
        self.n = n
        pairs = [(i, j) for i in range(n) for j in range(i, n)]
        triples = [(i, j, k) for i in range(n) for j in range(i, n) for k in range(j, n)]
        self.pairs = pairs
        self.triples = triples
        self.npairs = len(pairs)
        self.ntriples = len(triples)

        idx2 = np.empty((n, n), dtype=np.intp)
        for p, (i, j) in enumerate(pairs):
            idx2[i, j] = idx2[j, i] = p
        self.idx2 = idx2

        idx3 = np.empty((n, n, n), dtype=np.intp)
        for t, (i, j, k) in enumerate(triples):
            for perm in ((i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)):
                idx3[perm] = t
        self.idx3 = idx3

        self.pi = np.array([i for i, _ in pairs], dtype=np.intp)
        self.pj = np.array([j for _, j in pairs], dtype=np.intp)
        self.ti = np.array([i for i, _, _ in triples], dtype=np.intp)
        self.tj = np.array([j for _, j, _ in triples], dtype=np.intp)
        self.tk = np.array([k for _, _, k in triples], dtype=np.intp)
        self.h_jk = idx2[self.tj, self.tk]
        self.h_ik = idx2[self.ti, self.tk]
        self.h_ij = idx2[self.ti, self.tj]


@dataclass
class Jet3:
    """Truncated multivariate Taylor expansion of order 3 in n variables."""

    n: int
    value: float
    grad: np.ndarray
    hess: np.ndarray
    third: np.ndarray

    # -- constructors ----------------------------------------------------

    @staticmethod
    def constant(value: float, n: int) -> "Jet3":
        ix = SymIndex(n)
        return Jet3(n, float(value), np.zeros(n), np.zeros(ix.npairs), np.zeros(ix.ntriples))

    @staticmethod
    def variable(index: int, base_value: float, n: int) -> "Jet3":
        if not 0 <= index < n:
            raise IndexError(f"variable index {index} out of range for n={n}")
        jet = Jet3.constant(base_value, n)
        jet.grad[index] = 1.0
        return jet

    # -- unpacked views ---------------------------------------------------

    def hess_matrix(self) -> np.ndarray:
        return self.hess[SymIndex(self.n).idx2]

    def third_tensor(self) -> np.ndarray:
        return self.third[SymIndex(self.n).idx3]

    # -- ring operations --------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Jet3):
            if other.n != self.n:
                raise ValueError("jets have different variable counts")
            return other
        if isinstance(other, (int, float)):
            return None  # scalar fast path
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o is None:
            return Jet3(self.n, self.value + other, self.grad.copy(),
                        self.hess.copy(), self.third.copy())
        return Jet3(self.n, self.value + o.value, self.grad + o.grad,
                    self.hess + o.hess, self.third + o.third)

    __radd__ = __add__

    def __neg__(self):
        return Jet3(self.n, -self.value, -self.grad, -self.hess, -self.third)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o is None:
            return Jet3(self.n, self.value - other, self.grad.copy(),
                        self.hess.copy(), self.third.copy())
        return Jet3(self.n, self.value - o.value, self.grad - o.grad,
                    self.hess - o.hess, self.third - o.third)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o is None:
            return Jet3(self.n, self.value * other, self.grad * other,
                        self.hess * other, self.third * other)
        ix = SymIndex(self.n)
        av, bv = self.value, o.value
        ag, bg = self.grad, o.grad
        ah, bh = self.hess, o.hess
        value = av * bv
        grad = av * bg + bv * ag
        hess = av * bh + bv * ah + ag[ix.pi] * bg[ix.pj] + ag[ix.pj] * bg[ix.pi]
        third = (av * o.third + bv * self.third
                 + ag[ix.ti] * bh[ix.h_jk] + ag[ix.tj] * bh[ix.h_ik] + ag[ix.tk] * bh[ix.h_ij]
                 + bg[ix.ti] * ah[ix.h_jk] + bg[ix.tj] * ah[ix.h_ik] + bg[ix.tk] * ah[ix.h_ij])
        return Jet3(self.n, value, grad, hess, third)

    __rmul__ = __mul__

    def reciprocal(self) -> "Jet3":
        v = self.value
        if v == 0.0:
            raise ZeroDivisionError("jet division by zero")
        return self._compose(1.0 / v, -1.0 / v**2, 2.0 / v**3, -6.0 / v**4)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o is None:
            if other == 0:
                raise ZeroDivisionError("jet division by zero")
            return self * (1.0 / other)
        return self * o.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, exponent):
        if not isinstance(exponent, int):
            raise TypeError("jet powers take integer exponents")
        if exponent == 0:
            return Jet3.constant(1.0, self.n)
        base = self.reciprocal() if exponent < 0 else self
        k = abs(exponent)
        result = None
        acc = base
        while k:
            if k & 1:
                result = acc if result is None else result * acc
            k >>= 1
            if k:
                acc = acc * acc
        return result

    # -- elementary functions (univariate chain rule to order 3) ----------

    def _compose(self, c0: float, c1: float, c2: float, c3: float) -> "Jet3":
        ix = SymIndex(self.n)
        ag, ah = self.grad, self.hess
        grad = c1 * ag
        hess = c1 * ah + c2 * ag[ix.pi] * ag[ix.pj]
        third = (c1 * self.third
                 + c2 * (ag[ix.ti] * ah[ix.h_jk] + ag[ix.tj] * ah[ix.h_ik] + ag[ix.tk] * ah[ix.h_ij])
                 + c3 * ag[ix.ti] * ag[ix.tj] * ag[ix.tk])
        return Jet3(self.n, c0, grad, hess, third)

    def sin(self) -> "Jet3":
        s, c = math.sin(self.value), math.cos(self.value)
        return self._compose(s, c, -s, -c)

    def cos(self) -> "Jet3":
        s, c = math.sin(self.value), math.cos(self.value)
        return self._compose(c, -s, -c, s)

    def tan(self) -> "Jet3":
        t = math.tan(self.value)
        d = 1.0 + t * t
        return self._compose(t, d, 2.0 * t * d, d * (2.0 + 6.0 * t * t))

    def exp(self) -> "Jet3":
        e = math.exp(self.value)
        return self._compose(e, e, e, e)

    def log(self) -> "Jet3":
        v = self.value
        if v <= 0.0:
            raise ValueError(f"log of non-positive value {v}")
        return self._compose(math.log(v), 1.0 / v, -1.0 / v**2, 2.0 / v**3)

    def sqrt(self) -> "Jet3":
        v = self.value
        if v <= 0.0:
            raise ValueError(f"sqrt of non-positive value {v} (derivatives singular at 0)")
        s = math.sqrt(v)
        return self._compose(s, 0.5 / s, -0.25 / (v * s), 0.375 / (v * v * s))

    def atan(self) -> "Jet3":
        v = self.value
        d = 1.0 / (1.0 + v * v)
        return self._compose(math.atan(v), d, -2.0 * v * d * d, (6.0 * v * v - 2.0) * d**3)


def jet_variable(index: int, base_value: float, n: int) -> Jet3:
    return Jet3.variable(index, base_value, n)


def jet_environment(coordinates, point) -> dict:
    """Seed one jet variable per coordinate at a chart point."""
    n = len(coordinates)
    return {name: Jet3.variable(k, float(point[k]), n) for k, name in enumerate(coordinates)}


# --- metric jets ----------------------------------------------------------


@dataclass(frozen=True)
class MetricJets:
    """g and its first three coordinate-derivative tensors at one point.

    Derivative indices come first: ``dg[a, i, j]`` is the a-derivative of
    ``g_ij``, ``d2g[a, b, i, j]`` and ``d3g[a, b, c, i, j]`` likewise.  The
    recorded symmetries in the derivative slots are exact by construction
    (unpacked from symmetric packed storage).
    """

    point: np.ndarray
    g: np.ndarray
    dg: np.ndarray
    d2g: np.ndarray
    d3g: np.ndarray

    @property
    def n(self) -> int:
        return self.g.shape[0]


def metric_jets(spec, point) -> MetricJets:
    """Evaluate a metric's components over jets at a chart point.

    ``spec`` is anything with ``dimension``, ``coordinates``, ``domain`` and
    ``component_values(env)`` (a :class:`~lcwcheck.metrics.MetricSpec` or a
    cutoff-perturbed metric).  Raises :class:`MetricNotPositive` when g at
    the point has no Cholesky factor, and ``ValueError`` when the point is
    outside the chart box.
    """
    n = spec.dimension
    point = np.asarray(point, dtype=float)
    if point.shape != (n,):
        raise ValueError(f"point must have {n} coordinates")
    if not all(lo <= x <= hi for x, (lo, hi) in zip(point, spec.domain)):
        raise ValueError(f"point {point.tolist()} is outside the chart domain box")

    env = jet_environment(spec.coordinates, point)
    jets = spec.component_values(env)

    g = np.empty((n, n))
    dg = np.empty((n, n, n))
    d2g = np.empty((n, n, n, n))
    d3g = np.empty((n, n, n, n, n))
    for i in range(n):
        for j in range(i, n):
            jet = jets[i][j]
            if isinstance(jet, (int, float)):
                jet = Jet3.constant(jet, n)
            g[i, j] = g[j, i] = jet.value
            dg[:, i, j] = dg[:, j, i] = jet.grad
            d2g[:, :, i, j] = d2g[:, :, j, i] = jet.hess_matrix()
            d3g[:, :, :, i, j] = d3g[:, :, :, j, i] = jet.third_tensor()

    try:
        np.linalg.cholesky(g)
    except np.linalg.LinAlgError:
        raise MetricNotPositive(
            f"metric at {point.tolist()} is not positive definite") from None
    return MetricJets(point, g, dg, d2g, d3g)
