"""Linear algebra on the space of bivectors.

A curvature-type object at a point is a symmetric operator on Lambda^2(R^n),
an N x N matrix over the orthonormal basis {e_i ^ e_j : i < j} in
lexicographic order, N = n(n-1)/2.  The bivector inner product is inherited
from the frame (<e_i^e_j, e_k^e_l> = delta_ik delta_jl - delta_il delta_jk),
so that basis is orthonormal and all adjoints and projections below use it.

The two linear maps that carve out the Weyl space:

* Bianchi map  b(R)(x,y,z,t) = (R(x^y,z^t) + R(y^z,x^t) + R(z^x,y^t)) / 3,
  one component per sorted quadruple i<j<k<l;
* Ricci contraction  r(R)(x,y) = sum_i R(x^e_i, y^e_i).

Weyl operators are exactly ker(b) iintersect ker(r); the orthogonal projector
onto that subspace is built once per dimension from the SVD kernel of the
stacked constraint matrix and cached.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

RANK_TOL = 1e-9  # singular values below RANK_TOL * largest count as zero


@lru_cache(maxsize=None)
class BivectorBasis:
    """Ordered index pairs (i < j) with pair <-> flat-index maps."""

    def __init__(self, n: int):
        if n < 2:
            raise ValueError("bivectors need n >= 2")
        self.n = n
        self.pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        self.size = len(self.pairs)
        flat = np.full((n, n), -1, dtype=np.intp)
        for a, (i, j) in enumerate(self.pairs):
            flat[i, j] = flat[j, i] = a
        self.flat = flat
        self.first = np.array([i for i, _ in self.pairs], dtype=np.intp)
        self.second = np.array([j for _, j in self.pairs], dtype=np.intp)

    def index(self, i: int, j: int) -> int:
        a = self.flat[i, j]
        if a < 0:
            raise ValueError(f"({i}, {j}) is not a bivector index pair")
        return int(a)


def to_operator(r4: np.ndarray, basis: BivectorBasis | None = None,
                scale: float | None = None) -> np.ndarray:
    """Curvature operator matrix of a (0,4) tensor in an orthonormal frame.

    Raises if the pair-exchange symmetry is violated beyond 1e-8 times the
    curvature scale.  ``scale`` defaults to the tensor's own norm; pass the
    full curvature norm when converting a derived piece such as the Weyl
    part, which may be pure cancellation noise (n = 3, conformally flat).
    """
    n = r4.shape[0]
    basis = basis or BivectorBasis(n)
    fi, se = basis.first, basis.second
    m = r4[fi[:, None], se[:, None], fi[None, :], se[None, :]]
    scale = max(scale or 0.0, np.linalg.norm(r4), 1e-300)
    if np.abs(m - m.T).max() > 1e-8 * scale:
        raise ValueError("tensor lacks the pair-exchange symmetry")
    return 0.5 * (m + m.T)


def operator_to_tensor(op: np.ndarray, basis: BivectorBasis | None = None) -> np.ndarray:
    """Inverse of :func:`to_operator`: the full antisymmetric (0,4) array."""
    size = op.shape[0]
    n = int(round((1 + np.sqrt(1 + 8 * size)) / 2))
    basis = basis or BivectorBasis(n)
    fi, se = basis.first, basis.second
    t = np.zeros((n, n, n, n))
    t[fi[:, None], se[:, None], fi[None, :], se[None, :]] = op
    t = t - t.transpose(1, 0, 2, 3)
    return t - t.transpose(0, 1, 3, 2)


def bianchi_map(op: np.ndarray, basis: BivectorBasis | None = None) -> np.ndarray:
    """Lambda^4 component of a symmetric bivector operator, one entry per
    sorted quadruple i<j<k<l (C(n,4) of them)."""
    n = int(round((1 + np.sqrt(1 + 8 * op.shape[0])) / 2))
    basis = basis or BivectorBasis(n)
    fl = basis.flat
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                for l in range(k + 1, n):
                    out.append((op[fl[i, j], fl[k, l]]
                                + op[fl[j, k], fl[i, l]]
                                - op[fl[i, k], fl[j, l]]) / 3.0)
    return np.array(out)


def ricci_contraction(op: np.ndarray, basis: BivectorBasis | None = None) -> np.ndarray:
    """r(R)(x, y) = sum_i R(x ^ e_i, y ^ e_i), a symmetric n x n matrix."""
    t = operator_to_tensor(op, basis)
    return np.einsum("aibi->ab", t)


def lift_orthogonal(q: np.ndarray, basis: BivectorBasis | None = None) -> np.ndarray:
    """Matrix of the induced rotation on Lambda^2.

    Column (a, b) holds the bivector coordinates of (Q e_a) ^ (Q e_b); the
    lift of an orthogonal Q is orthogonal for the bivector inner product.
    """
    n = q.shape[0]
    basis = basis or BivectorBasis(n)
    fi, se = basis.first, basis.second
    return (q[fi[:, None], fi[None, :]] * q[se[:, None], se[None, :]]
            - q[se[:, None], fi[None, :]] * q[fi[:, None], se[None, :]])


def conjugate_operator(op: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Operator components in the frame rotated by orthogonal Q (columns)."""
    lift = lift_orthogonal(q)
    return lift.T @ op @ lift


# --- symmetric-matrix vectorization (isometric for Frobenius) -------------


def svec(m: np.ndarray) -> np.ndarray:
    n = m.shape[0]
    iu, ju = np.triu_indices(n)
    w = np.where(iu == ju, 1.0, np.sqrt(2.0))
    return m[iu, ju] * w


def unsvec(v: np.ndarray, n: int) -> np.ndarray:
    iu, ju = np.triu_indices(n)
    w = np.where(iu == ju, 1.0, np.sqrt(2.0))
    m = np.zeros((n, n))
    m[iu, ju] = v / w
    return m + np.triu(m, 1).T


# --- the Weyl subspace ----------------------------------------------------


def weyl_space_dim(n: int) -> int:
    """dim S^2(Lambda^2) - dim Lambda^4 - dim S^2(R^n)."""
    if n < 3:
        raise ValueError("needs n >= 3")
    big_n = n * (n - 1) // 2
    dim = big_n * (big_n + 1) // 2 - comb(n, 4) - n * (n + 1) // 2
    assert dim == n * n * (n * n - 1) // 12 - n * (n + 1) // 2
    return dim


@lru_cache(maxsize=None)
class WeylProjector:
    """Orthogonal projector onto ker(bianchi) intersect ker(ricci).

    Built once per dimension by dense SVD of the stacked constraint matrix
    over svec coordinates of symmetric N x N operators.  ``kernel`` holds an
    orthonormal basis of the Weyl subspace as columns.
    """

    def __init__(self, n: int):
        basis = BivectorBasis(n)
        big_n = basis.size
        dim = big_n * (big_n + 1) // 2
        rows = []
        for d in range(dim):
            e = np.zeros(dim)
            e[d] = 1.0
            op = unsvec(e, big_n)
            rows.append(np.concatenate([bianchi_map(op, basis),
                                        svec(ricci_contraction(op, basis))]))
        constraints = np.array(rows).T  # (n_constraints, dim)
        u, s, vh = np.linalg.svd(constraints)
        rank = int(np.sum(s > RANK_TOL * s[0])) if s.size else 0
        self.n = n
        self.basis = basis
        self.kernel = vh[rank:].T  # (dim, weyl_dim), orthonormal columns
        self.dim = self.kernel.shape[1]

    def project(self, op: np.ndarray) -> np.ndarray:
        v = svec(op)
        return unsvec(self.kernel @ (self.kernel.T @ v), self.basis.size)

    def matrix(self) -> np.ndarray:
        return self.kernel @ self.kernel.T


@dataclass(frozen=True)
class WeylOperator:
    """A curvature operator certified to lie in the Weyl subspace."""

    n: int
    matrix: np.ndarray

    TOL = 1e-10

    def __post_init__(self):
        m = self.matrix
        scale = max(np.linalg.norm(m), 1e-300)
        if np.abs(m - m.T).max() > 1e-12 * scale:
            raise ValueError("Weyl operator matrix must be symmetric")
        if not np.isfinite(m).all():
            raise ValueError("Weyl operator entries must be finite")
        if np.linalg.norm(bianchi_map(m)) > self.TOL * scale:
            raise ValueError("nonzero Bianchi component: not a curvature operator")
        if np.linalg.norm(ricci_contraction(m)) > self.TOL * scale:
            raise ValueError("nonzero Ricci contraction: not a Weyl operator")

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.matrix))

    def tensor(self) -> np.ndarray:
        return operator_to_tensor(self.matrix)


def project_weyl(op: np.ndarray) -> WeylOperator:
    """Orthogonal (Frobenius) projection onto the Weyl subspace.

    Idempotent and self-adjoint; fixes genuine Weyl operators.
    """
    n = int(round((1 + np.sqrt(1 + 8 * op.shape[0])) / 2))
    proj = WeylProjector(n)
    return WeylOperator(n, proj.project(0.5 * (op + op.T)))
