"""Pointwise curvature pipeline: Christoffel symbols through Cotton-York.

Conventions, fixed once for the whole toolkit:

* ``R4[i, j, k, l]`` is the (0,4) curvature with the operator arrangement
  ``rho(e_i ^ e_j, e_k ^ e_l) = R4[i, j, k, l]``: antisymmetric in (i, j)
  and in (k, l), symmetric under pair exchange, first Bianchi identity.
  Sectional curvature of the plane (e_i, e_j) of an orthonormal frame is
  ``R4[i, j, i, j]``; the round unit sphere comes out positive.
* ``Ric(u, v) = sum_a R4(u, e_a, v, e_a)`` over a g-orthonormal frame,
  equivalently contraction with the inverse metric on slots 2 and 4.
* Schouten ``S = (Ric - s g / (2(n-1))) / (n-2)``.
* Kulkarni-Nomizu ``(a ^o b)_ijkl = a_ik b_jl + a_jl b_ik - a_il b_jk
  - a_jk b_il`` (the symmetric form, which satisfies r(S ^o g) = Ric).
* Weyl ``W = R4 - S ^o g``; Cotton ``C_ijk = (D_i S)_jk - (D_j S)_ik``;
  Cotton-York (n=3 only) via the raised volume form, see
  :func:`cotton_york`.

Operator-level work downstream assumes an orthonormal frame, so the
package driver rotates every tensor into the frame produced by the
Cholesky factor of g (whose determinant is positive, hence the frame is
positively oriented relative to the chart).

Derivatives of curvature (needed for the Cotton tensor) are propagated
with explicit chain rules from the exact metric jets; finite differences
never enter the pipeline (they are a test oracle only).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .jets import MetricJets, metric_jets

_EPS3 = np.zeros((3, 3, 3))
for _i, _j, _k, _s in ((0, 1, 2, 1), (1, 2, 0, 1), (2, 0, 1, 1),
                       (0, 2, 1, -1), (2, 1, 0, -1), (1, 0, 2, -1)):
    _EPS3[_i, _j, _k] = _s


class DimensionError(ValueError):
    """Operation invoked in a dimension where it is undefined."""


# --- individual pipeline stages ------------------------------------------


def christoffel(mj: MetricJets):
    """Christoffel symbols and their first two coordinate derivatives.

    Returns ``(gamma, dgamma, d2gamma)`` with ``gamma[k, i, j]`` the symbol
    with upper index k, ``dgamma[b, k, i, j]`` its b-derivative and
    ``d2gamma[b, c, k, i, j]`` the second derivative, all exact given the
    metric jets.
    """
    g, dg, d2g, d3g = mj.g, mj.dg, mj.d2g, mj.d3g
    ginv = np.linalg.inv(g)
    dginv = -np.einsum("ij,ajk,kl->ail", ginv, dg, ginv)
    d2ginv = (np.einsum("ij,bjk,kl,alm,mp->abip", ginv, dg, ginv, dg, ginv)
              + np.einsum("ij,ajk,kl,blm,mp->abip", ginv, dg, ginv, dg, ginv)
              - np.einsum("ij,abjk,kl->abil", ginv, d2g, ginv))

    s3 = np.einsum("ijl->ijl", dg) + np.einsum("jil->ijl", dg) - np.einsum("lij->ijl", dg)
    ds3 = (np.einsum("bijl->bijl", d2g) + np.einsum("bjil->bijl", d2g)
           - np.einsum("blij->bijl", d2g))
    d2s3 = (np.einsum("bcijl->bcijl", d3g) + np.einsum("bcjil->bcijl", d3g)
            - np.einsum("bclij->bcijl", d3g))

    gamma = 0.5 * np.einsum("kl,ijl->kij", ginv, s3)
    dgamma = 0.5 * (np.einsum("bkl,ijl->bkij", dginv, s3)
                    + np.einsum("kl,bijl->bkij", ginv, ds3))
    d2gamma = 0.5 * (np.einsum("bckl,ijl->bckij", d2ginv, s3)
                     + np.einsum("bkl,cijl->bckij", dginv, ds3)
                     + np.einsum("ckl,bijl->bckij", dginv, ds3)
                     + np.einsum("kl,bcijl->bckij", ginv, d2s3))
    return gamma, dgamma, d2gamma


def riemann(gamma: np.ndarray, dgamma: np.ndarray, g: np.ndarray) -> np.ndarray:
    """(0,4) curvature from the symbols: R^m_uvw = d_u G^m_vw - d_v G^m_uw
    + G^m_ua G^a_vw - G^m_va G^a_uw, lowered into the operator arrangement."""
    rup = (np.einsum("umvw->muvw", dgamma) - np.einsum("vmuw->muvw", dgamma)
           + np.einsum("mua,avw->muvw", gamma, gamma)
           - np.einsum("mva,auw->muvw", gamma, gamma))
    return np.einsum("km,mijl->ijkl", g, rup)


def ricci_scalar(r4: np.ndarray, g: np.ndarray):
    """Ricci tensor and scalar curvature by inverse-metric contraction."""
    ginv = np.linalg.inv(g)
    ric = np.einsum("kl,ikjl->ij", ginv, r4)
    s = float(np.einsum("ij,ij->", ginv, ric))
    return ric, s


def schouten(ric: np.ndarray, s: float, g: np.ndarray, n: int) -> np.ndarray:
    if n < 3:
        raise DimensionError("Schouten tensor needs dimension >= 3")
    return (ric - s * g / (2.0 * (n - 1))) / (n - 2)


def kulkarni_nomizu(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Symmetric product of two symmetric 2-tensors, with all curvature
    symmetries and vanishing Bianchi component."""
    return (np.einsum("ik,jl->ijkl", a, b) + np.einsum("jl,ik->ijkl", a, b)
            - np.einsum("il,jk->ijkl", a, b) - np.einsum("jk,il->ijkl", a, b))


def weyl_tensor(r4: np.ndarray, s2: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Totally trace-free curvature part W = R - S ^o g (vanishes for n=3)."""
    return r4 - kulkarni_nomizu(s2, g)


def cotton(s2: np.ndarray, ds2: np.ndarray, gamma: np.ndarray) -> np.ndarray:
    """C_ijk = (D_i S)_jk - (D_j S)_ik from S, its coordinate derivative
    ``ds2[a, b, c] = d_a S_bc`` and the symbols."""
    nabla_s = (ds2 - np.einsum("dab,dc->abc", gamma, s2)
               - np.einsum("dac,bd->abc", gamma, s2))
    return nabla_s - np.einsum("jik->ijk", nabla_s)


def cotton_york(c: np.ndarray, g: np.ndarray, orientation: int = 1) -> np.ndarray:
    """Hodge dual of the Cotton tensor, n = 3 only.

    Uses the pure permutation symbol with the explicit sqrt(det g) factor;
    ``orientation`` (+1/-1) flips the symbol, mapping CY to -CY.  The result
    is symmetric and trace-free up to roundoff.
    """
    if c.shape != (3, 3, 3):
        raise DimensionError("Cotton-York tensor is defined in dimension 3 only")
    if orientation not in (1, -1):
        raise ValueError("orientation must be +1 or -1")
    ginv = np.linalg.inv(g)
    craised = np.einsum("ak,bl,kli->abi", ginv, ginv, c)
    vol = orientation * np.sqrt(np.linalg.det(g)) * _EPS3
    return 0.5 * np.einsum("abi,abj->ij", craised, vol)


# --- frames and rotation --------------------------------------------------


def orthonormal_frame(g: np.ndarray) -> np.ndarray:
    """Columns form a g-orthonormal frame: F^T g F = I, det F > 0."""
    lower = np.linalg.cholesky(g)
    return np.linalg.inv(lower).T


def rotate_tensor(t: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Re-express a (0,k) tensor in the basis given by the matrix columns."""
    for _ in range(t.ndim):
        t = np.tensordot(t, basis, axes=([0], [0]))
    return t


# --- the assembled package -------------------------------------------------


@dataclass(frozen=True)
class CoordinateTensors:
    """Chart-coordinate components, kept for conformal-invariance checks."""

    riemann: np.ndarray
    ricci: np.ndarray
    schouten: np.ndarray
    grad_schouten: np.ndarray
    cotton: np.ndarray
    weyl: np.ndarray
    cotton_york: np.ndarray | None


@dataclass(frozen=True)
class CurvaturePackage:
    """Every pointwise tensor of the pipeline at one chart point.

    Tensor components (`riemann` through `cotton_york`) are stored in the
    g-orthonormal frame defined by ``frame``; the symbols ``gamma`` /
    ``dgamma`` and everything inside ``coord`` stay in chart coordinates.
    ``cotton_york`` is None unless n = 3.
    """

    point: np.ndarray
    g: np.ndarray
    frame: np.ndarray
    gamma: np.ndarray
    dgamma: np.ndarray
    riemann: np.ndarray
    ricci: np.ndarray
    scalar: float
    schouten: np.ndarray
    grad_schouten: np.ndarray
    cotton: np.ndarray
    weyl: np.ndarray
    cotton_york: np.ndarray | None
    coord: CoordinateTensors
    orientation: int

    @property
    def n(self) -> int:
        return self.g.shape[0]

    @property
    def riemann_norm(self) -> float:
        return float(np.linalg.norm(self.riemann))

    @property
    def weyl_norm(self) -> float:
        return float(np.linalg.norm(self.weyl))

    @property
    def cotton_norm(self) -> float:
        return float(np.linalg.norm(self.cotton))

    @property
    def cotton_york_norm(self) -> float:
        return 0.0 if self.cotton_york is None else float(np.linalg.norm(self.cotton_york))

    @property
    def cotton_york_det(self) -> float:
        if self.cotton_york is None:
            raise DimensionError("Cotton-York determinant is defined in dimension 3 only")
        return float(np.linalg.det(self.cotton_york))


def package_from_jets(mj: MetricJets, orientation: int = 1) -> CurvaturePackage:
    """Run the whole pipeline on precomputed metric jets."""
    n = mj.n
    g, dg = mj.g, mj.dg
    ginv = np.linalg.inv(g)
    dginv = -np.einsum("ij,ajk,kl->ail", ginv, dg, ginv)

    gamma, dgamma, d2gamma = christoffel(mj)

    rup = (np.einsum("umvw->muvw", dgamma) - np.einsum("vmuw->muvw", dgamma)
           + np.einsum("mua,avw->muvw", gamma, gamma)
           - np.einsum("mva,auw->muvw", gamma, gamma))
    drup = (np.einsum("bumvw->bmuvw", d2gamma) - np.einsum("bvmuw->bmuvw", d2gamma)
            + np.einsum("bmua,avw->bmuvw", dgamma, gamma)
            + np.einsum("mua,bavw->bmuvw", gamma, dgamma)
            - np.einsum("bmva,auw->bmuvw", dgamma, gamma)
            - np.einsum("mva,bauw->bmuvw", gamma, dgamma))

    r4 = np.einsum("km,mijl->ijkl", g, rup)
    dr4 = (np.einsum("bkm,mijl->bijkl", dg, rup)
           + np.einsum("km,bmijl->bijkl", g, drup))

    ric = np.einsum("kl,ikjl->ij", ginv, r4)
    dric = (np.einsum("bkl,ikjl->bij", dginv, r4)
            + np.einsum("kl,bikjl->bij", ginv, dr4))

    s = float(np.einsum("ij,ij->", ginv, ric))
    ds = np.einsum("bij,ij->b", dginv, ric) + np.einsum("ij,bij->b", ginv, dric)

    s2 = schouten(ric, s, g, n)
    ds2 = (dric - (np.einsum("b,ij->bij", ds, g) + s * dg) / (2.0 * (n - 1))) / (n - 2)

    nabla_s = (ds2 - np.einsum("dab,dc->abc", gamma, s2)
               - np.einsum("dac,bd->abc", gamma, s2))
    c3 = nabla_s - np.einsum("jik->ijk", nabla_s)
    w4 = weyl_tensor(r4, s2, g)
    cy = cotton_york(c3, g, orientation) if n == 3 else None

    frame = orthonormal_frame(g)
    coord = CoordinateTensors(r4, ric, s2, nabla_s, c3, w4, cy)
    return CurvaturePackage(
        point=mj.point,
        g=g,
        frame=frame,
        gamma=gamma,
        dgamma=dgamma,
        riemann=rotate_tensor(r4, frame),
        ricci=rotate_tensor(ric, frame),
        scalar=s,
        schouten=rotate_tensor(s2, frame),
        grad_schouten=rotate_tensor(nabla_s, frame),
        cotton=rotate_tensor(c3, frame),
        weyl=rotate_tensor(w4, frame),
        cotton_york=None if cy is None else rotate_tensor(cy, frame),
        coord=coord,
        orientation=orientation,
    )


def curvature_package(spec, point, orientation: int = 1) -> CurvaturePackage:
    """Evaluate the full pipeline for a metric spec at a chart point."""
    return package_from_jets(metric_jets(spec, point), orientation)
