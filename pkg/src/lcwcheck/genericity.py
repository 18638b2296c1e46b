"""Sampling experiments behind the genericity picture.

Random Weyl operators (Gaussian in the ambient operator space, projected
onto the Weyl subspace, normalized) should stay away from the eigenflag
set, whose codimension is positive; residual statistics over such samples
calibrate the "not eigenflag" threshold empirically.  The calibration is
an artifact of the sampling, not a quantity with an analytic value, and
is therefore seed-stamped in every report.

Grid scans walk a chart box and tabulate the pointwise obstruction (the
normalized eigenflag residual for n >= 4, det of the Cotton-York tensor
for n = 3).  Scans are deterministic: fixed-order traversal, floats
printed with 17 significant digits, so equal seeds give identical bytes.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .bivectors import BivectorBasis, WeylOperator, WeylProjector, to_operator
from .cottonyork import (DEFAULT_DET_TOL, DEFAULT_ZERO_FLOOR, CottonYorkTensor,
                         classify_cy)
from .curvature import curvature_package
from .eigenflag import (DEFAULT_TOL_EIGENFLAG, DEFAULT_TOL_NOT_EIGENFLAG,
                        min_residual)
from .exprs import EvalError
from .jets import MetricNotPositive
from .metrics import MetricSpec, make_metric


def fmt17(x: float) -> str:
    return format(float(x), ".17g")


def sample_weyl(n: int, rng: np.random.Generator) -> WeylOperator:
    """Unit-Frobenius-norm Weyl operator, orthogonally invariant in law.

    Gaussian on the symmetric bivector operators, projected by the Weyl
    projector (both steps equivariant under frame rotation), normalized.
    """
    if n < 4:
        raise ValueError("Weyl operators vanish below dimension 4")
    basis = BivectorBasis(n)
    a = rng.standard_normal((basis.size, basis.size))
    proj = WeylProjector(n).project(0.5 * (a + a.T))
    norm = np.linalg.norm(proj)
    if norm == 0.0:  # pragma: no cover - probability zero
        return sample_weyl(n, rng)
    return WeylOperator(n, proj / norm)


@dataclass(frozen=True)
class SampleStats:
    """Residual statistics over a seeded batch of random Weyl operators."""

    n: int
    count: int
    seed: int
    residuals: np.ndarray       # normalized min residual per sample, input order
    quantiles: dict             # min / q05 / q50 / q95
    threshold: float            # calibrated not-eigenflag threshold (5% quantile)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("index,residual_min,verdict\n")
        for k, r in enumerate(self.residuals):
            verdict = ("eigenflag_within_tol" if r < DEFAULT_TOL_EIGENFLAG
                       else "not_eigenflag" if r > DEFAULT_TOL_NOT_EIGENFLAG
                       else "inconclusive")
            buf.write(f"{k},{fmt17(r)},{verdict}\n")
        return buf.getvalue()


def residual_statistics(n: int, count: int, seed: int, starts: int | None = None,
                        extra_operators=()) -> SampleStats:
    """Minimize the eigenflag residual over ``count`` seeded samples.

    ``extra_operators`` are appended after the random batch (e.g. a planted
    stratum operator, to confirm the detector reports a near-zero minimum).
    The exported threshold is the 5% quantile of the random batch.
    """
    rng = np.random.default_rng(seed)
    ops = [sample_weyl(n, rng) for _ in range(count)]
    ops.extend(extra_operators)
    residuals = np.array([min_residual(op, starts=starts).residual_min for op in ops])
    random_part = residuals[:count]
    quantiles = {
        "min": float(residuals.min()),
        "q05": float(np.quantile(random_part, 0.05)),
        "q50": float(np.quantile(random_part, 0.50)),
        "q95": float(np.quantile(random_part, 0.95)),
    }
    return SampleStats(n, count, seed, residuals, quantiles, quantiles["q05"])


# --- random polynomial metrics (test fodder and demo material) --------------


def random_polynomial_metric(n: int, rng: np.random.Generator, degree: int = 3,
                             amplitude: float = 0.04) -> MetricSpec:
    """delta_ij plus small random polynomial entries of the given degree.

    The amplitude default keeps the result positive definite on the unit
    box with a wide margin.
    """
    coords = [f"x{i + 1}" for i in range(n)]
    monomials = [""]

    def build(prefix, start, deg):
        for c in range(start, n):
            term = f"{prefix}*{coords[c]}" if prefix else coords[c]
            monomials.append(term)
            if deg > 1:
                build(term, c, deg - 1)

    build("", 0, degree)
    monos = monomials[1:]
    g = []
    for i in range(n):
        row = []
        for j in range(n):
            if j < i:
                row.append(None)
                continue
            src = "1" if i == j else "0"
            for mono in monos:
                c = rng.uniform(-amplitude, amplitude) / len(monos)
                src += ("+" if c >= 0 else "-") + f"{repr(abs(c))}*{mono}"
            row.append(src)
        g.append(row)
    return make_metric(n, coords, g)


# --- grid scans --------------------------------------------------------------


@dataclass(frozen=True)
class ScanRow:
    point: tuple
    norm: float
    obstruction: float
    verdict: str


@dataclass(frozen=True)
class ScanResult:
    spec_dimension: int
    grid: tuple
    rows: tuple

    def to_csv(self) -> str:
        buf = io.StringIO()
        names = ",".join(f"x{i + 1}" for i in range(self.spec_dimension))
        buf.write(f"{names},norm,obstruction,verdict\n")
        for row in self.rows:
            coords = ",".join(fmt17(x) for x in row.point)
            buf.write(f"{coords},{fmt17(row.norm)},{fmt17(row.obstruction)},{row.verdict}\n")
        return buf.getvalue()


def scan_metric(spec: MetricSpec, grid, starts: int | None = None, seed=None,
                orientation: int = 1,
                tol_eigenflag: float = DEFAULT_TOL_EIGENFLAG,
                tol_not_eigenflag: float = DEFAULT_TOL_NOT_EIGENFLAG,
                tol_det: float = DEFAULT_DET_TOL) -> ScanResult:
    """Tabulate the pointwise obstruction over a grid inside the chart box.

    Pipeline failures at individual points become ``error:...`` rows rather
    than aborting the scan.  Row order is the C-order product of the
    per-axis grids, so output is byte-stable.
    """
    n = spec.dimension
    grid = tuple(int(k) for k in grid)
    if len(grid) != n or any(k < 1 for k in grid):
        raise ValueError(f"grid must give a positive count per each of {n} axes")
    axes = [np.linspace(lo, hi, k) if k > 1 else np.array([(lo + hi) / 2.0])
            for (lo, hi), k in zip(spec.domain, grid)]
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n)

    rows = []
    for point in mesh:
        try:
            pkg = curvature_package(spec, point, orientation)
            if n == 3:
                cy = CottonYorkTensor.from_matrix(pkg.cotton_york)
                verdict = classify_cy(cy, tol_det, DEFAULT_ZERO_FLOOR * (1.0 + pkg.riemann_norm))
                rows.append(ScanRow(tuple(point), cy.norm, cy.determinant, verdict))
            else:
                op = to_operator(pkg.weyl, scale=pkg.riemann_norm)
                report = min_residual(
                    op, starts=starts, seed=seed,
                    tol_eigenflag=tol_eigenflag, tol_not_eigenflag=tol_not_eigenflag,
                    weyl_floor=1e-12 * (1.0 + pkg.riemann_norm))
                rows.append(ScanRow(tuple(point), report.weyl_norm,
                                    report.residual_min, report.verdict))
        except (EvalError, MetricNotPositive, np.linalg.LinAlgError, ValueError) as exc:
            rows.append(ScanRow(tuple(point), float("nan"), float("nan"),
                                f"error:{type(exc).__name__}"))
    return ScanResult(n, grid, tuple(rows))
