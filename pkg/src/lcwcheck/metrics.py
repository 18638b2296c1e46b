"""Metric specifications: a chart, coordinate names and component expressions.

The JSON document format is the sole external input format of the toolkit:

    {
      "dimension": 4,
      "coordinates": ["x1", "x2", "x3", "x4"],
      "g": [["1", "0", ...], ...],          # n x n expression strings
      "domain": {"x1": [-1.0, 1.0], ...}    # optional chart box
    }

Entries below the diagonal may be ``null``; they are filled by symmetry.
If both triangles are given explicitly, the two entries must parse to
structurally identical trees.  The chart box defaults to [-1, 1] per
coordinate and every sampling operation in the toolkit respects it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import exprs
from .exprs import Node, ParseError

MIN_DIMENSION = 3
MAX_DIMENSION = 8


class MetricError(ValueError):
    """Schema violation, asymmetry or dimension problem in a metric document."""


@dataclass(frozen=True)
class MetricSpec:
    """A symmetric matrix of component expressions on a coordinate box.

    Immutable after parsing; safe to share between concurrent evaluators.
    ``entries[i][j]`` and ``entries[j][i]`` are the same AST object.
    """

    dimension: int
    coordinates: tuple[str, ...]
    entries: tuple[tuple[Node, ...], ...]
    domain: tuple[tuple[float, float], ...]

    def env(self, values) -> dict:
        return dict(zip(self.coordinates, values))

    def component(self, i: int, j: int) -> Node:
        return self.entries[i][j]

    def evaluate(self, point) -> np.ndarray:
        """Plain float evaluation of g at a chart point."""
        env = self.env([float(x) for x in point])
        n = self.dimension
        g = np.empty((n, n))
        for i in range(n):
            for j in range(i, n):
                g[i, j] = g[j, i] = exprs.eval_expr(self.entries[i][j], env)
        return g

    def component_values(self, env: dict) -> list[list]:
        """Evaluate every upper-triangle entry in a prebuilt environment.

        Generic over the scalar type of ``env`` values (floats or jets);
        returns a full n x n nested list with shared objects across the
        diagonal.
        """
        n = self.dimension
        out = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                val = exprs.eval_expr(self.entries[i][j], env)
                out[i][j] = val
                out[j][i] = val
        return out

    def contains(self, point) -> bool:
        return all(lo <= x <= hi for x, (lo, hi) in zip(point, self.domain))

    def domain_center(self) -> np.ndarray:
        return np.array([(lo + hi) / 2.0 for lo, hi in self.domain])

    def sample_points(self, count: int, rng: np.random.Generator) -> np.ndarray:
        lows = np.array([lo for lo, _ in self.domain])
        highs = np.array([hi for _, hi in self.domain])
        return lows + (highs - lows) * rng.random((count, self.dimension))

    def to_document(self) -> dict:
        g = [[exprs.to_source(self.entries[i][j]) for j in range(self.dimension)]
             for i in range(self.dimension)]
        return {
            "dimension": self.dimension,
            "coordinates": list(self.coordinates),
            "g": g,
            "domain": {name: [lo, hi]
                       for name, (lo, hi) in zip(self.coordinates, self.domain)},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_document(), indent=2)


def _check_identifier(name: str) -> None:
    if not name or not (name[0].isalpha() or name[0] == "_"):
        raise MetricError(f"invalid coordinate name {name!r}")
    if not all(c.isalnum() or c == "_" for c in name):
        raise MetricError(f"invalid coordinate name {name!r}")
    if name in exprs.FUNCTIONS:
        raise MetricError(f"coordinate name {name!r} shadows a builtin function")


def make_metric(dimension: int, coordinates, g_sources, domain=None) -> MetricSpec:
    """Validate and assemble a MetricSpec from expression strings.

    ``g_sources`` is an n x n nested sequence of strings, with ``None``
    allowed strictly below the diagonal.
    """
    n = dimension
    if not isinstance(n, int) or not MIN_DIMENSION <= n <= MAX_DIMENSION:
        raise MetricError(
            f"dimension must be an integer in [{MIN_DIMENSION}, {MAX_DIMENSION}], got {dimension!r}")
    coords = tuple(coordinates)
    if len(coords) != n:
        raise MetricError(f"expected {n} coordinate names, got {len(coords)}")
    if len(set(coords)) != n:
        raise MetricError("coordinate names must be distinct")
    for name in coords:
        _check_identifier(name)

    rows = list(g_sources)
    if len(rows) != n or any(len(row) != n for row in rows):
        raise MetricError(f"'g' must be an {n}x{n} array of expressions")

    parsed = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            src = rows[i][j]
            if src is None:
                if j >= i:
                    raise MetricError(f"g[{i}][{j}]: only lower-triangle entries may be omitted")
                continue
            if not isinstance(src, str):
                raise MetricError(f"g[{i}][{j}] must be an expression string")
            try:
                parsed[i][j] = exprs.parse_expr(src, coords)
            except ParseError as exc:
                raise MetricError(f"g[{i}][{j}]: {exc}") from exc

    entries = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            upper, lower = parsed[i][j], parsed[j][i]
            if upper is None:
                raise MetricError(f"g[{i}][{j}] is missing")
            if lower is not None and lower != upper:
                raise MetricError(
                    f"asymmetric entries: g[{i}][{j}] and g[{j}][{i}] are structurally different")
            entries[i][j] = entries[j][i] = upper

    box = [(-1.0, 1.0)] * n
    if domain is not None:
        if not isinstance(domain, dict):
            raise MetricError("'domain' must be an object mapping coordinates to [lo, hi]")
        for name, interval in domain.items():
            if name not in coords:
                raise MetricError(f"domain references unknown coordinate {name!r}")
            try:
                lo, hi = (float(v) for v in interval)
            except (TypeError, ValueError):
                raise MetricError(f"domain for {name!r} must be a [lo, hi] pair") from None
            if not lo < hi:
                raise MetricError(f"domain for {name!r} must satisfy lo < hi")
            box[coords.index(name)] = (lo, hi)

    return MetricSpec(n, coords, tuple(tuple(row) for row in entries), tuple(box))


def parse_metric(document: str) -> MetricSpec:
    """Parse and validate a metric JSON document."""
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise MetricError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise MetricError("document must be a JSON object")
    for key in ("dimension", "coordinates", "g"):
        if key not in doc:
            raise MetricError(f"missing required key {key!r}")
    unknown = set(doc) - {"dimension", "coordinates", "g", "domain"}
    if unknown:
        raise MetricError(f"unknown keys: {sorted(unknown)}")
    return make_metric(doc["dimension"], doc["coordinates"], doc["g"], doc.get("domain"))


def load_metric(path) -> MetricSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_metric(fh.read())


# --- stock charts, used throughout tests and demos ----------------------


def euclidean_metric(n: int, domain=None) -> MetricSpec:
    coords = [f"x{i + 1}" for i in range(n)]
    g = [["1" if i == j else "0" for j in range(n)] for i in range(n)]
    return make_metric(n, coords, g, domain)


def sphere_stereographic_metric(n: int) -> MetricSpec:
    """Round unit sphere in stereographic coordinates: g = 4/(1+|x|^2)^2 delta."""
    coords = [f"x{i + 1}" for i in range(n)]
    r2 = "+".join(f"{c}^2" for c in coords)
    conf = f"4/(1+{r2})^2"
    g = [[conf if i == j else "0" for j in range(n)] for i in range(n)]
    return make_metric(n, coords, g)


def conformally_flat_metric(n: int, log_factor: str, domain=None) -> MetricSpec:
    """g = exp(2 f) delta for a closed-form f given as an expression string."""
    coords = [f"x{i + 1}" for i in range(n)]
    conf = f"exp(2*({log_factor}))"
    g = [[conf if i == j else "0" for j in range(n)] for i in range(n)]
    return make_metric(n, coords, g, domain)
