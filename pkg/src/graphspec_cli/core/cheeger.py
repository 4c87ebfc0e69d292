"""
Isoperimetric (Cheeger) constants of graph families.

Boundaries are always measured against the full family: an edge from W to a
vertex outside the materialized window still counts towards |dW|.
"""

import dataclasses
import logging
from dataclasses import dataclass

import numpy as np

from ..config import (
    ALPHA_ZERO_THRESHOLD,
    DEFAULT_T_GRID,
    EXHAUSTIVE_LIMIT,
    GAP_STRICT_THRESHOLD,
    PSD_TOL,
)
from .errors import ExhaustiveLimitError
from .generators import GraphFamily, Window
from .operator import Truncation, assemble, restrict, truncate
from .spectra import bottom_eigenvalue, bottom_exhaustion, spectral_bounds

logger = logging.getLogger(__name__)

# Subsets are scored in blocks of this many bitmasks
_MASK_BLOCK = 1 << 16


@dataclass(frozen=True)
class CheegerResult:
    """Best ratio |dW|/n(W) found, with the witness set W (window ids)."""

    value: float
    witness: tuple[int, ...]
    mode: str
    radius: int
    boundary: float
    volume: float

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass
class CheegerSeries:
    radii: list[int]
    results: list[CheegerResult]
    limit: float

    @property
    def values(self) -> list[float]:
        return [r.value for r in self.results]

    @property
    def nonincreasing(self) -> bool:
        v = self.values
        return all(b <= a + 1e-12 for a, b in zip(v, v[1:]))


@dataclass(frozen=True)
class CheegerInequality:
    lambda0: float
    alpha: float
    holds: bool


@dataclass(frozen=True)
class DichotomyReport:
    """Joint estimate of (alpha, lambda_hat_1, lambda_hat_2) and their verdict."""

    alpha: float
    lambda_hat_1: float
    lambda_hat_2: float
    alpha_zero: bool
    strict_gap: bool
    consistent: bool
    alpha_threshold: float
    gap_threshold: float
    radii: tuple[int, ...]

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def _window_for(family: GraphFamily, vertices, radius: int | None) -> Window:
    if radius is not None:
        return family.materialize(radius)
    top = max(vertices)
    r = 0
    while True:
        window = family.materialize(r)
        if window.size > top:
            return window
        if not window.has_boundary:
            raise ValueError(f"vertex {top} does not exist in {family.spec}")
        r += 1


def window_boundary(window: Window, vertices) -> tuple[float, float]:
    """(|dW|, n(W)) with n taken from the full family."""
    ids = np.asarray(sorted(set(int(x) for x in vertices)), dtype=np.int64)
    if ids.size and (ids[0] < 0 or ids[-1] >= window.size):
        raise ValueError(f"W is not inside the radius-{window.radius} window")
    inside = np.zeros(window.size, dtype=bool)
    inside[ids] = True
    g = window.graph
    internal = float(np.sum(g.edge_b[inside[g.edge_u] & inside[g.edge_v]]))
    volume = float(np.sum(window.full_degree[ids]))
    return volume - 2.0 * internal, volume


def boundary_measure(
    family: GraphFamily, vertices, radius: int | None = None
) -> tuple[float, float]:
    """
    (|dW|, n(W)) for a set of family vertex ids.

    Args:
        family: Graph family
        vertices: Window ids of W
        radius: Window to read the edges from; the smallest window containing
            W is used when omitted
    """
    vertices = list(vertices)
    if not vertices:
        raise ValueError("W must be nonempty")
    return window_boundary(_window_for(family, vertices, radius), vertices)


def _exhaustive(window: Window, ids, mode_radius: int) -> CheegerResult:
    ids = np.asarray(list(ids), dtype=np.int64)
    n = ids.size
    if n > EXHAUSTIVE_LIMIT:
        raise ExhaustiveLimitError(
            f"{n} vertices exceed the exhaustive limit of {EXHAUSTIVE_LIMIT}; "
            "use the sweep or family modes"
        )
    if n == 0:
        raise ValueError("cannot minimize over an empty vertex set")

    local = {int(x): i for i, x in enumerate(ids)}
    g = window.graph
    keep = np.isin(g.edge_u, ids) & np.isin(g.edge_v, ids)
    eu = np.array([local[int(x)] for x in g.edge_u[keep]], dtype=np.int64)
    ev = np.array([local[int(x)] for x in g.edge_v[keep]], dtype=np.int64)
    eb = g.edge_b[keep]
    degree = window.full_degree[ids]
    shifts = np.arange(n, dtype=np.int64)

    best_value, best_mask = np.inf, 0
    best_boundary = best_volume = 0.0
    total = 1 << n
    for start in range(1, total, _MASK_BLOCK):
        masks = np.arange(start, min(start + _MASK_BLOCK, total), dtype=np.int64)
        bits = ((masks[:, None] >> shifts) & 1).astype(bool)
        volume = bits @ degree
        internal = (bits[:, eu] & bits[:, ev]) @ eb if eb.size else np.zeros(masks.size)
        boundary = volume - 2.0 * internal
        ratio = boundary / volume
        i = int(np.argmin(ratio))
        if ratio[i] < best_value:
            best_value, best_mask = float(ratio[i]), int(masks[i])
            best_boundary, best_volume = float(boundary[i]), float(volume[i])

    witness = tuple(int(ids[j]) for j in range(n) if best_mask >> j & 1)
    logger.debug("exhaustive Cheeger over %d subsets: %.12g", total - 1, best_value)
    return CheegerResult(
        best_value, witness, "exhaustive", mode_radius, best_boundary, best_volume
    )


def cheeger_exhaustive(family: GraphFamily, radius: int) -> CheegerResult:
    """
    min over nonempty W in B_R of |dW|/n(W), by enumeration.

    Raises:
        ExhaustiveLimitError: If B_R has more than EXHAUSTIVE_LIMIT vertices
    """
    window = family.materialize(radius)
    return _exhaustive(window, range(window.ball_size(radius)), radius)


def cheeger_family(family: GraphFamily, radii) -> CheegerSeries:
    """
    beta(R) = |dB_R| / n(B_R) along ``radii``.

    The limit is the intercept of a least-squares fit of beta against 1/R
    over the upper half of the radii.
    """
    radii = sorted(int(r) for r in radii)
    results = []
    for r in radii:
        window = family.materialize(r)
        ball = range(window.ball_size(r))
        boundary, volume = window_boundary(window, ball)
        results.append(
            CheegerResult(boundary / volume, tuple(ball), "family", r, boundary, volume)
        )

    top = [(r, res.value) for r, res in zip(radii, results) if r > 0]
    top = top[len(top) // 2 :]
    if len(top) >= 2:
        x = np.array([1.0 / r for r, _ in top])
        y = np.array([v for _, v in top])
        _, limit = np.polyfit(x, y, 1)
    else:
        limit = results[-1].value if results else 0.0
    return CheegerSeries(radii, results, float(limit))


def _normalized(tr: Truncation) -> Truncation:
    graph = tr.graph.with_measure(tr.full_degree).with_potential(0.0)
    return dataclasses.replace(tr, graph=graph)


def _prefix_ratios(
    window: Window, ids: np.ndarray, order: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Boundary, volume and ratio of every prefix of ``order`` (local indices)."""
    n = ids.size
    rank = np.empty(n, dtype=np.int64)
    rank[order] = np.arange(n)
    local = np.full(window.size, -1, dtype=np.int64)
    local[ids] = np.arange(n)

    g = window.graph
    lu, lv = local[g.edge_u], local[g.edge_v]
    keep = (lu >= 0) & (lv >= 0)
    entered = np.maximum(rank[lu[keep]], rank[lv[keep]])
    internal = np.zeros(n)
    np.add.at(internal, entered, g.edge_b[keep])
    internal = np.cumsum(internal)

    volume = np.cumsum(window.full_degree[ids][order])
    boundary = volume - 2.0 * internal
    return boundary, volume, boundary / volume


def _sweep(window: Window, ids, radius: int) -> CheegerResult:
    ids = np.asarray(list(ids), dtype=np.int64)
    tr = _normalized(restrict(window, ids, radius=radius))
    L = assemble(tr)
    k = min(2, tr.size)
    _, vecs = L.bottom(k)
    functions = vecs / L.sqrt_m[:, None]

    orderings = [np.argsort(-np.abs(functions[:, 0]), kind="stable")]
    if k > 1:
        fiedler = functions[:, 1]
        orderings.append(np.argsort(fiedler, kind="stable"))
        orderings.append(np.argsort(-fiedler, kind="stable"))

    best = None
    for order in orderings:
        boundary, volume, ratio = _prefix_ratios(window, ids, order)
        i = int(np.argmin(ratio))
        if best is None or ratio[i] < best[0]:
            witness = tuple(sorted(int(ids[j]) for j in order[: i + 1]))
            best = (float(ratio[i]), witness, float(boundary[i]), float(volume[i]))
    value, witness, boundary, volume = best
    logger.debug("sweep Cheeger over %d vertices: %.12g", ids.size, value)
    return CheegerResult(value, witness, "sweep", radius, boundary, volume)


def cheeger_sweep(family: GraphFamily, radius: int) -> CheegerResult:
    """
    Upper bound from sweeping prefixes of spectral orderings of B_R.

    Orderings come from the ground state and from both directions of the
    second eigenvector of the normalized truncation; the whole ball is always
    a candidate.
    """
    window = family.materialize(radius)
    return _sweep(window, range(window.ball_size(radius)), radius)


def cheeger_at_infinity(
    family: GraphFamily, inner_radius: int, radius: int
) -> CheegerResult:
    """
    The Cheeger minimization restricted to W in B_R minus B_K.

    Exhaustive when the annulus is small enough, otherwise the smaller of the
    whole-annulus ratio and the sweep value (mode ``sweep``).
    """
    if inner_radius > radius:
        raise ValueError(f"K={inner_radius} exceeds R={radius}")
    window = family.materialize(radius)
    start = window.ball_size(inner_radius) if inner_radius > 0 else 0
    ids = range(start, window.ball_size(radius))
    if len(ids) == 0:
        raise ValueError(f"annulus B_{radius} minus B_{inner_radius} is empty")
    if len(ids) <= EXHAUSTIVE_LIMIT:
        return _exhaustive(window, ids, radius)

    boundary, volume = window_boundary(window, ids)
    whole = CheegerResult(boundary / volume, tuple(ids), "sweep", radius, boundary, volume)
    swept = _sweep(window, ids, radius)
    return swept if swept.value < whole.value else whole


def cheeger_inequality_check(family: GraphFamily, radius: int) -> CheegerInequality:
    """
    lambda_0 of the normalized Dirichlet truncation to B_R is at least alpha^2 / 2.

    Raises:
        ValueError: If the family carries a potential
        ExhaustiveLimitError: If B_R is too large to enumerate
    """
    normalized = family.with_measure("mn")
    tr = truncate(normalized, radius, 0)
    if np.any(tr.graph.c != 0):
        raise ValueError("the Cheeger inequality check needs c = 0")
    lambda0 = bottom_eigenvalue(assemble(tr))
    alpha = cheeger_exhaustive(normalized, radius).value
    return CheegerInequality(lambda0, alpha, lambda0 >= alpha**2 / 2 - PSD_TOL)


def alpha_dichotomy_check(
    family: GraphFamily,
    radii,
    t_grid=DEFAULT_T_GRID,
    alpha_threshold: float = ALPHA_ZERO_THRESHOLD,
    gap_threshold: float = GAP_STRICT_THRESHOLD,
) -> DichotomyReport:
    """
    Evidence that alpha = 0 exactly when the l^1 and l^2 spectral bounds agree.

    alpha comes from the family limit, lambda_hat_1 from the largest radius
    and lambda_hat_2 from the extrapolated exhaustion limit; the two limits
    are clamped at 0.
    """
    radii = sorted(int(r) for r in radii)
    normalized = family.with_measure("mn")
    alpha = max(cheeger_family(normalized, radii).limit, 0.0)
    lambda_2 = max(bottom_exhaustion(normalized, radii).limit, 0.0)
    lambda_1 = spectral_bounds(truncate(normalized, radii[-1], 0), t_grid)["1"]

    alpha_zero = alpha < alpha_threshold
    strict_gap = lambda_2 - lambda_1 > gap_threshold
    return DichotomyReport(
        alpha=alpha,
        lambda_hat_1=lambda_1,
        lambda_hat_2=lambda_2,
        alpha_zero=alpha_zero,
        strict_gap=strict_gap,
        consistent=alpha_zero != strict_gap,
        alpha_threshold=alpha_threshold,
        gap_threshold=gap_threshold,
        radii=tuple(radii),
    )
