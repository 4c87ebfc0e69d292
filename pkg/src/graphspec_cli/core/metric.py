"""
Pseudo metrics on weighted graphs.

Path metrics come from positive edge weightings via Dijkstra. Small graphs get
a dense all-pairs table; larger ones compute single-source rows on demand.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import dijkstra

from ..config import (
    BALL_TOL,
    DENSE_METRIC_LIMIT,
    INTRINSIC_RTOL,
    TRIANGLE_EXHAUSTIVE_LIMIT,
    MetricChoice,
)
from .errors import LipschitzError, MetricError
from .graph import WeightedGraph, normalizing_measure

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EdgeWeighting:
    """Positive weight per stored edge of a graph, aligned with ``g.edges``."""

    weights: np.ndarray
    name: str = "user"

    def __post_init__(self):
        arr = np.asarray(self.weights, dtype=float)
        arr.setflags(write=False)
        object.__setattr__(self, "weights", arr)


class PseudoMetric:
    """
    Distance function on the vertices of a finite graph.

    Unreachable pairs carry ``inf`` and are excluded from balls.
    """

    def __init__(
        self,
        vertex_count: int,
        provenance: str,
        weights: sp.csr_matrix | None = None,
        table: np.ndarray | None = None,
        edges: tuple[np.ndarray, np.ndarray] | None = None,
    ):
        if weights is None and table is None:
            raise ValueError("PseudoMetric needs edge weights or a distance table")
        self.vertex_count = vertex_count
        self.provenance = provenance
        self._weights = weights
        self._edges = edges
        self._rows: dict[int, np.ndarray] = {}
        if table is not None:
            table = np.asarray(table, dtype=float)
            table.setflags(write=False)
            self.__dict__["table"] = table

    def __repr__(self) -> str:
        return f"<PseudoMetric {self.provenance} on {self.vertex_count} vertices>"

    @property
    def is_dense(self) -> bool:
        return "table" in self.__dict__ or self.vertex_count <= DENSE_METRIC_LIMIT

    @cached_property
    def table(self) -> np.ndarray:
        """Dense |X| x |X| distance table."""
        logger.debug("all-pairs %s distances on %d vertices", self.provenance, self.vertex_count)
        table = dijkstra(self._weights, directed=False)
        table.setflags(write=False)
        return table

    def row(self, x: int) -> np.ndarray:
        """Distances from ``x`` to every vertex."""
        if self.is_dense:
            return self.table[x]
        if x not in self._rows:
            self._rows[x] = dijkstra(self._weights, directed=False, indices=x)
        return self._rows[x]

    def rows(self, sources: Sequence[int]) -> np.ndarray:
        if self.is_dense:
            return self.table[np.asarray(sources, dtype=np.int64)]
        return np.vstack([self.row(int(x)) for x in sources])

    def block(self, sources: Sequence[int], targets: Sequence[int]) -> np.ndarray:
        """Distances from ``sources`` to ``targets``, computed in uncached chunks."""
        sources = np.asarray(sources, dtype=np.int64)
        targets = np.asarray(targets, dtype=np.int64)
        if "table" in self.__dict__:
            return self.table[np.ix_(sources, targets)]
        out = np.empty((sources.size, targets.size))
        chunk = max(1, 2_000_000 // max(self.vertex_count, 1))
        for start in range(0, sources.size, chunk):
            rows = dijkstra(
                self._weights, directed=False, indices=sources[start : start + chunk]
            )
            out[start : start + chunk] = rows[:, targets]
        return out

    def distance(self, x: int, y: int) -> float:
        return float(self.row(x)[y])

    def edge_distances(self, g: WeightedGraph) -> np.ndarray:
        """d(u, v) for every stored edge of ``g``."""
        if self.is_dense:
            return self.table[g.edge_u, g.edge_v]
        # d(u, v) never exceeds the direct edge weight, so a local search suffices
        limit = float(self._weights.data.max()) if self._weights.nnz else 0.0
        sources = np.unique(g.edge_u)
        local = dijkstra(self._weights, directed=False, indices=sources, limit=limit)
        pos = np.searchsorted(sources, g.edge_u)
        return local[pos, g.edge_v]

    @cached_property
    def jump_size(self) -> float:
        """max over edges of d(x, y); 0 for edgeless metrics."""
        if self._edges is None:
            return 0.0
        u, v = self._edges
        if len(u) == 0:
            return 0.0
        if self.is_dense:
            return float(np.max(self.table[u, v]))
        g_like = _EdgeView(u, v)
        return float(np.max(self.edge_distances(g_like)))

    def scaled(self, factor: float) -> "PseudoMetric":
        """The metric factor * d."""
        if factor <= 0:
            raise MetricError(f"scaling factor must be > 0, got {factor}")
        weights = None if self._weights is None else self._weights * factor
        table = self.table * factor if self.is_dense else None
        return PseudoMetric(
            self.vertex_count,
            f"{self.provenance}*{factor:g}",
            weights=weights,
            table=table,
            edges=self._edges,
        )

    def check(self, samples: int = 20_000, seed: int = 0) -> list[str]:
        """
        Verify zero diagonal, symmetry and the triangle inequality.

        Triangles are checked exhaustively up to TRIANGLE_EXHAUSTIVE_LIMIT
        vertices and by seeded sampling above.

        Returns:
            List of human-readable problems (empty when the metric is valid)
        """
        problems = []
        n = self.vertex_count
        tol = 1e-12

        if self.is_dense:
            t = self.table
            if np.any(np.diag(t) != 0):
                problems.append("nonzero diagonal entry")
            finite = np.isfinite(t)
            if not np.array_equal(finite, finite.T):
                problems.append("table is not symmetric")
            else:
                a = np.where(finite, t, 0.0)
                if np.any(np.abs(a - a.T) > tol * (1 + np.abs(a))):
                    problems.append("table is not symmetric")

        if n <= TRIANGLE_EXHAUSTIVE_LIMIT:
            t = self.table
            # d(x, z) <= d(x, y) + d(y, z) for all y at once
            for x in range(n):
                via = np.min(t[x][:, None] + t, axis=0)
                bad = np.flatnonzero(t[x] > via + tol * (1 + via))
                if bad.size:
                    problems.append(f"triangle inequality fails for ({x}, {int(bad[0])})")
                    break
        else:
            rng = np.random.default_rng(seed)
            xs, ys, zs = (rng.integers(0, n, samples) for _ in range(3))
            for x, y, z in zip(xs, ys, zs):
                dxz = self.distance(x, z)
                bound = self.distance(x, y) + self.distance(y, z)
                if dxz > bound + tol * (1 + bound):
                    problems.append(f"triangle inequality fails for ({x}, {y}, {z})")
                    break
        return problems


class _EdgeView(NamedTuple):
    edge_u: np.ndarray
    edge_v: np.ndarray


@dataclass(frozen=True)
class IntrinsicReport:
    """Per-vertex slack m(x) - sum_y b(x, y) d(x, y)^2."""

    slack: np.ndarray = field(repr=False)
    intrinsic: bool
    min_slack: float
    worst_vertex: int


@dataclass(frozen=True)
class LipschitzFunction:
    values: np.ndarray
    epsilon: float


@dataclass(frozen=True)
class LipschitzReport:
    """Worst ratios lhs/rhs of the two edge inequalities (<= 1 means pass)."""

    edges_checked: int
    exp_ratio: float
    product_ratio: float
    passed: bool


def path_metric(g: WeightedGraph, w: EdgeWeighting | np.ndarray, name: str | None = None) -> PseudoMetric:
    """
    Shortest-path metric of an edge weighting.

    Raises:
        MetricError: If a weight is not strictly positive
    """
    weights = w.weights if isinstance(w, EdgeWeighting) else np.asarray(w, dtype=float)
    provenance = name or (w.name if isinstance(w, EdgeWeighting) else "path")
    if weights.shape != (len(g.edges),):
        raise MetricError(
            f"weighting has {weights.shape[0]} entries for {len(g.edges)} edges"
        )
    if len(weights) and not np.all(weights > 0):
        bad = int(np.flatnonzero(~(weights > 0))[0])
        e = g.edges[bad]
        raise MetricError(f"edge weight w({e.u},{e.v})={weights[bad]} is not > 0")

    n = g.vertex_count
    mat = sp.coo_matrix((weights, (g.edge_u, g.edge_v)), shape=(n, n)).tocsr()
    return PseudoMetric(
        n, provenance, weights=mat, edges=(g.edge_u.copy(), g.edge_v.copy())
    )


def default_intrinsic_weights(g: WeightedGraph, n: np.ndarray | None = None) -> EdgeWeighting:
    """
    w(x, y) = ((m/n)(x) ∧ (m/n)(y))^(1/2).

    Args:
        g: Graph carrying b and m
        n: Normalizing measure to use; defaults to the one of ``g`` (pass the
            full-family degree for windows)
    """
    n = normalizing_measure(g) if n is None else np.asarray(n, dtype=float)
    ratio = g.m / n
    w = np.sqrt(np.minimum(ratio[g.edge_u], ratio[g.edge_v]))
    return EdgeWeighting(w, MetricChoice.DEFAULT_INTRINSIC.value)


def degree_path_weights(g: WeightedGraph, n: np.ndarray | None = None) -> EdgeWeighting:
    """w(x, y) = (n(x) ∨ n(y))^(-1/2)."""
    n = normalizing_measure(g) if n is None else np.asarray(n, dtype=float)
    w = 1.0 / np.sqrt(np.maximum(n[g.edge_u], n[g.edge_v]))
    return EdgeWeighting(w, MetricChoice.D1.value)


def natural_metric(g: WeightedGraph) -> PseudoMetric:
    """Hop-count metric d_n."""
    return path_metric(g, EdgeWeighting(np.ones(len(g.edges)), MetricChoice.NATURAL.value))


def bounded_geometry_metric(g: WeightedGraph) -> PseudoMetric:
    """d_n / sqrt(M), M = max n/m; intrinsic for every graph."""
    ratio = float(np.max(normalizing_measure(g) / g.m))
    w = np.full(len(g.edges), 1.0 / np.sqrt(ratio))
    return path_metric(g, EdgeWeighting(w, "bounded-geometry"))


def metric_for(
    g: WeightedGraph, choice: MetricChoice | str, n: np.ndarray | None = None
) -> PseudoMetric:
    """Build the metric selected by ``choice`` (``n`` as in the weight builders)."""
    choice = MetricChoice(choice)
    if choice is MetricChoice.NATURAL:
        return natural_metric(g)
    if choice is MetricChoice.D1:
        return path_metric(g, degree_path_weights(g, n))
    return path_metric(g, default_intrinsic_weights(g, n))


def verify_intrinsic(g: WeightedGraph, d: PseudoMetric) -> IntrinsicReport:
    """
    Slack of the intrinsic-metric inequality at every vertex.

    A vertex passes when slack >= -INTRINSIC_RTOL * m(x).
    """
    dist = d.edge_distances(g)
    contrib = g.edge_b * dist**2
    load = np.zeros(g.vertex_count)
    np.add.at(load, g.edge_u, contrib)
    np.add.at(load, g.edge_v, contrib)
    slack = g.m - load
    worst = int(np.argmin(slack / g.m)) if g.vertex_count else 0
    intrinsic = bool(np.all(slack >= -INTRINSIC_RTOL * g.m))
    return IntrinsicReport(
        slack=slack,
        intrinsic=intrinsic,
        min_slack=float(slack.min()) if g.vertex_count else 0.0,
        worst_vertex=worst,
    )


def ball(g: WeightedGraph, d: PseudoMetric, x: int, r: float) -> np.ndarray:
    """Closed ball B_r(x) as sorted vertex ids."""
    row = d.row(x)
    return np.flatnonzero(row <= r + BALL_TOL * (1.0 + abs(r)))


def truncated_distance_function(
    d: PseudoMetric, x: int, y: int, epsilon: float
) -> LipschitzFunction:
    """psi(u) = epsilon * min(d(u, y), d(x, y))."""
    cap = d.distance(x, y)
    values = epsilon * np.minimum(d.row(y), cap)
    return LipschitzFunction(values, epsilon)


def lipschitz_verify(
    g: WeightedGraph, d: PseudoMetric, psi: LipschitzFunction
) -> LipschitzReport:
    """
    Check the exponential edge bounds for a Lipschitz function.

    On every edge x ~ y (both orientations):
        |1 - e^(psi(x) - psi(y))| <= eps e^(eps s) d(x, y)
        |(e^-psi(x) - e^-psi(y))(e^psi(x) - e^psi(y))| <= 2 eps^2 e^(eps s) d(x, y)^2

    Raises:
        LipschitzError: If psi is not eps-Lipschitz; carries the witness pair
    """
    values = np.asarray(psi.values, dtype=float)
    eps = float(psi.epsilon)
    if eps <= 0:
        raise LipschitzError(f"epsilon must be > 0, got {eps}", (0, 0))

    tol = 1e-12
    for x in range(g.vertex_count):
        row = d.row(x)
        reachable = np.isfinite(row)
        excess = (values[x] - values) - eps * row
        excess[~reachable] = -np.inf
        y = int(np.argmax(excess))
        if excess[y] > tol * (1.0 + abs(values[x])):
            raise LipschitzError(
                f"psi is not {eps:g}-Lipschitz: psi({x}) - psi({y}) = "
                f"{values[x] - values[y]:.6g} > {eps * row[y]:.6g}",
                (x, y),
            )

    s = d.jump_size
    dist = d.edge_distances(g)
    px, py = values[g.edge_u], values[g.edge_v]
    growth = eps * np.exp(eps * s)

    lhs_exp = np.maximum(np.abs(1 - np.exp(px - py)), np.abs(1 - np.exp(py - px)))
    rhs_exp = growth * dist
    lhs_prod = np.abs((np.exp(-px) - np.exp(-py)) * (np.exp(px) - np.exp(py)))
    rhs_prod = 2 * eps * growth * dist**2

    exp_ratio = _worst_ratio(lhs_exp, rhs_exp)
    product_ratio = _worst_ratio(lhs_prod, rhs_prod)
    return LipschitzReport(
        edges_checked=len(g.edges),
        exp_ratio=exp_ratio,
        product_ratio=product_ratio,
        passed=exp_ratio <= 1 + 1e-9 and product_ratio <= 1 + 1e-9,
    )


def _worst_ratio(lhs: np.ndarray, rhs: np.ndarray) -> float:
    if lhs.size == 0:
        return 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(lhs == 0, 0.0, lhs / rhs)
    return float(np.max(ratio))
