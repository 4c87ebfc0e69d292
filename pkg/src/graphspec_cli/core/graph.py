"""
Weighted graph data model.

A graph over (X, m) is a symmetric edge weight b, a killing term c and a
positive vertex measure m. Vertices are dense integer ids ``0..n-1``; string
labels only exist at the I/O boundary.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple, Iterable

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components, dijkstra


class Edge(NamedTuple):
    """Undirected edge stored once with ``u < v``."""

    u: int
    v: int
    b: float


class Violation(NamedTuple):
    """A single broken graph invariant."""

    rule: str
    where: str
    message: str

    def __str__(self) -> str:
        return f"{self.rule} at {self.where}: {self.message}"


@dataclass(frozen=True)
class WeightedGraph:
    """
    Finite weighted graph (b, c, m).

    Instances are immutable; derived quantities are cached on first use.
    Construction does not enforce the invariants, use ``validate`` for that.
    """

    vertex_count: int
    edges: tuple[Edge, ...]
    c: np.ndarray = field(repr=False)
    m: np.ndarray = field(repr=False)

    def __post_init__(self):
        for name in ("c", "m"):
            arr = np.array(getattr(self, name), dtype=float)
            if arr.shape != (self.vertex_count,):
                raise ValueError(
                    f"{name} must have one entry per vertex "
                    f"(expected {self.vertex_count}, got {arr.shape})"
                )
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def from_edges(
        cls,
        vertex_count: int,
        edges: Iterable[tuple[int, int, float]],
        m: Iterable[float] | float | None = None,
        c: Iterable[float] | float | None = None,
    ) -> "WeightedGraph":
        """
        Build a graph from ``(u, v, b)`` triples.

        Endpoints are reordered so that ``u <= v``; m defaults to 1 and c to 0.
        """
        stored = tuple(
            Edge(min(u, v), max(u, v), float(b)) for u, v, b in edges
        )
        return cls(
            vertex_count=vertex_count,
            edges=stored,
            c=_broadcast(c, vertex_count, 0.0),
            m=_broadcast(m, vertex_count, 1.0),
        )

    @cached_property
    def edge_u(self) -> np.ndarray:
        return np.array([e.u for e in self.edges], dtype=np.int64)

    @cached_property
    def edge_v(self) -> np.ndarray:
        return np.array([e.v for e in self.edges], dtype=np.int64)

    @cached_property
    def edge_b(self) -> np.ndarray:
        return np.array([e.b for e in self.edges], dtype=float)

    @cached_property
    def adjacency(self) -> sp.csr_matrix:
        """Symmetric sparse matrix of b (self-loops dropped)."""
        keep = self.edge_u != self.edge_v
        u, v, b = self.edge_u[keep], self.edge_v[keep], self.edge_b[keep]
        n = self.vertex_count
        mat = sp.coo_matrix(
            (np.concatenate([b, b]), (np.concatenate([u, v]), np.concatenate([v, u]))),
            shape=(n, n),
        ).tocsr()
        mat.sum_duplicates()
        mat.sort_indices()
        return mat

    def neighbors(self, x: int) -> np.ndarray:
        """Neighbor ids of ``x`` in increasing order."""
        a = self.adjacency
        return a.indices[a.indptr[x] : a.indptr[x + 1]]

    def with_measure(self, m: Iterable[float] | float) -> "WeightedGraph":
        return WeightedGraph(
            self.vertex_count, self.edges, self.c, _broadcast(m, self.vertex_count, 1.0)
        )

    def with_potential(self, c: Iterable[float] | float) -> "WeightedGraph":
        return WeightedGraph(
            self.vertex_count, self.edges, _broadcast(c, self.vertex_count, 0.0), self.m
        )


@dataclass(frozen=True)
class Bipartition:
    """Two disjoint vertex classes such that every edge crosses."""

    part1: tuple[int, ...]
    part2: tuple[int, ...]

    def signs(self, vertex_count: int) -> np.ndarray:
        """+1 on part1, -1 on part2."""
        s = np.ones(vertex_count)
        s[list(self.part2)] = -1.0
        return s

    def is_valid_for(self, g: WeightedGraph) -> bool:
        side = self.signs(g.vertex_count)
        covered = len(self.part1) + len(self.part2) == g.vertex_count
        crossing = bool(np.all(side[g.edge_u] != side[g.edge_v]))
        return covered and crossing


def _broadcast(values, n: int, default: float) -> np.ndarray:
    if values is None:
        return np.full(n, default)
    if np.isscalar(values):
        return np.full(n, float(values))
    return np.asarray(list(values), dtype=float)


def validate(g: WeightedGraph) -> list[Violation]:
    """
    Check every WeightedGraph invariant.

    Returns:
        Empty list iff the graph is valid; otherwise one Violation per broken
        rule naming the vertex or edge.
    """
    violations: list[Violation] = []
    n = g.vertex_count
    seen: set[tuple[int, int]] = set()

    for e in g.edges:
        where = f"edge {e.u}-{e.v}"
        if not (0 <= e.u < n and 0 <= e.v < n):
            violations.append(Violation("vertex-range", where, "endpoint out of range"))
            continue
        if e.u == e.v:
            violations.append(Violation("self-loop", where, "u must differ from v"))
        if not e.b > 0:
            violations.append(Violation("edge-positivity", where, f"b={e.b} is not > 0"))
        key = (e.u, e.v)
        if key in seen:
            violations.append(Violation("duplicate-edge", where, "edge listed twice"))
        seen.add(key)

    for x in range(n):
        if not g.m[x] > 0:
            violations.append(
                Violation("measure-positivity", f"vertex {x}", f"m={g.m[x]} is not > 0")
            )
        if not g.c[x] >= 0:
            violations.append(
                Violation("potential-sign", f"vertex {x}", f"c={g.c[x]} is negative")
            )

    degree = combinatorial_degree(g)
    for x in np.flatnonzero(degree == 0):
        violations.append(
            Violation("isolated-vertex", f"vertex {int(x)}", "no incident edge")
        )
    return violations


def normalizing_measure(g: WeightedGraph) -> np.ndarray:
    """n(x) = sum_y b(x, y)."""
    return np.asarray(g.adjacency.sum(axis=1)).ravel()


def combinatorial_degree(g: WeightedGraph) -> np.ndarray:
    """deg(x) = #{y : b(x, y) > 0}."""
    a = g.adjacency
    return np.diff(a.indptr).astype(np.int64)


def bounded_geometry_ratio(g: WeightedGraph) -> float:
    """max over x of (n(x) + c(x)) / m(x)."""
    return float(np.max((normalizing_measure(g) + g.c) / g.m))


def operator_norm_bound(g: WeightedGraph) -> float:
    """Upper bound 2C on the norm of L on every l^p, C the bounded geometry ratio."""
    return 2.0 * bounded_geometry_ratio(g)


def bounded_degree_certificate(g: WeightedGraph, bound: float) -> list[Violation]:
    """
    Check n/m <= D^2 deg when b <= D and m >= 1/D.

    Returns the vertices where the hypotheses fail or the inequality breaks.
    """
    violations = []
    n_meas = normalizing_measure(g)
    degree = combinatorial_degree(g)
    if np.any(g.edge_b > bound):
        violations.append(Violation("hypothesis", "edges", f"some b exceeds D={bound}"))
    for x in np.flatnonzero(g.m < 1.0 / bound):
        violations.append(Violation("hypothesis", f"vertex {int(x)}", "m below 1/D"))
    ratio = n_meas / g.m
    for x in np.flatnonzero(ratio > bound**2 * degree * (1 + 1e-12)):
        violations.append(
            Violation(
                "degree-bound",
                f"vertex {int(x)}",
                f"n/m={ratio[x]:.6g} exceeds D^2 deg={bound**2 * degree[x]:.6g}",
            )
        )
    return violations


def hop_distances(g: WeightedGraph, sources) -> np.ndarray:
    """Number of edges to the nearest vertex in ``sources``, -1 if unreachable."""
    hops = dijkstra(
        g.adjacency != 0, directed=False, unweighted=True, indices=sources, min_only=True
    )
    return np.where(np.isfinite(hops), hops, -1).astype(np.int64)


def bipartition(g: WeightedGraph) -> Bipartition | None:
    """
    2-coloring by the parity of the hop distance to the lowest id of each
    component, which goes to part1. Returns None when the graph
    contains an odd cycle.
    """
    if g.vertex_count == 0:
        return Bipartition((), ())
    _, component = connected_components(g.adjacency, directed=False)
    roots = np.unique(component, return_index=True)[1]
    side = hop_distances(g, roots) % 2
    if np.any(side[g.edge_u] == side[g.edge_v]):
        return None
    part1 = tuple(int(x) for x in np.flatnonzero(side == 0))
    part2 = tuple(int(x) for x in np.flatnonzero(side == 1))
    return Bipartition(part1, part2)


def scale(g: WeightedGraph, factor: float) -> WeightedGraph:
    """Scale b, c and m simultaneously; the operator L is unchanged."""
    return WeightedGraph(
        g.vertex_count,
        tuple(Edge(e.u, e.v, e.b * factor) for e in g.edges),
        g.c * factor,
        g.m * factor,
    )


def scale_weights(g: WeightedGraph, factor: float) -> WeightedGraph:
    """Scale b only."""
    return WeightedGraph(
        g.vertex_count,
        tuple(Edge(e.u, e.v, e.b * factor) for e in g.edges),
        g.c,
        g.m,
    )


def induced_subgraph(g: WeightedGraph, vertices: Iterable[int]) -> WeightedGraph:
    """Restriction to ``vertices``, renumbered in the given order."""
    order = [int(x) for x in vertices]
    index = {x: i for i, x in enumerate(order)}
    edges = tuple(
        Edge(min(index[e.u], index[e.v]), max(index[e.u], index[e.v]), e.b)
        for e in g.edges
        if e.u in index and e.v in index
    )
    return WeightedGraph(len(order), edges, g.c[order], g.m[order])
