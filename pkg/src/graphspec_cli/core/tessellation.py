"""
Planar tessellation patches and their vertex curvature.

Patches are built combinatorially, without coordinates. Starting from the
faces around a root vertex, every boundary vertex in the current distance
layer is closed by adding faces on its outer side until its face count
reaches the target vertex degree. Vertex ids follow creation order, so a
patch with more layers extends the smaller one id by id.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable

import numpy as np

from ..config import LAMBDA_GAP_THRESHOLD, MeasureChoice, MetricChoice
from .errors import TessellationError, WindowTooSmallError
from .generators import GraphFamily
from .graph import WeightedGraph, hop_distances
from .metric import PseudoMetric, degree_path_weights, path_metric

logger = logging.getLogger(__name__)

# Largest curvature of a tessellation with negative curvature everywhere
NEGATIVE_CURVATURE_BOUND = Fraction(-1, 1806)


@dataclass(frozen=True)
class Tessellation:
    """
    Finite patch of a planar tessellation.

    ``interior`` marks vertices whose incident faces close up into a single
    cycle; curvature is only defined there. ``boundary_faces`` flags faces
    touching a non-interior vertex.
    """

    graph: WeightedGraph
    faces: tuple[tuple[int, ...], ...]
    interior: np.ndarray = field(repr=False)
    layers: int
    label: str
    boundary_faces: tuple[bool, ...] = field(repr=False)

    @property
    def vertex_count(self) -> int:
        return self.graph.vertex_count

    @cached_property
    def depth(self) -> np.ndarray:
        """Graph distance from the root (vertex 0)."""
        if self.vertex_count == 0:
            return np.zeros(0, dtype=np.int64)
        return hop_distances(self.graph, [0])

    @cached_property
    def interior_radius(self) -> int:
        """Largest r such that every vertex within distance r is interior (-1 if none)."""
        reached = self.depth >= 0
        bad = self.depth[reached & ~self.interior]
        if bad.size == 0:
            return int(self.depth.max())
        return int(bad.min()) - 1

    @cached_property
    def vertex_faces(self) -> list[list[int]]:
        incident: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for i, face in enumerate(self.faces):
            for x in face:
                incident[x].append(i)
        return incident


def tessellation_from_faces(
    vertex_count: int,
    faces,
    label: str = "patch",
    layers: int = 0,
    edges=(),
) -> Tessellation:
    """
    Assemble a Tessellation from face cycles (and optional extra edges).

    Raises:
        TessellationError: On faces with fewer than 3 vertices or bad ids
    """
    faces = tuple(tuple(int(x) for x in f) for f in faces)
    pairs: dict[tuple[int, int], int] = {}
    for i, face in enumerate(faces):
        if len(face) < 3:
            raise TessellationError(f"face {i} has {len(face)} vertices (need >= 3)")
        if len(set(face)) != len(face):
            raise TessellationError(f"face {i} repeats a vertex")
        for a, b in zip(face, face[1:] + face[:1]):
            if not (0 <= a < vertex_count and 0 <= b < vertex_count):
                raise TessellationError(f"face {i} references a missing vertex")
            key = (min(a, b), max(a, b))
            pairs[key] = pairs.get(key, 0) + 1
    for u, v in edges:
        pairs.setdefault((min(u, v), max(u, v)), 0)

    graph = WeightedGraph.from_edges(
        vertex_count, [(u, v, 1.0) for u, v in sorted(pairs)]
    )
    face_total = np.zeros(vertex_count, dtype=np.int64)
    for face in faces:
        face_total[list(face)] += 1
    degree = np.diff(graph.adjacency.indptr)
    closed = np.ones(vertex_count, dtype=bool)
    for (u, v), count in pairs.items():
        if count != 2:
            closed[u] = closed[v] = False
    interior = closed & (face_total == degree) & (degree > 0)
    interior.setflags(write=False)

    flags = tuple(not bool(np.all(interior[list(face)])) for face in faces)
    return Tessellation(graph, faces, interior, layers, label, flags)


class _PatchBuilder:
    """
    Layer-by-layer closure of boundary vertices.

    The boundary is a cycle held in ``nxt``/``prv``; faces are added on the
    ``prv`` side of the vertex being closed, the last one spanning both sides.
    """

    def __init__(
        self,
        face_size: Callable[[int], int],
        vertex_degree: Callable[[int], int],
    ):
        self.face_size = face_size
        self.vertex_degree = vertex_degree
        self.adj: list[set[int]] = []
        self.faces: list[list[int]] = []
        self.face_count: list[int] = []
        self.target: list[int] = []
        self.nxt: dict[int, int] = {}
        self.prv: dict[int, int] = {}
        self.layers = 0
        self._start()

    def _new_vertex(self, layer: int) -> int:
        v = len(self.adj)
        self.adj.append(set())
        self.face_count.append(0)
        self.target.append(int(self.vertex_degree(layer)))
        return v

    def _next_size(self) -> int:
        p = int(self.face_size(len(self.faces)))
        if p < 3:
            raise TessellationError(f"face {len(self.faces)} would have {p} sides")
        return p

    def _add_face(self, cycle: list[int]) -> None:
        for a, b in zip(cycle, cycle[1:] + cycle[:1]):
            self.adj[a].add(b)
            self.adj[b].add(a)
        for x in cycle:
            self.face_count[x] += 1
        self.faces.append(cycle)

    def _link(self, sequence: list[int]) -> None:
        for a, b in zip(sequence, sequence[1:]):
            self.nxt[a] = b
            self.prv[b] = a

    def _start(self) -> None:
        root = self._new_vertex(0)
        q = self.target[root]
        if q < 3:
            raise TessellationError(f"vertex degree must be >= 3, got {q}")
        spokes = [self._new_vertex(1) for _ in range(q)]
        order = []
        for i in range(q):
            p = self._next_size()
            fills = [self._new_vertex(1) for _ in range(p - 3)]
            self._add_face([root, spokes[i], *fills, spokes[(i + 1) % q]])
            order.extend([spokes[i], *fills])
        self._link(order + order[:1])

    def _distances(self) -> list[int]:
        dist = [-1] * len(self.adj)
        dist[0] = 0
        queue = deque([0])
        while queue:
            x = queue.popleft()
            for y in self.adj[x]:
                if dist[y] < 0:
                    dist[y] = dist[x] + 1
                    queue.append(y)
        return dist

    def _chain(self, v: int, step: dict[int, int]) -> list[int]:
        """Boundary walk from v while the reached vertex lacks exactly one face."""
        chain = [step[v]]
        while self.face_count[chain[-1]] == self.target[chain[-1]] - 1:
            following = step[chain[-1]]
            if following == v or following in chain:
                raise TessellationError(f"boundary exhausted while closing vertex {v}")
            chain.append(following)
        return chain

    def _remove(self, vertices) -> None:
        for x in vertices:
            if self.face_count[x] != self.target[x]:
                raise TessellationError(
                    f"vertex {x} left the boundary with {self.face_count[x]} "
                    f"of {self.target[x]} faces"
                )
            del self.nxt[x]
            del self.prv[x]

    def _close_step(self, v: int, layer: int) -> None:
        p = self._next_size()
        a_chain = self._chain(v, self.prv)

        if self.face_count[v] == self.target[v] - 1:
            b_chain = self._chain(v, self.nxt)
            if set(a_chain) & set(b_chain):
                raise TessellationError(f"closing chains of vertex {v} overlap")
            fill_count = p - 1 - len(a_chain) - len(b_chain)
            if fill_count < 0:
                raise TessellationError(
                    f"vertex {v} cannot be closed by a {p}-gon "
                    f"({len(a_chain) + len(b_chain) + 1} vertices already required)"
                )
            fills = [self._new_vertex(layer + 1) for _ in range(fill_count)]
            self._add_face([v, *a_chain, *fills, *reversed(b_chain)])
            self._remove([v, *a_chain[:-1], *b_chain[:-1]])
            self._link([a_chain[-1], *fills, b_chain[-1]])
            return

        k = len(a_chain)
        if k > p - 1:
            raise TessellationError(f"vertex {v}: {k}-vertex chain does not fit a {p}-gon")
        if k == p - 1:
            self._add_face([v, *a_chain])
            path = []
        else:
            fills = [self._new_vertex(layer + 1) for _ in range(p - 2 - k)]
            spoke = self._new_vertex(layer + 1)
            self._add_face([v, *a_chain, *fills, spoke])
            path = [*fills, spoke]
        self._remove(a_chain[:-1])
        self._link([a_chain[-1], *path, v])

    def grow(self) -> None:
        """Close every boundary vertex within distance layers + 1 of the root."""
        layer = self.layers + 1
        while True:
            dist = self._distances()
            todo = sorted(v for v in self.nxt if dist[v] <= layer)
            if not todo:
                break
            for v in todo:
                while v in self.nxt and self.face_count[v] < self.target[v]:
                    self._close_step(v, layer)
        self.layers = layer
        logger.debug(
            "patch layer %d: %d vertices, %d faces, %d on boundary",
            layer,
            len(self.adj),
            len(self.faces),
            len(self.nxt),
        )

    def snapshot(self, label: str) -> Tessellation:
        return tessellation_from_faces(len(self.adj), self.faces, label, self.layers)


def generate_patch(
    face_size: Callable[[int], int],
    vertex_degree: Callable[[int], int],
    layers: int,
    label: str = "patch",
) -> Tessellation:
    """
    Grow a patch for ``layers`` layers.

    Args:
        face_size: Number of sides of the i-th created face
        vertex_degree: Target degree of a vertex created in a given layer
        layers: Number of closed distance layers around the root
        label: Name recorded on the patch
    """
    if layers < 0:
        raise ValueError(f"layers must be >= 0, got {layers}")
    builder = _PatchBuilder(face_size, vertex_degree)
    for _ in range(layers):
        builder.grow()
    return builder.snapshot(label)


def _check_pq(p: int, q: int) -> None:
    if p < 3 or q < 3:
        raise TessellationError(f"need p >= 3 and q >= 3, got ({p}, {q})")
    if Fraction(1, p) + Fraction(1, q) > Fraction(1, 2):
        raise TessellationError(
            f"({p}, {q}) is spherical (1/p + 1/q > 1/2); only Euclidean and "
            "hyperbolic tessellations are generated"
        )


def generate_pq(p: int, q: int, layers: int) -> Tessellation:
    """
    Regular tessellation with p-gon faces and vertex degree q.

    Raises:
        TessellationError: If p or q is below 3 or 1/p + 1/q > 1/2
    """
    _check_pq(p, q)
    return generate_patch(lambda i: p, lambda layer: q, layers, f"({p},{q})")


def mixed_patch(layers: int) -> Tessellation:
    """Hexagonal tiling whose first face around the root is a heptagon."""
    return generate_patch(lambda i: 7 if i == 0 else 6, lambda layer: 3, layers, "mixed")


def branching_patch(p: int, q: int, layers: int) -> Tessellation:
    """p-gon tiling whose vertices created in layer k have degree q + k."""
    _check_pq(p, q)
    return generate_patch(
        lambda i: p, lambda layer: q + layer, layers, f"branching({p},{q})"
    )


def vertex_curvature(t: Tessellation, x: int) -> Fraction | None:
    """
    kappa(x) = 1 - deg(x)/2 + sum over faces f at x of 1/|f|.

    Returns None for boundary vertices, where curvature is undefined.
    """
    if not t.interior[x]:
        return None
    degree = len(t.graph.neighbors(x))
    total = sum((Fraction(1, len(t.faces[i])) for i in t.vertex_faces[x]), Fraction(0))
    return 1 - Fraction(degree, 2) + total


def interior_curvatures(t: Tessellation) -> dict[int, Fraction]:
    return {
        int(x): vertex_curvature(t, int(x)) for x in np.flatnonzero(t.interior)
    }


def euler_characteristic(t: Tessellation) -> int:
    """V - E + F over the patch (bounded faces only)."""
    return t.vertex_count - len(t.graph.edges) + len(t.faces)


@dataclass(frozen=True)
class GaussBonnet:
    direct: Fraction
    combinatorial: Fraction

    @property
    def agrees(self) -> bool:
        return self.direct == self.combinatorial


def gauss_bonnet_check(t: Tessellation, vertices=None) -> GaussBonnet:
    """
    Sum of curvature over interior vertices S computed vertex by vertex and
    as |S| - sum_e |e & S|/2 + sum_f |f & S|/|f|.

    ``vertices`` defaults to all interior vertices; boundary vertices in it
    are ignored.
    """
    if vertices is None:
        chosen = set(int(x) for x in np.flatnonzero(t.interior))
    else:
        chosen = set(int(x) for x in vertices if t.interior[int(x)])

    direct = sum((vertex_curvature(t, x) for x in chosen), Fraction(0))

    edge_part = Fraction(0)
    for e in t.graph.edges:
        edge_part += Fraction((e.u in chosen) + (e.v in chosen), 2)
    face_part = Fraction(0)
    for face in t.faces:
        hits = sum(1 for x in face if x in chosen)
        if hits:
            face_part += Fraction(hits, len(face))
    return GaussBonnet(direct, len(chosen) - edge_part + face_part)


def layer_ring(t: Tessellation, r: int) -> list[int]:
    """Interior vertices at distance exactly r from the root."""
    return [int(x) for x in np.flatnonzero((t.depth == r) & t.interior)]


def d1_metric(t: Tessellation) -> PseudoMetric:
    """Path metric with edge weights (n(x) v n(y))^(-1/2)."""
    return path_metric(t.graph, degree_path_weights(t.graph), MetricChoice.D1.value)


class TessellationFamily(GraphFamily):
    """
    Exhaustion of a tessellation by natural balls around the patch root.

    With a ``builder`` the patch is regenerated with more layers whenever a
    larger radius is requested; a fixed ``patch`` (e.g. read from JSON)
    only supports radii up to its interior radius.
    """

    kind = "tess"

    def __init__(
        self,
        builder: Callable[[int], Tessellation] | None = None,
        patch: Tessellation | None = None,
        kind: str = "tess",
        measure: MeasureChoice | str = MeasureChoice.GIVEN,
        c: float = 0.0,
        **params,
    ):
        if (builder is None) == (patch is None):
            raise ValueError("give exactly one of builder or patch")
        super().__init__(measure=measure, c=c, **params)
        self.kind = kind
        self._builder = builder
        self._patch = patch if patch is not None else builder(0)

    @property
    def patch(self) -> Tessellation:
        return self._patch

    @property
    def max_radius(self) -> int | None:
        return None if self._builder else self._patch.interior_radius

    def root(self):
        return 0

    def neighbors(self, label):
        return [(int(y), 1.0) for y in self._patch.graph.neighbors(label)]

    def prepare(self, radius: int) -> None:
        if self._patch.interior_radius >= radius:
            return
        if self._builder is None:
            raise WindowTooSmallError(
                f"{self.spec}: fixed patch is complete only up to radius "
                f"{self._patch.interior_radius}, {radius} requested"
            )
        self._patch = self._builder(radius)
        logger.debug("%s: regenerated patch with %d layers", self.spec, radius)


@dataclass
class CurvatureReport:
    """Interior curvature pattern of a patch and the checks it dispatches."""

    label: str
    classification: str
    kappa_min: Fraction | None
    kappa_max: Fraction | None
    total_abs: Fraction
    interior_count: int
    interior_radius: int
    checks: dict = field(default_factory=dict)


def _classify(t: Tessellation, kappa: dict[int, Fraction]) -> str:
    values = list(kappa.values())
    if not values:
        return "empty"
    if all(k >= 0 for k in values):
        return "nonnegative"
    if all(k < 0 for k in values):
        by_depth: dict[int, Fraction] = {}
        for x, k in kappa.items():
            d = int(t.depth[x])
            by_depth[d] = min(k, by_depth.get(d, k))
        mins = [by_depth[d] for d in sorted(by_depth)]
        if len(mins) >= 3 and all(b < a for a, b in zip(mins, mins[1:])):
            return "unbounded-negative"
        return "negative"
    return "mixed"


def curvature_report(t: Tessellation) -> CurvatureReport:
    """
    Classify the interior curvature and run the matching checks.

    nonnegative: growth exponent fits in (d_n, m = n) and (d_1, m = 1);
    negative: kappa <= -1/1806, exponential growth, normalized lambda_0 gap;
    unbounded-negative: exterior bottoms over K; mixed: total |kappa| only.
    """
    from .growth import volume_profile
    from .spectra import bottom_eigenvalue, exterior_bottom
    from .operator import assemble, truncate

    kappa = interior_curvatures(t)
    classification = _classify(t, kappa)
    values = list(kappa.values())
    radius = t.interior_radius
    family = TessellationFamily(patch=t, kind=t.label)

    checks: dict = {}
    if classification == "nonnegative" and radius >= 2:
        natural = volume_profile(family.with_measure("mn"), MetricChoice.NATURAL, 0, radius)
        # every d1 edge is at least (max n)^(-1/2) long
        window = family.materialize(radius)
        d1_radius = (radius - 1) / float(np.sqrt(np.max(window.full_degree)))
        d1 = volume_profile(family.with_measure("m1"), MetricChoice.D1, 0, d1_radius)
        checks["exponent_natural_mn"] = natural.poly_exponent
        checks["exponent_d1_m1"] = d1.poly_exponent
        checks["quadratic"] = all(
            abs(e - 2.0) <= 0.2 for e in (natural.poly_exponent, d1.poly_exponent)
        )
    elif classification == "negative" and radius >= 1:
        rate = volume_profile(family.with_measure("m1"), MetricChoice.NATURAL, 0, radius).rate
        lam = bottom_eigenvalue(assemble(truncate(family.with_measure("mn"), min(6, radius), 0)))
        checks["kappa_bound"] = NEGATIVE_CURVATURE_BOUND
        checks["kappa_bound_holds"] = max(values) <= NEGATIVE_CURVATURE_BOUND
        checks["growth_rate"] = rate
        checks["exponential_growth"] = rate > 0
        checks["lambda0"] = lam
        checks["spectral_gap"] = lam > LAMBDA_GAP_THRESHOLD
    elif classification == "unbounded-negative" and radius >= 1:
        normalized = family.with_measure("mn")
        bottoms = [exterior_bottom(normalized, k, radius) for k in range(radius)]
        checks["kappa_bound_holds"] = max(values) <= NEGATIVE_CURVATURE_BOUND
        checks["exterior_bottoms"] = bottoms
        checks["nondecreasing"] = all(b >= a - 1e-10 for a, b in zip(bottoms, bottoms[1:]))
    elif classification == "mixed":
        checks["total_abs_curvature"] = sum((abs(k) for k in values), Fraction(0))

    return CurvatureReport(
        label=t.label,
        classification=classification,
        kappa_min=min(values) if values else None,
        kappa_max=max(values) if values else None,
        total_abs=sum((abs(k) for k in values), Fraction(0)),
        interior_count=len(values),
        interior_radius=radius,
        checks=checks,
    )

