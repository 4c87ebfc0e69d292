"""
Radius-indexed graph families.

A family is a conceptually infinite (or finite) graph described by a root
label and a deterministic neighbor function. ``materialize(R)`` enumerates the
ball of natural radius R by breadth-first search and returns a ``Window`` with
exact knowledge of the edge weight leaving it. Vertex ids are assigned in BFS
discovery order, so the ball of radius r is always the id prefix
``0..ball_size(r)-1`` and ids never change when the radius grows.
"""

import inspect
import logging
import zlib
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Hashable

import numpy as np

from ..config import MeasureChoice
from .errors import FamilySpecError
from .graph import Edge, WeightedGraph

logger = logging.getLogger(__name__)

Label = Hashable


@dataclass(frozen=True)
class Window:
    """
    Materialized ball of a family.

    ``outside`` holds, per vertex, the total edge weight to vertices beyond
    the window; ``full_degree`` and ``full_count`` are the normalizing measure and
    the combinatorial degree in the whole family graph.
    """

    family: str
    radius: int
    graph: WeightedGraph
    root: int
    labels: tuple
    depth: np.ndarray = field(repr=False)
    full_degree: np.ndarray = field(repr=False)
    full_count: np.ndarray = field(repr=False)
    outside: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return self.graph.vertex_count

    @property
    def has_boundary(self) -> bool:
        return bool(np.any(self.outside > 0))

    def ball_size(self, r: int) -> int:
        """Number of vertices at natural distance <= r from the root."""
        return int(np.searchsorted(self.depth, r, side="right"))

    @cached_property
    def label_index(self) -> dict:
        return {label: i for i, label in enumerate(self.labels)}

    def index_of(self, label: Label) -> int:
        try:
            return self.label_index[label]
        except KeyError:
            raise KeyError(f"label {label!r} is not in the radius-{self.radius} window")


class GraphFamily(ABC):
    """
    Deterministic exhaustion of a graph by natural-metric balls.

    Subclasses provide ``root`` and ``neighbors``; everything else (BFS,
    measures, memoized windows) lives here.
    """

    kind: str = ""
    # Some geodesic between any two vertices of a natural ball stays inside it
    geodesic_balls: bool = False

    def __init__(
        self,
        measure: MeasureChoice | str = MeasureChoice.GIVEN,
        c: float = 0.0,
        **params,
    ):
        self.measure = MeasureChoice(measure)
        self.c = float(c)
        if self.c < 0:
            raise FamilySpecError(f"potential c must be >= 0, got {self.c}")
        self.params = params

        self._labels: list = []
        self._index: dict = {}
        self._depth: list[int] = []
        self._adj: list[list[tuple[int, float]] | None] = []
        self._expanded_depth = -1
        self._exhausted = False
        self._windows: dict[int, Window] = {}

    @property
    def spec(self) -> str:
        """Canonical ``kind:key=val,...`` string."""
        items = dict(self.params)
        if self.measure is not MeasureChoice.GIVEN:
            items["measure"] = self.measure.value
        if self.c:
            items["c"] = self.c
        if not items:
            return self.kind
        body = ",".join(f"{k}={v}" for k, v in items.items())
        return f"{self.kind}:{body}"

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.spec}>"

    @property
    def is_finite(self) -> bool:
        return False

    @property
    def max_radius(self) -> int | None:
        """Largest radius the family can materialize, None if unbounded."""
        return None

    @abstractmethod
    def root(self) -> Label:
        """Label of the exhaustion center."""

    @abstractmethod
    def neighbors(self, label: Label) -> list[tuple[Label, float]]:
        """All ``(neighbor, b)`` pairs of ``label`` in a fixed order."""

    def given_measure(self, label: Label) -> float:
        return 1.0

    def potential(self, label: Label) -> float:
        return self.c

    def prepare(self, radius: int) -> None:
        """Hook run before the BFS is extended to ``radius``."""

    def with_measure(self, measure: MeasureChoice | str) -> "GraphFamily":
        """Same family under another measure choice (fresh caches)."""
        clone = object.__new__(type(self))
        clone.__dict__.update(self.__dict__)
        GraphFamily.__init__(clone, measure=measure, c=self.c, **self.params)
        return clone

    def _add(self, label: Label, depth: int) -> int:
        idx = len(self._labels)
        self._labels.append(label)
        self._index[label] = idx
        self._depth.append(depth)
        self._adj.append(None)
        return idx

    def _expand(self, radius: int) -> None:
        """Record neighbor lists of every vertex at depth <= radius."""
        if not self._labels:
            self._add(self.root(), 0)
        self.prepare(radius)
        while self._expanded_depth < radius and not self._exhausted:
            level = self._expanded_depth + 1
            frontier = [i for i, d in enumerate(self._depth) if d == level]
            if not frontier:
                self._exhausted = True
                break
            for x in frontier:
                adj = []
                for y_label, b in self.neighbors(self._labels[x]):
                    y = self._index.get(y_label)
                    if y is None:
                        y = self._add(y_label, level + 1)
                    adj.append((y, float(b)))
                self._adj[x] = adj
            self._expanded_depth = level
        logger.debug(
            "%s: expanded to depth %d (%d labels)",
            self.spec,
            self._expanded_depth,
            len(self._labels),
        )

    def materialize(self, radius: int) -> Window:
        """
        Materialize the natural-metric ball of ``radius`` around the root.

        Args:
            radius: Nonnegative integer radius

        Returns:
            Memoized Window; restriction-consistent across radii

        Raises:
            WindowTooSmallError: If the family cannot supply the radius
        """
        if radius < 0:
            raise ValueError(f"radius must be >= 0, got {radius}")
        if radius in self._windows:
            return self._windows[radius]

        self._expand(radius)
        depth_all = np.asarray(self._depth, dtype=np.int64)
        count = int(np.count_nonzero(depth_all <= radius))

        edges = []
        outside = np.zeros(count)
        full_degree = np.zeros(count)
        full_count = np.zeros(count, dtype=np.int64)
        for x in range(count):
            for y, b in self._adj[x]:
                full_degree[x] += b
                full_count[x] += 1
                if y >= count:
                    outside[x] += b
                elif x < y:
                    edges.append(Edge(x, y, b))

        labels = tuple(self._labels[:count])
        if self.measure is MeasureChoice.MN:
            m = full_degree.copy()
        elif self.measure is MeasureChoice.M1:
            m = np.ones(count)
        else:
            m = np.array([self.given_measure(label) for label in labels])
        c = np.array([self.potential(label) for label in labels])

        window = Window(
            family=self.spec,
            radius=radius,
            graph=WeightedGraph(count, tuple(edges), c, m),
            root=0,
            labels=labels,
            depth=depth_all[:count],
            full_degree=full_degree,
            full_count=full_count,
            outside=outside,
        )
        logger.debug(
            "%s: window R=%d has %d vertices, %d edges",
            self.spec,
            radius,
            count,
            len(edges),
        )
        self._windows[radius] = window
        return window


class LineExample(GraphFamily):
    """
    Half line with heavy edges: b(x, x+1) = x for x in 4N (x > 0), else 1.

    Unbounded geometry for m = 1 while the degree path metric still has
    uniform subexponential growth.
    """

    kind = "line"
    geodesic_balls = True

    def root(self):
        return 0

    @staticmethod
    def weight(x: int) -> float:
        """b(x, x+1)."""
        return float(x) if x > 0 and x % 4 == 0 else 1.0

    def neighbors(self, label):
        out = []
        if label > 0:
            out.append((label - 1, self.weight(label - 1)))
        out.append((label + 1, self.weight(label)))
        return out


class RegularTree(GraphFamily):
    """d-regular tree; labels are child-index paths from the root."""

    kind = "tree"
    geodesic_balls = True

    def __init__(self, d: int = 3, **kwargs):
        if d < 2:
            raise FamilySpecError(f"tree degree must be >= 2, got {d}")
        super().__init__(d=d, **kwargs)
        self.d = d

    def root(self):
        return ()

    def neighbors(self, label):
        out = []
        if label:
            out.append((label[:-1], 1.0))
        children = self.d if not label else self.d - 1
        out.extend((label + (i,), 1.0) for i in range(children))
        return out


class RapidlyBranchingTree(GraphFamily):
    """Tree whose vertices at generation k have degree k + 2."""

    kind = "rbtree"
    geodesic_balls = True

    def root(self):
        return ()

    def neighbors(self, label):
        k = len(label)
        out = []
        if label:
            out.append((label[:-1], 1.0))
        children = 2 if k == 0 else k + 1
        out.extend((label + (i,), 1.0) for i in range(children))
        return out


class Lattice(GraphFamily):
    """Integer lattice Z^dim with unit weights."""

    kind = "lattice"
    geodesic_balls = True

    def __init__(self, dim: int = 1, **kwargs):
        if dim < 1:
            raise FamilySpecError(f"lattice dimension must be >= 1, got {dim}")
        super().__init__(dim=dim, **kwargs)
        self.dim = dim

    def root(self):
        return (0,) * self.dim

    def neighbors(self, label):
        out = []
        for axis, step in product(range(self.dim), (-1, 1)):
            y = list(label)
            y[axis] += step
            out.append((tuple(y), 1.0))
        return out


class FiniteFamily(GraphFamily):
    """A finite graph exhausted from a chosen root vertex."""

    kind = "graph"

    def __init__(self, graph: WeightedGraph, root: int = 0, name: str = "graph", **kwargs):
        super().__init__(**kwargs)
        self.graph = graph
        self._root = root
        self.kind = name

    @property
    def is_finite(self) -> bool:
        return True

    def root(self):
        return self._root

    def neighbors(self, label):
        a = self.graph.adjacency
        lo, hi = a.indptr[label], a.indptr[label + 1]
        return [(int(y), float(b)) for y, b in zip(a.indices[lo:hi], a.data[lo:hi])]

    def given_measure(self, label):
        return float(self.graph.m[label])

    def potential(self, label):
        return float(self.graph.c[label]) + self.c

    def with_measure(self, measure):
        return FiniteFamily(
            self.graph, self._root, self.kind, measure=measure, c=self.c, **self.params
        )


class PerturbedFamily(GraphFamily):
    """Base family with every b multiplied by a seeded factor in [1-δ, 1+δ]."""

    kind = "perturbed"

    def __init__(self, base: GraphFamily, delta: float, seed: int = 0, **kwargs):
        if not 0 <= delta < 1:
            raise FamilySpecError(f"delta must lie in [0, 1), got {delta}")
        kwargs.setdefault("measure", base.measure)
        kwargs.setdefault("c", base.c)
        super().__init__(delta=delta, seed=seed, **kwargs)
        self.base = base
        self.delta = delta
        self.seed = seed

    @property
    def spec(self) -> str:
        return f"{self.base.spec}+perturbed(delta={self.delta},seed={self.seed})"

    @property
    def is_finite(self) -> bool:
        return self.base.is_finite

    @property
    def max_radius(self) -> int | None:
        return self.base.max_radius

    @property
    def geodesic_balls(self) -> bool:
        # paths in a tree are unique whatever the weights
        return isinstance(self.base, (LineExample, RegularTree, RapidlyBranchingTree))

    def root(self):
        return self.base.root()

    def factor(self, x: Label, y: Label) -> float:
        """Symmetric per-edge factor, stable across runs and radii."""
        key = "|".join(sorted((repr(x), repr(y))))
        u = zlib.crc32(f"{self.seed}:{key}".encode()) / 2**32
        return 1.0 + self.delta * (2.0 * u - 1.0)

    def neighbors(self, label):
        return [(y, b * self.factor(label, y)) for y, b in self.base.neighbors(label)]

    def given_measure(self, label):
        return self.base.given_measure(label)

    def potential(self, label):
        return self.base.potential(label)

    def prepare(self, radius):
        self.base.prepare(radius)

    def with_measure(self, measure):
        return PerturbedFamily(
            self.base.with_measure(measure), self.delta, self.seed, measure=measure
        )


def line_example(**kwargs) -> GraphFamily:
    return LineExample(**kwargs)


def regular_tree(d: int = 3, **kwargs) -> GraphFamily:
    return RegularTree(d=d, **kwargs)


def lattice(dim: int = 1, **kwargs) -> GraphFamily:
    return Lattice(dim=dim, **kwargs)


def rapidly_branching_tree(**kwargs) -> GraphFamily:
    return RapidlyBranchingTree(**kwargs)


def cycle(n: int, b: float = 1.0, **kwargs) -> GraphFamily:
    """C_n with n >= 3."""
    if n < 3:
        raise FamilySpecError(f"cycle needs n >= 3, got {n}")
    edges = [(i, (i + 1) % n, b) for i in range(n)]
    return _finite("cycle", n, edges, kwargs, n=n)


def path(n: int, b: float = 1.0, **kwargs) -> GraphFamily:
    """P_n with n >= 2."""
    if n < 2:
        raise FamilySpecError(f"path needs n >= 2, got {n}")
    edges = [(i, i + 1, b) for i in range(n - 1)]
    return _finite("path", n, edges, kwargs, n=n)


def complete(n: int, b: float = 1.0, **kwargs) -> GraphFamily:
    """K_n with n >= 2."""
    if n < 2:
        raise FamilySpecError(f"complete graph needs n >= 2, got {n}")
    edges = [(i, j, b) for i in range(n) for j in range(i + 1, n)]
    return _finite("complete", n, edges, kwargs, n=n)


def single_edge(b: float = 1.0, **kwargs) -> GraphFamily:
    return _finite("edge", 2, [(0, 1, b)], kwargs, **({"b": b} if b != 1.0 else {}))


def _finite(name: str, vertex_count: int, edges, kwargs: dict, **params) -> GraphFamily:
    graph = WeightedGraph.from_edges(vertex_count, edges)
    family = FiniteFamily(graph, 0, name, **kwargs, **params)
    return family


def perturbed(family: GraphFamily, delta: float, seed: int = 0) -> GraphFamily:
    return PerturbedFamily(family, delta, seed)


def from_tessellation(p: int, q: int, **kwargs) -> GraphFamily:
    """Regular (p, q) tessellation grown layer by layer around a vertex."""
    from .tessellation import TessellationFamily, generate_pq

    return TessellationFamily(
        lambda layers: generate_pq(p, q, layers), kind="tess", p=p, q=q, **kwargs
    )


def mixed_tessellation(**kwargs) -> GraphFamily:
    """Hexagonal tiling with a single heptagon at the root."""
    from .tessellation import TessellationFamily, mixed_patch

    return TessellationFamily(mixed_patch, kind="mixed", **kwargs)


def branching_tessellation(p: int = 4, q: int = 5, **kwargs) -> GraphFamily:
    """p-gon tiling whose vertex degree grows by one per layer, starting at q."""
    from .tessellation import TessellationFamily, branching_patch

    return TessellationFamily(
        lambda layers: branching_patch(p, q, layers),
        kind="branching",
        p=p,
        q=q,
        **kwargs,
    )


FAMILY_BUILDERS = {
    "mixed": mixed_tessellation,
    "branching": branching_tessellation,
    "line": line_example,
    "tree": regular_tree,
    "lattice": lattice,
    "rbtree": rapidly_branching_tree,
    "cycle": cycle,
    "path": path,
    "complete": complete,
    "edge": single_edge,
    "tess": from_tessellation,
}

# Keys accepted by every kind, in addition to its own parameters
COMMON_KEYS = {"measure", "c", "R", "delta", "seed"}


def build_family(kind: str, params: dict) -> GraphFamily:
    """
    Instantiate a family from a parsed spec.

    ``delta``/``seed`` wrap the result in a perturbation; ``R`` is ignored here
    (callers read it as the default radius).

    Raises:
        FamilySpecError: On unknown kinds or parameters
    """
    if kind not in FAMILY_BUILDERS:
        known = ", ".join(sorted(FAMILY_BUILDERS))
        raise FamilySpecError(f"Unknown family kind '{kind}' (known: {known})")

    builder = FAMILY_BUILDERS[kind]
    accepted = {
        name
        for name, p in inspect.signature(builder).parameters.items()
        if p.kind is not inspect.Parameter.VAR_KEYWORD
    }
    unknown = sorted(set(params) - accepted - COMMON_KEYS)
    if unknown:
        raise FamilySpecError(
            f"Invalid parameters for '{kind}': unknown {', '.join(unknown)}"
        )

    params = dict(params)
    params.pop("R", None)
    delta = params.pop("delta", None)
    seed = params.pop("seed", 0)
    try:
        family = builder(**params)
    except TypeError as e:
        raise FamilySpecError(f"Invalid parameters for '{kind}': {e}")

    if delta is not None:
        family = perturbed(family, float(delta), int(seed))
    return family
