"""
Dirichlet truncations of the Laplacian and their kernels.

Edges leaving a window become killing, so truncated heat and resolvent
kernels are pointwise dominated by the kernels of the full graph. All kernels
are taken with respect to m: (K f)(x) = sum_y k(x, y) f(y) m(y).
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
from scipy.sparse.linalg import eigsh, expm_multiply, splu

from ..config import (
    BOUND_RTOL,
    DENSE_LIMIT,
    HEAT_CHECK_T_GRID,
    KERNEL_ATOL,
    MC_BLOCK_SIZE,
    SINGULARITY_TOL,
    KernelKind,
    MetricChoice,
)
from .errors import SpectralSingularityError
from .generators import GraphFamily, Window
from .graph import WeightedGraph, induced_subgraph, normalizing_measure
from .metric import metric_for

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Truncation:
    """
    Restriction of a graph to a window W with Dirichlet boundary.

    ``killing[x]`` is the weight of the edges from x to vertices outside W.
    ``vertices`` are the ids of W inside ``window`` (when there is one).
    """

    graph: WeightedGraph
    killing: np.ndarray = field(repr=False)
    family: str = ""
    radius: int | None = None
    buffer: int = 0
    vertices: tuple[int, ...] = ()
    window: Window | None = field(default=None, repr=False)

    @classmethod
    def whole(cls, g: WeightedGraph, name: str = "graph") -> "Truncation":
        """A finite graph as its own truncation (no boundary)."""
        return cls(
            graph=g,
            killing=np.zeros(g.vertex_count),
            family=name,
            vertices=tuple(range(g.vertex_count)),
        )

    @property
    def size(self) -> int:
        return self.graph.vertex_count

    @property
    def has_boundary(self) -> bool:
        return bool(np.any(self.killing > 0))

    @cached_property
    def full_degree(self) -> np.ndarray:
        """Window n plus boundary killing, i.e. n of the parent graph."""
        return normalizing_measure(self.graph) + self.killing

    @property
    def is_normalized(self) -> bool:
        """m = n (of the parent graph) and c = 0."""
        n = self.full_degree
        return bool(
            np.all(self.graph.c == 0)
            and np.allclose(self.graph.m, n, rtol=1e-12, atol=0.0)
        )

    def without_potential(self) -> "Truncation":
        return Truncation(
            self.graph.with_potential(0.0),
            self.killing,
            self.family,
            self.radius,
            self.buffer,
            self.vertices,
            self.window,
        )


def restrict(
    window: Window,
    vertices,
    radius: int | None = None,
    buffer: int = 0,
) -> Truncation:
    """Dirichlet truncation of a materialized window to ``vertices`` (ids)."""
    ids = np.asarray(sorted(int(x) for x in vertices), dtype=np.int64)
    sub = induced_subgraph(window.graph, ids)
    killing = window.full_degree[ids] - normalizing_measure(sub)
    killing = np.where(killing > 1e-12 * window.full_degree[ids], killing, 0.0)
    return Truncation(
        graph=sub,
        killing=killing,
        family=window.family,
        radius=radius,
        buffer=buffer,
        vertices=tuple(int(x) for x in ids),
        window=window,
    )


def truncate(family: GraphFamily, radius: int, buffer: int | None = None) -> Truncation:
    """
    Dirichlet truncation of ``family`` to the natural ball B_R(root).

    The family is materialized to R + buffer (default buffer R) so that
    distance-based checks can see past the boundary.
    """
    buffer = radius if buffer is None else buffer
    window = family.materialize(radius + buffer)
    inner = window.ball_size(radius)
    return restrict(window, range(inner), radius=radius, buffer=buffer)


class LaplacianMatrix:
    """
    Matrix of L on a truncation.

    ``H`` is the form matrix diag(n_W + c + killing) - B, ``A = M^-1 H`` the
    action on functions and ``S = M^-1/2 H M^-1/2`` its symmetrization.
    """

    def __init__(self, truncation: Truncation):
        g = truncation.graph
        self.truncation = truncation
        self.m = g.m
        self.sqrt_m = np.sqrt(g.m)
        diag = normalizing_measure(g) + g.c + truncation.killing
        self.H = (sp.diags(diag) - g.adjacency).tocsr()
        self.A = (sp.diags(1.0 / g.m) @ self.H).tocsr()
        inv_sqrt = sp.diags(1.0 / self.sqrt_m)
        self.S = (inv_sqrt @ self.H @ inv_sqrt).tocsr()

    def __repr__(self) -> str:
        return f"<LaplacianMatrix {self.truncation.family} |W|={self.size}>"

    @property
    def size(self) -> int:
        return self.truncation.size

    @property
    def is_dense(self) -> bool:
        return self.size <= DENSE_LIMIT

    @cached_property
    def eigh(self) -> tuple[np.ndarray, np.ndarray]:
        """Full symmetric decomposition of S (dense windows only)."""
        if not self.is_dense:
            raise ValueError(
                f"full decomposition requested for {self.size} vertices "
                f"(limit {DENSE_LIMIT})"
            )
        logger.debug("dense eigh on %d vertices", self.size)
        return la.eigh(self.S.toarray())

    def bottom(self, k: int = 1) -> tuple[np.ndarray, np.ndarray]:
        """The k smallest eigenvalues of S and their eigenvectors."""
        if self.is_dense or self.size <= k + 1:
            vals, vecs = la.eigh(self.S.toarray()) if not self.is_dense else self.eigh
            return vals[:k], vecs[:, :k]
        logger.debug("shift-invert Lanczos for %d eigenpairs on %d vertices", k, self.size)
        vals, vecs = eigsh(self.S.tocsc(), k=k, sigma=-1e-2, which="LM", tol=1e-10)
        order = np.argsort(vals)
        return vals[order], vecs[:, order]

    def apply(self, f: np.ndarray) -> np.ndarray:
        """A f."""
        return self.A @ f

    def semigroup_apply(self, t: float, f: np.ndarray) -> np.ndarray:
        """e^(-tL) f."""
        g = self.sqrt_m * np.asarray(f)
        if self.is_dense:
            vals, vecs = self.eigh
            out = vecs @ (np.exp(-t * vals) * (vecs.T @ g))
        else:
            out = expm_multiply(-t * self.S, g)
        return out / self.sqrt_m


@dataclass(frozen=True)
class KernelMatrix:
    """Kernel k(x, y) of an operator on the window, with respect to m."""

    values: np.ndarray = field(repr=False)
    m: np.ndarray = field(repr=False)
    kind: KernelKind
    parameter: complex | float | None = None

    @property
    def size(self) -> int:
        return self.values.shape[0]

    def apply(self, f: np.ndarray) -> np.ndarray:
        return self.values @ (self.m * np.asarray(f))

    def compose(self, other: "KernelMatrix") -> "KernelMatrix":
        """Kernel of the product: sum_z k1(x, z) k2(z, y) m(z)."""
        return KernelMatrix(
            self.values @ (self.m[:, None] * other.values),
            self.m,
            self.kind,
            self.parameter,
        )

    @property
    def is_symmetric(self) -> bool:
        scale = np.max(np.abs(self.values)) if self.values.size else 0.0
        return bool(np.allclose(self.values, self.values.T, rtol=0, atol=1e-12 * max(scale, 1.0)))

    def mass(self) -> np.ndarray:
        """sum_y k(x, y) m(y) for every x."""
        return self.values @ self.m


class DecayFit(NamedTuple):
    """Least-squares fit of log|k| against distance."""

    slope: float
    intercept: float
    r_squared: float
    points: int


class BoundViolation(NamedTuple):
    x: int
    y: int
    t: float
    lhs: float
    rhs: float

    def to_dict(self) -> dict:
        return {"x": self.x, "y": self.y, "t": self.t, "lhs": self.lhs, "rhs": self.rhs}


@dataclass
class BoundCheckReport:
    """Outcome of scanning a kernel bound over window pairs."""

    check: str
    family: str
    radius: int
    buffer: int
    metric: str
    parameters: dict
    pairs_checked: int
    violations: list[BoundViolation]
    worst_ratio: float

    @property
    def passed(self) -> bool:
        return not self.violations


class MonteCarloEstimate(NamedTuple):
    estimate: float
    stderr: float
    exact: float
    samples: int

    @property
    def within_ci(self) -> bool:
        """|estimate - exact| <= 4 standard errors."""
        return abs(self.estimate - self.exact) <= 4 * self.stderr + 1e-15


class DominationReport(NamedTuple):
    with_potential: MonteCarloEstimate
    without_potential: MonteCarloEstimate

    @property
    def holds(self) -> bool:
        return (
            self.with_potential.estimate
            <= self.without_potential.estimate + 4 * self.without_potential.stderr
        )


def assemble(truncation: Truncation) -> LaplacianMatrix:
    return LaplacianMatrix(truncation)


def dirichlet_energy(truncation: Truncation, f, g=None) -> complex:
    """
    Q(f, g) = sum over edges b (f(x) - f(y)) conj(g(x) - g(y))
              + sum_x (c + killing)(x) f(x) conj(g(x)).
    """
    f = np.asarray(f, dtype=complex)
    g = f if g is None else np.asarray(g, dtype=complex)
    graph = truncation.graph
    u, v, b = graph.edge_u, graph.edge_v, graph.edge_b
    edge_part = np.sum(b * (f[u] - f[v]) * np.conj(g[u] - g[v]))
    potential = graph.c + truncation.killing
    return complex(edge_part + np.sum(potential * f * np.conj(g)))


def _symmetric_to_kernel(L: LaplacianMatrix, mat: np.ndarray) -> np.ndarray:
    """M^-1/2 X M^-1/2."""
    return mat / np.outer(L.sqrt_m, L.sqrt_m)


def heat_kernel(L: LaplacianMatrix, t: float) -> KernelMatrix:
    """
    Kernel p_t of e^(-tL).

    Raises:
        ValueError: If t < 0
    """
    if t < 0:
        raise ValueError(f"heat kernel needs t >= 0, got {t}")
    if L.is_dense:
        vals, vecs = L.eigh
        sym = (vecs * np.exp(-t * vals)) @ vecs.T
    else:
        sym = expm_multiply(-t * L.S, np.eye(L.size))
    return KernelMatrix(_symmetric_to_kernel(L, sym), L.m, KernelKind.HEAT, t)


def heat_columns(L: LaplacianMatrix, t: float, columns) -> np.ndarray:
    """Columns p_t(., y) for y in ``columns`` without forming the full kernel."""
    cols = np.asarray(columns, dtype=np.int64)
    if L.is_dense:
        vals, vecs = L.eigh
        sym = (vecs * np.exp(-t * vals)) @ vecs[cols].T
    else:
        basis = np.zeros((L.size, len(cols)))
        basis[cols, np.arange(len(cols))] = 1.0
        sym = expm_multiply(-t * L.S, basis)
    return sym / np.outer(L.sqrt_m, L.sqrt_m[cols])


def _check_regular(L: LaplacianMatrix, z: complex) -> None:
    if L.is_dense:
        vals = L.eigh[0]
        gap = float(np.min(np.abs(vals - z)))
        if gap < SINGULARITY_TOL:
            raise SpectralSingularityError(
                f"z={z} lies within {gap:.3g} of the spectrum (tolerance {SINGULARITY_TOL})"
            )


def _resolvent_symmetric(L: LaplacianMatrix, z: complex, power: int) -> np.ndarray:
    _check_regular(L, z)
    if L.is_dense:
        vals, vecs = L.eigh
        return (vecs * (1.0 / (vals - z)) ** power) @ vecs.T
    dtype = complex if np.iscomplexobj(z) and complex(z).imag != 0 else float
    shifted = (L.S - z * sp.identity(L.size)).astype(dtype).tocsc()
    try:
        lu = splu(shifted)
    except RuntimeError as e:
        raise SpectralSingularityError(f"z={z} is (numerically) in the spectrum: {e}")
    out = np.eye(L.size, dtype=dtype)
    for _ in range(power):
        out = lu.solve(out)
    return out


def resolvent_kernel(L: LaplacianMatrix, alpha: complex) -> KernelMatrix:
    """
    Kernel g_alpha of (L - alpha)^-1.

    Raises:
        SpectralSingularityError: If alpha is within SINGULARITY_TOL of the spectrum
    """
    sym = _resolvent_symmetric(L, alpha, 1)
    return KernelMatrix(_symmetric_to_kernel(L, sym), L.m, KernelKind.RESOLVENT, alpha)


def squared_resolvent_kernel(L: LaplacianMatrix, z: complex) -> KernelMatrix:
    """Kernel of (L - z)^-2."""
    sym = _resolvent_symmetric(L, z, 2)
    return KernelMatrix(
        _symmetric_to_kernel(L, sym), L.m, KernelKind.SQUARED_RESOLVENT, z
    )


def identity_kernel(m: np.ndarray) -> KernelMatrix:
    """delta_xy / m(x)."""
    m = np.asarray(m, dtype=float)
    return KernelMatrix(np.diag(1.0 / m), m, KernelKind.IDENTITY)


def transition_matrix(truncation: Truncation) -> KernelMatrix:
    """
    Kernel of P f(x) = (1/n(x)) sum_y b(x, y) f(y), so that L = I - P.

    Raises:
        ValueError: Unless m = n and c = 0 on the truncation
    """
    if not truncation.is_normalized:
        raise ValueError("transition matrix needs the normalized case m = n, c = 0")
    g = truncation.graph
    n = truncation.full_degree
    values = g.adjacency.toarray() / np.outer(n, n)
    return KernelMatrix(values, g.m, KernelKind.TRANSITION)


def _lp_norms(values: np.ndarray, m: np.ndarray, q: float, axis: int) -> np.ndarray:
    """l^q(m) norms of the rows (axis=1) or columns (axis=0) of ``values``."""
    a = np.abs(values)
    if np.isinf(q):
        return a.max(axis=axis)
    weights = m[None, :] if axis == 1 else m[:, None]
    return np.sum(a**q * weights, axis=axis) ** (1.0 / q)


def conjugate_exponent(p: float) -> float:
    if p == 1:
        return np.inf
    if np.isinf(p):
        return 1.0
    return p / (p - 1.0)


def kernel_norm(K: KernelMatrix, p: float, q: float) -> float:
    """
    Operator norm l^p(m) -> l^q(m) of a kernel operator.

    Exact for (1,1), (inf,inf), (1,inf) and (2,2); otherwise the kernel upper
    bound (sum_y ||k(., y)||_q^p* m(y))^(1/p*) for q < inf and
    sup_x ||k(x, .)||_p* for q = inf.

    Raises:
        ValueError: If p or q lies outside [1, inf]
    """
    p, q = float(p), float(q)
    if not (p >= 1 and q >= 1):
        raise ValueError(f"p and q must lie in [1, inf], got p={p}, q={q}")
    k, m = K.values, K.m

    if p == 1 and q == 1:
        return float(np.max(np.sum(np.abs(k) * m[:, None], axis=0)))
    if np.isinf(p) and np.isinf(q):
        return float(np.max(np.sum(np.abs(k) * m[None, :], axis=1)))
    if p == 1 and np.isinf(q):
        return float(np.max(np.abs(k)))
    if p == 2 and q == 2:
        sq = np.sqrt(m)
        return float(np.linalg.norm(sq[:, None] * k * sq[None, :], 2))

    p_star = conjugate_exponent(p)
    if np.isinf(q):
        return float(np.max(_lp_norms(k, m, p_star, axis=1)))
    columns = _lp_norms(k, m, q, axis=0)
    if np.isinf(p_star):
        return float(np.max(columns))
    return float(np.sum(columns**p_star * m) ** (1.0 / p_star))


def decay_fit(K: KernelMatrix, distances: np.ndarray, source: int) -> DecayFit:
    """Fit log|k(x, source)| = slope * d(x, source) + intercept over x != source."""
    col = np.abs(K.values[:, source])
    d = np.asarray(distances, dtype=float)
    keep = (d > 0) & np.isfinite(d) & (col > 1e-300)
    if np.count_nonzero(keep) < 2:
        return DecayFit(0.0, 0.0, 0.0, int(np.count_nonzero(keep)))
    x, y = d[keep], np.log(col[keep])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    total = np.sum((y - y.mean()) ** 2)
    r2 = 1.0 - float(np.sum(resid**2) / total) if total > 0 else 1.0
    return DecayFit(float(slope), float(intercept), r2, int(x.size))


def bound_distances(
    family: GraphFamily,
    radius: int,
    buffer: int | None,
    metric: MetricChoice | str,
) -> tuple[Truncation, np.ndarray]:
    """
    Truncation to B_R and the distance table of its vertices.

    Distances are computed on the window of radius R + buffer, weights built
    from the full-family degree. Families whose balls contain geodesics skip
    the buffer.
    """
    buffer = radius if buffer is None else buffer
    if family.geodesic_balls:
        buffer = 0
    tr = truncate(family, radius, buffer)
    window = tr.window
    d = metric_for(window.graph, metric, n=window.full_degree)
    inner = np.asarray(tr.vertices, dtype=np.int64)
    return tr, d.block(inner, inner)


def _scan_bound(
    check: str,
    family: GraphFamily,
    radius: int,
    buffer: int | None,
    metric: MetricChoice | str,
    t_grid,
    rhs_fn,
    parameters: dict,
) -> BoundCheckReport:
    tr, dist = bound_distances(family, radius, buffer, metric)
    L = assemble(tr)
    m = tr.graph.m
    scale = 1.0 / np.sqrt(np.outer(m, m))
    finite = np.isfinite(dist)

    violations = []
    worst = 0.0
    pairs = 0
    for t in t_grid:
        t = float(t)
        p = heat_kernel(L, t).values if L.is_dense else heat_columns(L, t, range(L.size))
        rhs = scale * rhs_fn(dist, t)
        lhs = p
        pairs += int(np.count_nonzero(finite))
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(finite & (rhs > 0), lhs / rhs, 0.0)
        worst = max(worst, float(np.max(ratio)))
        bad = finite & (lhs > rhs * (1 + BOUND_RTOL) + KERNEL_ATOL)
        for x, y in zip(*np.nonzero(bad)):
            violations.append(
                BoundViolation(int(x), int(y), t, float(lhs[x, y]), float(rhs[x, y]))
            )
    logger.debug("%s on %s: %d pairs, %d violations", check, family.spec, pairs, len(violations))
    return BoundCheckReport(
        check=check,
        family=family.spec,
        radius=radius,
        buffer=tr.buffer,
        metric=MetricChoice(metric).value,
        parameters=parameters,
        pairs_checked=pairs,
        violations=violations,
        worst_ratio=worst,
    )


def log_decay_exponent(d: np.ndarray, t: float) -> np.ndarray:
    """-d log(d / (2 e t)) with the value 0 at d = 0."""
    d = np.asarray(d, dtype=float)
    if t == 0:
        return np.where(d > 0, -np.inf, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = -d * np.log(d / (2 * np.e * t))
    return np.where(d > 0, val, 0.0)


def heat_bound_check(
    family: GraphFamily,
    radius: int,
    buffer: int | None = None,
    t_grid=HEAT_CHECK_T_GRID,
    metric: MetricChoice | str = MetricChoice.DEFAULT_INTRINSIC,
) -> BoundCheckReport:
    """p_t(x, y) <= (m(x) m(y))^-1/2 exp(-d log(d / 2et)) on all pairs in B_R."""
    return _scan_bound(
        "heat-log-decay",
        family,
        radius,
        buffer,
        metric,
        t_grid,
        lambda d, t: np.exp(log_decay_exponent(d, t)),
        {"t_grid": [float(t) for t in t_grid]},
    )


def heat_bound_beta_check(
    family: GraphFamily,
    radius: int,
    buffer: int | None = None,
    beta: float = 1.0,
    t_grid=HEAT_CHECK_T_GRID,
    metric: MetricChoice | str = MetricChoice.DEFAULT_INTRINSIC,
) -> BoundCheckReport:
    """p_t(x, y) <= (m(x) m(y))^-1/2 exp(-beta d + 2 e^beta t)."""
    growth = 2 * np.exp(beta)
    return _scan_bound(
        "heat-beta",
        family,
        radius,
        buffer,
        metric,
        t_grid,
        lambda d, t: np.exp(-beta * d + growth * t),
        {"beta": beta, "t_grid": [float(t) for t in t_grid]},
    )


def resolvent_constants(epsilon: float) -> tuple[float, float]:
    """alpha = -2 C(eps) and C = 1 / (|alpha| - C(eps)) with C(eps) = 2 e^eps."""
    c_eps = 2 * np.exp(epsilon)
    alpha = -2 * c_eps
    return alpha, 1.0 / (abs(alpha) - c_eps)


def resolvent_bound_check(
    family: GraphFamily,
    radius: int,
    buffer: int | None = None,
    epsilon: float = 0.5,
    metric: MetricChoice | str = MetricChoice.DEFAULT_INTRINSIC,
) -> BoundCheckReport:
    """|g_alpha(x, y)| <= C (m(x) m(y))^-1/2 e^(-eps d(x, y)) on all pairs in B_R."""
    alpha, const = resolvent_constants(epsilon)
    tr, dist = bound_distances(family, radius, buffer, metric)
    L = assemble(tr)
    g = np.abs(resolvent_kernel(L, alpha).values)
    m = tr.graph.m
    finite = np.isfinite(dist)
    rhs = const * np.exp(-epsilon * np.where(finite, dist, 0.0)) / np.sqrt(np.outer(m, m))
    bad = finite & (g > rhs * (1 + BOUND_RTOL) + KERNEL_ATOL)
    violations = [
        BoundViolation(int(x), int(y), alpha, float(g[x, y]), float(rhs[x, y]))
        for x, y in zip(*np.nonzero(bad))
    ]
    return BoundCheckReport(
        check="resolvent-decay",
        family=family.spec,
        radius=radius,
        buffer=tr.buffer,
        metric=MetricChoice(metric).value,
        parameters={"epsilon": epsilon, "alpha": alpha, "C": const},
        pairs_checked=int(np.count_nonzero(finite)),
        violations=violations,
        worst_ratio=float(np.max(np.where(finite, g / rhs, 0.0))),
    )


def _jump_tables(tr: Truncation):
    """
    Flattened cumulative jump weights: per vertex its neighbors then an exit slot.

    Returns (cum, row_start, last_slot, targets) with target -1 meaning exit;
    ``last_slot`` is the last slot of each row with positive weight.
    """
    adj = tr.graph.adjacency
    n = tr.size
    counts = np.diff(adj.indptr) + 1
    row_end = np.cumsum(counts)
    row_start = row_end - counts
    weights = np.empty(row_end[-1] if n else 0)
    targets = np.empty_like(weights, dtype=np.int64)
    for x in range(n):
        lo, hi = adj.indptr[x], adj.indptr[x + 1]
        s = row_start[x]
        weights[s : s + hi - lo] = adj.data[lo:hi]
        targets[s : s + hi - lo] = adj.indices[lo:hi]
        weights[row_end[x] - 1] = tr.killing[x]
        targets[row_end[x] - 1] = -1
    slots = np.arange(weights.size)
    positive = np.where(weights > 0, slots, -1)
    last_slot = np.maximum.reduceat(positive, row_start) if n else row_start
    return np.cumsum(weights), row_start, last_slot, targets


def simulate_killed_walk(
    tr: Truncation,
    t: float,
    x: int,
    y: int,
    samples: int,
    seed: int = 0,
) -> MonteCarloEstimate:
    """
    Feynman-Kac estimate of p_t(x, y) on a truncation.

    The walk jumps at rate n/m along b(x, .)/n; leaving the window kills it.
    Paths carry the weight exp(-int_0^t (c/m)(X_s) ds). Samples run in blocks
    of MC_BLOCK_SIZE, each with its own spawned stream, so the result depends
    only on (seed, samples).
    """
    L = assemble(tr)
    m = tr.graph.m
    exact = float(heat_columns(L, t, [y])[x, 0]) if t > 0 else (1.0 / m[y] if x == y else 0.0)
    if t == 0:
        return MonteCarloEstimate(exact, 0.0, exact, samples)

    cum, row_start, last_slot, targets = _jump_tables(tr)
    base = np.concatenate([[0.0], cum])[row_start]
    total = np.where(last_slot >= 0, cum[last_slot] - base, 0.0)
    rate = total / m
    c_rate = tr.graph.c / m

    n_blocks = -(-samples // MC_BLOCK_SIZE)
    streams = np.random.SeedSequence(seed).spawn(n_blocks)
    values = np.empty(samples)
    for b, stream in enumerate(streams):
        rng = np.random.default_rng(stream)
        size = min(MC_BLOCK_SIZE, samples - b * MC_BLOCK_SIZE)
        pos = np.full(size, x, dtype=np.int64)
        clock = np.zeros(size)
        log_w = np.zeros(size)
        alive = np.ones(size, dtype=bool)
        active = np.arange(size)
        while active.size:
            here = pos[active]
            r = rate[here]
            with np.errstate(divide="ignore"):
                hold = np.where(r > 0, rng.exponential(1.0, active.size) / r, np.inf)
            dt = np.minimum(hold, t - clock[active])
            log_w[active] -= c_rate[here] * dt
            clock[active] += hold
            jumping = clock[active] < t
            movers = active[jumping]
            if movers.size:
                src = pos[movers]
                u = 1.0 - rng.random(movers.size)
                target = base[src] + u * total[src]
                slot = np.searchsorted(cum, target, side="left")
                slot = np.clip(slot, row_start[src], last_slot[src])
                nxt = targets[slot]
                exited = nxt < 0
                alive[movers[exited]] = False
                pos[movers[~exited]] = nxt[~exited]
            active = movers[alive[movers]] if movers.size else movers
        hit = alive & (pos == y)
        values[b * MC_BLOCK_SIZE : b * MC_BLOCK_SIZE + size] = np.where(
            hit, np.exp(log_w) / m[y], 0.0
        )
        logger.debug("MC block %d/%d done", b + 1, n_blocks)

    estimate = float(values.mean())
    stderr = float(values.std(ddof=1) / np.sqrt(samples)) if samples > 1 else 0.0
    return MonteCarloEstimate(estimate, stderr, exact, samples)


def feynman_kac_mc(
    family: GraphFamily,
    radius: int,
    t: float,
    x: int,
    y: int,
    samples: int = 100_000,
    seed: int = 0,
) -> MonteCarloEstimate:
    """Monte Carlo p_t(x, y) on the Dirichlet truncation to B_R (ids are BFS ids)."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    return simulate_killed_walk(truncate(family, radius, 0), t, x, y, samples, seed)


def feynman_kac_domination(
    family: GraphFamily,
    radius: int,
    t: float,
    x: int,
    y: int,
    samples: int = 100_000,
    seed: int = 0,
) -> DominationReport:
    """Run the estimate with the family potential and with c = 0 on the same seed."""
    tr = truncate(family, radius, 0)
    return DominationReport(
        simulate_killed_walk(tr, t, x, y, samples, seed),
        simulate_killed_walk(tr.without_potential(), t, x, y, samples, seed),
    )
