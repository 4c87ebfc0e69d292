"""
Volume growth of metric balls.

Balls are computed on natural windows that are enlarged until they are
certified exact: every window vertex with edges leaving the window lies
farther than R from each center, so no path of length <= R can leave.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from ..config import (
    BALL_TOL,
    CENTER_SAMPLE_COUNT,
    CENTER_SAMPLE_LIMIT,
    MAX_WINDOW_VERTICES,
    MetricChoice,
)
from .errors import WindowTooSmallError
from .generators import GraphFamily, Window
from .metric import PseudoMetric, metric_for

logger = logging.getLogger(__name__)


@dataclass
class GrowthProfile:
    """m(B_r(x)) and #B_r(x) on a radius grid, with fitted growth rates."""

    center: int
    radii: np.ndarray
    volumes: np.ndarray
    counts: np.ndarray
    rate: float
    poly_exponent: float
    superexponential: bool

    def rows(self) -> list[tuple[float, float, int]]:
        """(r, volume, count) triples for CSV output."""
        return [
            (float(r), float(v), int(c))
            for r, v, c in zip(self.radii, self.volumes, self.counts)
        ]


@dataclass
class CertifiedBalls:
    """Distance rows from a set of centers, exact up to ``radius``."""

    window: Window
    metric: PseudoMetric
    centers: np.ndarray
    distances: np.ndarray = field(repr=False)
    radius: float

    def inside(self, i: int) -> np.ndarray:
        """Mask of B_R(centers[i])."""
        return self.distances[i] <= self.radius + BALL_TOL * (1.0 + self.radius)


@dataclass
class SubexpCertificate:
    """Running C_eps(R') for R' on the radius grid, with the plateau verdict."""

    epsilon: float
    radii: list[float]
    series: list[float]
    plateau: bool
    centers: int

    @property
    def value(self) -> float:
        return self.series[-1]

    @property
    def verdict(self) -> str:
        if self.plateau:
            return "subexponential evidence"
        return f"fails at epsilon={self.epsilon:g}"


@dataclass
class GrowthConsequences:
    """Smallest empirical constants of the three growth consequences."""

    epsilon: float
    c_eps: float
    measure_ratio: float
    count_constant: float
    count_bound: float
    exp_sum: float
    holds: bool


@dataclass
class BoundedDegreeReport:
    max_degree: int
    jump_size: float
    ball_ratio: float


def _leaving_floor(metric: MetricChoice) -> float:
    # Lower bound on the length of an edge leaving the window
    return 1.0 if metric is MetricChoice.NATURAL else 0.0


def certified_balls(
    family: GraphFamily,
    metric: MetricChoice | str,
    centers,
    radius: float,
) -> CertifiedBalls:
    """
    Distances from ``centers`` that are exact for every value <= radius.

    Raises:
        WindowTooSmallError: If certification needs more than
            MAX_WINDOW_VERTICES vertices
        ValueError: If a center does not exist in the family
    """
    metric = MetricChoice(metric)
    centers = np.asarray(sorted(set(int(x) for x in centers)), dtype=np.int64)
    if centers.size == 0:
        raise ValueError("at least one center is required")
    floor = _leaving_floor(metric)

    rho = max(int(np.ceil(radius)), 0)
    if family.max_radius is not None:
        rho = min(rho, family.max_radius)
    while True:
        window = family.materialize(rho)
        if centers[-1] >= window.size:
            if not window.has_boundary:
                raise ValueError(f"vertex {int(centers[-1])} does not exist in {family.spec}")
            rho += 1
            continue

        d = metric_for(window.graph, metric, n=window.full_degree)
        rows = d.block(centers, np.arange(window.size))
        boundary = np.flatnonzero(window.outside > 0)
        limit = radius + BALL_TOL * (1.0 + radius)
        if boundary.size == 0 or np.all(rows[:, boundary] + floor > limit):
            logger.debug(
                "%s: balls of radius %g certified on natural window %d (%d vertices)",
                family.spec,
                radius,
                rho,
                window.size,
            )
            return CertifiedBalls(window, d, centers, rows, float(radius))

        if window.size > MAX_WINDOW_VERTICES:
            raise WindowTooSmallError(
                f"{family.spec}: balls of radius {radius:g} not certified within "
                f"{MAX_WINDOW_VERTICES} vertices (natural radius {rho})"
            )
        grown = rho + max(1, rho // 4)
        if family.max_radius is not None:
            grown = min(grown, family.max_radius)
        if grown <= rho:
            raise WindowTooSmallError(
                f"{family.spec}: balls of radius {radius:g} not certified up to "
                f"the largest available radius {rho}"
            )
        rho = grown


def sample_centers(family: GraphFamily, center_radius: int, seed: int = 0) -> np.ndarray:
    """
    Centers for uniform-in-x quantities.

    All vertices of the natural ball B_{center_radius}(root) when it has at
    most CENTER_SAMPLE_LIMIT vertices, else CENTER_SAMPLE_COUNT seeded picks
    (the root always included).
    """
    size = family.materialize(center_radius).ball_size(center_radius)
    if size <= CENTER_SAMPLE_LIMIT:
        return np.arange(size)
    rng = np.random.default_rng(seed)
    picks = rng.choice(np.arange(1, size), CENTER_SAMPLE_COUNT - 1, replace=False)
    return np.sort(np.concatenate([[0], picks]))


def _radius_grid(radius: float, radii=None) -> np.ndarray:
    if radii is not None:
        return np.asarray(sorted(float(r) for r in radii))
    return np.arange(0, int(np.floor(radius)) + 1, dtype=float)


def _ball_series(
    balls: CertifiedBalls, i: int, radii: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    row = balls.distances[i]
    m = balls.window.graph.m
    order = np.argsort(row, kind="stable")
    sorted_d = row[order]
    cum = np.concatenate([[0.0], np.cumsum(m[order])])
    idx = np.searchsorted(sorted_d, radii + BALL_TOL * (1.0 + radii), side="right")
    return cum[idx], idx.astype(np.int64)


def _top_half(radii: np.ndarray) -> slice:
    return slice(len(radii) // 2, None)


def _fit_rates(radii, volumes) -> tuple[float, float, bool]:
    top = _top_half(radii)
    r, logv = radii[top], np.log(volumes[top])
    rate = float(np.polyfit(r, logv, 1)[0]) if r.size >= 2 else 0.0
    pos = r > 0
    if np.count_nonzero(pos) >= 2:
        exponent = float(np.polyfit(np.log(r[pos]), logv[pos], 1)[0])
    else:
        exponent = 0.0
    increments = np.diff(logv)
    superexponential = bool(increments.size >= 2 and np.all(np.diff(increments) > 0))
    return max(rate, 0.0), exponent, superexponential


def volume_profile(
    family: GraphFamily,
    metric: MetricChoice | str,
    x: int,
    radius: float,
    radii=None,
) -> GrowthProfile:
    """
    Exact m(B_r(x)) and #B_r(x) for r on the grid (default 0, 1, ..., R).

    The rate is the least-squares slope of log m(B_r) against r over the upper
    half of the grid; the polynomial exponent the slope against log r.
    """
    grid = _radius_grid(radius, radii)
    balls = certified_balls(family, metric, [x], float(grid[-1]))
    volumes, counts = _ball_series(balls, 0, grid)
    rate, exponent, superexp = _fit_rates(grid, volumes)
    return GrowthProfile(int(x), grid, volumes, counts, rate, exponent, superexp)


def exp_growth_rate(
    family: GraphFamily, metric: MetricChoice | str, x: int, radius: float
) -> float:
    return volume_profile(family, metric, x, radius).rate


def subexp_certificate(
    family: GraphFamily,
    metric: MetricChoice | str,
    epsilon: float,
    radius: float,
    centers=None,
    seed: int = 0,
) -> SubexpCertificate:
    """
    C_eps(R') = max over centers and r <= R' of m(B_r(x)) e^(-eps r) / m(x).

    A plateau (the last value within 1e-9 relative of the mid-grid value)
    is reported as subexponential evidence, never as a proof.

    Raises:
        ValueError: If ``centers`` is empty
    """
    if centers is None:
        centers = sample_centers(family, max(int(radius) // 2, 0), seed)
    centers = list(centers)
    if not centers:
        raise ValueError("subexp_certificate needs at least one center")

    grid = _radius_grid(radius)
    balls = certified_balls(family, metric, centers, radius)
    m = balls.window.graph.m
    best = np.zeros(grid.size)
    for i, x in enumerate(balls.centers):
        volumes, _ = _ball_series(balls, i, grid)
        best = np.maximum(best, volumes * np.exp(-epsilon * grid) / m[x])
    series = np.maximum.accumulate(best)
    plateau = bool(series[-1] <= series[len(series) // 2] * (1 + 1e-9))
    logger.debug("%s: C_eps(%g) series %s", family.spec, epsilon, series)
    return SubexpCertificate(
        float(epsilon), [float(r) for r in grid], [float(c) for c in series], plateau, len(centers)
    )


def growth_consequence_check(
    family: GraphFamily,
    metric: MetricChoice | str,
    epsilon: float,
    radius: float,
    centers=None,
    seed: int = 0,
) -> GrowthConsequences:
    """
    Empirical constants for the consequences of uniform subexponential growth.

    (a) m(x) <= A e^(eps d(x, y)) m(y) for y in B_R(x)
    (b) #B_r(x) <= C' e^(2 eps r) with C' = C_eps * A
    (c) sum over y in B_R(x) of e^(-eps d(x, y)) <= C''
    """
    if centers is None:
        centers = sample_centers(family, max(int(radius) // 2, 0), seed)
    certificate = subexp_certificate(family, metric, epsilon, radius, centers)
    c_eps = certificate.value

    grid = _radius_grid(radius)
    balls = certified_balls(family, metric, centers, radius)
    m = balls.window.graph.m
    measure_ratio = 0.0
    count_constant = 0.0
    exp_sum = 0.0
    for i, x in enumerate(balls.centers):
        inside = balls.inside(i)
        d = balls.distances[i][inside]
        measure_ratio = max(
            measure_ratio, float(np.max(m[x] / (np.exp(epsilon * d) * m[inside])))
        )
        _, counts = _ball_series(balls, i, grid)
        count_constant = max(
            count_constant, float(np.max(counts * np.exp(-2 * epsilon * grid)))
        )
        exp_sum = max(exp_sum, float(np.sum(np.exp(-epsilon * d))))

    count_bound = c_eps * measure_ratio
    return GrowthConsequences(
        epsilon=float(epsilon),
        c_eps=c_eps,
        measure_ratio=measure_ratio,
        count_constant=count_constant,
        count_bound=count_bound,
        exp_sum=exp_sum,
        holds=count_constant <= count_bound * (1 + 1e-9),
    )


def bounded_degree_check(
    family: GraphFamily,
    metric: MetricChoice | str,
    centers,
    radius: int,
) -> BoundedDegreeReport:
    """
    Largest combinatorial degree in B_R(root) next to the jump size s and
    max over centers of m(B_s(x)) / m(x).
    """
    window = family.materialize(radius)
    inner = window.ball_size(radius)
    d = metric_for(window.graph, metric, n=window.full_degree)
    s = d.jump_size
    balls = certified_balls(family, metric, centers, s)
    m = balls.window.graph.m
    ratio = 0.0
    for i, x in enumerate(balls.centers):
        ratio = max(ratio, float(np.sum(m[balls.inside(i)]) / m[x]))
    return BoundedDegreeReport(int(np.max(window.full_count[:inner])), float(s), ratio)
