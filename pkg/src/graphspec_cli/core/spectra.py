"""
Spectra of Dirichlet truncations: eigenvalues, exhaustion limits, the
l^p spectral-bound estimates and the bipartite symmetry checks.
"""

import logging
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from ..config import DEFAULT_T_GRID, DISK_TOL, KERNEL_NORM_LIMIT, PSD_TOL
from .generators import GraphFamily
from .graph import Bipartition, bipartition as find_bipartition
from .operator import (
    LaplacianMatrix,
    Truncation,
    assemble,
    heat_kernel,
    kernel_norm,
    restrict,
    truncate,
)

logger = logging.getLogger(__name__)

# Exponents reported in every SpectralReport besides the exact ones
INTERPOLATED_P = (4.0 / 3.0, 4.0)

BOTTOM_COUNT = 6


@dataclass
class SpectralReport:
    """Spectrum of a truncation plus its l^p spectral-bound estimates."""

    eigenvalues: np.ndarray = field(repr=False)
    radius: int | None
    lambda_hat: dict[str, float]
    normalized: bool
    has_boundary: bool
    complete: bool
    t_grid: tuple[float, ...]

    @property
    def bottom(self) -> float:
        return float(self.eigenvalues[0])


@dataclass
class ExhaustionSeries:
    """Bottom Dirichlet eigenvalue along an increasing radius sequence."""

    radii: list[int]
    bottoms: list[float]
    limit: float
    coefficient: float
    monotone: bool


class SymmetryCheck(NamedTuple):
    passed: bool
    pairing: list[tuple[int, int]]
    max_residual: float
    reason: str


class MeasureComparison(NamedTuple):
    lambda_m1: float
    lambda_mn: float
    min_degree: int
    holds: bool


class InclusionCheck(NamedTuple):
    lambda_hat: dict[str, float]
    inf_m: float
    holds: bool


def p_label(p: float) -> str:
    """Stable key for an exponent: '1', '2', 'inf', '4/3', ..."""
    if np.isinf(p):
        return "inf"
    if float(p).is_integer():
        return str(int(p))
    for den in range(2, 13):
        num = p * den
        if abs(num - round(num)) < 1e-12:
            return f"{int(round(num))}/{den}"
    return f"{p:g}"


def eigenvalues(L: LaplacianMatrix, k: int | None = None) -> np.ndarray:
    """
    Sorted eigenvalues of the symmetrized truncation.

    Args:
        L: Assembled truncation
        k: Only the k smallest (required above DENSE_LIMIT vertices)

    Raises:
        ValueError: If the full spectrum of a large window is requested
    """
    if k is None:
        if not L.is_dense:
            raise ValueError(
                f"full spectrum of a {L.size}-vertex window requested; pass k"
            )
        return np.array(L.eigh[0])
    return np.sort(L.bottom(min(k, L.size))[0])


def bottom_eigenvalue(L: LaplacianMatrix) -> float:
    return float(L.bottom(1)[0][0])


def bottom_exhaustion(family: GraphFamily, radii) -> ExhaustionSeries:
    """
    lambda_0 of the Dirichlet truncations to B_R for each R in ``radii``.

    The limit is extrapolated with lambda_0(R) = lambda_inf + a / R^2 (least
    squares over the radii > 0); the raw series is always reported alongside.
    """
    radii = sorted(int(r) for r in radii)
    bottoms = []
    for r in radii:
        value = bottom_eigenvalue(assemble(truncate(family, r, 0)))
        logger.debug("%s: lambda0(%d) = %.12g", family.spec, r, value)
        bottoms.append(value)

    positive = [(r, b) for r, b in zip(radii, bottoms) if r > 0]
    if len(positive) >= 2:
        x = np.array([1.0 / r**2 for r, _ in positive])
        y = np.array([b for _, b in positive])
        coefficient, limit = np.polyfit(x, y, 1)
    else:
        limit, coefficient = (bottoms[-1] if bottoms else 0.0), 0.0

    monotone = all(b2 <= b1 + PSD_TOL for b1, b2 in zip(bottoms, bottoms[1:]))
    return ExhaustionSeries(radii, bottoms, float(limit), float(coefficient), monotone)


def stable_times(truncation: Truncation, t_grid) -> list[float]:
    """
    Grid times usable for semigroup-norm estimates.

    With a boundary only t <= R/(2e) is kept, since leakage biases larger
    times; the smallest grid time is always kept.
    """
    grid = sorted(float(t) for t in t_grid)
    if not truncation.has_boundary or truncation.radius is None:
        return grid
    horizon = truncation.radius / (2 * np.e)
    kept = [t for t in grid if t <= horizon]
    return kept or grid[:1]


def _lambda_hat_1(L: LaplacianMatrix, times) -> float:
    # T_t has a nonnegative kernel, so ||T_t||_{inf,inf} = sup_x (T_t 1)(x)
    ones = np.ones(L.size)
    best = -np.inf
    for i, t in enumerate(times):
        norm = float(np.max(L.semigroup_apply(t, ones)))
        if i > 0 and norm < 1e-6:
            break
        best = max(best, -np.log(norm) / t)
    return float(best)


def _lambda_hat_2(L: LaplacianMatrix, times) -> float:
    if L.size > KERNEL_NORM_LIMIT:
        return bottom_eigenvalue(L)
    best = -np.inf
    for i, t in enumerate(times):
        norm = kernel_norm(heat_kernel(L, t), 2, 2)
        # tiny norms carry no relative precision
        if i > 0 and norm < 1e-6:
            break
        best = max(best, -np.log(norm) / t)
    return float(best)


def interpolation_bound(lambda_1: float, lambda_2: float, p: float) -> float:
    """
    Lower bound for the l^p spectral bound from the l^1 and l^2 ones.

    (2/p - 1) lambda_1 + (2 - 2/p) lambda_2 on [1, 2], mirrored through the
    conjugate exponent on [2, inf].
    """
    p = float(p)
    if p < 1:
        raise ValueError(f"p must lie in [1, inf], got {p}")
    if p > 2:
        p = 1.0 if np.isinf(p) else p / (p - 1.0)
    return (2.0 / p - 1.0) * lambda_1 + (2.0 - 2.0 / p) * lambda_2


def spectral_bounds(
    truncation: Truncation, t_grid=DEFAULT_T_GRID, L: LaplacianMatrix | None = None
) -> dict[str, float]:
    """lambda_hat_p for p in {1, 2, inf} and the interpolated exponents."""
    L = assemble(truncation) if L is None else L
    times = stable_times(truncation, t_grid)
    l1 = _lambda_hat_1(L, times)
    l2 = _lambda_hat_2(L, sorted(float(t) for t in t_grid))
    bounds = {"1": l1, "2": l2, "inf": l1}
    for p in INTERPOLATED_P:
        bounds[p_label(p)] = interpolation_bound(l1, l2, p)
    return bounds


def p_growth_bound(
    family: GraphFamily, radius: int, p: float, t_grid=DEFAULT_T_GRID
) -> float:
    """
    lambda_hat_p(R) = max over grid t of -(1/t) log ||T_t||_{p,p}.

    Exact for p in {1, 2, inf}; other exponents go through
    ``interpolation_bound``.
    """
    tr = truncate(family, radius, 0)
    bounds = spectral_bounds(tr, t_grid)
    key = p_label(float(p))
    if key in ("1", "2", "inf"):
        return bounds[key]
    return interpolation_bound(bounds["1"], bounds["2"], float(p))


def spectral_report(L: LaplacianMatrix, t_grid=DEFAULT_T_GRID) -> SpectralReport:
    tr = L.truncation
    complete = L.is_dense
    values = eigenvalues(L) if complete else eigenvalues(L, BOTTOM_COUNT)
    return SpectralReport(
        eigenvalues=values,
        radius=tr.radius,
        lambda_hat=spectral_bounds(tr, t_grid, L),
        normalized=tr.is_normalized,
        has_boundary=tr.has_boundary,
        complete=complete,
        t_grid=tuple(float(t) for t in t_grid),
    )


def disk_check(report: SpectralReport) -> bool:
    """Every eigenvalue lies in [0, 2] up to DISK_TOL."""
    values = report.eigenvalues
    return bool(np.all(values >= -DISK_TOL) and np.all(values <= 2 + DISK_TOL))


def bipartite_symmetry_check(
    L: LaplacianMatrix, bipartition: Bipartition | None = None
) -> SymmetryCheck:
    """
    Check that the spectrum equals 2 minus itself.

    Sorted eigenvalue i is paired with eigenvalue n-1-i. Requires a bipartite,
    normalized truncation without boundary killing.
    """
    tr = L.truncation
    if bipartition is None:
        bipartition = find_bipartition(tr.graph)
    if bipartition is None or not bipartition.is_valid_for(tr.graph):
        return SymmetryCheck(False, [], float("nan"), "graph is not bipartite")
    if not tr.is_normalized:
        return SymmetryCheck(False, [], float("nan"), "truncation is not normalized")
    if tr.has_boundary:
        return SymmetryCheck(False, [], float("nan"), "truncation has boundary killing")

    values = eigenvalues(L)
    n = values.size
    pairing = [(i, n - 1 - i) for i in range((n + 1) // 2)]
    residual = float(np.max(np.abs(values + values[::-1] - 2.0))) if n else 0.0
    passed = residual <= DISK_TOL
    return SymmetryCheck(
        passed, pairing, residual, "" if passed else "spectrum is not symmetric about 1"
    )


def flip_involution(f, bipartition: Bipartition) -> np.ndarray:
    """f on part1, -f on part2."""
    f = np.asarray(f)
    return bipartition.signs(f.shape[0]) * f


def lp_norm(f, m: np.ndarray, p: float) -> float:
    """||f||_p in l^p(m)."""
    a = np.abs(np.asarray(f))
    if np.isinf(p):
        return float(a.max()) if a.size else 0.0
    return float(np.sum(a**p * m) ** (1.0 / p))


def flip_residuals(
    L: LaplacianMatrix, f, lam: complex, p: float, bipartition: Bipartition
) -> tuple[float, float]:
    """(||(L - (2 - lam)) f~||_p, ||(L - lam) f||_p)."""
    f = np.asarray(f, dtype=complex)
    flipped = flip_involution(f, bipartition)
    m = L.m
    lhs = lp_norm(L.apply(flipped) - (2 - lam) * flipped, m, p)
    rhs = lp_norm(L.apply(f) - lam * f, m, p)
    return lhs, rhs


def exterior_bottom(family: GraphFamily, inner_radius: int, radius: int) -> float:
    """
    Bottom Dirichlet eigenvalue on B_R minus B_K.

    ``inner_radius`` 0 removes nothing, so the value equals the plain
    exhaustion value at R.
    """
    if inner_radius > radius:
        raise ValueError(f"K={inner_radius} exceeds R={radius}")
    window = family.materialize(radius)
    start = window.ball_size(inner_radius) if inner_radius > 0 else 0
    if start >= window.size:
        raise ValueError(f"annulus B_{radius} minus B_{inner_radius} is empty")
    tr = restrict(window, range(start, window.size), radius=radius)
    value = bottom_eigenvalue(assemble(tr))
    logger.debug("%s: exterior bottom K=%d R=%d -> %.12g", family.spec, inner_radius, radius, value)
    return value


def measure_comparison(family: GraphFamily, radius: int) -> MeasureComparison:
    """
    lambda_0(m = 1) >= lambda_0(m = n) * min deg on b in {0, 1} families.

    Raises:
        ValueError: If some edge weight is not 1
    """
    window = family.materialize(radius)
    if np.any(window.graph.edge_b != 1.0):
        raise ValueError("measure comparison needs b in {0, 1}")
    l1 = bottom_eigenvalue(assemble(truncate(family.with_measure("m1"), radius, 0)))
    ln = bottom_eigenvalue(assemble(truncate(family.with_measure("mn"), radius, 0)))
    degree = int(np.min(window.full_count[: window.ball_size(radius)]))
    return MeasureComparison(l1, ln, degree, l1 >= ln * degree - PSD_TOL)


def lower_inclusion_check(
    family: GraphFamily, radius: int, t_grid=DEFAULT_T_GRID
) -> InclusionCheck:
    """Every lambda_hat_p stays below lambda_hat_2 on windows with inf m > 0."""
    tr = truncate(family, radius, 0)
    bounds = spectral_bounds(tr, t_grid)
    inf_m = float(np.min(tr.graph.m))
    holds = inf_m > 0 and all(v <= bounds["2"] + 1e-9 for v in bounds.values())
    return InclusionCheck(bounds, inf_m, holds)
