from itertools import combinations

import pytest

from graphspec_cli.config import EXHAUSTIVE_LIMIT
from graphspec_cli.core.cheeger import (
    alpha_dichotomy_check,
    boundary_measure,
    cheeger_at_infinity,
    cheeger_exhaustive,
    cheeger_family,
    cheeger_inequality_check,
    cheeger_sweep,
)
from graphspec_cli.core.errors import ExhaustiveLimitError
from graphspec_cli.core.generators import (
    lattice,
    line_example,
    perturbed,
    rapidly_branching_tree,
    regular_tree,
)

# every finite set W in the 3-regular tree has |dW| >= |W| + 2 and n(W) = 3|W|
TREE_ALPHA = 1 / 3


class TestBoundaryMeasure:
    def test_root_of_tree(self, tree):
        assert boundary_measure(tree, [0]) == (3.0, 3.0)

    def test_whole_finite_graph_has_no_boundary(self, edge_family):
        assert boundary_measure(edge_family, [0, 1]) == (0.0, 2.0)

    def test_edges_leaving_the_window_count(self, z_line):
        boundary, volume = boundary_measure(z_line, [0, 1, 2], radius=1)
        assert (boundary, volume) == (2.0, 6.0)

    def test_tree_ball(self, tree):
        boundary, volume = boundary_measure(tree, range(10), radius=2)
        assert boundary / volume == pytest.approx(2 / 5)

    def test_empty_set(self, tree):
        with pytest.raises(ValueError, match="nonempty"):
            boundary_measure(tree, [])

    def test_missing_vertex(self, edge_family):
        with pytest.raises(ValueError, match="does not exist"):
            boundary_measure(edge_family, [7])

    def test_vertex_outside_given_window(self, tree):
        with pytest.raises(ValueError):
            boundary_measure(tree, [20], radius=1)


class TestExhaustive:
    def test_tree_ball(self, tree):
        result = cheeger_exhaustive(tree, 2)
        assert result.value == pytest.approx(2 / 5)
        assert result.witness == tuple(range(10))
        assert (result.boundary, result.volume) == (12.0, 30.0)
        assert result.mode == "exhaustive"

    def test_lattice_interval(self, z_line):
        assert cheeger_exhaustive(z_line, 3).value == pytest.approx(1 / 7)

    def test_single_edge_is_zero(self, edge_family):
        assert cheeger_exhaustive(edge_family, 1).value == 0.0

    def test_too_many_vertices(self, tree):
        with pytest.raises(ExhaustiveLimitError):
            cheeger_exhaustive(tree, 4)

    def test_limit_is_inclusive(self, tree):
        assert tree.materialize(3).size == EXHAUSTIVE_LIMIT
        assert cheeger_exhaustive(tree, 3).value == pytest.approx(TREE_ALPHA + 2 / 66)


class TestFamily:
    def test_tree_values(self, tree):
        series = cheeger_family(tree, [1, 2, 3, 4, 6, 8])
        for r, value in zip(series.radii, series.values):
            size = 3 * 2**r - 2
            assert value == pytest.approx(TREE_ALPHA + 2 / (3 * size))
        assert series.nonincreasing

    def test_tree_limit(self, tree):
        series = cheeger_family(tree, [4, 6, 8, 10])
        assert series.limit == pytest.approx(TREE_ALPHA, abs=0.05)

    def test_lattice_limit_is_zero(self, z_line):
        series = cheeger_family(z_line, [10, 20, 30, 40])
        assert series.values[-1] == pytest.approx(1 / 81)
        assert abs(series.limit) < 0.01


class TestSweep:
    def test_lattice_ball(self, z_line):
        assert cheeger_sweep(z_line, 5).value == pytest.approx(1 / 11)

    def test_tree_sweep_bounds_exhaustive(self, tree):
        swept = cheeger_sweep(tree, 3)
        exact = cheeger_exhaustive(tree, 3)
        assert swept.value >= exact.value - 1e-12
        assert swept.mode == "sweep"

    def test_sweep_on_large_ball(self, tree):
        result = cheeger_sweep(tree, 7)
        assert TREE_ALPHA <= result.value <= cheeger_family(tree, [7]).values[0] + 1e-12


class TestAtInfinity:
    def test_small_annulus_is_exhaustive(self, tree):
        result = cheeger_at_infinity(tree, 1, 3)
        assert result.mode == "exhaustive"
        assert min(result.witness) >= 4
        assert result.value >= TREE_ALPHA

    def test_large_annulus_uses_sweep(self, tree):
        result = cheeger_at_infinity(tree, 2, 6)
        assert result.mode == "sweep"
        assert result.value >= TREE_ALPHA

    def test_inner_radius_too_large(self, tree):
        with pytest.raises(ValueError):
            cheeger_at_infinity(tree, 5, 2)


class TestInequality:
    @pytest.mark.parametrize("radius", [1, 2, 3])
    def test_tree(self, tree, radius):
        result = cheeger_inequality_check(tree, radius)
        assert result.holds
        assert result.lambda0 >= result.alpha**2 / 2

    def test_lattice(self, z_line):
        assert cheeger_inequality_check(z_line, 8).holds

    def test_rejects_potential(self):
        with pytest.raises(ValueError, match="c = 0"):
            cheeger_inequality_check(regular_tree(d=3, c=1.0), 2)


class TestDichotomy:
    def test_lattice_has_zero_alpha_and_no_gap(self, z_line):
        report = alpha_dichotomy_check(z_line, [10, 20, 30, 40])
        assert report.alpha_zero
        assert not report.strict_gap
        assert report.consistent

    def test_tree_alpha_is_positive(self, tree):
        report = alpha_dichotomy_check(tree, [4, 6, 8])
        assert not report.alpha_zero
        assert report.alpha == pytest.approx(TREE_ALPHA, abs=0.05)
        assert report.radii == (4, 6, 8)


def brute_force_cheeger(family, radius) -> float:
    """min |dW|/n(W) over subsets of B_R, read straight from the family's edges."""
    window = family.materialize(radius)
    labels = window.labels[: window.ball_size(radius)]
    neighbors = [family.neighbors(label) for label in labels]
    best = float("inf")
    for size in range(1, len(labels) + 1):
        for chosen in combinations(range(len(labels)), size):
            inside = {labels[i] for i in chosen}
            boundary = volume = 0.0
            for i in chosen:
                for y, b in neighbors[i]:
                    volume += b
                    if y not in inside:
                        boundary += b
            best = min(best, boundary / volume)
    return best


@pytest.mark.slow
@pytest.mark.parametrize(
    "base,radius,seed",
    [
        (lambda: lattice(dim=2), 2, 0),
        (lambda: lattice(dim=2), 2, 1),
        (lambda: lattice(dim=2), 2, 2),
        (lambda: regular_tree(d=3), 2, 0),
        (lambda: regular_tree(d=3), 2, 5),
        (lambda: regular_tree(d=4), 2, 3),
        (lambda: lattice(dim=3), 1, 4),
        (lambda: line_example(), 12, 0),
        (lambda: line_example(), 16, 9),
        (lambda: rapidly_branching_tree(), 2, 6),
    ],
)
def test_exhaustive_matches_independent_enumeration(base, radius, seed):
    family = perturbed(base(), 0.5, seed)
    assert family.materialize(radius).ball_size(radius) <= 18
    result = cheeger_exhaustive(family, radius)
    assert result.value == pytest.approx(brute_force_cheeger(family, radius), abs=1e-12)


def test_tree_ball_ratio_at_radius_ten(tree):
    assert cheeger_family(tree, [10]).values[0] == pytest.approx(TREE_ALPHA, abs=0.01)


def test_lattice_ratio_at_radius_twenty(z_line):
    assert cheeger_family(z_line, [20]).values[0] <= 0.025


@pytest.mark.slow
def test_rapidly_branching_tree_at_infinity():
    result = cheeger_at_infinity(rapidly_branching_tree(), 6, 7)
    assert result.value >= 0.8
