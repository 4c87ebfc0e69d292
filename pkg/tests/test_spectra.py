import numpy as np
import pytest

from graphspec_cli.core.generators import (
    complete,
    cycle,
    from_tessellation,
    lattice,
    line_example,
    path,
    rapidly_branching_tree,
    regular_tree,
)
from graphspec_cli.core.graph import bipartition, normalizing_measure
from graphspec_cli.core.operator import Truncation, assemble, truncate
from graphspec_cli.core.spectra import (
    bipartite_symmetry_check,
    bottom_eigenvalue,
    bottom_exhaustion,
    disk_check,
    eigenvalues,
    exterior_bottom,
    flip_involution,
    flip_residuals,
    interpolation_bound,
    lower_inclusion_check,
    lp_norm,
    measure_comparison,
    p_growth_bound,
    p_label,
    spectral_report,
    stable_times,
)

TREE_NORMALIZED_BOTTOM = 1 - 2 * np.sqrt(2) / 3


@pytest.mark.parametrize(
    "p,label", [(1.0, "1"), (2.0, "2"), (np.inf, "inf"), (4 / 3, "4/3"), (2.5, "5/2")]
)
def test_p_label(p, label):
    assert p_label(p) == label


class TestEigenvalues:
    def test_normalized_cycle(self, normalized_c6):
        L = assemble(truncate(normalized_c6, 3, 0))
        expected = sorted(1 - np.cos(2 * np.pi * k / 6) for k in range(6))
        assert eigenvalues(L) == pytest.approx(expected, abs=1e-10)

    def test_single_edge(self, edge_family):
        L = assemble(truncate(edge_family, 1, 0))
        assert eigenvalues(L) == pytest.approx([0.0, 2.0], abs=1e-12)

    def test_large_window_needs_k(self, tree):
        L = assemble(truncate(tree, 11, 0))
        with pytest.raises(ValueError, match="pass k"):
            eigenvalues(L)
        assert eigenvalues(L, 3).size == 3

    def test_bottom_matches_full_spectrum(self, tree):
        L = assemble(truncate(tree, 4, 0))
        assert bottom_eigenvalue(L) == pytest.approx(eigenvalues(L)[0])


class TestExhaustion:
    def test_lattice_tends_to_zero(self, z_line):
        series = bottom_exhaustion(z_line, [10, 20, 40])
        assert series.monotone
        assert abs(series.limit) < 0.01

    @pytest.mark.slow
    def test_normalized_tree(self, tree):
        series = bottom_exhaustion(tree.with_measure("mn"), [6, 8, 10, 12])
        assert series.monotone
        assert series.limit == pytest.approx(TREE_NORMALIZED_BOTTOM, abs=0.02)

    def test_tree_stays_above_bottom(self, tree):
        series = bottom_exhaustion(tree, [2, 4, 6])
        assert all(b >= 3 - 2 * np.sqrt(2) - 1e-9 for b in series.bottoms)


class TestSpectralBounds:
    def test_interpolation_endpoints(self):
        assert interpolation_bound(0.2, 0.8, 1) == pytest.approx(0.2)
        assert interpolation_bound(0.2, 0.8, 2) == pytest.approx(0.8)
        assert interpolation_bound(0.2, 0.8, np.inf) == pytest.approx(0.2)

    def test_interpolation_is_symmetric_under_conjugation(self):
        assert interpolation_bound(0.2, 0.8, 4 / 3) == pytest.approx(
            interpolation_bound(0.2, 0.8, 4)
        )
        assert interpolation_bound(0.2, 0.8, 4 / 3) == pytest.approx(0.5)

    def test_interpolation_rejects_small_p(self):
        with pytest.raises(ValueError):
            interpolation_bound(0.0, 1.0, 0.5)

    def test_stable_times_without_boundary(self, normalized_c6):
        tr = truncate(normalized_c6, 3, 0)
        assert stable_times(tr, [0.5, 100.0]) == [0.5, 100.0]

    def test_stable_times_with_boundary(self, z_line):
        tr = truncate(z_line, 5, 0)
        assert stable_times(tr, [0.25, 0.5, 4.0]) == [0.25, 0.5]
        assert stable_times(tr, [4.0, 8.0]) == [4.0]

    def test_report_on_normalized_cycle(self, normalized_c6):
        report = spectral_report(assemble(truncate(normalized_c6, 3, 0)))
        assert report.complete
        assert report.normalized
        assert not report.has_boundary
        assert set(report.lambda_hat) == {"1", "2", "inf", "4/3", "4"}
        assert report.lambda_hat["2"] == pytest.approx(0.0, abs=1e-9)
        assert report.lambda_hat["1"] == pytest.approx(0.0, abs=1e-9)
        assert disk_check(report)

    def test_unnormalized_spectrum_leaves_disk(self):
        family = regular_tree(d=3)
        report = spectral_report(assemble(truncate(family, 3, 0)))
        assert not disk_check(report)

    def test_l2_bound_matches_bottom(self, tree):
        tr = truncate(tree, 4, 0)
        bound = p_growth_bound(tree, 4, 2)
        assert bound == pytest.approx(bottom_eigenvalue(assemble(tr)), rel=1e-6)

    def test_interpolated_exponent(self, tree):
        l1 = p_growth_bound(tree, 4, 1)
        l2 = p_growth_bound(tree, 4, 2)
        assert p_growth_bound(tree, 4, 4 / 3) == pytest.approx(interpolation_bound(l1, l2, 4 / 3))

    def test_inclusion_on_lattice(self, z_line):
        check = lower_inclusion_check(z_line, 10)
        assert check.inf_m == 1.0
        assert check.holds


class TestBipartite:
    def test_cycle_is_symmetric(self, normalized_c6):
        check = bipartite_symmetry_check(assemble(truncate(normalized_c6, 3, 0)))
        assert check.passed
        assert check.pairing[0] == (0, 5)
        assert check.max_residual < 1e-9

    def test_path_is_symmetric(self, normalized_p3):
        check = bipartite_symmetry_check(assemble(truncate(normalized_p3, 2, 0)))
        assert check.passed

    def test_complete_graph_is_not_bipartite(self, normalized_k4):
        check = bipartite_symmetry_check(assemble(truncate(normalized_k4, 1, 0)))
        assert not check.passed
        assert check.reason == "graph is not bipartite"

    def test_odd_cycle_fails(self):
        check = bipartite_symmetry_check(assemble(truncate(cycle(5, measure="mn"), 2, 0)))
        assert not check.passed

    def test_needs_normalized_measure(self, p3):
        check = bipartite_symmetry_check(assemble(Truncation.whole(p3)))
        assert check.reason == "truncation is not normalized"

    def test_boundary_breaks_symmetry(self, tree):
        tr = truncate(tree.with_measure("mn"), 2, 0)
        assert bipartite_symmetry_check(assemble(tr)).reason == "truncation has boundary killing"

    def test_flip_is_an_involution(self, normalized_c6):
        tr = truncate(normalized_c6, 3, 0)
        bip = bipartition(tr.graph)
        f = np.arange(6, dtype=float)
        assert np.allclose(flip_involution(flip_involution(f, bip), bip), f)
        assert lp_norm(flip_involution(f, bip), tr.graph.m, 3) == pytest.approx(
            lp_norm(f, tr.graph.m, 3)
        )

    @pytest.mark.parametrize("p", [1.0, 2.0, 3.0, np.inf])
    def test_flip_residuals_agree(self, normalized_c6, p):
        tr = truncate(normalized_c6, 3, 0)
        L = assemble(tr)
        f = np.random.default_rng(4).normal(size=6)
        lhs, rhs = flip_residuals(L, f, 0.3 + 0.1j, p, bipartition(tr.graph))
        assert lhs == pytest.approx(rhs)


class TestExterior:
    def test_empty_core_is_plain_bottom(self, tree):
        plain = bottom_eigenvalue(assemble(truncate(tree, 4, 0)))
        assert exterior_bottom(tree, 0, 4) == pytest.approx(plain)

    def test_removing_core_raises_bottom(self, tree):
        plain = bottom_eigenvalue(assemble(truncate(tree, 5, 0)))
        assert exterior_bottom(tree, 2, 5) >= plain - 1e-10

    def test_inner_radius_too_large(self, tree):
        with pytest.raises(ValueError):
            exterior_bottom(tree, 4, 3)


class TestMeasureComparison:
    def test_tree(self, tree):
        result = measure_comparison(tree, 4)
        assert result.min_degree == 3
        assert result.lambda_m1 == pytest.approx(3 * result.lambda_mn)
        assert result.holds

    def test_rejects_weighted_edges(self):
        with pytest.raises(ValueError, match="b in"):
            measure_comparison(line_example(), 6)


def normalized_ball(family, radius) -> Truncation:
    """The ball B_R as a finite graph of its own, with m = n and no boundary."""
    graph = family.materialize(radius).graph
    return Truncation.whole(graph.with_measure(normalizing_measure(graph)))


class TestBipartiteFamilies:
    @pytest.mark.parametrize("n", [2, 3, 10, 25, 50])
    def test_paths(self, n):
        L = assemble(truncate(path(n, measure="mn"), n, 0))
        check = bipartite_symmetry_check(L)
        assert check.passed
        assert check.max_residual <= 1e-9
        assert disk_check(spectral_report(L))

    @pytest.mark.parametrize("n", [2, 3, 10, 25])
    def test_even_cycles(self, n):
        L = assemble(truncate(cycle(2 * n, measure="mn"), 2 * n, 0))
        assert bipartite_symmetry_check(L).passed

    @pytest.mark.parametrize("n", [1, 2, 12])
    def test_odd_cycles_fail(self, n):
        L = assemble(truncate(cycle(2 * n + 1, measure="mn"), 2 * n + 1, 0))
        check = bipartite_symmetry_check(L)
        assert not check.passed
        assert disk_check(spectral_report(L))

    @pytest.mark.parametrize("radius", [1, 2, 4])
    def test_tree_balls(self, tree, radius):
        L = assemble(normalized_ball(tree, radius))
        assert bipartite_symmetry_check(L).passed

    def test_lattice_window(self, z_line):
        L = assemble(normalized_ball(z_line, 7))
        assert bipartite_symmetry_check(L).passed


@pytest.fixture(
    params=["cycle", "path", "tree-ball", "tree-dirichlet"],
)
def bipartite_laplacian(request, tree):
    if request.param == "cycle":
        tr = truncate(cycle(8, measure="mn"), 8, 0)
    elif request.param == "path":
        tr = truncate(path(10, measure="mn"), 10, 0)
    elif request.param == "tree-ball":
        tr = normalized_ball(tree, 3)
    else:
        tr = truncate(tree.with_measure("mn"), 3, 0)
    return assemble(tr), bipartition(tr.graph)


def test_flip_identity_on_random_triples(bipartite_laplacian):
    L, parts = bipartite_laplacian
    rng = np.random.default_rng(7)
    for _ in range(100):
        f = rng.normal(size=L.size) + 1j * rng.normal(size=L.size)
        lam = complex(rng.uniform(-1, 3), rng.uniform(-1, 1))
        p = np.inf if rng.random() < 0.1 else 1.0 + rng.exponential(2.0)
        lhs, rhs = flip_residuals(L, f, lam, p, parts)
        assert abs(lhs - rhs) <= 1e-10 * max(1.0, rhs)


LAMBDA_HAT_FIXTURES = [
    (lattice, {"dim": 1}, 4),
    (lattice, {"dim": 1}, 8),
    (lattice, {"dim": 1}, 16),
    (lattice, {"dim": 1, "c": 0.5}, 5),
    (lattice, {"dim": 2}, 3),
    (lattice, {"dim": 2}, 5),
    (regular_tree, {"d": 3}, 2),
    (regular_tree, {"d": 3}, 3),
    (regular_tree, {"d": 3}, 5),
    (regular_tree, {"d": 4}, 3),
    (regular_tree, {"d": 3, "measure": "mn"}, 3),
    (regular_tree, {"d": 3, "measure": "mn"}, 5),
    (line_example, {}, 6),
    (line_example, {}, 12),
    (rapidly_branching_tree, {}, 3),
    (from_tessellation, {"p": 4, "q": 4}, 2),
    (cycle, {"n": 6, "measure": "mn"}, 3),
    (cycle, {"n": 7}, 3),
    (path, {"n": 5}, 4),
    (complete, {"n": 4}, 1),
]


@pytest.mark.parametrize("builder,params,radius", LAMBDA_HAT_FIXTURES)
def test_l2_bound_agrees_with_eigensolver(builder, params, radius):
    family = builder(**params)
    expected = bottom_eigenvalue(assemble(truncate(family, radius, 0)))
    assert p_growth_bound(family, radius, 2) == pytest.approx(expected, abs=1e-8)


@pytest.mark.slow
class TestSpectralGap:
    def test_normalized_tree_has_a_gap(self, tree):
        normalized = tree.with_measure("mn")
        l1 = p_growth_bound(normalized, 12, 1)
        l2 = p_growth_bound(normalized, 12, 2)
        assert l1 <= 0.01
        assert l2 - l1 >= 0.03

    def test_normalized_lattice_has_no_gap(self, z_line):
        normalized = z_line.with_measure("mn")
        for p in (1, 2, np.inf):
            assert p_growth_bound(normalized, 40, p) <= 0.01
