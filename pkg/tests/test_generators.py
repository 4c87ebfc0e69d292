import numpy as np
import pytest

from graphspec_cli.core.errors import FamilySpecError
from graphspec_cli.core.generators import (
    FAMILY_BUILDERS,
    RegularTree,
    build_family,
    complete,
    cycle,
    from_tessellation,
    path,
    perturbed,
    rapidly_branching_tree,
)


def test_lattice_window_is_path(z_line):
    window = z_line.materialize(2)
    assert window.size == 5
    assert len(window.graph.edges) == 4
    assert window.labels == ((0,), (-1,), (1,), (-2,), (2,))


def test_lattice_boundary_killing_at_ends(z_line):
    window = z_line.materialize(2)
    ends = np.flatnonzero(window.depth == 2)
    assert window.outside[ends].tolist() == [1.0, 1.0]
    assert np.all(window.outside[window.depth < 2] == 0)


@pytest.mark.parametrize("r", [0, 1, 2, 5])
def test_tree_ball_size(tree, r):
    assert tree.materialize(r).size == 3 * 2**r - 2


def test_tree_root_degree(tree):
    assert tree.materialize(1).full_count[0] == 3


def test_z2_ball_counts(z2):
    window = z2.materialize(6)
    for r in range(7):
        assert window.ball_size(r) == 2 * r * r + 2 * r + 1


def test_windows_are_restriction_consistent(tree):
    small = tree.materialize(2)
    large = tree.materialize(4)
    assert large.labels[: small.size] == small.labels
    assert large.graph.m[: small.size].tolist() == small.graph.m.tolist()


def test_heavy_line_normalizing_measure(heavy_line):
    window = heavy_line.materialize(6)
    assert window.full_degree[4] == 5.0
    assert window.full_degree[3] == 2.0


def test_heavy_line_ratio_unbounded(heavy_line):
    ratios = [np.max(heavy_line.materialize(r).full_degree) for r in (8, 16, 32)]
    assert ratios == sorted(ratios)
    assert ratios[-1] > ratios[0]


def test_rapidly_branching_degrees():
    family = rapidly_branching_tree()
    window = family.materialize(4)
    generation_three = np.flatnonzero(window.depth == 3)
    assert np.all(window.full_count[generation_three] == 5)


def test_normalized_cycle_measure(normalized_c6):
    window = normalized_c6.materialize(5)
    assert window.graph.m.tolist() == [2.0] * 6
    assert not window.has_boundary


def test_with_measure_keeps_structure(tree):
    normalized = tree.with_measure("mn")
    assert normalized.materialize(2).graph.m.tolist() == [3.0] * 10
    assert tree.materialize(2).graph.m.tolist() == [1.0] * 10


def test_potential_is_carried():
    family = RegularTree(d=3, c=1.5)
    assert family.materialize(1).graph.c.tolist() == [1.5] * 4


def test_negative_potential_rejected():
    with pytest.raises(FamilySpecError):
        RegularTree(d=3, c=-1.0)


class TestPerturbed:
    def test_factors_are_symmetric_and_bounded(self, tree):
        family = perturbed(tree, 0.2, seed=7)
        window = family.materialize(3)
        b = window.graph.edge_b
        assert np.all((b >= 0.8) & (b <= 1.2))
        assert family.factor((), (0,)) == family.factor((0,), ())

    def test_seed_determines_weights(self, tree):
        a = perturbed(tree, 0.3, seed=1).materialize(2).graph.edge_b
        b = perturbed(tree, 0.3, seed=1).materialize(2).graph.edge_b
        c = perturbed(tree, 0.3, seed=2).materialize(2).graph.edge_b
        assert a.tolist() == b.tolist()
        assert a.tolist() != c.tolist()

    def test_delta_range(self, tree):
        with pytest.raises(FamilySpecError):
            perturbed(tree, 1.0)


class TestBuildFamily:
    def test_known_kinds(self):
        assert set(FAMILY_BUILDERS) >= {"line", "tree", "lattice", "rbtree", "tess", "cycle"}

    def test_spec_round_trip(self):
        family = build_family("tree", {"d": 4, "R": 3})
        assert family.spec == "tree:d=4"

    def test_measure_in_spec(self):
        family = build_family("lattice", {"dim": 2, "measure": "mn"})
        assert family.materialize(1).graph.m.tolist() == [4.0] * 5

    def test_perturbation_from_spec(self):
        family = build_family("tree", {"d": 3, "delta": 0.1, "seed": 3})
        assert family.spec.endswith("+perturbed(delta=0.1,seed=3)")

    def test_unknown_kind(self):
        with pytest.raises(FamilySpecError, match="Unknown family kind"):
            build_family("moebius", {})

    def test_bad_parameter(self):
        with pytest.raises(FamilySpecError, match="Invalid parameters"):
            build_family("tree", {"depth": 3})

    def test_small_cycle(self):
        with pytest.raises(FamilySpecError):
            cycle(2)

    @pytest.mark.parametrize(
        "builder,n,edges", [(cycle, 6, 6), (path, 3, 2), (complete, 4, 6)]
    )
    def test_finite_fixtures(self, builder, n, edges):
        family = builder(n)
        window = family.materialize(n)
        assert window.size == n
        assert len(window.graph.edges) == edges
        assert family.spec == f"{family.kind}:n={n}"

    def test_cycle_from_spec(self):
        family = build_family("cycle", {"n": 6, "measure": "mn"})
        assert family.materialize(6).graph.m.tolist() == [2.0] * 6

    def test_tessellation_kind(self):
        family = from_tessellation(4, 4)
        assert family.materialize(2).size == 13
