import numpy as np
import pytest

from graphspec_cli.config import MetricChoice
from graphspec_cli.core.errors import WindowTooSmallError
from graphspec_cli.core.growth import (
    bounded_degree_check,
    certified_balls,
    exp_growth_rate,
    growth_consequence_check,
    sample_centers,
    subexp_certificate,
    volume_profile,
)
from graphspec_cli.core.tessellation import TessellationFamily, generate_pq

NATURAL = MetricChoice.NATURAL


def test_lattice_volumes(z_line):
    profile = volume_profile(z_line, NATURAL, 0, 10)
    assert profile.volumes.tolist() == [2 * r + 1 for r in range(11)]


def test_tree_volumes(tree):
    profile = volume_profile(tree, NATURAL, 0, 6)
    assert profile.volumes.tolist() == [3 * 2**r - 2 for r in range(7)]


def test_z2_counts_and_exponent(z2):
    profile = volume_profile(z2, NATURAL, 0, 20)
    assert profile.counts.tolist() == [2 * r * r + 2 * r + 1 for r in range(21)]
    assert profile.poly_exponent == pytest.approx(2.0, abs=0.2)


def test_lattice_rate_is_small(z_line):
    assert abs(exp_growth_rate(z_line, NATURAL, 0, 60)) < 0.05


@pytest.mark.slow
def test_tree_rate_is_log_two(tree):
    assert exp_growth_rate(tree, NATURAL, 0, 14) == pytest.approx(np.log(2), abs=0.05)


def test_heavy_line_counts_stay_linear(heavy_line):
    profile = volume_profile(heavy_line, MetricChoice.D1, 0, 10)
    for r, count in zip(profile.radii, profile.counts):
        assert count <= np.sqrt(2) * (8 * r + 6)


def test_rows_are_radius_volume_count(z_line):
    rows = volume_profile(z_line, NATURAL, 0, 2).rows()
    assert rows[-1] == (2.0, 5.0, 5)


class TestCertifiedBalls:
    def test_balls_are_exact(self, tree):
        balls = certified_balls(tree, MetricChoice.DEFAULT_INTRINSIC, [0], 2.0)
        inside = balls.inside(0)
        assert np.all(balls.distances[0][inside] <= 2.0 + 1e-9)

    def test_missing_center(self, edge_family):
        with pytest.raises(ValueError, match="does not exist"):
            certified_balls(edge_family, NATURAL, [5], 1.0)

    def test_fixed_patch_cannot_grow(self):
        family = TessellationFamily(patch=generate_pq(4, 4, 2))
        with pytest.raises(WindowTooSmallError):
            certified_balls(family, NATURAL, [0], 10.0)


class TestSubexponential:
    def test_z2_plateaus(self, z2):
        certificate = subexp_certificate(z2, NATURAL, 0.5, 30, centers=[0])
        assert certificate.plateau
        assert certificate.verdict == "subexponential evidence"

    def test_tree_is_flagged(self, tree):
        certificate = subexp_certificate(tree, NATURAL, 0.5, 10, centers=[0])
        assert not certificate.plateau

    def test_heavy_line_plateaus(self, heavy_line):
        certificate = subexp_certificate(heavy_line, MetricChoice.D1, 0.5, 30, centers=[0])
        assert certificate.plateau

    def test_needs_centers(self, z_line):
        with pytest.raises(ValueError):
            subexp_certificate(z_line, NATURAL, 0.5, 4, centers=[])


class TestConsequences:
    def test_unit_measure_ratio_is_one(self, z_line):
        result = growth_consequence_check(z_line, NATURAL, 1.0, 20, centers=[0])
        assert result.measure_ratio == pytest.approx(1.0)
        assert result.holds

    def test_exponential_sum_on_z(self, z_line):
        result = growth_consequence_check(z_line, NATURAL, 1.0, 30, centers=[0])
        assert result.exp_sum <= 1 + 2 / (np.e - 1) + 1e-9

    def test_heavy_line_constants_are_finite(self, heavy_line):
        result = growth_consequence_check(heavy_line, MetricChoice.D1, 0.5, 12, centers=[0, 4])
        assert np.isfinite(result.c_eps)
        assert np.isfinite(result.count_bound)
        assert result.holds


def test_sample_centers_small_ball(tree):
    assert sample_centers(tree, 2).tolist() == list(range(10))


def test_bounded_degree_check(z_line):
    check = bounded_degree_check(z_line, NATURAL, [0], 4)
    assert check.max_degree == 2
    assert check.jump_size == 1.0
    assert check.ball_ratio == 3.0
