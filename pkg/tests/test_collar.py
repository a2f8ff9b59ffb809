import math

import numpy as np
import pytest

from oracles import brute_collar_distance
from singplateau import _pykernels
from singplateau.collar import (
    CollarSpace,
    check_ambient_isometry,
    check_retraction_lipschitz,
    gamma_l_chord_arc,
    gamma_l_length,
    verify_metric_axioms,
)
from singplateau.curves import circle
from singplateau.kernels import compiled_backend


@pytest.fixture(scope="module")
def fig8(curves):
    return CollarSpace(curves["figure-eight"])


@pytest.fixture(scope="module")
def disc(curves):
    return CollarSpace(curves["circle"])


def test_seam_points_are_ambient(disc):
    p = disc.collar(1.0, 0.0)
    assert p.is_ambient
    np.testing.assert_array_equal(p.x, disc.base_curve.evaluate(1.0))
    assert disc.collar(1.0 + disc.l, 0.5).s == pytest.approx(1.0)
    with pytest.raises(ValueError):
        disc.collar(0.0, 2 * disc.l)


def test_vertical_distance_to_seam(fig8):
    for s, t in [(0.3, 0.1), (2.0, 1.5), (fig8.l / 2, 0.01)]:
        foot = fig8.ambient(fig8.base_curve.evaluate(s))
        assert fig8.distance(fig8.collar(s, t), foot) == pytest.approx(t, abs=1e-9 * fig8.l)


def test_crossing_shortcut_through_ambient(fig8):
    # both halves of the figure-eight pass the origin, at s = 0 and s = l/2
    a = fig8.collar(0.0, 0.2)
    b = fig8.collar(fig8.l / 2, 0.2)
    assert fig8.distance(a, b) == pytest.approx(0.4, abs=1e-9)
    assert fig8.cylinder_distance(a, b) == pytest.approx(math.hypot(fig8.l / 2, 0.0))


def test_high_points_use_the_cylinder(disc):
    a = disc.collar(0.0, disc.l)
    b = disc.collar(0.5, disc.l)
    assert disc.distance(a, b) == pytest.approx(0.5, rel=1e-15)


def test_against_dense_sampling(fig8):
    rng = np.random.default_rng(3)
    curve = fig8.base_curve
    for _ in range(12):
        x = rng.uniform(-2.5, 2.5, size=2)
        s, t = rng.uniform(0, fig8.l), rng.uniform(0, 0.5 * fig8.l)
        d = fig8.distance(fig8.ambient(x), fig8.collar(s, t))
        ref = brute_collar_distance(curve, x, (s, t))
        # kernel refines the minimizer, so it may only undercut the grid oracle
        assert ref - 2e-3 <= d <= ref + 1e-12
    for _ in range(6):
        s1, s2 = rng.uniform(0, fig8.l, size=2)
        t1, t2 = rng.uniform(0, 0.3, size=2)
        d = fig8.distance(fig8.collar(s1, t1), fig8.collar(s2, t2))
        ref = brute_collar_distance(curve, (s1, t1), (s2, t2))
        assert ref - 1e-2 <= d <= ref + 1e-12


@pytest.mark.skipif(compiled_backend is None, reason="extension not built")
def test_backends_agree_exactly(fig8):
    rng = np.random.default_rng(9)
    a = fig8.random_points(150, rng)
    b = fig8.random_points(150, rng)
    np.testing.assert_array_equal(fig8.distances(a, b, compiled_backend), fig8.distances(a, b, _pykernels))


@pytest.mark.parametrize("name", ["circle", "figure-eight"])
def test_metric_suite(curves, name):
    space = CollarSpace(curves[name])
    assert verify_metric_axioms(space, 2000, seed=4)["pass"]
    assert check_retraction_lipschitz(space, 2000, seed=5)["pass"]
    assert check_ambient_isometry(space, 500, seed=6)["pass"]


def test_top_circle(fig8):
    assert gamma_l_length(fig8, 256) == pytest.approx(fig8.l, rel=1e-12)
    assert gamma_l_chord_arc(fig8, 64) == pytest.approx(1.0, abs=1e-9)


def test_seam_resolution_guard():
    with pytest.raises(ValueError):
        CollarSpace(circle(), 32)
    CollarSpace(circle(), 8, strict=False)


def test_collar_needs_constant_speed():
    from singplateau.curves import ClosedCurve, CurveError

    c = ClosedCurve(np.array([[0.0, 0.0], [3.0, 0.0], [3.0, 4.0]]), params=[0.0, 1.0, 2.0])
    with pytest.raises(CurveError):
        CollarSpace(c)
