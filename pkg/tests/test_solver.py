import math

import numpy as np
import pytest

from singplateau.curves import CurveError, circle, constant_speed_reparam, ellipse
from singplateau.mesh import make_disc_mesh
from singplateau.solver import (
    SolverConfig,
    _dirichlet,
    _system,
    boundary_slide_step,
    fill_estimate,
    harmonic_step,
    initialize,
    params_monotone,
    project_params,
    refine,
    solve,
)


def test_circle_area(solved):
    u, rep = solved("circle")
    assert rep.area == pytest.approx(math.pi, rel=0.01)
    assert rep.converged
    u.validate()


def test_scaled_circle():
    r = 2.5
    assert fill_estimate(circle(360, radius=r), SolverConfig(depth=4)) == pytest.approx(math.pi * r * r, rel=0.01)


def test_ellipse_is_the_planar_region():
    c = constant_speed_reparam(ellipse(720, 2.0, 1.0), 360)
    assert fill_estimate(c, SolverConfig(depth=5)) == pytest.approx(2 * math.pi, rel=0.01)


@pytest.mark.parametrize("name,rel", [("double-circle", 0.02), ("figure-eight", 0.03)])
def test_singular_curves(solved, name, rel):
    u, rep = solved(name)
    assert rep.area == pytest.approx(2 * math.pi, rel=rel)
    u.validate()


def test_area_below_energy(solved, curves):
    for name in curves:
        _, rep = solved(name)
        assert rep.area <= rep.energy_reshetnyak + 1e-9 * (1 + rep.area)
        assert rep.area <= rep.energy_dirichlet + 1e-9 * (1 + rep.area)


def test_report_metadata(solved):
    _, rep = solved("figure-eight")
    assert rep.self_intersections == 1
    assert (rep.alpha, rep.beta) == ("1/3", "1/27")
    assert len(rep.area_trace) == rep.iterations
    assert set(rep.q_stats) == {"min", "q1", "median", "q3", "max"}


def test_circle_is_nearly_conformal(solved):
    assert solved("circle")[1].q_stats["median"] <= 1.05


def test_harmonic_step_minimizes_energy(curves):
    c = curves["trefoil-projection"]
    u = initialize(make_disc_mesh(3), c)
    K = _system(u.mesh).K
    rng = np.random.default_rng(0)
    v = u.copy()
    v.positions[u.mesh.interior] += 0.01 * rng.normal(size=(len(u.mesh.interior), 2))
    assert _dirichlet(K, v.positions) > _dirichlet(K, u.positions)
    w = harmonic_step(v)
    assert _dirichlet(K, w.positions) == pytest.approx(_dirichlet(K, u.positions), rel=1e-12)


def test_boundary_slide_decreases_energy_and_keeps_constraints(curves):
    c = curves["figure-eight"]
    u = initialize(make_disc_mesh(3), c)
    K = _system(u.mesh).K
    e = _dirichlet(K, u.positions)
    for _ in range(20):
        u2, moved = boundary_slide_step(u, 1.0, 3.0)
        e2 = _dirichlet(K, u2.positions)
        assert e2 <= e
        assert u2.trace_error() == 0.0
        assert u2.boundary_params[0] == u.boundary_params[0]
        assert params_monotone(u2.boundary_params, c.length)
        u, e = harmonic_step(u2), _dirichlet(K, harmonic_step(u2).positions)


def test_projection_feasibility_and_ties():
    l, N = 1.0, 8
    g = 3 * l / N
    s = np.array([0.0, 0.5, 0.2, 0.2, 0.9, 0.95, 0.96, 0.97])
    p = project_params(s, 0.0, l, g)
    gaps = np.diff(np.r_[p, 1.0])
    assert p[0] == 0.0 and gaps.min() >= 0 and gaps.max() <= g + 1e-15
    # the later index absorbs the clamp
    q = project_params(np.array([0.0, 0.3, 0.1, 0.6]), 0.0, 1.0)
    assert q.tolist() == [0.0, 0.3, 0.3, 0.6]
    with pytest.raises(ValueError):
        project_params(s, 0.0, l, 0.1)


def test_refine_interpolates_boundary(curves):
    c = curves["circle"]
    u = initialize(make_disc_mesh(2), c)
    v = refine(u)
    assert v.mesh.depth == 3
    np.testing.assert_array_equal(v.boundary_params[0::2], u.boundary_params)
    assert v.trace_error() <= 1e-12


def test_determinism(curves):
    cfg = SolverConfig(depth=3)
    a = solve(curves["trefoil-projection"], cfg)[1]
    b = solve(curves["trefoil-projection"], cfg)[1]
    assert a.to_json() == b.to_json()


def test_non_convergence_is_reported(curves):
    _, rep = solve(curves["figure-eight"], SolverConfig(depth=3, max_outer_iters=1))
    assert rep.converged is False


def test_requires_constant_speed():
    from singplateau.curves import ClosedCurve

    c = ClosedCurve(np.array([[0.0, 0.0], [3.0, 0.0], [3.0, 4.0]]), params=[0.0, 1.0, 2.0])
    with pytest.raises(CurveError):
        solve(c)
    with pytest.raises(ValueError):
        SolverConfig(depth=11)
