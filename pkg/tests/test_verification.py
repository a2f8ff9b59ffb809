import math

import numpy as np
import pytest

from singplateau.collar import CollarSpace
from singplateau.solver import SolverConfig, params_monotone, solve
from singplateau.verification import (
    AnnulusMap,
    TraceMismatch,
    VerificationConfig,
    area_relation_check,
    boundary_angles,
    collar_homotopy,
    complete_boundary,
    default_eta,
    glue_homotopy,
    isoperimetric_check,
    lift,
    parametrized_solve,
)


@pytest.mark.parametrize("m", [3, 16, 64])
@pytest.mark.parametrize("name", ["circle", "figure-eight", "saddle-3d"])
def test_strip_area_is_l_squared(curves, name, m):
    space = CollarSpace(curves[name])
    h = collar_homotopy(space, m)
    assert h.area() == pytest.approx(space.l ** 2, rel=1e-9)
    h.validate()
    np.testing.assert_allclose(h.images[h.outer, 1], space.l)
    np.testing.assert_allclose(np.diff(h.outer_params), space.l / m, rtol=1e-12)
    # the inner ring is the curve itself, i.e. height zero
    assert np.all(h.images[h.inner, 1] == 0.0)


def test_strip_with_solver_params(solved, curves):
    u, _ = solved("figure-eight")
    space = CollarSpace(curves["figure-eight"])
    h = collar_homotopy(space, 16, u.boundary_params, boundary_angles(u.mesh))
    assert h.area() == pytest.approx(space.l ** 2, rel=1e-9)
    # every strip vertex retracts onto the curve at its own arc position
    np.testing.assert_array_equal(h.retracted(), curves["figure-eight"].evaluate(h.images[:, 0]))


def test_lift_ledger_and_projection(solved, curves):
    u, rep = solved("double-circle")
    space = CollarSpace(curves["double-circle"])
    v = lift(u, space, 32)
    l = space.l
    assert l == pytest.approx(4 * math.pi, rel=1e-3)
    assert v.area() - rep.area - l * l == pytest.approx(0.0, abs=1e-9 * l * l)
    assert v.area() == pytest.approx(2 * math.pi + l * l, rel=2e-3)
    np.testing.assert_array_equal(v.retracted_inner(), u.positions)
    outer = v.outer_trace()
    assert all(p.t == l for p in outer)


def test_degenerate_annulus_adds_nothing(solved, curves):
    u, rep = solved("circle")
    N = len(u.boundary_params)
    ang = boundary_angles(u.mesh)
    rings = 4
    ref = np.concatenate([np.c_[r * np.cos(ang), r * np.sin(ang)] for r in np.linspace(0.5, 1.0, rings + 1)])
    img = np.tile(u.positions[u.mesh.boundary], (rings + 1, 1))
    idx = np.arange((rings + 1) * N).reshape(rings + 1, N)
    a, c = idx[:-1], idx[1:]
    b, d = np.roll(a, -1, axis=1), np.roll(c, -1, axis=1)
    tris = np.concatenate([np.stack([a, c, d], -1).reshape(-1, 3), np.stack([a, d, b], -1).reshape(-1, 3)])
    h = AnnulusMap(ref, tris, idx[0], idx[-1], img, u.boundary_params, u.boundary_params, u.curve)
    h.validate()
    # rank-one images: zero up to roundoff in the pulled-back linear parts
    assert h.area() == pytest.approx(0.0, abs=1e-12)
    v = glue_homotopy(u, h)
    v.mesh.validate()
    assert v.trace_error() == 0.0
    from singplateau.calculus import disc_area

    assert disc_area(v) == pytest.approx(rep.area, abs=1e-12)


def test_trace_mismatch(solved, curves):
    u, _ = solved("circle")
    space = CollarSpace(curves["circle"])
    h = collar_homotopy(space, 8, u.boundary_params + 1e-3, boundary_angles(u.mesh))
    with pytest.raises(TraceMismatch):
        glue_homotopy(u, h, space)


def test_complete_boundary(curves):
    c = curves["trefoil-projection"]
    u, rep = solve(c, SolverConfig(depth=2))
    uc = complete_boundary(u)
    uc.mesh.validate()
    uc.validate()
    # every knot of the polyline is now a boundary parameter
    knots = c.cumulative[:-1]
    have = np.mod(uc.boundary_params, c.length)
    assert all(np.min(np.abs(have - k)) < 1e-12 for k in knots)
    from singplateau.calculus import disc_area

    assert disc_area(uc) >= rep.area


def test_isoperimetric_ratios(solved, curves):
    ratios = {}
    for name in ("circle", "figure-eight", "double-circle"):
        rep = isoperimetric_check(curves[name], solved=solved(name))
        assert rep["pass"]
        ratios[name] = rep["ratio"]
    assert ratios["circle"] == pytest.approx(1.0, rel=0.01)
    assert ratios["figure-eight"] == pytest.approx(0.5, rel=0.03)
    assert ratios["double-circle"] == pytest.approx(0.5, rel=0.03)


def test_isoperimetric_threshold_gates_checks(solved, curves):
    rep = isoperimetric_check(curves["circle"], VerificationConfig(l0=1.0), solved=solved("circle"))
    assert rep["values"] == {}


def test_area_relation_report_shape(solved, curves):
    rep = area_relation_check(curves["trefoil-projection"], solved=solved("trefoil-projection"))
    assert rep["pass"]
    assert set(rep) >= {"check", "pass", "residuals", "tolerances", "config"}


def test_parametrized_identity_is_free(solved, curves):
    u, rep = solved("circle")
    g = parametrized_solve(curves["circle"], u.boundary_params, base=(u, rep))
    assert g.disc is u and g.report.area == rep.area


@pytest.mark.parametrize("name,target,rel", [("circle", math.pi, 0.01), ("figure-eight", 2 * math.pi, 0.03)])
def test_parametrized_non_uniform(solved, curves, name, target, rel):
    c = curves[name]
    u, rep = solved(name)
    eta = default_eta(c, 150, 0.5)
    g = parametrized_solve(c, eta, base=(u, rep))
    v = g.disc
    assert g.report.area == pytest.approx(g.area_completed, abs=1e-9)
    assert g.report.area == pytest.approx(target, rel=rel)
    np.testing.assert_array_equal(v.positions[v.mesh.boundary[g.marked]], c.evaluate(eta))
    assert params_monotone(v.boundary_params, c.length)


def test_parametrized_rotation_and_mesh_validity(curves):
    c = curves["ellipse"]
    u, rep = solve(c, SolverConfig(depth=2))
    eta = u.boundary_params + 0.37
    g = parametrized_solve(c, eta, base=(u, rep))
    g.disc.mesh.validate()
    assert g.report.area == pytest.approx(g.area_completed, abs=1e-9)


def test_parametrized_rejects_non_monotone(curves):
    c = curves["circle"]
    eta = default_eta(c, 50)
    eta[10], eta[11] = eta[11], eta[10]
    with pytest.raises(ValueError):
        parametrized_solve(c, eta, SolverConfig(depth=2))
    with pytest.raises(ValueError):
        parametrized_solve(c, default_eta(c, 50) * 1.5, SolverConfig(depth=2))
