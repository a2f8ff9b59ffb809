import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from oracles import two_sided_z, unit_ball_area_mc
from singplateau.calculus import (
    SeminormG,
    TriangleFrame,
    busemann_jacobian,
    holder_exponents,
    holder_quotient,
    map_area,
    map_energy,
    quasi_conformality,
    reshetnyak_density,
    triangle_gram,
)
from singplateau.curves import UNBOUNDED
from singplateau.mesh import make_disc_mesh


def _seminorm(A):
    return SeminormG.from_matrix(A.T @ A)


def test_busemann_matches_unit_ball_monte_carlo():
    rng = np.random.default_rng(11)
    z = two_sided_z(1 - 0.01 / 100)  # simultaneous 99% over the 100 matrices
    outside = 0
    for _ in range(100):
        s = _seminorm(rng.normal(size=(2, 2)))
        area, se = unit_ball_area_mc(s.matrix, 200_000, rng)
        J = busemann_jacobian(s)
        assert math.pi / (area + z * se) <= J <= math.pi / (area - z * se)
        outside += not (math.pi / (area + 2.576 * se) <= J <= math.pi / (area - 2.576 * se))
    assert outside <= 5


def test_examples_of_pointwise_quantities():
    iso = SeminormG(4.0, 0.0, 4.0)  # 2 * identity
    assert busemann_jacobian(iso) == 4.0
    assert reshetnyak_density(iso) == 4.0
    assert quasi_conformality(iso) == 1.0
    s = SeminormG(9.0, 0.0, 1.0)  # diag(3, 1)
    assert busemann_jacobian(s) == 3.0
    assert reshetnyak_density(s) == 9.0
    assert quasi_conformality(s) == 3.0


def test_degenerate_seminorms():
    rank1 = SeminormG(1.0, 1.0, 1.0)
    assert busemann_jacobian(rank1) == 0.0
    assert quasi_conformality(rank1) is UNBOUNDED or quasi_conformality(rank1) == UNBOUNDED
    assert quasi_conformality(SeminormG(0.0, 0.0, 0.0)) == 1.0
    with pytest.raises(ValueError):
        SeminormG(1.0, 2.0, 1.0)


def test_sandwich_on_random_seminorms():
    rng = np.random.default_rng(5)
    for _ in range(10_000):
        n = int(rng.integers(2, 5))
        s = _seminorm(rng.normal(size=(n, 2)) * rng.uniform(0.01, 10))
        J, lam, Q = busemann_jacobian(s), reshetnyak_density(s), quasi_conformality(s)
        assert J <= lam <= Q * Q * J


finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


@settings(max_examples=200, deadline=None)
@given(A=arrays(np.float64, (3, 2), elements=finite), angle=st.floats(0, 2 * math.pi),
       scale=st.floats(0.1, 10))
def test_invariance_under_rotation_and_scaling(A, angle, scale):
    c, s = math.cos(angle), math.sin(angle)
    R = np.array([[c, -s, 0], [s, c, 0], [0, 0, 1.0]])
    base = _seminorm(A)
    rot = _seminorm(R @ A)
    big = _seminorm(scale * A)
    J = busemann_jacobian(base)
    size = 1 + float(np.sum(A * A))
    # sqrt(det G) near rank one amplifies rounding in G to about sqrt(eps) * |G|
    tol_J = 1e-7 * size
    assert busemann_jacobian(rot) == pytest.approx(J, abs=tol_J)
    assert busemann_jacobian(big) == pytest.approx(scale ** 2 * J, abs=tol_J * scale ** 2)
    assert reshetnyak_density(big) == pytest.approx(scale ** 2 * reshetnyak_density(base), abs=1e-12 * size * scale ** 2)


def test_triangle_gram_of_affine_map():
    ref = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    A = np.array([[2.0, 1.0], [0.0, 3.0], [1.0, 1.0]])
    g = triangle_gram(TriangleFrame(ref, ref @ A.T))
    np.testing.assert_allclose(g.matrix, A.T @ A, atol=1e-14)
    with pytest.raises(ValueError):
        TriangleFrame(np.array([[0.0, 0], [1, 0], [2, 0]]), np.zeros((3, 2)))


def test_area_of_linear_map_of_disc_mesh():
    mesh = make_disc_mesh(3)
    N = len(mesh.boundary)
    polygon = 0.5 * N * math.sin(2 * math.pi / N)
    A = np.array([[2.0, 0.5], [0.0, 1.5], [1.0, -1.0]])
    X = mesh.vertices @ A.T
    # Busemann area of a linear map is sqrt(det A^T A) times the domain area
    assert map_area(mesh.vertices, mesh.triangles, X) == pytest.approx(
        math.sqrt(np.linalg.det(A.T @ A)) * polygon, rel=1e-12)
    # conformal map: Dirichlet energy equals area
    Z = 1.7 * mesh.vertices
    assert map_energy(mesh.vertices, mesh.triangles, Z, "dirichlet") == pytest.approx(
        map_area(mesh.vertices, mesh.triangles, Z), rel=1e-12)


def test_area_bounded_by_energies():
    rng = np.random.default_rng(2)
    mesh = make_disc_mesh(2)
    X = rng.normal(size=(mesh.n_vertices, 3))
    area = map_area(mesh.vertices, mesh.triangles, X)
    assert area <= map_energy(mesh.vertices, mesh.triangles, X, "dirichlet") + 1e-12
    assert area <= map_energy(mesh.vertices, mesh.triangles, X, "reshetnyak") + 1e-12


def test_holder_exponents_exact():
    assert holder_exponents(1, True) == (Fraction(1, 3), Fraction(1, 27))
    assert holder_exponents(1, False) == (Fraction(1, 6), Fraction(1, 54))
    # Banach-space constant 1/2pi
    assert holder_exponents(2, True)[0] == Fraction(1, 4)


def test_holder_quotient_of_identity():
    class U:
        mesh = make_disc_mesh(3)
        positions = mesh.vertices.copy()

    # |x - y| / |x - y|^alpha peaks at the diameter for the identity
    val, n = holder_quotient(U, 1 / 3, "closure")
    assert val == pytest.approx(2 ** (2 / 3), rel=1e-9)
    assert n == U.mesh.n_vertices * (U.mesh.n_vertices - 1) // 2
