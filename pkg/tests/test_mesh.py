import math

import numpy as np
import pytest

from singplateau.mesh import cotangent_stiffness, make_disc_mesh


@pytest.mark.parametrize("depth", range(0, 7))
def test_disc_mesh_topology(depth):
    m = make_disc_mesh(depth)
    K = 2 ** depth
    assert m.n_vertices == 1 + 3 * K * (K + 1)
    assert len(m.triangles) == 6 * K * K
    assert len(m.boundary) == 6 * K
    assert m.euler_characteristic() == 1
    m.validate()
    assert m.min_angle() >= 30.0 - 1e-9


def test_depth_range():
    with pytest.raises(ValueError):
        make_disc_mesh(11)
    with pytest.raises(ValueError):
        make_disc_mesh(-1)


def test_mesh_cached_and_readonly():
    assert make_disc_mesh(4).vertices is make_disc_mesh(4).vertices
    with pytest.raises(ValueError):
        make_disc_mesh(4).vertices[0, 0] = 1.0


def test_cotangent_stiffness_reproduces_linear_energy():
    m = make_disc_mesh(4)
    K = cotangent_stiffness(m.vertices, m.triangles)
    N = len(m.boundary)
    polygon = 0.5 * N * math.sin(2 * math.pi / N)
    x = m.vertices[:, 0]
    # integral |grad x|^2 over the polygon is its area
    assert float(x @ (K @ x)) == pytest.approx(polygon, rel=1e-12)
    assert np.allclose(np.asarray(K.sum(axis=1)).ravel(), 0.0, atol=1e-12)
    assert abs(K - K.T).max() < 1e-14
