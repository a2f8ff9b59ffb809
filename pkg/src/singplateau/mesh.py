"""Concentric-ring triangulations of the closed unit disc and their
cotangent stiffness matrices."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

MAX_DEPTH = 10


@dataclass(frozen=True, eq=False)
class DiscMesh:
    vertices: np.ndarray  # (V, 2)
    triangles: np.ndarray  # (F, 3), counter-clockwise
    boundary: np.ndarray  # cyclic, counter-clockwise
    depth: int | None = None

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def interior(self) -> np.ndarray:
        mask = np.ones(self.n_vertices, dtype=bool)
        mask[self.boundary] = False
        return np.nonzero(mask)[0]

    def edges(self) -> Counter:
        c = Counter()
        for a, b, d in self.triangles.tolist():
            for e in ((a, b), (b, d), (d, a)):
                c[(min(e), max(e))] += 1
        return c

    def euler_characteristic(self) -> int:
        return self.n_vertices - len(self.edges()) + len(self.triangles)

    def signed_areas(self) -> np.ndarray:
        p = self.vertices[self.triangles]
        e1, e2 = p[:, 1] - p[:, 0], p[:, 2] - p[:, 0]
        return 0.5 * (e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])

    def validate(self, radius: float = 1.0) -> None:
        """Raise ``ValueError`` unless this is a positively oriented simplicial disc."""
        if self.euler_characteristic() != 1:
            raise ValueError("mesh is not a disc (Euler characteristic != 1)")
        r = np.linalg.norm(self.vertices[self.boundary], axis=1)
        if np.max(np.abs(r - radius)) > 1e-12:
            raise ValueError("boundary vertices must lie on the circle")
        if np.any(self.signed_areas() <= 0):
            raise ValueError("triangles must be positively oriented")
        edges = self.edges()
        nb = len(self.boundary)
        bedges = {(min(int(self.boundary[i]), int(self.boundary[(i + 1) % nb])),
                   max(int(self.boundary[i]), int(self.boundary[(i + 1) % nb]))) for i in range(nb)}
        for e, cnt in edges.items():
            if cnt != (1 if e in bedges else 2):
                raise ValueError(f"edge {e} is shared by {cnt} triangles")
        if not bedges <= set(edges):
            raise ValueError("boundary loop is not made of mesh edges")

    def min_angle(self) -> float:
        """Smallest interior angle over all triangles, in degrees."""
        p = self.vertices[self.triangles]
        best = np.inf
        for k in range(3):
            u = p[:, (k + 1) % 3] - p[:, k]
            v = p[:, (k + 2) % 3] - p[:, k]
            cosang = np.einsum("ij,ij->i", u, v) / (np.linalg.norm(u, axis=1) * np.linalg.norm(v, axis=1))
            best = min(best, float(np.degrees(np.arccos(np.clip(cosang, -1, 1))).min()))
        return best


@lru_cache(maxsize=None)
def _disc_mesh_arrays(depth: int):
    K = 2 ** depth
    verts = [(0.0, 0.0)]
    rings = [[0]]
    for k in range(1, K + 1):
        ang = 2 * np.pi * np.arange(6 * k) / (6 * k)
        start = len(verts)
        verts.extend(zip((k / K) * np.cos(ang), (k / K) * np.sin(ang)))
        rings.append(list(range(start, start + 6 * k)))
    tris = []
    for k in range(1, K + 1):
        inner, outer = rings[k - 1], rings[k]
        if k == 1:
            tris.extend((0, outer[j], outer[(j + 1) % 6]) for j in range(6))
            continue
        # sweep both rings by angle; each sector of the hexagon gets
        # k outer and k-1 inner steps
        ni, no = len(inner), len(outer)
        i = j = 0
        while i < ni or j < no:
            if j < no and (i >= ni or (j + 1) * ni <= (i + 1) * no):
                tris.append((inner[i % ni], outer[j], outer[(j + 1) % no]))
                j += 1
            else:
                tris.append((inner[i % ni], outer[j % no], inner[(i + 1) % ni]))
                i += 1
    V = np.array(verts, dtype=float)
    # snap boundary exactly onto the unit circle
    b = np.array(rings[-1])
    ang = 2 * np.pi * np.arange(len(b)) / len(b)
    V[b] = np.c_[np.cos(ang), np.sin(ang)]
    T = np.array(tris, dtype=np.int64)
    for arr in (V, T, b):
        arr.setflags(write=False)
    return V, T, b


def make_disc_mesh(depth: int) -> DiscMesh:
    """Deterministic disc mesh with a regular ``6 * 2**depth``-gon boundary."""
    if not 0 <= depth <= MAX_DEPTH:
        raise ValueError(f"depth must lie in 0..{MAX_DEPTH}")
    V, T, b = _disc_mesh_arrays(depth)
    return DiscMesh(V, T, b, depth)


def cotangent_stiffness(vertices: np.ndarray, triangles: np.ndarray) -> sp.csr_matrix:
    """Stiffness matrix K of the piecewise-linear Dirichlet integral:
    ``integral |grad u|^2 = sum_d x_d^T K x_d``."""
    n = len(vertices)
    p = vertices[triangles]
    rows, cols, vals = [], [], []
    for k in range(3):
        a, b = (k + 1) % 3, (k + 2) % 3
        u = p[:, a] - p[:, k]
        v = p[:, b] - p[:, k]
        cross = u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0]
        w = 0.5 * np.einsum("ij,ij->i", u, v) / cross
        rows += [triangles[:, a], triangles[:, b]]
        cols += [triangles[:, b], triangles[:, a]]
        vals += [w, w]
    W = sp.coo_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n)).tocsr()
    return (sp.diags(np.asarray(W.sum(axis=1)).ravel()) - W).tocsr()
