"""Area and energy of piecewise-affine discs through their Gram seminorms.

On each mesh triangle the map is affine with linear part ``A`` (n x 2), and
the seminorm ``v -> |A v|`` has Gram matrix ``G = A^T A``.  Every pointwise
quantity here is a function of ``G``:

* Busemann Jacobian ``J = sqrt(det G)`` (zero on degenerate seminorms),
* Reshetnyak density ``lambda_max(G)``,
* quasi-conformality ``sqrt(lambda_max / lambda_min)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .curves import UNBOUNDED

_PSD_TOL = 1e-12
_Q_DEGENERATE = 1e-14


@dataclass(frozen=True)
class SeminormG:
    """Symmetric PSD Gram matrix ``[[g11, g12], [g12, g22]]``."""

    g11: float
    g12: float
    g22: float

    def __post_init__(self):
        scale = (1.0 + abs(self.g11) + abs(self.g22)) ** 2
        if self.g11 < -_PSD_TOL * scale or self.g22 < -_PSD_TOL * scale:
            raise ValueError("Gram diagonal must be nonnegative")
        if self.g11 * self.g22 - self.g12 ** 2 < -_PSD_TOL * scale:
            raise ValueError("Gram matrix is not positive semidefinite")

    @classmethod
    def from_matrix(cls, G) -> SeminormG:
        G = np.asarray(G, dtype=float)
        return cls(float(G[0, 0]), float(0.5 * (G[0, 1] + G[1, 0])), float(G[1, 1]))

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.g11, self.g12], [self.g12, self.g22]])

    def __call__(self, v) -> float:
        v = np.asarray(v, dtype=float)
        return math.sqrt(max(float(v @ self.matrix @ v), 0.0))

    def eigenvalues(self) -> tuple[float, float]:
        """(lambda_min, lambda_max), clipped at zero."""
        return tuple(float(x) for x in _eig2(np.array([self.g11]), np.array([self.g12]), np.array([self.g22]))[:, 0])


@dataclass(frozen=True)
class TriangleFrame:
    reference: np.ndarray  # (3, 2)
    image: np.ndarray  # (3, n)

    def __post_init__(self):
        ref = np.asarray(self.reference, dtype=float)
        img = np.asarray(self.image, dtype=float)
        if ref.shape != (3, 2) or img.ndim != 2 or img.shape[0] != 3:
            raise ValueError("a triangle frame needs 3 reference points in R^2 and 3 image points")
        e = ref[1:] - ref[0]
        area = 0.5 * abs(e[0, 0] * e[1, 1] - e[0, 1] * e[1, 0])
        scale = max(float(np.max(np.abs(e))), 1e-300)
        if area < 1e-14 * scale * scale:
            raise ValueError("degenerate reference triangle")
        object.__setattr__(self, "reference", ref)
        object.__setattr__(self, "image", img)


def _eig2(g11, g12, g22):
    """Eigenvalues of batches of symmetric 2x2 matrices, shape (2, k)."""
    half_tr = 0.5 * (g11 + g22)
    rad = np.hypot(0.5 * (g11 - g22), g12)
    lmax = half_tr + rad
    # lambda_min from det / lambda_max is accurate when lambda_min << lambda_max
    det = g11 * g22 - g12 * g12
    with np.errstate(divide="ignore", invalid="ignore"):
        lmin = np.where(lmax > 0, det / lmax, 0.0)
    return np.maximum(np.vstack([lmin, lmax]), 0.0)


# -- per-triangle kernels ---------------------------------------------------
def linear_parts(ref_tris: np.ndarray, img_tris: np.ndarray) -> np.ndarray:
    """Linear part A (k, n, 2) of the affine maps sending reference triangles
    (k, 3, 2) onto image triangles (k, 3, n)."""
    e1 = ref_tris[:, 1] - ref_tris[:, 0]
    e2 = ref_tris[:, 2] - ref_tris[:, 0]
    f1 = img_tris[:, 1] - img_tris[:, 0]
    f2 = img_tris[:, 2] - img_tris[:, 0]
    det = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]
    # closed-form inverse of E = [e1 e2]
    c0 = (f1 * e2[:, 1:2] - f2 * e1[:, 1:2]) / det[:, None]
    c1 = (f2 * e1[:, 0:1] - f1 * e2[:, 0:1]) / det[:, None]
    return np.stack([c0, c1], axis=2)


def grams(A: np.ndarray):
    """Gram entries (g11, g12, g22) of linear parts A (k, n, 2)."""
    a, b = A[:, :, 0], A[:, :, 1]
    return (np.einsum("ij,ij->i", a, a), np.einsum("ij,ij->i", a, b), np.einsum("ij,ij->i", b, b))


def wedge_norms(A: np.ndarray) -> np.ndarray:
    """|a ^ b| for the columns of each A; equals sqrt(det A^T A) without the
    cancellation of forming the determinant."""
    a, b = A[:, :, 0], A[:, :, 1]
    n = A.shape[1]
    if n == 1:
        return np.zeros(A.shape[0])
    if n == 2:
        return np.abs(a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0])
    if n == 3:
        return np.linalg.norm(np.cross(a, b), axis=1)
    i, j = np.triu_indices(n, k=1)
    minors = a[:, i] * b[:, j] - a[:, j] * b[:, i]
    return np.sqrt(np.einsum("ij,ij->i", minors, minors))


def reference_areas(ref_tris: np.ndarray) -> np.ndarray:
    e1 = ref_tris[:, 1] - ref_tris[:, 0]
    e2 = ref_tris[:, 2] - ref_tris[:, 0]
    return 0.5 * np.abs(e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])


def triangle_gram(t: TriangleFrame) -> SeminormG:
    A = linear_parts(t.reference[None], t.image[None])
    g11, g12, g22 = grams(A)
    return SeminormG(float(g11[0]), float(g12[0]), float(g22[0]))


# -- pointwise quantities -------------------------------------------------------
def busemann_jacobian(s: SeminormG) -> float:
    """pi over the area of the unit ball of the seminorm."""
    det = s.g11 * s.g22 - s.g12 * s.g12
    if det <= 0.0:
        return 0.0
    # sqrt(det) <= lambda_max mathematically; the min only absorbs rounding
    return min(math.sqrt(det), s.eigenvalues()[1])


def reshetnyak_density(s: SeminormG) -> float:
    return s.eigenvalues()[1]


def quasi_conformality(s: SeminormG) -> float:
    lmin, lmax = s.eigenvalues()
    return float(quasi_conformality_batch(np.array([lmin]), np.array([lmax]))[0])


def quasi_conformality_batch(lmin: np.ndarray, lmax: np.ndarray) -> np.ndarray:
    q = np.ones_like(lmax)
    pos = lmax > 0
    degenerate = pos & (lmin <= _Q_DEGENERATE * lmax)
    good = pos & ~degenerate
    q[good] = np.sqrt(lmax[good] / lmin[good])
    q[degenerate] = UNBOUNDED
    return q


# -- whole-disc functionals ---------------------------------------------------------
@dataclass
class TriangleStats:
    """Per-triangle pointwise data of a piecewise-affine map."""

    ref_area: np.ndarray
    jacobian: np.ndarray
    lmin: np.ndarray
    lmax: np.ndarray
    trace: np.ndarray

    @property
    def q(self) -> np.ndarray:
        return quasi_conformality_batch(self.lmin, self.lmax)


def triangle_stats(ref_vertices: np.ndarray, triangles: np.ndarray, positions: np.ndarray) -> TriangleStats:
    ref = ref_vertices[triangles]
    img = positions[triangles]
    A = linear_parts(ref, img)
    g11, g12, g22 = grams(A)
    lmin, lmax = _eig2(g11, g12, g22)
    return TriangleStats(reference_areas(ref), wedge_norms(A), lmin, lmax, g11 + g22)


def _fsum(values: np.ndarray) -> float:
    # compensated, order-fixed summation keeps totals run-to-run identical
    return math.fsum(values.tolist())


def map_area(ref_vertices, triangles, positions) -> float:
    st = triangle_stats(ref_vertices, triangles, positions)
    return _fsum(st.jacobian * st.ref_area)


def map_energy(ref_vertices, triangles, positions, kind: str = "dirichlet") -> float:
    st = triangle_stats(ref_vertices, triangles, positions)
    if kind == "reshetnyak":
        return _fsum(st.lmax * st.ref_area)
    if kind == "dirichlet":
        return _fsum(0.5 * st.trace * st.ref_area)
    raise ValueError(f"unknown energy kind {kind!r}")


def disc_area(u) -> float:
    """Busemann area of a disc map (anything with ``mesh`` and ``positions``)."""
    return map_area(u.mesh.vertices, u.mesh.triangles, u.positions)


def disc_energy(u, kind: str = "dirichlet") -> float:
    """Reshetnyak (``lambda_max``) or normalized Dirichlet (``tr G / 2``) energy."""
    return map_energy(u.mesh.vertices, u.mesh.triangles, u.positions, kind)


def holder_quotient(u, alpha: float, region: str = "closure", max_pairs: int = 1_000_000, seed: int = 0):
    """Sampled maximum of |u(x) - u(y)| / |x - y|^alpha over vertex pairs.

    Returns ``(value, n_pairs)``.  ``region='interior'`` restricts to
    vertices with ``|z| <= 0.9``.
    """
    if not 0 < alpha <= 1:
        raise ValueError("alpha must lie in (0, 1]")
    z = u.mesh.vertices
    x = u.positions
    if region == "interior":
        idx = np.nonzero(np.linalg.norm(z, axis=1) <= 0.9 + 1e-12)[0]
    elif region == "closure":
        idx = np.arange(len(z))
    else:
        raise ValueError(f"unknown region {region!r}")
    return pair_quotient_max(z[idx], x[idx], alpha, max_pairs, seed)


def pair_quotient_max(z: np.ndarray, x: np.ndarray, alpha: float, max_pairs: int, seed: int):
    k = len(z)
    if k < 2:
        return 0.0, 0
    total = k * (k - 1) // 2
    if total <= max_pairs:
        i, j = np.triu_indices(k, k=1)
    else:
        rng = np.random.default_rng(seed)
        i = rng.integers(0, k, size=max_pairs)
        j = rng.integers(0, k, size=max_pairs)
        keep = i != j
        i, j = i[keep], j[keep]
    best = 0.0
    chunk = 1 << 18
    for lo in range(0, len(i), chunk):
        ii, jj = i[lo:lo + chunk], j[lo:lo + chunk]
        dz = np.linalg.norm(z[ii] - z[jj], axis=1)
        dx = np.linalg.norm(x[ii] - x[jj], axis=1)
        ok = dz > 0
        if np.any(ok):
            best = max(best, float(np.max(dx[ok] / dz[ok] ** alpha)))
    return best, int(len(i))


def holder_exponents(iso_times_4pi=1, property_et: bool = True) -> tuple[Fraction, Fraction]:
    """Interior and boundary Holder exponents of the collar minimizer.

    ``iso_times_4pi`` is ``4*pi*C`` for a ``C``-quadratic isoperimetric
    inequality (1 for Euclidean space).  With property (ET) the interior
    exponent is ``1 / (4 pi C + 2)``; otherwise ``1 / (8 pi C + 4)``.  The
    boundary exponent is a ninth of the interior one (the lifted boundary
    curve is 1-chord-arc, so ``(1 + 2)^2 = 9``).
    """
    c = Fraction(iso_times_4pi)
    alpha = 1 / (c + 2) if property_et else 1 / (2 * c + 4)
    return alpha, alpha / 9
