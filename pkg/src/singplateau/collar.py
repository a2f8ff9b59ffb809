"""The collar space: R^n with a flat cylinder S x [0, l] glued along a
constant-speed curve, ``(p, 0) ~ gamma(p)``.

Distances follow the quotient metric of the gluing:

* ambient/ambient: Euclidean,
* ambient/collar: ``min_p |x - gamma(p)| + d_Y((p, 0), y)``,
* collar/collar: ``min(d_Y(x, y), min_{p,q} d_Y(x,(p,0)) + |gamma(p)-gamma(q)| + d_Y((q,0),y))``,

with ``d_Y`` the flat cylinder distance on a circle of circumference ``l``.
Minimizations over the seam run on a fixed grid and every competitive grid
minimum is polished by golden-section search.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .curves import ClosedCurve, CurveError, chord_arc_from_distances

MIN_SEAM_SAMPLES = 64
_SEAM_SNAP = 1e-12


@dataclass(frozen=True)
class CollarPoint:
    """A point of the collar space.

    Ambient points carry ``x``; collar points carry arc position ``s`` and
    height ``t > 0``.  Build them through :class:`CollarSpace` so seam points
    are stored in canonical (ambient) form.
    """

    tag: str
    x: tuple | None = None
    s: float = 0.0
    t: float = 0.0

    @property
    def is_ambient(self) -> bool:
        return self.tag == "ambient"


@dataclass(frozen=True, eq=False)
class CollarSpace:
    base_curve: ClosedCurve
    seam_samples: int = 256
    # strict=False admits coarse seams for diagnostics; results may then violate the axioms
    strict: bool = True
    _grid_p: np.ndarray = field(init=False, repr=False)
    _grid_x: np.ndarray = field(init=False, repr=False)
    _grid_d: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if not self.base_curve.is_constant_speed:
            raise CurveError("the collar is glued along a constant-speed curve")
        if self.strict and self.seam_samples < MIN_SEAM_SAMPLES:
            raise ValueError(f"seam_samples must be at least {MIN_SEAM_SAMPLES}")
        G = int(self.seam_samples)
        p = np.arange(G) * (self.l / G)
        x = np.ascontiguousarray(self.base_curve.evaluate(p))
        diff = x[:, None, :] - x[None, :, :]
        d = np.sqrt(np.sum(diff * diff, axis=2))
        object.__setattr__(self, "_grid_p", p)
        object.__setattr__(self, "_grid_x", x)
        object.__setattr__(self, "_grid_d", np.ascontiguousarray(d))

    @property
    def l(self) -> float:
        return self.base_curve.length

    @property
    def dimension(self) -> int:
        return self.base_curve.dimension

    def with_samples(self, seam_samples: int) -> CollarSpace:
        return CollarSpace(self.base_curve, seam_samples, self.strict)

    # -- points ---------------------------------------------------------------
    def ambient(self, x) -> CollarPoint:
        x = np.asarray(x, dtype=float).ravel()
        if x.shape[0] != self.dimension:
            raise ValueError("ambient point has the wrong dimension")
        return CollarPoint("ambient", x=tuple(float(v) for v in x))

    def collar(self, s: float, t: float) -> CollarPoint:
        l = self.l
        if not 0.0 <= t <= l * (1 + 1e-15):
            raise ValueError("collar height must lie in [0, l]")
        s = float(s) % l
        if t <= _SEAM_SNAP * l:
            return self.ambient(self.base_curve.evaluate(s))
        return CollarPoint("collar", s=s, t=min(float(t), l))

    def retraction(self, a: CollarPoint) -> np.ndarray:
        """Collapse the collar onto the curve; identity on the ambient space."""
        if a.is_ambient:
            return np.array(a.x)
        return self.base_curve.evaluate(a.s)

    # -- distances ----------------------------------------------------------------
    def _pack(self, points):
        k = len(points)
        tag = np.empty(k, dtype=np.int8)
        x = np.zeros((k, self.dimension))
        s = np.zeros(k)
        t = np.zeros(k)
        for i, p in enumerate(points):
            if p.is_ambient:
                tag[i] = kernels.TAG_AMBIENT
                x[i] = p.x
            else:
                tag[i] = kernels.TAG_COLLAR
                s[i] = p.s
                t[i] = p.t
        return tag, x, s, t

    def _geom(self):
        P = np.ascontiguousarray(self.base_curve.points)
        cum = np.ascontiguousarray(self.base_curve.cumulative)
        return P, cum, self.l, self._grid_p, self._grid_x, self._grid_d

    def distances(self, a_list, b_list, backend=None) -> np.ndarray:
        """Pairwise distances d(a_list[i], b_list[i])."""
        if len(a_list) != len(b_list):
            raise ValueError("point lists differ in length")
        if not len(a_list):
            return np.zeros(0)
        be = backend or kernels.backend
        return np.asarray(be.batch_distances(*self._geom(), *self._pack(a_list), *self._pack(b_list)))

    def distance(self, a: CollarPoint, b: CollarPoint, backend=None) -> float:
        return float(self.distances([a], [b], backend)[0])

    def cylinder_distance(self, a: CollarPoint, b: CollarPoint) -> float:
        """Flat-cylinder distance of two collar points (seam points at t = 0)."""
        sa, ta = self._collar_coords(a)
        sb, tb = self._collar_coords(b)
        d = abs(sa - sb) % self.l
        d = min(d, self.l - d)
        return math.sqrt(d * d + (ta - tb) ** 2)

    def _collar_coords(self, a: CollarPoint):
        if a.is_ambient:
            raise ValueError("ambient points have no cylinder coordinates")
        return a.s, a.t

    # -- sampled objects --------------------------------------------------------
    def gamma_l(self, m: int) -> list[CollarPoint]:
        """``m`` equally spaced points of the top circle S x {l}."""
        if m < 3:
            raise ValueError("m must be at least 3")
        return [self.collar(i * self.l / m, self.l) for i in range(m)]

    def random_points(self, k: int, rng: np.random.Generator) -> list[CollarPoint]:
        """Mixed sample: ambient points near the curve, collar points biased
        toward the seam where routes through the ambient space matter."""
        pts = self.base_curve.points
        lo = pts.min(axis=0)
        hi = pts.max(axis=0)
        pad = 0.25 * (hi - lo).max()
        out = []
        kinds = rng.integers(0, 3, size=k)
        for kind in kinds:
            if kind == 0:
                out.append(self.ambient(rng.uniform(lo - pad, hi + pad)))
            elif kind == 1:
                out.append(self.collar(rng.uniform(0, self.l), self.l * rng.uniform() ** 2))
            else:
                out.append(self.collar(rng.uniform(0, self.l), self.l * rng.uniform()))
        return out


# -- module-level operations ----------------------------------------------------
def collar_distance(space: CollarSpace, a: CollarPoint, b: CollarPoint) -> float:
    return space.distance(a, b)


def retraction(space: CollarSpace, a: CollarPoint) -> np.ndarray:
    return space.retraction(a)


def gamma_l(space: CollarSpace, m: int) -> list[CollarPoint]:
    return space.gamma_l(m)


def gamma_l_length(space: CollarSpace, m: int) -> float:
    pts = space.gamma_l(m)
    return float(np.sum(space.distances(pts, pts[1:] + pts[:1])))


def gamma_l_chord_arc(space: CollarSpace, m: int = 128) -> float:
    """Chord-arc constant of the sampled top circle, chords measured in the
    collar metric over all sample pairs."""
    pts = space.gamma_l(m)
    i, j = np.triu_indices(m, k=1)
    chord = space.distances([pts[k] for k in i], [pts[k] for k in j])
    d = np.abs(i - j) * (space.l / m)
    arc = np.minimum(d, space.l - d)
    return chord_arc_from_distances(arc, chord, space.l)


def verify_metric_axioms(space: CollarSpace, trials: int = 10_000, seed: int = 0) -> dict:
    """Metric sanity of the discrete quotient distance on random triples."""
    if trials < 1:
        raise ValueError("trials must be positive")
    rng = np.random.default_rng(seed)
    a = space.random_points(trials, rng)
    b = space.random_points(trials, rng)
    c = space.random_points(trials, rng)
    dab = space.distances(a, b)
    dba = space.distances(b, a)
    dbc = space.distances(b, c)
    dac = space.distances(a, c)
    slack = 1e-6 * space.l
    excess = dac - (dab + dbc)
    self_d = space.distances(a, a)
    distinct = np.array([p != q for p, q in zip(a, b)])
    report = {
        "trials": trials,
        "seed": seed,
        "seam_samples": space.seam_samples,
        "slack": slack,
        "symmetry_violations": int(np.count_nonzero(dab != dba)),
        "triangle_violations": int(np.count_nonzero(excess > slack)),
        "worst_triangle_excess": float(max(excess.max(), 0.0)),
        "identity_violations": int(np.count_nonzero(self_d != 0.0))
        + int(np.count_nonzero(distinct & (dab <= 0.0))),
    }
    report["pass"] = (
        report["symmetry_violations"] == 0
        and report["triangle_violations"] == 0
        and report["identity_violations"] == 0
    )
    return report


def check_retraction_lipschitz(space: CollarSpace, pairs: int = 10_000, seed: int = 1) -> dict:
    rng = np.random.default_rng(seed)
    a = space.random_points(pairs, rng)
    b = space.random_points(pairs, rng)
    d = space.distances(a, b)
    pa = np.array([space.retraction(p) for p in a])
    pb = np.array([space.retraction(p) for p in b])
    excess = np.linalg.norm(pa - pb, axis=1) - d
    slack = 1e-6 * space.l
    return {
        "pairs": pairs,
        "seed": seed,
        "slack": slack,
        "violations": int(np.count_nonzero(excess > slack)),
        "worst_excess": float(max(excess.max(), 0.0)),
        "pass": bool(np.all(excess <= slack)),
    }


def check_ambient_isometry(space: CollarSpace, pairs: int = 1_000, seed: int = 2) -> dict:
    rng = np.random.default_rng(seed)
    pts = space.base_curve.points
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    x = rng.uniform(lo - 1, hi + 1, size=(pairs, space.dimension))
    y = rng.uniform(lo - 1, hi + 1, size=(pairs, space.dimension))
    d = space.distances([space.ambient(v) for v in x], [space.ambient(v) for v in y])
    diff = x - y
    euclid = np.sqrt(np.sum(diff * diff, axis=1))
    mismatches = int(np.count_nonzero(d != euclid))
    return {"pairs": pairs, "seed": seed, "mismatches": mismatches,
            "worst_abs_error": float(np.max(np.abs(d - euclid))), "pass": mismatches == 0}
