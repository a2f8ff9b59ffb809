"""Closed polylines in R^n: length, constant-speed resampling, chord-arc
constants and self-intersection detection.

A :class:`ClosedCurve` stores ``m`` points where point ``i`` connects to
point ``i + 1 (mod m)``.  Arc-length evaluation never depends on the stored
parameter values; those only record how the input was parametrized.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

#: sentinel returned by chord-arc and quasi-conformality computations
UNBOUNDED = math.inf

# fixed thresholds separating genuine self-contact from rounding noise
_CHORD_ZERO_REL = 1e-12
_ARC_SEPARATION_REL = 1e-3
_CONSTANT_SPEED_RTOL = 1e-9


class CurveError(ValueError):
    """Raised for malformed or degenerate curve input."""


def _segment_lengths(points: np.ndarray) -> np.ndarray:
    return np.linalg.norm(np.roll(points, -1, axis=0) - points, axis=1)


@dataclass(frozen=True, eq=False)
class ClosedCurve:
    """Cyclic polyline with parameter values.

    ``params`` are strictly increasing in ``[0, period)``.  When omitted they
    default to cumulative chord length, so the curve is constant speed.
    """

    points: np.ndarray
    params: np.ndarray | None = None
    period: float | None = None
    name: str | None = None
    _cum: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[0] < 3 or pts.shape[1] < 1:
            raise CurveError("a closed curve needs at least 3 points of equal dimension")
        if not np.all(np.isfinite(pts)):
            raise CurveError("curve points must be finite")
        seg = _segment_lengths(pts)
        cum = np.concatenate([[0.0], np.cumsum(seg)])
        if not cum[-1] > 0.0:
            raise CurveError("degenerate curve")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "_cum", cum)

        if self.params is None:
            params = cum[:-1].copy()
            period = float(cum[-1])
        else:
            params = np.array(self.params, dtype=float).ravel()
            if params.shape[0] != pts.shape[0]:
                raise CurveError("params must have one value per point")
            if not np.all(np.isfinite(params)):
                raise CurveError("params must be finite")
            if np.any(np.diff(params) <= 0):
                raise CurveError("params must be strictly increasing")
            if self.period is None:
                # closing chord converted at the average parameter-per-length rate
                if not cum[-2] > 0.0:
                    raise CurveError("degenerate curve")
                rate = float(params[-1] - params[0]) / float(cum[-2])
                period = float(params[-1]) + float(seg[-1]) * rate
            else:
                period = float(self.period)
            if params[0] < 0 or params[-1] >= period:
                raise CurveError("params must lie in [0, period)")
        params.setflags(write=False)
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "period", period)

    # -- basic geometry -------------------------------------------------
    @property
    def dimension(self) -> int:
        return int(self.points.shape[1])

    @property
    def m(self) -> int:
        return int(self.points.shape[0])

    @property
    def length(self) -> float:
        return float(self._cum[-1])

    @property
    def cumulative(self) -> np.ndarray:
        """Arc length at each vertex, with the closing total appended (m + 1 values)."""
        return self._cum

    @property
    def is_constant_speed(self) -> bool:
        dp = np.diff(np.concatenate([self.params, [self.period]])) / self.period
        ds = _segment_lengths(self.points) / self.length
        return bool(np.allclose(dp, ds, rtol=_CONSTANT_SPEED_RTOL, atol=0.0))

    def evaluate(self, s) -> np.ndarray:
        """Point(s) at arc length ``s`` (taken modulo the length)."""
        s_arr = np.asarray(s, dtype=float)
        flat = np.mod(s_arr.ravel(), self.length)
        cum = self._cum
        k = np.searchsorted(cum, flat, side="right") - 1
        k = np.clip(k, 0, self.m - 1)
        w = (flat - cum[k]) / (cum[k + 1] - cum[k])
        nxt = (k + 1) % self.m
        out = self.points[k] + (self.points[nxt] - self.points[k]) * w[:, None]
        return out.reshape(s_arr.shape + (self.dimension,))

    def tangent(self, s, h: float | None = None) -> np.ndarray:
        """Central finite-difference tangent along the curve."""
        if h is None:
            h = 1e-7 * self.length
        s = np.asarray(s, dtype=float)
        return (self.evaluate(s + h) - self.evaluate(s - h)) / (2.0 * h)

    def transformed(self, matrix=None, shift=None, scale: float = 1.0) -> ClosedCurve:
        pts = self.points * scale
        if matrix is not None:
            pts = pts @ np.asarray(matrix, dtype=float).T
        if shift is not None:
            pts = pts + np.asarray(shift, dtype=float)
        return ClosedCurve(pts, name=self.name)

    # -- serialization ----------------------------------------------------
    def to_json(self) -> dict:
        out = {
            "dimension": self.dimension,
            "points": self.points.tolist(),
            "params": self.params.tolist(),
        }
        if self.name is not None:
            out["name"] = self.name
        return out


def curve_from_json(obj) -> ClosedCurve:
    """Parse the curve JSON object, naming the offending key on failure."""
    if not isinstance(obj, dict):
        raise CurveError("curve JSON must be an object")
    for key in ("dimension", "points"):
        if key not in obj:
            raise CurveError(f"missing key '{key}'")
    dim = obj["dimension"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise CurveError("key 'dimension' must be a positive integer")
    rows = obj["points"]
    if not isinstance(rows, list) or len(rows) < 3:
        raise CurveError("key 'points' must list at least 3 points")
    for row in rows:
        if not isinstance(row, list) or len(row) != dim:
            raise CurveError("key 'points' has a row whose length differs from 'dimension'")
        for v in row:
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise CurveError("key 'points' contains a non-finite or non-numeric value")
    params = obj.get("params")
    if params is not None:
        if not isinstance(params, list) or len(params) != len(rows):
            raise CurveError("key 'params' must have one value per point")
        for v in params:
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise CurveError("key 'params' contains a non-finite or non-numeric value")
    name = obj.get("name")
    if name is not None and not isinstance(name, str):
        raise CurveError("key 'name' must be a string")
    try:
        return ClosedCurve(np.array(rows, dtype=float), params=params, name=name)
    except CurveError as exc:
        key = "params" if "param" in str(exc) else "points"
        raise CurveError(f"key '{key}': {exc}") from None


def load_curve(path) -> ClosedCurve:
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise CurveError(f"invalid JSON: {exc}") from None
    return curve_from_json(obj)


def save_curve(curve: ClosedCurve, path) -> None:
    Path(path).write_text(json.dumps(curve.to_json()) + "\n", encoding="utf-8")


# -- operations -------------------------------------------------------------
def curve_length(c: ClosedCurve) -> float:
    return c.length


def constant_speed_reparam(c: ClosedCurve, m_out: int) -> ClosedCurve:
    """Resample ``c`` at ``m_out`` points equally spaced in arc length.

    The first output point is the input's arc-length-0 point.
    """
    if m_out < 3:
        raise CurveError("m_out must be at least 3")
    L = c.length
    if not L > 0:
        raise CurveError("degenerate curve")
    s = np.arange(m_out) * (L / m_out)
    # equal arc-length samples give chords that differ at input vertices;
    # slide the samples along c until the chords agree
    for _ in range(100):
        pts = c.evaluate(s)
        chord = _segment_lengths(pts)
        cum = np.concatenate([[0.0], np.cumsum(chord)])
        if np.ptp(chord) <= 1e-13 * cum[-1] / m_out:
            break
        target = np.arange(m_out) * (cum[-1] / m_out)
        s_closed = np.concatenate([s, [L]])
        s = np.interp(target, cum, s_closed)
    pts = c.evaluate(s)
    params = np.arange(m_out) * (L / m_out)
    return ClosedCurve(pts, params=params, period=L, name=c.name)


def _pair_indices(m: int, pair_budget: int, rng: np.random.Generator):
    if m * m <= pair_budget:
        i, j = np.triu_indices(m, k=1)
        return i, j
    n = int(pair_budget)
    i = rng.integers(0, m, size=n)
    j = rng.integers(0, m, size=n)
    keep = i != j
    return i[keep], j[keep]


def chord_arc_from_distances(arc, chord, total_length: float) -> float:
    """sup of (arc separation) / chord over sampled pairs, arc measured along a
    circle of circumference ``total_length``."""
    arc = np.asarray(arc, dtype=float)
    chord = np.asarray(chord, dtype=float)
    bad = (chord < _CHORD_ZERO_REL * total_length) & (arc >= _ARC_SEPARATION_REL * total_length)
    if np.any(bad):
        return UNBOUNDED
    ok = chord > 0
    if not np.any(ok):
        return 1.0
    return float(np.max(arc[ok] / chord[ok]))


def chord_arc_constant(c: ClosedCurve, pair_budget: int = 1_000_000, seed: int = 0) -> float:
    """Sampled chord-arc constant of a constant-speed polyline.

    Returns :data:`UNBOUNDED` when a pair with positive arc separation has
    (numerically) zero chord.
    """
    if not c.is_constant_speed:
        raise CurveError("chord_arc_constant requires a constant-speed curve")
    L = c.length
    s = c.cumulative[:-1]
    rng = np.random.default_rng(seed)
    i, j = _pair_indices(c.m, pair_budget, rng)
    best = 0.0
    for lo in range(0, len(i), 1 << 18):
        ii, jj = i[lo:lo + (1 << 18)], j[lo:lo + (1 << 18)]
        d = np.abs(s[ii] - s[jj])
        arc = np.minimum(d, L - d)  # (l / 2pi) * d_{S^1} is just the arc distance
        chord = np.linalg.norm(c.points[ii] - c.points[jj], axis=1)
        val = chord_arc_from_distances(arc, chord, L)
        if val == UNBOUNDED:
            return UNBOUNDED
        best = max(best, val)
    return best


def _closest_points(p0, p1, q0, q1):
    """Vectorized closest points between segment batches [p0,p1] and [q0,q1].

    Returns parameters (a, b) in [0, 1] and a flag for parallel pairs.
    """
    d1 = p1 - p0
    d2 = q1 - q0
    r = p0 - q0
    A = np.einsum("ij,ij->i", d1, d1)
    E = np.einsum("ij,ij->i", d2, d2)
    F = np.einsum("ij,ij->i", d2, r)
    C = np.einsum("ij,ij->i", d1, r)
    B = np.einsum("ij,ij->i", d1, d2)
    denom = A * E - B * B
    parallel = denom <= 1e-14 * A * E
    with np.errstate(divide="ignore", invalid="ignore"):
        a = np.where(parallel, 0.0, np.clip((B * F - C * E) / denom, 0.0, 1.0))
        b = (B * a + F) / E
        b_clamped = np.clip(b, 0.0, 1.0)
        a = np.where(b != b_clamped, np.clip((B * b_clamped - C) / A, 0.0, 1.0), a)
    return a, b_clamped, parallel


def self_intersections(c: ClosedCurve, tol: float = 0.0):
    """Non-adjacent segment pairs closer than ``tol``, with witness points.

    Contacts of several segment pairs at one spot (a vertex visited twice)
    are reported once, under the smallest index pair.  Overlapping collinear
    pairs are always reported individually, witnessed at the overlap midpoint.
    """
    m = c.m
    P = c.points
    Q = np.roll(P, -1, axis=0)
    i, j = np.triu_indices(m, k=2)
    keep = ~((i == 0) & (j == m - 1))
    i, j = i[keep], j[keep]
    eps = max(tol, _CHORD_ZERO_REL * c.length)

    # bounding-box prefilter
    lo = np.minimum(P, Q)
    hi = np.maximum(P, Q)
    near = np.all((lo[i] <= hi[j] + eps) & (lo[j] <= hi[i] + eps), axis=1)
    i, j = i[near], j[near]
    if len(i) == 0:
        return []
    a, b, parallel = _closest_points(P[i], Q[i], P[j], Q[j])
    x = P[i] + (Q[i] - P[i]) * a[:, None]
    y = P[j] + (Q[j] - P[j]) * b[:, None]
    dist = np.linalg.norm(x - y, axis=1)
    hit = dist <= eps
    witnesses = 0.5 * (x + y)

    # overlap of parallel hits: project segment j onto segment i
    out_overlap = []
    out_point = []
    for k in np.nonzero(hit)[0]:
        si, sj = int(i[k]), int(j[k])
        if parallel[k]:
            d = Q[si] - P[si]
            dd = float(d @ d)
            t0 = float((P[sj] - P[si]) @ d) / dd
            t1 = float((Q[sj] - P[si]) @ d) / dd
            lo_t, hi_t = max(0.0, min(t0, t1)), min(1.0, max(t0, t1))
            if hi_t - lo_t > 1e-9:
                mid = P[si] + d * (0.5 * (lo_t + hi_t))
                out_overlap.append(((si, sj), mid))
                continue
        out_point.append(((si, sj), witnesses[k]))

    merged = []
    for pair, pt in sorted(out_point, key=lambda e: e[0]):
        if any(np.linalg.norm(pt - q) <= max(eps, 1e-9 * c.length) for _, q in merged):
            continue
        merged.append((pair, pt))
    result = out_overlap + merged
    result.sort(key=lambda e: e[0])
    return [(pair, np.asarray(pt)) for pair, pt in result]


# -- bundled test curves --------------------------------------------------
def circle(m: int = 360, radius: float = 1.0, center=(0.0, 0.0), name: str = "circle") -> ClosedCurve:
    t = 2 * np.pi * np.arange(m) / m
    pts = np.c_[center[0] + radius * np.cos(t), center[1] + radius * np.sin(t)]
    return ClosedCurve(pts, name=name)


def ellipse(m: int = 360, a: float = 2.0, b: float = 1.0) -> ClosedCurve:
    t = 2 * np.pi * np.arange(m) / m
    return ClosedCurve(np.c_[a * np.cos(t), b * np.sin(t)], name="ellipse")


def double_circle(m: int = 720) -> ClosedCurve:
    """Unit circle traversed twice."""
    t = 4 * np.pi * np.arange(m) / m
    return ClosedCurve(np.c_[np.cos(t), np.sin(t)], name="double-circle")


def figure_eight(samples_per_circle: int = 180) -> ClosedCurve:
    """Two unit circles tangent at the origin, traversed as one smooth loop."""
    t = 2 * np.pi * np.arange(samples_per_circle) / samples_per_circle
    left = np.c_[np.cos(t) - 1.0, np.sin(t)]
    right = np.c_[1.0 - np.cos(t), np.sin(t)]
    return ClosedCurve(np.vstack([left, right]), name="figure-eight")


def trefoil_projection(m: int = 540) -> ClosedCurve:
    """Planar trefoil-knot diagram with three crossings."""
    t = 2 * np.pi * np.arange(m) / m
    pts = np.c_[np.sin(t) + 2 * np.sin(2 * t), np.cos(t) - 2 * np.cos(2 * t)]
    return ClosedCurve(pts / 3.0, name="trefoil-projection")


def saddle_curve(m: int = 360, height: float = 0.5) -> ClosedCurve:
    """Non-planar Lipschitz loop in R^3 over the unit circle."""
    t = 2 * np.pi * np.arange(m) / m
    return ClosedCurve(np.c_[np.cos(t), np.sin(t), height * np.cos(2 * t)], name="saddle-3d")


def corpus() -> dict[str, ClosedCurve]:
    """The bundled test curves, keyed by name."""
    curves = [circle(), ellipse(), double_circle(), figure_eight(), trefoil_projection(), saddle_curve()]
    return {c.name: c for c in curves}
