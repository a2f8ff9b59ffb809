"""Pure-Python/NumPy collar distance kernels.

Mirror of ``_ckernels.pyx`` operation for operation; used when the compiled
extension is unavailable and as the reference in equivalence tests.

Geometry arguments (shared with the compiled kernels):

``P`` (m, n) polyline vertices, ``cum`` (m + 1,) cumulative arc length,
``l`` total length, ``grid_p`` (G,) seam sample parameters, ``grid_x``
(G, n) curve points at those parameters, ``grid_d`` (G, G) their pairwise
Euclidean distances.
"""
from __future__ import annotations

import math

import numpy as np

INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
REL_TOL = 1e-12

TAG_AMBIENT = 0
TAG_COLLAR = 1


def _dS(a, b, l):
    d = abs(a - b) % l
    return min(d, l - d)


def _eval(P, cum, l, s):
    m = P.shape[0]
    s = s % l
    # last k with cum[k] <= s
    k = int(np.searchsorted(cum, s, side="right")) - 1
    if k < 0:
        k = 0
    elif k > m - 1:
        k = m - 1
    w = (s - cum[k]) / (cum[k + 1] - cum[k])
    k1 = k + 1 if k + 1 < m else 0
    return P[k] + (P[k1] - P[k]) * w


def _norm(v):
    return math.sqrt(float(np.sum(v * v)))


def _golden(f, a, b, tol):
    c = b - INVPHI * (b - a)
    d = a + INVPHI * (b - a)
    fc = f(c)
    fd = f(d)
    while b - a > tol:
        if fc < fd:
            b = d
            d = c
            fd = fc
            c = b - INVPHI * (b - a)
            fc = f(c)
        else:
            a = c
            c = d
            fc = fd
            d = a + INVPHI * (b - a)
            fd = f(d)
    return min(fc, fd)


def _local_minima(v, margin):
    G = len(v)
    best = float(np.min(v))
    left = np.roll(v, 1)
    right = np.roll(v, -1)
    cand = np.nonzero((v <= left) & (v < right) & (v <= best + margin))[0]
    if len(cand) == 0:
        cand = np.array([int(np.argmin(v))])
    return cand


def ambient_collar(P, cum, l, grid_p, grid_x, x, s, t):
    """min over p of |x - gamma(p)| + d_Y((p, 0), (s, t))."""
    G = len(grid_p)
    h = l / G
    diff = grid_x - x
    v = np.sqrt(np.sum(diff * diff, axis=1))
    ds = np.abs(grid_p - s) % l
    ds = np.minimum(ds, l - ds)
    v = v + np.sqrt(ds * ds + t * t)
    best = float(np.min(v))

    def f(p):
        g = _eval(P, cum, l, p)
        dps = _dS(p, s, l)
        return _norm(x - g) + math.sqrt(dps * dps + t * t)

    for i in _local_minima(v, 2.0 * h):
        p0 = grid_p[i]
        best = min(best, _golden(f, p0 - h, p0 + h, REL_TOL * l))
    return best


def collar_collar(P, cum, l, grid_p, grid_x, grid_d, s1, t1, s2, t2):
    """Distance between two collar points: the direct cylinder distance, or
    a route down to the seam, through the ambient space, and back up."""
    # order the arguments so the result is exactly symmetric
    if (s2, t2) < (s1, t1):
        s1, t1, s2, t2 = s2, t2, s1, t1
    dss = _dS(s1, s2, l)
    dY = math.sqrt(dss * dss + (t1 - t2) * (t1 - t2))
    if dY <= t1 + t2:
        return dY
    G = len(grid_p)
    h = l / G
    d1 = np.abs(grid_p - s1) % l
    d1 = np.minimum(d1, l - d1)
    a = np.sqrt(d1 * d1 + t1 * t1)
    d2 = np.abs(grid_p - s2) % l
    d2 = np.minimum(d2, l - d2)
    b = np.sqrt(d2 * d2 + t2 * t2)
    coarse = np.min(a[:, None] + grid_d, axis=0) + b
    best = min(dY, float(np.min(coarse)))

    def F(q):
        z = _eval(P, cum, l, q)
        dq = _dS(q, s2, l)
        return ambient_collar(P, cum, l, grid_p, grid_x, z, s1, t1) + math.sqrt(dq * dq + t2 * t2)

    for j in _local_minima(coarse, 4.0 * h):
        if coarse[j] - 4.0 * h >= best:
            continue
        q0 = grid_p[j]
        best = min(best, _golden(F, q0 - h, q0 + h, REL_TOL * l))
    return best


def batch_distances(P, cum, l, grid_p, grid_x, grid_d, tag_a, xa, sa, ta, tag_b, xb, sb, tb):
    k = len(tag_a)
    out = np.empty(k)
    for i in range(k):
        if tag_a[i] == TAG_AMBIENT and tag_b[i] == TAG_AMBIENT:
            out[i] = _norm(xa[i] - xb[i])
        elif tag_a[i] == TAG_AMBIENT:
            out[i] = ambient_collar(P, cum, l, grid_p, grid_x, xa[i], sb[i], tb[i])
        elif tag_b[i] == TAG_AMBIENT:
            out[i] = ambient_collar(P, cum, l, grid_p, grid_x, xb[i], sa[i], ta[i])
        else:
            out[i] = collar_collar(P, cum, l, grid_p, grid_x, grid_d, sa[i], ta[i], sb[i], tb[i])
    return out
