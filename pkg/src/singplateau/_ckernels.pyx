# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled collar distance kernels.  See ``_pykernels`` for the reference
implementation and argument conventions."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, fmod

cnp.import_array()

cdef double INVPHI = (sqrt(5.0) - 1.0) / 2.0
cdef double REL_TOL = 1e-12


cdef inline double _dS(double a, double b, double l) nogil:
    cdef double d = fmod(fabs(a - b), l)
    return d if d < l - d else l - d


cdef inline double _wrap(double s, double l) nogil:
    cdef double r = fmod(s, l)
    if r < 0:
        r += l
    return r


cdef struct Geom:
    const double* P
    const double* cum
    int m
    int n
    double l
    const double* grid_p
    const double* grid_x
    const double* grid_d
    int G


cdef inline int _segment(const Geom* g, double s) nogil:
    # last k with cum[k] <= s, clamped to [0, m - 1]
    cdef int lo = 0, hi = g.m + 1, mid
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if g.cum[mid] <= s:
            lo = mid
        else:
            hi = mid
    if lo > g.m - 1:
        lo = g.m - 1
    return lo


cdef inline double _dist_to_curve(const Geom* g, const double* x, double p) nogil:
    cdef double s = _wrap(p, g.l)
    cdef int k = _segment(g, s)
    cdef int k1 = k + 1 if k + 1 < g.m else 0
    cdef double w = (s - g.cum[k]) / (g.cum[k + 1] - g.cum[k])
    cdef double acc = 0.0, c
    cdef int d
    for d in range(g.n):
        c = g.P[k * g.n + d] + (g.P[k1 * g.n + d] - g.P[k * g.n + d]) * w
        c = x[d] - c
        acc += c * c
    return sqrt(acc)


cdef inline void _eval(const Geom* g, double p, double* out) nogil:
    cdef double s = _wrap(p, g.l)
    cdef int k = _segment(g, s)
    cdef int k1 = k + 1 if k + 1 < g.m else 0
    cdef double w = (s - g.cum[k]) / (g.cum[k + 1] - g.cum[k])
    cdef int d
    for d in range(g.n):
        out[d] = g.P[k * g.n + d] + (g.P[k1 * g.n + d] - g.P[k * g.n + d]) * w


cdef inline double _f_ac(const Geom* g, const double* x, double s, double t, double p) nogil:
    cdef double dps = _dS(p, s, g.l)
    return _dist_to_curve(g, x, p) + sqrt(dps * dps + t * t)


cdef double _golden_ac(const Geom* g, const double* x, double s, double t, double a, double b) nogil:
    cdef double tol = REL_TOL * g.l
    cdef double c = b - INVPHI * (b - a)
    cdef double d = a + INVPHI * (b - a)
    cdef double fc = _f_ac(g, x, s, t, c)
    cdef double fd = _f_ac(g, x, s, t, d)
    while b - a > tol:
        if fc < fd:
            b = d
            d = c
            fd = fc
            c = b - INVPHI * (b - a)
            fc = _f_ac(g, x, s, t, c)
        else:
            a = c
            c = d
            fc = fd
            d = a + INVPHI * (b - a)
            fd = _f_ac(g, x, s, t, d)
    return fc if fc < fd else fd


cdef double _ambient_collar(const Geom* g, const double* x, double s, double t, double* v) nogil:
    cdef int G = g.G, i, d
    cdef double h = g.l / G
    cdef double acc, c, ds, best, p0, r
    for i in range(G):
        acc = 0.0
        for d in range(g.n):
            c = g.grid_x[i * g.n + d] - x[d]
            acc += c * c
        ds = _dS(g.grid_p[i], s, g.l)
        v[i] = sqrt(acc) + sqrt(ds * ds + t * t)
    best = v[0]
    for i in range(1, G):
        if v[i] < best:
            best = v[i]
    cdef double gridmin = best
    cdef int found = 0
    cdef int im = 0
    for i in range(G):
        if v[i] <= v[(i - 1 + G) % G] and v[i] < v[(i + 1) % G] and v[i] <= gridmin + 2.0 * h:
            found = 1
            p0 = g.grid_p[i]
            r = _golden_ac(g, x, s, t, p0 - h, p0 + h)
            if r < best:
                best = r
    if not found:
        for i in range(G):
            if v[i] < v[im]:
                im = i
        p0 = g.grid_p[im]
        r = _golden_ac(g, x, s, t, p0 - h, p0 + h)
        if r < best:
            best = r
    return best


cdef inline double _F_cc(const Geom* g, double s1, double t1, double s2, double t2, double q,
                        double* z, double* v) nogil:
    _eval(g, q, z)
    cdef double dq = _dS(q, s2, g.l)
    return _ambient_collar(g, z, s1, t1, v) + sqrt(dq * dq + t2 * t2)


cdef double _golden_cc(const Geom* g, double s1, double t1, double s2, double t2, double a, double b,
                       double* z, double* v) nogil:
    cdef double tol = REL_TOL * g.l
    cdef double c = b - INVPHI * (b - a)
    cdef double d = a + INVPHI * (b - a)
    cdef double fc = _F_cc(g, s1, t1, s2, t2, c, z, v)
    cdef double fd = _F_cc(g, s1, t1, s2, t2, d, z, v)
    while b - a > tol:
        if fc < fd:
            b = d
            d = c
            fd = fc
            c = b - INVPHI * (b - a)
            fc = _F_cc(g, s1, t1, s2, t2, c, z, v)
        else:
            a = c
            c = d
            fc = fd
            d = a + INVPHI * (b - a)
            fd = _F_cc(g, s1, t1, s2, t2, d, z, v)
    return fc if fc < fd else fd


cdef double _collar_collar(const Geom* g, double s1, double t1, double s2, double t2,
                           double* z, double* v, double* a, double* coarse) nogil:
    cdef double tmp
    if s2 < s1 or (s2 == s1 and t2 < t1):
        tmp = s1; s1 = s2; s2 = tmp
        tmp = t1; t1 = t2; t2 = tmp
    cdef double dss = _dS(s1, s2, g.l)
    cdef double dY = sqrt(dss * dss + (t1 - t2) * (t1 - t2))
    if dY <= t1 + t2:
        return dY
    cdef int G = g.G, i, j, jm = 0
    cdef double h = g.l / G
    cdef double d1, b, col, best, cmin, r, q0
    for i in range(G):
        d1 = _dS(g.grid_p[i], s1, g.l)
        a[i] = sqrt(d1 * d1 + t1 * t1)
    for j in range(G):
        col = a[0] + g.grid_d[j]
        for i in range(1, G):
            r = a[i] + g.grid_d[i * G + j]
            if r < col:
                col = r
        d1 = _dS(g.grid_p[j], s2, g.l)
        coarse[j] = col + sqrt(d1 * d1 + t2 * t2)
    cmin = coarse[0]
    for j in range(1, G):
        if coarse[j] < cmin:
            cmin = coarse[j]
            jm = j
    best = dY if dY < cmin else cmin
    cdef int found = 0
    for j in range(G):
        if coarse[j] <= coarse[(j - 1 + G) % G] and coarse[j] < coarse[(j + 1) % G] and coarse[j] <= cmin + 4.0 * h:
            found = 1
            if coarse[j] - 4.0 * h >= best:
                continue
            q0 = g.grid_p[j]
            r = _golden_cc(g, s1, t1, s2, t2, q0 - h, q0 + h, z, v)
            if r < best:
                best = r
    if not found and coarse[jm] - 4.0 * h < best:
        q0 = g.grid_p[jm]
        r = _golden_cc(g, s1, t1, s2, t2, q0 - h, q0 + h, z, v)
        if r < best:
            best = r
    return best


cdef Geom _make_geom(const double[:, ::1] P, const double[::1] cum, double l,
                     const double[::1] grid_p, const double[:, ::1] grid_x, const double[:, ::1] grid_d):
    cdef Geom g
    g.P = &P[0, 0]
    g.cum = &cum[0]
    g.m = P.shape[0]
    g.n = P.shape[1]
    g.l = l
    g.grid_p = &grid_p[0]
    g.grid_x = &grid_x[0, 0]
    g.grid_d = &grid_d[0, 0]
    g.G = grid_p.shape[0]
    return g


def ambient_collar(const double[:, ::1] P, const double[::1] cum, double l,
                   const double[::1] grid_p, const double[:, ::1] grid_x, x, double s, double t):
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef double[:, ::1] dummy = np.zeros((1, 1))
    cdef Geom g = _make_geom(P, cum, l, grid_p, grid_x, dummy)
    cdef double[::1] v = np.empty(g.G)
    return _ambient_collar(&g, &xv[0], s, t, &v[0])


def collar_collar(const double[:, ::1] P, const double[::1] cum, double l,
                  const double[::1] grid_p, const double[:, ::1] grid_x, const double[:, ::1] grid_d,
                  double s1, double t1, double s2, double t2):
    cdef Geom g = _make_geom(P, cum, l, grid_p, grid_x, grid_d)
    cdef double[::1] v = np.empty(g.G)
    cdef double[::1] a = np.empty(g.G)
    cdef double[::1] coarse = np.empty(g.G)
    cdef double[::1] z = np.empty(g.n)
    return _collar_collar(&g, s1, t1, s2, t2, &z[0], &v[0], &a[0], &coarse[0])


def batch_distances(const double[:, ::1] P, const double[::1] cum, double l,
                    const double[::1] grid_p, const double[:, ::1] grid_x, const double[:, ::1] grid_d,
                    const signed char[::1] tag_a, const double[:, ::1] xa, const double[::1] sa, const double[::1] ta,
                    const signed char[::1] tag_b, const double[:, ::1] xb, const double[::1] sb, const double[::1] tb):
    cdef Geom g = _make_geom(P, cum, l, grid_p, grid_x, grid_d)
    cdef Py_ssize_t k = tag_a.shape[0], i
    cdef int d
    cdef double acc, c
    out_arr = np.empty(k)
    cdef double[::1] out = out_arr
    cdef double[::1] v = np.empty(g.G)
    cdef double[::1] a = np.empty(g.G)
    cdef double[::1] coarse = np.empty(g.G)
    cdef double[::1] z = np.empty(g.n)
    with nogil:
        for i in range(k):
            if tag_a[i] == 0 and tag_b[i] == 0:
                acc = 0.0
                for d in range(g.n):
                    c = xa[i, d] - xb[i, d]
                    acc += c * c
                out[i] = sqrt(acc)
            elif tag_a[i] == 0:
                out[i] = _ambient_collar(&g, &xa[i, 0], sb[i], tb[i], &v[0])
            elif tag_b[i] == 0:
                out[i] = _ambient_collar(&g, &xb[i, 0], sa[i], ta[i], &v[0])
            else:
                out[i] = _collar_collar(&g, sa[i], ta[i], sb[i], tb[i], &z[0], &v[0], &a[0], &coarse[0])
    return out_arr
