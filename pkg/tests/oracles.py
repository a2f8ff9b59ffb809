"""Independent reference computations used by several test modules."""
import math

import numpy as np
from scipy.stats import norm


def unit_ball_area_mc(G, n, rng):
    """Monte-Carlo area of {v : v^T G v <= 1} by rejection in its bounding box.

    Returns (estimate, standard error)."""
    G = np.asarray(G, dtype=float)
    det = G[0, 0] * G[1, 1] - G[0, 1] ** 2
    # half-widths of the bounding box of the ellipse: sqrt of diag(G^-1)
    hx = math.sqrt(G[1, 1] / det)
    hy = math.sqrt(G[0, 0] / det)
    v = rng.uniform([-hx, -hy], [hx, hy], size=(n, 2))
    inside = np.einsum("ij,jk,ik->i", v, G, v) <= 1.0
    box = 4 * hx * hy
    p = inside.mean()
    return box * p, box * math.sqrt(p * (1 - p) / n)


def two_sided_z(level):
    return float(norm.ppf(0.5 + level / 2))


def brute_collar_distance(curve, a, b, samples=20000):
    """Quotient distance of the glued collar by dense seam sampling (no
    refinement), for one ambient point ``a`` (array) and collar point
    ``b = (s, t)``, or two collar points."""
    l = curve.length
    p = np.arange(samples) * (l / samples)
    g = curve.evaluate(p)

    def dY(s1, t1, s2, t2):
        d = np.abs(s1 - s2) % l
        d = np.minimum(d, l - d)
        return np.sqrt(d * d + (t1 - t2) ** 2)

    if isinstance(a, np.ndarray):
        s, t = b
        return float(np.min(np.linalg.norm(g - a, axis=1) + dY(p, 0.0, s, t)))
    (s1, t1), (s2, t2) = a, b
    direct = float(dY(s1, t1, s2, t2))
    # min_q [ min_p dY(a,(p,0)) + |g(p) - g(q)| ] + dY((q,0), b), on a coarser grid
    k = 2000
    q = np.arange(k) * (l / k)
    gq = curve.evaluate(q)
    da = dY(q, 0.0, s1, t1)
    inner = np.min(da[:, None] + np.linalg.norm(gq[:, None, :] - gq[None, :, :], axis=2), axis=0)
    return min(direct, float(np.min(inner + dY(q, 0.0, s2, t2))))
