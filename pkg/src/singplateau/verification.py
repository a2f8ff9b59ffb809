"""Constructive checks around the collar lift.

* :func:`collar_homotopy` builds the flat strip ``S x [0, l]`` as an
  annulus map whose inner trace is the curve and outer trace is the top
  circle ``Gamma_l``; its area is ``l**2``.
* :func:`glue_homotopy` shrinks a disc onto ``|z| <= 1/2`` and grafts an
  annulus outside it; areas add.
* :func:`area_relation_check` and :func:`isoperimetric_check` run the
  area ledger and isoperimetric spot checks on a solved curve.
* :func:`parametrized_solve` reaches a prescribed boundary parametrization
  by grafting a degenerate (zero-area) annulus onto the solver output.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .calculus import linear_parts, reference_areas, triangle_stats, wedge_norms
from .collar import (
    CollarPoint,
    CollarSpace,
    check_ambient_isometry,
    check_retraction_lipschitz,
    gamma_l_chord_arc,
    verify_metric_axioms,
)
from .curves import ClosedCurve
from .mesh import DiscMesh
from .solver import DiscMap, SolveReport, SolverConfig, make_report, params_monotone, solve

TRACE_TOL = 1e-9
LEDGER_TOL = 1e-6
ISO_SLACK = 0.03
GRAFT_TOL = 1e-9
MAX_GRAFT_RINGS = 4096


class TraceMismatch(ValueError):
    pass


@dataclass(frozen=True)
class VerificationConfig:
    depth: int = 5
    max_outer_iters: int = 200
    rel_tol: float = 1e-6
    seed: int = 0
    seam_samples: int = 256
    strip_rings: int = 64
    # threshold length of the isoperimetric inequality; R^n needs none
    l0: float = math.inf

    def solver(self) -> SolverConfig:
        return SolverConfig(depth=self.depth, max_outer_iters=self.max_outer_iters,
                            rel_tol=self.rel_tol, seed=self.seed)

    def to_json(self) -> dict:
        return {"depth": self.depth, "max_outer_iters": self.max_outer_iters, "rel_tol": self.rel_tol,
                "seed": self.seed, "seam_samples": self.seam_samples, "strip_rings": self.strip_rings,
                "l0": self.l0}


# -- annuli ----------------------------------------------------------------------
@dataclass(eq=False)
class AnnulusMap:
    """Piecewise-affine map on a triangulated annulus ``1/2 <= |z| <= 1``.

    ``kind == 'ambient'``: ``images`` are points of R^n.
    ``kind == 'collar'``: ``images`` are flat cylinder coordinates
    ``(sigma, t)`` with ``sigma`` unwrapped, so the flat metric applies
    triangle by triangle.
    """

    ref_vertices: np.ndarray
    triangles: np.ndarray
    inner: np.ndarray
    outer: np.ndarray
    images: np.ndarray
    inner_params: np.ndarray
    outer_params: np.ndarray
    curve: ClosedCurve
    kind: str = "ambient"
    outer_marked: np.ndarray | None = None  # positions in ``outer`` of prescribed samples

    def triangle_areas(self) -> np.ndarray:
        ref = self.ref_vertices[self.triangles]
        img = self.images[self.triangles]
        if self.kind == "collar":
            # triangles closing the loop see sigma jump by l; unwrap per triangle
            l = self.curve.length
            img = img.copy()
            d = img[:, :, 0] - img[:, :1, 0]
            img[:, :, 0] = img[:, :1, 0] + (np.mod(d + 0.5 * l, l) - 0.5 * l)
        return wedge_norms(linear_parts(ref, img)) * reference_areas(ref)

    def area(self) -> float:
        return math.fsum(self.triangle_areas().tolist())

    def signed_ref_areas(self) -> np.ndarray:
        p = self.ref_vertices[self.triangles]
        e1, e2 = p[:, 1] - p[:, 0], p[:, 2] - p[:, 0]
        return 0.5 * (e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])

    def validate(self) -> None:
        l = self.curve.length
        if not (params_monotone(self.inner_params, l) and params_monotone(self.outer_params, l)):
            raise ValueError("annulus boundary traces must wind once, weakly monotone")
        if np.any(self.signed_ref_areas() <= 0):
            raise ValueError("annulus triangles must be positively oriented")

    def retracted(self) -> np.ndarray:
        """Vertex images pushed to R^n (collar points collapse onto the curve)."""
        if self.kind == "ambient":
            return self.images
        return self.curve.evaluate(self.images[:, 0])

    def points(self, space: CollarSpace) -> list[CollarPoint]:
        if self.kind == "ambient":
            return [space.ambient(x) for x in self.images]
        return [space.collar(s, t) for s, t in self.images]


@dataclass(eq=False)
class CollarDiscMap:
    """A disc in the collar space: ``inner`` (ambient, on ``|z| <= 1/2``)
    plus a collar-valued annulus sharing its boundary circle."""

    inner: DiscMap
    annulus: AnnulusMap
    space: CollarSpace

    def triangle_areas(self) -> np.ndarray:
        st = triangle_stats(self.inner.mesh.vertices, self.inner.mesh.triangles, self.inner.positions)
        return np.concatenate([st.jacobian * st.ref_area, self.annulus.triangle_areas()])

    def area(self) -> float:
        return math.fsum(self.triangle_areas().tolist())

    @property
    def outer_params(self) -> np.ndarray:
        return self.annulus.outer_params

    def outer_trace(self) -> list[CollarPoint]:
        return [self.space.collar(s, t) for s, t in self.annulus.images[self.annulus.outer]]

    def retracted_inner(self) -> np.ndarray:
        return self.inner.positions


def _ring(r: float, angles: np.ndarray) -> np.ndarray:
    return np.c_[r * np.cos(angles), r * np.sin(angles)]


def boundary_angles(mesh: DiscMesh) -> np.ndarray:
    """Increasing angles of the boundary loop, starting at vertex 0's."""
    p = mesh.vertices[mesh.boundary]
    a = np.arctan2(p[:, 1], p[:, 0])
    return a[0] + np.mod(a - a[0], 2 * np.pi)


def collar_homotopy(space: CollarSpace, m: int, inner_params=None, inner_angles=None) -> AnnulusMap:
    """The inclusion of the flat strip: ring ``j`` of ``m`` radial steps sits
    at height ``t = j l / m`` and slides linearly from ``inner_params`` to
    the constant-speed parametrization of the top circle.
    """
    if m < 3:
        raise ValueError("m must be at least 3")
    l = space.l
    if inner_params is None:
        s = np.arange(m) * (l / m)
    else:
        s = np.asarray(inner_params, dtype=float)
        if not params_monotone(s, l):
            raise ValueError("inner_params must be weakly monotone with winding number 1")
    N = len(s)
    theta = 2 * np.pi * np.arange(N) / N if inner_angles is None else np.asarray(inner_angles, dtype=float)
    top = s[0] + np.arange(N) * (l / N)
    rho = np.arange(m + 1) / m
    sigma = (1.0 - rho)[:, None] * s[None, :] + rho[:, None] * top[None, :]
    t = np.broadcast_to((rho * l)[:, None], sigma.shape)
    images = np.c_[sigma.ravel(), t.ravel()]
    ref = np.concatenate([_ring(0.5 + 0.5 * r, theta) for r in rho])
    idx = np.arange((m + 1) * N).reshape(m + 1, N)
    a, b = idx[:-1], np.roll(idx[:-1], -1, axis=1)
    c, d = idx[1:], np.roll(idx[1:], -1, axis=1)
    tris = np.concatenate([np.stack([a, c, d], -1).reshape(-1, 3), np.stack([a, d, b], -1).reshape(-1, 3)])
    return AnnulusMap(ref, tris, idx[0], idx[-1], images, s.copy(), top.copy(), space.base_curve, "collar")


# -- gluing --------------------------------------------------------------------
def _shrunk(u: DiscMap) -> DiscMap:
    # scaling by 1/2 is exact in binary, so per-triangle areas are unchanged bit for bit
    m = u.mesh
    mesh = DiscMesh(m.vertices * 0.5, m.triangles, m.boundary, None)
    return DiscMap(mesh, u.positions, u.boundary_params, u.curve)


def _check_match(u: DiscMap, h: AnnulusMap) -> None:
    l = u.curve.length
    a = np.asarray(u.boundary_params)
    b = np.asarray(h.inner_params)
    if a.shape != b.shape or np.max(np.abs(a - b)) > TRACE_TOL * l:
        raise TraceMismatch("disc trace and annulus inner trace differ")
    ref = 0.5 * u.mesh.vertices[u.mesh.boundary]
    if np.max(np.abs(ref - h.ref_vertices[h.inner])) > 1e-12:
        raise TraceMismatch("annulus inner circle does not line up with the disc boundary")


def glue_homotopy(u: DiscMap, h: AnnulusMap, space: CollarSpace | None = None):
    """Shrink ``u`` into ``|z| <= 1/2`` and graft ``h`` outside it.

    Collar annuli give a :class:`CollarDiscMap` (needs ``space``); ambient
    annuli give a plain :class:`DiscMap` whose trace is ``h``'s outer trace.
    """
    _check_match(u, h)
    inner = _shrunk(u)
    if h.kind == "collar":
        if space is None or space.base_curve is not u.curve:
            raise ValueError("a collar annulus needs the collar space of u's curve")
        return CollarDiscMap(inner, h, space)
    V = u.mesh.n_vertices
    is_inner = np.zeros(len(h.ref_vertices), dtype=bool)
    is_inner[h.inner] = True
    remap = np.empty(len(h.ref_vertices), dtype=np.int64)
    remap[h.inner] = u.mesh.boundary
    rest = np.nonzero(~is_inner)[0]
    remap[rest] = V + np.arange(len(rest))
    verts = np.concatenate([inner.mesh.vertices, h.ref_vertices[rest]])
    tris = np.concatenate([u.mesh.triangles, remap[h.triangles]])
    pos = np.concatenate([u.positions, h.images[rest]])
    mesh = DiscMesh(verts, tris, remap[h.outer], None)
    return DiscMap(mesh, pos, np.asarray(h.outer_params, dtype=float).copy(), u.curve)


# -- boundary completion ---------------------------------------------------------
def _knots_between(params, l, knots):
    """For each cyclic gap ``(p_i, p_{i+1})`` of unwrapped ``params`` (closing
    gap ends at ``p_0 + l``) the polyline knots strictly inside it."""
    p = np.asarray(params, dtype=float)
    ext = np.concatenate([p, [p[0] + l]])
    shift = math.floor(p[0] / l)
    cand = np.concatenate([knots + (shift + k) * l for k in (0, 1, 2)])
    cand = cand[(cand > p[0]) & (cand < p[0] + l)]
    gap = np.searchsorted(ext, cand, side="right") - 1
    inside = (cand > ext[gap]) & (cand < ext[gap + 1])
    cand, gap = cand[inside], gap[inside]
    return [cand[gap == i] for i in range(len(p))]


def _insert(params, angles, l, knots):
    """Merge knots into a boundary loop; new vertices get evenly spaced
    angles inside their gap.  Returns merged params, angles, the list of
    (old index, [new positions]) and the merged position of each old vertex."""
    p = np.asarray(params, dtype=float)
    th = np.asarray(angles, dtype=float)
    th_ext = np.concatenate([th, [th[0] + 2 * np.pi]])
    per_gap = _knots_between(p, l, knots)
    out_p, out_a, old_pos, fans = [], [], [], []
    for i, ks in enumerate(per_gap):
        old_pos.append(len(out_p))
        out_p.append(p[i])
        out_a.append(th[i])
        r = len(ks)
        if r:
            frac = np.arange(1, r + 1) / (r + 1)
            new = list(range(len(out_p), len(out_p) + r))
            out_p.extend(ks.tolist())
            out_a.extend((th_ext[i] + frac * (th_ext[i + 1] - th_ext[i])).tolist())
            fans.append((i, new))
    return np.array(out_p), np.array(out_a), fans, np.array(old_pos)


def complete_boundary(u: DiscMap) -> DiscMap:
    """Insert the curve's polyline knots into the boundary of ``u``.

    Each boundary chord that skips a knot gets a fan of triangles over the
    sliver between chord and curve, so the new boundary traces the polyline
    exactly.  The area grows by the sliver areas.
    """
    c = u.curve
    l = c.length
    knots = c.cumulative[:-1]
    theta = boundary_angles(u.mesh)
    new_p, new_a, fans, old_pos = _insert(u.boundary_params, theta, l, knots)
    if not fans:
        return u
    V = u.mesh.n_vertices
    loop = np.empty(len(new_p), dtype=np.int64)
    loop[old_pos] = u.mesh.boundary
    fresh = np.setdiff1d(np.arange(len(new_p)), old_pos)
    loop[fresh] = V + np.arange(len(fresh))
    verts = np.concatenate([u.mesh.vertices, _ring(1.0, new_a[fresh])])
    pos = np.concatenate([u.positions, c.evaluate(new_p[fresh])])
    nb = len(u.boundary_params)
    tris = [u.mesh.triangles]
    for i, new in fans:
        bi = loop[old_pos[i]]
        bj = loop[old_pos[(i + 1) % nb]]
        chain = [loop[k] for k in new] + [bj]
        tris.append(np.array([(bi, chain[k], chain[k + 1]) for k in range(len(chain) - 1)], dtype=np.int64))
    mesh = DiscMesh(verts, np.concatenate(tris), loop, None)
    return DiscMap(mesh, pos, new_p, c)


# -- zero-area reparametrization graft ---------------------------------------------
def _even_fill(anchor_pos, anchor_ang, n):
    """Angles for ``n`` cyclic slots: anchors fixed, others evenly spaced
    between consecutive anchors.  ``anchor_pos`` increasing, ``anchor_ang``
    strictly increasing with total turn below ``2 pi``."""
    out = np.empty(n)
    k = len(anchor_pos)
    for a in range(k):
        p0 = anchor_pos[a]
        a0 = anchor_ang[a]
        if a + 1 < k:
            p1, a1 = anchor_pos[a + 1], anchor_ang[a + 1]
        else:
            p1, a1 = anchor_pos[0] + n, anchor_ang[0] + 2 * np.pi
        span = p1 - p0
        steps = np.arange(span)
        out[(p0 + steps) % n] = a0 + (a1 - a0) * steps / span + np.where(p0 + steps >= n, -2 * np.pi, 0.0)
    return out


def reparametrization_annulus(curve: ClosedCurve, inner_params, inner_angles, outer_params, outer_angles,
                              max_rings: int = MAX_GRAFT_RINGS) -> AnnulusMap:
    """Ambient annulus from one parametrization of the curve to another,
    with every image triangle inside a single polyline segment.

    Both loops must already contain every polyline knot (see
    :func:`complete_boundary`).  Intermediate rings carry the merged
    multiset of both parameter lists; their angles interpolate from the
    inner layout to the outer one, with enough rings to keep every
    reference triangle positively oriented.
    """
    l = curve.length
    A = np.asarray(inner_params, dtype=float)
    O = np.asarray(outer_params, dtype=float)
    tA = np.asarray(inner_angles, dtype=float)
    tO = np.asarray(outer_angles, dtype=float)
    nA, nO = len(A), len(O)
    base = A[0]
    o_mod = base + np.mod(O - base, l)
    drops = np.nonzero(o_mod < np.roll(o_mod, 1))[0]
    k0 = int(drops[0]) if len(drops) else 0
    o_order = np.roll(np.arange(nO), -k0)
    vals = np.concatenate([A, o_mod[o_order]])
    src = np.concatenate([np.zeros(nA, dtype=np.int8), np.ones(nO, dtype=np.int8)])
    rank = np.concatenate([np.arange(nA), np.arange(nO)])
    order = np.lexsort((rank, src, vals))
    U = vals[order]
    nU = len(U)
    posA = np.empty(nA, dtype=np.int64)
    posA[rank[order][src[order] == 0]] = np.nonzero(src[order] == 0)[0]
    posO_rot = np.empty(nO, dtype=np.int64)
    posO_rot[rank[order][src[order] == 1]] = np.nonzero(src[order] == 1)[0]
    posO = np.empty(nO, dtype=np.int64)
    posO[o_order] = posO_rot  # U position of each outer vertex
    if posA[0] != 0:
        raise AssertionError("merged ring must start at the inner base vertex")

    phi_first = _even_fill(posA, tA, nU)
    rot_ang = tO[o_order] + np.where(np.arange(nO) >= nO - k0, 2 * np.pi, 0.0) if k0 else tO.copy()
    phi_last = _even_fill(posO_rot, rot_ang, nU)
    # keep the merged sequence increasing from slot 0
    phi_first = phi_first[0] + np.mod(phi_first - phi_first[0], 2 * np.pi)
    phi_first[0] = tA[0]
    phi_last = _unwrap_from(phi_last)
    shift = 2 * np.pi * np.round(np.mean(phi_first - phi_last) / (2 * np.pi))
    phi_last = phi_last + shift
    twist = float(np.max(np.abs(phi_last - phi_first)))
    gap = min(float(np.min(np.diff(np.r_[phi_first, phi_first[0] + 2 * np.pi]))),
              float(np.min(np.diff(np.r_[phi_last, phi_last[0] + 2 * np.pi]))))
    R = max(1, int(math.ceil(twist / gap)))
    pts_U = curve.evaluate(U)
    while R <= max_rings:
        h = _graft_mesh(curve, A, O, tA, tO, U, posA, posO, phi_first, phi_last, R, pts_U)
        if np.all(h.signed_ref_areas() > 0):
            return h
        R *= 2
    raise RuntimeError("could not triangulate the reparametrization annulus")


def _unwrap_from(phi):
    out = phi.copy()
    out[1:] = phi[0] + np.mod(phi[1:] - phi[0], 2 * np.pi)
    return out


def _graft_mesh(curve, A, O, tA, tO, U, posA, posO, phi_first, phi_last, R, pts_U):
    nA, nO, nU = len(A), len(O), len(U)
    radii = 0.5 + 0.5 * np.arange(1, R + 2) / (R + 2)
    w = np.arange(R + 1) / R
    phis = (1 - w)[:, None] * phi_first[None, :] + w[:, None] * phi_last[None, :]
    ref = [_ring(0.5, tA)]
    ref += [_ring(r, ph) for r, ph in zip(radii, phis)]
    ref.append(_ring(1.0, tO))
    ref = np.concatenate(ref)
    iA = np.arange(nA)
    iU = nA + np.arange((R + 1) * nU).reshape(R + 1, nU)
    iO = nA + (R + 1) * nU + np.arange(nO)
    images = np.concatenate([curve.evaluate(A), np.tile(pts_U, (R + 1, 1)), curve.evaluate(O)])
    tris = []
    # inner loop to first merged ring: fans from each inner vertex
    ring = iU[0]
    for i in range(nA):
        p, q = posA[i], posA[(i + 1) % nA]
        k = np.arange(p, q if q > p else q + nU)
        tris.append(np.c_[np.full(len(k), iA[i]), ring[k % nU], ring[(k + 1) % nU]])
        tris.append(np.array([[iA[i], ring[q], iA[(i + 1) % nA]]]))
    # merged rings: quads split along the same diagonal
    a, c = iU[:-1], iU[1:]
    b, d = np.roll(a, -1, axis=1), np.roll(c, -1, axis=1)
    tris.append(np.stack([a, c, d], -1).reshape(-1, 3))
    tris.append(np.stack([a, d, b], -1).reshape(-1, 3))
    # last merged ring to outer loop: fans into each outer vertex
    ring = iU[-1]
    order = np.argsort(posO, kind="stable")
    for j in range(nO):
        k_out = order[j]
        k_next = order[(j + 1) % nO]
        p, q = posO[k_out], posO[k_next]
        k = np.arange(p, q if q > p else q + nU)
        tris.append(np.c_[ring[k % nU], np.full(len(k), iO[k_out]), ring[(k + 1) % nU]])
        tris.append(np.array([[ring[q], iO[k_out], iO[k_next]]]))
    return AnnulusMap(ref, np.concatenate(tris).astype(np.int64), iA, iO, images, A.copy(), O.copy(), curve, "ambient")


# -- parametrized variant ------------------------------------------------------------
@dataclass
class GraftResult:
    disc: DiscMap
    report: SolveReport
    marked: np.ndarray  # boundary positions carrying the prescribed samples
    area_raw: float
    area_completed: float
    rings: int
    extras: dict = field(default_factory=dict)


def default_eta(curve: ClosedCurve, M: int, amplitude: float = 0.3) -> np.ndarray:
    """Monotone non-uniform profile ``l (theta + a sin theta) / 2 pi``."""
    if not 0 <= amplitude < 1:
        raise ValueError("amplitude must lie in [0, 1)")
    th = 2 * np.pi * np.arange(M) / M
    return curve.length * (th + amplitude * np.sin(th)) / (2 * np.pi)


def parametrized_solve(curve: ClosedCurve, eta_params, cfg: SolverConfig | None = None, base=None) -> GraftResult:
    """Least-area disc whose boundary vertex ``k`` (at angle ``2 pi k / M``)
    sits at ``curve(eta_params[k])``.

    ``base`` may carry an already computed ``(DiscMap, SolveReport)``.
    Polyline knots are inserted between the prescribed samples so the whole
    boundary runs along the curve; ``marked`` lists where the samples sit.
    """
    cfg = cfg or SolverConfig()
    l = curve.length
    eta = np.asarray(eta_params, dtype=float)
    if eta.ndim != 1 or len(eta) < 3 or not np.all(np.isfinite(eta)):
        raise ValueError("eta_params must be a finite 1-d profile with at least 3 samples")
    if not params_monotone(eta, l) or np.any(np.diff(eta) < 0):
        raise ValueError("eta_params must be weakly monotone with winding number 1")
    u, rep = base if base is not None else solve(curve, cfg)
    area_raw = rep.area
    M = len(eta)
    if M == len(u.boundary_params) and np.array_equal(eta, u.boundary_params):
        return GraftResult(u, rep, np.arange(M), area_raw, area_raw, 0)
    uc = complete_boundary(u)
    area_completed = math.fsum(_disc_triangle_areas(uc).tolist())
    knots = curve.cumulative[:-1]
    psi = 2 * np.pi * np.arange(M) / M
    o_p, o_a, _, marked = _insert(eta, psi, l, knots)
    h = reparametrization_annulus(curve, uc.boundary_params, boundary_angles(uc.mesh), o_p, o_a)
    v = glue_homotopy(uc, h)
    report = make_report(v, cfg, rep.iterations, rep.converged, rep.area_trace, rep.energy_trace)
    n_ring = len(uc.boundary_params) + len(o_p)
    rings = (len(h.ref_vertices) - n_ring) // n_ring - 1
    return GraftResult(v, report, marked, area_raw, area_completed, int(rings),
                       {"graft_area": h.area(), "sliver_area": area_completed - area_raw})


def _disc_triangle_areas(u: DiscMap) -> np.ndarray:
    st = triangle_stats(u.mesh.vertices, u.mesh.triangles, u.positions)
    return st.jacobian * st.ref_area


# -- checks --------------------------------------------------------------------------
def _report(name, passed, residuals, tolerances, cfg: VerificationConfig, **extra) -> dict:
    out = {"check": name, "pass": bool(passed), "residuals": residuals, "tolerances": tolerances,
           "config": cfg.to_json()}
    out.update(extra)
    return out


def lift(u: DiscMap, space: CollarSpace, rings: int) -> CollarDiscMap:
    """The disc ``v`` spanning ``Gamma_l``: ``u`` inside, collar strip outside."""
    h = collar_homotopy(space, rings, u.boundary_params, boundary_angles(u.mesh))
    return glue_homotopy(u, h, space)


def area_relation_check(curve: ClosedCurve, cfg: VerificationConfig | None = None, solved=None) -> dict:
    """Area ledger of the collar lift: ``Area(v) = Area(u) + l**2``, the
    trace of ``v`` is the constant-speed top circle, and retracting ``v``
    gives back ``u``."""
    cfg = cfg or VerificationConfig()
    u, rep = solved if solved is not None else solve(curve, cfg.solver())
    space = CollarSpace(curve, cfg.seam_samples)
    v = lift(u, space, cfg.strip_rings)
    l = curve.length
    area_u = rep.area
    area_h = v.annulus.area()
    area_v = v.area()
    ledger = abs(area_v - area_u - l * l)
    # (b) outer trace: heights all l, equal spacing l / N from the base point
    ann = v.annulus
    top = ann.images[ann.outer]
    gaps = np.diff(np.r_[top[:, 0], top[0, 0] + l])
    speed_res = float(max(np.max(np.abs(gaps - l / len(gaps))), np.max(np.abs(top[:, 1] - l))))
    # (c) retraction: identity inside, onto the curve on the strip
    inner_res = float(np.max(np.abs(v.retracted_inner() - u.positions)))
    seam = ann.retracted()[ann.inner]
    seam_res = float(np.max(np.abs(seam - u.positions[u.mesh.boundary])))
    residuals = {"ledger": ledger, "strip_minus_l2": abs(area_h - l * l), "outer_speed": speed_res,
                 "retraction_interior": inner_res, "retraction_seam": seam_res,
                 "fill_plus_l2_minus_area_v": area_u + l * l - area_v}
    tolerances = {"ledger": LEDGER_TOL * l * l, "outer_speed": TRACE_TOL * l, "retraction": 0.0}
    passed = (ledger <= tolerances["ledger"] and speed_res <= tolerances["outer_speed"]
              and inner_res == 0.0 and seam_res == 0.0
              and residuals["fill_plus_l2_minus_area_v"] >= -tolerances["ledger"])
    return _report("area_relation", passed, residuals, tolerances, cfg,
                   values={"area_u": area_u, "area_strip": area_h, "area_v": area_v, "length": l})


def isoperimetric_check(curve: ClosedCurve, cfg: VerificationConfig | None = None, solved=None,
                        iso_constant: float = 1 / (4 * math.pi)) -> dict:
    """Isoperimetric spot checks.

    * ``Fill <= C l**2 (1 + 3%)`` with ``C = 1/4pi``,
    * the lift ``v`` against ``(C + 1) l**2``, the constant the collar space
      satisfies for every loop,
    * a collar rectangle shorter than ``l`` against ``(C + 1/2pi) L**2``.
    Checks whose loop is not shorter than ``cfg.l0`` are skipped.
    """
    cfg = cfg or VerificationConfig()
    u, rep = solved if solved is not None else solve(curve, cfg.solver())
    C = iso_constant
    l = curve.length
    fill = rep.area
    checks = {}
    if l < cfg.l0:
        bound = C * l * l
        checks["fill"] = {"value": fill, "bound": bound * (1 + ISO_SLACK), "ratio": fill / bound}
        space = CollarSpace(curve, cfg.seam_samples)
        area_v = lift(u, space, cfg.strip_rings).area()
        checks["lift_C_plus_1"] = {"value": area_v, "bound": (C + 1) * l * l * (1 + ISO_SLACK),
                                   "ratio": area_v / ((C + 1) * l * l)}
    # rectangle [s, s + l/4] x [0, l/16] standing on the seam, spanned by itself
    w, hgt = l / 4, l / 16
    loop = 2 * (w + hgt)
    if loop < min(cfg.l0, l):
        rect = w * hgt
        b = (C + 1 / (2 * math.pi)) * loop * loop
        checks["short_loop_C_plus_half_pi"] = {"value": rect, "bound": b * (1 + ISO_SLACK), "ratio": rect / b,
                                               "loop_length": loop}
    passed = all(c["value"] <= c["bound"] for c in checks.values())
    residuals = {k: c["value"] - c["bound"] for k, c in checks.items()}
    return _report("isoperimetric", passed, residuals, {"slack": ISO_SLACK}, cfg,
                   values={k: {kk: vv for kk, vv in c.items()} for k, c in checks.items()},
                   ratio=fill / (C * l * l))


def parametrized_check(curve: ClosedCurve, cfg: VerificationConfig | None = None, solved=None, eta=None) -> dict:
    cfg = cfg or VerificationConfig()
    u, rep = solved if solved is not None else solve(curve, cfg.solver())
    if eta is None:
        eta = default_eta(curve, len(u.boundary_params))
    g = parametrized_solve(curve, eta, cfg.solver(), base=(u, rep))
    v = g.disc
    trace = float(np.max(np.abs(v.positions[v.mesh.boundary[g.marked]] - curve.evaluate(eta))))
    area_res = abs(g.report.area - g.area_completed)
    marked_angles = boundary_angles(v.mesh)[g.marked]
    ang_res = float(np.max(np.abs(marked_angles - 2 * np.pi * np.arange(len(eta)) / len(eta))))
    lip = float(np.max(np.diff(np.r_[eta, eta[0] + curve.length]))) * len(eta) / (2 * np.pi)
    passed = area_res <= GRAFT_TOL and trace == 0.0 and ang_res <= 1e-12 and params_monotone(v.boundary_params, curve.length)
    return _report("parametrized", passed, {"area": area_res, "trace": trace, "sample_angles": ang_res},
                   {"area": GRAFT_TOL, "trace": 0.0}, cfg,
                   values={"area_param": g.report.area, "area_completed": g.area_completed,
                           "area_raw": g.area_raw, "sliver_area": g.area_completed - g.area_raw,
                           "graft_area": g.extras.get("graft_area", 0.0), "graft_rings": g.rings,
                           "samples": len(eta),
                           "energy_ratio": math.sqrt(g.report.energy_reshetnyak) / lip})


def collar_checks(curve: ClosedCurve, cfg: VerificationConfig | None = None, trials: int = 10_000,
                  strict: bool = True) -> dict:
    cfg = cfg or VerificationConfig()
    space = CollarSpace(curve, cfg.seam_samples, strict)
    metric = verify_metric_axioms(space, trials, cfg.seed)
    lip = check_retraction_lipschitz(space, trials, cfg.seed + 1)
    iso = check_ambient_isometry(space, min(trials, 1000), cfg.seed + 2)
    ca = gamma_l_chord_arc(space)
    chord_ok = abs(ca - 1.0) <= 0.01
    return _report("collar", metric["pass"] and lip["pass"] and iso["pass"] and chord_ok,
                   {"metric": metric, "retraction": lip, "ambient": iso, "gamma_l_chord_arc": ca - 1.0},
                   {"triangle_slack": metric["slack"], "chord_arc": 0.01}, cfg)


def run_suite(curve: ClosedCurve, cfg: VerificationConfig | None = None) -> dict:
    """Solve once and run the ledger, isoperimetric and parametrized checks."""
    cfg = cfg or VerificationConfig()
    solved = solve(curve, cfg.solver())
    checks = [area_relation_check(curve, cfg, solved), isoperimetric_check(curve, cfg, solved),
              parametrized_check(curve, cfg, solved)]
    return {"curve": curve.name, "converged": solved[1].converged, "area": solved[1].area,
            "checks": checks, "pass": all(c["pass"] for c in checks)}
