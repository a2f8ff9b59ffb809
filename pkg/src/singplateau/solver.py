"""Discrete Plateau solver for closed curves that may self-intersect.

The degrees of freedom are the interior vertex positions and one arc-length
parameter per boundary vertex; boundary vertices always sit on the curve.
The solver alternates

1. an exact minimization of the Dirichlet energy over the interior
   (cotangent stiffness, one sparse solve with a cached factorization), and
2. a projected descent step on the boundary parameters,

and measures the Busemann area of the result.  Coarse levels are solved
first and prolonged by 1-to-4 refinement.
"""
from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numpy as np
import scipy.sparse.linalg as spla

from .calculus import _fsum, disc_area, holder_exponents, holder_quotient, triangle_stats
from .curves import ClosedCurve, CurveError, self_intersections
from .mesh import MAX_DEPTH, DiscMesh, cotangent_stiffness, make_disc_mesh

logger = logging.getLogger(__name__)

_TRACE_RTOL = 1e-9


@dataclass(frozen=True)
class SolverConfig:
    depth: int = 5
    max_outer_iters: int = 200
    rel_tol: float = 1e-6
    seed: int = 0
    start_depth: int = 2
    # largest allowed boundary gap, in units of the mean gap l / N
    gap_factor: float = 3.0
    # trust radius of one boundary step, in units of l / N
    step_budget: float = 1.0

    def __post_init__(self):
        if not 0 <= self.depth <= MAX_DEPTH:
            raise ValueError(f"depth must lie in 0..{MAX_DEPTH}")
        if self.max_outer_iters < 1 or self.rel_tol <= 0 or self.seed < 0:
            raise ValueError("max_outer_iters, rel_tol must be positive and seed nonnegative")
        if self.gap_factor < 1.0:
            raise ValueError("gap_factor must be at least 1")


@dataclass(eq=False)
class DiscMap:
    """Piecewise-affine disc spanning ``curve`` through its boundary params.

    ``boundary_params`` are unwrapped: weakly increasing and within one
    period of the first value, so the boundary winds exactly once.
    """

    mesh: DiscMesh
    positions: np.ndarray
    boundary_params: np.ndarray
    curve: ClosedCurve

    def copy(self) -> DiscMap:
        return DiscMap(self.mesh, self.positions.copy(), self.boundary_params.copy(), self.curve)

    def trace_error(self) -> float:
        target = self.curve.evaluate(self.boundary_params)
        return float(np.max(np.linalg.norm(self.positions[self.mesh.boundary] - target, axis=1)))

    def is_monotone(self) -> bool:
        return params_monotone(self.boundary_params, self.curve.length)

    def validate(self) -> None:
        if self.trace_error() > _TRACE_RTOL * self.curve.length:
            raise ValueError("boundary vertices are off the curve")
        if not self.is_monotone():
            raise ValueError("boundary parameters are not weakly monotone with winding number 1")


def params_monotone(params, l: float) -> bool:
    s = np.asarray(params, dtype=float)
    gaps = np.diff(np.concatenate([s, [s[0] + l]]))
    return bool(np.all(gaps >= -1e-12 * l))


@dataclass
class SolveReport:
    area: float
    energy_reshetnyak: float
    energy_dirichlet: float
    q_stats: dict
    holder_interior: float
    holder_closure: float
    alpha: str
    beta: str
    holder_pairs: dict
    iterations: int
    converged: bool
    area_trace: list
    energy_trace: list = field(default_factory=list)
    depth: int = 0
    curve_length: float = 0.0
    self_intersections: int = 0
    property_et: bool = True

    def to_json(self) -> dict:
        return asdict(self)


# -- linear algebra cache -------------------------------------------------------
@dataclass(frozen=True, eq=False)
class _System:
    K: object
    interior: np.ndarray
    boundary: np.ndarray
    K_IB: object
    lu: object
    diag_B: np.ndarray


@lru_cache(maxsize=16)
def _depth_system(depth: int) -> _System:
    return _build_system(make_disc_mesh(depth))


def _build_system(mesh: DiscMesh) -> _System:
    K = cotangent_stiffness(mesh.vertices, mesh.triangles)
    I = mesh.interior
    B = mesh.boundary
    K_II = K[I][:, I].tocsc()
    try:
        lu = spla.splu(K_II)
    except RuntimeError as exc:
        raise np.linalg.LinAlgError(f"singular stiffness matrix: {exc}") from None
    return _System(K, I, B, K[I][:, B].tocsr(), lu, K.diagonal()[B].copy())


def _system(mesh: DiscMesh) -> _System:
    if mesh.depth is not None and mesh.vertices is make_disc_mesh(mesh.depth).vertices:
        return _depth_system(mesh.depth)
    return _build_system(mesh)


def _dirichlet(K, X) -> float:
    # 1/2 integral |grad u|^2, i.e. the tr(G)/2 density integrated
    return 0.5 * float(np.sum(X * (K @ X)))


# -- operations ------------------------------------------------------------------
def initialize(mesh: DiscMesh, curve: ClosedCurve) -> DiscMap:
    """Uniform boundary parametrization plus harmonic extension."""
    if not curve.is_constant_speed:
        raise CurveError("the solver expects a constant-speed curve")
    nb = len(mesh.boundary)
    s = np.arange(nb) * (curve.length / nb)
    X = np.zeros((mesh.n_vertices, curve.dimension))
    X[mesh.boundary] = curve.evaluate(s)
    u = DiscMap(mesh, X, s, curve)
    return harmonic_step(u)


def harmonic_step(u: DiscMap) -> DiscMap:
    """Replace the interior by the Dirichlet minimizer with the boundary fixed."""
    sysm = _system(u.mesh)
    X = u.positions.copy()
    rhs = -(sysm.K_IB @ X[sysm.boundary])
    X[sysm.interior] = sysm.lu.solve(np.asarray(rhs))
    return DiscMap(u.mesh, X, u.boundary_params.copy(), u.curve)


def project_params(s, anchor: float, l: float, max_gap: float | None = None, max_rounds: int = 100):
    """Clamp unwrapped boundary params to the weakly monotone cone with
    ``s[0] = anchor``, closing value ``anchor + l`` and gaps at most ``max_gap``.

    Clamps sweep forward from vertex 0, so a later index absorbs each tie.
    Returns ``None`` if no feasible point is reached.
    """
    s = np.array(s, dtype=float)
    N = len(s)
    g = l if max_gap is None else float(max_gap)
    if g * N < l * (1 - 1e-12):
        raise ValueError("max_gap too small to close the curve")
    idx = np.arange(N + 1)
    for _ in range(max_rounds):
        s[0] = anchor
        s = np.maximum.accumulate(s)
        s = np.minimum(s, anchor + l)
        ext = np.concatenate([s, [anchor + l]])
        tiny = 1e-15 * l
        # s_i <= s_{i-1} + g, then s_i >= s_{i+1} - g; values where a cap does
        # not bind are kept bit for bit
        hi = np.minimum.accumulate(ext - idx * g) + idx * g
        ext = np.where(hi < ext - tiny, hi, ext)
        lo = np.maximum.accumulate((ext - idx * g)[::-1])[::-1] + idx * g
        ext = np.where(lo > ext + tiny, lo, ext)
        s = ext[:-1]
        s[0] = anchor
        gaps = np.diff(np.concatenate([s, [anchor + l]]))
        if gaps.min() >= -1e-14 * l and gaps.max() <= g * (1 + 1e-12):
            return s
    return None


def _slide_direction(u: DiscMap, sysm: _System) -> np.ndarray:
    s = u.boundary_params
    grad_x = (sysm.K @ u.positions)[sysm.boundary]
    T = u.curve.tangent(s)
    g = np.einsum("ij,ij->i", grad_x, T)
    curv = sysm.diag_B * np.einsum("ij,ij->i", T, T)
    return -g / np.maximum(curv, 1e-300)


def boundary_slide_step(u: DiscMap, step_budget: float = 1.0, gap_factor: float = 3.0,
                        max_halvings: int = 30) -> tuple[DiscMap, bool]:
    """One projected descent step on the boundary parameters.

    The direction is the energy gradient along the curve scaled by the
    diagonal of the stiffness matrix; at most ``step_budget * l / N`` per
    vertex.  Backtracks until the Dirichlet energy decreases.  Returns the
    (possibly unchanged) map and whether a move was accepted.
    """
    sysm = _system(u.mesh)
    l = u.curve.length
    N = len(u.boundary_params)
    direction = _slide_direction(u, sysm)
    peak = float(np.max(np.abs(direction)))
    if not peak > 0:
        return u, False
    budget = step_budget * l / N
    if peak > budget:
        direction *= budget / peak
    e0 = _dirichlet(sysm.K, u.positions)
    s0 = u.boundary_params
    step = 1.0
    for _ in range(max_halvings):
        cand = project_params(s0 + step * direction, s0[0], l, gap_factor * l / N)
        if cand is not None and not np.array_equal(cand, s0):
            X = u.positions.copy()
            X[sysm.boundary] = u.curve.evaluate(cand)
            e1 = _dirichlet(sysm.K, X)
            if e1 < e0 - 1e-15 * abs(e0):
                return DiscMap(u.mesh, X, cand, u.curve), True
        step *= 0.5
    return u, False


def refine(u: DiscMap) -> DiscMap:
    """Prolong to the next mesh depth: boundary params interpolated along arc
    length, interior re-solved."""
    if u.mesh.depth is None or u.mesh.depth >= MAX_DEPTH:
        raise ValueError("can only refine generated meshes below the maximum depth")
    mesh = make_disc_mesh(u.mesh.depth + 1)
    s = u.boundary_params
    l = u.curve.length
    nxt = np.concatenate([s[1:], [s[0] + l]])
    fine = np.empty(2 * len(s))
    fine[0::2] = s
    fine[1::2] = 0.5 * (s + nxt)
    X = np.zeros((mesh.n_vertices, u.curve.dimension))
    X[mesh.boundary] = u.curve.evaluate(fine)
    return harmonic_step(DiscMap(mesh, X, fine, u.curve))


def _quartiles(q: np.ndarray) -> dict:
    qs = np.quantile(q, [0.0, 0.25, 0.5, 0.75, 1.0], method="inverted_cdf")
    return dict(zip(["min", "q1", "median", "q3", "max"], (float(v) for v in qs)))


def _solve_level(u: DiscMap, cfg: SolverConfig, area_trace, energy_trace):
    sysm = _system(u.mesh)
    stable = 0
    budget = cfg.step_budget
    area_prev = disc_area(u)
    for it in range(cfg.max_outer_iters):
        u_new, moved = boundary_slide_step(u, budget, cfg.gap_factor)
        if moved:
            u_new = harmonic_step(u_new)
            budget = min(cfg.step_budget, budget * 2.0)
        else:
            budget *= 0.25
        u = u_new
        area = disc_area(u)
        area_trace.append(area)
        energy_trace.append(_dirichlet(sysm.K, u.positions))
        change = abs(area - area_prev) / max(area_prev, 1e-300)
        area_prev = area
        stable = stable + 1 if change < cfg.rel_tol else 0
        if stable >= 3 or budget < 1e-9 * cfg.step_budget:
            return u, it + 1, True
    return u, cfg.max_outer_iters, False


def solve(curve: ClosedCurve, cfg: SolverConfig | None = None) -> tuple[DiscMap, SolveReport]:
    """Least-area disc spanning ``curve`` on a mesh of depth ``cfg.depth``."""
    cfg = cfg or SolverConfig()
    if not curve.is_constant_speed:
        raise CurveError("the solver expects a constant-speed curve")
    d0 = min(cfg.start_depth, cfg.depth)
    u = initialize(make_disc_mesh(d0), curve)
    area_trace, energy_trace = [], []
    iterations = 0
    converged = False
    while True:
        u, its, converged = _solve_level(u, cfg, area_trace, energy_trace)
        iterations += its
        logger.debug("depth %d: %d iterations, area %.12g", u.mesh.depth, its, area_trace[-1])
        if u.mesh.depth >= cfg.depth:
            break
        u = refine(u)
    return u, make_report(u, cfg, iterations, converged, area_trace, energy_trace)


def make_report(u: DiscMap, cfg: SolverConfig, iterations=0, converged=True, area_trace=(), energy_trace=()):
    st = triangle_stats(u.mesh.vertices, u.mesh.triangles, u.positions)
    alpha, beta = holder_exponents(1, property_et=True)
    h_int, n_int = holder_quotient(u, float(alpha), "interior", seed=cfg.seed)
    h_clo, n_clo = holder_quotient(u, float(beta), "closure", seed=cfg.seed)
    return SolveReport(
        area=_fsum(st.jacobian * st.ref_area),
        energy_reshetnyak=_fsum(st.lmax * st.ref_area),
        energy_dirichlet=_fsum(0.5 * st.trace * st.ref_area),
        q_stats=_quartiles(st.q),
        holder_interior=h_int,
        holder_closure=h_clo,
        alpha=str(alpha),
        beta=str(beta),
        holder_pairs={"interior": n_int, "closure": n_clo},
        iterations=int(iterations),
        converged=bool(converged),
        area_trace=[float(a) for a in area_trace],
        energy_trace=[float(e) for e in energy_trace],
        depth=int(u.mesh.depth) if u.mesh.depth is not None else -1,
        curve_length=u.curve.length,
        self_intersections=len(self_intersections(u.curve, 1e-9 * u.curve.length)),
    )


def fill_estimate(curve: ClosedCurve, cfg: SolverConfig | None = None) -> float:
    return solve(curve, cfg)[1].area
