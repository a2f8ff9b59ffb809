"""Least-area discs spanning closed curves that may cross themselves.

The curve is resolved by gluing a flat collar along it; discs are computed
with a discrete Douglas-type solver and checked against the collar's area
identities.
"""
from .calculus import SeminormG, busemann_jacobian, holder_exponents, quasi_conformality, reshetnyak_density
from .collar import CollarPoint, CollarSpace, collar_distance, gamma_l, retraction
from .curves import UNBOUNDED, ClosedCurve, CurveError, constant_speed_reparam, corpus, load_curve, save_curve
from .kernels import BACKEND_NAME
from .mesh import DiscMesh, make_disc_mesh
from .solver import DiscMap, SolveReport, SolverConfig, fill_estimate, solve
from .verification import (
    AnnulusMap,
    CollarDiscMap,
    VerificationConfig,
    area_relation_check,
    collar_homotopy,
    glue_homotopy,
    isoperimetric_check,
    parametrized_solve,
    run_suite,
)

__version__ = "0.1.0"

__all__ = [
    "AnnulusMap", "BACKEND_NAME", "ClosedCurve", "CollarDiscMap", "CollarPoint", "CollarSpace", "CurveError",
    "DiscMap", "DiscMesh", "SeminormG", "SolveReport", "SolverConfig", "UNBOUNDED", "VerificationConfig",
    "area_relation_check", "busemann_jacobian", "collar_distance", "collar_homotopy", "constant_speed_reparam",
    "corpus", "fill_estimate", "gamma_l", "glue_homotopy", "holder_exponents", "isoperimetric_check",
    "load_curve", "make_disc_mesh", "parametrized_solve", "quasi_conformality", "reshetnyak_density",
    "retraction", "run_suite", "save_curve", "solve",
]
