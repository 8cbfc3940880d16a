"""Complex eigenvalue spectra of the PT-symmetric family H = p^2 + x^2 (ix)^eps.

Solvers (wedge-ray shooting and winding-contour finite differences with a
from-scratch shift-invert Arnoldi), spectrum classification, parameter
sweeps with exceptional-point detection, and closed-form asymptotics near
eps = -1, -2, and -4.
"""

from .asymptotics import (
    NearM1Estimate,
    NearM2Estimate,
    conformal_fit,
    delta_F,
    eigenvalue_near_m2,
    near_m1,
    wkb_F0,
)
from .classify import (
    ClassificationReport,
    DecayKind,
    DecayThresholds,
    End,
    classify,
    decay_profile,
)
from .contour import ContourKind, ContourSample, ContourSpec, contour_sample, log_s, power_term
from .discretize import (
    DiscretizedOperator,
    EtaOverflowError,
    Grid,
    build_operator,
    residual,
)
from .eigensolve import (
    EigenPair,
    Factorization,
    QRConvergenceError,
    ShiftPlan,
    SingularPivotError,
    SpectrumTag,
    arnoldi_shift_invert,
    hessenberg_char_poly,
    hessenberg_eig,
    lu_tridiag,
    merge_pairs,
    shift_lattice,
    spectrum_scan,
)
from .shooting import (
    ConvergenceError,
    RaySolution,
    count_real_eigenvalues,
    find_eigenvalue,
    find_transition,
    integrate_ray,
    wronskian,
)
from .sweep import SolverConfig, SweepResult, Trajectory, detect_merge, sweep_circle, sweep_real
from .wedges import DomainError, EpsilonParam, WedgeGeometry, potential, principal_arg, wedge_geometry

__version__ = "0.1.0"

__all__ = [
    "ClassificationReport",
    "ContourKind",
    "ContourSample",
    "ContourSpec",
    "ConvergenceError",
    "DecayKind",
    "DecayThresholds",
    "DiscretizedOperator",
    "DomainError",
    "EigenPair",
    "End",
    "EpsilonParam",
    "EtaOverflowError",
    "Factorization",
    "Grid",
    "NearM1Estimate",
    "NearM2Estimate",
    "QRConvergenceError",
    "RaySolution",
    "ShiftPlan",
    "SingularPivotError",
    "SolverConfig",
    "SpectrumTag",
    "SweepResult",
    "Trajectory",
    "WedgeGeometry",
    "arnoldi_shift_invert",
    "build_operator",
    "classify",
    "conformal_fit",
    "contour_sample",
    "count_real_eigenvalues",
    "decay_profile",
    "delta_F",
    "detect_merge",
    "eigenvalue_near_m2",
    "find_eigenvalue",
    "find_transition",
    "hessenberg_char_poly",
    "hessenberg_eig",
    "integrate_ray",
    "log_s",
    "lu_tridiag",
    "merge_pairs",
    "near_m1",
    "potential",
    "power_term",
    "principal_arg",
    "residual",
    "shift_lattice",
    "spectrum_scan",
    "sweep_circle",
    "sweep_real",
    "wedge_geometry",
    "wkb_F0",
    "wronskian",
]
