"""Complex tridiagonal discretization of the winding-contour eigenproblem.

On a uniform grid in the contour parameter t with Dirichlet truncation eta,
the second-order stencil for

    psi''/s'^2 - (s''/s'^3) psi' - s^(2+eps) psi = E psi

gives row j the coefficients a_j = 1/s'(t_j)^2, b_j = -s''/s'^3,
c_j = -s(t_j)^(2+eps):

    (a/h^2 - b/2h) psi_{j-1} + (-2a/h^2 + c) psi_j + (a/h^2 + b/2h) psi_{j+1}.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .contour import contour_arrays
from .wedges import DomainError, EpsilonParam

__all__ = [
    "Grid",
    "DiscretizedOperator",
    "EtaOverflowError",
    "build_operator",
    "residual",
]

_POWER_CAP = 1e300


class EtaOverflowError(OverflowError):
    """Potential term overflows at the requested truncation.

    Carries min_eta, the smallest eta for which the build is safe.
    """

    def __init__(self, msg: str, min_eta: float):
        super().__init__(msg)
        self.min_eta = min_eta


@dataclass(frozen=True)
class Grid:
    """Uniform interior grid on (-(1-eta), 1-eta)."""

    n_interior: int
    eta: float

    def __post_init__(self) -> None:
        if self.n_interior < 50:
            raise DomainError(f"need n_interior >= 50, got {self.n_interior}")
        if not 0.0 < self.eta < 1.0:
            raise DomainError(f"need 0 < eta < 1, got {self.eta}")

    @property
    def h(self) -> float:
        return 2.0 * (1.0 - self.eta) / (self.n_interior + 1)

    @property
    def points(self) -> np.ndarray:
        j = np.arange(1, self.n_interior + 1)
        return -(1.0 - self.eta) + j * self.h


@dataclass(frozen=True)
class DiscretizedOperator:
    """Immutable complex tridiagonal matrix (sub, diag, sup bands)."""

    grid: Grid
    eps: complex
    diag: np.ndarray
    sub: np.ndarray
    sup: np.ndarray
    norm_inf: float = field(default=0.0)
    branch: str = "principal"

    @property
    def n(self) -> int:
        return self.diag.shape[0]

    def matvec(self, v: np.ndarray) -> np.ndarray:
        out = self.diag * v
        out[1:] += self.sub * v[:-1]
        out[:-1] += self.sup * v[1:]
        return out


def build_operator(
    eps: complex, n_interior: int, eta: float, branch: str = "principal"
) -> DiscretizedOperator:
    """Assemble the tridiagonal operator for a given eps, grid size, eta.

    Accepts Re(eps) in (-4, 0), plus eps = 0 as a validation case.
    Raises EtaOverflowError when |s^(2+eps)| would exceed 1e300 at a grid
    point (eta too small for this eps).

    branch selects how s^(2+eps) is evaluated along the loop once the path
    winds past arg s = +/-pi (which happens only for Re(eps) < -2):
    'principal' wraps the argument into (-pi, pi] (the library power; the
    coefficient phase jumps where the loop crosses the negative real
    s-axis), while 'continued' follows the analytic continuation of the
    power along the path.  The two agree for Re(eps) >= -2.  The reference
    spectra this package reproduces below eps = -2 correspond to
    'principal', which is the default.
    """
    ep = EpsilonParam(eps)
    re = ep.value.real
    if not (-4.0 < re < 0.0 or ep.value == 0):
        raise DomainError(
            f"winding-contour operator needs Re(eps) in (-4, 0) or eps = 0, got {eps}"
        )
    if branch not in ("principal", "continued"):
        raise DomainError(f"branch must be 'principal' or 'continued', got {branch!r}")
    grid = Grid(n_interior=n_interior, eta=eta)

    # Overflow pre-check at the grid extremes: |s|max ~ 1/(eta(2-eta)).
    p = 2.0 + re
    if p > 0:
        s_abs_max = 1.0 / (eta * (2.0 - eta))
        if p * np.log(s_abs_max) > np.log(_POWER_CAP):
            min_eta = 1.0 / np.exp(np.log(_POWER_CAP) / p)
            raise EtaOverflowError(
                f"|s^(2+eps)| overflows at eta={eta}; need eta >= {min_eta:.3e}",
                min_eta=min_eta,
            )

    t = grid.points
    s, s1, s2, power = contour_arrays(t, ep.value)
    if branch == "principal":
        power = s ** (2.0 + ep.value)
    pmax = float(np.max(np.abs(power)))
    if not np.isfinite(pmax) or pmax > _POWER_CAP:
        min_eta = 1.0 / np.exp(np.log(_POWER_CAP) / max(p, 1e-3))
        raise EtaOverflowError(
            f"|s^(2+eps)| reached {pmax:.3e} on the grid at eta={eta}",
            min_eta=min_eta,
        )

    h = grid.h
    a = 1.0 / (s1 * s1)
    b = -s2 / (s1 * s1 * s1)
    c = -power
    a_h2 = a / (h * h)
    b_2h = b / (2.0 * h)
    diag = -2.0 * a_h2 + c
    # Row j couples to j-1 with (a_j/h^2 - b_j/2h) and to j+1 with (a_j/h^2 + b_j/2h).
    sub = (a_h2 - b_2h)[1:]
    sup = (a_h2 + b_2h)[:-1]
    norm_inf = float(
        np.max(
            np.abs(diag)
            + np.concatenate(([0.0], np.abs(sub)))
            + np.concatenate((np.abs(sup), [0.0]))
        )
    )
    return DiscretizedOperator(
        grid=grid,
        eps=ep.value,
        diag=diag,
        sub=sub,
        sup=sup,
        norm_inf=norm_inf,
        branch=branch,
    )


def residual(op: DiscretizedOperator, pair) -> float:
    """2-norm relative residual ||M v - E v|| / ||v||."""
    v = np.asarray(pair.vector)
    if v.shape[0] != op.n:
        raise DomainError(
            f"eigenvector length {v.shape[0]} != operator size {op.n}"
        )
    nrm = float(np.linalg.norm(v))
    if nrm == 0.0:
        raise DomainError("zero eigenvector")
    return float(np.linalg.norm(op.matvec(v) - pair.value * v)) / nrm
