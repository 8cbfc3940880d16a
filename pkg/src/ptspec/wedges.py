"""Branch-cut-correct potential evaluation and Stokes-wedge geometry.

The potential x^2 (ix)^eps has a logarithmic branch point at x = 0.  The cut
is placed on the positive imaginary axis, so the argument of x on the
principal sheet runs over (-3*pi/2, pi/2].  Eigenfunctions must decay inside
a PT-symmetric pair of angular sectors (Stokes wedges) whose edges rotate
with eps.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

__all__ = [
    "DomainError",
    "EpsilonParam",
    "WedgeGeometry",
    "principal_arg",
    "potential",
    "wedge_geometry",
]

_HALF_PI = 0.5 * math.pi


class DomainError(ValueError):
    """Parameter outside the domain where an operation is defined."""


@dataclass(frozen=True)
class EpsilonParam:
    """Validated deformation parameter eps (real or complex)."""

    value: complex

    def __post_init__(self) -> None:
        v = complex(self.value)
        if v.real <= -4.0:
            raise DomainError(f"eps must satisfy Re(eps) > -4, got {v}")
        object.__setattr__(self, "value", v)

    @property
    def is_real(self) -> bool:
        return self.value.imag == 0.0

    def require_sheet0(self) -> None:
        """Sheet-0 (shooting/wedge) work needs Re(eps) > -1."""
        if self.value.real <= -1.0:
            raise DomainError(
                f"sheet-0 operations require Re(eps) > -1, got {self.value}"
            )


@dataclass(frozen=True)
class WedgeGeometry:
    """Center/edge angles (radians) of the two Stokes wedges on sheet 0."""

    eps: float
    right_center: float
    right_upper: float
    right_lower: float
    left_center: float
    left_upper: float
    left_lower: float

    @property
    def opening(self) -> float:
        return self.right_upper - self.right_lower


def principal_arg(x: complex) -> float:
    """Argument of x in (-3*pi/2, pi/2], cut on the positive imaginary axis.

    Raises DomainError at x = 0.
    """
    x = complex(x)
    if x == 0:
        raise DomainError("argument undefined at x = 0")
    a = math.atan2(x.imag, x.real)
    if a > _HALF_PI:
        a -= 2.0 * math.pi
    return a


def potential(x: complex, eps: complex) -> complex:
    """x^2 (ix)^eps with arg(ix) = principal_arg(x) + pi/2.

    Shifting the argument of x by pi/2 keeps the branch jump of (ix)^eps on
    the positive imaginary x-axis (the PT-symmetric choice); taking the
    library power of (ix) directly would move the jump onto the positive
    real axis.
    """
    x = complex(x)
    eps = complex(eps)
    if x == 0:
        if eps.real < 0:
            raise DomainError("potential singular at x = 0 for Re(eps) < 0")
        return 0j
    log_ix = math.log(abs(x)) + 1j * (principal_arg(x) + _HALF_PI)
    return x * x * cmath.exp(eps * log_ix)


def wedge_geometry(eps: float) -> WedgeGeometry:
    """Wedge center and edge angles for real eps > -4.

    The wedge opening is 4*pi/(8 + 2*eps); the pair is mirror-symmetric
    about the imaginary axis (left_center = -pi - right_center).
    """
    eps = float(eps)
    if not math.isfinite(eps) or eps <= -4.0:
        raise DomainError(f"wedge geometry needs real eps > -4, got {eps}")
    denom = 8.0 + 2.0 * eps
    right_center = -eps * math.pi / denom
    right_upper = (2.0 - eps) * math.pi / denom
    right_lower = -(2.0 + eps) * math.pi / denom
    left_center = -math.pi + eps * math.pi / denom
    left_upper = -math.pi - (2.0 - eps) * math.pi / denom
    left_lower = -math.pi + (2.0 + eps) * math.pi / denom
    return WedgeGeometry(
        eps=eps,
        right_center=right_center,
        right_upper=right_upper,
        right_lower=right_lower,
        left_center=left_center,
        left_upper=left_upper,
        left_lower=left_lower,
    )
