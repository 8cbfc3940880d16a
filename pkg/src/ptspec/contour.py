"""Looping ("toboggan") contour in the complex-s plane and its derivatives.

The path s(t) = exp(2*pi*i*t/(4+eps)) / (1 - t^2), t in (-1, 1), comes in
from infinity in the left Stokes wedge, winds 2/(4+eps) times around the
branch point at the origin, and escapes through the right wedge.  Everything
is derived from the logarithm

    L(t) = 2*pi*i*t/(4+eps) - ln(1 - t^2),

which is single-valued in t, so multi-sheet quantities such as s^(2+eps)
never need explicit winding bookkeeping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .wedges import DomainError, wedge_geometry

__all__ = [
    "ContourKind",
    "ContourSpec",
    "ContourSample",
    "log_s",
    "contour_sample",
    "power_term",
    "contour_arrays",
]


class ContourKind(Enum):
    WINDING_LOOP = "winding"
    WEDGE_RAYS = "rays"


@dataclass(frozen=True)
class ContourSpec:
    """Integration-path choice for a given eps.

    WINDING_LOOP: the looping parametrization above, Re(eps) in (-4, 0).
    WEDGE_RAYS: two rays on the wedge centers (shooting), Re(eps) > -1.
    """

    eps: complex
    kind: ContourKind
    theta_left: float | None = None
    theta_right: float | None = None
    r_max: float = 15.0

    def __post_init__(self) -> None:
        eps = complex(self.eps)
        re = eps.real
        if self.kind is ContourKind.WINDING_LOOP:
            if not -4.0 < re < 0.0:
                raise DomainError(
                    f"winding contour needs Re(eps) in (-4, 0), got {eps}"
                )
        else:
            if re <= -1.0:
                raise DomainError(
                    f"wedge rays need Re(eps) > -1 (sheet 0), got {eps}"
                )
            if self.r_max <= 0:
                raise DomainError("r_max must be positive")
            geom = wedge_geometry(re)
            tl = self.theta_left if self.theta_left is not None else geom.left_center
            tr = self.theta_right if self.theta_right is not None else geom.right_center
            if not geom.left_upper < tl < geom.left_lower:
                raise DomainError(f"theta_left {tl} outside the left wedge")
            if not geom.right_lower < tr < geom.right_upper:
                raise DomainError(f"theta_right {tr} outside the right wedge")
            object.__setattr__(self, "theta_left", tl)
            object.__setattr__(self, "theta_right", tr)


@dataclass(frozen=True)
class ContourSample:
    """Path point with first and second derivatives with respect to t."""

    t: float
    log_s: complex
    s: complex
    s1: complex
    s2: complex


def _check_t(t: float) -> None:
    if not -1.0 < t < 1.0:
        raise DomainError(f"contour parameter needs |t| < 1, got {t}")


def log_s(t: float, eps: complex) -> complex:
    """log of the contour point: 2*pi*i*t/(4+eps) - ln(1-t^2)."""
    _check_t(t)
    eps = complex(eps)
    return 2j * math.pi * t / (4.0 + eps) - math.log(1.0 - t * t)


def contour_sample(t: float, eps: complex) -> ContourSample:
    """Contour point plus s'(t) and s''(t).

    With L' = 2*pi*i/(4+eps) + 2t/(1-t^2) and L'' = (2+2t^2)/(1-t^2)^2,
    s' = s*L' and s'' = s*(L'' + L'^2).
    """
    _check_t(t)
    eps = complex(eps)
    one_m_t2 = 1.0 - t * t
    ls = 2j * math.pi * t / (4.0 + eps) - math.log(one_m_t2)
    lp = 2j * math.pi / (4.0 + eps) + 2.0 * t / one_m_t2
    lpp = (2.0 + 2.0 * t * t) / (one_m_t2 * one_m_t2)
    s = np.exp(ls)
    return ContourSample(t=t, log_s=ls, s=s, s1=s * lp, s2=s * (lpp + lp * lp))


def power_term(t: float, eps: complex) -> complex:
    """s(t)^(2+eps) evaluated as exp((2+eps) * L(t)) (winding-safe)."""
    eps = complex(eps)
    return complex(np.exp((2.0 + eps) * log_s(t, eps)))


def contour_arrays(t: np.ndarray, eps: complex):
    """Vectorized (s, s', s'', s^(2+eps)) over a grid of t values."""
    t = np.asarray(t, dtype=float)
    if t.size and (t.min() <= -1.0 or t.max() >= 1.0):
        raise DomainError("contour grid must lie strictly inside (-1, 1)")
    eps = complex(eps)
    one_m_t2 = 1.0 - t * t
    ls = 2j * math.pi * t / (4.0 + eps) - np.log(one_m_t2)
    lp = 2j * math.pi / (4.0 + eps) + 2.0 * t / one_m_t2
    lpp = (2.0 + 2.0 * t * t) / (one_m_t2 * one_m_t2)
    s = np.exp(ls)
    return s, s * lp, s * (lpp + lp * lp), np.exp((2.0 + eps) * ls)
