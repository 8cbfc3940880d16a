"""Closed-form eigenvalue asymptotics near eps = -1 and eps = -2, and the
linear-collapse fit near the conformal point eps = -4.

Near eps = -1 (delta = eps + 1) the real parts diverge like
(-3/4 ln|delta|)^(2/3) while the imaginary parts, indexed by an integer n of
fixed parity, vanish logarithmically.  Near eps = -2 (delta = eps + 2 > 0)
the spectrum collapses onto -1; a logarithmic-well quantization with a
first-order energy shift gives each level k a second-order expansion in
delta with an explicit +/- imaginary branch.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .wedges import DomainError

__all__ = [
    "NearM1Estimate",
    "NearM2Estimate",
    "near_m1",
    "wkb_F0",
    "delta_F",
    "eigenvalue_near_m2",
    "reference_row_level",
    "reference_row_prediction",
    "conformal_fit",
]

_GUARD = 0.2


@dataclass(frozen=True)
class NearM1Estimate:
    """Eigenvalue estimate for eps = -1 + delta, branch index n."""

    delta: float
    n: int
    re_E: float
    im_E: float

    @property
    def value(self) -> complex:
        return complex(self.re_E, self.im_E)


@dataclass(frozen=True)
class NearM2Estimate:
    """Eigenvalue estimate for eps = -2 + delta, level k, one sign branch."""

    delta: float
    k: int
    sign: int
    F0: float
    dF: complex
    value: complex


def _warn_extrapolated(delta: float, where: str) -> None:
    if abs(delta) >= _GUARD:
        warnings.warn(
            f"{where}: |delta|={abs(delta):.3g} outside the asymptotic guard "
            f"{_GUARD}; value is an extrapolation",
            stacklevel=3,
        )


def near_m1(delta: float, n: int) -> NearM1Estimate:
    """Eigenvalue estimate near eps = -1.

    re_E = (-(3/4) ln|delta|)^(2/3); im_E = n pi / (2 sqrt(re_E)).
    n must be even for delta > 0 and odd for delta < 0.
    """
    delta = float(delta)
    if delta == 0.0:
        raise DomainError("delta must be nonzero (spectrum is empty at eps=-1)")
    _warn_extrapolated(delta, "near_m1")
    even = n % 2 == 0
    if delta > 0 and not even:
        raise DomainError(f"delta > 0 requires even n, got n={n}")
    if delta < 0 and even:
        raise DomainError(f"delta < 0 requires odd n, got n={n}")
    if abs(delta) >= 1.0:
        raise DomainError("need |delta| < 1")
    re_e = (-0.75 * math.log(abs(delta))) ** (2.0 / 3.0)
    im_e = n * math.pi / (2.0 * math.sqrt(re_e))
    return NearM1Estimate(delta=delta, n=n, re_E=re_e, im_E=im_e)


def wkb_F0(k: int) -> float:
    """Quantized level of the logarithmic well: ln[(2k + 3/2) sqrt(pi)]."""
    if k < 0:
        raise DomainError("k must be >= 0")
    return math.log((2.0 * k + 1.5) * math.sqrt(math.pi))


def delta_F(k: int, delta: float, sign: int = +1) -> complex:
    """First-order level shift of the logarithmic well.

    (delta/8) [4 F0^2 - 4 F0 + 3 - 4 F0 ln(delta) + 2 ln(delta)
               +/- i pi (8 F0 - 4)],  F0 = wkb_F0(k).
    """
    delta = float(delta)
    if delta <= 0.0:
        raise DomainError("delta must be positive")
    if sign not in (+1, -1):
        raise DomainError("sign must be +1 or -1")
    _warn_extrapolated(delta, "delta_F")
    f0 = wkb_F0(k)
    ln_d = math.log(delta)
    real = 4.0 * f0 * f0 - 4.0 * f0 + 3.0 - 4.0 * f0 * ln_d + 2.0 * ln_d
    imag = sign * math.pi * (8.0 * f0 - 4.0)
    return (delta / 8.0) * complex(real, imag)


def eigenvalue_near_m2(k: int, delta: float, sign: int = +1) -> NearM2Estimate:
    """Second-order eigenvalue estimate for eps = -2 + delta, level k.

    E_k = -1 + delta[(1/2)ln(delta) - F0]
          - (delta^2/8) [ (ln d)^2 + 2 ln d - 4 F0 ln d + 3 - 4 pi^2
                          - 4 F0 + 4 F0^2 ]
          +/- i { -delta pi + (delta^2/2) [ pi ln d + pi - 2 F0 ] }.

    sign=+1 takes the upper branch (negative imaginary part for small
    delta); the two branches are exact conjugates.
    """
    delta = float(delta)
    if delta <= 0.0:
        raise DomainError("delta must be positive")
    if sign not in (+1, -1):
        raise DomainError("sign must be +1 or -1")
    _warn_extrapolated(delta, "eigenvalue_near_m2")
    f0 = wkb_F0(k)
    ln_d = math.log(delta)
    re = (
        -1.0
        + delta * (0.5 * ln_d - f0)
        - (delta * delta / 8.0)
        * (
            ln_d * ln_d
            + 2.0 * ln_d
            - 4.0 * f0 * ln_d
            + 3.0
            - 4.0 * math.pi * math.pi
            - 4.0 * f0
            + 4.0 * f0 * f0
        )
    )
    im = sign * (
        -delta * math.pi
        + 0.5 * delta * delta * (math.pi * ln_d + math.pi - 2.0 * f0)
    )
    return NearM2Estimate(
        delta=delta,
        k=k,
        sign=sign,
        F0=f0,
        dF=delta_F(k, delta, sign),
        value=complex(re, im),
    )


def reference_row_level(row: int) -> int:
    """Quantized level k for an even row label of the near-(-2) tables.

    The reference comparison tables label rows 0, 2, ..., 12; row r pairs
    the r/2-th numerical eigenvalue (ordered by descending real part) with
    the estimate for level k = r/2 + 1.
    """
    if row < 0 or row % 2:
        raise DomainError(f"row labels are even and >= 0, got {row}")
    return row // 2 + 1


def reference_row_prediction(row: int, delta: float, sign: int = -1) -> complex:
    """Second-order estimate paired with a given table row label."""
    return eigenvalue_near_m2(reference_row_level(row), delta, sign).value


def conformal_fit(samples: list[tuple[float, float]]):
    """Least-squares line through (delta, E) samples near eps = -4.

    Returns (slope, intercept, r_squared).  Used to verify that real
    eigenvalues vanish linearly as delta -> 0.
    """
    if len(samples) < 4:
        raise DomainError("need at least 4 samples")
    x = np.array([s[0] for s in samples], dtype=float)
    y = np.array([s[1] for s in samples], dtype=float)
    if np.ptp(x) <= 0.0 or len(np.unique(x)) < len(x):
        raise DomainError("sample abscissae must be distinct")
    slope, intercept = np.polyfit(x, y, 1)
    pred = slope * x + intercept
    ss_res = float(np.sum((y - pred) ** 2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(intercept), float(r2)
