"""Sheet-0 eigenvalues by shooting along wedge-center rays.

Decaying solutions are integrated inward from each Stokes wedge and patched
at the origin; the patching Wronskian

    W(E) = psi_R(0) psi_L'(0) - psi_L(0) psi_R'(0)

vanishes exactly at eigenvalues.  For real eps and real E the normalized
Wronskian is real (PT symmetry pairs the two rays by conjugation), so real
eigenvalues are sign changes of a real function.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .wedges import DomainError, EpsilonParam, wedge_geometry

__all__ = [
    "RaySolution",
    "ConvergenceError",
    "integrate_ray",
    "wronskian",
    "find_eigenvalue",
    "count_real_eigenvalues",
    "find_transition",
]

_DECAY_TARGET = 35.0
_R_MAX_CAP = 120.0
_DEFAULT_STEPS = 8000


class ConvergenceError(ArithmeticError):
    """Root iteration did not converge; carries the last iterate."""

    def __init__(self, msg: str, last: complex):
        super().__init__(msg)
        self.last = last


@dataclass(frozen=True)
class RaySolution:
    """Solution data at the origin from one inward ray integration."""

    y0: complex  # psi(0), up to an overall scale
    y1: complex  # psi'(0) = d psi/dx, same scale
    theta: float
    r_max: float
    steps: int


def _require_sheet0(eps: complex) -> complex:
    ep = EpsilonParam(eps)
    if ep.value.real <= -1.0:
        raise DomainError(f"shooting needs Re(eps) > -1, got {eps}")
    return ep.value


def validated_r_max(eps: complex, energy: complex, theta: float, r_max: float) -> float:
    """Grow r_max until the WKB decay integral along the ray is >= 35."""
    r = float(r_max)
    while r < _R_MAX_CAP:
        if _kernels.ray_decay_exponent(complex(eps), complex(energy), theta, r, 400) >= _DECAY_TARGET:
            return r
        r *= 1.5
    return r


def integrate_ray(
    eps: complex,
    energy: complex,
    theta: float,
    r_max: float = 15.0,
    steps: int = _DEFAULT_STEPS,
) -> RaySolution:
    """Fixed-step RK4 integration of the eigenvalue ODE from r_max to 0.

    theta must lie strictly inside a Stokes wedge; the initial condition is
    the locally decaying WKB direction.
    """
    eps = _require_sheet0(eps)
    if steps < 1000:
        raise DomainError("need steps >= 1000")
    if r_max <= 0:
        raise DomainError("need r_max > 0")
    y, v = _kernels.ray_rk4(complex(eps), complex(energy), float(theta), float(r_max), int(steps))
    # d psi/dx = e^{-i theta} d psi/dr along the ray
    return RaySolution(
        y0=complex(y),
        y1=complex(np.exp(-1j * theta) * v),
        theta=float(theta),
        r_max=float(r_max),
        steps=int(steps),
    )


def wronskian(
    eps: complex,
    energy: complex,
    r_max: float = 15.0,
    steps: int = _DEFAULT_STEPS,
    auto_r_max: bool = True,
) -> complex:
    """Normalized patching Wronskian at the origin.

    Rays sit on the wedge centers evaluated at Re(eps).  The raw Wronskian
    is divided by k * ||(psi_R, psi_R'/k)|| * ||(psi_L, psi_L'/k)|| with
    k = 1 + sqrt(|E|): the sine of the angle between the two solution rays.
    This normalization is scale-free, never vanishes itself, and so has
    zeros exactly at the eigenvalues (both parities; a max-of-products
    normalization plateaus instead of crossing zero at even-parity states).
    """
    eps = _require_sheet0(eps)
    geom = wedge_geometry(eps.real)
    th_r = geom.right_center
    th_l = geom.left_center
    if auto_r_max:
        r_use = max(
            validated_r_max(eps, energy, th_r, r_max),
            validated_r_max(eps, energy, th_l, r_max),
        )
    else:
        r_use = r_max
    right = integrate_ray(eps, energy, th_r, r_use, steps)
    left = integrate_ray(eps, energy, th_l, r_use, steps)
    w = right.y0 * left.y1 - left.y0 * right.y1
    k = 1.0 + np.sqrt(abs(complex(energy)))
    norm_r = np.hypot(abs(right.y0), abs(right.y1) / k)
    norm_l = np.hypot(abs(left.y0), abs(left.y1) / k)
    denom = k * norm_r * norm_l
    if denom == 0.0:
        return 0j
    return w / denom


def find_eigenvalue(
    eps: complex,
    energy_guess: complex,
    tol: float = 1e-10,
    max_iter: int = 100,
    steps: int = _DEFAULT_STEPS,
) -> complex:
    """Complex secant iteration on the Wronskian from a nearby guess."""
    eps = _require_sheet0(eps)
    e0 = complex(energy_guess)
    e1 = e0 * (1.0 + 1e-4) + 1e-4
    w0 = wronskian(eps, e0, steps=steps)
    w1 = wronskian(eps, e1, steps=steps)
    for _ in range(max_iter):
        denom = w1 - w0
        if denom == 0:
            raise ConvergenceError("stalled secant (flat Wronskian)", e1)
        e2 = e1 - w1 * (e1 - e0) / denom
        if abs(e2 - e1) <= tol * (1.0 + abs(e2)):
            return e2
        e0, w0 = e1, w1
        e1 = e2
        w1 = wronskian(eps, e1, steps=steps)
    raise ConvergenceError(f"secant did not converge in {max_iter} iterations", e1)


def _real_wronskian_scan(eps: float, grid: np.ndarray, steps: int) -> np.ndarray:
    return np.array([wronskian(eps, float(e), steps=steps).real for e in grid])


def count_real_eigenvalues(
    eps: float,
    energy_max: float,
    coarse_step: float = 0.05,
    steps: int = _DEFAULT_STEPS,
) -> int:
    """Number of real eigenvalues in (0, energy_max] by sign counting.

    Local minima of |W| without a sign change are refined to separate
    near-tangent root pairs; a warning is issued when a pair is closer than
    the refinement resolution.
    """
    eps = float(eps)
    _require_sheet0(eps)
    if energy_max > 50.0:
        raise DomainError("energy_max must be <= 50")
    grid = np.arange(coarse_step, energy_max + 0.5 * coarse_step, coarse_step)
    vals = _real_wronskian_scan(eps, grid, steps)
    count = 0
    for i in range(len(grid) - 1):
        if vals[i] == 0.0:
            count += 1
        elif vals[i] * vals[i + 1] < 0.0:
            count += 1
    if vals[-1] == 0.0:
        count += 1
    # near-tangency refinement: interior |W| minima with equal signs
    for i in range(1, len(grid) - 1):
        if (
            abs(vals[i]) < abs(vals[i - 1])
            and abs(vals[i]) < abs(vals[i + 1])
            and vals[i - 1] * vals[i] > 0.0
            and vals[i] * vals[i + 1] > 0.0
        ):
            lo, hi = grid[i - 1], grid[i + 1]
            sign = 1.0 if vals[i] > 0 else -1.0
            # golden-section on |W| to find the dip
            extra = _refine_tangency(eps, lo, hi, sign, steps)
            if extra:
                count += 2
    return count


def _refine_tangency(
    eps: float, lo: float, hi: float, sign: float, steps: int
) -> bool:
    """True when the dip between lo and hi actually crosses zero twice."""
    phi = 0.5 * (np.sqrt(5.0) - 1.0)
    a, b = lo, hi
    fa = wronskian(eps, a, steps=steps).real * sign
    x1 = b - phi * (b - a)
    x2 = a + phi * (b - a)
    f1 = wronskian(eps, x1, steps=steps).real * sign
    f2 = wronskian(eps, x2, steps=steps).real * sign
    for _ in range(40):
        if f1 < 0.0 or f2 < 0.0:
            return True
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - phi * (b - a)
            f1 = wronskian(eps, x1, steps=steps).real * sign
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + phi * (b - a)
            f2 = wronskian(eps, x2, steps=steps).real * sign
        if b - a < 1e-6 * (1.0 + abs(a)):
            break
    if min(f1, f2) < 0.0:
        return True
    if min(abs(f1), abs(f2)) < 1e-6 * abs(fa):
        warnings.warn(
            f"near-tangent Wronskian dip at eps={eps} in ({lo:.4f}, {hi:.4f}); "
            "roots closer than scan resolution",
            stacklevel=2,
        )
    return False


def find_transition(
    eps_lo: float,
    eps_hi: float,
    energy_max: float = 30.0,
    resolution: float = 1e-5,
    steps: int = _DEFAULT_STEPS,
) -> float:
    """Bisection on the real-eigenvalue count; returns the eps where it drops."""
    lo, hi = float(eps_lo), float(eps_hi)
    if lo > hi:
        lo, hi = hi, lo
    c_lo = count_real_eigenvalues(lo, energy_max, steps=steps)
    c_hi = count_real_eigenvalues(hi, energy_max, steps=steps)
    if c_lo == c_hi:
        raise DomainError(
            f"real-eigenvalue count is {c_lo} at both endpoints; nothing to bisect"
        )
    while hi - lo > resolution:
        mid = 0.5 * (lo + hi)
        c_mid = count_real_eigenvalues(mid, energy_max, steps=steps)
        if c_mid == c_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
