"""Compiled inner loops: banded LU of complex tridiagonal matrices and
fixed-step RK4 integration of the eigenvalue ODE along a wedge ray.

Partial pivoting of a tridiagonal matrix fills in a second superdiagonal,
so the factor storage is four bands plus the row-swap flags.
"""

from __future__ import annotations

import cmath

import numpy as np
from numba import njit

_TINY_PIVOT = 1e-300


@njit(cache=True)
def lu_factor_tridiag(sub, diag, sup):
    """Partial-pivoted LU of a tridiagonal matrix.

    Returns (low, d, u1, u2, swap, ok): multipliers, U main diagonal, first
    and second superdiagonals, swap flags.  ok is False on a pivot smaller
    than 1e-300 in magnitude.
    """
    n = diag.shape[0]
    d = diag.copy()
    u1 = np.zeros(n, dtype=np.complex128)
    u2 = np.zeros(n, dtype=np.complex128)
    low = np.zeros(n, dtype=np.complex128)
    swap = np.zeros(n, dtype=np.bool_)
    u1[: n - 1] = sup

    for k in range(n - 1):
        a_val = sub[k]
        if abs(a_val) > abs(d[k]):
            swap[k] = True
            # exchange row k with row k+1 (columns k, k+1, k+2)
            tmp = d[k]
            d[k] = a_val
            a_val = tmp
            tmp = u1[k]
            u1[k] = d[k + 1]
            d[k + 1] = tmp
            if k + 1 < n - 1:
                tmp = u2[k]
                u2[k] = u1[k + 1]
                u1[k + 1] = tmp
        piv = d[k]
        if abs(piv) < _TINY_PIVOT:
            return low, d, u1, u2, swap, False
        m = a_val / piv
        low[k] = m
        d[k + 1] -= m * u1[k]
        if k + 1 < n - 1:
            u1[k + 1] -= m * u2[k]
    if abs(d[n - 1]) < _TINY_PIVOT:
        return low, d, u1, u2, swap, False
    return low, d, u1, u2, swap, True


@njit(cache=True)
def lu_solve_tridiag(low, d, u1, u2, swap, b):
    """Solve with the factors of lu_factor_tridiag; O(n)."""
    n = d.shape[0]
    y = b.copy()
    for k in range(n - 1):
        if swap[k]:
            tmp = y[k]
            y[k] = y[k + 1]
            y[k + 1] = tmp
        y[k + 1] -= low[k] * y[k]
    x = y
    x[n - 1] = x[n - 1] / d[n - 1]
    if n > 1:
        x[n - 2] = (x[n - 2] - u1[n - 2] * x[n - 1]) / d[n - 2]
    for i in range(n - 3, -1, -1):
        x[i] = (x[i] - u1[i] * x[i + 1] - u2[i] * x[i + 2]) / d[i]
    return x


@njit(cache=True)
def ray_rk4(eps, energy, theta, r_max, steps):
    """Integrate y'' = e^{2 i theta} (V - E) y inward along x = r e^{i theta}.

    Starts from the decaying WKB direction at r = r_max (y = 1,
    dy/dr = -sqrt(Q) with Re sqrt >= 0) and marches to r = 0 with fixed-step
    RK4.  The pair (y, dy/dr) is renormalized periodically; only ratios of
    the returned values are meaningful.
    """
    # V(r e^{i theta}) = r^{2+eps} * exp(i(2 theta + eps(theta + pi/2)))
    phase_v = cmath.exp(1j * (2.0 * theta) + 1j * eps * (theta + 0.5 * cmath.pi))
    e2t = cmath.exp(2j * theta)
    a_coef = e2t * phase_v
    b_coef = e2t * energy
    p = 2.0 + eps

    h = r_max / steps
    r = r_max
    q0 = a_coef * cmath.exp(p * cmath.log(r)) - b_coef
    y = 1.0 + 0.0j
    v = -cmath.sqrt(q0)

    for i in range(steps):
        r0 = r_max - i * h
        r1 = r0 - 0.5 * h
        r2 = r0 - h
        qa = a_coef * cmath.exp(p * cmath.log(r0)) - b_coef
        qb = a_coef * cmath.exp(p * cmath.log(r1)) - b_coef
        if r2 > 0.0:
            qc = a_coef * cmath.exp(p * cmath.log(r2)) - b_coef
        else:
            qc = -b_coef
        # RK4 with step -h for y' = v, v' = q(r) y
        k1y = v
        k1v = qa * y
        k2y = v - 0.5 * h * k1v
        k2v = qb * (y - 0.5 * h * k1y)
        k3y = v - 0.5 * h * k2v
        k3v = qb * (y - 0.5 * h * k2y)
        k4y = v - h * k3v
        k4v = qc * (y - h * k3y)
        y = y - (h / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        v = v - (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        if i % 128 == 127:
            sc = max(abs(y), abs(v))
            if sc > 1e50 or (0.0 < sc < 1e-50):
                y /= sc
                v /= sc
    return y, v


@njit(cache=True)
def ray_decay_exponent(eps, energy, theta, r_max, n_quad):
    """Re of the WKB decay integral int_0^{r_max} sqrt(Q) dr along the ray."""
    phase_v = cmath.exp(1j * (2.0 * theta) + 1j * eps * (theta + 0.5 * cmath.pi))
    e2t = cmath.exp(2j * theta)
    a_coef = e2t * phase_v
    b_coef = e2t * energy
    p = 2.0 + eps
    h = r_max / n_quad
    total = 0.0
    for i in range(1, n_quad + 1):
        r = i * h
        q = a_coef * cmath.exp(p * cmath.log(r)) - b_coef
        w = 0.5 if i == n_quad else 1.0
        total += w * cmath.sqrt(q).real
    return total * h
