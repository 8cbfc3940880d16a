"""Complex non-Hermitian eigensolver built from scratch.

Pipeline: banded LU of (M - sigma I) with partial pivoting, shift-invert
Arnoldi with explicit restarts and full reorthogonalization, eigenvalues of
the projected Hessenberg matrix by shifted QR with deflation, Ritz vectors
by inverse iteration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import _kernels
from .discretize import DiscretizedOperator
from .wedges import DomainError

__all__ = [
    "SpectrumTag",
    "EigenPair",
    "ShiftPlan",
    "Factorization",
    "SingularPivotError",
    "QRConvergenceError",
    "lu_tridiag",
    "hessenberg_eig",
    "arnoldi_shift_invert",
    "spectrum_scan",
    "shift_lattice",
    "merge_pairs",
]

_MERGE_RTOL = 1e-6
_MAX_QR_SWEEPS_PER_EIG = 30
_HESSENBERG_MAX = 400


class SpectrumTag(Enum):
    DISCRETE = "discrete"
    CONTINUOUS = "continuous"
    UNRESOLVED = "unresolved"


class SingularPivotError(ArithmeticError):
    """Shifted matrix is numerically singular; perturb the shift."""


class QRConvergenceError(ArithmeticError):
    """QR iteration failed to deflate within the sweep budget."""


@dataclass
class EigenPair:
    """Eigenvalue with sampled eigenfunction and true matrix residual."""

    value: complex
    vector: np.ndarray | None
    residual: float
    tag: SpectrumTag = SpectrumTag.UNRESOLVED

    def conjugate_value(self) -> complex:
        return complex(self.value).conjugate()


@dataclass(frozen=True)
class ShiftPlan:
    """Shift-invert run configuration."""

    shifts: tuple[complex, ...]
    subspace_dim: int = 60
    max_restarts: int = 2
    tol: float = 1e-8
    n_wanted: int = 10
    seed: int = 1234

    def __post_init__(self) -> None:
        if self.subspace_dim < 10:
            raise DomainError("subspace dimension must be >= 10")
        if self.tol <= 0:
            raise DomainError("tolerance must be positive")
        object.__setattr__(self, "shifts", tuple(complex(s) for s in self.shifts))


class Factorization:
    """LU factors of (M - sigma I) for a tridiagonal M; solve() is O(n)."""

    def __init__(self, sub, diag, sup, sigma: complex):
        self.sigma = complex(sigma)
        low, d, u1, u2, swap, ok = _kernels.lu_factor_tridiag(
            np.ascontiguousarray(sub, dtype=np.complex128),
            np.ascontiguousarray(diag - self.sigma, dtype=np.complex128),
            np.ascontiguousarray(sup, dtype=np.complex128),
        )
        if not ok:
            raise SingularPivotError(
                f"pivot below 1e-300 while factoring at sigma={sigma}"
            )
        self._factors = (low, d, u1, u2, swap)
        self.n = d.shape[0]

    def solve(self, b: np.ndarray) -> np.ndarray:
        if b.shape[0] != self.n:
            raise DomainError(f"rhs length {b.shape[0]} != {self.n}")
        low, d, u1, u2, swap = self._factors
        return _kernels.lu_solve_tridiag(
            low, d, u1, u2, swap, np.ascontiguousarray(b, dtype=np.complex128)
        )


def lu_tridiag(op: DiscretizedOperator, sigma: complex) -> Factorization:
    """Partial-pivoted LU of (M - sigma I); upper bandwidth 2 after fill-in."""
    return Factorization(op.sub, op.diag, op.sup, sigma)


def _wilkinson_shift(h: np.ndarray) -> complex:
    """Eigenvalue of the trailing 2x2 block closest to its (2,2) entry."""
    a, b = h[0, 0], h[0, 1]
    c, d = h[1, 0], h[1, 1]
    tr2 = 0.5 * (a + d)
    disc = np.sqrt(tr2 * tr2 - (a * d - b * c) + 0j)
    r1, r2 = tr2 + disc, tr2 - disc
    return r1 if abs(r1 - d) <= abs(r2 - d) else r2


def hessenberg_eig(H: np.ndarray) -> np.ndarray:
    """All eigenvalues of a complex upper-Hessenberg matrix.

    Single-shift QR with Wilkinson shifts and deflation; raises
    QRConvergenceError after 30*m sweeps.  Result sorted by (Re, Im).
    """
    H = np.array(H, dtype=np.complex128)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise DomainError("matrix must be square")
    m = H.shape[0]
    if m > _HESSENBERG_MAX:
        raise DomainError(f"matrix size {m} exceeds {_HESSENBERG_MAX}")
    if m == 1:
        return H[:, 0].copy()
    # enforce Hessenberg structure
    for i in range(2, m):
        H[i, : i - 1] = 0.0

    eps_mach = np.finfo(float).eps
    evals = np.empty(m, dtype=np.complex128)
    n_found = 0
    hi = m - 1
    sweeps = 0
    stalled = 0
    max_sweeps = _MAX_QR_SWEEPS_PER_EIG * m

    while hi >= 0:
        if hi == 0:
            evals[n_found] = H[0, 0]
            n_found += 1
            break
        # deflate converged trailing eigenvalues
        if abs(H[hi, hi - 1]) <= eps_mach * (abs(H[hi - 1, hi - 1]) + abs(H[hi, hi])):
            evals[n_found] = H[hi, hi]
            n_found += 1
            hi -= 1
            stalled = 0
            continue
        # active block start
        lo = hi
        while lo > 0 and abs(H[lo, lo - 1]) > eps_mach * (
            abs(H[lo - 1, lo - 1]) + abs(H[lo, lo])
        ):
            lo -= 1
        if hi - lo == 1:
            # closed-form 2x2
            blk = H[lo : hi + 1, lo : hi + 1]
            tr2 = 0.5 * (blk[0, 0] + blk[1, 1])
            disc = np.sqrt(
                tr2 * tr2 - (blk[0, 0] * blk[1, 1] - blk[0, 1] * blk[1, 0]) + 0j
            )
            evals[n_found] = tr2 + disc
            evals[n_found + 1] = tr2 - disc
            n_found += 2
            hi = lo - 1
            stalled = 0
            continue
        mu = _wilkinson_shift(H[hi - 1 : hi + 1, hi - 1 : hi + 1])
        if stalled and stalled % 12 == 0:
            # exceptional shift to break symmetry-induced stalls
            mu = mu + (0.75 + 0.43j) * abs(H[hi, hi - 1])
        # explicit shifted QR sweep on the active window via Givens rotations
        cs = np.empty(hi - lo, dtype=np.complex128)
        sn = np.empty(hi - lo, dtype=np.complex128)
        for k in range(lo, hi + 1):
            H[k, k] -= mu
        for k in range(lo, hi):
            a, b = H[k, k], H[k + 1, k]
            r = math.hypot(abs(a), abs(b))
            if r == 0.0:
                c_k, s_k = 1.0 + 0j, 0j
            else:
                c_k = a / r
                s_k = b / r
            cs[k - lo], sn[k - lo] = c_k, s_k
            # rows k, k+1 of columns k..hi
            row_k = H[k, k : hi + 1].copy()
            row_k1 = H[k + 1, k : hi + 1]
            H[k, k : hi + 1] = np.conj(c_k) * row_k + np.conj(s_k) * row_k1
            H[k + 1, k : hi + 1] = -s_k * row_k + c_k * row_k1
        for k in range(lo, hi):
            c_k, s_k = cs[k - lo], sn[k - lo]
            bot = min(k + 2, hi + 1)
            col_k = H[lo:bot, k].copy()
            col_k1 = H[lo:bot, k + 1]
            H[lo:bot, k] = col_k * c_k + col_k1 * s_k
            H[lo:bot, k + 1] = -col_k * np.conj(s_k) + col_k1 * np.conj(c_k)
        for k in range(lo, hi + 1):
            H[k, k] += mu
        sweeps += 1
        stalled += 1
        if sweeps > max_sweeps:
            raise QRConvergenceError(
                f"QR did not converge within {max_sweeps} sweeps "
                f"({n_found}/{m} eigenvalues deflated)"
            )

    order = np.lexsort((evals.imag, evals.real))
    return evals[order]


def hessenberg_char_poly(H: np.ndarray, z: complex) -> complex:
    """det(H - z I) for upper-Hessenberg H by Hyman's recurrence.

    Independent check for hessenberg_eig: |p(r)| is small at true roots.
    Zero subdiagonals split the determinant into block factors.
    """
    H = np.asarray(H, dtype=np.complex128)
    m = H.shape[0]
    if m == 1:
        return complex(H[0, 0] - z)
    for i in range(1, m):
        if H[i, i - 1] == 0:
            return hessenberg_char_poly(H[:i, :i], z) * hessenberg_char_poly(
                H[i:, i:], z
            )
    x = np.zeros(m, dtype=np.complex128)
    x[m - 1] = 1.0
    subprod = 1.0 + 0j
    for i in range(m - 1, 0, -1):
        s = H[i, i:] @ x[i:] - z * x[i]
        x[i - 1] = -s / H[i, i - 1]
        subprod *= H[i, i - 1]
    top = H[0, :] @ x - z * x[0]
    sign = -1.0 if (m - 1) % 2 else 1.0
    return complex(sign * subprod * top)


def _hessenberg_eigvec(H: np.ndarray, theta: complex) -> np.ndarray:
    """Eigenvector of Hessenberg H for eigenvalue theta by inverse iteration."""
    m = H.shape[0]
    shift = theta * (1.0 + 1e-13) + 1e-290
    A = H - shift * np.eye(m, dtype=np.complex128)
    rng = np.random.default_rng(12345)
    y = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    y /= np.linalg.norm(y)
    for _ in range(3):
        y = _solve_hessenberg(A, y)
        nrm = np.linalg.norm(y)
        if not np.isfinite(nrm) or nrm == 0.0:
            y = rng.standard_normal(m) + 1j * rng.standard_normal(m)
            nrm = np.linalg.norm(y)
        y /= nrm
    return y


def _solve_hessenberg(A: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve A y = b for upper-Hessenberg A by row elimination with pivoting."""
    m = A.shape[0]
    U = A.copy()
    y = b.astype(np.complex128).copy()
    for k in range(m - 1):
        if abs(U[k + 1, k]) > abs(U[k, k]):
            U[[k, k + 1], k:] = U[[k + 1, k], k:]
            y[[k, k + 1]] = y[[k + 1, k]]
        piv = U[k, k]
        if piv == 0:
            piv = U[k, k] = 1e-290
        mult = U[k + 1, k] / piv
        U[k + 1, k:] -= mult * U[k, k:]
        y[k + 1] -= mult * y[k]
    x = np.zeros(m, dtype=np.complex128)
    for i in range(m - 1, -1, -1):
        piv = U[i, i] if U[i, i] != 0 else 1e-290
        x[i] = (y[i] - U[i, i + 1 :] @ x[i + 1 :]) / piv
    return x


def _arnoldi_cycle(factor: Factorization, v0: np.ndarray, m: int, tol: float):
    """One Arnoldi cycle on (M - sigma I)^{-1}; returns Ritz data."""
    n = factor.n
    m = min(m, n)
    V = np.empty((m + 1, n), dtype=np.complex128)
    Hm = np.zeros((m + 1, m), dtype=np.complex128)
    V[0] = v0 / np.linalg.norm(v0)
    m_eff = m
    breakdown = False
    for j in range(m):
        w = factor.solve(V[j])
        coef = V[: j + 1].conj() @ w
        w -= coef @ V[: j + 1]
        # one reorthogonalization pass keeps the basis orthonormal to machine level
        coef2 = V[: j + 1].conj() @ w
        w -= coef2 @ V[: j + 1]
        coef += coef2
        Hm[: j + 1, j] = coef
        beta = np.linalg.norm(w)
        Hm[j + 1, j] = beta
        if beta <= 1e-14 * max(1.0, float(np.max(np.abs(Hm[: j + 2, : j + 1])))):
            m_eff = j + 1
            breakdown = True
            break
        V[j + 1] = w / beta
    Hsq = Hm[:m_eff, :m_eff]
    thetas = hessenberg_eig(Hsq)
    beta_last = 0.0 if breakdown else float(abs(Hm[m_eff, m_eff - 1]))
    return V[:m_eff], Hsq, thetas, beta_last, breakdown


def _polish_pair(
    op: DiscretizedOperator, lam: complex, x0: np.ndarray, max_rounds: int = 4
) -> tuple[complex, np.ndarray, float]:
    """Sharpen a Ritz pair by inverse iteration at its own shift.

    Rounds of (factor at lambda, iterate, Rayleigh quotient) until the
    eigenvalue stops moving; drives clean pairs to the conditioning floor
    and leaves blends of clustered states with a visibly large residual.
    """
    x = x0
    for _ in range(max_rounds):
        sig = lam
        factor = None
        for attempt in range(3):
            try:
                factor = lu_tridiag(op, sig)
                break
            except SingularPivotError:
                sig = sig * (1.0 + 1e-11) + (1e-13 + 1e-13j) * (attempt + 1)
        if factor is None:
            break
        y = factor.solve(x)
        nrm = np.linalg.norm(y)
        if not np.isfinite(nrm) or nrm == 0.0:
            break
        x = y / nrm
        mx = op.matvec(x)
        lam_new = complex(np.vdot(x, mx) / np.vdot(x, x))
        moved = abs(lam_new - lam)
        lam = lam_new
        if moved <= 1e-13 * (1.0 + abs(lam)):
            break
    res = float(np.linalg.norm(op.matvec(x) - lam * x))
    return lam, x, res


def arnoldi_shift_invert(
    op: DiscretizedOperator, plan: ShiftPlan, keep_vectors: bool = True
) -> list[EigenPair]:
    """Ritz pairs of M near each shift, deduplicated across shifts.

    A Ritz value theta of (M - sigma I)^{-1} converts to E = sigma + 1/theta.
    Candidates passing the Arnoldi residual estimate are polished by inverse
    iteration at their own shift and kept when the true residual reaches
    tol*(1+|E|) or the conditioning floor of the matrix, whichever is larger.
    Every returned pair carries its true residual ||M x - E x||/||x||.
    """
    results: list[EigenPair] = []
    n = op.n
    res_floor = 20.0 * np.finfo(float).eps * op.norm_inf
    for idx, sigma in enumerate(plan.shifts):
        rng = np.random.default_rng((plan.seed, idx))
        sig = complex(sigma)
        factor = None
        for attempt in range(4):
            try:
                factor = lu_tridiag(op, sig)
                break
            except SingularPivotError:
                sig = sig * (1.0 + 1e-7) + (1e-9 + 1e-9j) * (attempt + 1)
        if factor is None:
            continue
        v0 = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        found: list[EigenPair] = []
        for cycle in range(plan.max_restarts + 1):
            V, Hsq, thetas, beta_last, breakdown = _arnoldi_cycle(
                factor, v0, plan.subspace_dim, plan.tol
            )
            order = np.argsort(-np.abs(thetas))
            thetas = thetas[order]
            n_acc = 0
            examined = 0
            restart_dirs = []
            for theta in thetas:
                if theta == 0:
                    continue
                if examined >= 3 * plan.n_wanted and n_acc >= plan.n_wanted:
                    break
                examined += 1
                lam = sig + 1.0 / theta
                # duplicates of already-accepted values need no second polish
                if any(
                    abs(lam - q.value) <= 1e-5 * (1.0 + abs(lam))
                    for q in found
                ):
                    continue
                y = _hessenberg_eigvec(Hsq, theta)
                est = beta_last * abs(y[-1])
                # loose gate: inverse-iteration polish decides the rest
                if est <= max(100.0 * plan.tol, 1e-4) * abs(theta) or breakdown:
                    x = y @ V
                    nrm = np.linalg.norm(x)
                    if nrm == 0:
                        continue
                    lam2, x2, res = _polish_pair(op, complex(lam), x / nrm)
                    if res <= max(plan.tol * (1.0 + abs(lam2)), res_floor):
                        found.append(
                            EigenPair(
                                value=complex(lam2),
                                vector=x2 if keep_vectors else None,
                                residual=res,
                                tag=SpectrumTag.UNRESOLVED,
                            )
                        )
                        n_acc += 1
                elif len(restart_dirs) < 4:
                    restart_dirs.append(y)
            if n_acc >= plan.n_wanted or breakdown or not restart_dirs:
                break
            if cycle < plan.max_restarts:
                v0 = np.sum([y @ V for y in restart_dirs], axis=0)
                v0 = v0 + 1e-6 * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
        results.extend(found)
    return merge_pairs(results)


def merge_pairs(pairs: list[EigenPair]) -> list[EigenPair]:
    """Deduplicate by |E1-E2| <= 1e-6 (1+|E1|), keeping the best residual;
    deterministic (Re, Im) ordering."""
    pairs = sorted(pairs, key=lambda p: (p.value.real, p.value.imag))
    out: list[EigenPair] = []
    for p in pairs:
        if out:
            q = out[-1]
            if abs(p.value - q.value) <= _MERGE_RTOL * (1.0 + abs(p.value)):
                if p.residual < q.residual:
                    out[-1] = p
                continue
        out.append(p)
    # a second pass catches near-duplicates that differ mostly in Im
    changed = True
    while changed:
        changed = False
        merged: list[EigenPair] = []
        for p in out:
            dup = False
            for i, q in enumerate(merged):
                if abs(p.value - q.value) <= _MERGE_RTOL * (1.0 + abs(p.value)):
                    if p.residual < q.residual:
                        merged[i] = p
                    dup = True
                    changed = True
                    break
            if not dup:
                merged.append(p)
        out = merged
    return sorted(out, key=lambda p: (p.value.real, p.value.imag))


def shift_lattice(
    region: tuple[float, float, float, float],
    n_re: int = 8,
    n_im: int = 8,
    seed: int = 1234,
    jitter: float = 0.05,
    conjugate_symmetric: bool = True,
) -> list[complex]:
    """Jittered shift lattice covering a rectangle (re0, re1, im0, im1).

    Jitter (±5% of the pitch, seeded) avoids landing on exact eigenvalues.
    With conjugate_symmetric, shifts below the real axis mirror those above,
    which keeps scans of PT-symmetric operators conjugation-closed.
    """
    re0, re1, im0, im1 = region
    if not (re1 > re0 and im1 > im0):
        return []
    rng = np.random.default_rng(seed)
    res = np.linspace(re0, re1, n_re + 2)[1:-1]
    ims = np.linspace(im0, im1, n_im + 2)[1:-1]
    d_re = (re1 - re0) / (n_re + 1)
    d_im = (im1 - im0) / (n_im + 1)
    shifts: list[complex] = []
    if conjugate_symmetric and im0 < 0 < im1:
        upper = [im for im in ims if im > 1e-14]
        zero = [im for im in ims if abs(im) <= 1e-14]
        for re in res:
            for im in upper:
                jr = jitter * d_re * (2 * rng.random() - 1)
                ji = jitter * d_im * (2 * rng.random() - 1)
                s = complex(re + jr, im + ji)
                shifts.append(s)
                shifts.append(s.conjugate())
            for _ in zero:
                jr = jitter * d_re * (2 * rng.random() - 1)
                shifts.append(complex(re + jr, 0.0))
    else:
        for re in res:
            for im in ims:
                jr = jitter * d_re * (2 * rng.random() - 1)
                ji = jitter * d_im * (2 * rng.random() - 1)
                shifts.append(complex(re + jr, im + ji))
    return shifts


def spectrum_scan(
    op: DiscretizedOperator,
    region: tuple[float, float, float, float],
    n_re: int = 8,
    n_im: int = 8,
    subspace_dim: int = 60,
    tol: float = 1e-8,
    seed: int = 1234,
    keep_vectors: bool = True,
    extra_shifts: list[complex] | None = None,
) -> list[EigenPair]:
    """Union of shift-invert Arnoldi runs over a shift lattice, restricted to
    the rectangle, deduplicated, ordered by (Re, Im)."""
    shifts = shift_lattice(region, n_re=n_re, n_im=n_im, seed=seed)
    if extra_shifts:
        shifts = list(shifts) + [complex(s) for s in extra_shifts]
    if not shifts:
        return []
    plan = ShiftPlan(
        shifts=tuple(shifts), subspace_dim=subspace_dim, tol=tol, seed=seed
    )
    pairs = arnoldi_shift_invert(op, plan, keep_vectors=keep_vectors)
    re0, re1, im0, im1 = region
    pad_re = 0.05 * (re1 - re0)
    pad_im = 0.05 * (im1 - im0)
    return [
        p
        for p in pairs
        if re0 - pad_re <= p.value.real <= re1 + pad_re
        and im0 - pad_im <= p.value.imag <= im1 + pad_im
    ]
