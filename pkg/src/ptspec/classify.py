"""Discrete-vs-continuous classification of computed eigenpairs.

A discrete eigenvalue is stable as the Dirichlet truncation is refined and
its eigenfunction decays exponentially into both walls.  Continuum samples
instead drift as eta shrinks (they densify on curves) and their
eigenfunction runs at O(max) amplitude into one wall before dropping
sharply to satisfy the boundary condition.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .discretize import DiscretizedOperator
from .eigensolve import EigenPair, ShiftPlan, SpectrumTag, arnoldi_shift_invert
from .wedges import DomainError

__all__ = [
    "DecayKind",
    "End",
    "DecayThresholds",
    "ClassificationReport",
    "decay_profile",
    "classify",
]


class DecayKind(Enum):
    EXPONENTIAL = "exponential"
    SHARP_DROP = "sharp_drop"
    UNRESOLVED = "unresolved"


class End(Enum):
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True)
class DecayThresholds:
    """Tunable limits for the eigenfunction-decay classification.

    min_slope is the smallest |d log|psi| / dt| accepted as exponential
    decay; window_frac the terminal window width; r2_min the fit quality;
    drop_frac the final fraction of the window within which a sharp drop
    must happen; amp_frac the "stays large" level for a sharp drop.
    All |psi| statistics are taken on a per-bin envelope (maxima over
    ~window/20 bins) so that oscillation nodes of a complex eigenfunction
    do not spoil the fit.  fast_decay_decades and body_max_frac define a
    second exponential branch for super-exponential (convex) tails that a
    straight-line fit under-rates: at least that many decades must be lost
    before the final drop_frac of the window, starting from a level already
    below body_max_frac of the global maximum.
    """

    min_slope: float = 5.0
    window_frac: float = 0.10
    r2_min: float = 0.90
    drop_frac: float = 0.03
    amp_frac: float = 0.10
    drop_tol_frac: float = 0.05
    noise_floor: float = 1e-13
    fast_decay_decades: float = 2.0
    body_max_frac: float = 0.10
    growth_tol: float = 3.0


@dataclass(frozen=True)
class ClassificationReport:
    eig: complex
    drift: float
    counterpart: complex | None
    left_decay: DecayKind
    right_decay: DecayKind
    verdict: SpectrumTag


def _bin_envelope(t: np.ndarray, a: np.ndarray, n_bins: int):
    """Per-bin maxima of |psi| with bin-center abscissae."""
    edges = np.linspace(0, t.size, n_bins + 1).astype(int)
    t_env = np.empty(n_bins)
    env = np.empty(n_bins)
    for i in range(n_bins):
        lo, hi = edges[i], max(edges[i + 1], edges[i] + 1)
        env[i] = a[lo:hi].max()
        t_env[i] = t[lo:hi].mean()
    return t_env, env


def decay_profile(
    psi: np.ndarray,
    grid,
    end: End,
    thresholds: DecayThresholds = DecayThresholds(),
) -> DecayKind:
    """Classify how |psi| behaves approaching one Dirichlet wall.

    Works on the bin envelope of |psi| over the terminal window (last 3
    points excluded from fitting).  Exponential decay is accepted either
    from a straight-line fit of log-envelope vs t (|slope| >= min_slope
    toward the wall, r^2 >= r2_min) or, for super-exponential tails, from a
    loss of fast_decay_decades decades across the window body.  A sharp
    drop keeps the envelope above amp_frac * max|psi| until the final
    drop_frac of the window and then falls below drop_tol_frac * max|psi|.
    """
    psi = np.asarray(psi)
    t_all = grid.points
    n = psi.shape[0]
    if n != t_all.size:
        raise DomainError("psi length does not match the grid")
    w = max(int(round(thresholds.window_frac * n)), 1)
    if w < 40:
        raise DomainError(
            f"terminal window has {w} samples; need >= 40 (increase n_interior)"
        )
    amax = float(np.abs(psi).max())
    if amax == 0.0:
        return DecayKind.UNRESOLVED
    # widest window first; halve toward the wall until a definite answer
    # (slowly winding states only start their asymptotic fall deep inside
    # the terminal window, where a full-window fit would dilute it)
    while w >= 40:
        kind = _profile_at_scale(psi, t_all, end, w, amax, thresholds)
        if kind is not DecayKind.UNRESOLVED:
            return kind
        w //= 2
    return DecayKind.UNRESOLVED


def _profile_at_scale(
    psi: np.ndarray,
    t_all: np.ndarray,
    end: End,
    w: int,
    amax: float,
    thresholds: DecayThresholds,
) -> DecayKind:
    # orient the window so the wall is at the end
    if end is End.RIGHT:
        t_win = t_all[-w:]
        a_win = np.abs(psi[-w:])
    else:
        t_win = -t_all[:w][::-1]
        a_win = np.abs(psi[:w])[::-1]
    wall_value = float(a_win[-1])
    t_fit, a_fit = t_win[:-3], a_win[:-3]
    n_bins = int(min(24, max(8, t_fit.size // 40)))
    t_env, env = _bin_envelope(t_fit, a_fit, n_bins)

    # exponential, branch 1: straight-line fit of the log envelope
    mask = env > thresholds.noise_floor * amax
    exp_ok = False
    if mask.sum() >= 4:
        te, ye = t_env[mask], np.log(env[mask])
        slope, icpt = np.polyfit(te, ye, 1)
        pred = slope * te + icpt
        ss_tot = float(np.sum((ye - ye.mean()) ** 2))
        r2 = 1.0 - float(np.sum((ye - pred) ** 2)) / ss_tot if ss_tot > 0 else 1.0
        if slope <= -thresholds.min_slope and r2 >= thresholds.r2_min:
            exp_ok = True
    # exponential, branch 2: super-exponential tails lose decades quickly;
    # insist the whole window already sits well below the global maximum so
    # that a sharp drop (flat at O(max), then cliff) cannot sneak in
    if not exp_ok and env[0] > 0:
        n_body = max(int(round((1.0 - thresholds.drop_frac) * n_bins)), 2)
        body_env = env[:n_body]
        last = max(float(body_env[-1]), thresholds.noise_floor * amax * 1e-3)
        decades = np.log10(max(env[0], 1e-300) / last)
        no_growth = bool(np.all(body_env <= thresholds.growth_tol * env[0]))
        if (
            decades >= thresholds.fast_decay_decades
            and no_growth
            and env[0] <= thresholds.body_max_frac * amax
        ):
            exp_ok = True
    if exp_ok:
        return DecayKind.EXPONENTIAL

    # sharp drop: envelope stays at O(max) until the final drop_frac
    n_body = max(int(round((1.0 - thresholds.drop_frac) * n_bins)), 2)
    t_env_all, env_all = _bin_envelope(t_win, a_win, n_bins)
    body = env_all[:n_body]
    if (
        body.min() >= thresholds.amp_frac * amax
        and wall_value <= thresholds.drop_tol_frac * amax
    ):
        return DecayKind.SHARP_DROP
    return DecayKind.UNRESOLVED


def _nearest_on(op_half: DiscretizedOperator, value: complex, tol: float, seed: int):
    """Counterpart of an eigenvalue on the refined-truncation operator.

    Returns (counterpart, ambiguous): ambiguous when a second candidate sits
    within twice the nearest distance.
    """
    plan = ShiftPlan(
        shifts=(complex(value),),
        subspace_dim=40,
        tol=tol,
        n_wanted=4,
        seed=seed,
    )
    pairs = arnoldi_shift_invert(op_half, plan, keep_vectors=False)
    if not pairs:
        return None, False
    dists = sorted((abs(p.value - value), p.value) for p in pairs)
    nearest_d, nearest = dists[0]
    ambiguous = len(dists) > 1 and dists[1][0] <= 2.0 * max(nearest_d, 1e-14)
    return nearest, ambiguous


def classify(
    op_eta: DiscretizedOperator,
    op_eta_half: DiscretizedOperator,
    pair: EigenPair,
    thresholds: DecayThresholds = DecayThresholds(),
    tol_disc_rel: float = 1e-3,
    seed: int = 1234,
) -> ClassificationReport:
    """Verdict for one eigenpair computed on op_eta.

    Discrete needs the eta/2 counterpart within 1e-3 (1+|E|) and exponential
    decay into both walls; a sharp drop at either wall marks a continuum
    sample; anything else (including an ambiguous counterpart) stays
    unresolved.
    """
    if pair.vector is None:
        raise DomainError("classification needs the eigenvector")
    e = complex(pair.value)
    left = decay_profile(pair.vector, op_eta.grid, End.LEFT, thresholds)
    right = decay_profile(pair.vector, op_eta.grid, End.RIGHT, thresholds)
    counterpart, ambiguous = _nearest_on(op_eta_half, e, tol=1e-8, seed=seed)
    drift = abs(e - counterpart) if counterpart is not None else np.inf
    tol_disc = tol_disc_rel * (1.0 + abs(e))

    both_exp = left is DecayKind.EXPONENTIAL and right is DecayKind.EXPONENTIAL
    any_drop = DecayKind.SHARP_DROP in (left, right)
    if ambiguous:
        verdict = SpectrumTag.UNRESOLVED
    elif drift <= tol_disc and both_exp:
        verdict = SpectrumTag.DISCRETE
    elif any_drop:
        verdict = SpectrumTag.CONTINUOUS
    else:
        verdict = SpectrumTag.UNRESOLVED
    return ClassificationReport(
        eig=e,
        drift=float(drift),
        counterpart=counterpart,
        left_decay=left,
        right_decay=right,
        verdict=verdict,
    )
