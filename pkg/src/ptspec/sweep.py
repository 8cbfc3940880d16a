"""Parameter continuation in eps: real-axis sweeps, circles around the
eps = -1 exceptional point, trajectory matching, and merge detection.

Trajectories are matched greedily across consecutive grid points against a
linear extrapolation of each track; the matching threshold scales with the
local step and eigenvalue size.  Near the logarithmically-fast region
around eps in {-1, -2, -3} the grid auto-refines by a factor of ten.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import shooting
from .asymptotics import near_m1
from .discretize import EtaOverflowError, build_operator
from .eigensolve import ShiftPlan, arnoldi_shift_invert
from .wedges import DomainError

__all__ = [
    "SolverConfig",
    "Trajectory",
    "SweepResult",
    "sweep_real",
    "sweep_circle",
    "detect_merge",
]

_HANDOFF = -0.95
_REFINE_POINTS = (-1.0, -2.0, -3.0)
_REFINE_RADIUS = 0.05


@dataclass(frozen=True)
class SolverConfig:
    """Numerical settings shared by the per-eps solves in a sweep."""

    n_interior: int = 4000
    eta: float = 0.01
    subspace_dim: int = 50
    tol: float = 1e-8
    ray_steps: int = 8000
    seed: int = 1234
    branch: str = "principal"
    energy_max: float = 30.0
    track_margin: float = 10.0


@dataclass
class Trajectory:
    label: int
    values: list  # complex or None per grid point


@dataclass
class SweepResult:
    eps_grid: list
    trajectories: list
    merges: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    flags: list = field(default_factory=list)
    monodromy: dict | None = None

    def values_at(self, i: int) -> list:
        return [
            tr.values[i]
            for tr in self.trajectories
            if i < len(tr.values) and tr.values[i] is not None
        ]


def _refined_grid(eps_start: float, eps_end: float, step: float) -> np.ndarray:
    """Uniform grid with step/10 refinement within 0.05 of -1, -2, -3."""
    lo, hi = min(eps_start, eps_end), max(eps_start, eps_end)
    pts = [lo]
    x = lo
    while x < hi - 1e-12:
        h = step
        if any(abs(x - c) < _REFINE_RADIUS for c in _REFINE_POINTS):
            h = step / 10.0
        x = min(x + h, hi)
        pts.append(x)
    grid = np.array(pts)
    if eps_start > eps_end:
        grid = grid[::-1]
    return grid


def _winding_solve(eps: complex, config: SolverConfig, shifts: list[complex]):
    """Eigenvalues of the winding-contour operator near the given shifts."""
    eta = config.eta
    for _ in range(4):
        try:
            op = build_operator(eps, config.n_interior, eta, branch=config.branch)
            break
        except EtaOverflowError as err:
            eta = max(err.min_eta * 1.3, eta * 4.0)
    else:
        raise DomainError(f"could not build operator at eps={eps}")
    plan = ShiftPlan(
        shifts=tuple(shifts),
        subspace_dim=config.subspace_dim,
        tol=config.tol,
        n_wanted=2,
        max_restarts=1,
        seed=config.seed,
    )
    pairs = arnoldi_shift_invert(op, plan, keep_vectors=False)
    return [p.value for p in pairs]


def _shooting_solve(eps: float, config: SolverConfig, predictions: list[complex]):
    """Real eigenvalues from a Wronskian scan plus tracked complex roots."""
    vals: list[complex] = []
    # real roots: scan then polish
    grid = np.arange(0.05, config.energy_max, 0.05)
    w = np.array(
        [shooting.wronskian(eps, float(e), steps=config.ray_steps).real for e in grid]
    )
    for i in range(len(grid) - 1):
        if w[i] == 0.0 or w[i] * w[i + 1] < 0.0:
            try:
                root = shooting.find_eigenvalue(
                    eps, complex(0.5 * (grid[i] + grid[i + 1])), steps=config.ray_steps
                )
                vals.append(complex(root.real, 0.0))
            except shooting.ConvergenceError:
                pass
    # complex roots continued from predictions
    for p in predictions:
        if abs(p.imag) < 1e-9:
            continue
        try:
            root = shooting.find_eigenvalue(eps, p, steps=config.ray_steps)
            vals.append(root)
        except shooting.ConvergenceError:
            pass
    return _dedup(vals)


def _dedup(vals: list[complex], rtol: float = 1e-6) -> list[complex]:
    out: list[complex] = []
    for v in sorted(vals, key=lambda z: (z.real, z.imag)):
        if not any(abs(v - u) <= rtol * (1.0 + abs(v)) for u in out):
            out.append(v)
    return out


def _predict(track: list, i: int):
    """Linear extrapolation from the last two known values of a track."""
    known = [(j, v) for j, v in enumerate(track[:i]) if v is not None]
    if not known:
        return None
    if len(known) == 1:
        return known[-1][1]
    (j1, v1), (j2, v2) = known[-2], known[-1]
    if j2 == j1:
        return v2
    slope = (v2 - v1) / (j2 - j1)
    return v2 + slope * (i - j2)


def _match_step(
    tracks: list[list],
    new_vals: list[complex],
    i: int,
    step: float,
    margin: float,
):
    """Greedy assignment of new eigenvalues to existing tracks."""
    preds = [(k, _predict(tr, i)) for k, tr in enumerate(tracks)]
    preds = [(k, p) for k, p in preds if p is not None]
    cands = []
    for k, p in preds:
        for m, v in enumerate(new_vals):
            d = abs(v - p)
            if d <= margin * step * (1.0 + abs(v)):
                cands.append((d, k, m))
    cands.sort(key=lambda c: c[0])
    used_k: set[int] = set()
    used_m: set[int] = set()
    for d, k, m in cands:
        if k in used_k or m in used_m:
            continue
        tracks[k].append(new_vals[m])
        used_k.add(k)
        used_m.add(m)
    for k, tr in enumerate(tracks):
        if k not in used_k:
            tr.append(None)
    for m, v in enumerate(new_vals):
        if m not in used_m:
            fresh = [None] * i + [v]
            tracks.append(fresh)


def sweep_real(
    eps_start: float,
    eps_end: float,
    step: float,
    config: SolverConfig = SolverConfig(),
) -> SweepResult:
    """Track eigenvalues along a real-eps segment inside (-4, 1].

    Shooting handles eps > -0.95 (real roots by scan, complex roots by
    secant continuation); the winding-contour Arnoldi solver handles the
    rest.  On a 3-point band around the handoff both solvers run and must
    agree within 5e-4, else the band is flagged.  Per-eps failures are
    recorded and skipped, never fatal.
    """
    for e in (eps_start, eps_end):
        if not -4.0 < e <= 1.0:
            raise DomainError(f"sweep endpoints must lie in (-4, 1], got {e}")
    grid = _refined_grid(eps_start, eps_end, abs(step))
    tracks: list[list] = []
    failures = []
    flags = []
    for i, eps in enumerate(grid):
        eps = float(eps)
        preds = [p for p in (_predict(tr, i) for tr in tracks) if p is not None]
        local_step = abs(grid[i] - grid[i - 1]) if i else abs(step)
        try:
            if eps > _HANDOFF:
                vals = _shooting_solve(eps, config, preds)
                if i < 2 and abs(eps + 1.0) > 1e-9 and eps < 0:
                    # bootstrap complex pairs at the sweep start
                    seeds = _bootstrap_shifts(eps)
                    vals = _dedup(vals + _winding_solve(eps, config, seeds))
            else:
                shifts = [p for p in preds] or _bootstrap_shifts(eps)
                shifts = shifts + [s.conjugate() for s in shifts]
                vals = _winding_solve(eps, config, _dedup(shifts, 1e-3))
            if abs(eps - _HANDOFF) <= 1.5 * abs(step) and eps < 0:
                _check_handoff(eps, vals, config, flags)
        except (DomainError, EtaOverflowError, ArithmeticError) as err:
            failures.append((eps, str(err)))
            vals = []
        _match_step(tracks, vals, i, max(local_step, 1e-12), config.track_margin)
    trajectories = [Trajectory(label=k, values=tr) for k, tr in enumerate(tracks)]
    return SweepResult(
        eps_grid=[float(e) for e in grid],
        trajectories=trajectories,
        failures=failures,
        flags=flags,
    )


def _bootstrap_shifts(eps: complex) -> list[complex]:
    """Starting shifts when no trajectory predictions exist."""
    eps = complex(eps)
    delta = eps + 1.0
    out: list[complex] = []
    if abs(delta) < 0.5 and abs(delta) > 0:
        # helical family near the eps = -1 exceptional point
        sgn = 1 if delta.real >= 0 else -1
        base = near_m1(max(abs(delta), 1e-6), 0 if sgn > 0 else 1)
        re = base.re_E
        for n in (0, 1, 2, 3, 4):
            out.append(complex(re, n * np.pi / (2.0 * np.sqrt(re))))
    elif eps.real > -2.0:
        out = [complex(-1.0, 0.3), complex(-0.9, 0.1), complex(-1.2, 0.5)]
    else:
        out = [complex(-1.0, 0.5), complex(0.3, 0.3), complex(-0.5, 1.5)]
    return out


def _check_handoff(eps: float, vals: list[complex], config: SolverConfig, flags):
    """Shooting and winding must agree on shared eigenvalues near -0.95."""
    if not vals:
        return
    try:
        alt = _winding_solve(eps, config, vals[:4])
    except (DomainError, EtaOverflowError):
        return
    for v in vals[:4]:
        if not alt:
            continue
        d = min(abs(v - a) for a in alt)
        if d > 5e-4 * (1.0 + abs(v)):
            flags.append(
                f"handoff disagreement at eps={eps}: |dE|={d:.2e} for E={v:.6f}"
            )


def sweep_circle(
    center: complex,
    radius: float,
    n_points: int,
    config: SolverConfig = SolverConfig(),
    direction: int = +1,
) -> SweepResult:
    """Track eigenvalues around a circle in the complex-eps plane.

    Supported center is the infinite-order exceptional point at -1 with
    radius <= 0.1.  The loop closes (the final point repeats theta = 0) and
    the monodromy permutation maps each trajectory to the one it continues
    into after a full turn.  direction=-1 encircles clockwise.
    """
    if complex(center) != complex(-1.0):
        raise DomainError("only circles centered at eps = -1 are supported")
    if radius > 0.1:
        raise DomainError("radius must be <= 0.1")
    if radius < 0:
        raise DomainError("radius must be >= 0")
    if n_points < 64:
        raise DomainError("need n_points >= 64")
    if direction not in (+1, -1):
        raise DomainError("direction must be +1 or -1")
    thetas = direction * np.linspace(0.0, 2.0 * np.pi, n_points + 1)
    eps_grid = [complex(-1.0 + radius * np.exp(1j * th)) for th in thetas]
    if radius == 0.0:
        # degenerate loop: one solve replicated, identity monodromy
        vals = _winding_solve(eps_grid[0], config, _circle_seeds(radius))
        trajectories = [
            Trajectory(label=k, values=[v] * len(eps_grid)) for k, v in enumerate(vals)
        ]
        result = SweepResult(eps_grid=eps_grid, trajectories=trajectories, failures=[])
        result.monodromy = _monodromy(trajectories)
        return result
    tracks: list[list] = []
    failures = []
    step_equiv = max(2.0 * np.pi * radius / n_points, 1e-9)
    for i, eps in enumerate(eps_grid):
        preds = [p for p in (_predict(tr, i) for tr in tracks) if p is not None]
        shifts = preds or _circle_seeds(radius)
        try:
            vals = _winding_solve(eps, config, _dedup(shifts, 1e-3))
        except (DomainError, EtaOverflowError, ArithmeticError) as err:
            failures.append((eps, str(err)))
            vals = []
        _match_step(tracks, vals, i, step_equiv, config.track_margin)
    trajectories = [Trajectory(label=k, values=tr) for k, tr in enumerate(tracks)]
    result = SweepResult(
        eps_grid=eps_grid,
        trajectories=trajectories,
        failures=failures,
    )
    result.monodromy = _monodromy(trajectories)
    return result


def _circle_seeds(radius: float) -> list[complex]:
    if radius == 0.0:
        radius = 1e-6
    base = near_m1(radius, 0)
    re = base.re_E
    dn = np.pi / (2.0 * np.sqrt(re))
    return [complex(re, n * dn) for n in (-4, -3, -2, -1, 0, 1, 2, 3, 4)]


def _monodromy(trajectories: list) -> dict:
    """Map each closed-loop trajectory to the one it lands on."""
    perm: dict[int, int] = {}
    start_vals = [
        (tr.label, tr.values[0]) for tr in trajectories if tr.values and tr.values[0] is not None
    ]
    for tr in trajectories:
        if not tr.values or tr.values[-1] is None or tr.values[0] is None:
            continue
        end = tr.values[-1]
        if not start_vals:
            continue
        lbl, _ = min(start_vals, key=lambda sv: abs(sv[1] - end))
        perm[tr.label] = lbl
    return perm


def detect_merge(
    traj_a: Trajectory,
    traj_b: Trajectory,
    eps_grid: list,
    config: SolverConfig = SolverConfig(),
    resolution: float = 1e-5,
):
    """Locate the eps where two real trajectories merge pairwise.

    The pair must approach within 10x the local eigenvalue resolution along
    the grid; the merge point is then refined by bisection on the
    real-eigenvalue count and the common energy is read off just above it.
    """
    pairs = [
        (i, va, vb)
        for i, (va, vb) in enumerate(zip(traj_a.values, traj_b.values))
        if va is not None and vb is not None
        and abs(va.imag) < 1e-6 and abs(vb.imag) < 1e-6
    ]
    if not pairs:
        raise DomainError("trajectories share no real section")
    gaps = [(abs(va - vb), i) for i, va, vb in pairs]
    min_gap, i_min = min(gaps)
    i_lo = max(i_min - 1, 0)
    i_hi = min(i_min + 1, len(eps_grid) - 1)
    local = abs(np.real(eps_grid[i_hi]) - np.real(eps_grid[i_lo]))
    if min_gap > 10.0 * max(local, 1e-9) * (1.0 + abs(pairs[0][1])):
        raise DomainError(f"trajectories never approach: min gap {min_gap:.3e}")
    # bracket the count drop around the closest approach, widening once if
    # the pair is still unmerged on both sides
    half = max(local, abs(np.real(eps_grid[1]) - np.real(eps_grid[0])), 1e-4)
    center_eps = float(np.real(eps_grid[i_min]))
    for widen in (1.0, 3.0):
        lo, hi = center_eps - widen * half, center_eps + widen * half
        try:
            eps_star = shooting.find_transition(
                lo,
                hi,
                energy_max=config.energy_max,
                resolution=resolution,
                steps=config.ray_steps,
            )
            break
        except DomainError:
            continue
    else:
        raise DomainError("no real-count change near the closest approach")
    _, va, vb = pairs[min(range(len(pairs)), key=lambda k: gaps[k][0])]
    e_star = complex(0.5 * (va + vb))
    return float(eps_star), e_star
