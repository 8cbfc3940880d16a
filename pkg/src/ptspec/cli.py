"""Command-line interface.

Commands: wedges, solve, shoot, sweep, circle, classify, asympt, plot.
Global flags --out/--seed/--threads/--config apply to every command;
precedence is flags > config file (flat key=value lines) > defaults.
Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import classify as classify_mod
from . import output, shooting, svgplot, sweep as sweep_mod
from .asymptotics import near_m1, reference_row_prediction
from .discretize import EtaOverflowError, build_operator
from .eigensolve import (
    QRConvergenceError,
    ShiftPlan,
    SingularPivotError,
    SpectrumTag,
    arnoldi_shift_invert,
    merge_pairs,
    shift_lattice,
)
from .shooting import ConvergenceError
from .sweep import SolverConfig
from .wedges import DomainError, wedge_geometry

USAGE_ERROR, NUMERICAL_ERROR, IO_ERROR = 1, 2, 3

_DEFAULTS = {
    "seed": 1234,
    "threads": 1,
    "n": 4000,
    "eta": 0.01,
    "subspace": 60,
    "tol": 1e-8,
    "steps": 8000,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        sys.exit(USAGE_ERROR)


def _load_config(path):
    cfg = {}
    text = Path(path).read_text()
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        if "=" not in ln:
            raise ValueError(f"bad config line: {ln!r}")
        key, val = ln.split("=", 1)
        cfg[key.strip()] = val.strip()
    return cfg


def _resolve(args, cfg, key, cast=float):
    v = getattr(args, key, None)
    if v is not None:
        return v
    if key in cfg:
        return cast(cfg[key])
    return _DEFAULTS.get(key)


def _emit(args, text: str):
    if args.out:
        Path(args.out).write_text(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _scan(op, shifts, subspace, tol, seed, threads, keep_vectors=True):
    """Shift-invert over a list of shifts, optionally split across threads."""
    threads = max(int(threads), 1)
    if threads == 1 or len(shifts) < 2:
        plan = ShiftPlan(
            shifts=tuple(shifts), subspace_dim=subspace, tol=tol, seed=seed
        )
        return arnoldi_shift_invert(op, plan, keep_vectors=keep_vectors)
    chunks = [list(shifts[i::threads]) for i in range(threads)]
    chunks = [c for c in chunks if c]
    results = []
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futs = [
            pool.submit(
                arnoldi_shift_invert,
                op,
                ShiftPlan(
                    shifts=tuple(c), subspace_dim=subspace, tol=tol, seed=seed
                ),
                keep_vectors,
            )
            for c in chunks
        ]
        for f in futs:
            results.extend(f.result())
    return merge_pairs(results)


# ---------------------------------------------------------------- commands


def cmd_wedges(args, cfg):
    eps = float(args.eps)
    g = wedge_geometry(eps)
    data = {
        "eps": eps,
        "radians": {
            "right_center": g.right_center,
            "right_upper": g.right_upper,
            "right_lower": g.right_lower,
            "left_center": g.left_center,
            "left_upper": g.left_upper,
            "left_lower": g.left_lower,
            "opening": g.opening,
        },
        "degrees": {
            "right_center": math.degrees(g.right_center),
            "right_upper": math.degrees(g.right_upper),
            "right_lower": math.degrees(g.right_lower),
            "left_center": math.degrees(g.left_center),
            "left_upper": math.degrees(g.left_upper),
            "left_lower": math.degrees(g.left_lower),
            "opening": math.degrees(g.opening),
        },
    }
    _emit(args, output.json_text(data))
    return 0


def _classify_tags(op, op_half, pairs, seed):
    tags = []
    for p in pairs:
        if p.vector is None:
            tags.append(SpectrumTag.UNRESOLVED)
            continue
        rep = classify_mod.classify(op, op_half, p, seed=seed)
        tags.append(rep.verdict)
    return tags


def cmd_solve(args, cfg):
    eps = float(args.eps)
    n = int(_resolve(args, cfg, "n", int))
    eta = float(_resolve(args, cfg, "eta"))
    subspace = int(_resolve(args, cfg, "subspace", int))
    tol = float(_resolve(args, cfg, "tol"))
    seed = int(_resolve(args, cfg, "seed", int))
    threads = int(_resolve(args, cfg, "threads", int))
    region = tuple(args.rectangle)
    op = build_operator(eps, n, eta, branch=args.branch)
    shifts = shift_lattice(region, n_re=args.shifts, n_im=args.shifts, seed=seed)
    if not shifts:
        print("error: empty shift rectangle", file=sys.stderr)
        return USAGE_ERROR
    pairs = _scan(op, shifts, subspace, tol, seed, threads)
    re0, re1, im0, im1 = region
    pairs = [
        p
        for p in pairs
        if re0 <= p.value.real <= re1 and im0 <= p.value.imag <= im1
    ]
    if not pairs:
        print("error: no eigenvalues converged in the rectangle", file=sys.stderr)
        return NUMERICAL_ERROR
    if args.classify:
        op_half = build_operator(eps, n, eta / 2.0, branch=args.branch)
        tags = _classify_tags(op, op_half, pairs, seed)
    else:
        tags = [p.tag for p in pairs]
    rows = [
        (p.value.real, p.value.imag, p.residual, t.value)
        for p, t in zip(pairs, tags)
    ]
    comments = [f"solve eps={eps} n={n} eta={eta} seed={seed} branch={op.branch}"]
    lines = [output.CSV_HEADER] + [f"# {c}" for c in comments]
    lines.append("re_E,im_E,residual,tag")
    for r in rows:
        lines.append(",".join(output.fmt(x) for x in r))
    _emit(args, "\n".join(lines))
    return 0


def cmd_shoot(args, cfg):
    eps = float(args.eps)
    steps = int(_resolve(args, cfg, "steps", int))
    if args.count:
        c = shooting.count_real_eigenvalues(eps, args.emax, steps=steps)
        _emit(args, output.json_text({"eps": eps, "energy_max": args.emax, "count": c}))
        return 0
    guess = complex(args.guess_re, args.guess_im)
    e = shooting.find_eigenvalue(eps, guess, steps=steps)
    _emit(
        args,
        output.json_text(
            {"eps": eps, "guess": guess, "eigenvalue": e, "steps": steps}
        ),
    )
    return 0


def _sweep_csv(args, result):
    lines = [output.CSV_HEADER, "# trajectories in long format"]
    for eps_star, e_star in result.merges:
        lines.append(f"# merge eps={output.fmt(eps_star)} E={output.fmt(e_star)}")
    for flag in result.flags:
        lines.append(f"# flag {flag}")
    lines.append("label,eps_re,eps_im,re_E,im_E")
    for tr in result.trajectories:
        for eps, v in zip(result.eps_grid, tr.values):
            if v is None:
                continue
            eps = complex(eps)
            lines.append(
                ",".join(
                    output.fmt(x)
                    for x in (tr.label, eps.real, eps.imag, v.real, v.imag)
                )
            )
    _emit(args, "\n".join(lines))


def cmd_sweep(args, cfg):
    seed = int(_resolve(args, cfg, "seed", int))
    config = SolverConfig(
        n_interior=int(_resolve(args, cfg, "n", int)),
        eta=float(_resolve(args, cfg, "eta")),
        subspace_dim=int(_resolve(args, cfg, "subspace", int)),
        tol=float(_resolve(args, cfg, "tol")),
        ray_steps=int(_resolve(args, cfg, "steps", int)),
        seed=seed,
    )
    result = sweep_mod.sweep_real(args.start, args.end, args.step, config)
    if args.merges:
        real_trs = [
            tr
            for tr in result.trajectories
            if any(v is not None and abs(v.imag) < 1e-6 for v in tr.values)
        ]
        for i in range(len(real_trs)):
            for j in range(i + 1, len(real_trs)):
                try:
                    m = sweep_mod.detect_merge(
                        real_trs[i], real_trs[j], result.eps_grid, config
                    )
                except DomainError:
                    continue
                if all(abs(m[0] - prev[0]) > 1e-4 for prev in result.merges):
                    result.merges.append(m)
    _sweep_csv(args, result)
    return 0


def cmd_circle(args, cfg):
    seed = int(_resolve(args, cfg, "seed", int))
    config = SolverConfig(
        n_interior=int(_resolve(args, cfg, "n", int)),
        eta=float(_resolve(args, cfg, "eta")),
        subspace_dim=int(_resolve(args, cfg, "subspace", int)),
        tol=float(_resolve(args, cfg, "tol")),
        seed=seed,
    )
    result = sweep_mod.sweep_circle(
        complex(args.center), args.radius, args.points, config
    )
    _sweep_csv(args, result)
    if result.monodromy is not None:
        sys.stderr.write(
            output.json_text({"monodromy": result.monodromy}) + "\n"
        )
    return 0


def cmd_classify(args, cfg):
    eps = float(args.eps)
    n = int(_resolve(args, cfg, "n", int))
    eta = float(_resolve(args, cfg, "eta"))
    seed = int(_resolve(args, cfg, "seed", int))
    threads = int(_resolve(args, cfg, "threads", int))
    subspace = int(_resolve(args, cfg, "subspace", int))
    tol = float(_resolve(args, cfg, "tol"))
    op = build_operator(eps, n, eta, branch=args.branch)
    op_half = build_operator(eps, n, eta / 2.0, branch=args.branch)
    region = tuple(args.rectangle)
    shifts = shift_lattice(region, n_re=args.shifts, n_im=args.shifts, seed=seed)
    pairs = _scan(op, shifts, subspace, tol, seed, threads)
    re0, re1, im0, im1 = region
    pairs = [
        p for p in pairs if re0 <= p.value.real <= re1 and im0 <= p.value.imag <= im1
    ]
    if not pairs:
        print("error: no eigenvalues found", file=sys.stderr)
        return NUMERICAL_ERROR
    reports = []
    for p in pairs:
        rep = classify_mod.classify(op, op_half, p, seed=seed)
        reports.append(
            {
                "eigenvalue": rep.eig,
                "verdict": rep.verdict.value,
                "drift": rep.drift,
                "left_decay": rep.left_decay.value,
                "right_decay": rep.right_decay.value,
                "residual": p.residual,
            }
        )
    _emit(args, output.json_text({"eps": eps, "n": n, "eta": eta, "reports": reports}))
    return 0


def cmd_asympt(args, cfg):
    seed = int(_resolve(args, cfg, "seed", int))
    delta = float(args.delta)
    rows = _parse_rows(args.rows)
    if args.near == "-2":
        eps = -2.0 + delta
        n = int(args.n) if args.n is not None else 80000
        eta = float(args.eta) if args.eta is not None else 1.2e-3
        op = build_operator(eps, n, eta)
        preds = {r: reference_row_prediction(r, delta) for r in rows}
        shifts = [preds[r] for r in rows]
        pairs = _scan(op, shifts, 60, 1e-9, seed, 1, keep_vectors=False)
        if not pairs:
            print("error: no eigenvalues converged", file=sys.stderr)
            return NUMERICAL_ERROR
        table = []
        for r in rows:
            num = min(pairs, key=lambda p: abs(p.value - preds[r])).value
            pred = preds[r]
            rel_re = abs(pred.real - num.real) / abs(num.real)
            rel_im = abs(abs(pred.imag) - abs(num.imag)) / abs(num.imag)
            table.append(
                (r, num.real, pred.real, 100 * rel_re, abs(num.imag), abs(pred.imag), 100 * rel_im)
            )
        lines = [output.CSV_HEADER, f"# asympt near -2, delta={delta} n={n} eta={eta}"]
        lines.append("k,re_numeric,re_estimate,re_rel_err_pct,im_numeric,im_estimate,im_rel_err_pct")
        for row in table:
            lines.append(",".join(output.fmt(x) for x in row))
        _emit(args, "\n".join(lines))
        return 0
    # near -1: second-order estimates vs shooting
    eps = -1.0 + delta
    table = []
    for nbr in rows:
        est = near_m1(delta, nbr)
        num = shooting.find_eigenvalue(eps, complex(est.re_E, est.im_E))
        rel = abs(complex(est.re_E, est.im_E) - num) / abs(num)
        table.append((nbr, num.real, num.imag, est.re_E, est.im_E, 100 * rel))
    lines = [output.CSV_HEADER, f"# asympt near -1, delta={delta}"]
    lines.append("n,re_numeric,im_numeric,re_estimate,im_estimate,rel_err_pct")
    for row in table:
        lines.append(",".join(output.fmt(x) for x in row))
    _emit(args, "\n".join(lines))
    return 0


def _parse_rows(spec: str):
    out = []
    for part in spec.split(","):
        part = part.strip()
        if ".." in part:
            a, b = part.split("..")
            out.extend(range(int(a), int(b) + 1, 2))
        elif part:
            out.append(int(part))
    return out


def cmd_plot(args, cfg):
    y_cols = [c.strip() for c in args.y.split(",") if c.strip()]
    if args.out is None:
        print("error: plot requires --out", file=sys.stderr)
        return USAGE_ERROR
    svgplot.plot_csv(
        args.csv, args.out, x_col=args.x, y_cols=y_cols, kind=args.kind, title=args.title
    )
    return 0


# ---------------------------------------------------------------- wiring


def _build_parser():
    p = _Parser(prog="ptspec", description=__doc__)
    p.add_argument("--out", help="write output to this path instead of stdout")
    p.add_argument("--seed", type=int, help="random seed for shift jitter")
    p.add_argument("--threads", type=int, help="parallel solver threads")
    p.add_argument("--config", help="flat key=value config file")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("wedges", help="Stokes-wedge geometry for real eps")
    q.add_argument("--eps", type=float, required=True)
    q.set_defaults(func=cmd_wedges)

    q = sub.add_parser("solve", help="winding-contour spectrum in a rectangle")
    q.add_argument("--eps", type=float, required=True)
    q.add_argument("--n", type=int)
    q.add_argument("--eta", type=float)
    q.add_argument("--subspace", type=int)
    q.add_argument("--tol", type=float)
    q.add_argument("--shifts", type=int, default=8, help="shift lattice size per axis")
    q.add_argument(
        "--rectangle",
        type=float,
        nargs=4,
        metavar=("RE0", "RE1", "IM0", "IM1"),
        default=(-3.0, 1.0, -5.0, 5.0),
    )
    q.add_argument("--branch", choices=("principal", "continued"), default="principal")
    q.add_argument("--classify", action="store_true", help="tag discrete/continuous")
    q.set_defaults(func=cmd_solve)

    q = sub.add_parser("shoot", help="sheet-0 shooting (eigenvalue or count)")
    q.add_argument("--eps", type=float, required=True)
    q.add_argument("--guess-re", type=float, default=1.0)
    q.add_argument("--guess-im", type=float, default=0.0)
    q.add_argument("--steps", type=int)
    q.add_argument("--count", action="store_true", help="count real eigenvalues")
    q.add_argument("--emax", type=float, default=30.0)
    q.set_defaults(func=cmd_shoot)

    q = sub.add_parser("sweep", help="real-eps eigenvalue trajectories")
    q.add_argument("--from", dest="start", type=float, required=True)
    q.add_argument("--to", dest="end", type=float, required=True)
    q.add_argument("--step", type=float, default=0.01)
    q.add_argument("--n", type=int)
    q.add_argument("--eta", type=float)
    q.add_argument("--subspace", type=int)
    q.add_argument("--tol", type=float)
    q.add_argument("--steps", type=int)
    q.add_argument("--merges", action="store_true", help="detect pairwise merges")
    q.set_defaults(func=cmd_sweep)

    q = sub.add_parser("circle", help="loop around the eps=-1 exceptional point")
    q.add_argument("--center", type=float, default=-1.0)
    q.add_argument("--radius", type=float, default=0.05)
    q.add_argument("--points", type=int, default=64)
    q.add_argument("--n", type=int)
    q.add_argument("--eta", type=float)
    q.add_argument("--subspace", type=int)
    q.add_argument("--tol", type=float)
    q.set_defaults(func=cmd_circle)

    q = sub.add_parser("classify", help="discrete/continuous verdicts in a rectangle")
    q.add_argument("--eps", type=float, required=True)
    q.add_argument("--n", type=int)
    q.add_argument("--eta", type=float)
    q.add_argument("--subspace", type=int)
    q.add_argument("--tol", type=float)
    q.add_argument("--shifts", type=int, default=6)
    q.add_argument(
        "--rectangle",
        type=float,
        nargs=4,
        metavar=("RE0", "RE1", "IM0", "IM1"),
        default=(-3.0, 1.0, -5.0, 5.0),
    )
    q.add_argument("--branch", choices=("principal", "continued"), default="principal")
    q.set_defaults(func=cmd_classify)

    q = sub.add_parser("asympt", help="asymptotic estimates vs numerics")
    q.add_argument("--near", choices=("-1", "-2"), default="-2")
    q.add_argument("--delta", type=float, required=True)
    q.add_argument("--rows", default="0..12", help="row labels, e.g. 0..12 or 0,2,4")
    q.add_argument("--n", type=int)
    q.add_argument("--eta", type=float)
    q.set_defaults(func=cmd_asympt)

    q = sub.add_parser("plot", help="SVG from a ptspec CSV")
    q.add_argument("csv")
    q.add_argument("--x", required=True)
    q.add_argument("--y", required=True, help="comma-separated y columns")
    q.add_argument("--kind", choices=("line", "scatter"), default="line")
    q.add_argument("--title", default="")
    q.set_defaults(func=cmd_plot)
    return p


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _load_config(args.config) if args.config else {}
    except (OSError, ValueError) as err:
        print(f"error: config: {err}", file=sys.stderr)
        return IO_ERROR
    try:
        return args.func(args, cfg)
    except (DomainError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return USAGE_ERROR
    except (
        ConvergenceError,
        QRConvergenceError,
        SingularPivotError,
        EtaOverflowError,
        ArithmeticError,
    ) as err:
        print(f"error: {err}", file=sys.stderr)
        return NUMERICAL_ERROR
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return IO_ERROR


if __name__ == "__main__":
    sys.exit(main())
