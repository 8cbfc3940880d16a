"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Numerical settings (grid sizes, truncations, shift placements) were frozen
after convergence studies; seeds are fixed, so every run is reproducible.
"""

import time

import numpy as np
import pytest

import ptspec
from ptspec import (
    DecayKind,
    ShiftPlan,
    SolverConfig,
    SpectrumTag,
    arnoldi_shift_invert,
    build_operator,
    classify,
    count_real_eigenvalues,
    find_eigenvalue,
    find_transition,
    hessenberg_char_poly,
    hessenberg_eig,
    near_m1,
    spectrum_scan,
    sweep_circle,
)
from ptspec.asymptotics import reference_row_prediction

# ------------------------------------------------------------------ tables
# reference eigenvalue tables at delta = 0.01 (eps = -1.99): row label ->
# (numerical Re, numerical Im, estimate Re, estimate Im, Re rel-err %, Im rel-err %)
TABLE_12 = {
    0: (-1.0352, 0.03397, -1.0414, 0.03210, 8.70, 5.3),
    2: (-1.0426, 0.03352, -1.0461, 0.03220, 0.33, 3.8),
    4: (-1.0469, 0.03339, -1.0493, 0.03224, 0.30, 3.4),
    6: (-1.0499, 0.03334, -1.0518, 0.03226, 0.18, 3.2),
    8: (-1.0523, 0.03332, -1.0538, 0.03228, 0.15, 3.1),
    10: (-1.0542, 0.03332, -1.0555, 0.03229, 0.12, 3.0),
    12: (-1.0559, 0.03333, -1.0569, 0.03231, 0.10, 3.0),
}

# first three real eigenvalues at eps = -4 + delta, with per-delta grid
TABLE_3 = {
    0.15: ((0.173, 0.440, 0.807), 30000, 2e-3),
    0.12: ((0.114, 0.321, 0.628), 30000, 2e-3),
    0.08: ((0.080, 0.230, 0.454), 40000, 2e-3),
    0.06: ((0.060, 0.177, 0.351), 40000, 1.5e-3),
    0.04: ((0.035, 0.116, 0.236), 60000, 1.5e-3),
    0.02: ((0.012, 0.049, 0.106), 120000, 1.2e-3),
}


def _report(name: str, ok: bool, detail: str = ""):
    tag = "PASS" if ok else "FAIL"
    print(f"[{tag}] {name}" + (f"  ({detail})" if detail else ""))
    assert ok, f"{name}: {detail}"


# ---------------------------------------------------------------- fixtures


@pytest.fixture(scope="module")
def table12_numeric():
    """Numerical spectrum for the delta=0.01 tables: row -> eigenvalue."""
    t0 = time.time()
    op = build_operator(-1.99, 80000, 1.2e-3)
    shifts = tuple(
        complex(re + 1e-5, im - 1e-5) for re, im, *_ in TABLE_12.values()
    )
    plan = ShiftPlan(shifts=shifts, subspace_dim=60, tol=1e-9, n_wanted=4)
    pairs = arnoldi_shift_invert(op, plan, keep_vectors=False)
    out = {}
    for row, (re, im, *_) in TABLE_12.items():
        out[row] = min(pairs, key=lambda p: abs(p.value - complex(re, im))).value
    out["elapsed"] = time.time() - t0
    return out


@pytest.fixture(scope="module")
def eps26_scan():
    """eps=-2.6 spectrum at eta=0.01 with the eta/2 companion operator."""
    op = build_operator(-2.6, 24000, 0.01)
    op_half = build_operator(-2.6, 24000, 0.005)
    pairs = spectrum_scan(
        op,
        (-3.0, 1.0, -5.0, 5.0),
        n_re=6,
        n_im=6,
        subspace_dim=60,
        tol=1e-8,
        extra_shifts=[
            complex(-2.0, 4.0),
            complex(-2.0, -4.0),
            complex(-0.01, 0.18),
            complex(-0.01, -0.18),
        ],
    )
    return op, op_half, pairs


# --------------------------------------------------------------- criteria


def test_criterion_01_harmonic_anchor():
    t0 = time.time()
    ok = True
    detail = []
    for k in range(5):
        e = find_eigenvalue(0.0, 2 * k + 1.2)
        if abs(e - (2 * k + 1)) > 1e-6:
            ok = False
            detail.append(f"shooting level {k}: {e}")
    op = build_operator(0.0, 4000, 1e-3)
    plan = ShiftPlan(
        shifts=(1.05 + 0.02j, 3.1 - 0.01j, 5.02 + 0j, 7.1 + 0j, 9.05 + 0j),
        subspace_dim=40,
        tol=1e-9,
        n_wanted=2,
    )
    pairs = arnoldi_shift_invert(op, plan, keep_vectors=False)
    for k in range(5):
        target = 2 * k + 1
        best = min(pairs, key=lambda p: abs(p.value - target))
        if abs(best.value - target) > 2e-3:
            ok = False
            detail.append(f"contour level {k}: {best.value}")
    elapsed = time.time() - t0
    ok = ok and elapsed <= 30.0
    _report(
        "criterion 1: eps=0 levels 1,3,5,7,9 (shooting 1e-6, contour 2e-3)",
        ok,
        f"{elapsed:.1f}s" + "; ".join(detail),
    )


def test_criterion_02_table_real_parts(table12_numeric):
    errs = {
        row: abs(table12_numeric[row].real - vals[0])
        for row, vals in TABLE_12.items()
    }
    ok = all(e <= 2e-3 for e in errs.values())
    ok = ok and table12_numeric["elapsed"] <= 300.0
    _report(
        "criterion 2: table Re E_k at delta=0.01 within 2e-3",
        ok,
        f"max |dRe|={max(errs.values()):.2e}, {table12_numeric['elapsed']:.0f}s",
    )


def test_criterion_03_table_imaginary_parts(table12_numeric):
    errs = {
        row: abs(table12_numeric[row].imag - vals[1])
        for row, vals in TABLE_12.items()
    }
    ok = all(e <= 5e-4 for e in errs.values())
    _report(
        "criterion 3: table Im E_k at delta=0.01 within 5e-4",
        ok,
        f"max |dIm|={max(errs.values()):.2e}",
    )


def test_criterion_04_second_order_formula(table12_numeric):
    """Closed-form estimates reproduce the printed reference columns.

    The printed estimates are truncated to 4-5 decimals, so one unit in the
    fourth decimal (1e-4) is the match tolerance.  The relative-error
    columns must agree within 0.5 percentage points; the row-0 entry of the
    Re column does not follow the |est-num|/|num| convention of every other
    entry in the reference table, so for that single cell the documented
    upper bound (<= 9%) is asserted instead.
    """
    ok = True
    detail = []
    for row, (num_re, num_im, est_re, est_im, rel_re, rel_im) in TABLE_12.items():
        pred = reference_row_prediction(row, 0.01)
        if abs(pred.real - est_re) > 1e-4 or abs(pred.imag - est_im) > 1e-4:
            ok = False
            detail.append(f"row {row} estimate {pred:.6f} vs ({est_re},{est_im})")
        num = table12_numeric[row]
        my_rel_re = 100.0 * abs(pred.real - num.real) / abs(num.real)
        my_rel_im = 100.0 * abs(pred.imag - num.imag) / abs(num.imag)
        if row == 0:
            if my_rel_re > 9.0:
                ok = False
                detail.append(f"row 0 Re rel err {my_rel_re:.2f}% > 9%")
        elif abs(my_rel_re - rel_re) > 0.5:
            ok = False
            detail.append(f"row {row} Re rel err {my_rel_re:.2f}% vs {rel_re}%")
        if abs(my_rel_im - rel_im) > 0.5:
            ok = False
            detail.append(f"row {row} Im rel err {my_rel_im:.2f}% vs {rel_im}%")
    # spot anchors, as printed (truncated)
    p0 = reference_row_prediction(0, 0.01)
    p12 = reference_row_prediction(12, 0.01)
    if abs(p0 - complex(-1.0414, 0.03210)) > 1.2e-4:
        ok = False
        detail.append(f"anchor row 0: {p0:.6f}")
    if abs(p12 - complex(-1.0569, 0.03231)) > 1.2e-4:
        ok = False
        detail.append(f"anchor row 12: {p12:.6f}")
    _report("criterion 4: second-order estimates match printed columns", ok, "; ".join(detail))


def test_criterion_05_eps26_spectrum(eps26_scan):
    t0 = time.time()
    op, op_half, pairs = eps26_scan
    ok = True
    detail = []
    for tgt, tol, want in (
        (complex(-1.79, 4.31), 0.05, SpectrumTag.DISCRETE),
        (complex(-1.79, -4.31), 0.05, SpectrumTag.DISCRETE),
        (complex(-0.01, 0.18), 0.03, SpectrumTag.CONTINUOUS),
        (complex(-0.01, -0.18), 0.03, SpectrumTag.CONTINUOUS),
    ):
        best = min(pairs, key=lambda p: abs(p.value - tgt))
        dist = abs(best.value - tgt)
        if dist > tol:
            ok = False
            detail.append(f"{tgt}: nearest {best.value:.4f} at {dist:.3f}")
            continue
        verdict = classify(op, op_half, best).verdict
        if verdict is not want:
            ok = False
            detail.append(f"{tgt}: verdict {verdict.value}")
    elapsed = time.time() - t0
    _report(
        "criterion 5: eps=-2.6 discrete -1.79+/-4.31i, continuum -0.01+/-0.18i",
        ok and elapsed <= 300.0,
        f"{elapsed:.0f}s " + "; ".join(detail),
    )


def test_criterion_06_below_coulomb():
    ok = True
    detail = []
    # eps=-3.8: real discrete eigenvalue with a symmetric eigenfunction
    op = build_operator(-3.8, 100000, 0.01)
    op_half = build_operator(-3.8, 100000, 0.005)
    plan = ShiftPlan(shifts=(complex(0.08, 0.005),), subspace_dim=50, tol=1e-9, n_wanted=2)
    pairs = arnoldi_shift_invert(op, plan)
    best = min(pairs, key=lambda p: abs(p.value - 0.0804))
    if abs(best.value - 0.0804) > 5e-3:
        ok = False
        detail.append(f"eigenvalue {best.value:.5f}")
    rep = classify(op, op_half, best)
    if rep.verdict is not SpectrumTag.DISCRETE:
        ok = False
        detail.append(f"verdict {rep.verdict.value}")
    v = np.abs(best.vector)
    asym = float(np.linalg.norm(v - v[::-1]) / np.linalg.norm(v))
    if asym > 1e-3:
        ok = False
        detail.append(f"asymmetry {asym:.2e}")
    # eps=-3 (Coulomb): nothing classifies as discrete
    op3 = build_operator(-3.0, 40000, 0.01)
    op3_half = build_operator(-3.0, 40000, 0.005)
    pairs3 = spectrum_scan(
        op3, (-1.5, 0.75, -1.5, 1.5), n_re=5, n_im=5, subspace_dim=50, tol=1e-8
    )
    if not pairs3:
        ok = False
        detail.append("no eigenvalues found at eps=-3")
    n_disc = 0
    for p in pairs3:
        if classify(op3, op3_half, p).verdict is SpectrumTag.DISCRETE:
            n_disc += 1
    if n_disc:
        ok = False
        detail.append(f"{n_disc} discrete verdicts at eps=-3")
    _report(
        "criterion 6: eps=-3.8 real discrete 0.0804 symmetric; eps=-3 none discrete",
        ok,
        "; ".join(detail) or f"E={best.value.real:.5f}, asym={asym:.1e}, {len(pairs3)} continuum at -3",
    )


def test_criterion_07_conformal_table():
    ok = True
    detail = []
    mine = {}
    for delta, (targets, n, eta) in TABLE_3.items():
        op = build_operator(-4.0 + delta, n, eta)
        plan = ShiftPlan(
            shifts=tuple(complex(t, 0.002) for t in targets),
            subspace_dim=50,
            tol=1e-9,
            n_wanted=2,
        )
        pairs = arnoldi_shift_invert(op, plan, keep_vectors=False)
        reals = [
            p.value for p in pairs if abs(p.value.imag) <= 1e-4 * (1 + abs(p.value))
        ]
        row = []
        for t in targets:
            if not reals:
                ok = False
                detail.append(f"delta={delta}: no real eigenvalues")
                row.append(np.nan)
                continue
            best = min(reals, key=lambda z: abs(z - t))
            row.append(best.real)
            if abs(best.real - t) > 5e-3:
                ok = False
                detail.append(f"delta={delta} target {t}: got {best.real:.5f}")
        mine[delta] = row
    # linear vanishing: fit over the four smallest delta (the asymptotic
    # range; the delta >= 0.12 points carry visible curvature)
    for level in range(3):
        pts = [(d, mine[d][level]) for d in (0.02, 0.04, 0.06, 0.08)]
        slope, intercept, r2 = ptspec.conformal_fit(pts)
        if abs(intercept) > 0.01:
            ok = False
            detail.append(f"level {level}: intercept {intercept:.4f}")
    _report(
        "criterion 7: conformal-limit table within 5e-3; linear fits through 0",
        ok,
        "; ".join(detail),
    )


def test_criterion_08_exceptional_point():
    t0 = time.time()
    star = find_transition(-0.7, -0.5)
    ok = abs(star - (-0.57793)) <= 1e-3
    # stability under halving the integration step
    star_coarse = find_transition(-0.7, -0.5, steps=4000)
    stable = abs(star - star_coarse) <= 1e-4
    elapsed = time.time() - t0
    _report(
        "criterion 8: last real-pair merge at eps* = -0.57793 +/- 1e-3",
        ok and stable and elapsed <= 600.0,
        f"eps*={star:.6f}, |d eps*|={abs(star - star_coarse):.1e}, {elapsed:.0f}s",
    )


def test_criterion_09_near_field_below_minus_two():
    ok = True
    detail = []
    cases = (
        (-2.0001, 30000, 2e-3, 5e-4),
        (-2.001, 30000, 0.01, 8e-3),
    )
    for eps, n, eta, target in cases:
        op = build_operator(eps, n, eta)
        radius = target
        shifts = tuple(
            complex(-1.0 + radius * np.cos(a), radius * np.sin(a))
            for a in np.linspace(0.2, 2.9, 7)
        )
        plan = ShiftPlan(shifts=shifts, subspace_dim=50, tol=1e-8, n_wanted=6)
        pairs = arnoldi_shift_invert(op, plan, keep_vectors=False)
        if not pairs:
            ok = False
            detail.append(f"eps={eps}: nothing found")
            continue
        nearest = min(abs(p.value + 1.0) for p in pairs)
        if not 0.5 * target <= nearest <= 1.5 * target:
            ok = False
        detail.append(f"eps={eps}: {nearest:.2e} vs {target:.0e}")
    _report(
        "criterion 9: distance from -1 to the nearest eigenvalue (+/-50%)",
        ok,
        "; ".join(detail),
    )


def test_criterion_10a_conjugate_closure(eps26_scan):
    _, _, pairs = eps26_scan
    vals = [p.value for p in pairs]
    ok = True
    worst = 0.0
    for v in vals:
        if v.imag > 1e-6:
            d = min(abs(v.conjugate() - w) for w in vals)
            worst = max(worst, d / (1.0 + abs(v)))
            if d > 1e-6 * (1.0 + abs(v)):
                ok = False
    _report(
        "criterion 10a: real-eps spectra closed under conjugation",
        ok,
        f"worst relative defect {worst:.1e}",
    )


def test_criterion_10b_dense_qr_equivalence():
    n = 400
    op = build_operator(-2.6, n, 0.05)
    M = np.diag(op.diag) + np.diag(op.sub, -1) + np.diag(op.sup, 1)
    dense = hessenberg_eig(M)
    region = (-1.0, 0.5, -1.0, 1.0)
    inside = [
        z
        for z in dense
        if region[0] <= z.real <= region[1] and region[2] <= z.imag <= region[3]
    ]
    pairs = spectrum_scan(op, region, n_re=6, n_im=6, subspace_dim=60, tol=1e-10)
    found = [p.value for p in pairs]
    worst = max(min(abs(z - f) for f in found) for z in inside)
    ok = bool(inside) and worst <= 1e-6
    _report(
        "criterion 10b: scan vs dense Hessenberg-QR within 1e-6 (n=400)",
        ok,
        f"{len(inside)} dense eigenvalues, worst match {worst:.1e}",
    )


def test_criterion_10c_char_poly_oracle(rng):
    worst = 0.0
    for m in (6, 20, 60):
        H = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
        H = np.triu(H, -1)
        norm = np.linalg.norm(H)
        for r in hessenberg_eig(H):
            worst = max(worst, abs(hessenberg_char_poly(H, r)) / norm**m)
    ok = worst <= 1e-8
    _report("criterion 10c: QR roots annihilate the Hessenberg char poly", ok, f"worst {worst:.1e}")


def test_criterion_10d_second_order_convergence():
    errs = []
    for n in (1000, 2000, 4000):
        op = build_operator(0.0, n, 1e-3)
        plan = ShiftPlan(shifts=(1.02 + 0.01j,), subspace_dim=30, tol=1e-10, n_wanted=1)
        pairs = arnoldi_shift_invert(op, plan, keep_vectors=False)
        best = min(pairs, key=lambda p: abs(p.value - 1.0))
        errs.append(abs(best.value - 1.0))
    slopes = [np.log2(errs[i] / errs[i + 1]) for i in range(2)]
    ok = all(1.7 <= s <= 2.3 for s in slopes)
    _report(
        "criterion 10d: grid-refinement slope 2 +/- 0.3",
        ok,
        f"slopes {[f'{s:.2f}' for s in slopes]}",
    )


def test_criterion_10e_log_divergence_scaling():
    ok = True
    detail = []
    res = []
    for delta in (0.05, 0.02, 0.01):
        guess = near_m1(delta, 0).re_E
        e = find_eigenvalue(-1.0 + delta, complex(guess))
        res.append((delta, e.real))
    x = np.log([-np.log(d) for d, _ in res])
    y = np.log([v for _, v in res])
    slope = float(np.polyfit(x, y, 1)[0])
    if not 2.0 / 3.0 - 0.1 <= slope <= 2.0 / 3.0 + 0.1:
        ok = False
        detail.append(f"exponent {slope:.3f}")
    # successive Im spacings ~ pi/(2 sqrt(Re E)) per unit branch index
    e2 = find_eigenvalue(-0.99, complex(near_m1(0.01, 2).re_E, near_m1(0.01, 2).im_E))
    e4 = find_eigenvalue(-0.99, complex(near_m1(0.01, 4).re_E, near_m1(0.01, 4).im_E))
    spacing = (e4.imag - e2.imag) / 2.0
    expected = np.pi / (2.0 * np.sqrt(0.5 * (e2.real + e4.real)))
    if abs(spacing - expected) > 0.15 * expected:
        ok = False
        detail.append(f"spacing {spacing:.4f} vs {expected:.4f}")
    _report(
        "criterion 10e: Re E ~ (-(3/4) ln d)^(2/3) and Im spacing pi/(2 sqrt(Re E))",
        ok,
        "; ".join(detail) or f"exponent {slope:.3f}",
    )


def test_criterion_10f_monodromy_loop():
    cfg = SolverConfig(n_interior=4000, eta=0.024, subspace_dim=40)
    fwd = sweep_circle(-1.0, 0.05, 64, cfg, direction=+1)
    bwd = sweep_circle(-1.0, 0.05, 64, cfg, direction=-1)
    full = [tr for tr in fwd.trajectories if all(v is not None for v in tr.values)]
    ok = len(full) >= 4
    detail = []
    if not ok:
        detail.append(f"only {len(full)} complete forward trajectories")
    moved = sum(1 for tr in full if fwd.monodromy.get(tr.label) != tr.label)
    if moved == 0:
        ok = False
        detail.append("monodromy is trivial")
    # composing the loop with its reverse must return every start value:
    # follow a forward trajectory to its end, pick the backward trajectory
    # launched there, and check it lands back on the forward start
    bwd_full = [tr for tr in bwd.trajectories if all(v is not None for v in tr.values)]
    n_checked = 0
    for tr in full:
        start, end = tr.values[0], tr.values[-1]
        cands = [b for b in bwd_full if abs(b.values[0] - end) <= 0.05 * (1 + abs(end))]
        if not cands:
            continue
        back = min(cands, key=lambda b: abs(b.values[0] - end))
        n_checked += 1
        if abs(back.values[-1] - start) > 0.05 * (1 + abs(start)):
            ok = False
            detail.append(
                f"loop+inverse moved {start:.3f} to {back.values[-1]:.3f}"
            )
    if n_checked < 3:
        ok = False
        detail.append(f"only {n_checked} round trips checked")
    _report(
        "criterion 10f: eps=-1 circle monodromy nontrivial, loop+inverse=identity",
        ok,
        "; ".join(detail) or f"{moved}/{len(full)} trajectories shift; {n_checked} round trips",
    )
