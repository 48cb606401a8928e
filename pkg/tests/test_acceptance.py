"""Acceptance criteria 1-10, each at its stated tolerance.

Every test records a PASS/FAIL line that conftest prints in the terminal
summary.  Criteria 4, 5 and 10 are expected to fail; see the notes they print.
"""

import json
import subprocess
import sys
import time
import xml.etree.ElementTree as ET

import numpy as np
import pytest

import oracles
from iwturb import (
    Branch,
    CurvePoint,
    NonConvergent,
    QuadratureConfig,
    SpectralExponents,
    Status,
    Wavenumber,
    builtin_observations,
    evaluate_I,
    in_kinematic_box,
    integrand,
    solve_vertical,
    trace_curve,
)
from iwturb.cli import main
from iwturb.collision import branch_terms, expected_scaling
from iwturb.figure import curve_y_at, proximity
from iwturb.formats import parse_csv

pytestmark = pytest.mark.acceptance
P = Wavenumber(1.0, 1.0)


def cli_json(*argv):
    t0 = time.perf_counter()
    r = subprocess.run([sys.executable, "-m", "iwturb.cli", *argv], capture_output=True, text=True, check=True)
    return json.loads(r.stdout), time.perf_counter() - t0


def test_01_analytic_zero(record):
    d, wall = cli_json("eval", "--x", "3.5", "--y", "0.5")
    ok = d["status"] == "CONVERGED" and d["normalized_residual"] <= 1e-2 and wall <= 30
    record(1, "analytic zero (3.5, 0.5)", ok, f"{d['status']}, residual {d['normalized_residual']:.2e}, {wall:.1f} s")
    assert ok


def test_02_gm_zero(record):
    d, _ = cli_json("eval", "--x", "4.0", "--y", "0.0")
    ok = d["status"] == "CONVERGED" and d["normalized_residual"] <= 1e-2
    record(
        2,
        "GM zero (4, 0)",
        ok,
        f"{d['status']}, residual {d['normalized_residual']:.2e}",
        [f"I = {d['value']:.4g} against reference {d['reference_scale']:.4g}; the reference grows with depth"],
    )
    assert ok


def test_03_equipartition(record):
    s = SpectralExponents(1.0, -1.0)
    rng = np.random.default_rng(2024)
    worst, n = 0.0, 0
    while n < 1000:
        k, k1, k2 = np.exp(rng.uniform(-3, 3, 3))
        if not in_kinematic_box(k, k1, k2):
            continue
        p = Wavenumber(k, float(np.exp(rng.uniform(-2, 2))))
        scale = max(t.scale for t in branch_terms(s, p, k1, k2))
        worst = max(worst, abs(integrand(s, p, k1, k2)) / scale)
        n += 1
    ok = worst <= 1e-10
    record(3, "equipartition pointwise", ok, f"max |g| / largest term = {worst:.1e} over {n} samples")
    assert ok


def printed_law(s, a, b):
    return a ** (4 + 2 * s.x) * b ** (1 + 2 * s.y)


def test_04_bihomogeneity(record):
    rng = np.random.default_rng(44)
    node_printed, node_fixed = 0.0, 0.0
    n = 0
    while n < 200:
        x, y = rng.uniform(1, 5), rng.uniform(-1.5, 2.5)
        a, b = rng.uniform(0.3, 3, 2)
        k1, k2 = rng.uniform(0.05, 3, 2)
        if not in_kinematic_box(1.0, k1, k2):
            continue
        s = SpectralExponents(x, y)
        base = integrand(s, P, k1, k2)
        # the area element dk1 dk2 contributes a^2
        scaled = a * a * integrand(s, Wavenumber(a, b), a * k1, a * k2)
        node_printed = max(node_printed, abs(scaled / (printed_law(s, a, b) * base) - 1))
        node_fixed = max(node_fixed, abs(scaled / (expected_scaling(s, a, b) * base) - 1))
        n += 1

    # convergent cases at the default config lie on y = 0, 3.6 <= x <= 4.4
    cases = 0
    worst_printed, worst_fixed = 0.0, 0.0
    while cases < 20:
        s = SpectralExponents(float(rng.uniform(3.6, 4.4)), 0.0)
        a, b = rng.uniform(0.5, 2, 2)
        r0 = evaluate_I(s, P)
        r1 = evaluate_I(s, Wavenumber(a, b))
        if r0.status is not Status.CONVERGED or r1.status is not Status.CONVERGED:
            continue
        tol = 5 * (r0.error_estimate / abs(r0.value) + r1.error_estimate / abs(r1.value))
        ratio = r1.value / r0.value
        worst_printed = max(worst_printed, abs(ratio / printed_law(s, a, b) - 1) / tol)
        worst_fixed = max(worst_fixed, abs(ratio / expected_scaling(s, a, b) - 1) / tol)
        cases += 1

    ok = node_printed <= 1e-12 and worst_printed <= 1
    record(
        4,
        "bihomogeneity, law a^(4+2x) b^(1+2y) as printed",
        ok,
        f"node max rel err {node_printed:.2e} (tol 1e-12); integral max dev {worst_printed:.3g} x tolerance over {cases} cases",
        [
            f"law a^(4-2x) b^(1-2y): node max rel err {node_fixed:.1e}, integral max dev {worst_fixed:.1e} x tolerance "
            f"-> {'PASS' if node_fixed <= 1e-12 and worst_fixed <= 1 else 'FAIL'}"
        ],
    )
    assert ok


def test_05_zero_curve_landmarks(record):
    notes = []
    t0 = time.perf_counter()
    try:
        curve = trace_curve(3.2, 4.1, 0.05)
        err = None
    except NonConvergent as exc:
        curve, err = [], exc
    wall = time.perf_counter() - t0

    def judge(c):
        y35, y40 = curve_y_at(c, 3.5), curve_y_at(c, 4.0)
        ys = [p.y for p in sorted(c, key=lambda p: p.x)]
        dec = len(ys) > 1 and all(b < a for a, b in zip(ys, ys[1:]))
        span = bool(c) and min(p.x for p in c) <= 3.2 + 1e-9 and max(p.x for p in c) >= 4.1 - 1e-9
        fit = y35 is not None and y40 is not None and abs(y35 - 0.5) <= 0.02 and abs(y40) <= 0.02
        return fit and dec and span, y35, y40, dec, span

    if err is not None:
        ok, detail = False, f"strict trace raised NonConvergent: {err}"
    else:
        ok, y35, y40, dec, span = judge(curve)
        detail = f"y(3.5) = {y35}, y(4.0) = {y40}, decreasing {dec}, full range {span}, {wall:.0f} s"
        ok = ok and wall <= 900

    reg = trace_curve(3.2, 4.1, 0.05, regularized=True)
    rok, y35, y40, dec, span = judge(reg)
    fmt = lambda v: "n/a" if v is None else f"{v:.4f}"  # noqa: E731
    notes.append(
        f"regularized trace ({len(reg)} points, x in [{min(p.x for p in reg):.2f}, {max(p.x for p in reg):.2f}]): "
        f"y(3.5) = {fmt(y35)}, y(4.0) = {fmt(y40)}, decreasing {dec} -> {'PASS' if rok else 'FAIL'}"
    )
    notes += [f"regularized trace: {d}" for d in reg.diagnostics]
    record(5, "zero-curve landmarks on [3.2, 4.1]", ok, detail, notes)
    assert ok


def test_06_divergence_map(record):
    st = {xy: evaluate_I(SpectralExponents(*xy), P).status for xy in [(1.2, 0.3), (4.5, -0.5), (3.5, 0.5), (4.0, 0.0)]}
    ok = (
        st[(1.2, 0.3)] is Status.DIVERGENT
        and st[(4.5, -0.5)] is Status.DIVERGENT
        and st[(3.5, 0.5)] is not Status.DIVERGENT
        and st[(4.0, 0.0)] is not Status.DIVERGENT
    )
    record(6, "divergence map", ok, ", ".join(f"{k}: {v.value}" for k, v in st.items()))
    assert ok


def test_07_resonance_oracle(record):
    rng = np.random.default_rng(77)
    n, bad, worst = 0, 0, 0.0
    while n < 200:
        k, k1, k2 = np.exp(rng.uniform(-2, 2, 3))
        if not in_kinematic_box(k, k1, k2):
            continue
        m = float(np.exp(rng.uniform(-1.5, 1.5)))
        for br in Branch:
            got = [r[0] for r in solve_vertical(br, k, k1, k2, m)]
            want = sorted(oracles.scan_roots(br.value, k, k1, k2, m))
            if len(got) != len(want):
                bad += 1
                continue
            for g, w in zip(got, want):
                worst = max(worst, abs(g - w) / max(1.0, abs(w)))
        n += 1
    ok = bad == 0 and worst <= 1e-6
    record(7, "resonance roots vs residual scan", ok, f"{n} configs x 3 branches, count mismatches {bad}, max deviation {worst:.1e}")
    assert ok


def test_08_quadrature_oracle(record):
    # a fixed truncation depth: at the default leveled depth the non-steady points diverge
    depth = 6.0
    cfg = QuadratureConfig(cusp_depth=depth, depth_step=0.0, max_levels=4)
    lines, ok = [], True
    for xy in [(3.5, 0.5), (4.0, 0.0), (3.0, 1.0), (3.8, 0.3)]:
        r = evaluate_I(SpectralExponents(*xy), P, cfg)
        v, e = oracles.naive_I(*xy, depth, epsrel=1e-6)
        diff, tol = abs(r.value - v), 3 * (r.error_estimate + e)
        ok &= r.status is Status.CONVERGED and diff <= tol
        lines.append(f"{xy}: {r.value:.6g} vs {v:.6g}, |diff| {diff:.1e} <= {tol:.1e}: {diff <= tol}")
    record(8, "quadrature vs naive nested integrator (depth 6)", ok, "; ".join(lines))
    assert ok


EXPECTED_OBS = {
    "MODE": (3.6, 3.6, 0.65, 0.65),
    "IWEX": (2.0, 2.8, -0.75, -0.75),
    "AIWEX": (3.2, 3.2, 0.95, 0.95),
    "FASINEX": (3.75, 3.75, 0.15, 0.25),
    "PATCHEX": (3.65, 4.0, -0.25, 0.1),
    "SWAPP": (4.0, 4.0, -0.1, -0.1),
    "NATRE": (2.6, 2.6, 2.15, 2.15),
}


def test_09_observation_table(record, capsys):
    assert main(["obs", "--format", "csv"]) == 0
    rows = parse_csv(capsys.readouterr().out)
    got = {r["name"]: (r["x_lo"], r["x_hi"], r["y_lo"], r["y_hi"]) for r in rows}
    ok = got == EXPECTED_OBS and len(rows) == 7
    bad = [k for k in EXPECTED_OBS if got.get(k) != EXPECTED_OBS[k]]
    record(9, "observation table", ok, f"{len(rows)} rows, mismatches: {bad or 'none'}")
    assert ok


def test_10_figure(record, tmp_path, capsys):
    out = tmp_path / "figure.svg"
    t0 = time.perf_counter()
    rc = main(["figure", "--out", str(out)])
    wall = time.perf_counter() - t0
    capsys.readouterr()
    ns = {"s": "http://www.w3.org/2000/svg"}
    root = ET.parse(out).getroot()
    pos = root.findall(".//s:polyline[@class='contour-pos']", ns)
    neg = root.findall(".//s:polyline[@class='contour-neg']", ns)
    zero = root.findall(".//s:polyline[@id='zero-curve']", ns)
    markers = [e for e in root.iter() if "obs-marker" in e.get("class", "")]
    dots = root.findall(".//s:circle[@class='ref-dot']", ns)
    labels = root.findall(".//s:text[@class='ref-label']", ns)
    structure = rc == 0 and pos and neg and len(zero) == 1 and len(markers) == 7 and len(dots) == 3 and len(labels) == 3

    rows = parse_csv(out.with_suffix(".curve.csv").read_text())
    curve = [CurvePoint(r["x"], r["y"], r["normalized_residual"], r["bracket_width"]) for r in rows]
    prox = dict(proximity(curve, builtin_observations()))
    near = {k: v for k, v in prox.items() if k != "NATRE"}
    prox_ok = all(v <= 0.35 for v in near.values()) and prox["NATRE"] > 1.0
    ok = bool(structure) and prox_ok
    record(
        10,
        "figure structure and observation proximity",
        ok,
        f"structure {'ok' if structure else 'BAD'}; " + ", ".join(f"{k} {v:.3g}" for k, v in prox.items()),
        [
            f"{len(pos)} positive and {len(neg)} negative contour lines, {len(markers)} observation marks, "
            f"{len(dots)} reference dots, {wall:.0f} s"
        ],
    )
    assert ok
