"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.

The lines are also repeated in pytest's terminal summary. The parser fuzz
campaign runs for ``HOUSINGFORGE_FUZZ_SECONDS`` seconds (default one hour);
a shorter run is reported as reduced.
"""

from __future__ import annotations

import filecmp
import math
import os
import random
import statistics
import time

import pytest

from housingforge.bolts import (COVERAGE_RADIUS, SpanCalibration, default_calibration, max_span, plan_bolts,
                                verify_plan)
from housingforge.cavity import tab_dims
from housingforge.cli import main
from housingforge.drc import estimate_contact_resistance
from housingforge.fixtures import VALIDATION_PACKAGES, box_board, strip_board
from housingforge.geometry import Point2, Polygon2
from housingforge.ingest import SourceFormat, build_board, parse_board, serialize_board
from housingforge.mesh import HousingConfig, build_housing, mesh_diagnostics
from housingforge.model import ComponentInstance, Placement
from housingforge.reuse import CycleLedger, diff_reuse, record_cycle

from fuzzing import run_campaign
from meshcheck import parity_mismatches
from oracles import cover_1d_optimum

FUZZ_SECONDS = float(os.environ.get("HOUSINGFORGE_FUZZ_SECONDS", "3600"))
FULL_FUZZ = 3600.0

RESULTS: list[str] = []


def report(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def test_criterion_1_tab_formula(lib):
    pkg = lib["0603"]
    times = []
    for _ in range(50):
        t0 = time.perf_counter()
        spec = tab_dims(pkg)
        times.append(time.perf_counter() - t0)
    elapsed = statistics.median(times)
    dims_ok = (0.69 <= spec.length <= 0.70 and math.isclose(spec.width, 0.48, abs_tol=1e-12)
               and math.isclose(spec.thickness, 0.45, abs_tol=1e-12) and math.isclose(spec.height, 0.55, abs_tol=1e-12))
    published = all(abs(a - b) <= 0.01 for a, b in [(spec.length, 0.69), (spec.width, 0.48), (spec.thickness, 0.45)])
    report(1, dims_ok and published and elapsed < 1e-3,
           f"0603 tab L={spec.length:.4f} W={spec.width:.4f} T={spec.thickness:.4f} H={spec.height:.4f} mm "
           f"in {elapsed * 1e6:.1f} us")


def _random_table(rng: random.Random) -> SpanCalibration:
    """A valid table: increasing thicknesses in [1, 5], non-decreasing spans, through the anchor."""
    below = sorted({rng.uniform(1.0, 2.99) for _ in range(rng.randrange(6))}, reverse=True)
    above = sorted({rng.uniform(3.01, 5.0) for _ in range(rng.randrange(6))})
    pts = [(3.0, 27.0)]
    for t in below:
        pts.insert(0, (t, pts[0][1] - rng.uniform(0.0, 4.0)))
    for t in above:
        pts.append((t, pts[-1][1] + rng.uniform(0.0, 8.0)))
    return SpanCalibration(tuple(pts))


def test_criterion_2_span_anchor():
    t0 = time.perf_counter()
    anchor = max_span(3.0, default_calibration())
    rng = random.Random(2)
    bad = 0
    for _ in range(10_000):
        cal = _random_table(rng)
        a, b = sorted(rng.uniform(cal.points[0][0], 5.0) for _ in range(2))
        if not max_span(a, cal) <= max_span(b, cal) or max_span(3.0, cal) != 27.0:
            bad += 1
    elapsed = time.perf_counter() - t0
    report(2, anchor == 27.0 and bad == 0 and elapsed < 1.0,
           f"max_span(3.0)={anchor!r}, monotonicity violations {bad}/10000 tables, {elapsed:.3f} s")


def test_criterion_3_strip_fixture(lib):
    board = strip_board()
    assert (len(board.components), board.outline.bbox()) == (29, (0.0, 0.0, 23.0, 91.0))
    plan = plan_bolts(board, lib, thickness=3.0)
    problems = verify_plan(board, plan)
    positions = [c.center.y for c in board.components]
    t0 = time.perf_counter()
    optimum = cover_1d_optimum(positions, max_span(3.0), COVERAGE_RADIUS)
    oracle_time = time.perf_counter() - t0
    ok = not problems and plan.max_span_used <= 27.0 + 1e-9 and plan.stations == optimum and oracle_time < 5.0
    report(3, ok, f"{len(plan.holes)} holes, {plan.stations} flank pairs (oracle optimum {optimum}, "
                  f"{oracle_time:.2f} s), max certified span {plan.max_span_used:.2f} mm, "
                  f"{len(problems)} verifier findings")


def test_criterion_4_mesh_soundness(fixtures, lib):
    t0 = time.perf_counter()
    cfg = HousingConfig()
    details, ok = [], True
    total_bad = total = 0
    for pkg in VALIDATION_PACKAGES:
        board = fixtures[f"validate-{pkg.lower()}"]
        plan = plan_bolts(board, lib)
        mesh = build_housing(board, plan, lib, cfg)
        rep = mesh_diagnostics(mesh)
        bad, checked, solid, void = parity_mismatches(board, plan, mesh, cfg, 2000, seed=4)
        total_bad += bad
        total += checked
        ok &= rep.watertight and rep.components == 1 and bad == 0 and solid > 0 and void > 0
        details.append(f"{pkg}:{rep.components}c/{bad}x")
    elapsed = time.perf_counter() - t0
    report(4, ok and total == 10_000 and elapsed < 30.0,
           f"{' '.join(details)}; {total_bad} misclassified of {total} sampled points, {elapsed:.1f} s")


def test_criterion_5_analytic_volume(lib):
    t0 = time.perf_counter()
    board = box_board(20.0)
    cfg = HousingConfig(thickness=3.0, bolt_diameter=2.0)
    plan = plan_bolts(board, lib, 3.0, fixed_holes=[Point2(10.0, 10.0)], bolt_diameter=2.0)
    rep = mesh_diagnostics(build_housing(board, plan, lib, cfg))
    r, t = 1.0, 3.0
    analytic = 400.0 * t - math.pi * r * r * t
    err = abs(rep.volume - analytic) / analytic
    elapsed = time.perf_counter() - t0
    report(5, rep.sound and err < 0.02 and elapsed < 1.0,
           f"volume {rep.volume:.4f} vs {analytic:.4f} mm^3 (rel. error {err:.2e}, "
           f"{cfg.circle_segments}-gon inscribed), {elapsed:.3f} s")


@pytest.mark.slow
def test_criterion_6_parser_round_trip_and_fuzz(fixtures, lib):
    mismatched = [name for name, b in fixtures.items()
                  if parse_board(serialize_board(b), SourceFormat.NATIVE_BOARD, lib) != b]
    res = run_campaign(FUZZ_SECONDS, seed=6)
    syntax = res.errors.get("FormatSyntaxError", 0)
    other = ", ".join(f"{k} {v}" for k, v in sorted(res.errors.items()) if k != "FormatSyntaxError") or "none"
    scope = "full" if FUZZ_SECONDS >= FULL_FUZZ else f"REDUCED run ({FUZZ_SECONDS:g} s of {FULL_FUZZ:g} s)"
    report(6, not mismatched and not res.crashes,
           f"round-trip identity on {len(fixtures) - len(mismatched)}/{len(fixtures)} fixtures; "
           f"fuzz {scope}: {res.executions} inputs in {res.seconds:.0f} s, {res.parsed} parsed, "
           f"{syntax} syntax errors, other named errors: {other}, {len(res.crashes)} crashes"
           + "".join(f"; {kind}: {err} on {data[:80]!r}" for kind, data, err in res.crashes[:5]))


def test_criterion_7_reuse_and_cycles(fixtures):
    rep = diff_reuse(fixtures["timer"], fixtures["scoreboard"])
    ledger, first = CycleLedger(), None
    for n in range(1, 11):
        ledger, warning = record_cycle(ledger, "timer-housing")
        if warning is not None and first is None:
            first = n
    headline = rep.text().splitlines()[0]
    report(7, (rep.matched_total, rep.new_total) == (6, 6) and rep.reusable_fraction == 1.0 and first == 7,
           f"timer -> scoreboard '{headline}'; first durability warning at cycle {first}")


def test_criterion_8_resistance(lib):
    failures = []
    for k in range(1, 31):
        comps = [ComponentInstance(f"R{i}", lib["0805"], Placement(Point2(5 + 4 * (i % 10), 5 + 4 * (i // 10)), 0.0),
                                   "X", {"1": "NET"}) for i in range(k)]
        board = build_board("net", Polygon2.rectangle(0, 0, 45, 20), 1.6, comps)
        mean, sigma = estimate_contact_resistance(board, "NET")
        if mean != 0.46 * k or sigma != 0.139 * math.sqrt(k):
            failures.append(k)
    report(8, not failures, f"k = 1..30 contacts: mean 0.46*k and sigma 0.139*sqrt(k) exact, "
                            f"{len(failures)} mismatches")


def test_criterion_9_determinism(fixtures, tmp_path):
    differing, codes = [], {}
    for name, board in fixtures.items():
        src = tmp_path / f"{name}.board"
        src.write_bytes(serialize_board(board))
        runs = []
        for k in range(2):
            out = tmp_path / f"run{k}" / name
            codes[name] = main(["generate", "--input", str(src), "--out-dir", str(out)])
            runs.append(out)
        files = sorted(p.name for p in runs[0].iterdir())
        _, mismatch, errors = filecmp.cmpfiles(runs[0], runs[1], files, shallow=False)
        if mismatch or errors or len(files) != 4:
            differing.append(name)
    failed = sorted(n for n, c in codes.items() if c not in (0, 2))
    report(9, not differing and not failed,
           f"{len(fixtures)} fixtures x 2 generate runs: {len(differing)} with differing bytes, "
           f"exit codes {sorted(set(codes.values()))}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
