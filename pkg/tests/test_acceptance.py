"""Exit criteria.  Each test records one PASS/FAIL line, printed at the end of the run."""

import io
import math

import numpy as np
from hypothesis import given, settings, strategies as st

from twistact import published
from twistact.calibration import MeasurementSeries, ModelKind, compare_models, fit_bundle_radius, rmse
from twistact.cli import run
from twistact.dataio import Column, PlotSeries, format_measurement_csv, render_plot, write_report
from twistact.geometry import bundle_diameter_packed, bundle_diameter_ring, pack_bundle, packing_violations
from twistact.kinematics import (KinematicParams, contraction_percent, forward_constant, forward_variable,
                                 inverse_constant, overtwist_onset_turns, turns_to_rad)
from twistact.lifecycle import LifeCycleRecord, fit_load_life, validate_record
from twistact.reproduce import BUILDS, bundled_config, bundled_series

RESULTS = []
D = published.SINGLE_STRING_DIAMETER


def record(criterion, ok, detail):
    RESULTS.append(f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")
    assert ok, detail


def test_ac1_packed_diameters():
    expected = {2: 0.48, 4: 0.6557, 6: 0.8750, 8: 0.8750}
    implied = {n: published.BUNDLE_DIAMETER[n][0] + published.BUNDLE_DIAMETER[n][2] for n in expected}
    got = {n: bundle_diameter_packed(pack_bundle(n, D)) for n in expected}
    ok = all(abs(got[n] - expected[n]) < 5e-5 and abs(got[n] - implied[n]) <= 0.01 + 1e-12 for n in expected)
    record("AC1 packed diameters", ok, ", ".join(f"n={n}: {got[n]:.4f} vs {implied[n]:.2f}" for n in got))


def test_ac2_ring_diameters():
    implied = {n: published.BUNDLE_DIAMETER[n][0] + published.BUNDLE_DIAMETER[n][3] for n in range(2, 9)}
    got = {n: bundle_diameter_ring(n, D) for n in implied}
    worst = max(abs(got[n] - implied[n]) for n in got)
    record("AC2 ring diameters", worst <= 0.015 + 1e-12, f"max |model - implied| = {worst:.4f} mm (tol 0.015)")


def test_ac3_contraction_percentages():
    pct, totals = [], []
    for n in BUILDS:
        L, c, total, _ = published.ACHIEVED_CONTRACTION[n]
        s = contraction_percent(c, L)
        pct.append(round(s.percent))
        totals.append(s.total_length)
    ok = pct == [72, 80, 81, 78] and all(
        math.isclose(t, e, abs_tol=1e-9) for t, e in zip(totals, [81.60, 115.44, 118.52, 107.39]))
    record("AC3 contraction percentages", ok, f"percent {pct}, totals {[round(t, 2) for t in totals]}")


def test_ac4_overtwist_onset():
    got, expected_approx = [], [19.3, 10.0, 8.7, 7.2]
    for n in BUILDS:
        cfg = bundled_config(n)
        total = published.ACHIEVED_CONTRACTION[n][2]
        got.append(overtwist_onset_turns(cfg.kinematic_params(), total, published.OVERTWIST_ONSET[n][1] / 100))
    pub = [published.OVERTWIST_ONSET[n][2] for n in BUILDS]
    ok = (all(abs(g - p) <= 2 for g, p in zip(got, pub))
          and all(abs(g - e) <= 0.05 for g, e in zip(got, expected_approx)))
    record("AC4 overtwist onset", ok, f"turns {[round(g, 2) for g in got]} vs published {pub} (tol 2)")


def test_ac5_lifecycle_arithmetic():
    records = [LifeCycleRecord.from_kgf(*row) for row in published.LIFE_CYCLE]
    reports = [validate_record(r) for r in records]
    flagged = [(round(r.record.load_kgf), r.record.turns_per_cycle) for r in reports if not r.consistent]
    ok = sum(r.consistent for r in reports) == 10 and flagged == [(3, 40), (5, 55)]
    record("AC5 life-cycle arithmetic", ok, f"{sum(r.consistent for r in reports)}/12 consistent, flagged {flagged}")


def test_ac6_load_life_fit():
    records = [LifeCycleRecord.from_kgf(*row) for row in published.LIFE_CYCLE]
    kgf = fit_load_life(records, load_unit="kgf")
    newton = fit_load_life(records, load_unit="N")
    ok = abs(kgf.b + 3.28) <= 0.05 and abs(kgf.b - newton.b) <= 1e-9
    record("AC6 load-life exponent", ok, f"b = {kgf.b:.4f} (kgf), |b_kgf - b_N| = {abs(kgf.b - newton.b):.1e}")


def test_ac7_model_comparison_ordering():
    lines, ok = [], True
    for n in BUILDS:
        p = bundled_config(n).kinematic_params()
        s = bundled_series(n)
        rep = compare_models(p, s)
        above = all(forward_variable(p, turns_to_rad(a), reference_x=x).x > forward_constant(p, turns_to_rad(a))
                    for a, x in s.samples if a > 0)
        above_fp = all(forward_variable(p, turns_to_rad(a)).x > forward_constant(p, turns_to_rad(a))
                       for a, _ in s.samples if a > 0)
        ok &= rep.rmse_constant < rep.rmse_variable and above and above_fp
        lines.append(f"n={n}: {rep.rmse_constant:.2f} < {rep.rmse_variable:.2f}")
    record("AC7 constant beats variable", ok, "; ".join(lines))


params = st.builds(KinematicParams, L=st.floats(5, 100), S=st.floats(0, 10), r=st.floats(0.05, 2))
_roundtrip_worst = []


@settings(max_examples=1000, deadline=None, derandomize=True)
@given(p=params, alpha=st.floats(0, 500))
def _roundtrip(p, alpha):
    _roundtrip_worst.append(abs(inverse_constant(p, forward_constant(p, alpha)) - alpha))


def test_ac8a_roundtrip():
    _roundtrip_worst.clear()
    _roundtrip()
    worst = max(_roundtrip_worst)
    record("AC8a inverse-forward roundtrip", len(_roundtrip_worst) >= 1000 and worst <= 1e-9,
           f"{len(_roundtrip_worst)} draws, worst error {worst:.1e} rad")


def test_ac8b_packing_invariants():
    bad = [(n, d, v) for n in range(1, 17) for d in (0.1, 0.24, 0.5) for v in packing_violations(pack_bundle(n, d))]
    record("AC8b packing invariants", not bad, f"{len(bad)} violations over n in [1,16]")


def test_ac8c_forward_monotonicity():
    rng = np.random.default_rng(8)
    ok = True
    for _ in range(300):
        L, S, r = rng.uniform(5, 100), rng.uniform(0, 10), rng.uniform(0.05, 2)
        a = rng.uniform(0, 500)
        base = forward_constant(KinematicParams(L, S, r), a)
        ok &= forward_constant(KinematicParams(L, S, r), a + 0.01) > base
        ok &= forward_constant(KinematicParams(L, S, r * 1.01), a + 0.01) > forward_constant(
            KinematicParams(L, S, r), a + 0.01)
        ok &= forward_constant(KinematicParams(L, S + 0.01, r), a) > base
    record("AC8c forward monotone in alpha, r, S", ok, "300 random parameter draws")


def test_ac8d_rmse_properties():
    p = bundled_config(6).kinematic_params()
    exact = MeasurementSeries(tuple((t, forward_constant(p, turns_to_rad(t))) for t in range(41)))
    zero = rmse(p, ModelKind.CONSTANT, exact)
    rng = np.random.default_rng(3)
    positive = True
    for _ in range(50):
        k = rng.integers(0, 41)
        samples = list(exact.samples)
        samples[k] = (samples[k][0], samples[k][1] + rng.uniform(1e-3, 1))
        positive &= rmse(p, ModelKind.CONSTANT, MeasurementSeries(tuple(samples))) > 0
    ok = zero == 0.0 and positive and rmse(p, ModelKind.CONSTANT, bundled_series(6)) >= 0
    record("AC8d RMSE non-negative, zero iff exact", ok, f"exact series RMSE {zero}")


def test_ac8e_calibration_recovery():
    p = KinematicParams(22.85, 5.0, 0.43)
    turns = np.linspace(0, 40, 40)
    clean = MeasurementSeries(tuple((t, forward_constant(p, turns_to_rad(t))) for t in turns))
    r_clean = fit_bundle_radius(clean, p.L, p.S).r_hat
    rng = np.random.default_rng(20140611)
    turns = np.linspace(0, 40, 60)
    x = np.array([forward_constant(p, turns_to_rad(t)) for t in turns]) + rng.normal(0, 0.5, 60)
    r_noisy = fit_bundle_radius(MeasurementSeries(tuple(zip(turns, np.clip(x, 0, None)))), p.L, p.S).r_hat
    ok = abs(r_clean - 0.43) <= 1e-4 and abs(r_noisy / 0.43 - 1) <= 0.02
    record("AC8e calibration recovery", ok,
           f"noiseless {abs(r_clean - 0.43):.1e} mm, noisy {100 * abs(r_noisy / 0.43 - 1):.2f}%")


def _emit_all():
    outputs = []
    for table in (1, 2, 3, 5, 6, 7):
        buf = io.StringIO()
        run(["reproduce", "--table", str(table)], out=buf)
        outputs.append(buf.getvalue())
    outputs.append(write_report([Column("a", "count"), Column("b")], [[1, 2.345], [2, 3.0]]))
    outputs.append(render_plot([PlotSeries(f"n={n}", [a for a, _ in bundled_series(n).samples],
                                           [x for _, x in bundled_series(n).samples]) for n in BUILDS],
                               "turns", "displacement [mm]"))
    outputs.append(format_measurement_csv(bundled_series(6)))
    return [o.encode("utf-8") for o in outputs]


def test_ac9_determinism():
    first, second = _emit_all(), _emit_all()
    record("AC9 byte-identical output", first == second and all(first), f"{len(first)} emitters compared")
