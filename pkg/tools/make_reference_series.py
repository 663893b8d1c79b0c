"""Regenerate the approximate displacement series shipped in twistact/data.

The raw turn-by-turn measurements behind the published displacement curves
are not available.  Each series here is a smooth stand-in built from
published quantities only:

* the build dimensions and measured bundle diameter (constant radius model),
* the maximum contraction, which fixes the last sample,
* the constant-model RMSE, which sets the size of a smooth wiggle added on
  top of the zero-offset model curve.

Run from the repository root:  python tools/make_reference_series.py
"""

import math
from pathlib import Path

from scipy.optimize import brentq

from twistact.calibration import MeasurementSeries, ModelKind, rmse
from twistact.dataio import format_measurement_csv, parse_config
from twistact.kinematics import forward_constant, inverse_constant, rad_to_turns, turns_to_rad, zero_offset_displacement
from twistact.lifecycle import KGF
from twistact.published import ACHIEVED_CONTRACTION, MODEL_RMSE

DATA = Path(__file__).resolve().parents[1] / "src" / "twistact" / "data"


def build(n):
    cfg = parse_config((DATA / f"n{n}.cfg").read_text())
    p = cfg.kinematic_params()
    contraction = ACHIEVED_CONTRACTION[n][1]
    # zero-offset curve reaches the maximum contraction at the last turn count
    last = round(rad_to_turns(inverse_constant(p, contraction + forward_constant(p, 0.0))), 1)
    turns = [float(t) for t in range(0, int(last) + 1)]
    if turns[-1] != last:
        turns.append(last)

    def series(amplitude):
        samples = []
        for t in turns:
            u = t / last
            x = zero_offset_displacement(p, turns_to_rad(t)) + amplitude * u * math.sin(2 * math.pi * u)
            samples.append((t, round(max(x, 0.0), 2)))
        samples[-1] = (last, contraction)
        return MeasurementSeries(tuple(samples), n_strings=n, load_n=2 * KGF,
                                 label=f"{n} strings, approximate")

    target = MODEL_RMSE[n][0]
    amplitude = brentq(lambda a: rmse(p, ModelKind.CONSTANT, series(a)) - target, 0.0, 50.0, xtol=1e-6)
    return series(amplitude)


HEADER = (
    "# Approximate series, NOT measured data: constant radius curve from the\n"
    "# build dimensions, ending at the published maximum contraction, with a\n"
    "# smooth deviation sized to the published constant-model RMSE.\n"
    "# Generated by tools/make_reference_series.py\n"
)

if __name__ == "__main__":
    for n in sorted(ACHIEVED_CONTRACTION):
        s = build(n)
        (DATA / f"series_n{n}.csv").write_text(HEADER + format_measurement_csv(s))
        print(n, len(s), s.samples[-1])
