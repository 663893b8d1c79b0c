"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 data or parse error, 3 the variable
radius model did not converge.  All rotation flags are in turns.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import kinematics as kin
from .calibration import IllPosedError, compare_models, fit_bundle_radius, fit_radius_and_length
from .dataio import (Column, PlotSeries, parse_config, parse_lifecycle_csv,
                     parse_measurement_csv, render_plot, write_report)
from .geometry import bundle_diameter_ring, pack_bundle, bundle_diameter_packed, ring_centers
from .lifecycle import KGF, fit_load_life, predict_endurance
from .reproduce import TABLES, reproduce_table, table_lifecycle

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_DIVERGED = 0, 1, 2, 3


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from None


def _config(path):
    return parse_config(_read(path))


def _non_negative(text):
    value = float(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {text}")
    return value


def _positive(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _fraction(text):
    value = float(text)
    if not 0 < value < 1:
        raise argparse.ArgumentTypeError(f"must lie in (0, 1), got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="twistact", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("predict", help="displacement at a number of turns")
    p.add_argument("--config", required=True)
    p.add_argument("--turns", required=True, type=_non_negative)
    p.add_argument("--model", choices=("constant", "variable"), default="constant")
    p.add_argument("--zero-offset", action="store_true",
                   help="report displacement relative to the zero-twist value")
    p.add_argument("--reference-x", type=_non_negative, metavar="MM",
                   help="variable model: evaluate the radius at this displacement")

    p = sub.add_parser("inverse", help="turns needed for a displacement")
    p.add_argument("--config", required=True)
    p.add_argument("--displacement", required=True, type=_non_negative)

    p = sub.add_parser("bundle", help="bundle diameter and string centres")
    p.add_argument("--config", required=True)
    p.add_argument("--model", choices=("packed", "ring"), default="packed")

    p = sub.add_parser("calibrate", help="fit the bundle radius to a measured series")
    p.add_argument("--config", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--fit-length", action="store_true", help="also fit the twisting zone length")

    p = sub.add_parser("compare", help="constant vs variable radius RMSE")
    p.add_argument("--config", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--svg", metavar="PATH", help="write measured and model curves as SVG")

    p = sub.add_parser("onset", help="turns at which overtwist starts")
    p.add_argument("--config", required=True)
    p.add_argument("--total-length", required=True, type=_positive)
    p.add_argument("--fraction", required=True, type=_fraction)

    p = sub.add_parser("lifecycle", help="endurance record checks and load-life fit")
    p.add_argument("--records", required=True)
    p.add_argument("--fit", action="store_true")
    p.add_argument("--predict", nargs=2, type=_positive, metavar=("LOAD", "PER_CYCLE"))
    p.add_argument("--unit", choices=("kgf", "N"), default="kgf", help="unit of fit and --predict load")

    p = sub.add_parser("reproduce", help="regenerate a published table from bundled data")
    p.add_argument("--table", required=True, type=int, choices=sorted(TABLES))
    return parser


def _cmd_predict(args, out):
    cfg = _config(args.config)
    p = cfg.kinematic_params()
    if cfg.max_safe_turns is not None and args.turns > cfg.max_safe_turns:
        print(f"warning: {args.turns:g} turns exceeds max_safe_turns {cfg.max_safe_turns:g}", file=sys.stderr)
    alpha = kin.turns_to_rad(args.turns)
    if args.model == "constant":
        if args.reference_x is not None:
            raise UsageError("--reference-x only applies to --model variable")
        x = kin.forward_constant(p, alpha)
    else:
        sol = kin.forward_variable(p, alpha, reference_x=args.reference_x)
        if not sol.converged:
            print(f"variable radius model diverged after {sol.iterations} iterations "
                  f"(last iterate {sol.x:.2f} mm)", file=sys.stderr)
            return EXIT_DIVERGED
        x = sol.x
    if args.zero_offset:
        x -= kin.forward_constant(p, 0.0)
    print(f"{x:.2f}", file=out)
    return EXIT_OK


def _cmd_inverse(args, out):
    p = _config(args.config).kinematic_params()
    print(f"{kin.rad_to_turns(kin.inverse_constant(p, args.displacement)):.2f}", file=out)
    return EXIT_OK


def _cmd_bundle(args, out):
    cfg = _config(args.config)
    if args.model == "packed":
        centers = pack_bundle(cfg.n_strings, cfg.string_diameter).centers
        diameter = bundle_diameter_packed(pack_bundle(cfg.n_strings, cfg.string_diameter))
    else:
        centers = ring_centers(cfg.n_strings, cfg.string_diameter)
        diameter = bundle_diameter_ring(cfg.n_strings, cfg.string_diameter)
    print(f"diameter_mm: {diameter:.4f}", file=out)
    cols = [Column("string", "count"), Column("x_mm", "angle"), Column("y_mm", "angle")]
    out.write(write_report(cols, [[i + 1, x, y] for i, (x, y) in enumerate(centers)]))
    return EXIT_OK


def _cmd_calibrate(args, out):
    cfg = _config(args.config)
    series = parse_measurement_csv(_read(args.data))
    if args.fit_length:
        fit = fit_radius_and_length(series, cfg.L, cfg.S)
    else:
        fit = fit_bundle_radius(series, cfg.L, cfg.S)
    print(f"r_hat_mm: {fit.r_hat:.4f}", file=out)
    print(f"bundle_diameter_mm: {2 * fit.r_hat:.4f}", file=out)
    if fit.L_hat is not None:
        print(f"L_hat_mm: {fit.L_hat:.4f}", file=out)
    print(f"rmse_mm: {fit.rmse:.2f}", file=out)
    print(f"iterations: {fit.iterations}", file=out)
    print(f"converged: {'yes' if fit.converged else 'no'}", file=out)
    return EXIT_OK


def _cmd_compare(args, out):
    p = _config(args.config).kinematic_params()
    series = parse_measurement_csv(_read(args.data))
    report = compare_models(p, series)
    print(f"rmse_constant_mm: {report.rmse_constant:.2f}", file=out)
    print(f"rmse_variable_mm: {report.rmse_variable:.2f}", file=out)
    print(f"winner: {report.winner.value}", file=out)
    cols = [Column("turns", "turns"), Column("measured_mm"), Column("constant_residual_mm"),
            Column("variable_residual_mm")]
    out.write(write_report(cols, report.residuals))
    if args.svg:
        turns = [a for a, _ in series.samples]
        meas = [x for _, x in series.samples]
        curves = [
            PlotSeries("measured", turns, meas),
            PlotSeries("constant radius", turns, [m + r[2] for m, r in zip(meas, report.residuals)]),
            PlotSeries("variable radius", turns, [m + r[3] for m, r in zip(meas, report.residuals)]),
        ]
        Path(args.svg).write_text(render_plot(curves, "turns", "displacement [mm]"), encoding="utf-8")
    return EXIT_OK


def _cmd_onset(args, out):
    p = _config(args.config).kinematic_params()
    if not args.total_length > p.L:
        raise UsageError("--total-length must exceed the twisting zone length")
    print(f"{kin.overtwist_onset_turns(p, args.total_length, args.fraction):.2f}", file=out)
    return EXIT_OK


def _cmd_lifecycle(args, out):
    records = parse_lifecycle_csv(_read(args.records))
    cols, rows = table_lifecycle(records)
    out.write(write_report(cols, rows))
    if args.fit or args.predict:
        fit = fit_load_life(records, load_unit=args.unit)
        print(f"fit: total_contraction_mm = {fit.a:.6g} * load_{args.unit} ** {fit.b:.4f} "
              f"(log rms {fit.residual_rms:.4f}; extrapolation, not measured)", file=out)
        if args.predict:
            load, per_cycle = args.predict
            print(f"predicted_cycles: {predict_endurance(fit, load, per_cycle)}", file=out)
    return EXIT_OK


def _cmd_reproduce(args, out):
    out.write(reproduce_table(args.table))
    return EXIT_OK


COMMANDS = {
    "predict": _cmd_predict,
    "inverse": _cmd_inverse,
    "bundle": _cmd_bundle,
    "calibrate": _cmd_calibrate,
    "compare": _cmd_compare,
    "onset": _cmd_onset,
    "lifecycle": _cmd_lifecycle,
    "reproduce": _cmd_reproduce,
}


def run(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except (DataError, IllPosedError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
