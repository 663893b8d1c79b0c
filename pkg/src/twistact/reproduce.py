"""Side-by-side regeneration of the published tables from bundled data."""

from __future__ import annotations

from importlib.resources import files

from . import published
from .calibration import MeasurementSeries, compare_models
from .dataio import (Column, StringSystemConfig, parse_config, parse_lifecycle_csv,
                     parse_measurement_csv, write_report)
from .geometry import bundle_diameter_packed, bundle_diameter_ring, diameter_model_error, pack_bundle
from .kinematics import contraction_percent, overtwist_onset_turns
from .lifecycle import LifeCycleRecord, validate_record

BUILDS = (2, 4, 6, 8)


def _data(name: str) -> str:
    return files("twistact").joinpath("data", name).read_text(encoding="utf-8")


def bundled_config(n: int) -> StringSystemConfig:
    return parse_config(_data(f"n{n}.cfg"))


def bundled_series(n: int) -> MeasurementSeries:
    return parse_measurement_csv(_data(f"series_n{n}.csv"))


def bundled_lifecycle() -> list[LifeCycleRecord]:
    return parse_lifecycle_csv(_data("lifecycle.csv"))


def table_dimensions():
    cols = [Column("n_strings", "count"), Column("twist_zone_mm"), Column("separator_mm"),
            Column("bundle_diameter_mm"), Column("bundle_diameter_published_mm"),
            Column("bundle_diameter_delta_mm"), Column("packed_model_diameter_mm")]
    rows = []
    for n in BUILDS:
        cfg = bundled_config(n)
        pub = published.SYSTEM_DIMENSIONS[n][2]
        rows.append([n, cfg.L, cfg.S, cfg.bundle_diameter, pub, cfg.bundle_diameter - pub,
                     cfg.predicted_bundle_diameter])
    return cols, rows


def table_contraction():
    cols = [Column("n_strings", "count"), Column("twist_zone_mm"), Column("contraction_mm"),
            Column("total_length_mm"), Column("contraction_percent", "percent"),
            Column("total_length_published_mm"), Column("contraction_percent_published", "percent"),
            Column("contraction_percent_delta", "turns")]
    rows = []
    for n in BUILDS:
        L, contraction, total_pub, pct_pub = published.ACHIEVED_CONTRACTION[n]
        s = contraction_percent(contraction, bundled_config(n).L)
        rows.append([n, L, contraction, s.total_length, s.percent, total_pub, pct_pub, s.percent - pct_pub])
    return cols, rows


def table_onset():
    cols = [Column("n_strings", "count"), Column("bundle_diameter_mm"),
            Column("onset_contraction_percent", "percent"), Column("total_length_mm"),
            Column("onset_turns", "turns"), Column("onset_turns_published", "count"),
            Column("onset_turns_delta", "turns")]
    rows = []
    for n in BUILDS:
        cfg = bundled_config(n)
        _, pct, turns_pub = published.OVERTWIST_ONSET[n]
        total = contraction_percent(published.ACHIEVED_CONTRACTION[n][1], cfg.L).total_length
        turns = overtwist_onset_turns(cfg.kinematic_params(), total, pct / 100.0)
        rows.append([n, cfg.bundle_diameter, pct, total, turns, turns_pub, turns - turns_pub])
    return cols, rows


def table_diameter(d: float = published.SINGLE_STRING_DIAMETER):
    cols = [Column("n_strings", "count"), Column("measured_mm"),
            Column("packed_mm"), Column("packed_error_mm"), Column("packed_error_published_mm"),
            Column("ring_mm"), Column("ring_error_mm"), Column("ring_error_published_mm")]
    rows = []
    for n, (measured, _, packed_pub, ring_pub) in sorted(published.BUNDLE_DIAMETER.items()):
        packed = bundle_diameter_packed(pack_bundle(n, d))
        ring = bundle_diameter_ring(n, d)
        rows.append([n, measured, packed, diameter_model_error(packed, measured), packed_pub,
                     ring, diameter_model_error(ring, measured), ring_pub])
    return cols, rows


def table_rmse():
    cols = [Column("n_strings", "count"), Column("rmse_constant_mm", "rmse"),
            Column("rmse_constant_published_mm", "rmse"), Column("rmse_variable_mm", "rmse"),
            Column("rmse_variable_published_mm", "rmse"), Column("winner", "text")]
    rows = []
    for n in BUILDS:
        report = compare_models(bundled_config(n).kinematic_params(), bundled_series(n))
        c_pub, v_pub = published.MODEL_RMSE[n]
        rows.append([n, report.rmse_constant, c_pub, report.rmse_variable, v_pub, report.winner.value])
    return cols, rows


def table_lifecycle(records=None):
    cols = [Column("load_kgf", "count"), Column("turns_per_cycle", "count"),
            Column("cycles_endured", "count"), Column("contraction_per_cycle_mm"),
            Column("total_computed_mm"), Column("total_published_mm"), Column("total_delta_mm"),
            Column("consistent", "text")]
    rows = []
    for rec in records if records is not None else bundled_lifecycle():
        rep = validate_record(rec)
        rows.append([round(rec.load_kgf, 6), rec.turns_per_cycle, rec.cycles_endured,
                     rec.contraction_per_cycle, rep.computed_total, rec.total_contraction,
                     rep.delta, "yes" if rep.consistent else "no"])
    return cols, rows


TABLES = {
    1: table_dimensions,
    2: table_contraction,
    3: table_onset,
    5: table_diameter,
    6: table_rmse,
    7: table_lifecycle,
}


def reproduce_table(number: int) -> str:
    if number not in TABLES:
        raise ValueError(f"no reproduction for table {number}; choose from {sorted(TABLES)}")
    cols, rows = TABLES[number]()
    return write_report(cols, rows)
