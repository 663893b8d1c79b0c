import re
import xml.etree.ElementTree as ET

import pytest
from hypothesis import given, strategies as st

from twistact.calibration import MeasurementSeries
from twistact.dataio import (
    Column,
    ParseError,
    PlotSeries,
    StringSystemConfig,
    format_config,
    format_measurement_csv,
    format_value,
    parse_config,
    parse_cycle_log,
    parse_lifecycle_csv,
    parse_measurement_csv,
    parse_report,
    render_plot,
    write_report,
)
from twistact.kinematics import contraction_percent

N6_TEXT = ("n_strings = 6\nstring_diameter_mm = 0.24\ntwist_zone_mm = 22.85\n"
           "separator_mm = 5\nbundle_diameter_mm = 0.86")
SVG = "{http://www.w3.org/2000/svg}"


def test_parse_config_n6():
    cfg = parse_config(N6_TEXT)
    assert cfg == StringSystemConfig(6, 0.24, 22.85, 5.0, 0.86)
    assert cfg.kinematic_params().r == pytest.approx(0.43)


def test_config_defaults_to_packing_model():
    cfg = parse_config("n_strings = 4\nstring_diameter_mm = 0.24\ntwist_zone_mm = 23.42\nseparator_mm = 5\n")
    assert cfg.measured_bundle_diameter is None
    assert cfg.bundle_diameter == pytest.approx(0.6557, abs=1e-4)


def test_config_comments_and_roundtrip():
    cfg = parse_config("# build\n" + N6_TEXT + "  # measured\nmax_safe_turns = 40\nlabel = six\n")
    assert cfg.max_safe_turns == 40 and cfg.label == "six"
    assert parse_config(format_config(cfg)) == cfg


@pytest.mark.parametrize("text,match", [
    ("", "n_strings"),
    (N6_TEXT.replace("n_strings = 6", "n_strings = -2"), "invariant"),
    (N6_TEXT + "\ncolour = red", "unknown key"),
    (N6_TEXT + "\nseparator_mm = 4", "duplicate"),
    (N6_TEXT.replace("22.85", "abc"), "not a number"),
    (N6_TEXT.replace("= 6", "= 6.5"), "integer"),
    (N6_TEXT.replace("22.85", "nan"), "finite"),
    ("n_strings 6", "key = value"),
])
def test_config_errors(text, match):
    with pytest.raises(ParseError, match=match):
        parse_config(text)


def test_config_error_names_line_and_key():
    with pytest.raises(ParseError) as exc:
        parse_config(N6_TEXT + "\ncolour = red")
    assert exc.value.line == 6 and exc.value.key == "colour"


def test_parse_measurement_basic():
    s = parse_measurement_csv("turns,displacement_mm\n0,0.0\n10,14.5")
    assert s.samples == ((0.0, 0.0), (10.0, 14.5))


def test_parse_measurement_sorts():
    s = parse_measurement_csv("turns,displacement_mm\n10,14.5\n0,0.0\n")
    assert [a for a, _ in s.samples] == [0.0, 10.0]


@pytest.mark.parametrize("text,match", [
    ("turn,displacement\n0,0", "bad header"),
    ("turns,displacement_mm\n0,0.0\n10,14.5\n10,14.6", "duplicate turns=10"),
    ("turns,displacement_mm\n0,0.0\n10", "expected 2 fields"),
    ("turns,displacement_mm\n0,0.0\n\n10,1", "expected 2 fields"),
    ("turns,displacement_mm\n0,abc", "not a number"),
    ("turns,displacement_mm\n0,-1", "negative"),
    ("", "missing header"),
])
def test_parse_measurement_errors(text, match):
    with pytest.raises(ParseError, match=match):
        parse_measurement_csv(text)


def test_parse_measurement_error_row_number():
    with pytest.raises(ParseError) as exc:
        parse_measurement_csv("turns,displacement_mm\n0,0.0\n10,14.5\n10,14.6")
    assert exc.value.line == 4


def test_measurement_roundtrip_with_metadata():
    s = MeasurementSeries(((0.0, 0.0), (1.5, 2.25)), n_strings=6, load_n=19.6133, label="six")
    assert parse_measurement_csv(format_measurement_csv(s)) == s


def test_parse_cycle_log():
    log = parse_cycle_log("t_ms,turns,current_ma\n0,0,120\n10,0.1,130\n20,0.2,125\n")
    assert len(log.samples) == 3 and log.failure_index is None
    assert parse_cycle_log("t_ms,turns,current_ma\n").samples == ()


@pytest.mark.parametrize("body,line", [("0,0,1\n5,0,1\n4,0,1", 4), ("0,0,1\n5,0,-3", 3)])
def test_parse_cycle_log_errors(body, line):
    with pytest.raises(ParseError) as exc:
        parse_cycle_log("t_ms,turns,current_ma\n" + body)
    assert exc.value.line == line


def test_parse_lifecycle_units():
    kgf = parse_lifecycle_csv("load_kgf,turns_per_cycle,cycles_endured,contraction_per_cycle_mm,"
                              "total_contraction_mm\n2,20,1512,16.06,24283\n")
    newton = parse_lifecycle_csv("load_n,turns_per_cycle,cycles_endured,contraction_per_cycle_mm,"
                                 "total_contraction_mm\n19.6133,20,1512,16.06,24283\n")
    assert kgf[0].load_n == pytest.approx(newton[0].load_n)
    with pytest.raises(ParseError):
        parse_lifecycle_csv("load_kgf,turns_per_cycle,cycles_endured,contraction_per_cycle_mm,"
                            "total_contraction_mm\n2,20,15.5,16.06,24283\n")


TABLE2_COLS = [Column("n_strings", "count"), Column("twist_zone_mm"), Column("contraction_mm"),
               Column("total_length_mm"), Column("contraction_percent", "percent")]


def test_write_report_contraction_row():
    s = contraction_percent(95.67, 22.85)
    text = write_report(TABLE2_COLS, [[6, 22.85, s.contraction, s.total_length, s.percent]])
    assert text.splitlines()[1] == "6,22.85,95.67,118.52,81"
    assert text.endswith("\n") and "\r" not in text


def test_write_report_empty_and_deterministic():
    assert write_report(TABLE2_COLS, []) == "n_strings,twist_zone_mm,contraction_mm,total_length_mm,contraction_percent\n"
    rows = [[2, 23.2, 58.4, 81.6, 71.568], [4, 23.42, 92.02, 115.44, 79.71]]
    assert write_report(TABLE2_COLS, rows) == write_report(TABLE2_COLS, rows)


def test_write_report_rejects_ragged_rows():
    with pytest.raises(ValueError):
        write_report(TABLE2_COLS, [[1, 2.0]])


@pytest.mark.parametrize("value,kind,text", [
    (0.125, "length", "0.13"), (2.675, "length", "2.68"), (-0.001, "length", "0.00"),
    (80.5, "percent", "81"), (19.25, "turns", "19.3"), (7, "count", "7"), ("yes", "text", "yes"),
])
def test_format_value_half_up(value, kind, text):
    assert format_value(value, kind) == text


@given(st.lists(st.tuples(st.integers(1, 16), st.floats(0, 1e4), st.floats(0, 99.4)), max_size=10))
def test_report_roundtrip_at_declared_precision(rows):
    cols = [Column("n", "count"), Column("len"), Column("pct", "percent")]
    text = write_report(cols, rows)
    parsed = parse_report(text, cols)
    assert len(parsed) == len(rows)
    for (n, length, pct), (pn, plen, ppct) in zip(rows, parsed):
        assert pn == n
        assert abs(plen - length) <= 0.005 + 1e-9
        assert abs(ppct - pct) <= 0.5 + 1e-9
    assert write_report(cols, parsed) == text


def test_plot_single_series():
    svg = render_plot([PlotSeries("a", [0, 1], [0, 2])], "turns", "x [mm]")
    root = ET.fromstring(svg)
    assert root.tag == SVG + "svg"
    assert len(root.findall(f".//{SVG}polyline")) == 1


def test_plot_four_series_legend():
    series = [PlotSeries(f"n={n}", [0, 10, 20], [0, n, 2 * n]) for n in (2, 4, 6, 8)]
    svg = render_plot(series, "turns", "x [mm]", title="model curves")
    root = ET.fromstring(svg)
    assert len(root.findall(f".//{SVG}polyline")) == 4
    legend = [g for g in root.iter(SVG + "g") if g.get("class") == "legend"][0]
    assert len(legend.findall(f"{SVG}g")) == 4
    assert svg == render_plot(series, "turns", "x [mm]", title="model curves")


def test_plot_escapes_labels():
    svg = render_plot([PlotSeries("a<b & \"c\"", [0, 1], [1, 1])], "x", "y")
    ET.fromstring(svg)
    assert "a&lt;b &amp;" in svg


@pytest.mark.parametrize("series", [
    [],
    [PlotSeries("a", [0, 1, 2], [0, 1])],
    [PlotSeries("a", [0], [0])],
    [PlotSeries("a", [0, float("nan")], [0, 1])],
])
def test_plot_errors(series):
    with pytest.raises(ValueError):
        render_plot(series, "x", "y")


def test_plot_coordinates_fixed_precision():
    svg = render_plot([PlotSeries("a", [0, 1 / 3], [0, 2 / 3])], "x", "y")
    points = re.search(r'points="([^"]+)"', svg).group(1)
    assert all(re.fullmatch(r"-?\d+\.\d\d", v) for p in points.split() for v in p.split(","))
