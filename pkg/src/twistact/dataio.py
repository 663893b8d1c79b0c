"""Text formats: build configs, measurement series, cycle logs, reports, plots.

Every parser rejects malformed input with :class:`ParseError` instead of
guessing.  Every writer is deterministic: the same input gives the same bytes.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Any, Optional, Sequence
from xml.sax.saxutils import escape, quoteattr

from .calibration import MeasurementSeries
from .geometry import bundle_diameter_packed, pack_bundle
from .kinematics import KinematicParams
from .lifecycle import KGF, CycleLog, LifeCycleRecord


class ParseError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None, key: Optional[str] = None):
        self.line = line
        self.key = key
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"key {key!r}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


# ---------------------------------------------------------------- configs

@dataclass(frozen=True)
class StringSystemConfig:
    n_strings: int
    string_diameter: float
    L: float
    S: float
    measured_bundle_diameter: Optional[float] = None
    max_safe_turns: Optional[float] = None
    label: str = ""

    def __post_init__(self):
        if isinstance(self.n_strings, bool) or int(self.n_strings) != self.n_strings or self.n_strings < 1:
            raise ValueError(f"n_strings must be a positive integer, got {self.n_strings!r}")
        for name in ("string_diameter", "L"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)!r}")
        if not self.S >= 0:
            raise ValueError(f"S must be non-negative, got {self.S!r}")
        for name in ("measured_bundle_diameter", "max_safe_turns"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise ValueError(f"{name} must be positive, got {v!r}")

    @property
    def predicted_bundle_diameter(self) -> float:
        return bundle_diameter_packed(pack_bundle(self.n_strings, self.string_diameter))

    @property
    def bundle_diameter(self) -> float:
        """Measured diameter when given, packing-model prediction otherwise."""
        if self.measured_bundle_diameter is not None:
            return self.measured_bundle_diameter
        return self.predicted_bundle_diameter

    def kinematic_params(self) -> KinematicParams:
        return KinematicParams(L=self.L, S=self.S, r=self.bundle_diameter / 2.0)


_CONFIG_KEYS = {
    "n_strings": "n_strings",
    "string_diameter_mm": "string_diameter",
    "twist_zone_mm": "L",
    "separator_mm": "S",
    "bundle_diameter_mm": "measured_bundle_diameter",
    "max_safe_turns": "max_safe_turns",
    "label": "label",
}
_REQUIRED = ("n_strings", "string_diameter_mm", "twist_zone_mm", "separator_mm")


def _number(text: str, line: Optional[int], key: Optional[str]) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"not a number: {text!r}", line, key) from None
    if not math.isfinite(value):
        raise ParseError(f"not a finite number: {text!r}", line, key)
    return value


def parse_config(text: str) -> StringSystemConfig:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values: dict[str, Any] = {}
    lines: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError("expected 'key = value'", lineno)
        key, _, value = (part.strip() for part in line.partition("="))
        if key not in _CONFIG_KEYS:
            raise ParseError("unknown key", lineno, key)
        if key in values:
            raise ParseError(f"duplicate key (first on line {lines[key]})", lineno, key)
        if key == "label":
            values[key] = value
        elif key == "n_strings":
            try:
                values[key] = int(value)
            except ValueError:
                raise ParseError(f"not an integer: {value!r}", lineno, key) from None
        else:
            values[key] = _number(value, lineno, key)
        lines[key] = lineno
    for key in _REQUIRED:
        if key not in values:
            raise ParseError("missing required key", key=key)
    try:
        return StringSystemConfig(**{_CONFIG_KEYS[k]: v for k, v in values.items()})
    except ValueError as exc:
        raise ParseError(f"invariant violation: {exc}") from None


def format_config(cfg: StringSystemConfig) -> str:
    out = [f"n_strings = {cfg.n_strings}",
           f"string_diameter_mm = {cfg.string_diameter!r}",
           f"twist_zone_mm = {cfg.L!r}",
           f"separator_mm = {cfg.S!r}"]
    if cfg.measured_bundle_diameter is not None:
        out.append(f"bundle_diameter_mm = {cfg.measured_bundle_diameter!r}")
    if cfg.max_safe_turns is not None:
        out.append(f"max_safe_turns = {cfg.max_safe_turns!r}")
    if cfg.label:
        out.append(f"label = {cfg.label}")
    return "\n".join(out) + "\n"


# ------------------------------------------------------------- csv inputs

def _csv_rows(text: str, header: Sequence[str], what: str):
    """Return ``(row_number, fields)`` data rows and ``# key: value`` metadata.

    Lines starting with ``#`` are comments; row numbers count every line.
    """
    rows = []
    seen_header = False
    meta: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if line.startswith("#"):
            key, sep, value = line[1:].partition(":")
            if sep:
                meta[key.strip()] = value.strip()
            continue
        fields = next(csv.reader([line]))
        if not seen_header:
            if [f.strip() for f in fields] != list(header):
                raise ParseError(f"bad header for {what}: expected {','.join(header)!r}, got {line!r}", lineno)
            seen_header = True
            continue
        if len(fields) != len(header):
            raise ParseError(f"expected {len(header)} fields, got {len(fields)}", lineno)
        rows.append((lineno, [f.strip() for f in fields]))
    if not seen_header:
        raise ParseError(f"missing header for {what}: expected {','.join(header)!r}")
    return rows, meta


def parse_measurement_csv(text: str) -> MeasurementSeries:
    """Parse ``turns,displacement_mm`` rows into a sorted series.

    Optional ``# n_strings: 6``, ``# load_n: 19.6`` and ``# label: ...``
    comment lines fill in metadata.
    """
    rows, meta = _csv_rows(text, ("turns", "displacement_mm"), "measurement series")
    samples = []
    row_of: dict[float, int] = {}
    for lineno, (a_txt, x_txt) in rows:
        a = _number(a_txt, lineno, "turns")
        x = _number(x_txt, lineno, "displacement_mm")
        if a < 0:
            raise ParseError("negative turns", lineno, "turns")
        if x < 0:
            raise ParseError("negative displacement", lineno, "displacement_mm")
        if a in row_of:
            raise ParseError(f"duplicate turns={a_txt} (first on line {row_of[a]})", lineno, "turns")
        row_of[a] = lineno
        samples.append((a, x))
    try:
        n = int(meta["n_strings"]) if "n_strings" in meta else None
        load = float(meta["load_n"]) if "load_n" in meta else None
    except ValueError as exc:
        raise ParseError(f"bad metadata: {exc}") from None
    return MeasurementSeries(tuple(samples), n_strings=n, load_n=load, label=meta.get("label", ""))


def format_measurement_csv(s: MeasurementSeries) -> str:
    out = []
    if s.n_strings is not None:
        out.append(f"# n_strings: {s.n_strings}")
    if s.load_n is not None:
        out.append(f"# load_n: {s.load_n!r}")
    if s.label:
        out.append(f"# label: {s.label}")
    out.append("turns,displacement_mm")
    out.extend(f"{a!r},{x!r}" for a, x in s.samples)
    return "\n".join(out) + "\n"


def parse_cycle_log(text: str) -> CycleLog:
    rows, _ = _csv_rows(text, ("t_ms", "turns", "current_ma"), "cycle log")
    samples = []
    for lineno, (t_txt, n_txt, c_txt) in rows:
        t = _number(t_txt, lineno, "t_ms")
        turns = _number(n_txt, lineno, "turns")
        current = _number(c_txt, lineno, "current_ma")
        if samples and not t > samples[-1][0]:
            raise ParseError("time not strictly increasing", lineno, "t_ms")
        if current < 0:
            raise ParseError("negative current", lineno, "current_ma")
        samples.append((t, turns, current))
    return CycleLog(tuple(samples))


_RECORD_FIELDS = ("turns_per_cycle", "cycles_endured", "contraction_per_cycle_mm", "total_contraction_mm")


def parse_lifecycle_csv(text: str) -> list[LifeCycleRecord]:
    """Endurance records; the first column is ``load_kgf`` or ``load_n``."""
    first = next((ln for ln in text.splitlines() if not ln.startswith("#")), "")
    unit = "load_n" if first.strip().startswith("load_n") else "load_kgf"
    rows, _ = _csv_rows(text, (unit,) + _RECORD_FIELDS, "life-cycle records")
    records = []
    for lineno, fields in rows:
        load, turns, cycles, per_cycle, total = (
            _number(v, lineno, k) for v, k in zip(fields, (unit,) + _RECORD_FIELDS))
        if cycles != int(cycles):
            raise ParseError("cycles must be a whole number", lineno, "cycles_endured")
        try:
            records.append(LifeCycleRecord(load * KGF if unit == "load_kgf" else load,
                                           turns, int(cycles), per_cycle, total))
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
    return records


# ---------------------------------------------------------------- reports

# column kind -> decimals (None: integer count, "text": verbatim)
COLUMN_DECIMALS: dict[str, Any] = {
    "count": 0,
    "length": 2,
    "percent": 0,
    "rmse": 2,
    "turns": 1,
    "angle": 4,
    "exponent": 4,
    "ratio": 4,
    "text": None,
}


@dataclass(frozen=True)
class Column:
    name: str
    kind: str = "length"

    def __post_init__(self):
        if self.kind not in COLUMN_DECIMALS:
            raise ValueError(f"unknown column kind {self.kind!r}")


def format_value(value: Any, kind: str) -> str:
    decimals = COLUMN_DECIMALS[kind]
    if decimals is None:
        return "" if value is None else str(value)
    if value is None:
        return ""
    if isinstance(value, float) and not math.isfinite(value):
        raise ValueError(f"cannot format non-finite value {value!r}")
    q = Decimal(1).scaleb(-decimals)
    d = Decimal(repr(float(value)) if not isinstance(value, int) else str(value))
    out = d.quantize(q, rounding=ROUND_HALF_UP)
    if out == 0:
        out = abs(out)
    return f"{out:f}"


def write_report(columns: Sequence[Column], rows: Sequence[Sequence[Any]]) -> str:
    """CSV text with ``\\n`` line endings and fixed decimals per column kind."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([c.name for c in columns])
    for i, row in enumerate(rows):
        if len(row) != len(columns):
            raise ValueError(f"row {i} has {len(row)} values for {len(columns)} columns")
        writer.writerow([format_value(v, c.kind) for v, c in zip(row, columns)])
    return buf.getvalue()


def parse_report(text: str, columns: Sequence[Column]) -> list[list[Any]]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header != [c.name for c in columns]:
        raise ParseError(f"bad report header {header!r}", 1)
    rows = []
    for lineno, fields in enumerate(reader, start=2):
        if len(fields) != len(columns):
            raise ParseError(f"expected {len(columns)} fields, got {len(fields)}", lineno)
        row = []
        for f, c in zip(fields, columns):
            if COLUMN_DECIMALS[c.kind] is None:
                row.append(f)
            elif f == "":
                row.append(None)
            elif c.kind == "count":
                row.append(int(f))
            else:
                row.append(_number(f, lineno, c.name))
        rows.append(row)
    return rows


# ------------------------------------------------------------------- plots

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")


@dataclass(frozen=True)
class PlotSeries:
    label: str
    x: Sequence[float]
    y: Sequence[float]


def _ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    span = hi - lo
    raw = span / target
    mag = 10 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw)
    start = math.ceil(lo / step - 1e-9)
    ticks = []
    k = start
    while k * step <= hi + 1e-9 * step:
        ticks.append(round(k * step, 12))
        k += 1
    return ticks


def _fmt(v: float) -> str:
    s = f"{v:.2f}"
    return "0.00" if s == "-0.00" else s


def _tick_label(v: float) -> str:
    return f"{v:g}"


def render_plot(series: Sequence[PlotSeries], x_label: str, y_label: str,
                title: str = "", width: int = 640, height: int = 480) -> str:
    """Line chart as a self-contained SVG document."""
    if not series:
        raise ValueError("no series to plot")
    for s in series:
        if len(s.x) != len(s.y):
            raise ValueError(f"series {s.label!r}: {len(s.x)} x values but {len(s.y)} y values")
        if len(s.x) < 2:
            raise ValueError(f"series {s.label!r} needs at least 2 points")
        if not all(math.isfinite(v) for v in (*s.x, *s.y)):
            raise ValueError(f"series {s.label!r} contains non-finite values")

    xs = [v for s in series for v in s.x]
    ys = [v for s in series for v in s.y]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(min(ys), 0.0), max(ys)
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0

    left, right, top, bottom = 70, 160, 40, 60
    pw, ph = width - left - right, height - top - bottom

    def px(v):
        return left + (v - x0) / (x1 - x0) * pw

    def py(v):
        return top + ph - (v - y0) / (y1 - y0) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{width / 2:.2f}" y="24" text-anchor="middle" font-size="14">{escape(title)}</text>')
    out.append('<g class="axes" stroke="black" fill="none">')
    out.append(f'<line x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}"/>')
    out.append(f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}"/>')
    out.append("</g>")
    out.append('<g class="ticks">')
    for t in _ticks(x0, x1):
        out.append(f'<line x1="{_fmt(px(t))}" y1="{top + ph}" x2="{_fmt(px(t))}" y2="{top + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{_fmt(px(t))}" y="{top + ph + 18}" text-anchor="middle">{_tick_label(t)}</text>')
    for t in _ticks(y0, y1):
        out.append(f'<line x1="{left - 5}" y1="{_fmt(py(t))}" x2="{left}" y2="{_fmt(py(t))}" stroke="black"/>')
        out.append(f'<text x="{left - 8}" y="{_fmt(py(t) + 4)}" text-anchor="end">{_tick_label(t)}</text>')
    out.append("</g>")
    out.append(f'<text x="{left + pw / 2:.2f}" y="{height - 15}" text-anchor="middle">{escape(x_label)}</text>')
    out.append(f'<text transform="translate(18 {top + ph / 2:.2f}) rotate(-90)" text-anchor="middle">'
               f'{escape(y_label)}</text>')

    for i, s in enumerate(series):
        color = PALETTE[i % len(PALETTE)]
        points = " ".join(f"{_fmt(px(a))},{_fmt(py(b))}" for a, b in zip(s.x, s.y))
        out.append(f'<polyline class="series" data-label={quoteattr(s.label)} fill="none" '
                   f'stroke="{color}" stroke-width="1.5" points="{points}"/>')

    out.append('<g class="legend">')
    for i, s in enumerate(series):
        color = PALETTE[i % len(PALETTE)]
        ly = top + 10 + 18 * i
        lx = left + pw + 15
        out.append(f'<g class="legend-entry"><line x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" '
                   f'stroke="{color}" stroke-width="2"/>'
                   f'<text x="{lx + 26}" y="{ly + 4}">{escape(s.label)}</text></g>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
