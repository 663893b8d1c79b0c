"""Endurance analysis of twisted strings cycled into overtwist.

Loads are stored in newtons.  Contraction endured counts one direction per
cycle (twist in, not the untwist back).
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .calibration import IllPosedError

KGF = 9.80665  # N per kgf

# published totals are whole millimetres
CONSISTENCY_TOLERANCE_MM = 1.0


@dataclass(frozen=True)
class LifeCycleRecord:
    load_n: float
    turns_per_cycle: float
    cycles_endured: int
    contraction_per_cycle: float
    total_contraction: float

    def __post_init__(self):
        for name in ("load_n", "turns_per_cycle", "cycles_endured",
                     "contraction_per_cycle", "total_contraction"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)!r}")

    @classmethod
    def from_kgf(cls, load_kgf, turns_per_cycle, cycles_endured, contraction_per_cycle,
                 total_contraction):
        return cls(load_kgf * KGF, turns_per_cycle, cycles_endured, contraction_per_cycle,
                   total_contraction)

    @property
    def load_kgf(self) -> float:
        return self.load_n / KGF


@dataclass(frozen=True)
class ConsistencyReport:
    record: LifeCycleRecord
    computed_total: float
    delta: float  # published minus computed
    consistent: bool


@dataclass(frozen=True)
class LoadLifeFit:
    """``total_contraction = a * load**b`` with load in ``load_unit``."""

    a: float
    b: float
    residual_rms: float
    load_unit: str = "N"

    def __call__(self, load: float) -> float:
        return self.a * load ** self.b


@dataclass(frozen=True)
class CycleLog:
    samples: tuple[tuple[float, float, float], ...]  # (t_ms, turns, current_ma)
    failure_index: Optional[int] = None

    def __post_init__(self):
        for i, (t, _, current) in enumerate(self.samples):
            if i and not t > self.samples[i - 1][0]:
                raise ValueError(f"time not strictly increasing at sample {i}")
            if current < 0:
                raise ValueError(f"negative current at sample {i}")

    @property
    def current(self) -> list[float]:
        return [c for _, _, c in self.samples]


def total_contraction(rec: LifeCycleRecord) -> float:
    return rec.cycles_endured * rec.contraction_per_cycle


def validate_record(rec: LifeCycleRecord, tolerance: float = CONSISTENCY_TOLERANCE_MM) -> ConsistencyReport:
    computed = total_contraction(rec)
    delta = rec.total_contraction - computed
    return ConsistencyReport(rec, computed, delta, abs(delta) <= tolerance)


def _to_unit(load_n: float, unit: str) -> float:
    if unit == "N":
        return load_n
    if unit == "kgf":
        return load_n / KGF
    raise ValueError(f"unknown load unit {unit!r}")


def fit_load_life(records: Iterable[LifeCycleRecord], load_unit: str = "N") -> LoadLifeFit:
    """Power-law fit of mean endured contraction against load.

    Records are grouped by load, the published totals averaged per group,
    and a straight line fitted through ``(ln F, ln mean_total)`` by ordinary
    least squares.  Changing ``load_unit`` rescales ``a`` only.
    """
    groups: dict[float, list[float]] = defaultdict(list)
    for rec in records:
        groups[rec.load_n].append(rec.total_contraction)
    if len(groups) < 2:
        raise IllPosedError("load-life fit needs at least two distinct loads")
    loads = sorted(groups)
    x = np.log([_to_unit(f, load_unit) for f in loads])
    y = np.log([math.fsum(groups[f]) / len(groups[f]) for f in loads])
    # centring keeps the slope identical under load rescaling (a shift in x)
    xc = x - x.mean()
    b = float(np.dot(xc, y - y.mean()) / np.dot(xc, xc))
    ln_a = float(y.mean() - b * x.mean())
    resid = y - (ln_a + b * x)
    return LoadLifeFit(a=math.exp(ln_a), b=b, residual_rms=float(np.sqrt(np.mean(resid ** 2))),
                       load_unit=load_unit)


def predict_endurance(fit: LoadLifeFit, load: float, per_cycle_contraction: float) -> int:
    """Whole cycles until the fitted endured contraction is used up.

    ``load`` is expressed in ``fit.load_unit``.
    """
    if not per_cycle_contraction > 0:
        raise ValueError("per-cycle contraction must be positive")
    if not load > 0:
        raise ValueError("load must be positive")
    return math.floor(fit(load) / per_cycle_contraction)


def detect_failure(log: CycleLog | Sequence[float], threshold: float, hold: int = 1) -> Optional[int]:
    """Index of the first run of ``hold`` samples at or above ``threshold`` mA."""
    if hold < 1:
        raise ValueError("hold must be at least 1")
    current = log.current if isinstance(log, CycleLog) else list(log)
    run = 0
    for i, c in enumerate(current):
        run = run + 1 if c >= threshold else 0
        if run == hold:
            return i - hold + 1
    return None
