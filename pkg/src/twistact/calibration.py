"""Fitting the kinematic model to measured (turns, displacement) series."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .kinematics import KinematicParams, forward_constant, forward_variable, turns_to_rad


class IllPosedError(ValueError):
    """The data cannot determine the requested quantity."""


class ModelKind(str, Enum):
    CONSTANT = "constant"
    VARIABLE = "variable"


@dataclass(frozen=True)
class MeasurementSeries:
    """Ordered ``(turns, displacement_mm)`` samples plus metadata.

    Samples are sorted by turns on construction; repeated turn values are
    rejected.
    """

    samples: tuple[tuple[float, float], ...]
    n_strings: Optional[int] = None
    load_n: Optional[float] = None
    label: str = ""

    def __post_init__(self):
        samples = tuple(sorted((float(a), float(x)) for a, x in self.samples))
        for (a0, _), (a1, _) in zip(samples, samples[1:]):
            if not a1 > a0:
                raise ValueError(f"duplicate turns value {a1!r}")
        for a, x in samples:
            if not (math.isfinite(a) and math.isfinite(x)):
                raise ValueError("samples must be finite")
            if a < 0:
                raise ValueError(f"negative turns {a!r}")
            if x < 0:
                raise ValueError(f"negative displacement {x!r} at turns={a!r}")
        object.__setattr__(self, "samples", samples)

    def __len__(self):
        return len(self.samples)

    @property
    def turns(self) -> np.ndarray:
        return np.array([a for a, _ in self.samples])

    @property
    def displacement(self) -> np.ndarray:
        return np.array([x for _, x in self.samples])


@dataclass(frozen=True)
class FitResult:
    r_hat: float
    rmse: float
    iterations: int
    converged: bool
    L_hat: Optional[float] = None


@dataclass(frozen=True)
class ComparisonReport:
    rmse_constant: float
    rmse_variable: float
    winner: ModelKind
    # (turns, measured, constant - measured, variable - measured)
    residuals: tuple[tuple[float, float, float, float], ...] = field(default=())


def model_predictions(p: KinematicParams, model: ModelKind | str, s: MeasurementSeries) -> list[float]:
    """Model displacement at every sample; the variable model takes the
    measured displacement as its radius reference."""
    model = ModelKind(model)
    if model is ModelKind.CONSTANT:
        return [forward_constant(p, turns_to_rad(a)) for a, _ in s.samples]
    return [forward_variable(p, turns_to_rad(a), reference_x=x).x for a, x in s.samples]


def _rmse(pred: Sequence[float], meas: Sequence[float]) -> float:
    # fsum is exactly rounded, so the result does not depend on sample order
    return math.sqrt(math.fsum((m - y) ** 2 for m, y in zip(pred, meas)) / len(meas))


def rmse(p: KinematicParams, model: ModelKind | str, s: MeasurementSeries) -> float:
    if len(s) == 0:
        raise ValueError("empty measurement series")
    return _rmse(model_predictions(p, model, s), [x for _, x in s.samples])


def _constant_curve(alpha, L, S, r):
    u = S / 2.0 + alpha * r
    return u * u / (np.hypot(L, u) + L)


def _require_fit_data(s: MeasurementSeries) -> None:
    if len(s) < 2:
        raise IllPosedError(f"need at least 2 samples to fit, got {len(s)}")


def _fit_scalar(objective, lo, hi, xatol, grid_size=400):
    """Bounded 1-D minimisation: coarse log grid to bracket, then Brent.

    Returns ``(argmin, min, evaluations, converged)``.  The result is never
    worse than either bracket endpoint.
    """
    grid = np.geomspace(lo, hi, grid_size)
    values = np.array([objective(v) for v in grid])
    i = int(np.argmin(values))
    a, b = grid[max(i - 1, 0)], grid[min(i + 1, grid_size - 1)]
    res = minimize_scalar(objective, bounds=(a, b), method="bounded",
                          options={"xatol": xatol, "maxiter": 500})
    best_x, best_f = float(grid[i]), float(values[i])
    if res.fun <= best_f:
        best_x, best_f = float(res.x), float(res.fun)
    return best_x, best_f, grid_size + int(res.nfev), bool(res.success)


def fit_bundle_radius(
    s: MeasurementSeries, L: float, S: float,
    bounds: tuple[float, float] = (1e-4, 10.0), xatol: float = 1e-6,
) -> FitResult:
    """Bundle radius minimising the constant-model RMSE against ``s``."""
    _require_fit_data(s)
    alpha = turns_to_rad(s.turns)
    if np.all(alpha == alpha[0]):
        raise IllPosedError("all samples share one rotation value")
    meas = s.displacement
    KinematicParams(L, S, 1.0)  # validates L and S

    def objective(r):
        return float(np.sqrt(np.mean((_constant_curve(alpha, L, S, r) - meas) ** 2)))

    r_hat, _, nfev, ok = _fit_scalar(objective, bounds[0], bounds[1], xatol)
    return FitResult(r_hat=r_hat, rmse=rmse(KinematicParams(L, S, r_hat), ModelKind.CONSTANT, s),
                     iterations=nfev, converged=ok)


def fit_radius_and_length(
    s: MeasurementSeries, L0: float, S: float,
    length_bounds: Optional[tuple[float, float]] = None,
    radius_bounds: tuple[float, float] = (1e-4, 10.0),
    max_outer: int = 50, xatol: float = 1e-6,
) -> FitResult:
    """Joint fit of radius and twisting zone length by coordinate descent.

    Each outer iteration minimises over ``L`` then ``r``, followed by a
    pattern move along the net step of the iteration (kept only when it
    lowers the cost), which keeps the descent from zig-zagging along the
    narrow ``(L, r)`` valley.
    """
    _require_fit_data(s)
    alpha = turns_to_rad(s.turns)
    meas = s.displacement
    lo, hi = length_bounds or (0.5 * L0, 2.0 * L0)
    r_lo, r_hi = radius_bounds

    def cost(L, r):
        return float(np.sqrt(np.mean((_constant_curve(alpha, L, S, r) - meas) ** 2)))

    L, r = L0, fit_bundle_radius(s, L0, S, radius_bounds, xatol).r_hat
    best = cost(L, r)
    converged = False
    outer = 0
    for outer in range(1, max_outer + 1):
        L_new, _, _, _ = _fit_scalar(lambda v: cost(v, r), lo, hi, xatol, grid_size=100)
        r_new, _, _, _ = _fit_scalar(lambda v: cost(L_new, v), r_lo, r_hi, xatol)
        dL, dr = L_new - L, r_new - r
        # largest step multiple that stays inside both bounds
        t_max = min(_room(L_new, dL, lo, hi), _room(r_new, dr, r_lo, r_hi), 1e3)
        if t_max > 0:
            res = minimize_scalar(lambda t: cost(L_new + t * dL, r_new + t * dr),
                                  bounds=(0.0, t_max), method="bounded", options={"xatol": 1e-10})
            if res.fun < cost(L_new, r_new):
                L_new, r_new = float(L_new + res.x * dL), float(r_new + res.x * dr)
        new = cost(L_new, r_new)
        if new > best:
            converged = True
            break
        step = max(abs(L_new - L), abs(r_new - r))
        L, r, improvement, best = L_new, r_new, best - new, new
        if step < xatol or improvement < 1e-12:
            converged = True
            break
    return FitResult(r_hat=r, rmse=rmse(KinematicParams(L, S, r), ModelKind.CONSTANT, s),
                     iterations=outer, converged=converged, L_hat=L)


def _room(value, step, lo, hi):
    if step > 0:
        return (hi - value) / step
    if step < 0:
        return (lo - value) / step
    return math.inf


def compare_models(p: KinematicParams, s: MeasurementSeries) -> ComparisonReport:
    if len(s) < 2:
        raise IllPosedError(f"insufficient data: {len(s)} sample(s), need at least 2")
    const = model_predictions(p, ModelKind.CONSTANT, s)
    var = model_predictions(p, ModelKind.VARIABLE, s)
    meas = [x for _, x in s.samples]
    e_c, e_v = _rmse(const, meas), _rmse(var, meas)
    winner = ModelKind.VARIABLE if e_v < e_c else ModelKind.CONSTANT
    residuals = tuple((a, x, c - x, v - x) for (a, x), c, v in zip(s.samples, const, var))
    return ComparisonReport(e_c, e_v, winner, residuals)
