"""Displacement kinematics of a twisted string actuator with a separator.

Angles are radians throughout this module; use :func:`turns_to_rad` and
:func:`rad_to_turns` at the edges.  Lengths are millimetres.

The displacement of the free end is the extra string drawn into the twisting
zone of length ``L``::

    X = sqrt(L**2 + (S/2 + alpha*r)**2)
    x = X - L

``S`` is the separator hole spacing and ``r`` the bundle radius.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

TWO_PI = 2.0 * math.pi


class OutOfRangeError(ValueError):
    """Displacement lies below what the model produces at zero twist."""


def turns_to_rad(turns: float) -> float:
    return turns * TWO_PI


def rad_to_turns(alpha: float) -> float:
    return alpha / TWO_PI


@dataclass(frozen=True)
class KinematicParams:
    L: float
    S: float
    r: float

    def __post_init__(self):
        if not self.L > 0:
            raise ValueError(f"twisting zone length must be positive, got {self.L!r}")
        if not self.S >= 0:
            raise ValueError(f"separator spacing must be non-negative, got {self.S!r}")
        if not self.r > 0:
            raise ValueError(f"bundle radius must be positive, got {self.r!r}")


@dataclass(frozen=True)
class KinematicState:
    alpha: float
    x: float
    X: float
    beta: float
    r_effective: float


@dataclass(frozen=True)
class ContractionSummary:
    contraction: float
    total_length: float
    percent: float


@dataclass(frozen=True)
class VariableSolution:
    x: float
    converged: bool
    iterations: int


def _check_alpha(alpha: float) -> None:
    if not alpha >= 0:
        raise ValueError(f"rotation must be non-negative, got {alpha!r}")


def _displacement(p: KinematicParams, alpha: float, r: float) -> float:
    u = p.S / 2.0 + alpha * r
    # u**2 / (X + L) == X - L without cancellation at small twist
    return u * u / (math.hypot(p.L, u) + p.L)


def forward_constant(p: KinematicParams, alpha: float) -> float:
    """Displacement (mm) at shaft rotation ``alpha`` (rad), fixed radius.

    At ``alpha = 0`` a non-zero separator spacing leaves a small positive
    offset; see :func:`zero_offset_displacement` for the re-zeroed form.
    """
    _check_alpha(alpha)
    return _displacement(p, alpha, p.r)


def zero_offset_displacement(p: KinematicParams, alpha: float) -> float:
    return forward_constant(p, alpha) - forward_constant(p, 0.0)


def inverse_constant(p: KinematicParams, x: float) -> float:
    """Rotation (rad) that produces displacement ``x`` under the fixed-radius model."""
    offset = forward_constant(p, 0.0)
    if x < offset:
        # roundoff just below the offset still maps to zero twist
        if offset - x <= 1e-12 * max(1.0, p.L):
            return 0.0
        raise OutOfRangeError(
            f"displacement {x!r} mm is below the zero-twist offset {offset:.6g} mm")
    alpha = (math.sqrt(x * (x + 2.0 * p.L)) - p.S / 2.0) / p.r
    return max(alpha, 0.0)


def variable_radius(p: KinematicParams, x: float) -> float:
    """Bundle radius grown with the string volume drawn into the zone."""
    return p.r * math.sqrt((p.L + x) / p.L)


def forward_variable(
    p: KinematicParams,
    alpha: float,
    reference_x: Optional[float] = None,
    tol: float = 1e-6,
    max_iter: int = 200,
) -> VariableSolution:
    """Displacement with the radius grown as ``r0*sqrt((L + x)/L)``.

    With ``reference_x`` the radius is evaluated once at that displacement
    (typically a measured one).  Otherwise the self-consistent fixed point
    is iterated from the constant-radius value; iterates beyond ``100*L`` or
    an exhausted budget give ``converged=False`` with the last iterate.
    """
    _check_alpha(alpha)
    if reference_x is not None:
        if not reference_x >= 0:
            raise ValueError(f"reference displacement must be non-negative, got {reference_x!r}")
        return VariableSolution(_displacement(p, alpha, variable_radius(p, reference_x)), True, 1)

    x = forward_constant(p, alpha)
    for it in range(1, max_iter + 1):
        x_new = _displacement(p, alpha, variable_radius(p, x))
        if not math.isfinite(x_new) or x_new > 100.0 * p.L:
            return VariableSolution(x_new, False, it)
        if abs(x_new - x) < tol:
            return VariableSolution(x_new, True, it)
        x = x_new
    return VariableSolution(x, False, max_iter)


def contraction_percent(contraction: float, L: float) -> ContractionSummary:
    if not contraction >= 0:
        raise ValueError("contraction must be non-negative")
    if not L > 0:
        raise ValueError("twisting zone length must be positive")
    total = L + contraction
    return ContractionSummary(contraction, total, 100.0 * contraction / total)


def overtwist_onset_turns(p: KinematicParams, total_length: float, onset_fraction: float) -> float:
    """Turns at which contraction reaches ``onset_fraction`` of ``total_length``."""
    if not 0 < onset_fraction < 1:
        raise ValueError(f"onset fraction must lie in (0, 1), got {onset_fraction!r}")
    if not total_length > p.L:
        raise ValueError("total length must exceed the twisting zone length")
    return rad_to_turns(inverse_constant(p, onset_fraction * total_length))


def helix_state(p: KinematicParams, alpha: float) -> KinematicState:
    x = forward_constant(p, alpha)
    beta = math.atan((p.S / 2.0 + alpha * p.r) / p.L)
    return KinematicState(alpha=alpha, x=x, X=p.L + x, beta=beta, r_effective=p.r)
