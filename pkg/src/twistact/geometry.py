"""Cross-section packing of a twisted string bundle.

Two diameter models are provided:

* ``proposed_packing`` -- two strings form a core pair at the origin and every
  further string settles, greedily, at the tangent position closest to the
  bundle axis.  Pairs are placed antipodally.
* ``existing_ring`` -- all strings sit on one ring around an empty centre.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

# geometric tolerance (mm) for overlap and tangency checks
TOL = 1e-9


class DiameterModel(str, Enum):
    PROPOSED_PACKING = "proposed_packing"
    EXISTING_RING = "existing_ring"


@dataclass(frozen=True)
class BundlePacking:
    circle_radius: float
    centers: tuple[tuple[float, float], ...]
    placement_order: tuple[int, ...]

    @property
    def n_strings(self) -> int:
        return len(self.centers)


@dataclass(frozen=True)
class DiameterPrediction:
    model: DiameterModel
    n_strings: int
    diameter: float
    signed_error_vs_measured: Optional[float] = None


def _check_args(n: int, d: float) -> None:
    if int(n) != n or n < 1:
        raise ValueError(f"string count must be a positive integer, got {n!r}")
    if not d > 0:
        raise ValueError(f"string diameter must be positive, got {d!r}")


def _angle(p: tuple[float, float]) -> float:
    a = math.atan2(p[1], p[0]) % (2.0 * math.pi)
    # atan2 of -0.0 style values can land just below 2*pi
    if a > 2.0 * math.pi - 1e-12:
        a = 0.0
    return a


def _shell_intersections(c1, c2, rho):
    """Points at distance ``rho`` from both ``c1`` and ``c2``."""
    dx, dy = c2[0] - c1[0], c2[1] - c1[1]
    dist = math.hypot(dx, dy)
    if dist == 0.0 or dist > 2.0 * rho + TOL:
        return []
    half = dist / 2.0
    h = math.sqrt(max(rho * rho - half * half, 0.0))
    mx, my = c1[0] + dx / 2.0, c1[1] + dy / 2.0
    ux, uy = -dy / dist, dx / dist
    return [(mx + h * ux, my + h * uy), (mx - h * ux, my - h * uy)]


def _candidates(centers: Sequence[tuple[float, float]], rho: float):
    out = []
    for i, c in enumerate(centers):
        norm = math.hypot(c[0], c[1])
        if norm > 0.0:
            ux, uy = c[0] / norm, c[1] / norm
            out.append((c[0] + rho * ux, c[1] + rho * uy))
            out.append((c[0] - rho * ux, c[1] - rho * uy))
        else:
            out.append((c[0] + rho, c[1]))
        for c2 in centers[i + 1:]:
            out.extend(_shell_intersections(c, c2, rho))
    return out


def _feasible(p, centers, rho) -> bool:
    return all(math.hypot(p[0] - c[0], p[1] - c[1]) >= rho - TOL for c in centers)


def _nearest_free_point(centers, radius):
    rho = 2.0 * radius
    feasible = [p for p in _candidates(centers, rho) if _feasible(p, centers, rho)]
    if not feasible:  # pragma: no cover - the outward radial point is always free
        raise RuntimeError("no tangent placement found")
    best = min(math.hypot(*p) for p in feasible)
    ties = [p for p in feasible if math.hypot(*p) <= best + TOL]
    return min(ties, key=_angle)


def pack_bundle(n: int, d: float) -> BundlePacking:
    """Greedy centre-seeking packing of ``n`` strings of diameter ``d`` (mm).

    The first two strings form the core pair at ``(+-d/2, 0)``.  Each later
    string goes to the free tangent point nearest the origin (ties broken by
    the smaller polar angle in ``[0, 2*pi)``); the second string of every pair
    is mirrored through the origin.  A single string sits on the axis.
    """
    _check_args(n, d)
    radius = d / 2.0
    if n == 1:
        return BundlePacking(radius, ((0.0, 0.0),), (0,))

    centers: list[tuple[float, float]] = [(radius, 0.0), (-radius, 0.0)]
    while len(centers) < n:
        # 0-based even index is the first string of a pair
        if len(centers) % 2 == 0:
            centers.append(_nearest_free_point(centers, radius))
        else:
            x, y = centers[-1]
            centers.append((-x + 0.0, -y + 0.0))
    return BundlePacking(radius, tuple(centers), tuple(range(n)))


def bundle_diameter_packed(p: BundlePacking) -> float:
    """Diameter of the enclosing circle centred on the core-pair midpoint."""
    if not p.centers:
        raise ValueError("empty packing")
    reach = max(math.hypot(x, y) for x, y in p.centers)
    return 2.0 * (reach + p.circle_radius)


def bundle_diameter_ring(n: int, d: float) -> float:
    _check_args(n, d)
    if n == 1:
        return d
    return d * (1.0 + 1.0 / math.sin(math.pi / n))


def diameter_model_error(predicted: float, measured: float) -> float:
    """Signed error, model minus measurement."""
    if not (predicted > 0 and measured > 0):
        raise ValueError("diameters must be positive")
    return predicted - measured


def predict_diameter(
    n: int, d: float, model: DiameterModel | str = DiameterModel.PROPOSED_PACKING,
    measured: Optional[float] = None,
) -> DiameterPrediction:
    model = DiameterModel(model)
    if model is DiameterModel.PROPOSED_PACKING:
        dia = bundle_diameter_packed(pack_bundle(n, d))
    else:
        dia = bundle_diameter_ring(n, d)
    err = None if measured is None else diameter_model_error(dia, measured)
    return DiameterPrediction(model, n, dia, err)


def packing_violations(p: BundlePacking) -> list[str]:
    """Human-readable list of broken packing invariants (empty when valid)."""
    problems = []
    c, r = p.centers, p.circle_radius
    for i in range(len(c)):
        for j in range(i + 1, len(c)):
            if math.dist(c[i], c[j]) < 2 * r - TOL:
                problems.append(f"circles {i} and {j} overlap")
    for i in range(2, len(c)):
        if not any(abs(math.dist(c[i], c[j]) - 2 * r) <= TOL for j in range(i)):
            problems.append(f"circle {i} touches no earlier circle")
    if len(c) >= 2 and (math.dist(c[0], (r, 0.0)) > TOL or math.dist(c[1], (-r, 0.0)) > TOL):
        problems.append("core pair is not at (+-r, 0)")
    for k in range(3, len(c), 2):
        if math.dist(c[k], (-c[k - 1][0], -c[k - 1][1])) > TOL:
            problems.append(f"circle {k} is not antipodal to circle {k - 1}")
    return problems


def ring_centers(n: int, d: float) -> tuple[tuple[float, float], ...]:
    """String centres of the single-ring model, first string on the +x axis."""
    _check_args(n, d)
    if n == 1:
        return ((0.0, 0.0),)
    radius = d / (2.0 * math.sin(math.pi / n))
    return tuple((radius * math.cos(2 * math.pi * k / n), radius * math.sin(2 * math.pi * k / n))
                 for k in range(n))
