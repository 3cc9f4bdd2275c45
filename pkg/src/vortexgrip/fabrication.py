"""SLA nozzle-shrinkage model and its inverse (CAD diameter compensation).

Stereolithography shrinks small printed bores: the printed diameter is
``d_cad * (1 - k)`` where the shrinkage fraction ``k`` follows an
exponential regression in the CAD diameter, fitted per resin over
0.4 - 1.2 mm.  Outside that window the regressions are unvalidated and the
module refuses to extrapolate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NoRoot, OutOfCalibratedRange

VALID_RANGE_MM = (0.4, 1.2)

# Below this printed diameter, resin tends to cure inside the bore
# (capillary blockage), so results get a warning flag.
CAPILLARY_RISK_BELOW_MM = 0.55

_BISECTION_MAX_ITERATIONS = 40


@dataclass(frozen=True)
class ResinMaterial:
    """Exponential shrinkage regression ``k = a * exp(-b * d_cad)``."""

    name: str
    coefficient_a: float
    coefficient_b: float  # 1/mm
    valid_range_mm: tuple[float, float] = VALID_RANGE_MM

    def __post_init__(self):
        if self.coefficient_a <= 0 or self.coefficient_b <= 0:
            raise ValueError("regression coefficients must be positive")
        lo, hi = self.valid_range_mm
        if not lo < hi:
            raise ValueError("valid range must be non-empty")


GREY = ResinMaterial("grey", coefficient_a=6.5028, coefficient_b=5.066)
TRANSPARENT = ResinMaterial("transparent", coefficient_a=3.856,
                            coefficient_b=3.429)

MATERIALS: dict[str, ResinMaterial] = {m.name: m for m in (GREY, TRANSPARENT)}


@dataclass(frozen=True)
class CompensationResult:
    target_printed_mm: float
    cad_diameter_mm: float
    shrinkage_fraction: float
    iterations: int
    capillary_risk: bool

    def as_dict(self) -> dict:
        return {
            "target_printed_mm": self.target_printed_mm,
            "cad_diameter_mm": self.cad_diameter_mm,
            "shrinkage_fraction": self.shrinkage_fraction,
            "iterations": self.iterations,
            "capillary_risk": self.capillary_risk,
        }


def _check_range(material: ResinMaterial, cad_diameter_mm: float) -> None:
    lo, hi = material.valid_range_mm
    if not lo <= cad_diameter_mm <= hi:
        raise OutOfCalibratedRange(
            f"CAD diameter {cad_diameter_mm:.4f} mm is outside the "
            f"calibrated range [{lo}, {hi}] mm for {material.name} resin")


def shrinkage_coefficient(material: ResinMaterial,
                          cad_diameter_mm: float) -> float:
    """Shrinkage fraction at a CAD diameter, clamped to [0, 1)."""
    _check_range(material, cad_diameter_mm)
    k = material.coefficient_a * math.exp(
        -material.coefficient_b * cad_diameter_mm)
    return min(max(k, 0.0), math.nextafter(1.0, 0.0))


def printed_diameter(material: ResinMaterial, cad_diameter_mm: float) -> float:
    """Diameter that actually prints for a given CAD diameter."""
    return cad_diameter_mm * (1.0 - shrinkage_coefficient(material,
                                                          cad_diameter_mm))


def compensate(material: ResinMaterial, target_printed_mm: float,
               tolerance_mm: float = 1e-6) -> CompensationResult:
    """CAD diameter to specify so the bore prints at the target diameter.

    The printed-diameter map is strictly increasing on the calibrated range
    (its derivative ``1 + a e^{-bd}(bd - 1)`` is positive there), so the
    inverse is found by bracketed bisection.  Raises ``NoRoot`` when the
    target lies outside what the calibrated range can produce.
    """
    lo, hi = material.valid_range_mm
    f_lo = printed_diameter(material, lo) - target_printed_mm
    f_hi = printed_diameter(material, hi) - target_printed_mm
    if f_lo > 0.0 or f_hi < 0.0:
        raise NoRoot(
            f"printed diameter {target_printed_mm:.4f} mm is not reachable "
            f"with {material.name} resin (CAD range [{lo}, {hi}] mm)")
    iterations = 0
    a, b = lo, hi
    mid = 0.5 * (a + b)
    while iterations < _BISECTION_MAX_ITERATIONS and (b - a) > tolerance_mm:
        mid = 0.5 * (a + b)
        if printed_diameter(material, mid) < target_printed_mm:
            a = mid
        else:
            b = mid
        iterations += 1
    mid = 0.5 * (a + b)
    return CompensationResult(
        target_printed_mm=target_printed_mm,
        cad_diameter_mm=mid,
        shrinkage_fraction=shrinkage_coefficient(material, mid),
        iterations=iterations,
        capillary_risk=target_printed_mm < CAPILLARY_RISK_BELOW_MM,
    )
