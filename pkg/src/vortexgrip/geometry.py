"""Gripper/surface geometry and the clearance (gap) field between them.

All lengths are millimetres.  The gripper is modelled face-down over the
surface: the active face sits in the plane z = 0, the cylindrical cavity is
recessed upward to z = h_c, and a quarter-torus chamfer blends the cavity
wall into the face.  Surfaces are rigid here; tissue compliance is applied
by the experiment-protocol layer.

Everything in this module is a pure value computation: all types are frozen
and safe to share across threads.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import SurfaceTooSmall

# Radius used to encode a flat surface in feature space.
FLAT_RADIUS_MM = 1.0e6

DEFAULT_N_RADIAL = 64
DEFAULT_N_ANGULAR = 128


class SurfaceFamily(str, enum.Enum):
    FLAT = "flat"
    DOME_CONVEX = "dome_convex"
    CYLINDER_CONVEX = "cylinder_convex"
    DOME_CONCAVE = "dome_concave"
    CYLINDER_CONCAVE = "cylinder_concave"


CURVED_FAMILIES = (
    SurfaceFamily.DOME_CONVEX,
    SurfaceFamily.CYLINDER_CONVEX,
    SurfaceFamily.DOME_CONCAVE,
    SurfaceFamily.CYLINDER_CONCAVE,
)


@dataclass(frozen=True)
class FrictionElementSpec:
    """Raised pads on the active face that suppress sliding and vibration."""

    count: int = 3
    element_diameter_mm: float = 2.0
    element_height_mm: float = 0.4
    angular_spacing_deg: float = 120.0

    def __post_init__(self):
        if self.count < 3:
            raise ValueError("friction elements need count >= 3")
        if self.element_height_mm <= 0:
            raise ValueError("element height must be positive")
        if abs(self.count * self.angular_spacing_deg - 360.0) > 1e-9:
            raise ValueError("count * angular_spacing must equal 360 degrees")


@dataclass(frozen=True)
class GripperGeometry:
    """The five geometric parameters of the gripper, plus optional pads."""

    nozzle_diameter_mm: float
    gripper_diameter_mm: float = 20.0
    cavity_diameter_mm: float = 14.0
    cavity_height_mm: float = 4.0
    nozzle_count: int = 2
    cavity_chamfer_radius_mm: float = 1.0
    friction_elements: FrictionElementSpec | None = None

    def __post_init__(self):
        if not (0.0 < self.nozzle_diameter_mm < self.cavity_diameter_mm
                < self.gripper_diameter_mm):
            raise ValueError("need 0 < d_nozzle < d_cavity < d_gripper")
        if self.cavity_height_mm <= 0:
            raise ValueError("cavity height must be positive")
        if self.nozzle_count < 1:
            raise ValueError("at least one nozzle")
        max_chamfer = (self.gripper_diameter_mm - self.cavity_diameter_mm) / 2
        if not (0.0 <= self.cavity_chamfer_radius_mm <= max_chamfer):
            raise ValueError(
                f"chamfer radius must be in [0, {max_chamfer}] mm")

    @property
    def face_radius_mm(self) -> float:
        return self.gripper_diameter_mm / 2

    @property
    def cavity_radius_mm(self) -> float:
        return self.cavity_diameter_mm / 2


# The three catalogue grippers used throughout the characterization runs.
STANDARD_GRIPPERS: dict[str, GripperGeometry] = {
    "G1": GripperGeometry(nozzle_diameter_mm=0.6),
    "G2": GripperGeometry(nozzle_diameter_mm=0.8),
    "G3": GripperGeometry(nozzle_diameter_mm=1.0),
}

# Radii (mm) of the curved test surfaces in the standard factorial plan.
STANDARD_RADII_MM = (15.0, 20.0, 25.0, 30.0, 35.0, 40.0, 45.0, 50.0, 75.0, 100.0)


@dataclass(frozen=True)
class SurfaceSpec:
    """One of the five parametric surface families.

    ``stiffness_n_per_mm`` is the linear tissue-compliance constant used by
    the experiment protocol; it does not affect the rigid gap field.
    """

    family: SurfaceFamily
    radius_mm: float = FLAT_RADIUS_MM
    stiffness_n_per_mm: float = 0.5

    def __post_init__(self):
        if self.family == SurfaceFamily.FLAT:
            object.__setattr__(self, "radius_mm", FLAT_RADIUS_MM)
        if self.radius_mm <= 0:
            raise ValueError("surface radius must be positive")
        if self.stiffness_n_per_mm <= 0:
            raise ValueError("stiffness must be positive")

    @property
    def label(self) -> str:
        return self.family.value


def flat_surface(stiffness_n_per_mm: float = 0.5) -> SurfaceSpec:
    return SurfaceSpec(SurfaceFamily.FLAT, FLAT_RADIUS_MM, stiffness_n_per_mm)


@dataclass(frozen=True)
class GapField:
    """Clearance between the gripper and the undeformed surface.

    ``gap_mm`` is the clearance contract: measured down from the face plane
    where the surface lies below it, and up to the actual solid boundary
    (chamfer or cavity ceiling) where the surface protrudes above the plane.
    Cavity-mouth clearances saturate at the cavity height.

    ``plane_offset_mm`` is the surface's signed distance below the face
    plane (negative where it protrudes above it); the suction reach decays
    away from that plane, faster downward than into the swirl.
    ``channel_mm`` is the vertical clearance to the gripper solid itself
    (face, chamfer or cavity ceiling); it is what the escaping air flows
    through and stays continuous where a protruding surface crosses the
    face plane.
    """

    r_mm: np.ndarray            # (n_r,) radial nodes, 0 .. face radius
    theta_rad: np.ndarray       # (n_t,) angular nodes
    gap_mm: np.ndarray          # (n_r, n_t) clearance
    plane_offset_mm: np.ndarray  # (n_r, n_t) signed depth below face plane
    channel_mm: np.ndarray      # (n_r, n_t) clearance to the solid
    weight_mm2: np.ndarray      # (n_r, n_t) polar area weights
    cavity_radius_mm: float
    face_radius_mm: float
    cavity_height_mm: float
    standoff_mm: float
    mean_gap_mm: float
    min_gap_mm: float

    def rim_gaps_mm(self) -> np.ndarray:
        """Clearance around the outermost ring (the leak channel exit)."""
        return self.gap_mm[-1, :]


def _sagitta(radius_mm: float, chord_mm: np.ndarray) -> np.ndarray:
    """Height of a circular arc at lateral distance ``chord`` from its apex.

    Beyond the arc's own radius the drop is held at the full radius (the
    surface has fallen away entirely).
    """
    c = np.minimum(np.abs(chord_mm), radius_mm)
    return radius_mm - np.sqrt(radius_mm * radius_mm - c * c)


def _surface_profile(surface: SurfaceSpec, r: np.ndarray,
                     theta: np.ndarray) -> np.ndarray:
    """Surface height (mm) relative to its own contact extremum.

    Convex families drop away from the apex (negative values); concave
    families rise away from the trough (positive values).  Cylinder axes
    run along theta = 0.
    """
    rr = r[:, None]
    if surface.family == SurfaceFamily.FLAT:
        return np.zeros((r.size, theta.size))
    if surface.family in (SurfaceFamily.DOME_CONVEX, SurfaceFamily.DOME_CONCAVE):
        chord = np.broadcast_to(rr, (r.size, theta.size))
    else:
        chord = rr * np.abs(np.sin(theta))[None, :]
    sag = _sagitta(surface.radius_mm, chord)
    if surface.family in (SurfaceFamily.DOME_CONVEX, SurfaceFamily.CYLINDER_CONVEX):
        return -sag
    return sag


def _gripper_boundary(gripper: GripperGeometry, r: np.ndarray) -> np.ndarray:
    """Height (mm) of the gripper solid above the face plane at radius r."""
    rc = gripper.cavity_radius_mm
    rf = gripper.cavity_chamfer_radius_mm
    z = np.zeros_like(r)
    z[r <= rc] = gripper.cavity_height_mm
    if rf > 0:
        band = (r > rc) & (r < rc + rf)
        # quarter-torus fillet tangent to the cavity wall and the face
        dx = (rc + rf) - r[band]
        z[band] = rf - np.sqrt(np.maximum(rf * rf - dx * dx, 0.0))
    return z


def _polar_grid(face_radius_mm: float, n_radial: int, n_angular: int):
    """Endpoint-inclusive radial nodes with trapezoid ring weights."""
    r = np.linspace(0.0, face_radius_mm, n_radial)
    theta = np.arange(n_angular) * (2.0 * math.pi / n_angular)
    dr = r[1] - r[0]
    wr = np.full(n_radial, dr)
    wr[0] = wr[-1] = dr / 2.0
    dtheta = 2.0 * math.pi / n_angular
    weight = (r * wr)[:, None] * np.full(n_angular, dtheta)[None, :]
    return r, theta, weight


class _GapKernel:
    """Standoff-independent part of the gap field for one gripper/surface pair.

    ``profile_mm`` is the surface height at zero standoff (contact), so the
    field at any standoff is a clamp-and-shift away.  Cached by callers that
    sweep many standoffs over the same pair.
    """

    def __init__(self, gripper: GripperGeometry, surface: SurfaceSpec,
                 n_radial: int = DEFAULT_N_RADIAL,
                 n_angular: int = DEFAULT_N_ANGULAR):
        if surface.family in CURVED_FAMILIES and \
                surface.radius_mm < gripper.cavity_radius_mm:
            raise SurfaceTooSmall(
                f"surface radius {surface.radius_mm} mm is below the cavity "
                f"radius {gripper.cavity_radius_mm} mm; the face cannot meet it")
        self.gripper = gripper
        self.surface = surface
        self.r_mm, self.theta_rad, self.weight_mm2 = _polar_grid(
            gripper.face_radius_mm, n_radial, n_angular)
        self.boundary_mm = _gripper_boundary(gripper, self.r_mm)
        raw = _surface_profile(surface, self.r_mm, self.theta_rad)
        # Drop the surface until it just touches the gripper solid.
        contact = np.max(raw - self.boundary_mm[:, None])
        self.profile_mm = raw - contact
        self.cavity_mask = self.r_mm <= gripper.cavity_radius_mm
        self.annulus_start = int(np.searchsorted(
            self.r_mm, gripper.cavity_radius_mm, side="right"))
        # Standoff sweeps reuse the same height grid many times over.
        self._gaps_cache: dict[bytes, tuple[np.ndarray, np.ndarray]] = {}

    def surface_height_mm(self, standoff_mm):
        """Surface height below/above the face plane; standoff may be an array."""
        s = np.asarray(standoff_mm, dtype=float)
        return self.profile_mm[None, ...] - s[..., None, None] \
            if s.ndim else self.profile_mm - s

    def gaps(self, standoff_mm):
        """Return (gap_mm, plane_offset_mm, channel_mm) arrays for one or
        many standoffs."""
        s = np.asarray(standoff_mm, dtype=float)
        key = None
        if s.ndim == 1 and s.size >= 8:
            key = s.tobytes()
            cached = self._gaps_cache.get(key)
            if cached is not None:
                return cached
        z_s = self.surface_height_mm(s)
        offset = -z_s
        boundary = self.boundary_mm[:, None]
        channel = boundary - z_s
        gap = np.where(z_s > 0.0, channel, offset)
        h_c = self.gripper.cavity_height_mm
        if z_s.ndim == 3:
            cav = self.cavity_mask[None, :, None]
        else:
            cav = self.cavity_mask[:, None]
        gap = np.where(cav, np.minimum(gap, h_c), gap)
        if key is not None:
            for arr in (gap, offset, channel):
                arr.setflags(write=False)
            if len(self._gaps_cache) < 8:
                self._gaps_cache[key] = (gap, offset, channel)
        return gap, offset, channel

    def field(self, standoff_mm: float) -> GapField:
        gap, offset, channel = self.gaps(float(standoff_mm))
        w = self.weight_mm2
        wsum = w.sum()
        for arr in (gap, offset, channel):
            arr.setflags(write=False)
        return GapField(
            r_mm=self.r_mm,
            theta_rad=self.theta_rad,
            gap_mm=gap,
            plane_offset_mm=offset,
            channel_mm=channel,
            weight_mm2=w,
            cavity_radius_mm=self.gripper.cavity_radius_mm,
            face_radius_mm=self.gripper.face_radius_mm,
            cavity_height_mm=self.gripper.cavity_height_mm,
            standoff_mm=float(standoff_mm),
            mean_gap_mm=float((gap * w).sum() / wsum),
            min_gap_mm=float(gap.min()),
        )


def gap_field(gripper: GripperGeometry, surface: SurfaceSpec,
              standoff_mm: float,
              n_radial: int = DEFAULT_N_RADIAL,
              n_angular: int = DEFAULT_N_ANGULAR) -> GapField:
    """Clearance field between the gripper face and the undeformed surface.

    ``standoff_mm`` is the minimum clearance, i.e. how far the gripper has
    retreated from the touching configuration.  Raises ``SurfaceTooSmall``
    when the surface curvature cannot meet the face.
    """
    if standoff_mm < 0:
        raise ValueError("standoff must be non-negative")
    return _GapKernel(gripper, surface, n_radial, n_angular).field(standoff_mm)


def leakage_asymmetry(field: GapField) -> float:
    """Spread of the rim clearance, (max - min) / (max + min), in [0, 1].

    Zero for uniform rims; 1 when one side of the rim is fully closed while
    the other is open (the cylinder-contact situation that chokes leakage on
    one side only).
    """
    rim = field.rim_gaps_mm()
    hi = float(rim.max())
    lo = float(rim.min())
    total = hi + lo
    if total <= 0.0:
        return 0.0
    return (hi - lo) / total
