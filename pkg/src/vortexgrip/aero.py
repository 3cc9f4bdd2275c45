"""Reduced-order vortex-flow model: nozzle flow, cavity swirl, lift.

The pipeline is gap field -> nozzle exit state -> swirl state -> pressure
field -> net lift, swept over standoff to produce a lift-versus-height
curve.  The closure models (swirl efficiency, gap attenuation, rim-asymmetry
penalty, channel overpressure) are deliberately simple; their constants live
in ``AeroConstants`` and are fitted by the calibration routine in
:mod:`vortexgrip.protocol`.

Everything here is stateless pure evaluation with fixed-order summation, so
results are bit-identical regardless of how callers parallelize sweeps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .geometry import (
    DEFAULT_N_ANGULAR,
    DEFAULT_N_RADIAL,
    GapField,
    GripperGeometry,
    SurfaceSpec,
    _GapKernel,
    leakage_asymmetry,
)

MM = 1e-3  # metres per millimetre


@dataclass(frozen=True)
class AirModel:
    """Ambient air reference state (20 C, sea level by default)."""

    density_kg_m3: float = 1.204
    ambient_pressure_kpa: float = 101.325
    gamma: float = 1.4
    gas_constant_j_kg_k: float = 287.05
    temperature_k: float = 293.15
    dynamic_viscosity_pa_s: float = 1.81e-5

    def __post_init__(self):
        if self.density_kg_m3 <= 0:
            raise ValueError("density must be positive")
        if self.gamma <= 1.0:
            raise ValueError("gamma must exceed 1")

    @property
    def critical_pressure_ratio(self) -> float:
        """Ambient/stagnation ratio at or below which the nozzle chokes."""
        g = self.gamma
        return (2.0 / (g + 1.0)) ** (g / (g - 1.0))


@dataclass(frozen=True)
class NozzleFlow:
    """Compressible orifice exit state for the tangential nozzles.

    ``jet_velocity_m_s`` is the fully-expanded isentropic jet speed; it
    equals the exit velocity for subsonic operation and exceeds it for a
    choked (underexpanded) nozzle.  The swirl model is driven by the jet
    velocity, the throat state sets the mass flow.
    """

    exit_velocity_m_s: float
    jet_velocity_m_s: float
    mass_flow_per_nozzle_kg_s: float
    total_mass_flow_kg_s: float
    choked: bool
    discharge_coefficient: float
    supply_pressure_kpa: float = 0.0


@dataclass(frozen=True)
class VortexFlowState:
    """Cavity swirl state feeding the forced-vortex lift formula."""

    circumferential_velocity_m_s: float
    angular_velocity_per_s: float
    effective_density_kg_m3: float
    supply_pressure_kpa: float
    total_mass_flow_kg_s: float = 0.0


@dataclass(frozen=True)
class PressureField:
    """Gauge pressure over the gap-field samples (Pa, suction negative)."""

    gauge_pa: np.ndarray          # (n_r, n_t)
    weight_m2: np.ndarray         # (n_r, n_t)
    suction_zone_area_m2: float
    overpressure_zone_area_m2: float


@dataclass(frozen=True)
class LiftCurve:
    heights_mm: np.ndarray
    forces_n: np.ndarray
    f_max_n: float
    h_opt_mm: float




@dataclass(frozen=True)
class AeroConstants:
    """Closure constants for the reduced-order model.

    ``swirl_efficiency``, ``gap_attenuation``, ``reference_height_mm`` and
    ``asymmetry_penalty`` are the four calibrated constants; the rest are
    fixed model choices.

    The swirl survival factor comes from an angular-momentum balance
    between the jet input and friction in the leak channel; its argument
    grows with ``gap_attenuation * leak_gap / mass_flow``, so more mass
    flow sustains the swirl over a larger gap.  ``reference_height_mm``
    is the reach of the suction below the face plane.  The calibrated
    ``swirl_efficiency`` may exceed 1: it also absorbs the suction the
    simple forced-vortex disk formula leaves out.
    """

    discharge_coefficient: float = 0.8
    swirl_efficiency: float = 2.0
    gap_attenuation: float = 0.437221
    reference_height_mm: float = 0.602176
    asymmetry_penalty: float = 0.420910
    suction_reach_exponent: float = 2.0
    protrusion_reach_weight: float = 0.25
    channel_inertia_coefficient: float = 0.15
    suction_stall_fraction: float = 1.0
    swirl_mach_limit: float = 1.0
    min_channel_height_mm: float = 0.02
    friction_force_factor: float = 1.68

    def with_calibrated(self, swirl_efficiency: float, gap_attenuation: float,
                        reference_height_mm: float,
                        asymmetry_penalty: float) -> "AeroConstants":
        return replace(self,
                       swirl_efficiency=swirl_efficiency,
                       gap_attenuation=gap_attenuation,
                       reference_height_mm=reference_height_mm,
                       asymmetry_penalty=asymmetry_penalty)


def nozzle_exit_state(air: AirModel, supply_kpa_gauge: float,
                      gripper: GripperGeometry,
                      discharge_coefficient: float = 0.8) -> NozzleFlow:
    """Isentropic orifice flow through the tangential nozzles.

    The flow chokes once the ambient/stagnation pressure ratio drops to the
    critical value (0.5283 for air); beyond that the exit stays sonic and
    only the mass flow keeps growing with supply pressure.
    """
    if supply_kpa_gauge < 0:
        raise ValueError("supply pressure (gauge) must be non-negative")
    if supply_kpa_gauge == 0.0:
        return NozzleFlow(0.0, 0.0, 0.0, 0.0, False, discharge_coefficient,
                          supply_pressure_kpa=0.0)
    g = air.gamma
    r_gas = air.gas_constant_j_kg_k
    t0 = air.temperature_k
    p_amb = air.ambient_pressure_kpa * 1e3
    p0 = (supply_kpa_gauge + air.ambient_pressure_kpa) * 1e3
    ratio = p_amb / p0
    rho0 = p0 / (r_gas * t0)
    cp = g * r_gas / (g - 1.0)
    jet_velocity = math.sqrt(
        max(0.0, 2.0 * cp * t0 * (1.0 - ratio ** ((g - 1.0) / g))))
    choked = ratio <= air.critical_pressure_ratio
    if choked:
        t_throat = t0 * 2.0 / (g + 1.0)
        exit_velocity = math.sqrt(g * r_gas * t_throat)
        rho_exit = rho0 * (2.0 / (g + 1.0)) ** (1.0 / (g - 1.0))
    else:
        exit_velocity = jet_velocity
        rho_exit = rho0 * ratio ** (1.0 / g)
    area = math.pi / 4.0 * (gripper.nozzle_diameter_mm * MM) ** 2
    per_nozzle = discharge_coefficient * area * rho_exit * exit_velocity
    return NozzleFlow(
        exit_velocity_m_s=exit_velocity,
        jet_velocity_m_s=jet_velocity,
        mass_flow_per_nozzle_kg_s=per_nozzle,
        total_mass_flow_kg_s=per_nozzle * gripper.nozzle_count,
        choked=choked,
        discharge_coefficient=discharge_coefficient,
        supply_pressure_kpa=supply_kpa_gauge,
    )


def _sonic_speed(air: AirModel) -> float:
    """Ambient speed of sound; the swirl cannot rotate faster than this."""
    return math.sqrt(air.gamma * air.gas_constant_j_kg_k * air.temperature_k)


_SATURATION_TAIL_SLOPE = 0.2


def _soft_cap(value, cap: float):
    """Compressible saturation: identity below 80% of ``cap``, then an
    exponential approach to ``cap`` plus a shallow linear tail (strongly
    underexpanded operation runs slightly past the nominal limit).

    The saturated branch keeps a strictly positive slope on purpose:
    saturated configurations must still order by supply pressure.
    """
    knee = 0.8 * cap
    v = np.asarray(value, dtype=float)
    excess = np.maximum(v - knee, 0.0)
    out = np.where(v > knee,
                   cap - (cap - knee) * np.exp(-excess / (cap - knee))
                   + _SATURATION_TAIL_SLOPE * excess,
                   v)
    return out if out.ndim else float(out)


def _swirl_survival(beta):
    """Solution of the angular-momentum balance u + (beta/4) u^2 = 1.

    ``u(beta) = 2 (sqrt(1 + beta) - 1) / beta`` in units of the driving
    velocity: 1 at a closed gap, ~2/sqrt(beta) once channel friction
    dominates.  Strictly decreasing in beta.
    """
    beta = np.asarray(beta, dtype=float)
    tiny = beta < 1e-12
    safe = np.where(tiny, 1.0, beta)
    out = 2.0 * (np.sqrt(1.0 + safe) - 1.0) / safe
    return np.where(tiny, 1.0 - beta / 4.0, out)


def _swirl_beta(leak_gap_mm, flow: NozzleFlow, gripper: GripperGeometry,
                air: AirModel, constants: AeroConstants):
    """Friction-to-momentum ratio of the leak channel (dimensionless)."""
    drive = constants.swirl_efficiency * flow.jet_velocity_m_s
    if flow.total_mass_flow_kg_s <= 0.0 or drive <= 0.0:
        return np.full_like(np.asarray(leak_gap_mm, dtype=float), np.inf)
    wall = air.density_kg_m3 * math.pi * (gripper.gripper_diameter_mm * MM) \
        * np.asarray(leak_gap_mm, dtype=float) * MM
    return 4.0 * constants.gap_attenuation * wall * drive \
        / flow.total_mass_flow_kg_s


def _suction_reach(plane_offset_mm, constants: AeroConstants):
    """Local suction attenuation 1 / (1 + d/h_ref)^p around the face plane.

    ``d`` is the distance from the face plane, taken at full weight where
    the surface recedes below it and at a reduced weight where it protrudes
    into the swirl (a protruding cap sits inside the vortex and only loses
    suction to its boundary layer).
    """
    off = np.asarray(plane_offset_mm, dtype=float)
    d = np.maximum(off, 0.0) \
        + constants.protrusion_reach_weight * np.maximum(-off, 0.0)
    x = d / constants.reference_height_mm
    return 1.0 / (1.0 + x) ** constants.suction_reach_exponent


def _lane_resistances(gap_mm: np.ndarray, r_mm: np.ndarray,
                      annulus_start: int, floor_mm: float):
    """Viscous flow resistance of the escape channel, lane by lane.

    Each angular lane is a radial channel from the cavity edge to the rim;
    its lubrication resistance integrand is dr / (r h^3).  Returns the
    outward-cumulative resistance ``S`` per annulus sample and the lane
    totals ``T`` (both in 1/m^3, up to the 12 mu / dtheta factor).
    """
    r_ann = r_mm[annulus_start:] * MM
    dr = (r_mm[1] - r_mm[0]) * MM
    h_m = np.maximum(gap_mm[..., annulus_start:, :], floor_mm) * MM
    integrand = dr / (r_ann[:, None] * h_m ** 3)
    s_out = np.flip(np.cumsum(np.flip(integrand, axis=-2), axis=-2), axis=-2)
    t_total = s_out[..., 0, :]
    return s_out, t_total


def _choke_exit_area(gap_mm: np.ndarray, r_mm: np.ndarray,
                     annulus_start: int, floor_mm: float,
                     n_angular: int) -> np.ndarray:
    """Total exit area of the escape channel at each lane's pinch point.

    Per angular lane the outflow must pass the narrowest ring section along
    the ray; its area per radian is ``min_r (r * h)``, and the lane areas
    add in parallel.  The minimum is taken over the product so the area is
    continuous as the pinch location slides across grid nodes.
    """
    r_ann = r_mm[annulus_start:] * MM
    h_m = np.maximum(gap_mm[..., annulus_start:, :], floor_mm) * MM
    section = (r_ann[:, None] * h_m).min(axis=-2)
    dtheta = 2.0 * math.pi / n_angular
    return (section * dtheta).sum(axis=-1)


def swirl_state(flow: NozzleFlow, gripper: GripperGeometry, mean_gap_mm: float,
                air: AirModel, constants: AeroConstants) -> VortexFlowState:
    """Cavity swirl sustained by the nozzle jets against channel friction.

    The circumferential velocity is the jet velocity times the swirl
    efficiency, times the survival factor of the momentum balance; at a
    closed gap it equals ``efficiency * jet_velocity`` exactly.  The
    angular velocity is ``2 u / d_cavity`` (solid-body rotation matching u
    at the cavity wall).  ``mean_gap_mm`` is the effective leak gap; the
    lift pipeline feeds the direction-averaged choke clearance here.
    """
    if flow.jet_velocity_m_s <= 0.0 or flow.total_mass_flow_kg_s <= 0.0:
        u = 0.0
    else:
        beta = _swirl_beta(mean_gap_mm, flow, gripper, air, constants)
        u = constants.swirl_efficiency * flow.jet_velocity_m_s \
            * float(_swirl_survival(beta))
        u = float(_soft_cap(u, constants.swirl_mach_limit
                            * _sonic_speed(air)))
    omega = 2.0 * u / (gripper.cavity_diameter_mm * MM)
    return VortexFlowState(
        circumferential_velocity_m_s=u,
        angular_velocity_per_s=omega,
        effective_density_kg_m3=air.density_kg_m3,
        supply_pressure_kpa=flow.supply_pressure_kpa,
        total_mass_flow_kg_s=flow.total_mass_flow_kg_s,
    )


def lift_force_uniform(state: VortexFlowState, gripper: GripperGeometry,
                       air: AirModel) -> float:
    """Forced-vortex lift over the cavity disk: rho pi w^2 (d_c/2)^4 / 4."""
    radius_m = gripper.cavity_radius_mm * MM
    return 0.25 * state.effective_density_kg_m3 * math.pi \
        * state.angular_velocity_per_s ** 2 * radius_m ** 4


def pressure_field(state: VortexFlowState, field: GapField, air: AirModel,
                   constants: AeroConstants) -> PressureField:
    """Gauge pressure over the face: vortex suction plus channel overpressure.

    Suction under the cavity follows the forced-vortex parabola, attenuated
    per sample by how far the surface sits below the face plane and reduced
    globally by the rim-asymmetry penalty.  The overpressure comes from
    pushing the supplied mass flow out through the escape channel: all
    angular lanes discharge a common plenum, so the plenum back-pressure is
    the flow over the summed lane conductances; it acts across the cavity
    mouth and decays along each lane with its remaining resistance.  A
    tightly sealed channel therefore pushes the gripper off near contact.
    """
    r_m = field.r_mm[:, None] * MM
    weight_m2 = field.weight_mm2 * MM * MM
    rc_m = field.cavity_radius_mm * MM

    suction = np.zeros_like(field.gap_mm)
    if state.angular_velocity_per_s > 0.0:
        profile = 0.5 * state.effective_density_kg_m3 \
            * state.angular_velocity_per_s ** 2 \
            * np.maximum(0.0, rc_m * rc_m - r_m * r_m)
        depression = profile * _suction_reach(field.plane_offset_mm,
                                              constants)
        if state.supply_pressure_kpa > 0.0:
            # The vortex cannot pull below what the supply head sustains.
            stall_pa = constants.suction_stall_fraction \
                * state.supply_pressure_kpa * 1e3
            depression = np.minimum(depression, stall_pa)
        penalty = max(0.0, 1.0 - constants.asymmetry_penalty
                      * leakage_asymmetry(field))
        suction = depression * penalty

    overpressure = np.zeros_like(field.gap_mm)
    if state.total_mass_flow_kg_s > 0.0:
        annulus_start = int(np.searchsorted(field.r_mm,
                                            field.cavity_radius_mm, "right"))
        floor_mm = constants.min_channel_height_mm
        s_out, t_total = _lane_resistances(field.channel_mm, field.r_mm,
                                           annulus_start, floor_mm)
        dtheta = 2.0 * math.pi / field.theta_rad.size
        conductance = (dtheta / (12.0 * air.dynamic_viscosity_pa_s)
                       / t_total).sum(axis=-1)
        q_m3_s = state.total_mass_flow_kg_s / air.density_kg_m3
        exit_area = _choke_exit_area(field.channel_mm, field.r_mm,
                                     annulus_start, floor_mm,
                                     field.theta_rad.size)
        plenum_pa = q_m3_s / conductance \
            + 0.5 * constants.channel_inertia_coefficient \
            * air.density_kg_m3 * (q_m3_s / exit_area) ** 2
        overpressure[:annulus_start, :] = plenum_pa
        overpressure[annulus_start:, :] = plenum_pa * s_out \
            / t_total[..., None, :]

    gauge = overpressure - suction
    return PressureField(
        gauge_pa=gauge,
        weight_m2=weight_m2,
        suction_zone_area_m2=float(weight_m2[gauge < 0.0].sum()),
        overpressure_zone_area_m2=float(weight_m2[gauge > 0.0].sum()),
    )


def net_lift(pfield: PressureField) -> float:
    """Area-weighted integral of -gauge pressure (attraction positive)."""
    return float(np.sum(-pfield.gauge_pa * pfield.weight_m2))


def _height_grid(h_max_mm: float, n: int) -> np.ndarray:
    """Quadratically clustered heights: dense near contact where the force
    peaks, coarse in the decayed tail."""
    i = np.arange(n, dtype=float)
    return h_max_mm * (i / (n - 1)) ** 2


# The force peak always sits within the first 1.5 mm of standoff; curves are
# scanned there on a fixed auxiliary grid so the reported maximum does not
# depend on the caller's sample count.
_PEAK_SCAN_MM = np.linspace(0.0, 1.5, 61)


class LiftEvaluator:
    """Lift as a function of standoff for one gripper/surface/supply triple.

    Precomputes the standoff-independent geometry so sweeps and root finds
    are cheap; reused heavily by the protocol simulator and calibration.
    """

    def __init__(self, gripper: GripperGeometry, surface: SurfaceSpec,
                 supply_kpa: float, air: AirModel, constants: AeroConstants,
                 n_radial: int = DEFAULT_N_RADIAL,
                 n_angular: int = DEFAULT_N_ANGULAR,
                 kernel: _GapKernel | None = None):
        self.gripper = gripper
        self.surface = surface
        self.supply_kpa = supply_kpa
        self.air = air
        self.constants = constants
        self.kernel = kernel or _GapKernel(gripper, surface, n_radial,
                                           n_angular)
        self.flow = nozzle_exit_state(air, supply_kpa, gripper,
                                      constants.discharge_coefficient)
        k = self.kernel
        self._weight_m2 = k.weight_mm2 * MM * MM
        rc_m = gripper.cavity_radius_mm * MM
        r_m = k.r_mm[:, None] * MM
        # Forced-vortex depression per squared angular velocity (Pa s^2).
        self._profile_pa = 0.5 * air.density_kg_m3 \
            * np.maximum(0.0, rc_m ** 2 - r_m ** 2)
        self._cavity_area_m2 = float(
            self._weight_m2[:k.annulus_start, :].sum())
        fe = gripper.friction_elements
        self._clamp_mm = fe.element_height_mm if fe else 0.0
        self._force_factor = constants.friction_force_factor if fe else 1.0

    def forces(self, heights_mm: np.ndarray) -> np.ndarray:
        """Net lift (N) at each standoff, with the friction-element clamp
        and hold-force factor applied when the gripper has pads."""
        h = np.maximum(np.asarray(heights_mm, dtype=float), self._clamp_mm)
        return self._force_factor * self._raw_forces(h)

    def _static_parts(self, heights_mm: np.ndarray):
        """Constants-independent reductions, cached per height grid so that
        calibration iterations only pay for the attenuation itself.

        The escape-channel lanes reduce to two vectors over height: the
        summed lane conductance (bar the 12 mu factor) and the effective
        area the plenum back-pressure acts on (cavity mouth plus the
        resistance-weighted annulus)."""
        cache = getattr(self.kernel, "_aero_cache", None)
        if cache is None:
            cache = {}
            self.kernel._aero_cache = cache
        key = (heights_mm.tobytes(), self.constants.min_channel_height_mm)
        hit = cache.get(key)
        if hit is not None:
            return hit
        k = self.kernel
        gap, offset, channel = k.gaps(heights_mm)
        rim = gap[..., -1, :]
        hi = rim.max(axis=-1)
        lo = rim.min(axis=-1)
        denom = np.where(hi + lo > 0.0, hi + lo, 1.0)
        asym = np.where(hi + lo > 0.0, (hi - lo) / denom, 0.0)
        floor_mm = self.constants.min_channel_height_mm
        s_out, t_total = _lane_resistances(channel, k.r_mm, k.annulus_start,
                                           floor_mm)
        dtheta = 2.0 * math.pi / k.theta_rad.size
        conductance_star = (dtheta / t_total).sum(axis=-1)
        annulus_w = self._weight_m2[k.annulus_start:, :]
        area_eff_m2 = self._cavity_area_m2 + \
            (s_out / t_total[..., None, :] * annulus_w).sum(axis=(-2, -1))
        exit_area_m2 = _choke_exit_area(channel, k.r_mm, k.annulus_start,
                                        floor_mm, k.theta_rad.size)
        hit = (offset, asym, conductance_star, area_eff_m2, exit_area_m2)
        if heights_mm.ndim == 1 and heights_mm.size >= 8 and len(cache) < 8:
            cache[key] = hit
        return hit

    def _raw_forces(self, heights_mm: np.ndarray) -> np.ndarray:
        flow = self.flow
        if flow.total_mass_flow_kg_s <= 0.0:
            return np.zeros_like(heights_mm)
        c = self.constants
        air = self.air
        offset, asym, conductance_star, area_eff_m2, exit_area_m2 = \
            self._static_parts(heights_mm)

        # Swirl survival is governed by the narrowest clearance, which for
        # a touching approach is the standoff itself.
        beta = _swirl_beta(heights_mm, flow, self.gripper, air, c)
        u = c.swirl_efficiency * flow.jet_velocity_m_s * _swirl_survival(beta)
        u = _soft_cap(u, c.swirl_mach_limit * _sonic_speed(air))
        omega = 2.0 * u / (self.gripper.cavity_diameter_mm * MM)
        penalty = np.maximum(0.0, 1.0 - c.asymmetry_penalty * asym)

        alpha = _suction_reach(offset, c)
        shape = (omega * omega)[..., None, None] * alpha * self._profile_pa
        if flow.supply_pressure_kpa > 0.0:
            stall = c.suction_stall_fraction * flow.supply_pressure_kpa * 1e3
            np.minimum(shape, stall, out=shape)
        suction_n = (shape * self._weight_m2).sum(axis=(-2, -1)) * penalty

        q = flow.total_mass_flow_kg_s / air.density_kg_m3
        plenum_pa = q * 12.0 * air.dynamic_viscosity_pa_s / conductance_star \
            + 0.5 * c.channel_inertia_coefficient * air.density_kg_m3 \
            * (q / exit_area_m2) ** 2
        push_n = plenum_pa * area_eff_m2
        return suction_n - push_n

    def force_at(self, height_mm: float) -> float:
        return float(self.forces(np.asarray([height_mm]))[0])

    def _refine_peak(self, lo: float, hi: float) -> tuple[float, float]:
        """Maximize the force between two heights by batched grid zooming
        (three rounds of 17 points narrow the bracket below 1e-4 mm)."""
        best_h, best_f = lo, -np.inf
        for _ in range(3):
            grid = np.linspace(lo, hi, 17)
            forces = self.forces(grid)
            j = int(np.argmax(forces))
            if float(forces[j]) > best_f:
                best_f = float(forces[j])
                best_h = float(grid[j])
            lo = float(grid[max(j - 1, 0)])
            hi = float(grid[min(j + 1, 16)])
        return best_h, best_f

    def curve(self, h_max_mm: float = 10.0, n: int = 96) -> LiftCurve:
        """Sweep the standoff grid; the peak is located on a fixed auxiliary
        near-contact scan plus golden-section refinement and inserted as an
        extra sample, so the reported maximum is both a sample of the curve
        and independent of the caller's sample count."""
        if n < 16:
            raise ValueError("need at least 16 height samples")
        heights = _height_grid(h_max_mm, n)
        forces = self.forces(heights)
        idx = int(np.argmax(forces))
        f_max = float(forces[idx])
        h_opt = float(heights[idx])
        if f_max > 0.0:
            scan = _PEAK_SCAN_MM[_PEAK_SCAN_MM <= h_max_mm]
            scan_forces = self.forces(scan)
            j = int(np.argmax(scan_forces))
            if float(scan_forces[j]) > f_max:
                grid, gi = scan, j
            else:
                grid, gi = heights, idx
            lo = grid[max(gi - 1, 0)]
            hi = grid[min(gi + 1, grid.size - 1)]
            h_star, f_star = self._refine_peak(float(lo), float(hi))
            if f_star > f_max:
                f_max, h_opt = f_star, h_star
                pos = int(np.searchsorted(heights, h_star))
                heights = np.insert(heights, pos, h_star)
                forces = np.insert(forces, pos, f_star)
        return LiftCurve(
            heights_mm=heights,
            forces_n=forces,
            f_max_n=f_max,
            h_opt_mm=h_opt,
        )


def lift_curve(gripper: GripperGeometry, surface: SurfaceSpec,
               supply_kpa: float, air: AirModel, constants: AeroConstants,
               h_max_mm: float = 10.0, n: int = 96,
               n_radial: int = DEFAULT_N_RADIAL,
               n_angular: int = DEFAULT_N_ANGULAR) -> LiftCurve:
    """Lift versus standoff for the full pipeline, reporting the peak.

    Propagates geometry errors (e.g. ``SurfaceTooSmall``).  Supply pressure
    is gauge kPa; heights run from contact to ``h_max_mm``.
    """
    ev = LiftEvaluator(gripper, surface, supply_kpa, air, constants,
                       n_radial, n_angular)
    return ev.curve(h_max_mm, n)
