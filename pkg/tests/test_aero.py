import dataclasses
import math

import numpy as np
import pytest

from vortexgrip.aero import (
    AeroConstants,
    AirModel,
    LiftEvaluator,
    NozzleFlow,
    VortexFlowState,
    lift_curve,
    lift_force_uniform,
    net_lift,
    nozzle_exit_state,
    pressure_field,
    swirl_state,
)
from vortexgrip.geometry import (
    FrictionElementSpec,
    GripperGeometry,
    STANDARD_GRIPPERS,
    SurfaceFamily,
    SurfaceSpec,
    flat_surface,
    gap_field,
)

AIR = AirModel()
G1 = STANDARD_GRIPPERS["G1"]
G3 = STANDARD_GRIPPERS["G3"]


def make_state(u_alpha, gripper, density=AIR.density_kg_m3, supply=0.0,
               mass_flow=0.0):
    return VortexFlowState(
        circumferential_velocity_m_s=u_alpha,
        angular_velocity_per_s=2.0 * u_alpha / (gripper.cavity_diameter_mm
                                                * 1e-3),
        effective_density_kg_m3=density,
        supply_pressure_kpa=supply,
        total_mass_flow_kg_s=mass_flow,
    )


class TestNozzleExitState:
    def test_no_supply_no_flow(self):
        flow = nozzle_exit_state(AIR, 0.0, G1)
        assert flow.exit_velocity_m_s == 0.0
        assert flow.total_mass_flow_kg_s == 0.0
        assert not flow.choked

    def test_choked_at_100_kpa_gauge(self):
        flow = nozzle_exit_state(AIR, 100.0, G1)
        ratio = AIR.ambient_pressure_kpa / (100.0 + AIR.ambient_pressure_kpa)
        assert ratio == pytest.approx(0.5033, abs=1e-4)
        assert flow.choked

    def test_subsonic_at_10_kpa_gauge(self):
        flow = nozzle_exit_state(AIR, 10.0, G1)
        ratio = AIR.ambient_pressure_kpa / (10.0 + AIR.ambient_pressure_kpa)
        assert ratio == pytest.approx(0.9101, abs=1e-4)
        assert not flow.choked
        assert flow.exit_velocity_m_s == flow.jet_velocity_m_s

    def test_choked_exactly_at_critical_ratio(self):
        crit = AIR.critical_pressure_ratio
        assert crit == pytest.approx(0.5283, abs=1e-4)
        for supply in np.linspace(1.0, 400.0, 40):
            flow = nozzle_exit_state(AIR, supply, G1)
            ratio = AIR.ambient_pressure_kpa / (supply
                                                + AIR.ambient_pressure_kpa)
            assert flow.choked == (ratio <= crit)

    def test_choked_velocity_ignores_ambient_drop(self):
        flow_sea = nozzle_exit_state(AIR, 300.0, G1)
        thin = dataclasses.replace(AIR, ambient_pressure_kpa=70.0)
        flow_thin = nozzle_exit_state(thin, 300.0 + AIR.ambient_pressure_kpa
                                      - 70.0, G1)
        assert flow_sea.choked and flow_thin.choked
        assert flow_sea.exit_velocity_m_s \
            == pytest.approx(flow_thin.exit_velocity_m_s)

    def test_mass_flow_scales_with_nozzle_area_and_count(self):
        flow_g1 = nozzle_exit_state(AIR, 200.0, G1)
        flow_g3 = nozzle_exit_state(AIR, 200.0, G3)
        assert flow_g3.mass_flow_per_nozzle_kg_s \
            == pytest.approx(flow_g1.mass_flow_per_nozzle_kg_s
                             * (1.0 / 0.6) ** 2)
        assert flow_g1.total_mass_flow_kg_s \
            == pytest.approx(2 * flow_g1.mass_flow_per_nozzle_kg_s)


class TestSwirlState:
    def test_no_flow_no_swirl(self):
        flow = nozzle_exit_state(AIR, 0.0, G1)
        state = swirl_state(flow, G1, 0.5, AIR, AeroConstants())
        assert state.circumferential_velocity_m_s == 0.0
        assert state.angular_velocity_per_s == 0.0

    def test_closed_gap_gives_full_swirl(self):
        # at zero gap the channel friction vanishes: u = efficiency * jet
        flow = NozzleFlow(300.0, 300.0, 1e-4, 2e-4, True, 0.8, 200.0)
        constants = dataclasses.replace(AeroConstants(), swirl_efficiency=0.5)
        state = swirl_state(flow, G1, 0.0, AIR, constants)
        assert state.circumferential_velocity_m_s == pytest.approx(150.0)
        assert state.angular_velocity_per_s == pytest.approx(21429, abs=1.0)

    def test_omega_is_twice_u_over_cavity_diameter(self):
        flow = nozzle_exit_state(AIR, 200.0, G1)
        state = swirl_state(flow, G1, 0.2, AIR, AeroConstants())
        assert state.angular_velocity_per_s == pytest.approx(
            2.0 * state.circumferential_velocity_m_s
            / (G1.cavity_diameter_mm * 1e-3))

    def test_doubling_attenuation_decreases_swirl(self):
        flow = nozzle_exit_state(AIR, 200.0, G1)
        base = AeroConstants()
        doubled = dataclasses.replace(
            base, gap_attenuation=2.0 * base.gap_attenuation)
        u1 = swirl_state(flow, G1, 0.3, AIR, base)
        u2 = swirl_state(flow, G1, 0.3, AIR, doubled)
        assert u2.circumferential_velocity_m_s \
            < u1.circumferential_velocity_m_s

    def test_swirl_decreases_with_gap(self):
        flow = nozzle_exit_state(AIR, 200.0, G1)
        c = AeroConstants()
        us = [swirl_state(flow, G1, g, AIR, c).circumferential_velocity_m_s
              for g in (0.0, 0.2, 1.0, 5.0)]
        assert all(b < a for a, b in zip(us, us[1:]))


class TestLiftForceUniform:
    def test_zero_swirl_zero_force(self):
        assert lift_force_uniform(make_state(0.0, G1), G1, AIR) == 0.0

    def test_reference_value(self):
        state = VortexFlowState(140.0, 20000.0, 1.2, 0.0, 0.0)
        assert lift_force_uniform(state, G1, AIR) == pytest.approx(
            0.905, abs=1e-3)

    def test_matches_quadrature_oracle(self):
        # oracle: integrate the forced-vortex suction over the cavity disk
        rng = np.random.default_rng(42)
        for _ in range(100):
            rho = rng.uniform(0.5, 2.0)
            omega = rng.uniform(1e3, 5e4)
            d_c = rng.uniform(5.0, 30.0)
            gripper = GripperGeometry(0.6, gripper_diameter_mm=d_c + 6,
                                      cavity_diameter_mm=d_c)
            state = VortexFlowState(omega * d_c * 1e-3 / 2.0, omega, rho,
                                    0.0, 0.0)
            radius = d_c * 1e-3 / 2.0
            r = np.linspace(0.0, radius, 20001)
            suction = 0.5 * rho * omega ** 2 * (radius ** 2 - r ** 2)
            oracle = np.trapezoid(suction * 2.0 * math.pi * r, r)
            assert lift_force_uniform(state, gripper, AIR) \
                == pytest.approx(oracle, rel=1e-3)

    def test_quadratic_swirl_scaling_exact(self):
        s1 = VortexFlowState(70.0, 10000.0, 1.2, 0.0, 0.0)
        s2 = VortexFlowState(140.0, 20000.0, 1.2, 0.0, 0.0)
        assert lift_force_uniform(s2, G1, AIR) \
            == 4.0 * lift_force_uniform(s1, G1, AIR)

    def test_quartic_cavity_scaling_exact(self):
        small = GripperGeometry(0.6, gripper_diameter_mm=14.0,
                                cavity_diameter_mm=8.0)
        large = GripperGeometry(0.6, gripper_diameter_mm=26.0,
                                cavity_diameter_mm=16.0)
        state = VortexFlowState(140.0, 20000.0, 1.2, 0.0, 0.0)
        assert lift_force_uniform(state, large, AIR) \
            == 16.0 * lift_force_uniform(state, small, AIR)


class TestPressureField:
    def test_zero_state_zero_gauge(self):
        field = gap_field(G1, flat_surface(), 0.2)
        pf = pressure_field(make_state(0.0, G1), field, AIR, AeroConstants())
        assert np.all(pf.gauge_pa == 0.0)
        assert net_lift(pf) == 0.0

    def test_uniform_gap_reproduces_closed_form(self):
        # with no through-flow the net lift is the uniform-lift formula
        # scaled by the suction reach at the common gap
        constants = AeroConstants()
        for gap in (0.1, 0.3, 0.8):
            field = gap_field(G1, flat_surface(), gap)
            state = make_state(150.0, G1)
            reach = 1.0 / (1.0 + gap / constants.reference_height_mm) \
                ** constants.suction_reach_exponent
            expected = lift_force_uniform(state, G1, AIR) * reach
            assert net_lift(pressure_field(state, field, AIR, constants)) \
                == pytest.approx(expected, rel=5e-3)

    def test_quadrature_error_shrinks_with_grid(self):
        constants = AeroConstants()
        state = make_state(150.0, G1)

        def rel_error(n_radial, n_angular):
            field = gap_field(G1, flat_surface(), 0.3, n_radial, n_angular)
            reach = 1.0 / (1.0 + 0.3 / constants.reference_height_mm) \
                ** constants.suction_reach_exponent
            expected = lift_force_uniform(state, G1, AIR) * reach
            got = net_lift(pressure_field(state, field, AIR, constants))
            return abs(got - expected) / expected

        assert rel_error(64, 128) < 5e-3
        assert rel_error(256, 128) <= rel_error(64, 128) / 2.0

    def test_overpressure_only_field_pushes(self):
        field = gap_field(G1, flat_surface(), 0.05)
        state = make_state(0.0, G1, supply=200.0, mass_flow=5e-4)
        pf = pressure_field(state, field, AIR, AeroConstants())
        assert net_lift(pf) < 0.0
        assert pf.overpressure_zone_area_m2 > 0.0
        assert pf.suction_zone_area_m2 == 0.0

    def test_suction_concentrated_under_cavity(self):
        field = gap_field(G1, flat_surface(), 0.2)
        state = make_state(150.0, G1)
        pf = pressure_field(state, field, AIR, AeroConstants())
        annulus = field.r_mm > field.cavity_radius_mm
        assert np.all(pf.gauge_pa[~annulus, :] < 0.0)
        assert np.all(pf.gauge_pa[annulus, :] <= 0.0)

    def test_asymmetry_penalty_only_changes_asymmetric_fields(self):
        # two fields with the same gaps everywhere except the rim pattern:
        # with the penalty disabled they lift identically, with it enabled
        # the asymmetric one lifts less
        base = gap_field(G1, flat_surface(), 0.3)
        rim = base.gap_mm[-1, :].copy()
        delta = 0.2 * np.where(np.arange(rim.size) % 2 == 0, 1.0, -1.0)
        skewed_gap = base.gap_mm.copy()
        skewed_gap[-1, :] = rim + delta  # mean-preserving rim skew
        skewed = dataclasses.replace(base, gap_mm=skewed_gap)
        state = make_state(150.0, G1)

        off = dataclasses.replace(AeroConstants(), asymmetry_penalty=0.0)
        on = dataclasses.replace(AeroConstants(), asymmetry_penalty=0.5)
        assert net_lift(pressure_field(state, base, AIR, off)) \
            == pytest.approx(net_lift(pressure_field(state, skewed, AIR,
                                                     off)))
        assert net_lift(pressure_field(state, skewed, AIR, on)) \
            < net_lift(pressure_field(state, base, AIR, on))

    def test_suction_capped_by_supply_head(self):
        field = gap_field(G1, flat_surface(), 0.05)
        strong = make_state(500.0, G1, supply=50.0)
        pf = pressure_field(strong, field, AIR, AeroConstants())
        assert -pf.gauge_pa.min() <= 50.0e3 * (1.0 + 1e-12)


class TestLiftCurve:
    def test_zero_supply_zero_curve(self):
        curve = lift_curve(G1, flat_surface(), 0.0, AIR, AeroConstants())
        assert curve.f_max_n == 0.0
        assert np.all(curve.forces_n == 0.0)

    def test_minimum_sample_count(self):
        with pytest.raises(ValueError):
            lift_curve(G1, flat_surface(), 200.0, AIR, AeroConstants(), n=8)

    def test_matches_stepwise_pipeline(self):
        # the vectorized evaluator must agree with the composed operations
        constants = AeroConstants()
        for surface in (flat_surface(),
                        SurfaceSpec(SurfaceFamily.DOME_CONVEX, 35.0),
                        SurfaceSpec(SurfaceFamily.CYLINDER_CONVEX, 20.0)):
            evaluator = LiftEvaluator(G1, surface, 200.0, AIR, constants)
            flow = nozzle_exit_state(AIR, 200.0, G1,
                                     constants.discharge_coefficient)
            for standoff in (0.05, 0.2, 1.0):
                field = gap_field(G1, surface, standoff)
                state = swirl_state(flow, G1, field.standoff_mm, AIR,
                                    constants)
                composed = net_lift(pressure_field(state, field, AIR,
                                                   constants))
                assert evaluator.force_at(standoff) \
                    == pytest.approx(composed, rel=1e-9, abs=1e-12)

    def test_f_max_is_a_sample_and_grid_stable(self):
        evaluator = LiftEvaluator(G1, SurfaceSpec(SurfaceFamily.DOME_CONVEX,
                                                  35.0), 400.0, AIR,
                                  AeroConstants())
        c48 = evaluator.curve(10.0, 48)
        c96 = evaluator.curve(10.0, 96)
        assert c48.f_max_n == np.max(c48.forces_n)
        assert c48.f_max_n == pytest.approx(c96.f_max_n, rel=1e-6)

    def test_decays_to_zero_at_max_height(self):
        for gid in ("G1", "G2", "G3"):
            for pressure in (100.0, 400.0):
                curve = lift_curve(STANDARD_GRIPPERS[gid], flat_surface(),
                                   pressure, AIR, AeroConstants())
                assert curve.forces_n[-1] < 0.05 * curve.f_max_n

    def test_f_max_non_decreasing_in_pressure(self):
        for surface in (flat_surface(),
                        SurfaceSpec(SurfaceFamily.DOME_CONCAVE, 20.0)):
            peaks = [lift_curve(G1, surface, p, AIR, AeroConstants()).f_max_n
                     for p in (100.0, 200.0, 300.0, 400.0)]
            assert all(b >= a for a, b in zip(peaks, peaks[1:]))

    def test_optimum_height_rises_with_nozzle_diameter(self):
        h_opts = [lift_curve(STANDARD_GRIPPERS[gid], flat_surface(), 200.0,
                             AIR, AeroConstants()).h_opt_mm
                  for gid in ("G1", "G2", "G3")]
        assert h_opts[0] < h_opts[1] < h_opts[2]


class TestFrictionElements:
    def test_force_factor_and_clamp(self):
        constants = AeroConstants()
        plain = LiftEvaluator(G1, flat_surface(), 300.0, AIR, constants)
        padded_gripper = dataclasses.replace(
            G1, friction_elements=FrictionElementSpec())
        padded = LiftEvaluator(padded_gripper, flat_surface(), 300.0, AIR,
                               constants)
        clamp = padded_gripper.friction_elements.element_height_mm
        for h in (0.0, 0.1, 0.4, 1.0, 3.0):
            expected = constants.friction_force_factor \
                * plain.force_at(max(h, clamp))
            assert padded.force_at(h) == expected

    def test_curve_is_flat_below_the_clamp(self):
        padded_gripper = dataclasses.replace(
            G1, friction_elements=FrictionElementSpec())
        evaluator = LiftEvaluator(padded_gripper, flat_surface(), 300.0, AIR,
                                  AeroConstants())
        heights = np.array([0.0, 0.1, 0.2, 0.3, 0.4])
        forces = evaluator.forces(heights)
        assert np.all(forces == forces[0])
