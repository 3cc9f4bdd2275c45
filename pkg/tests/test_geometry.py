import math

import numpy as np
import pytest

from vortexgrip.errors import SurfaceTooSmall
from vortexgrip.geometry import (
    FLAT_RADIUS_MM,
    FrictionElementSpec,
    GripperGeometry,
    STANDARD_GRIPPERS,
    SurfaceFamily,
    SurfaceSpec,
    flat_surface,
    gap_field,
    leakage_asymmetry,
)

G1 = STANDARD_GRIPPERS["G1"]


def sagitta(radius, chord):
    return radius - math.sqrt(radius * radius - chord * chord)


class TestValidation:
    def test_gripper_parameter_ordering(self):
        with pytest.raises(ValueError):
            GripperGeometry(nozzle_diameter_mm=15.0)  # nozzle > cavity
        with pytest.raises(ValueError):
            GripperGeometry(0.6, gripper_diameter_mm=10.0)  # cavity > body

    def test_chamfer_bounds(self):
        # max chamfer is half the flange width
        GripperGeometry(0.6, cavity_chamfer_radius_mm=3.0)
        with pytest.raises(ValueError):
            GripperGeometry(0.6, cavity_chamfer_radius_mm=3.1)

    def test_friction_element_invariants(self):
        FrictionElementSpec(count=3, angular_spacing_deg=120.0)
        with pytest.raises(ValueError):
            FrictionElementSpec(count=2, angular_spacing_deg=180.0)
        with pytest.raises(ValueError):
            FrictionElementSpec(count=3, angular_spacing_deg=90.0)

    def test_flat_surface_encodes_large_radius(self):
        assert flat_surface().radius_mm == FLAT_RADIUS_MM
        # explicit radius is overridden for flat
        assert SurfaceSpec(SurfaceFamily.FLAT, 25.0).radius_mm \
            == FLAT_RADIUS_MM

    def test_surface_too_small_for_curved_families(self):
        for family in (SurfaceFamily.DOME_CONCAVE,
                       SurfaceFamily.CYLINDER_CONCAVE,
                       SurfaceFamily.DOME_CONVEX,
                       SurfaceFamily.CYLINDER_CONVEX):
            with pytest.raises(SurfaceTooSmall):
                gap_field(G1, SurfaceSpec(family, 6.9), 0.1)

    def test_negative_standoff_rejected(self):
        with pytest.raises(ValueError):
            gap_field(G1, flat_surface(), -0.1)


class TestGapField:
    def test_flat_field_is_uniform(self):
        field = gap_field(G1, flat_surface(), 0.2)
        assert np.abs(field.gap_mm - 0.2).max() < 1e-9
        assert abs(field.mean_gap_mm - 0.2) < 1e-9
        assert abs(field.min_gap_mm - 0.2) < 1e-9

    def test_huge_dome_is_flat(self):
        field = gap_field(G1, SurfaceSpec(SurfaceFamily.DOME_CONVEX, 1e6),
                          0.2)
        assert np.abs(field.gap_mm - 0.2).max() < 1e-4

    def test_cylinder_rim_gap_matches_sagitta(self):
        # independent oracle: intersect the vertical at y = 10 mm with the
        # cylinder circle of radius 15 mm tangent to the face
        field = gap_field(G1, SurfaceSpec(SurfaceFamily.CYLINDER_CONVEX,
                                          15.0), 0.0)
        expected = 15.0 - math.sqrt(15.0 ** 2 - 10.0 ** 2)
        assert abs(expected - 3.8197) < 1e-4
        assert abs(field.rim_gaps_mm().max() - expected) < 1e-9

    def test_min_gap_equals_standoff_without_protrusion(self):
        for family, radius in [(SurfaceFamily.CYLINDER_CONVEX, 15.0),
                               (SurfaceFamily.DOME_CONCAVE, 20.0),
                               (SurfaceFamily.CYLINDER_CONCAVE, 50.0)]:
            field = gap_field(G1, SurfaceSpec(family, radius), 0.3)
            assert field.min_gap_mm == pytest.approx(0.3, abs=1e-9)
        # a protruding dome crosses the face plane, so the plane-referenced
        # clearance dips below the standoff near the crossing ring
        dome = gap_field(G1, SurfaceSpec(SurfaceFamily.DOME_CONVEX, 35.0),
                         0.3)
        assert dome.min_gap_mm <= 0.3

    def test_dome_convex_protrudes_into_cavity(self):
        field = gap_field(G1, SurfaceSpec(SurfaceFamily.DOME_CONVEX, 35.0),
                          0.0)
        # the apex rises above the face plane: negative plane offset
        assert field.plane_offset_mm.min() < -0.5
        # its clearance is measured to the cavity ceiling, not the plane
        assert field.gap_mm[0, 0] < field.cavity_height_mm

    def test_cavity_clearance_saturates_at_cavity_height(self):
        field = gap_field(G1, SurfaceSpec(SurfaceFamily.DOME_CONCAVE, 15.0),
                          2.0)
        centre = field.gap_mm[0, 0]
        assert centre == pytest.approx(field.cavity_height_mm)

    def test_all_gaps_non_negative(self):
        for family, radius in [(SurfaceFamily.DOME_CONVEX, 15.0),
                               (SurfaceFamily.CYLINDER_CONCAVE, 15.0)]:
            field = gap_field(G1, SurfaceSpec(family, radius), 0.0)
            assert field.gap_mm.min() >= 0.0
            assert field.min_gap_mm <= field.mean_gap_mm


class TestInvariants:
    def test_all_families_converge_to_flat(self):
        flat = gap_field(G1, flat_surface(), 0.2)
        for family in (SurfaceFamily.DOME_CONVEX,
                       SurfaceFamily.CYLINDER_CONVEX,
                       SurfaceFamily.DOME_CONCAVE,
                       SurfaceFamily.CYLINDER_CONCAVE):
            field = gap_field(G1, SurfaceSpec(family, 1e6), 0.2)
            assert np.abs(field.gap_mm - flat.gap_mm).max() < 1e-3

    def test_convex_min_rim_gap_on_axis(self):
        field = gap_field(G1, SurfaceSpec(SurfaceFamily.CYLINDER_CONVEX,
                                          15.0), 0.1)
        rim = field.rim_gaps_mm()
        n_t = rim.size
        assert int(np.argmin(rim)) in (0, n_t // 2)

    def test_concave_min_gap_at_rim_extremes(self):
        field = gap_field(G1, SurfaceSpec(SurfaceFamily.CYLINDER_CONCAVE,
                                          20.0), 0.1)
        r_idx, t_idx = np.unravel_index(np.argmin(field.gap_mm),
                                        field.gap_mm.shape)
        n_t = field.theta_rad.size
        assert r_idx == field.r_mm.size - 1
        assert t_idx in (n_t // 4, 3 * n_t // 4)

    def test_axisymmetry_of_flat_and_domes(self):
        for surface in (flat_surface(),
                        SurfaceSpec(SurfaceFamily.DOME_CONVEX, 35.0),
                        SurfaceSpec(SurfaceFamily.DOME_CONCAVE, 25.0)):
            field = gap_field(G1, surface, 0.2)
            spread = field.gap_mm.max(axis=1) - field.gap_mm.min(axis=1)
            assert spread.max() < 1e-9

    def test_mean_gap_grid_convergence(self):
        for surface in (SurfaceSpec(SurfaceFamily.DOME_CONVEX, 35.0),
                        SurfaceSpec(SurfaceFamily.CYLINDER_CONCAVE, 20.0)):
            coarse = gap_field(G1, surface, 0.2, 64, 128)
            fine = gap_field(G1, surface, 0.2, 128, 256)
            rel = abs(fine.mean_gap_mm - coarse.mean_gap_mm) \
                / fine.mean_gap_mm
            assert rel < 1e-3

    def test_fields_are_read_only(self):
        field = gap_field(G1, flat_surface(), 0.2)
        with pytest.raises(ValueError):
            field.gap_mm[0, 0] = 1.0


class TestLeakageAsymmetry:
    def test_flat_is_symmetric(self):
        assert leakage_asymmetry(gap_field(G1, flat_surface(), 0.2)) == 0.0

    def test_domes_are_symmetric(self):
        for family in (SurfaceFamily.DOME_CONVEX, SurfaceFamily.DOME_CONCAVE):
            field = gap_field(G1, SurfaceSpec(family, 30.0), 0.1)
            assert leakage_asymmetry(field) == pytest.approx(0.0, abs=1e-9)

    def test_touching_cylinder_is_fully_asymmetric(self):
        field = gap_field(G1, SurfaceSpec(SurfaceFamily.CYLINDER_CONVEX,
                                          15.0), 0.0)
        assert leakage_asymmetry(field) == pytest.approx(1.0)

    def test_range(self):
        for standoff in (0.0, 0.1, 1.0):
            field = gap_field(G1, SurfaceSpec(SurfaceFamily.CYLINDER_CONCAVE,
                                              25.0), standoff)
            assert 0.0 <= leakage_asymmetry(field) <= 1.0
