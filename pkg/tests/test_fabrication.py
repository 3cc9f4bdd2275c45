import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from vortexgrip.errors import NoRoot, OutOfCalibratedRange
from vortexgrip.fabrication import (
    GREY,
    TRANSPARENT,
    compensate,
    printed_diameter,
    shrinkage_coefficient,
)


class TestShrinkageCoefficient:
    def test_grey_values(self):
        assert shrinkage_coefficient(GREY, 0.722) == pytest.approx(
            0.1676, abs=1e-4)
        assert shrinkage_coefficient(GREY, 1.2) == pytest.approx(
            0.0149, abs=1e-4)

    def test_transparent_value(self):
        assert shrinkage_coefficient(TRANSPARENT, 1.0) == pytest.approx(
            0.1249, abs=1e-4)

    def test_matches_exponential_form(self):
        for d in np.linspace(0.4, 1.2, 9):
            expected = 6.5028 * math.exp(-5.066 * d)
            assert shrinkage_coefficient(GREY, d) == pytest.approx(expected)

    def test_out_of_range(self):
        for bad in (0.39, 1.21, 0.0, 5.0):
            with pytest.raises(OutOfCalibratedRange):
                shrinkage_coefficient(GREY, bad)

    def test_fraction_bounds(self):
        for material in (GREY, TRANSPARENT):
            for d in np.linspace(0.4, 1.2, 33):
                k = shrinkage_coefficient(material, d)
                assert 0.0 < k < 1.0


class TestPrintedDiameter:
    def test_reference_cad_sizes_print_to_round_nozzles(self):
        assert printed_diameter(GREY, 0.722) == pytest.approx(0.601, abs=1e-3)
        assert printed_diameter(GREY, 0.869) == pytest.approx(0.800, abs=1e-3)
        assert printed_diameter(GREY, 1.036) == pytest.approx(1.000, abs=1e-3)

    def test_strictly_increasing(self):
        for material in (GREY, TRANSPARENT):
            grid = np.linspace(0.4, 1.2, 200)
            printed = [printed_diameter(material, d) for d in grid]
            assert all(b > a for a, b in zip(printed, printed[1:]))

    def test_transparent_shrinks_more_on_calibrated_range(self):
        # the coefficient curves cross below the calibrated window
        crossover = math.log(6.5028 / 3.856) / (5.066 - 3.429)
        assert crossover == pytest.approx(0.3192, abs=1e-4)
        assert crossover < 0.4
        for d in np.linspace(0.4, 1.2, 33):
            assert shrinkage_coefficient(TRANSPARENT, d) \
                > shrinkage_coefficient(GREY, d)


class TestCompensate:
    @pytest.mark.parametrize("target,expected", [
        (0.6, 0.722), (0.8, 0.869), (1.0, 1.036)])
    def test_reference_targets(self, target, expected):
        result = compensate(GREY, target)
        assert result.cad_diameter_mm == pytest.approx(expected, abs=0.005)
        assert 0.0 <= result.shrinkage_fraction < 1.0
        assert result.iterations <= 40

    def test_consistency_with_forward_map(self):
        result = compensate(GREY, 0.8)
        assert printed_diameter(GREY, result.cad_diameter_mm) \
            == pytest.approx(0.8, abs=1e-6)

    @given(st.floats(min_value=0.55, max_value=1.15))
    def test_round_trip(self, target):
        result = compensate(GREY, target)
        assert abs(printed_diameter(GREY, result.cad_diameter_mm) - target) \
            <= 1e-6

    def test_no_root_outside_image(self):
        with pytest.raises(NoRoot):
            compensate(GREY, 1.3)
        with pytest.raises(NoRoot):
            compensate(GREY, 0.01)

    def test_capillary_risk_flag(self):
        assert compensate(GREY, 0.5).capillary_risk
        assert not compensate(GREY, 0.6).capillary_risk
