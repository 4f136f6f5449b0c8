"""Tests for the transfer-matrix engine"""

import numpy as np
import pytest

from proxyforge.core.errors import NonPhysical
from proxyforge.problems.photonics import (
    BRAGG_INDEX_HIGH,
    BRAGG_INDEX_LOW,
    BRAGG_SUBSTRATE,
    bragg_stack,
    quarter_wave_thicknesses,
)
from proxyforge.problems.thin_film import (
    LayerStack,
    batch_spectrum,
    quarter_wave_reflectance,
    tmm_reflectance,
    tmm_spectrum,
)


class TestTransferMatrix:
    """Test suite for normal-incidence thin-film optics"""

    def test_bare_interface_fresnel(self):
        """Test that a stack without layers reflects 4% from air onto glass"""
        stack = LayerStack(np.array([]), np.array([]), ambient_index=1.0, substrate_index=1.5)
        assert tmm_reflectance(stack, 550.0) == pytest.approx(0.04)

    def test_quarter_wave_mirror_matches_closed_form(self):
        """Test a (LH)^5 mirror at its design wavelength against the closed form"""
        stack = bragg_stack(quarter_wave_thicknesses(10))
        expected = quarter_wave_reflectance(BRAGG_INDEX_LOW, BRAGG_INDEX_HIGH, 5, 1.0, BRAGG_SUBSTRATE)
        assert tmm_reflectance(stack, 600.0) == pytest.approx(expected, rel=1e-9)

    def test_more_pairs_reflect_more(self):
        """Test that the 20-layer quarter-wave mirror beats the 10-layer one"""
        r10 = tmm_reflectance(bragg_stack(quarter_wave_thicknesses(10)), 600.0)
        r20 = tmm_reflectance(bragg_stack(quarter_wave_thicknesses(20)), 600.0)
        assert r20 > r10 > 0.9

    def test_half_wave_layer_is_absentee(self):
        """Test that a half-wave layer leaves the bare-substrate reflectance unchanged"""
        n = 2.0
        stack = LayerStack(np.array([600.0 / (2 * n)]), np.array([n]), 1.0, 1.5)
        assert tmm_reflectance(stack, 600.0) == pytest.approx(0.04)

    def test_lossless_stack_conserves_energy(self):
        """Test that R + T = 1 without absorption"""
        rng = np.random.default_rng(1)
        stack = bragg_stack(rng.uniform(0.0, 218.0, size=10))
        R, T = tmm_spectrum(stack, np.linspace(400.0, 800.0, 50))
        assert np.allclose(R + T, 1.0, atol=1e-9)

    def test_absorbing_layer_loses_energy(self):
        """Test that an absorbing layer gives R + T < 1"""
        stack = LayerStack(np.array([200.0]), np.array([3.5 + 0.1j]), 1.0, 1.5)
        R, T = tmm_spectrum(stack, np.array([500.0]))
        assert R[0] + T[0] < 1.0

    def test_batch_matches_single_stack(self):
        """Test that batched evaluation agrees with per-stack evaluation"""
        thicknesses = np.array([[100.0, 50.0], [80.0, 120.0]])
        indices = np.array([1.4, 1.8])
        R, _ = batch_spectrum(thicknesses, indices, np.array([600.0]), 1.0, 1.5)
        for row in range(2):
            single = LayerStack(thicknesses[row], indices, 1.0, 1.5)
            assert R[row, 0] == pytest.approx(tmm_reflectance(single, 600.0))

    def test_reversed_stack_has_same_transmittance(self):
        """Test reciprocity of transmission for a lossless stack"""
        stack = LayerStack(np.array([90.0, 140.0]), np.array([1.4, 1.8]), 1.0, 1.5)
        _, forward = tmm_spectrum(stack, np.array([550.0]))
        _, backward = tmm_spectrum(stack.reversed(), np.array([550.0]))
        assert forward[0] == pytest.approx(backward[0])

    def test_negative_thickness_rejected(self):
        """Test that a negative thickness is non-physical"""
        with pytest.raises(NonPhysical):
            LayerStack(np.array([-1.0]), np.array([1.5]))

    def test_index_below_one_rejected(self):
        """Test that an index below 1 is non-physical"""
        with pytest.raises(NonPhysical):
            LayerStack(np.array([10.0]), np.array([0.5]))

    def test_negative_extinction_rejected(self):
        """Test that gain media are rejected"""
        with pytest.raises(NonPhysical):
            LayerStack(np.array([10.0]), np.array([1.5 - 0.1j]))

    def test_wavelength_must_be_positive(self):
        """Test the wavelength check"""
        with pytest.raises(ValueError):
            tmm_reflectance(bragg_stack(np.ones(2)), 0.0)
