import math

import numpy as np
import pytest
from scipy import special

from src.analysis.pairstate import (SIGN_ON_FIRST, assemble_amplitude, beamsplitter_coeffs,
                                    dense_matrix, limit_expansion, mode_amplitude_at_origin,
                                    project_relative, relative_expansion, truncation_caps)
from src.analysis.validation import quadrature_overlap
from src.models.errors import OddModeError, ResonantDenominatorError
from src.models.pair_state import RelativeExpansion

PI_QUARTER = math.pi ** -0.25


def pure_mode(k, K=2, K_z=None):
    K_z = K if K_z is None else K_z
    coeffs = np.zeros((K // 2 + 1, K // 2 + 1, K_z // 2 + 1))
    coeffs[k[0] // 2, k[1] // 2, k[2] // 2] = 1.0
    return RelativeExpansion(lam=1.0, x=0.0, coeffs=coeffs, K=K, K_z=K_z)


class TestModeAmplitude:
    def test_known_values(self):
        assert mode_amplitude_at_origin(0) == pytest.approx(PI_QUARTER, rel=1e-14)
        assert mode_amplitude_at_origin(2) == pytest.approx(-PI_QUARTER / math.sqrt(2.0), rel=1e-14)
        assert mode_amplitude_at_origin(4) == pytest.approx(PI_QUARTER * math.sqrt(24.0) / 8.0, rel=1e-14)

    @pytest.mark.parametrize("k", range(0, 13, 2))
    def test_matches_hermite(self, k):
        norm = 1.0 / math.sqrt(2.0 ** k * math.factorial(k) * math.sqrt(math.pi))
        assert mode_amplitude_at_origin(k) == pytest.approx(norm * special.eval_hermite(k, 0.0), rel=1e-12)

    def test_odd_rejected(self):
        with pytest.raises(OddModeError):
            mode_amplitude_at_origin(3)


class TestBeamsplitter:
    def test_ground(self):
        assert beamsplitter_coeffs(0) == [(0, 0, 1.0)]

    def test_second_mode(self):
        coeffs = {(a, b): t for a, b, t in beamsplitter_coeffs(2)}
        assert coeffs[(2, 0)] == pytest.approx(0.5, abs=1e-15)
        assert coeffs[(1, 1)] == pytest.approx(-1.0 / math.sqrt(2.0), abs=1e-15)
        assert coeffs[(0, 2)] == pytest.approx(0.5, abs=1e-15)

    @pytest.mark.parametrize("k", range(0, 13, 2))
    def test_unitary_and_matches_quadrature(self, k):
        coeffs = beamsplitter_coeffs(k)
        assert sum(t * t for _, _, t in coeffs) == pytest.approx(1.0, abs=1e-13)
        for a, b, t in coeffs:
            assert abs(t - quadrature_overlap(k, a, b)) < 1e-10

    def test_quadrature_vanishes_off_shell(self):
        # particle quanta must add up to the relative quanta
        assert abs(quadrature_overlap(2, 1, 0)) < 1e-12
        assert abs(quadrature_overlap(4, 2, 0)) < 1e-12

    def test_invalid(self):
        with pytest.raises(OddModeError):
            beamsplitter_coeffs(1)
        with pytest.raises(ValueError):
            beamsplitter_coeffs(2, sign_on="both")


class TestRelativeExpansion:
    def test_normalized_even_modes(self):
        rel = relative_expansion(0.4, 5.0 / 6.0, 8, 10)
        assert rel.norm2 == pytest.approx(1.0, abs=1e-14)
        assert rel.coefficient((1, 0, 0)) == 0.0
        assert rel.coefficient((0, 0, 12)) == 0.0
        assert rel.caps == (8, 8, 10)

    def test_spherical_degenerate_level(self):
        rel = relative_expansion(1.0 - 1e-5, 1.0, 6)
        weights = {k: c * c for k, c in rel.as_dict().items()}
        level = [(2, 0, 0), (0, 2, 0), (0, 0, 2)]
        assert sum(weights[k] for k in level) > 0.999
        assert weights[(2, 0, 0)] == pytest.approx(weights[(0, 0, 2)], rel=1e-12)

    def test_cigar_pole_selects_axial_mode(self):
        rel = relative_expansion(5.0 / 6.0 - 1e-5, 5.0 / 6.0, 6)
        assert rel.coefficient((0, 0, 2)) ** 2 > 0.999

    def test_deep_bound_decays(self):
        rel = relative_expansion(-20.0, 1.0, 12)
        axial = [abs(rel.coefficient((0, 0, k))) for k in range(0, 13, 2)]
        assert np.all(np.diff(axial) < 0)

    def test_resonant_denominator(self):
        with pytest.raises(ResonantDenominatorError):
            relative_expansion(1.0, 1.0, 4)

    def test_odd_cap(self):
        with pytest.raises(OddModeError):
            relative_expansion(0.5, 1.0, 5)


class TestAssembleAmplitude:
    def test_ground_is_product_state(self):
        amp = assemble_amplitude(pure_mode((0, 0, 0)))
        assert amp.entry((0, 0, 0), (0, 0, 0)) == pytest.approx(1.0, abs=1e-15)
        assert amp.norm2 == pytest.approx(1.0, abs=1e-14)

    def test_axial_mode_matrix(self):
        amp = assemble_amplitude(pure_mode((0, 0, 2)))
        assert amp.entry((0, 0, 0), (0, 0, 2)) == pytest.approx(0.5, abs=1e-15)
        assert amp.entry((0, 0, 2), (0, 0, 0)) == pytest.approx(0.5, abs=1e-15)
        assert amp.entry((0, 0, 1), (0, 0, 1)) == pytest.approx(-1.0 / math.sqrt(2.0), abs=1e-15)
        assert amp.entry((0, 0, 0), (0, 0, 0)) == 0.0
        assert amp.entry((0, 0, 2), (0, 0, 2)) == 0.0

    def test_norm_symmetry_and_parity(self):
        rel = relative_expansion(0.3, 5.0 / 6.0, 6, 8)
        amp = assemble_amplitude(rel)
        assert amp.norm2 == pytest.approx(1.0, abs=1e-12)
        assert amp.max_asymmetry() < 1e-14
        assert amp.entry((1, 0, 0), (0, 0, 0)) == 0.0
        full = dense_matrix(amp)
        assert full.shape == (7 * 7 * 9, 7 * 7 * 9)
        assert np.sum(full ** 2) == pytest.approx(1.0, abs=1e-12)

    def test_dense_matrix_parity_selection(self):
        amp = assemble_amplitude(relative_expansion(-0.7, 1.0, 4))
        full = dense_matrix(amp)
        n = 5
        for i in range(n ** 3):
            m1 = np.unravel_index(i, (n, n, n))
            for j in range(n ** 3):
                m2 = np.unravel_index(j, (n, n, n))
                if any((a + b) % 2 for a, b in zip(m1, m2)):
                    assert full[i, j] == 0.0

    def test_reconstruction(self):
        rel = relative_expansion(1.4, 7.0 / 6.0, 8)
        recovered = project_relative(assemble_amplitude(rel))
        np.testing.assert_allclose(recovered, rel.coeffs, atol=1e-10)

    def test_reconstruction_other_sign_convention(self):
        rel = relative_expansion(0.2, 1.0, 6)
        amp = assemble_amplitude(rel, SIGN_ON_FIRST)
        np.testing.assert_allclose(project_relative(amp, SIGN_ON_FIRST), rel.coeffs, atol=1e-10)


class TestTruncationCaps:
    def test_caps(self):
        assert truncation_caps(8, 1.0) == (8, 8)
        assert truncation_caps(8, 20.0) == (8, 8)
        assert truncation_caps(8, 5.0 / 6.0) == (8, 10)
        assert truncation_caps(20, 1.0 / 20.0) == (20, 60)
        assert truncation_caps(4, 1.0 / 20.0, axial_cap=30) == (4, 30)

    def test_odd_cap(self):
        with pytest.raises(OddModeError):
            truncation_caps(7, 1.0)


class TestLimitExpansion:
    def test_spherical_branch1(self):
        rel = limit_expansion(1, 1.0)
        weights = {k: c * c for k, c in rel.as_dict(1e-12).items()}
        assert set(weights) == {(2, 0, 0), (0, 2, 0), (0, 0, 2)}
        assert all(w == pytest.approx(1.0 / 3.0) for w in weights.values())

    def test_cigar_branch1(self):
        rel = limit_expansion(1, 5.0 / 6.0)
        assert set(rel.as_dict(1e-12)) == {(0, 0, 2)}

    def test_pancake_branch2(self):
        rel = limit_expansion(2, 20.0)
        assert set(rel.as_dict(1e-12)) == {(4, 0, 0), (0, 4, 0), (2, 2, 0)}

    def test_quasi_1d_branch2(self):
        rel = limit_expansion(2, 1.0 / 20.0)
        assert set(rel.as_dict(1e-12)) == {(0, 0, 4)}

    def test_larger_caps_keep_the_same_state(self):
        small = limit_expansion(2, 1.0)
        large = limit_expansion(2, 1.0, K=8)
        for k, c in small.as_dict(1e-12).items():
            assert large.coefficient(k) == pytest.approx(c, rel=1e-12)

    def test_caps_too_small(self):
        with pytest.raises(ValueError):
            limit_expansion(2, 1.0, K=2)
