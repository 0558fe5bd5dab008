"""
Tests for the exact Landau level arithmetic, the symbol functions and the
diagonal model projectors.
"""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from core.errors import DomainError
from core.models.landau import WeinsteinModel
from core.services import landau_spectra

QUANTIZED_FIELDS = [Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2)]


class TestQuantization:
    """2B(g - 1) must be an integer."""

    @pytest.mark.parametrize("B,genus,expected", [
        ("1/2", 2, True),
        ("3/2", 2, True),
        ("1/3", 2, False),
        ("3/4", 2, False),
        ("1/4", 3, True),
    ])
    def test_condition(self, B, genus, expected):
        assert landau_spectra.quantization_check(B, genus) is expected

    def test_genus_one_rejected(self):
        with pytest.raises(DomainError):
            landau_spectra.quantization_check(1, 1)


class TestEigenvalue:
    """lambda_{k,m} = kB(m + 1/2) - m(m + 1)/2."""

    @pytest.mark.parametrize("k,m,B,expected", [
        (1, 0, 2, Fraction(1)),
        (10, 3, 2, Fraction(64)),
        (10, 19, 2, Fraction(200)),
        (5, 1, "1/2", Fraction(11, 4)),
    ])
    def test_values(self, k, m, B, expected):
        assert landau_spectra.eigenvalue(k, m, B) == expected

    def test_exact_type(self):
        assert isinstance(landau_spectra.eigenvalue(10, 3, 2), Fraction)

    @pytest.mark.parametrize("k,m", [(10, 20), (10, -1), (0, 0)])
    def test_index_out_of_range(self, k, m):
        with pytest.raises(DomainError):
            landau_spectra.eigenvalue(k, m, 2)

    def test_unquantized_field_rejected(self):
        with pytest.raises(DomainError):
            landau_spectra.eigenvalue(10, 0, "1/3")

    @given(k=st.integers(1, 60), B=st.sampled_from(QUANTIZED_FIELDS))
    def test_strictly_increasing(self, k, B):
        values = [landau_spectra.eigenvalue(k, m, B) for m in range(landau_spectra.level_count(k, B))]
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_level_record(self):
        level = landau_spectra.landau_level(10, 3, 2)
        assert level.to_dict() == {'k': 10, 'm': 3, 'B': '2/1', 'lambda': '64/1', 'lambda_float': 64.0, 'N_k': 20}


class TestTopLevel:
    """Scaled top level approaches the critical energy."""

    def test_integer_field(self):
        assert landau_spectra.scaled_top_level(10, 2) == 2.0

    def test_half_integer_field(self):
        assert landau_spectra.scaled_top_level(7, "3/2") == pytest.approx(1.117346939, rel=1e-9)

    @given(k=st.integers(1, 400), B=st.sampled_from(QUANTIZED_FIELDS))
    def test_within_field_over_k_of_critical_energy(self, k, B):
        if landau_spectra.level_count(k, B) < 1:
            return
        gap = abs(landau_spectra.top_level(k, B) - B * B / 2)
        assert gap <= B / k


class TestSymbols:
    """beta(s) = Bs - s^2/2 and its inverse a."""

    def test_beta_values(self):
        assert landau_spectra.beta(0.0, 2.0) == 0.0
        assert landau_spectra.beta(2.0, 2.0) == 2.0

    def test_symbol_a_endpoints(self):
        assert landau_spectra.symbol_a(0.0, 2.0) == 0.0
        assert landau_spectra.symbol_a(2.0, 2.0) == pytest.approx(2.0)

    @given(s=st.floats(min_value=0.0, max_value=2.0))
    def test_a_inverts_beta(self, s):
        assert landau_spectra.symbol_a(landau_spectra.beta(s, 2.0), 2.0) == pytest.approx(s, abs=1e-7)

    @given(p=st.floats(min_value=0.0, max_value=2.0))
    def test_beta_inverts_a(self, p):
        assert landau_spectra.beta(landau_spectra.symbol_a(p, 2.0), 2.0) == pytest.approx(p, abs=1e-12)

    def test_out_of_range(self):
        with pytest.raises(DomainError):
            landau_spectra.beta(2.5, 2.0)
        with pytest.raises(DomainError):
            landau_spectra.symbol_a(2.5, 2.0)


class TestIdentity:
    """The level identity holds exactly."""

    @given(k=st.integers(1, 100), B=st.sampled_from(QUANTIZED_FIELDS), data=st.data())
    def test_residual_is_zero(self, k, B, data):
        n_levels = landau_spectra.level_count(k, B)
        if n_levels < 1:
            return
        m = data.draw(st.integers(0, n_levels - 1))
        assert landau_spectra.weinstein_identity_residual(k, m, B) == 0

    def test_small_sweep(self):
        result = landau_spectra.identity_sweep(20, QUANTIZED_FIELDS)
        assert result['all_zero']
        expected = sum(math.floor(k * B) for B in QUANTIZED_FIELDS for k in range(1, 21))
        assert result['levels_checked'] == expected

    def test_sweep_independent_of_shards(self):
        assert landau_spectra.identity_sweep(24, ["3/2"], shards=1) == \
            landau_spectra.identity_sweep(24, ["3/2"], shards=3)

    @pytest.mark.slow
    def test_full_sweep(self):
        assert landau_spectra.identity_sweep(200, QUANTIZED_FIELDS, shards=2)['all_zero']

    def test_sweep_needs_fields(self):
        with pytest.raises(DomainError):
            landau_spectra.identity_sweep(10, [])


class TestTables:
    """Level tables and nearest levels."""

    def test_levels_table(self):
        table = landau_spectra.levels_table(10, 2)
        assert len(table) == 20
        assert list(table.columns) == ['k', 'm', 'numerator', 'denominator', 'lambda_float']
        row = table.iloc[3]
        assert (row['numerator'], row['denominator']) == (64, 1)

    def test_nearest_level(self):
        assert landau_spectra.nearest_level(10, 2, "16/25") == 3
        assert landau_spectra.nearest_level(10, 2, 0) == 0
        assert landau_spectra.nearest_level(10, 2, 2) == 19

    def test_nearest_level_energy_range(self):
        with pytest.raises(DomainError):
            landau_spectra.nearest_level(10, 2, 3)


class TestDiagonalModel:
    """Fourier projectors of the model with integer spectrum."""

    def test_projector_onto_middle_level(self):
        model = WeinsteinModel(k=1, levels=(0, 1, 2))
        np.testing.assert_allclose(landau_spectra.projector(model, 1), np.diag([0.0, 1.0, 0.0]), atol=1e-12)

    def test_projector_onto_absent_level(self):
        model = WeinsteinModel(k=1, levels=(0, 1, 2))
        np.testing.assert_allclose(landau_spectra.projector(model, 5), np.zeros((3, 3)), atol=1e-12)

    def test_multiplicities(self):
        model = WeinsteinModel(k=4, levels=(0, 3), multiplicities=(2, 1))
        np.testing.assert_allclose(landau_spectra.projector(model, 0), np.diag([1.0, 1.0, 0.0]), atol=1e-12)
        assert landau_spectra.spectrum_summary(model) == ['0/1', '0/1', '3/4']

    def test_projector_identities(self):
        result = landau_spectra.projector_check(WeinsteinModel(k=3, levels=(0, 1, 2, 5), multiplicities=(1, 2, 1, 3)))
        for key in ('indicator_error', 'idempotence_error', 'orthogonality_error', 'completeness_error'):
            assert result[key] <= 1e-12
        assert result['circle_periodicity'] == 0.0

    def test_fractional_spectrum_is_not_periodic(self):
        model = WeinsteinModel.diagnostic(k=2, levels=(Fraction(1, 2), 1))
        assert landau_spectra.circle_periodicity(model) > 0.5

    def test_strict_model_rejects_fractions(self):
        with pytest.raises(DomainError):
            WeinsteinModel(k=2, levels=(Fraction(1, 2),))

    def test_multiplicity_mismatch(self):
        with pytest.raises(DomainError):
            WeinsteinModel(k=2, levels=(0, 1), multiplicities=(1,))
