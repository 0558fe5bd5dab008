"""
Tests for the zonal torus: parametrization, moments of its measure and the
radial density of its projection near the anchor.
"""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from core.errors import DomainError, FitError
from core.models.magnetic import MagneticParams
from core.models.observable import Observable
from core.models.sl2 import I_POINT, V, X
from core.models.zonal import RadialHistogram
from core.services import zonal_lab
from core.services.sl2_core import base_point, exp_algebra, hyp_distance, mobius
from tests.strategies import angles


@pytest.fixture(scope="module")
def torus(elliptic_params):
    return zonal_lab.zonal_torus(elliptic_params)


class TestTorus:
    """Construction and parametrization."""

    def test_period(self, torus):
        assert torus.period == pytest.approx(math.pi * math.sqrt(2.0))

    @pytest.mark.parametrize("E", [2.0, 4.0])
    def test_requires_closed_orbits(self, E):
        with pytest.raises(DomainError):
            zonal_lab.zonal_torus(MagneticParams(B=2.0, E=E))

    def test_anchor_must_sit_at_i(self, elliptic_params):
        with pytest.raises(DomainError):
            zonal_lab.zonal_torus(elliptic_params, anchor=exp_algebra(X, 0.5))

    @given(theta=angles)
    def test_circle_at_time_zero(self, torus, theta):
        assert hyp_distance(base_point(zonal_lab.torus_point(torus, theta, 0.0)), I_POINT) <= 1e-12

    @given(theta=angles, t=st.floats(min_value=0.0, max_value=5.0))
    def test_closure(self, torus, theta, t):
        start = zonal_lab.torus_point(torus, theta, t)
        assert zonal_lab.torus_point(torus, theta, t + torus.period).projectively_equal(start, 1e-9)

    def test_speed_at_the_anchor(self, torus):
        t = 1e-5
        d = hyp_distance(base_point(zonal_lab.torus_point(torus, 0.0, t)), I_POINT)
        assert d / t == pytest.approx(math.sqrt(2.0), rel=1e-6)

    def test_quotient_mode_is_reduced(self, torus, surface):
        frame = zonal_lab.torus_point(torus, 0.3, 1.7, quotient=True)
        assert surface.in_domain(base_point(frame))

    def test_batched_frames(self, torus):
        theta = np.array([0.1, 2.0, 4.0])
        t = np.array([0.5, 1.5, 3.0])
        stack = zonal_lab.torus_frames(torus, theta, t)
        for row, a, b in zip(stack, theta, t):
            np.testing.assert_allclose(row, zonal_lab.torus_point(torus, a, b).as_array(), atol=1e-12)


class TestDefectMoment:
    """Moments of the normalized torus measure."""

    def test_total_mass(self, torus):
        assert zonal_lab.defect_moment(torus, Observable.constant_observable(1.0), 64, 64) == 1.0

    def test_grid_too_small(self, torus):
        with pytest.raises(DomainError):
            zonal_lab.defect_moment(torus, Observable(r0=1.2), 16, 64)

    def test_anchor_rotation_invariance(self, elliptic_params, torus):
        rotated = zonal_lab.zonal_torus(elliptic_params, anchor=exp_algebra(V, 2.0 * math.pi * 3 / 64))
        obs = Observable(r0=1.2)
        assert zonal_lab.defect_moment(rotated, obs, 64, 64) == pytest.approx(
            zonal_lab.defect_moment(torus, obs, 64, 64), abs=1e-10)

    @pytest.mark.parametrize("shift", [0.1, 1.0, 7.0])
    def test_flow_invariance(self, torus, shift):
        obs = Observable(r0=1.2, fiber_mode=1)
        assert zonal_lab.defect_moment(torus, obs, 128, 128, time_shift=shift) == pytest.approx(
            zonal_lab.defect_moment(torus, obs, 128, 128), abs=1e-6)

    def test_grid_doubling(self, torus):
        obs = Observable(r0=1.2)
        coarse = zonal_lab.defect_moment(torus, obs, 32, 32)
        fine = zonal_lab.defect_moment(torus, obs, 64, 64)
        assert abs(fine - coarse) <= 1e-4
        assert 0.0 < fine < 1.0

    def test_bump_away_from_the_torus(self, torus, surface):
        """The torus stays within 2R of i, so a small bump near a vertex sees nothing."""
        center = mobius(exp_algebra(V, math.pi / 8.0) @ exp_algebra(X, 2.3), I_POINT)
        assert surface.in_domain(center)
        assert zonal_lab.defect_moment(torus, Observable(center=center, r0=0.3), 64, 64) == 0.0


class TestRadialDensity:
    """Histogram of the distance to the anchor."""

    def test_too_few_samples(self, torus):
        with pytest.raises(DomainError):
            zonal_lab.radial_density(torus, 99_999, 0)

    def test_mass_and_determinism(self, torus):
        first = zonal_lab.radial_density(torus, 100_000, 6)
        assert first.mass() == 1.0
        np.testing.assert_array_equal(first.counts, zonal_lab.radial_density(torus, 100_000, 6).counts)
        np.testing.assert_array_equal(first.counts, zonal_lab.radial_density(torus, 100_000, 6, shards=2).counts)

    def test_support_is_the_maximal_excursion(self, torus, elliptic_params):
        hist = zonal_lab.radial_density(torus, 100_000, 0, bins=50)
        assert hist.edges[-1] == pytest.approx(2.0 * math.asinh(1.0), rel=1e-8)

    def test_pdf_at_zero(self, torus, elliptic_params):
        hist = zonal_lab.radial_density(torus, 100_000, 1)
        assert zonal_lab.expected_pdf_at_zero(elliptic_params) == pytest.approx(1.0 / math.pi, rel=1e-12)
        assert zonal_lab.pdf_at_zero(hist) == pytest.approx(1.0 / math.pi, rel=0.2)

    def test_zero_energy_rejected(self):
        tor = zonal_lab.zonal_torus(MagneticParams(B=2.0, E=0.0))
        with pytest.raises(DomainError):
            zonal_lab.radial_density(tor, 100_000, 0)

    @pytest.mark.slow
    def test_acceptance_run(self, torus, elliptic_params):
        hist = zonal_lab.radial_density(torus, 10_000_000, 0, shards=4)
        assert zonal_lab.pdf_at_zero(hist) == pytest.approx(1.0 / math.pi, rel=0.05)
        assert 0.9 <= zonal_lab.blowup_fit(hist).q <= 1.1


class TestBlowupFit:
    """Fits of the area density near the anchor."""

    def test_constant_radial_pdf_blows_up_like_one_over_r(self):
        edges = 0.005 * np.arange(41)
        hist = RadialHistogram.from_pdf(edges, np.full(40, 1.0 / math.pi), n=10_000_000)
        fit = zonal_lab.blowup_fit(hist)
        assert fit.q == pytest.approx(1.0, abs=0.02)
        assert fit.c == pytest.approx(1.0 / (2.0 * math.pi * math.pi), rel=0.02)

    def test_area_uniform_pdf_is_flat(self):
        edges = 0.005 * np.arange(41)
        midpoints = 0.5 * (edges[:-1] + edges[1:])
        hist = RadialHistogram.from_pdf(edges, np.sinh(midpoints), n=1_000_000_000)
        assert zonal_lab.blowup_fit(hist).q == pytest.approx(0.0, abs=0.01)

    def test_too_few_bins(self):
        hist = RadialHistogram.from_pdf(np.linspace(0.0, 1.0, 11), np.ones(10), n=1000)
        with pytest.raises(FitError):
            zonal_lab.blowup_fit(hist)

    def test_normalization_report(self, torus):
        edges = 0.005 * np.arange(41)
        hist = RadialHistogram.from_pdf(edges, np.full(40, 1.0 / math.pi), n=10_000_000)
        report = zonal_lab.normalization_report(torus, zonal_lab.blowup_fit(hist))
        assert report['c_speed_form'] == pytest.approx(1.0 / (2.0 * math.pi * math.pi), rel=1e-12)
        assert report['ratio_fit_to_speed_form'] == pytest.approx(1.0, rel=0.02)


class TestRadialHistogram:
    """Histogram model."""

    def test_frame_columns(self):
        hist = RadialHistogram(edges=[0.0, 0.5, 1.0], counts=[3, 1], n=4)
        frame = hist.to_frame()
        assert list(frame.columns) == ['r_mid', 'pdf', 'count']
        np.testing.assert_allclose(frame['pdf'], [1.5, 0.5])

    def test_shape_mismatch(self):
        with pytest.raises(DomainError):
            RadialHistogram(edges=[0.0, 1.0], counts=[1, 2], n=3)
