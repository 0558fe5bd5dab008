"""
Tests for bump observables, their evaluation on reduced frames and the
Liouville averages.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from config.settings import Settings
from core.errors import DomainError
from core.models.magnetic import PhaseState
from core.models.observable import Observable
from core.models.sl2 import GroupElement, HalfPlanePoint, I_POINT, V, X
from core.services import observables
from core.services.sl2_core import exp_algebra, mobius
from tests.strategies import frames


class TestBumpProfile:
    """Radial profile exp(1 - 1/(1 - (r/r0)^2))."""

    def test_peak(self):
        assert observables.bump_profile(0.0, 1.2) == 1.0

    def test_support(self):
        assert observables.bump_profile(1.2, 1.2) == 0.0
        assert observables.bump_profile(3.0, 1.2) == 0.0

    def test_inverse_e_point(self):
        assert observables.bump_profile(1.2 / math.sqrt(2.0), 1.2) == pytest.approx(math.exp(-1.0), rel=1e-14)

    def test_invalid_radius(self):
        with pytest.raises(DomainError):
            observables.bump_profile(0.1, 0.0)

    @given(r=st.floats(min_value=0.0, max_value=2.0), r0=st.floats(min_value=0.1, max_value=1.4))
    def test_array_matches_scalar(self, r, r0):
        assert observables.bump_array(np.array([r]), r0)[0] == pytest.approx(
            observables.bump_profile(r, r0), rel=1e-14, abs=1e-300)

    def test_monotone_decreasing(self):
        values = observables.bump_array(np.linspace(0.0, 1.2, 50), 1.2)
        assert np.all(np.diff(values) <= 0.0)


class TestObservableModel:
    """Observable construction and serialization."""

    def test_round_trip(self):
        obs = Observable(r0=0.9, fiber_mode=2)
        assert Observable.from_dict(obs.to_dict()) == obs

    def test_constant_round_trip(self):
        obs = Observable.constant_observable(0.25)
        assert Observable.from_dict(obs.to_dict()).constant == 0.25

    @pytest.mark.parametrize("kwargs", [
        {'r0': 0.0},
        {'r0': Settings.OBSERVABLE_CONFIG["max_radius"] + 0.1},
        {'fiber_mode': -1},
        {'center': HalfPlanePoint(0.0, -1.0)},
    ])
    def test_invalid_rejected(self, kwargs):
        with pytest.raises(DomainError):
            Observable(**kwargs)


class TestEvaluate:
    """Values on phase states."""

    def test_value_at_center(self, elliptic_params):
        state = PhaseState(frame=GroupElement.identity(), params=elliptic_params)
        assert observables.evaluate(Observable(r0=1.2), state) == pytest.approx(1.0)

    def test_value_at_distance(self, elliptic_params):
        state = PhaseState(frame=exp_algebra(V, 0.4) @ exp_algebra(X, 0.6), params=elliptic_params)
        assert observables.evaluate(Observable(r0=1.2), state) == pytest.approx(
            observables.bump_profile(0.6, 1.2), rel=1e-10)

    def test_constant(self, elliptic_params):
        state = PhaseState(frame=exp_algebra(X, 2.0), params=elliptic_params)
        assert observables.evaluate(Observable.constant_observable(3.5), state) == 3.5

    @settings(max_examples=100)
    @given(g=frames(max_radius=3.0), k=st.integers(0, 7), mode=st.integers(0, 2))
    def test_group_invariance(self, surface, g, k, mode):
        obs = Observable(r0=1.2, fiber_mode=mode)
        shifted = surface.group.generator(k) @ g
        values = observables.evaluate_frames(obs, np.stack([g.as_array(), shifted.as_array()]), surface)
        assert values[0] == pytest.approx(values[1], abs=1e-9)

    def test_neighbor_center_sees_the_same_bump(self, surface):
        """A frame based at g_k·i is the center of the bump on the surface."""
        obs = Observable(r0=1.2)
        frames = np.stack([g.as_array() for g in surface.group.generators])
        np.testing.assert_allclose(observables.evaluate_frames(obs, frames, surface), 1.0, atol=1e-12)

    def test_off_domain_center_rejected(self, surface):
        outside = mobius(surface.group.generator(0), I_POINT)
        with pytest.raises(DomainError):
            observables.evaluate_frames(Observable(center=outside, r0=0.5), np.eye(2)[None], surface)

    def test_fiber_mode_averages_out(self, elliptic_params):
        state = PhaseState(frame=exp_algebra(V, 0.3) @ exp_algebra(X, 0.5), params=elliptic_params)
        assert observables.fiber_average(Observable(r0=1.2, fiber_mode=1), state) == pytest.approx(0.0, abs=1e-12)

    def test_base_bump_ignores_the_fiber(self, elliptic_params):
        state = PhaseState(frame=exp_algebra(X, 0.5), params=elliptic_params)
        obs = Observable(r0=1.2)
        assert observables.fiber_average(obs, state) == pytest.approx(observables.evaluate(obs, state), rel=1e-12)


class TestLiouvilleAverage:
    """Monte-Carlo averages against quadrature."""

    def test_constant(self):
        estimate = observables.liouville_average(Observable.constant_observable(1.0), 1000, 0)
        assert estimate.mean == 1.0
        assert estimate.stderr == 0.0

    def test_too_few_samples(self):
        with pytest.raises(DomainError):
            observables.liouville_average(Observable(r0=1.2), 99, 0)

    def test_matches_quadrature(self):
        obs = Observable(r0=1.2)
        estimate = observables.liouville_average(obs, 50_000, 1)
        assert abs(estimate.mean - observables.liouville_quadrature(obs)) <= 4.0 * estimate.stderr + 1e-12

    def test_independent_of_shards(self):
        obs = Observable(r0=1.0)
        n = Settings.MONTE_CARLO_CONFIG["chunk_size"] + 5000
        assert observables.liouville_average(obs, n, 4, shards=1) == observables.liouville_average(obs, n, 4, shards=2)

    def test_quadrature_increases_with_radius(self):
        values = [observables.liouville_quadrature(Observable(r0=r0)) for r0 in (0.4, 0.8, 1.2, 1.4)]
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_quadrature_of_fiber_modes(self):
        assert observables.liouville_quadrature(Observable(r0=1.2, fiber_mode=1)) == 0.0
        assert observables.liouville_quadrature(Observable.constant_observable(2.0)) == 2.0

    def test_quadrature_agrees_with_simpson(self):
        r0 = 1.2
        r = np.linspace(0.0, r0, 20_001)
        integrand = observables.bump_array(r, r0) * 2.0 * math.pi * np.sinh(r)
        h = r[1] - r[0]
        simpson = h / 3.0 * (integrand[0] + integrand[-1] + 4.0 * integrand[1:-1:2].sum()
                             + 2.0 * integrand[2:-1:2].sum())
        assert observables.liouville_quadrature(Observable(r0=r0)) == pytest.approx(
            simpson / (4.0 * math.pi), rel=1e-9)
