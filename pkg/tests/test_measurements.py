"""Detection-law tests: point values, normalization, identities, sampling."""

import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.integrate import quad

from thermosub import measurements, oracle, states
from thermosub.errors import DomainError, InvalidParameterError
from thermosub.states import ProtocolParams

ETA, EPS = 0.95, 0.99


def all_families(lam, eps=EPS):
    return [
        states.thermal(lam),
        states.subtracted(lam),
        states.added(lam),
        states.realistic_accepted(lam, ETA, eps),
        states.realistic_rejected(lam, ETA, eps),
    ]


class TestHomodyne:
    def test_vacuum_limit(self):
        got = measurements.homodyne_pdf(states.thermal(1e-12), 0.0)
        assert got == pytest.approx(1 / math.sqrt(math.pi), rel=1e-10)

    def test_thermal_point_value(self):
        got = measurements.homodyne_pdf(states.thermal(1.0), 0.0)
        assert got == pytest.approx(1 / math.sqrt(3 * math.pi), rel=1e-14)

    def test_subtracted_point_value(self):
        got = measurements.homodyne_pdf(states.subtracted(1.0), 0.0)
        assert got == pytest.approx(6 / (math.sqrt(math.pi) * 3**2.5), rel=1e-14)

    @pytest.mark.parametrize("lam", [0.1, 1.0, 10.0])
    def test_normalization(self, lam):
        for model in all_families(lam):
            half = measurements.homodyne_halfwidth(model)
            total, err = quad(lambda x: measurements.homodyne_pdf(model, x),
                              -half, half, limit=200)
            assert total == pytest.approx(1.0, abs=1e-9)

    @pytest.mark.parametrize("lam", [0.1, 1.0, 10.0])
    def test_nonnegative(self, lam):
        x = np.linspace(-12, 12, 501)
        for model in all_families(lam):
            assert np.all(measurements.homodyne_pdf(model, x) >= 0)

    def test_analytic_derivative_matches_central_difference(self):
        x = np.linspace(-4, 4, 41)
        h = 1e-6
        for model in all_families(1.3):
            analytic = measurements.homodyne_pdf_dlambda(model, x)
            hi = measurements.homodyne_pdf(states.with_lambda(model, 1.3 + h), x)
            lo = measurements.homodyne_pdf(states.with_lambda(model, 1.3 - h), x)
            np.testing.assert_allclose(analytic, (hi - lo) / (2 * h), rtol=2e-5, atol=1e-8)


class TestHeterodyne:
    def test_rejects_negative_u(self):
        with pytest.raises(DomainError):
            measurements.heterodyne_radial_pdf(states.thermal(1.0), -0.5)

    def test_thermal_point_value(self):
        got = measurements.heterodyne_radial_pdf(states.thermal(1.0), 0.0)
        assert got == pytest.approx(0.5, rel=1e-14)

    def test_added_vanishes_at_origin(self):
        assert measurements.heterodyne_radial_pdf(states.added(2.0), 0.0) == 0.0

    def test_subtracted_point_value(self):
        got = measurements.heterodyne_radial_pdf(states.subtracted(1.0), 0.0)
        assert got == pytest.approx(0.25, rel=1e-14)

    @pytest.mark.parametrize("lam", [0.1, 1.0, 10.0])
    def test_normalization(self, lam):
        for model in all_families(lam):
            hi = measurements.heterodyne_cutoff(model)
            total, err = quad(lambda u: measurements.heterodyne_radial_pdf(model, u),
                              0.0, hi, limit=200)
            assert total == pytest.approx(1.0, abs=1e-9)

    def test_analytic_derivative_matches_central_difference(self):
        u = np.linspace(0.0, 12.0, 41)
        h = 1e-6
        for model in all_families(0.8):
            analytic = measurements.heterodyne_radial_pdf_dlambda(model, u)
            hi = measurements.heterodyne_radial_pdf(states.with_lambda(model, 0.8 + h), u)
            lo = measurements.heterodyne_radial_pdf(states.with_lambda(model, 0.8 - h), u)
            # atol floor covers the sign change of the derivative, where the
            # central difference is pure rounding noise
            np.testing.assert_allclose(analytic, (hi - lo) / (2 * h), rtol=2e-5, atol=1e-8)


class TestOnOff:
    def test_thermal_closed_form(self):
        dist = measurements.onoff_pmf(states.thermal(1.0), EPS)
        assert dist.p_off == pytest.approx(float(Fraction(100, 199)), rel=1e-14)

    def test_subtracted_closed_form(self):
        dist = measurements.onoff_pmf(states.subtracted(1.0), EPS)
        assert dist.p_off == pytest.approx(float(Fraction(100, 199) ** 2), rel=1e-14)

    def test_added_perfect_detector_always_clicks(self):
        dist = measurements.onoff_pmf(states.added(1.0), 1.0)
        assert dist.p_off == 0.0
        assert dist.p_on == 1.0

    def test_complement_is_exact(self):
        dist = measurements.onoff_pmf(states.thermal(0.3), 0.7)
        assert dist.p_off + dist.p_on == 1.0

    def test_detector_efficiency_validated(self):
        with pytest.raises(InvalidParameterError):
            measurements.onoff_pmf(states.thermal(1.0), 0.0)

    @pytest.mark.parametrize("lam", [0.1, 1.0, 10.0])
    @pytest.mark.parametrize("eps_d", [0.5, 0.97, 1.0])
    def test_series_matches_closed_form(self, lam, eps_d):
        for model in all_families(lam):
            closed = measurements.onoff_pmf(model, eps_d).p_off
            series = measurements.onoff_p_off_series(model, eps_d)
            assert series == pytest.approx(closed, rel=1e-12, abs=1e-15)

    def test_derivative_matches_central_difference(self):
        h = 1e-6
        for model in all_families(1.3):
            analytic = measurements.onoff_p_off_dlambda(model, 0.97)
            hi = measurements.onoff_pmf(states.with_lambda(model, 1.3 + h), 0.97).p_off
            lo = measurements.onoff_pmf(states.with_lambda(model, 1.3 - h), 0.97).p_off
            assert analytic == pytest.approx((hi - lo) / (2 * h), rel=2e-5)


class TestMixtureIdentityLifts:
    @pytest.mark.parametrize("lam", [0.1, 1.0, 10.0])
    def test_homodyne(self, lam):
        p = ProtocolParams(lam, ETA, EPS)
        p1 = states.success_probability(p)
        x = np.linspace(-10, 10, 201)
        acc = measurements.homodyne_pdf(states.realistic_accepted(lam, ETA, EPS), x)
        rej = measurements.homodyne_pdf(states.realistic_rejected(lam, ETA, EPS), x)
        target = measurements.homodyne_pdf(states.thermal(ETA * lam), x)
        np.testing.assert_allclose(p1 * acc + (1 - p1) * rej, target, rtol=0, atol=1e-10)

    @pytest.mark.parametrize("lam", [0.1, 1.0, 10.0])
    def test_heterodyne(self, lam):
        p = ProtocolParams(lam, ETA, EPS)
        p1 = states.success_probability(p)
        u = np.linspace(0, 40, 201)
        acc = measurements.heterodyne_radial_pdf(states.realistic_accepted(lam, ETA, EPS), u)
        rej = measurements.heterodyne_radial_pdf(states.realistic_rejected(lam, ETA, EPS), u)
        target = measurements.heterodyne_radial_pdf(states.thermal(ETA * lam), u)
        np.testing.assert_allclose(p1 * acc + (1 - p1) * rej, target, rtol=0, atol=1e-10)


class TestEmpiricalHistograms:
    def test_thermal_homodyne_total_variation(self):
        n_samples = 400_000
        samples = oracle.sample_homodyne(states.thermal(1.0), n_samples, 99)
        edges = np.linspace(-6, 6, 51)
        counts, _ = np.histogram(samples, bins=edges)
        centers = 0.5 * (edges[:-1] + edges[1:])
        width = edges[1] - edges[0]
        model_mass = measurements.homodyne_pdf(states.thermal(1.0), centers) * width
        empirical_mass = counts / n_samples
        tv = 0.5 * np.sum(np.abs(empirical_mass - model_mass))
        assert tv < 5 / math.sqrt(n_samples)
