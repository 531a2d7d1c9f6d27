"""Fisher-information engines against closed forms and the reference oracle."""

from fractions import Fraction

import numpy as np
import pytest

import _reference as ref
from thermosub import fisher, measurements, states
from thermosub.errors import (
    DomainError,
    InvalidParameterError,
    NonconvergenceError,
    UnsupportedFamilyError,
)
from thermosub.fisher import DerivativeSpec
from thermosub.states import ProtocolParams

ETA, EPS = 0.95, 0.99
LAM_GRID = [0.01, 0.1, 1.0, 10.0, 100.0]


def qfi_thermal(lam):
    return 1.0 / (lam * (1.0 + lam))


class TestDiscrete:
    @pytest.mark.parametrize("lam", LAM_GRID)
    def test_thermal_matches_closed_form(self, lam):
        got = fisher.fi_discrete(states.thermal(lam))
        assert got.value == pytest.approx(qfi_thermal(lam), rel=1e-9)
        assert got.method == "series"

    @pytest.mark.parametrize("lam", LAM_GRID)
    def test_subtracted_doubles_thermal(self, lam):
        sub = fisher.fi_discrete(states.subtracted(lam)).value
        th = fisher.fi_discrete(states.thermal(lam)).value
        assert sub == pytest.approx(2 * th, rel=1e-9)

    @pytest.mark.parametrize("lam", LAM_GRID)
    def test_added_doubles_thermal(self, lam):
        add = fisher.fi_discrete(states.added(lam)).value
        assert add == pytest.approx(2 * qfi_thermal(lam), rel=1e-9)

    def test_realistic_against_reference_series(self):
        got = fisher.fi_discrete(states.realistic_accepted(1e-3, ETA, EPS))
        assert got.value == pytest.approx(
            ref.FROZEN[("photon_series", "realistic_accepted", 1e-3)], rel=1e-8
        )

    @pytest.mark.parametrize("lam", np.geomspace(1e-2, 1e2, 17))
    def test_realistic_below_ideal(self, lam):
        acc = fisher.fi_discrete(states.realistic_accepted(lam, ETA, EPS)).value
        sub = fisher.fi_discrete(states.subtracted(lam)).value
        assert acc <= sub * (1 + 1e-9)

    def test_realistic_approaches_thermal_at_high_mean(self):
        acc = fisher.fi_discrete(states.realistic_accepted(100.0, ETA, EPS)).value
        assert acc / qfi_thermal(100.0) == pytest.approx(1.0, abs=0.05)

    @pytest.mark.xfail(
        strict=True,
        reason="the click-conditioned information tends to eta times the ideal "
        "value as lam -> 0 (here 0.95), so a 2% window around 1 cannot hold; "
        "see notes/decisions.md",
    )
    def test_realistic_converges_to_ideal_at_low_mean(self):
        acc = fisher.fi_discrete(states.realistic_accepted(1e-3, ETA, EPS)).value
        sub = fisher.fi_discrete(states.subtracted(1e-3)).value
        assert acc / sub == pytest.approx(1.0, abs=0.02)

    def test_central_difference_agrees(self):
        for model in (states.thermal(0.7), states.subtracted(0.7),
                      states.realistic_accepted(0.7, ETA, EPS)):
            analytic = fisher.fi_discrete(model).value
            central = fisher.fi_discrete(model, DerivativeSpec("central"))
            assert central.value == pytest.approx(analytic, rel=1e-5)
            assert central.method == "finite_difference"


class TestContinuous:
    @pytest.mark.parametrize("lam", LAM_GRID)
    def test_thermal_homodyne_gaussian_identity(self, lam):
        got = fisher.fi_continuous(states.thermal(lam), "homodyne")
        assert got.value == pytest.approx(2 / (1 + 2 * lam) ** 2, rel=1e-7)
        assert got.method == "quadrature"

    @pytest.mark.parametrize("lam", LAM_GRID)
    def test_thermal_heterodyne_exponential_identity(self, lam):
        got = fisher.fi_continuous(states.thermal(lam), "heterodyne")
        assert got.value == pytest.approx(1 / (1 + lam) ** 2, rel=1e-7)

    @pytest.mark.parametrize("lam", [0.5, 2.0])
    def test_added_heterodyne_gamma_identity(self, lam):
        got = fisher.fi_continuous(states.added(lam), "heterodyne")
        assert got.value == pytest.approx(2 / (1 + lam) ** 2, rel=1e-7)

    @pytest.mark.parametrize(
        "meas,family,lam",
        [(m, f, l) for (m, f, l) in ref.FROZEN if m in ("homodyne", "heterodyne")],
    )
    def test_against_frozen_reference(self, meas, family, lam):
        model = {
            "subtracted": states.subtracted,
            "added": states.added,
            "realistic_accepted": lambda l: states.realistic_accepted(l, ETA, EPS),
        }[family](lam)
        got = fisher.fi_continuous(model, meas)
        assert got.value == pytest.approx(ref.FROZEN[(meas, family, lam)], rel=1e-7)

    def test_frozen_reference_reproducible_live(self):
        # recompute two table entries with the mpmath oracle itself
        for key in (("homodyne", "subtracted", 0.5), ("heterodyne", "realistic_accepted", 2.0)):
            meas, family, lam = key
            lo, hi = ref.window(meas, lam)
            live = ref.fi_quadrature(ref.DENSITIES[(meas, family)], lam, lo, hi)
            assert live == pytest.approx(ref.FROZEN[key], rel=1e-12)

    def test_added_heterodyne_regime_above_thermal_qfi(self):
        assert fisher.fi_continuous(states.added(5.0), "heterodyne").value > 1 / 30

    @pytest.mark.parametrize("lam", [0.1, 1.0, 10.0])
    def test_homodyne_thermal_strictly_below_qfi(self, lam):
        hom = fisher.fi_continuous(states.thermal(lam), "homodyne").value
        assert hom < qfi_thermal(lam)

    def test_rejected_branch_matches_chain_rule_closed_forms(self):
        p = ProtocolParams(1.0, ETA, EPS)
        model = states.realistic_rejected(1.0, ETA, EPS)
        dlt = states.rejected_mean_dlambda(p)
        lt = states.rejected_mean(p)
        hom = fisher.fi_continuous(model, "homodyne").value
        het = fisher.fi_continuous(model, "heterodyne").value
        assert hom == pytest.approx(dlt**2 * 2 / (1 + 2 * lt) ** 2, rel=1e-7)
        assert het == pytest.approx(dlt**2 / (1 + lt) ** 2, rel=1e-7)

    def test_central_difference_agrees(self):
        model = states.subtracted(0.5)
        analytic = fisher.fi_continuous(model, "homodyne").value
        central = fisher.fi_continuous(model, "homodyne", DerivativeSpec("central"))
        assert central.value == pytest.approx(analytic, rel=1e-5)

    def test_unknown_measurement_rejected(self):
        with pytest.raises(InvalidParameterError):
            fisher.fi_continuous(states.thermal(1.0), "tomography")


class TestBinary:
    def test_click_record_value(self):
        p = ProtocolParams(1.0, ETA, EPS)
        got = fisher.fi_binary(states.success_probability(p),
                               states.success_probability_dlambda(p))
        a = Fraction(99, 2000)
        expected = float(a / (1 * (1 + a) ** 2))
        assert got == pytest.approx(expected, rel=1e-12)

    def test_constant_coin_carries_nothing(self):
        assert fisher.fi_binary(0.3, 0.0) == 0.0

    def test_thermal_onoff_composition(self):
        model = states.thermal(1.0)
        got = fisher.fi_binary(measurements.onoff_pmf(model, EPS).p_off,
                               measurements.onoff_p_off_dlambda(model, EPS))
        expected = float(Fraction(99, 100) / (1 * (1 + Fraction(99, 100)) ** 2))
        assert got == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.2, 1.7])
    def test_degenerate_probability_rejected(self, p):
        with pytest.raises(DomainError):
            fisher.fi_binary(p, 0.1)


class TestClosedForms:
    def test_thermal(self):
        got = fisher.qfi_closed(states.thermal(1.0))
        assert got.value == 0.5
        assert got.method == "closed_form" and got.est_error == 0.0

    @pytest.mark.parametrize("lam", LAM_GRID)
    def test_processing_doubles_qfi(self, lam):
        th = fisher.qfi_closed(states.thermal(lam)).value
        assert fisher.qfi_closed(states.subtracted(lam)).value == pytest.approx(2 * th, rel=1e-15)
        assert fisher.qfi_closed(states.added(lam)).value == pytest.approx(2 * th, rel=1e-15)

    def test_rejected_branch_value(self):
        a = Fraction(99, 2000)
        eta = Fraction(19, 20)
        expected = float(eta / ((1 + a) ** 2 * 1 * (1 + eta + a)))
        got = fisher.qfi_closed(states.realistic_rejected(1.0, ETA, EPS))
        assert got.value == pytest.approx(expected, rel=1e-13)

    def test_rejected_equals_reparameterized_thermal(self):
        for lam in LAM_GRID:
            p = ProtocolParams(lam, ETA, EPS)
            lt = states.rejected_mean(p)
            composed = fisher.reparameterize_fi(
                fisher.qfi_closed(states.thermal(lt)).value,
                states.rejected_mean_dlambda(p),
            )
            direct = fisher.qfi_closed(states.realistic_rejected(lam, ETA, EPS)).value
            assert direct == pytest.approx(composed, rel=1e-12)

    def test_accepted_family_has_no_closed_form(self):
        with pytest.raises(UnsupportedFamilyError):
            fisher.qfi_closed(states.realistic_accepted(1.0, ETA, EPS))


class TestReparameterize:
    def test_identity_and_insensitive(self):
        assert fisher.reparameterize_fi(1.0, 1.0) == 1.0
        assert fisher.reparameterize_fi(123.4, 0.0) == 0.0

    def test_rejects_non_finite(self):
        with pytest.raises(InvalidParameterError):
            fisher.reparameterize_fi(float("nan"), 1.0)


class TestSpecsAndResults:
    def test_derivative_spec_validation(self):
        with pytest.raises(InvalidParameterError):
            DerivativeSpec("forward")
        with pytest.raises(InvalidParameterError):
            DerivativeSpec("central", rel_step=1e-2)
        with pytest.raises(InvalidParameterError):
            DerivativeSpec("central", rel_step=1e-10)

    def test_result_diagnostics_are_sane(self):
        got = fisher.fi_discrete(states.subtracted(3.0))
        assert got.terms_or_nodes > 0 and got.est_error >= 0
        got = fisher.fi_continuous(states.thermal(3.0), "heterodyne")
        assert got.terms_or_nodes > 0

    def test_truncation_cap_raises(self, monkeypatch):
        monkeypatch.setattr(states, "TRUNCATION_CAP", 8)
        with pytest.raises(NonconvergenceError):
            fisher.fi_discrete(states.thermal(50.0))
