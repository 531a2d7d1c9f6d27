"""Outcome distributions of the three detection strategies.

* Homodyne: density of the quadrature ``x = (a + a^dag)/sqrt(2)``; the thermal
  family gives a zero-mean Gaussian of variance ``(1 + 2*mean)/2``.
* Heterodyne: the phase-symmetric Husimi function reduced to the radial
  variable ``u = |alpha|^2``, so ``f(u) = pi * Q(u)`` integrates to one on
  ``[0, inf)``; the thermal family gives an exponential of mean ``1 + mean``.
* On-off: binary click/no-click statistics with per-photon miss probability
  ``1 - epsilon``, i.e. ``p_off = sum_n pmf(n) (1-epsilon)^n``.

The conditional (accepted) state inherits every distribution through its
difference-of-thermals decomposition, so all densities stay in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import states
from .errors import DomainError, InvalidParameterError
from .states import ProtocolParams, StateKind, StateModel

# widen integration windows slightly beyond the 8-sigma / 60-mean-lifetimes
# baseline so polynomial prefactors cannot push tail mass above 1e-14
DOMAIN_MARGIN = 0.25


@dataclass(frozen=True)
class OnOffDistribution:
    """Binary outcome law of an on-off detector; ``p_on`` is defined as the
    exact complement of ``p_off``.

    ``p_off = 0`` is admitted for the one state with no vacuum component
    measured by a perfect detector.
    """

    p_off: float

    def __post_init__(self):
        if not (0.0 <= self.p_off <= 1.0):
            raise InvalidParameterError(f"p_off must be in [0, 1], got {self.p_off}")

    @property
    def p_on(self) -> float:
        return 1.0 - self.p_off


def _check_detector(epsilon: float):
    if not (0.0 < epsilon <= 1.0):
        raise InvalidParameterError(f"detector efficiency must be in (0, 1], got {epsilon}")


def _protocol_weights(p: ProtocolParams):
    p1 = states.success_probability(p)
    return p1, 1.0 - p1, states.rejected_mean(p)


# ---------------------------------------------------------------------------
# homodyne
# ---------------------------------------------------------------------------

def _gauss(x, mean: float):
    """Thermal-family quadrature density, variance ``(1 + 2*mean)/2``."""
    v = 1.0 + 2.0 * mean
    return np.exp(-np.square(x) / v) / math.sqrt(math.pi * v)


def _gauss_dmean(x, mean: float):
    v = 1.0 + 2.0 * mean
    return _gauss(x, mean) * (2.0 * np.square(x) / v**2 - 1.0 / v)


def homodyne_pdf(model: StateModel, x):
    """Quadrature density of any family; nonnegative and unit-normalised."""
    kind, params = model.kind, model.params
    lam = params.lam
    x = np.asarray(x, dtype=float)
    if kind is StateKind.THERMAL:
        return _gauss(x, lam)
    if kind is StateKind.SUBTRACTED:
        v = 1.0 + 2.0 * lam
        num = 1.0 + lam * (3.0 + 2.0 * np.square(x) + 2.0 * lam)
        return num / (math.sqrt(math.pi) * v**2.5) * np.exp(-np.square(x) / v)
    if kind is StateKind.ADDED:
        v = 1.0 + 2.0 * lam
        num = lam + 2.0 * (lam**2 + np.square(x) * (1.0 + lam))
        return num / (math.sqrt(math.pi) * v**2.5) * np.exp(-np.square(x) / v)
    if kind is StateKind.REALISTIC_ACCEPTED:
        states._require_conditional(params)
        p1, p0, lt = _protocol_weights(params)
        return (_gauss(x, params.eta * lam) - p0 * _gauss(x, lt)) / p1
    return _gauss(x, states.rejected_mean(params))


def homodyne_pdf_dlambda(model: StateModel, x):
    """Analytic d/dlam of :func:`homodyne_pdf`."""
    kind, params = model.kind, model.params
    lam = params.lam
    x = np.asarray(x, dtype=float)
    if kind is StateKind.THERMAL:
        return _gauss_dmean(x, lam)
    if kind is StateKind.SUBTRACTED:
        v = 1.0 + 2.0 * lam
        num = 1.0 + lam * (3.0 + 2.0 * np.square(x) + 2.0 * lam)
        dlog = (3.0 + 4.0 * lam + 2.0 * np.square(x)) / num - 5.0 / v \
            + 2.0 * np.square(x) / v**2
        return homodyne_pdf(model, x) * dlog
    if kind is StateKind.ADDED:
        v = 1.0 + 2.0 * lam
        num = lam + 2.0 * (lam**2 + np.square(x) * (1.0 + lam))
        dlog = (1.0 + 4.0 * lam + 2.0 * np.square(x)) / num - 5.0 / v \
            + 2.0 * np.square(x) / v**2
        return homodyne_pdf(model, x) * dlog
    if kind is StateKind.REALISTIC_ACCEPTED:
        states._require_conditional(params)
        p1, p0, lt = _protocol_weights(params)
        dp1 = states.success_probability_dlambda(params)
        dlt = states.rejected_mean_dlambda(params)
        num = params.eta * _gauss_dmean(x, params.eta * lam) \
            + dp1 * _gauss(x, lt) - p0 * dlt * _gauss_dmean(x, lt)
        return num / p1 - homodyne_pdf(model, x) * dp1 / p1
    return states.rejected_mean_dlambda(params) * _gauss_dmean(x, states.rejected_mean(params))


def homodyne_halfwidth(model: StateModel) -> float:
    """Half-width ``L`` of the integration window ``[-L, L]``: eight standard
    deviations of the widest Gaussian component, inflated by the margin."""
    kind, params = model.kind, model.params
    lam = params.lam
    if kind is StateKind.REALISTIC_ACCEPTED:
        lam = params.eta * lam
    elif kind is StateKind.REALISTIC_REJECTED:
        lam = states.rejected_mean(params)
    return 8.0 * math.sqrt((1.0 + 2.0 * lam) / 2.0 * (1.0 + DOMAIN_MARGIN))


# ---------------------------------------------------------------------------
# heterodyne (radial)
# ---------------------------------------------------------------------------

def _expdens(u, mean: float):
    """Thermal-family radial Husimi density, exponential of mean ``1+mean``."""
    m = 1.0 + mean
    return np.exp(-u / m) / m


def _expdens_dmean(u, mean: float):
    m = 1.0 + mean
    return _expdens(u, mean) * (u / m**2 - 1.0 / m)


def _check_u(u):
    u = np.asarray(u, dtype=float)
    if np.any(u < 0):
        raise DomainError("squared modulus u must be >= 0")
    return u


def heterodyne_radial_pdf(model: StateModel, u):
    """Density of ``u = |alpha|^2`` under heterodyne detection."""
    u = _check_u(u)
    kind, params = model.kind, model.params
    lam = params.lam
    if kind is StateKind.THERMAL:
        return _expdens(u, lam)
    if kind is StateKind.SUBTRACTED:
        m = 1.0 + lam
        return (1.0 + lam * (1.0 + u)) / m**3 * np.exp(-u / m)
    if kind is StateKind.ADDED:
        m = 1.0 + lam
        return u / m**2 * np.exp(-u / m)
    if kind is StateKind.REALISTIC_ACCEPTED:
        states._require_conditional(params)
        p1, p0, lt = _protocol_weights(params)
        return (_expdens(u, params.eta * lam) - p0 * _expdens(u, lt)) / p1
    return _expdens(u, states.rejected_mean(params))


def heterodyne_radial_pdf_dlambda(model: StateModel, u):
    """Analytic d/dlam of :func:`heterodyne_radial_pdf`."""
    u = _check_u(u)
    kind, params = model.kind, model.params
    lam = params.lam
    if kind is StateKind.THERMAL:
        return _expdens_dmean(u, lam)
    if kind is StateKind.SUBTRACTED:
        m = 1.0 + lam
        num = 1.0 + lam * (1.0 + u)
        dlog = (1.0 + u) / num - 3.0 / m + u / m**2
        return heterodyne_radial_pdf(model, u) * dlog
    if kind is StateKind.ADDED:
        m = 1.0 + lam
        dlog = u / m**2 - 2.0 / m
        return heterodyne_radial_pdf(model, u) * dlog
    if kind is StateKind.REALISTIC_ACCEPTED:
        states._require_conditional(params)
        p1, p0, lt = _protocol_weights(params)
        dp1 = states.success_probability_dlambda(params)
        dlt = states.rejected_mean_dlambda(params)
        num = params.eta * _expdens_dmean(u, params.eta * lam) \
            + dp1 * _expdens(u, lt) - p0 * dlt * _expdens_dmean(u, lt)
        return num / p1 - heterodyne_radial_pdf(model, u) * dp1 / p1
    return states.rejected_mean_dlambda(params) * _expdens_dmean(u, states.rejected_mean(params))


def heterodyne_cutoff(model: StateModel) -> float:
    """Upper limit ``U`` of the radial integration window ``[0, U]``."""
    kind, params = model.kind, model.params
    lam = params.lam
    if kind is StateKind.REALISTIC_ACCEPTED:
        lam = params.eta * lam
    elif kind is StateKind.REALISTIC_REJECTED:
        lam = states.rejected_mean(params)
    return (1.0 + lam) * max(60.0, 40.0 + 10.0 * math.log1p(lam))


# ---------------------------------------------------------------------------
# on-off
# ---------------------------------------------------------------------------

def onoff_pmf(model: StateModel, detector_epsilon: float) -> OnOffDistribution:
    """Closed-form click statistics ``p_off = sum_n pmf(n)(1-eps)^n``."""
    _check_detector(detector_epsilon)
    e = detector_epsilon
    kind, params = model.kind, model.params
    lam = params.lam
    if kind is StateKind.THERMAL:
        return OnOffDistribution(1.0 / (1.0 + e * lam))
    if kind is StateKind.SUBTRACTED:
        return OnOffDistribution(1.0 / (1.0 + e * lam) ** 2)
    if kind is StateKind.ADDED:
        # no vacuum component: a perfect detector always clicks
        return OnOffDistribution((1.0 - e) / (1.0 + e * lam) ** 2)
    if kind is StateKind.REALISTIC_ACCEPTED:
        states._require_conditional(params)
        p1, p0, lt = _protocol_weights(params)
        off = (1.0 / (1.0 + e * params.eta * lam) - p0 / (1.0 + e * lt)) / p1
        return OnOffDistribution(off)
    return OnOffDistribution(1.0 / (1.0 + e * states.rejected_mean(params)))


def onoff_p_off_dlambda(model: StateModel, detector_epsilon: float) -> float:
    """Analytic d/dlam of the no-click probability."""
    _check_detector(detector_epsilon)
    e = detector_epsilon
    kind, params = model.kind, model.params
    lam = params.lam
    if kind is StateKind.THERMAL:
        return -e / (1.0 + e * lam) ** 2
    if kind is StateKind.SUBTRACTED:
        return -2.0 * e / (1.0 + e * lam) ** 3
    if kind is StateKind.ADDED:
        return -2.0 * e * (1.0 - e) / (1.0 + e * lam) ** 3
    if kind is StateKind.REALISTIC_ACCEPTED:
        states._require_conditional(params)
        p1, p0, lt = _protocol_weights(params)
        dp1 = states.success_probability_dlambda(params)
        dlt = states.rejected_mean_dlambda(params)
        doff_eta = -e * params.eta / (1.0 + e * params.eta * lam) ** 2
        doff_rej = -dp1 / (1.0 + e * lt) - p0 * e * dlt / (1.0 + e * lt) ** 2
        off = onoff_pmf(model, e).p_off
        return (doff_eta - doff_rej) / p1 - off * dp1 / p1
    lt = states.rejected_mean(params)
    return -e * states.rejected_mean_dlambda(params) / (1.0 + e * lt) ** 2


def onoff_p_off_series(model: StateModel, detector_epsilon: float) -> float:
    """Truncated-series evaluation of ``p_off``; cross-check for the closed
    forms above."""
    _check_detector(detector_epsilon)
    lam_star = states.effective_mean(model)
    n_trunc, _ = states.truncation_index(lam_star)
    n = np.arange(n_trunc + 1)
    return float(np.sum(states.pmf(model, n) * np.power(1.0 - detector_epsilon, n)))
