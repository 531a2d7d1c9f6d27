"""Photon-number statistics of thermal light and its photon-processed variants.

Five Fock-diagonal state families are modelled, all parameterised by the mean
photon number ``lam`` of the input thermal state:

* ``THERMAL`` -- geometric photon-number distribution with mean ``lam``.
* ``SUBTRACTED`` -- ideal one-photon-subtracted thermal state (mean ``2*lam``).
* ``ADDED`` -- ideal one-photon-added thermal state (mean ``2*lam + 1``).
* ``REALISTIC_ACCEPTED`` -- conditional state transmitted by a beam splitter of
  transmittance ``eta`` when an on-off detector of efficiency ``epsilon`` on
  the reflected arm clicks.
* ``REALISTIC_REJECTED`` -- the no-click branch, which is again thermal with a
  reduced mean ``lam_tilde = eta*lam / (1 + (1-eta)*epsilon*lam)``.

Everything here is a pure function of its arguments; parameter objects are
frozen and validated at construction because every downstream formula divides
by ``lam`` or by a branch probability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InvalidParameterError, UndefinedConditionalStateError

# Fock sums are truncated once the geometric tail of the dominating envelope
# drops below this mass; the hard cap guards runaway means.
TAIL_TOLERANCE = 1e-12
TRUNCATION_CAP = 10**6


@dataclass(frozen=True)
class ThermalParams:
    """Mean photon number of a bare thermal state (must be > 0)."""

    lam: float

    def __post_init__(self):
        if not (math.isfinite(self.lam) and self.lam > 0):
            raise InvalidParameterError(
                f"mean photon number must be finite and > 0, got {self.lam}"
            )


@dataclass(frozen=True)
class ProtocolParams:
    """Input mean ``lam``, beam-splitter transmittance ``eta`` and on-off
    detector efficiency ``epsilon`` of the subtraction protocol."""

    lam: float
    eta: float
    epsilon: float

    def __post_init__(self):
        if not (math.isfinite(self.lam) and self.lam > 0):
            raise InvalidParameterError(
                f"mean photon number must be finite and > 0, got {self.lam}"
            )
        if not (0.0 < self.eta <= 1.0):
            raise InvalidParameterError(f"transmittance must be in (0, 1], got {self.eta}")
        if not (0.0 < self.epsilon <= 1.0):
            raise InvalidParameterError(
                f"detector efficiency must be in (0, 1], got {self.epsilon}"
            )

    @property
    def herald_rate(self) -> float:
        """``epsilon * (1 - eta)``, the per-photon heralding coefficient."""
        return self.epsilon * (1.0 - self.eta)


class StateKind(Enum):
    THERMAL = "thermal"
    SUBTRACTED = "subtracted"
    ADDED = "added"
    REALISTIC_ACCEPTED = "realistic_accepted"
    REALISTIC_REJECTED = "realistic_rejected"


_PROTOCOL_KINDS = (StateKind.REALISTIC_ACCEPTED, StateKind.REALISTIC_REJECTED)


@dataclass(frozen=True)
class StateModel:
    """A state family tag plus the parameters it needs."""

    kind: StateKind
    params: ThermalParams | ProtocolParams

    def __post_init__(self):
        if self.kind in _PROTOCOL_KINDS and not isinstance(self.params, ProtocolParams):
            raise InvalidParameterError(
                f"{self.kind.value} requires ProtocolParams (lam, eta, epsilon)"
            )

    @property
    def lam(self) -> float:
        return self.params.lam


def thermal(lam: float) -> StateModel:
    return StateModel(StateKind.THERMAL, ThermalParams(lam))


def subtracted(lam: float) -> StateModel:
    return StateModel(StateKind.SUBTRACTED, ThermalParams(lam))


def added(lam: float) -> StateModel:
    return StateModel(StateKind.ADDED, ThermalParams(lam))


def realistic_accepted(lam: float, eta: float, epsilon: float) -> StateModel:
    return StateModel(StateKind.REALISTIC_ACCEPTED, ProtocolParams(lam, eta, epsilon))


def realistic_rejected(lam: float, eta: float, epsilon: float) -> StateModel:
    return StateModel(StateKind.REALISTIC_REJECTED, ProtocolParams(lam, eta, epsilon))


def with_lambda(model: StateModel, lam: float) -> StateModel:
    """Same family and protocol constants, shifted input mean."""
    if isinstance(model.params, ProtocolParams):
        return StateModel(model.kind, ProtocolParams(lam, model.params.eta, model.params.epsilon))
    return StateModel(model.kind, ThermalParams(lam))


# ---------------------------------------------------------------------------
# raw geometric helpers (means as plain floats, n as int or integer array)
# ---------------------------------------------------------------------------

def _check_n(n):
    n = np.asarray(n)
    if np.any(n < 0):
        raise InvalidParameterError("photon number must be >= 0")
    return n


def _geometric(mean: float, n) -> np.ndarray:
    """Thermal pmf ``(mean/(1+mean))^n / (1+mean)`` for mean photon number."""
    q = mean / (1.0 + mean)
    return np.power(q, n) / (1.0 + mean)


def _geometric_dmean(mean: float, n) -> np.ndarray:
    """d/d(mean) of the thermal pmf: ``pmf * (n - mean) / (mean*(1+mean))``."""
    return _geometric(mean, n) * (n - mean) / (mean * (1.0 + mean))


# ---------------------------------------------------------------------------
# family pmfs
# ---------------------------------------------------------------------------

def thermal_pmf(p: ThermalParams, n):
    """Geometric photon-number pmf ``(1/(1+lam)) (lam/(1+lam))^n``."""
    n = _check_n(n)
    return _geometric(p.lam, n)


def subtracted_pmf(p: ThermalParams, n):
    """Ideal one-photon-subtracted pmf ``(n+1)/(1+lam)^2 (lam/(1+lam))^n``."""
    n = _check_n(n)
    lam = p.lam
    return (n + 1) / (1.0 + lam) ** 2 * np.power(lam / (1.0 + lam), n)


def added_pmf(p: ThermalParams, n):
    """Ideal one-photon-added pmf ``n/(lam(1+lam)) (lam/(1+lam))^n``."""
    n = _check_n(n)
    lam = p.lam
    return n / (lam * (1.0 + lam)) * np.power(lam / (1.0 + lam), n)


def success_probability(p: ProtocolParams) -> float:
    """Click probability of the heralding detector,
    ``a*lam / (1 + a*lam)`` with ``a = epsilon*(1-eta)``."""
    x = p.herald_rate * p.lam
    return x / (1.0 + x)


def success_probability_dlambda(p: ProtocolParams) -> float:
    """Analytic d/dlam of the click probability: ``a / (1 + a*lam)^2``."""
    a = p.herald_rate
    return a / (1.0 + a * p.lam) ** 2


def rejected_mean(p: ProtocolParams) -> float:
    """Mean photon number of the no-click branch,
    ``eta*lam / (1 + (1-eta)*epsilon*lam)``."""
    return p.eta * p.lam / (1.0 + p.herald_rate * p.lam)


def rejected_mean_dlambda(p: ProtocolParams) -> float:
    return p.eta / (1.0 + p.herald_rate * p.lam) ** 2


def _require_conditional(p: ProtocolParams):
    if p.eta >= 1.0 or p.epsilon <= 0.0:
        raise UndefinedConditionalStateError(
            "conditional state undefined: success probability is zero "
            f"(eta={p.eta}, epsilon={p.epsilon})"
        )


def realistic_subtracted_pmf(p: ProtocolParams, n):
    """Click-conditioned pmf in the difference-of-thermals form
    ``(pmf_thermal(eta*lam) - p0*pmf_thermal(lam_tilde)) / p1``.

    Closed under marginals, so the same decomposition carries the conditional
    state through every outcome distribution downstream.
    """
    _require_conditional(p)
    n = _check_n(n)
    p1 = success_probability(p)
    p0 = 1.0 - p1
    return (_geometric(p.eta * p.lam, n) - p0 * _geometric(rejected_mean(p), n)) / p1


def realistic_subtracted_pmf_bracket(p: ProtocolParams, n):
    """Click-conditioned pmf in the bracketed form
    ``(1/p1) pmf_thermal(eta*lam) [1 - ((1+eta*lam)/(1+lam*(eta+(1-eta)*eps)))^(n+1)]``.

    Algebraically identical to :func:`realistic_subtracted_pmf`; kept as an
    independent cross-check path.
    """
    _require_conditional(p)
    n = _check_n(n)
    lam, eta = p.lam, p.eta
    p1 = success_probability(p)
    ratio = (1.0 + eta * lam) / (1.0 + lam * (eta + (1.0 - eta) * p.epsilon))
    return _geometric(eta * lam, n) * (1.0 - np.power(ratio, n + 1)) / p1


def _realistic_subtracted_pmf_dlambda(p: ProtocolParams, n):
    """Analytic d/dlam of the click-conditioned pmf (difference form)."""
    _require_conditional(p)
    lam, eta = p.lam, p.eta
    a = p.herald_rate
    b = eta + a
    p1 = success_probability(p)
    dp1 = success_probability_dlambda(p)
    # g_n = p0 * pmf_thermal(lam_tilde, n) = (eta*lam/(1+b*lam))^n / (1+b*lam),
    # with the sub-unit ratio formed before exponentiation
    g = np.power(eta * lam / (1.0 + b * lam), n) / (1.0 + b * lam)
    dg = g * (n / lam - (n + 1) * b / (1.0 + b * lam))
    dt = eta * _geometric_dmean(eta * lam, n)
    pn = realistic_subtracted_pmf(p, n)
    return (dt - dg) / p1 - pn * dp1 / p1


# ---------------------------------------------------------------------------
# dispatch over families
# ---------------------------------------------------------------------------

def pmf(model: StateModel, n):
    """Photon-number pmf of any family; scalar in, scalar out."""
    kind, params = model.kind, model.params
    if kind is StateKind.THERMAL:
        return thermal_pmf(params, n)
    if kind is StateKind.SUBTRACTED:
        return subtracted_pmf(params, n)
    if kind is StateKind.ADDED:
        return added_pmf(params, n)
    if kind is StateKind.REALISTIC_ACCEPTED:
        return realistic_subtracted_pmf(params, n)
    return _geometric(rejected_mean(params), _check_n(n))


def pmf_dlambda(model: StateModel, n):
    """Analytic derivative of :func:`pmf` with respect to ``lam`` (protocol
    constants held fixed; chain rule through derived means included)."""
    kind, params = model.kind, model.params
    lam = params.lam
    n = _check_n(n)
    if kind is StateKind.THERMAL:
        return _geometric_dmean(lam, n)
    if kind is StateKind.SUBTRACTED:
        return subtracted_pmf(params, n) * (n - 2.0 * lam) / (lam * (1.0 + lam))
    if kind is StateKind.ADDED:
        return added_pmf(params, n) * (n - (1.0 + 2.0 * lam)) / (lam * (1.0 + lam))
    if kind is StateKind.REALISTIC_ACCEPTED:
        return _realistic_subtracted_pmf_dlambda(params, n)
    return rejected_mean_dlambda(params) * _geometric_dmean(rejected_mean(params), n)


def mean_photon_number(model: StateModel) -> float:
    """Closed-form mean of each family."""
    kind, params = model.kind, model.params
    lam = params.lam
    if kind is StateKind.THERMAL:
        return lam
    if kind is StateKind.SUBTRACTED:
        return 2.0 * lam
    if kind is StateKind.ADDED:
        return 2.0 * lam + 1.0
    if kind is StateKind.REALISTIC_ACCEPTED:
        _require_conditional(params)
        p1 = success_probability(params)
        return (params.eta * lam - (1.0 - p1) * rejected_mean(params)) / p1
    return rejected_mean(params)


def effective_mean(model: StateModel) -> float:
    """Mean of the geometric envelope that dominates the family's pmf tail;
    used by the truncation rule."""
    kind, params = model.kind, model.params
    lam = params.lam
    if kind is StateKind.THERMAL:
        return lam
    if kind is StateKind.SUBTRACTED:
        return 2.0 * lam
    if kind is StateKind.ADDED:
        return 2.0 * lam + 1.0
    if kind is StateKind.REALISTIC_ACCEPTED:
        # decays like thermal(eta*lam); inflated to cover the bracket factor
        return 2.0 * params.eta * lam + 1.0
    return rejected_mean(params)


def truncation_index(lambda_star: float, tol: float = TAIL_TOLERANCE,
                     cap: int | None = None) -> tuple[int, bool]:
    """Smallest ``N`` with geometric tail ``q^(N+1) < tol`` for
    ``q = lambda_star/(1+lambda_star)``.

    Returns ``(N, capped)``; ``capped`` is True when the hard cap was hit.
    """
    cap = TRUNCATION_CAP if cap is None else cap
    if lambda_star <= 0:
        return 32, False
    # q^(N+1) < tol  <=>  N+1 > -ln(tol)/ln(1+1/lambda_star)
    needed = math.ceil(-math.log(tol) / math.log1p(1.0 / lambda_star))
    n_trunc = max(32, needed)
    if n_trunc > cap:
        return cap, True
    return n_trunc, False
