"""Fisher-information engines for the mean-photon-number parameter.

Every state family here is diagonal in the number basis, so its quantum
Fisher information equals the classical Fisher information of the
photon-number pmf; the engines below cover that sum, the continuous
homodyne/heterodyne integrals, the Bernoulli click record, and the chain-rule
reparameterisation used by the no-click branch.

Values are per single copy, in units of ``1/lam^2``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from . import measurements, states
from .errors import (
    DomainError,
    InvalidParameterError,
    NonconvergenceError,
    UnsupportedFamilyError,
)
from .states import StateKind, StateModel

SERIES_ERROR_CEILING = 1e-8
QUAD_REL_ERROR_CEILING = 1e-8
_DENSITY_FLOOR = 1e-300


@dataclass(frozen=True)
class FisherResult:
    """A Fisher-information value with its computation diagnostics.

    ``method`` is one of ``closed_form``, ``series``, ``quadrature``,
    ``finite_difference``; ``terms_or_nodes`` counts summed terms or
    integrand evaluations; ``est_error`` is an a-posteriori error estimate.
    """

    value: float
    method: str
    terms_or_nodes: int
    est_error: float

    def __post_init__(self):
        if self.value < 0 or self.est_error < 0:
            raise InvalidParameterError("Fisher information and its error must be >= 0")


@dataclass(frozen=True)
class DerivativeSpec:
    """How to differentiate distributions with respect to ``lam``.

    ``central`` exists purely as a cross-check of the analytic expressions:
    the information is quadratic in the derivative, so finite differencing
    alone would dominate the error budget.
    """

    mode: str = "analytic"
    rel_step: float = 1e-6

    def __post_init__(self):
        if self.mode not in ("analytic", "central"):
            raise InvalidParameterError(f"unknown derivative mode {self.mode!r}")
        if not (1e-9 < self.rel_step < 1e-3):
            raise InvalidParameterError(
                f"rel_step must lie in (1e-9, 1e-3), got {self.rel_step}"
            )

    def step(self, lam: float) -> float:
        return self.rel_step * max(lam, 1.0)


def _pmf_derivative(model: StateModel, n, d: DerivativeSpec):
    if d.mode == "analytic":
        return states.pmf_dlambda(model, n)
    h = d.step(model.lam)
    hi = states.pmf(states.with_lambda(model, model.lam + h), n)
    lo = states.pmf(states.with_lambda(model, model.lam - h), n)
    return (hi - lo) / (2.0 * h)


def fi_discrete(model: StateModel, d: DerivativeSpec | None = None) -> FisherResult:
    """Fisher information of the photon-number pmf,
    ``sum_n (d pmf/d lam)^2 / pmf``, summed over the truncation window."""
    d = d or DerivativeSpec()
    lam_star = 2.0 * states.effective_mean(model) + 1.0
    n_trunc, capped = states.truncation_index(lam_star)
    n = np.arange(n_trunc + 1)
    p = states.pmf(model, n)
    dp = _pmf_derivative(model, n, d)
    mask = p > 0.0
    terms = np.zeros_like(p)
    terms[mask] = dp[mask] ** 2 / p[mask]
    value = float(np.sum(terms))
    # geometric extrapolation of the last term bounds the missing tail
    q = lam_star / (1.0 + lam_star)
    est_error = float(terms[-1] * q / (1.0 - q))
    if capped and est_error > SERIES_ERROR_CEILING:
        raise NonconvergenceError(
            f"photon-number FI series hit the {states.TRUNCATION_CAP}-term cap "
            f"with tail estimate {est_error:.3e}"
        )
    method = "series" if d.mode == "analytic" else "finite_difference"
    return FisherResult(value, method, n_trunc + 1, est_error)


def fi_continuous(model: StateModel, meas: str, d: DerivativeSpec | None = None) -> FisherResult:
    """Fisher information of the homodyne or heterodyne outcome density,
    ``int (d f/d lam)^2 / f`` by adaptive quadrature over the documented
    window; regions where the density underflows contribute zero."""
    d = d or DerivativeSpec()
    if meas == "homodyne":
        pdf, dpdf = measurements.homodyne_pdf, measurements.homodyne_pdf_dlambda
        half = measurements.homodyne_halfwidth(model)
        lo, hi = -half, half
    elif meas == "heterodyne":
        pdf, dpdf = measurements.heterodyne_radial_pdf, measurements.heterodyne_radial_pdf_dlambda
        lo, hi = 0.0, measurements.heterodyne_cutoff(model)
    else:
        raise InvalidParameterError(f"unknown continuous measurement {meas!r}")

    if d.mode == "analytic":
        derivative = lambda t: dpdf(model, t)
    else:
        h = d.step(model.lam)
        m_hi = states.with_lambda(model, model.lam + h)
        m_lo = states.with_lambda(model, model.lam - h)
        derivative = lambda t: (pdf(m_hi, t) - pdf(m_lo, t)) / (2.0 * h)

    def integrand(t):
        f = pdf(model, t)
        if f < _DENSITY_FLOOR:
            return 0.0
        df = derivative(t)
        return df * df / f

    value, abserr, info = quad(integrand, lo, hi, epsabs=1e-14, epsrel=1e-10,
                               limit=400, full_output=True)[:3]
    if value > 0 and abserr > QUAD_REL_ERROR_CEILING * value:
        raise NonconvergenceError(
            f"quadrature error {abserr:.3e} exceeds {QUAD_REL_ERROR_CEILING:g} "
            f"of the FI value {value:.6e}"
        )
    method = "quadrature" if d.mode == "analytic" else "finite_difference"
    return FisherResult(float(value), method, int(info["neval"]), float(abserr))


def fi_binary(p: float, dp_dlambda: float) -> float:
    """Fisher information of a two-outcome record, ``dp^2 / (p (1-p))``."""
    if not (0.0 < p < 1.0):
        raise DomainError(f"binary outcome probability must be in (0, 1), got {p}")
    return dp_dlambda * dp_dlambda / (p * (1.0 - p))


def qfi_closed(model: StateModel) -> FisherResult:
    """Closed-form quantum Fisher information.

    Thermal: ``1/(lam(1+lam))``; ideal subtraction and addition both double
    it; the no-click branch is the thermal form at ``lam_tilde`` pulled back
    through the chain rule. The click-conditioned state has no closed form.
    """
    kind, params = model.kind, model.params
    lam = params.lam
    if kind is StateKind.THERMAL:
        value = 1.0 / (lam * (1.0 + lam))
    elif kind in (StateKind.SUBTRACTED, StateKind.ADDED):
        value = 2.0 / (lam * (1.0 + lam))
    elif kind is StateKind.REALISTIC_REJECTED:
        a = params.herald_rate
        value = params.eta / ((1.0 + a * lam) ** 2 * lam * (1.0 + params.eta * lam + a * lam))
    else:
        raise UnsupportedFamilyError(
            "no closed-form QFI for the click-conditioned state; use fi_discrete"
        )
    return FisherResult(value, "closed_form", 0, 0.0)


def reparameterize_fi(f_wrt_tilde: float, dtilde_dlambda: float) -> float:
    """Chain rule: information about a derived parameter scaled by the
    squared sensitivity of that parameter to ``lam``."""
    if not (np.isfinite(f_wrt_tilde) and np.isfinite(dtilde_dlambda)):
        raise InvalidParameterError("reparameterisation inputs must be finite")
    return f_wrt_tilde * dtilde_dlambda * dtilde_dlambda
