"""Seeded Monte Carlo simulation of the physical subtraction protocol.

The sampling model follows the optics directly: the input photon number is
geometric with mean ``lam``, the beam splitter thins it binomially with
reflection probability ``1 - eta``, and the herald clicks with probability
``1 - (1-epsilon)^k`` on ``k`` reflected photons. Everything is driven by the
counter-based Philox generator (numpy ``np.random.Philox``), with one child
``SeedSequence(entropy=seed, spawn_key=(block,))`` per fixed-size block of
trials, so reports are bit-identical for a given config and block results can
be merged in any order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import measurements, states
from .errors import InvalidParameterError, UnsupportedFamilyError
from .protocol import Measurement
from .states import ProtocolParams, StateKind, StateModel

BLOCK_TRIALS = 1_000_000


@dataclass(frozen=True)
class SimConfig:
    params: ProtocolParams
    trials: int
    seed: int

    def __post_init__(self):
        if self.trials < 1:
            raise InvalidParameterError(f"trials must be >= 1, got {self.trials}")
        if not (0 <= int(self.seed) < 2**64):
            raise InvalidParameterError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class SimReport:
    """Outcome tallies of one protocol run. Histograms are indexed by the
    transmitted photon number; ``empirical_p1 = n_accepted / trials``."""

    trials: int
    n_accepted: int
    empirical_p1: float
    accepted_hist: np.ndarray
    rejected_hist: np.ndarray

    @property
    def clicks(self) -> int:
        return self.n_accepted

    def p1_std_error(self) -> float:
        """Binomial standard error of ``empirical_p1``."""
        p = self.empirical_p1
        return math.sqrt(p * (1.0 - p) / self.trials)


def _block_rng(seed: int, block: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(block,))
    return np.random.Generator(np.random.Philox(ss))


def _merge_hist(total: np.ndarray, extra: np.ndarray) -> np.ndarray:
    if extra.size > total.size:
        total = np.pad(total, (0, extra.size - total.size))
    total[: extra.size] += extra
    return total


def simulate_protocol(cfg: SimConfig) -> SimReport:
    """Run the beam-splitter + herald protocol ``cfg.trials`` times."""
    p = cfg.params
    geo_p = 1.0 / (1.0 + p.lam)
    miss = 1.0 - p.epsilon
    accepted = np.zeros(1, dtype=np.int64)
    rejected = np.zeros(1, dtype=np.int64)
    n_accepted = 0
    n_blocks = (cfg.trials + BLOCK_TRIALS - 1) // BLOCK_TRIALS
    for block in range(n_blocks):
        size = min(BLOCK_TRIALS, cfg.trials - block * BLOCK_TRIALS)
        rng = _block_rng(cfg.seed, block)
        n_in = rng.geometric(geo_p, size) - 1
        k_refl = rng.binomial(n_in, 1.0 - p.eta)
        click = rng.random(size) < 1.0 - np.power(miss, k_refl)
        transmitted = n_in - k_refl
        n_accepted += int(np.count_nonzero(click))
        accepted = _merge_hist(accepted, np.bincount(transmitted[click]))
        rejected = _merge_hist(rejected, np.bincount(transmitted[~click]))
    return SimReport(
        trials=cfg.trials,
        n_accepted=n_accepted,
        empirical_p1=n_accepted / cfg.trials,
        accepted_hist=accepted,
        rejected_hist=rejected,
    )


# ---------------------------------------------------------------------------
# direct samplers for the state families
# ---------------------------------------------------------------------------

def sample_photon_numbers(model: StateModel, trials: int, seed: int) -> np.ndarray:
    """Draw photon-number outcomes from any family.

    Thermal branches sample the geometric law directly; ideal subtraction and
    addition are negative-binomial with two successes (addition shifted by
    one); the click-conditioned family inverts its truncated CDF.
    """
    if trials < 1:
        raise InvalidParameterError(f"trials must be >= 1, got {trials}")
    rng = _block_rng(seed, 0)
    kind, params = model.kind, model.params
    lam = params.lam
    if kind is StateKind.THERMAL:
        return rng.geometric(1.0 / (1.0 + lam), trials) - 1
    if kind is StateKind.SUBTRACTED:
        return rng.negative_binomial(2, 1.0 / (1.0 + lam), trials)
    if kind is StateKind.ADDED:
        return rng.negative_binomial(2, 1.0 / (1.0 + lam), trials) + 1
    if kind is StateKind.REALISTIC_REJECTED:
        mu = states.rejected_mean(params)
        return rng.geometric(1.0 / (1.0 + mu), trials) - 1
    n_trunc, _ = states.truncation_index(states.effective_mean(model))
    cdf = np.cumsum(states.pmf(model, np.arange(n_trunc + 1)))
    return np.searchsorted(cdf, rng.random(trials), side="right")


def sample_onoff(model: StateModel, detector_epsilon: float, trials: int,
                 seed: int) -> np.ndarray:
    """Draw boolean click records from the on-off statistics of a family."""
    if trials < 1:
        raise InvalidParameterError(f"trials must be >= 1, got {trials}")
    p_on = measurements.onoff_pmf(model, detector_epsilon).p_on
    rng = _block_rng(seed, 0)
    return rng.random(trials) < p_on


def sample_homodyne(model: StateModel, trials: int, seed: int) -> np.ndarray:
    """Draw quadrature outcomes; implemented for the thermal-shaped families
    (thermal and the rejected branch), whose law is a centred Gaussian."""
    if trials < 1:
        raise InvalidParameterError(f"trials must be >= 1, got {trials}")
    kind, params = model.kind, model.params
    if kind is StateKind.THERMAL:
        mean = params.lam
    elif kind is StateKind.REALISTIC_REJECTED:
        mean = states.rejected_mean(params)
    else:
        raise UnsupportedFamilyError(
            "homodyne sampling is implemented for the thermal-shaped families only"
        )
    rng = _block_rng(seed, 0)
    return rng.normal(0.0, math.sqrt((1.0 + 2.0 * mean) / 2.0), trials)


def sample_heterodyne(model: StateModel, trials: int, seed: int) -> np.ndarray:
    """Draw radial heterodyne outcomes for the thermal-shaped families."""
    if trials < 1:
        raise InvalidParameterError(f"trials must be >= 1, got {trials}")
    kind, params = model.kind, model.params
    if kind is StateKind.THERMAL:
        mean = params.lam
    elif kind is StateKind.REALISTIC_REJECTED:
        mean = states.rejected_mean(params)
    else:
        raise UnsupportedFamilyError(
            "heterodyne sampling is implemented for the thermal-shaped families only"
        )
    rng = _block_rng(seed, 0)
    return rng.exponential(1.0 + mean, trials)


# ---------------------------------------------------------------------------
# empirical Fisher information
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EmpiricalFisher:
    value: float
    std_error: float
    trials: int
    delta: float


def _central_scores(model: StateModel, meas: Measurement, samples: np.ndarray,
                    delta: float) -> np.ndarray:
    """Central log-likelihood-ratio scores per sample at step ``delta``."""
    lam = model.lam
    hi = states.with_lambda(model, lam + delta)
    lo = states.with_lambda(model, lam - delta)
    if meas.kind == "photon_number":
        num, den = states.pmf(hi, samples), states.pmf(lo, samples)
    elif meas.kind == "onoff":
        on_hi = measurements.onoff_pmf(hi, meas.onoff_epsilon)
        on_lo = measurements.onoff_pmf(lo, meas.onoff_epsilon)
        num = np.where(samples, on_hi.p_on, on_hi.p_off)
        den = np.where(samples, on_lo.p_on, on_lo.p_off)
    elif meas.kind == "homodyne":
        num = measurements.homodyne_pdf(hi, samples)
        den = measurements.homodyne_pdf(lo, samples)
    elif meas.kind == "heterodyne":
        num = measurements.heterodyne_radial_pdf(hi, samples)
        den = measurements.heterodyne_radial_pdf(lo, samples)
    else:
        raise InvalidParameterError(f"unknown measurement kind {meas.kind!r}")
    return (np.log(num) - np.log(den)) / (2.0 * delta)


def empirical_fi(model: StateModel, meas: Measurement, delta: float,
                 trials: int, seed: int) -> EmpiricalFisher:
    """Score-variance estimate of the Fisher information.

    Outcomes are simulated at ``lam``; the squared central log-likelihood
    ratio between ``lam +- delta`` averages to the Fisher information with an
    ``O(delta^2)`` discretisation bias, which Richardson extrapolation over
    steps ``delta`` and ``delta/2`` removes (the binary record otherwise has
    a statistical error small enough for that bias to dominate). The reported
    standard error is the sample error of the extrapolated mean.
    """
    lam = model.lam
    if not (1e-4 * lam < delta < 1e-1 * lam):
        raise InvalidParameterError(
            f"delta must lie in (1e-4*lam, 1e-1*lam) = ({1e-4 * lam:g}, {1e-1 * lam:g}), got {delta}"
        )

    if meas.kind == "photon_number":
        samples = sample_photon_numbers(model, trials, seed)
    elif meas.kind == "onoff":
        samples = sample_onoff(model, meas.onoff_epsilon, trials, seed)
    elif meas.kind == "homodyne":
        samples = sample_homodyne(model, trials, seed)
    elif meas.kind == "heterodyne":
        samples = sample_heterodyne(model, trials, seed)
    else:
        raise InvalidParameterError(f"unknown measurement kind {meas.kind!r}")

    s_full = _central_scores(model, meas, samples, delta)
    s_half = _central_scores(model, meas, samples, delta / 2.0)
    extrapolated = (4.0 * s_half * s_half - s_full * s_full) / 3.0
    value = float(np.mean(extrapolated))
    std_error = float(np.std(extrapolated, ddof=1) / math.sqrt(trials))
    return EmpiricalFisher(value, std_error, trials, delta)
