"""Branch accounting for the probabilistic subtraction protocol.

The click record, the accepted branch and the rejected branch each carry
information about ``lam``; their probability-weighted sum is the total
extractable information, sandwiched between the attenuated-thermal bound from
below and the pre-selection bound from above. The information-cost rates
compare spending the expensive final measurement on every copy against
spending it only on heralded copies.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import fisher, measurements, states
from .errors import InvalidParameterError
from .fisher import DerivativeSpec, FisherResult
from .states import ProtocolParams, StateKind, StateModel


@dataclass(frozen=True)
class CostModel:
    """Preparation, selection and final-measurement costs."""

    c_prep: float
    c_select: float
    c_measure: float

    def __post_init__(self):
        if min(self.c_prep, self.c_select, self.c_measure) < 0:
            raise InvalidParameterError("costs must be >= 0")
        if self.c_prep + self.c_measure <= 0:
            raise InvalidParameterError("preparation and measurement costs cannot both vanish")


@dataclass(frozen=True)
class Measurement:
    """One element of a branch measurement choice.

    ``kind`` is ``photon_number`` (information-optimal for these Fock-diagonal
    states), ``homodyne``, ``heterodyne`` or ``onoff``; the latter carries its
    detector efficiency.
    """

    kind: str
    onoff_epsilon: float | None = None

    def __post_init__(self):
        if self.kind not in ("photon_number", "homodyne", "heterodyne", "onoff"):
            raise InvalidParameterError(f"unknown measurement kind {self.kind!r}")
        if self.kind == "onoff":
            if self.onoff_epsilon is None or not (0.0 < self.onoff_epsilon <= 1.0):
                raise InvalidParameterError("onoff measurement requires efficiency in (0, 1]")
        elif self.onoff_epsilon is not None:
            raise InvalidParameterError(f"{self.kind} takes no detector efficiency")


PHOTON_NUMBER = Measurement("photon_number")
HOMODYNE = Measurement("homodyne")
HETERODYNE = Measurement("heterodyne")


def onoff(epsilon: float) -> Measurement:
    return Measurement("onoff", epsilon)


@dataclass(frozen=True)
class BranchMeasurement:
    """Measurement applied to each branch of the protocol."""

    accepted: Measurement = PHOTON_NUMBER
    rejected: Measurement = PHOTON_NUMBER


@dataclass(frozen=True)
class TotalInformation:
    """Decomposition of the extractable information: the click record plus
    the probability-weighted branch informations."""

    click_fi: float
    accepted_term: float
    rejected_term: float
    total: float
    diagnostics: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if min(self.click_fi, self.accepted_term, self.rejected_term) < 0:
            raise InvalidParameterError("information components must be >= 0")
        if self.total != self.click_fi + self.accepted_term + self.rejected_term:
            raise InvalidParameterError("total must equal the exact sum of its parts")


def branch_fi(model: StateModel, meas: Measurement,
              d: DerivativeSpec | None = None) -> FisherResult:
    """Fisher information about ``lam`` carried by one branch state under the
    given measurement.

    Photon counting on the rejected (thermal) branch uses its closed form;
    on the accepted branch it is the numerically summed series.
    """
    if meas.kind == "photon_number":
        if model.kind is StateKind.REALISTIC_REJECTED:
            return fisher.qfi_closed(model)
        return fisher.fi_discrete(model, d)
    if meas.kind in ("homodyne", "heterodyne"):
        return fisher.fi_continuous(model, meas.kind, d)
    p_off = measurements.onoff_pmf(model, meas.onoff_epsilon).p_off
    dp_off = measurements.onoff_p_off_dlambda(model, meas.onoff_epsilon)
    value = fisher.fi_binary(p_off, dp_off)
    return FisherResult(value, "closed_form", 0, 0.0)


def click_record_fi(p: ProtocolParams) -> float:
    """Bernoulli information of the herald outcome, equal to
    ``a / (lam (1 + a lam)^2)`` with ``a = epsilon (1 - eta)``."""
    return fisher.fi_binary(states.success_probability(p),
                            states.success_probability_dlambda(p))


def total_information(p: ProtocolParams,
                      m: BranchMeasurement = BranchMeasurement(),
                      d: DerivativeSpec | None = None) -> TotalInformation:
    """Click-record information plus probability-weighted branch informations."""
    states._require_conditional(p)
    p1 = states.success_probability(p)
    p0 = 1.0 - p1
    accepted = StateModel(StateKind.REALISTIC_ACCEPTED, p)
    rejected = StateModel(StateKind.REALISTIC_REJECTED, p)
    click = click_record_fi(p)
    acc = branch_fi(accepted, m.accepted, d)
    rej = branch_fi(rejected, m.rejected, d)
    acc_term = p1 * acc.value
    rej_term = p0 * rej.value
    return TotalInformation(
        click_fi=click,
        accepted_term=acc_term,
        rejected_term=rej_term,
        total=click + acc_term + rej_term,
        diagnostics={"accepted": acc, "rejected": rej},
    )


def convexity_bounds(p: ProtocolParams) -> tuple[float, float]:
    """Lower and upper bounds on the total information: the QFI of the
    ignored-outcome state (thermal at ``eta*lam``) and the QFI of the
    pre-selection output, i.e. of the input thermal state."""
    lam, eta = p.lam, p.eta
    lower = eta / (lam * (1.0 + eta * lam))
    upper = 1.0 / (lam * (1.0 + lam))
    return lower, upper


def fi_rejected_onoff(p: ProtocolParams) -> float:
    """Information extracted by reusing the on-off detector on the rejected
    branch: ``eps*eta / (lam (1+eps*lam)^2 (1+eps*(1-eta)*lam))``."""
    lam, eps = p.lam, p.epsilon
    return eps * p.eta / (lam * (1.0 + eps * lam) ** 2 * (1.0 + p.herald_rate * lam))


def rate_direct(lam: float, c: CostModel, meas_fi: float) -> float:
    """Information-cost rate of the unconditioned strategy:
    measure every prepared copy, paying ``c_prep + c_measure`` each."""
    if not lam > 0:
        raise InvalidParameterError(f"lam must be > 0, got {lam}")
    if meas_fi < 0:
        raise InvalidParameterError(f"measurement FI must be >= 0, got {meas_fi}")
    return meas_fi / (c.c_prep + c.c_measure)


def rate_postselected(p: ProtocolParams, c: CostModel,
                      m: BranchMeasurement | None = None,
                      compact: bool = False,
                      d: DerivativeSpec | None = None) -> float:
    """Information-cost rate of the heralded strategy.

    The expensive final measurement is paid only on accepted copies; the
    rejected branch always reuses the on-off detector (efficiency
    ``p.epsilon``) at the selection cost. ``compact`` drops the typically
    negligible rejected-branch information together with its cost term.
    """
    states._require_conditional(p)
    m = m or BranchMeasurement(accepted=HETERODYNE, rejected=onoff(p.epsilon))
    if m.rejected.kind != "onoff" or m.rejected.onoff_epsilon != p.epsilon:
        raise InvalidParameterError(
            "the rejected branch is fixed to on-off detection at the protocol efficiency"
        )
    p1 = states.success_probability(p)
    p0 = 1.0 - p1
    accepted = StateModel(StateKind.REALISTIC_ACCEPTED, p)
    f_acc = branch_fi(accepted, m.accepted, d).value
    click = click_record_fi(p)
    if compact:
        numerator = p1 * f_acc + click
        denominator = c.c_prep + c.c_select + p1 * c.c_measure
    else:
        numerator = p1 * f_acc + p0 * fi_rejected_onoff(p) + click
        denominator = c.c_prep + c.c_select + p1 * c.c_measure + p0 * c.c_select
    return numerator / denominator
