"""Temperature estimation on single-mode thermal light with probabilistic
photon subtraction: state statistics, detection laws, Fisher information,
post-selection accounting, information-cost rates, and a seeded Monte Carlo
oracle."""

from .errors import (
    DomainError,
    InvalidParameterError,
    NonconvergenceError,
    UndefinedConditionalStateError,
    UnsupportedFamilyError,
)
from .fisher import (
    DerivativeSpec,
    FisherResult,
    fi_binary,
    fi_continuous,
    fi_discrete,
    qfi_closed,
    reparameterize_fi,
)
from .measurements import (
    OnOffDistribution,
    heterodyne_radial_pdf,
    homodyne_pdf,
    onoff_pmf,
)
from .oracle import EmpiricalFisher, SimConfig, SimReport, empirical_fi, simulate_protocol
from .protocol import (
    HETERODYNE,
    HOMODYNE,
    PHOTON_NUMBER,
    BranchMeasurement,
    CostModel,
    Measurement,
    TotalInformation,
    convexity_bounds,
    fi_rejected_onoff,
    onoff,
    rate_direct,
    rate_postselected,
    total_information,
)
from .states import (
    ProtocolParams,
    StateKind,
    StateModel,
    ThermalParams,
    added,
    added_pmf,
    mean_photon_number,
    pmf,
    realistic_accepted,
    realistic_rejected,
    realistic_subtracted_pmf,
    realistic_subtracted_pmf_bracket,
    rejected_mean,
    subtracted,
    subtracted_pmf,
    success_probability,
    thermal,
    thermal_pmf,
)

__version__ = "0.1.0"
