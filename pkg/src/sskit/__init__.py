"""Stress-strength reliability R = P(Y < X) for two-parameter Rayleigh
populations with a common location under progressive Type-II censoring."""

from .errors import (
    BootstrapError,
    ConfigError,
    ConvergenceError,
    DomainError,
    IntegrityError,
    NumericalError,
    SchemeError,
    SingularityError,
    SskitError,
)
from .interval import Interval
from .rayleigh import (
    CensoringScheme,
    ProgressiveSample,
    RayleighParams,
    RngStream,
    cdf,
    pdf,
    quantile,
    r_true,
    read_sample,
    sample_progressive,
    write_sample,
)

__version__ = "0.1.0"
