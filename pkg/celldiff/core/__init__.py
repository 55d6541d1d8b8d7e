# Core package initialization
"""
Model coefficients, feedback laws and parameter sets shared by every other
package.
"""

from .errors import (
    CelldiffError,
    DomainError,
    ConfigurationError,
    NumericalError,
    StepError,
    CertificateUnavailable,
)
from .coefficients import (
    CoefficientTable,
    FeedbackLaw,
    TrueDataFeedback,
    GenericAlphaFeedback,
    signal,
    alpha,
    table_eval,
)
from .params import (
    GMode,
    BoundaryMode,
    TabulatedMaturation,
    ContinuousModelParams,
    DiscreteModelParams,
    g_eval,
    dg_dv,
    discrete_to_continuous,
)
