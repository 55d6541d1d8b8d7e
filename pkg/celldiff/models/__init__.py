# Models package initialization
"""
Compartment and transport integrators, steady states and a priori bounds.
"""

from .common import Grid, BalanceResidual
from .compartments import (
    CompartmentState,
    DiscreteTrajectory,
    Matched,
    discrete_rhs,
    discrete_mass_balance_residual,
    integrate_discrete,
)
from .transport import (
    PdeState,
    PdeTrajectory,
    initial_state,
    cfl_dt,
    step,
    pde_mass_balance_residual,
    stability_metric,
    run,
    extinction_weights,
    extinction_functional,
)
from .steady_state import (
    NoPositiveSteadyState,
    SteadyState,
    SteadyReport,
    solve_vbar,
    steady_profile,
    closed_form_u_star,
    compute_steady_state,
    verify_steady,
)
from .bounds import BoundsCertificate, Violation, apriori_bounds, check_bounds
