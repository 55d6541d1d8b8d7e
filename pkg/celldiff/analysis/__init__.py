# Analysis package initialization
"""
Characteristic equations of the linearized model, rightmost roots and Hopf
crossings.
"""

from .characteristic import (
    CharProblem,
    DelayProblem,
    GeneralProblem,
    TrueDataGeneralProblem,
    GConstProblem,
    ReducedQuadraticProblem,
    HeavisideExcess,
    SampledExcess,
    char_eval,
    quadratic_roots,
    delay_problem,
    general_problem,
    true_data_problem,
    gconst_problem,
    reduced_quadratic,
)
from .roots import RootReport, default_box, delay_right_bound, count_zeros, rhp_count, rightmost_root
from .hopf import (
    HopfPoint,
    HeavisideHopf,
    OutOfRange,
    Crossing,
    hopf_simple,
    heaviside_hopf,
    imaginary_crossing_scan,
)
