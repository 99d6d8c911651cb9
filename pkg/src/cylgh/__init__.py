"""Global hypoellipticity analysis on the cylinder T^1 x R.

Decides global hypoellipticity of constant-coefficient and variable-
coefficient first-order operators in time-periodic Gelfand-Shilov classes,
solves Pu = f on the mixed Fourier side, fits spectral decay profiles, and
constructs explicit counterexample solutions when regularity fails.
"""

from .symbols import (
    ComplexPolynomial,
    ConstSplit,
    FirstOrderT,
    SymbolError,
    TrigPolynomial,
    TubeT,
    average,
    first_order_t,
    first_order_x,
    symbol_at,
    zero_mean_antiderivative,
)
from .zeroset import (
    DegenerateOperatorError,
    LowerBoundCertificate,
    RefutationPath,
    ZeroSearchResult,
    ZeroWitness,
    certify_lower_bound,
    find_zeros,
    uniform_gap,
)
from .classifier import (
    Budgets,
    Classification,
    CriterionTrace,
    classify_const_deg_le1,
    classify_const_general,
    classify_first_order_t,
    classify_first_order_x,
    classify_tube,
    sign_change,
)
from .spectral import (
    CylinderGrid,
    DecayFit,
    GridFunction,
    MembershipReport,
    MixedSpectrum,
    SpectralError,
    fit_decay,
    forward_mixed,
    inverse_mixed,
    membership_report,
    parseval_defect,
)
from .solver import (
    PeriodicODEProblem,
    SolveError,
    SolveReport,
    TubeReduction,
    UnsolvableFiberError,
    VanishingSymbolError,
    apply_operator,
    conjugate_psi_a,
    conjugate_psi_q,
    reduce_tube,
    solve_const,
    solve_periodic_ode,
    solve_tube,
)
from .counterexamples import (
    CounterexampleError,
    GevreyCutoff,
    LaplaceCheck,
    PlaneWaveWitness,
    SignChangeResult,
    TubeWitness,
    laplace_lower_bound_check,
    plane_wave_witness,
    sign_change_construction,
    tube_zero_witness,
)

__version__ = "0.1.0"

__all__ = [
    "ComplexPolynomial", "ConstSplit", "FirstOrderT", "SymbolError",
    "TrigPolynomial", "TubeT", "average", "first_order_t", "first_order_x",
    "symbol_at", "zero_mean_antiderivative",
    "DegenerateOperatorError", "LowerBoundCertificate", "RefutationPath",
    "ZeroSearchResult", "ZeroWitness", "certify_lower_bound", "find_zeros",
    "uniform_gap",
    "Budgets", "Classification", "CriterionTrace", "classify_const_deg_le1",
    "classify_const_general", "classify_first_order_t",
    "classify_first_order_x", "classify_tube", "sign_change",
    "CylinderGrid", "DecayFit", "GridFunction", "MembershipReport",
    "MixedSpectrum", "SpectralError", "fit_decay", "forward_mixed",
    "inverse_mixed", "membership_report", "parseval_defect",
    "PeriodicODEProblem", "SolveError", "SolveReport", "TubeReduction",
    "UnsolvableFiberError", "VanishingSymbolError", "apply_operator",
    "conjugate_psi_a", "conjugate_psi_q", "reduce_tube", "solve_const",
    "solve_periodic_ode", "solve_tube",
    "CounterexampleError", "GevreyCutoff", "LaplaceCheck",
    "PlaneWaveWitness", "SignChangeResult", "TubeWitness",
    "laplace_lower_bound_check", "plane_wave_witness",
    "sign_change_construction", "tube_zero_witness",
    "__version__",
]
