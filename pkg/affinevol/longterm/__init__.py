from affinevol.longterm.equilibria import (
    ConvergenceBounds,
    Equilibria,
    Interval,
    LongTermProfile,
    ProfileRow,
    classify_equilibria,
    compute_h,
    compute_interval_I,
    compute_interval_J,
    convergence_bounds,
    long_term_profile,
    require_long_term,
    smallest_zero,
    solve_w,
    unstable_zero,
)
from affinevol.longterm.stationary import (
    StationaryLaw,
    l_plus,
    numeric_stationary_cgf,
    require_stationary,
    stationary_cgf,
    stationary_cgf_complex,
    stationary_law,
)
from affinevol.longterm.verdicts import (
    PropertyReport,
    Verdict,
    conservativeness_check,
    martingale_check,
)

__all__ = [
    "ConvergenceBounds",
    "Equilibria",
    "Interval",
    "LongTermProfile",
    "ProfileRow",
    "PropertyReport",
    "StationaryLaw",
    "Verdict",
    "classify_equilibria",
    "compute_h",
    "compute_interval_I",
    "compute_interval_J",
    "conservativeness_check",
    "convergence_bounds",
    "l_plus",
    "long_term_profile",
    "martingale_check",
    "numeric_stationary_cgf",
    "require_stationary",
    "smallest_zero",
    "solve_w",
    "stationary_cgf",
    "stationary_cgf_complex",
    "stationary_law",
    "unstable_zero",
]
