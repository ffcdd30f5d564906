from .solver import (
    DEFAULT_CONFIG,
    RiccatiSolution,
    SolverConfig,
    SolverStatus,
    StatusKind,
    cgf,
    check_flow_property,
    implicit_time_of_level,
    solve_riccati,
    solve_riccati_complex,
)
from .stepper import CashKarpStepper

__all__ = [
    "DEFAULT_CONFIG",
    "RiccatiSolution",
    "SolverConfig",
    "SolverStatus",
    "StatusKind",
    "cgf",
    "check_flow_property",
    "implicit_time_of_level",
    "solve_riccati",
    "solve_riccati_complex",
    "CashKarpStepper",
]
