"""Subcommand implementations; each returns a table and an exit code."""

import math
from dataclasses import dataclass
from typing import Callable, Dict, Optional

from affinevol.cli.config import RunConfig
from affinevol.core.errors import AssumptionError, ModelSpecError
from affinevol.core.parameters import validate_admissibility
from affinevol.explosion.moments import (
    Regime,
    critical_moments,
    cutoff_time,
    lee_slopes,
)
from affinevol.explosion.times import (
    ExplosionProfile,
    explosion_time,
    explosion_time_stationary,
)
from affinevol.longterm.equilibria import (
    classify_equilibria,
    compute_interval_I,
    convergence_bounds,
    long_term_profile,
)
from affinevol.longterm.stationary import l_plus, stationary_cgf
from affinevol.longterm.verdicts import (
    Verdict,
    conservativeness_check,
    martingale_check,
)
from affinevol.models.factory import Model
from affinevol.pricing.smile import smile, smile_table
from affinevol.riccati.solver import solve_riccati
from affinevol.utils.logger import setup_logger
from affinevol.utils.parallel import parallel_map
from affinevol.utils.table import Table

logger = setup_logger(__name__)

EXIT_OK = 0
EXIT_SPEC = 1
EXIT_FAIL = 2
EXIT_INCONCLUSIVE = 3


@dataclass
class CommandResult:
    """Rendered table and exit code of one subcommand."""

    table: Table
    exit_code: int = EXIT_OK


def cmd_validate(model: Model, config: RunConfig) -> CommandResult:
    """Admissibility plus conservativeness and martingale verdicts."""
    report = validate_admissibility(model.embedding())
    table = Table(["check", "result", "detail"])
    for cond in report.conditions:
        table.add(cond.name, "pass" if cond.passed else "fail", cond.detail)
    verdicts = [
        conservativeness_check(model.generator),
        martingale_check(model.generator),
    ]
    for v in verdicts:
        table.add(v.prop, v.verdict.value, v.reason)
    if not report.passed or any(v.verdict is Verdict.NO for v in verdicts):
        return CommandResult(table, EXIT_FAIL)
    if any(v.verdict is Verdict.INCONCLUSIVE for v in verdicts):
        return CommandResult(table, EXIT_INCONCLUSIVE)
    return CommandResult(table)


def cmd_figure1(model: Model, config: RunConfig) -> CommandResult:
    """Equilibrium branches of R(u, .) = 0 and sample psi(t, u, 0) paths."""
    g, cfg = model.generator, config.solver_config()
    I = compute_interval_I(g)
    bounds = convergence_bounds(g)
    table = Table(
        ["series", "u", "t", "value"],
        footer=[
            f"I={I}",
            f"rate={bounds.rate!r}",
            f"C={bounds.constant!r}",
        ],
    )

    def branch(u: float):
        if not I.contains(u):
            return None
        return classify_equilibria(g, u)

    for u, eq in zip(config.u_grid(), parallel_map(branch, config.u_grid())):
        if eq is None:
            continue
        table.add("stable", u, None, eq.stable)
        if eq.unstable is not None:
            table.add("unstable", u, None, eq.unstable)

    def trajectory(u: float):
        solution = solve_riccati(g, u, 0.0, config.t_max, cfg)
        return solution.grid

    for u, grid in zip(
        config.trajectory_u, parallel_map(trajectory, config.trajectory_u)
    ):
        for t, psi, _ in grid:
            table.add("psi", u, t, psi)
    return CommandResult(table)


def cmd_figure2(model: Model, config: RunConfig) -> CommandResult:
    """u_+-(t) for the plain, stationary and jump variants of a model."""
    g = model.generator
    base, kappa_minus = g.jump_free(), g.jump_kappa_minus()
    if base is None or kappa_minus is None:
        raise ModelSpecError(
            "kind", "figure2 needs a model with state-independent jumps"
        )
    cutoff = cutoff_time(g)

    def row(t: float):
        plain = critical_moments(base, t)
        stationary = critical_moments(base, t, Regime.STATIONARY)
        jump = critical_moments(g, t)
        return (
            t,
            plain.u_minus,
            plain.u_plus,
            stationary.u_minus,
            stationary.u_plus,
            jump.u_minus,
        )

    table = Table(
        [
            "t",
            "u_minus",
            "u_plus",
            "u_minus_S",
            "u_plus_S",
            "u_minus_jump",
        ],
        footer=[f"kappa_minus={kappa_minus!r}", f"T_sharp={cutoff!r}"],
    )
    table.extend(parallel_map(row, config.t_grid()))
    return CommandResult(table)


def cmd_explosion(model: Model, config: RunConfig) -> CommandResult:
    """T*(u) and T*^S(u) on the u-grid."""
    g = model.generator
    try:
        level: Optional[float] = l_plus(g)
    except AssumptionError as exc:
        logger.info("stationary column left empty: %s", exc)
        level = None

    def profile(u: float) -> ExplosionProfile:
        stationary = (
            None
            if level is None
            else explosion_time_stationary(g, u, level)
        )
        return ExplosionProfile(u, explosion_time(g, u), stationary)

    table = Table(["u", "T_star", "T_star_S", "branch", "branch_S"])
    for p in parallel_map(profile, config.u_grid()):
        table.add(
            p.u,
            p.T_star,
            p.T_star_S,
            p.primary.branch.value,
            None if p.stationary is None else p.stationary.branch.value,
        )
    return CommandResult(table)


def cmd_longterm(model: Model, config: RunConfig) -> CommandResult:
    """I, J, w, h and the rate constants."""
    profile = long_term_profile(
        model.generator, config.u_grid(), mapper=parallel_map
    )
    return CommandResult(profile.to_table())


def cmd_critical_moments(model: Model, config: RunConfig) -> CommandResult:
    """u_+-(T) and the Lee wing slopes on the t-grid."""
    g = model.generator

    def row(t: float):
        slopes = lee_slopes(g, t, config.regime)
        return (
            t,
            slopes.u_minus,
            slopes.u_plus,
            slopes.left_slope,
            slopes.right_slope,
        )

    table = Table(
        ["T", "u_minus", "u_plus", "left_slope", "right_slope"],
        footer=[f"regime={config.regime}"],
    )
    table.extend(parallel_map(row, config.t_grid()))
    return CommandResult(table)


def cmd_smile(model: Model, config: RunConfig) -> CommandResult:
    """Fourier-priced call smile at maturity T."""
    g = model.generator
    V0 = config.V0 if config.regime == "primary" else None
    points = smile(
        g,
        config.T,
        config.xi_grid(),
        V0,
        config.regime,
        cfg=config.solver_config(),
        fourier=config.fourier_config(),
    )
    slopes = lee_slopes(g, config.T, config.regime)
    table = smile_table(points)
    table.footer = [
        f"regime={config.regime}",
        f"left_slope={slopes.left_slope!r}",
        f"right_slope={slopes.right_slope!r}",
    ]
    return CommandResult(table)


def cmd_stationary(model: Model, config: RunConfig) -> CommandResult:
    """The stationary cgf l(w) on the w-grid."""
    g = model.generator
    level = l_plus(g)
    table = Table(["w", "l"], footer=[f"l_plus={level!r}"])
    for w in config.w_grid():
        table.add(w, math.inf if w >= level else stationary_cgf(g, w))
    return CommandResult(table)


COMMANDS: Dict[str, Callable[[Model, RunConfig], CommandResult]] = {
    "validate": cmd_validate,
    "figure1": cmd_figure1,
    "figure2": cmd_figure2,
    "explosion": cmd_explosion,
    "longterm": cmd_longterm,
    "critical-moments": cmd_critical_moments,
    "smile": cmd_smile,
    "stationary": cmd_stationary,
}
