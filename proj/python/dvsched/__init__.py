"""Minimum-energy voltage scheduling: continuous and discrete optimal solvers."""

from dvsched._core import (
    InfeasibleError,
    Job,
    JobSet,
    Schedule,
    Segment,
    avr,
    generate,
    intensity,
    mes_schedule,
    s_schedule,
    solve,
    solve_discrete,
    support,
    two_speed_round,
    verify_feasible,
)

__all__ = [
    "InfeasibleError",
    "Job",
    "JobSet",
    "Schedule",
    "Segment",
    "avr",
    "generate",
    "intensity",
    "mes_schedule",
    "s_schedule",
    "solve",
    "solve_discrete",
    "support",
    "two_speed_round",
    "verify_feasible",
]
