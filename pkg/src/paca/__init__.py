"""Exact analysis of probabilistic acceptor cellular automata."""

from .core import (
    BOUNDARY,
    BudgetExceeded,
    FormatError,
    Paca,
    PacaError,
    ProcRule,
    RandomTape,
    TableRule,
    run,
    space_time,
)
from .dyadic import Dyadic
from .prob import (
    Budget,
    ErrorMode,
    Verdict,
    acceptance_prob,
    acceptance_prob_dp,
    acceptance_prob_enum,
    classify,
    critical_cells,
    independence_check,
    one_sided,
    two_sided,
    validate_horizon,
)

__all__ = [
    "BOUNDARY",
    "Budget",
    "BudgetExceeded",
    "Dyadic",
    "ErrorMode",
    "FormatError",
    "Paca",
    "PacaError",
    "ProcRule",
    "RandomTape",
    "TableRule",
    "Verdict",
    "acceptance_prob",
    "acceptance_prob_dp",
    "acceptance_prob_enum",
    "classify",
    "critical_cells",
    "independence_check",
    "one_sided",
    "run",
    "space_time",
    "two_sided",
    "validate_horizon",
]
