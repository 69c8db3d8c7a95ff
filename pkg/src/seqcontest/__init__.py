"""Equilibrium solver and design search for sequential contests with effort disclosure."""

from seqcontest.asymptotics import ApproxOutcome, approx_equilibrium, ibar, ith_effort_extremal, ith_payoff_extremal
from seqcontest.contests import Contest, enumerate_contests, info_measures, refines, strictly_refines, subcontest
from seqcontest.designer import (
    Objective,
    ObjectiveReport,
    SearchResult,
    evaluate_objectives,
    reproduce_summary_table,
    search,
    verify_propositions,
)
from seqcontest.equilibrium import EquilibriumOutcome, check_assumptions, solve_equilibrium, solve_total_effort
from seqcontest.oracle import OracleConfig, oracle_solve
from seqcontest.payoff import (
    MarginalBenefit,
    g_tower,
    make_custom,
    make_exponential,
    make_exponential_decay,
    make_linear,
    make_squared_exponential,
    make_tullock,
    parse_model,
)

__version__ = "0.1.0"

__all__ = [
    "ApproxOutcome", "Contest", "EquilibriumOutcome", "MarginalBenefit", "Objective", "ObjectiveReport",
    "OracleConfig", "SearchResult", "approx_equilibrium", "check_assumptions", "enumerate_contests",
    "evaluate_objectives", "g_tower", "ibar", "info_measures", "ith_effort_extremal", "ith_payoff_extremal",
    "make_custom", "make_exponential", "make_exponential_decay", "make_linear", "make_squared_exponential",
    "make_tullock", "oracle_solve", "parse_model", "refines", "reproduce_summary_table", "search",
    "solve_equilibrium", "solve_total_effort", "strictly_refines", "subcontest", "verify_propositions",
]
