"""Exact evaluation, adversary search and sampling for affine verifiers."""

from ..core import ProbabilityInterval
from .adversary import AdversaryBound, brute_force_acceptance, exit_acceptance, max_acceptance
from .evaluation import (
    ComputationGraph,
    StrategyOutcome,
    TraceEntry,
    amplify_majority,
    build_graph,
    evaluate_graph,
    evaluate_strategy,
    expected_steps,
    trace,
)
from .sampling import MonteCarloResult, binomial_sigma, monte_carlo

__all__ = [
    "AdversaryBound",
    "ComputationGraph",
    "MonteCarloResult",
    "ProbabilityInterval",
    "StrategyOutcome",
    "TraceEntry",
    "amplify_majority",
    "binomial_sigma",
    "brute_force_acceptance",
    "build_graph",
    "evaluate_graph",
    "evaluate_strategy",
    "exit_acceptance",
    "expected_steps",
    "max_acceptance",
    "monte_carlo",
    "trace",
]
