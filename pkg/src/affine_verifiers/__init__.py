"""Exact simulation and analysis of two-way affine finite automata verifiers."""

__version__ = "0.1.0"

from .core import (
    AffineOperator,
    AffineState,
    Interval,
    ProbabilityInterval,
    Rational,
    WeightingOutcome,
    apply,
    basis,
    identity,
    validate_operator,
    validate_state,
    weight,
)
from .encoding import (
    AlphaValue,
    BetaTrace,
    LanguageOracle,
    alpha_shift,
    alpha_value,
    beta_step,
    divergence_floor,
    shortlex_index,
    shortlex_string,
)
from .machine import ChoicePoint, Configuration, Machine, Register, Strategy, enumerate_choices, step, validate_machine
from .protocols import (
    ProtocolParams,
    ProtocolStrategy,
    build_strong,
    build_weak,
    closed_form_acceptance,
    honest_strategy,
)
from .analysis import (
    amplify_majority,
    evaluate_strategy,
    expected_steps,
    max_acceptance,
    monte_carlo,
)
