"""Two-way automata with classical (possibly nondeterministic) and affine states.

A step has two phases.  In the affine phase every register either gets an
operator or is weighted; in the classical phase the next state and head
move are chosen from ``(state, symbol, outcome tuple)``, where the outcome
entry of a register is 0 if an operator was applied and the observed basis
index otherwise.  Nondeterminism in either phase is resolved by a
:class:`Strategy`, i.e. by the prover.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, NamedTuple, Optional, Sequence, Union

from .core import AffineOperator, AffineState, apply, basis, weight
from .encoding import SYMBOLS
from .errors import (
    ColumnSumNotOne,
    DimensionMismatch,
    Halted,
    HeadOutOfTape,
    InvalidOperator,
    MachineError,
    MissingTransition,
    UnknownOperator,
    UnresolvedChoice,
)

WEIGHT = "W"
LEFT_END = "¢"
RIGHT_END = "$"
MOVES = (-1, 0, 1)

Option = tuple[str, ...]             # one entry per register: operator name or WEIGHT
Outcome = tuple[int, ...]            # 0 = operator applied, else observed index
ClassicalRule = tuple[str, int]      # (next state, head move)


@dataclass(frozen=True)
class Register:
    name: str
    dim: int
    operators: Mapping[str, Union[AffineOperator, Sequence[Sequence]]]


@dataclass(frozen=True, eq=False)
class Machine:
    states: tuple[str, ...]
    initial: str
    accept: str
    reject: str
    alphabet_size: int
    registers: tuple[Register, ...]
    affine_table: Mapping[tuple[str, str], tuple[Option, ...]]
    classical_table: Mapping[tuple[str, str, Outcome], tuple[ClassicalRule, ...]]
    # (state, symbol) -> role label, read by protocol-aware strategies
    roles: Mapping[tuple[str, str], str] = field(default_factory=dict)
    name: str = "machine"

    @property
    def tape_symbols(self) -> tuple[str, ...]:
        return (LEFT_END,) + tuple(SYMBOLS[: self.alphabet_size]) + (RIGHT_END,)

    def is_halting(self, state: str) -> bool:
        return state in (self.accept, self.reject)

    def operator(self, register: int, name: str) -> AffineOperator:
        return self.registers[register].operators[name]

    def initial_configuration(self) -> "Configuration":
        return Configuration(
            self.initial, 0, tuple(basis(r.dim, 1) for r in self.registers), 0
        )


@dataclass(frozen=True)
class Configuration:
    state: str
    head: int
    registers: tuple[AffineState, ...]
    steps: int = 0


@dataclass(frozen=True)
class ChoicePoint:
    state: str
    symbol: str
    affine_options: tuple[Option, ...]
    # per affine option: realizable outcome tuple -> classical rules
    classical_options: tuple[Mapping[Outcome, tuple[ClassicalRule, ...]], ...]

    @property
    def size(self) -> int:
        """Number of distinct pure resolutions of this choice point."""
        total = 0
        for rules in self.classical_options:
            n = 1
            for opts in rules.values():
                n *= len(opts)
            total += n
        return total


class Branch(NamedTuple):
    probability: Fraction
    outcome: Outcome
    configuration: Configuration


def tape(word: str) -> tuple[str, ...]:
    return (LEFT_END,) + tuple(word) + (RIGHT_END,)


def _outcomes_for(option: Option, dims: Sequence[int]) -> list[Outcome]:
    ranges = [range(1, m + 1) if op == WEIGHT else (0,) for op, m in zip(option, dims)]
    return list(itertools.product(*ranges))


def validate_machine(m: Machine) -> Machine:
    """Static checks; returns a machine whose operators are all validated."""
    states = set(m.states)
    for s in (m.initial, m.accept, m.reject):
        if s not in states:
            raise MachineError(f"distinguished state {s!r} is not in the state set")
    if len({m.initial, m.accept, m.reject}) != 3:
        raise MachineError("initial, accepting and rejecting states must be distinct")

    registers = []
    for reg in m.registers:
        ops = {}
        for name, op in reg.operators.items():
            if name == WEIGHT:
                raise MachineError(f"{WEIGHT!r} is reserved for weighting")
            if not isinstance(op, AffineOperator):
                try:
                    op = AffineOperator(tuple(tuple(row) for row in op))
                except (ColumnSumNotOne, DimensionMismatch) as exc:
                    raise InvalidOperator(f"register {reg.name}, operator {name}: {exc}") from exc
            if op.dim != reg.dim:
                raise InvalidOperator(f"register {reg.name}, operator {name}: "
                                      f"dimension {op.dim} != {reg.dim}")
            ops[name] = op
        registers.append(Register(reg.name, reg.dim, ops))
    dims = [r.dim for r in registers]
    symbols = set(m.tape_symbols)

    for (state, symbol), options in m.affine_table.items():
        if state not in states or m.is_halting(state):
            raise MachineError(f"affine rule for non-running state {state!r}")
        if symbol not in symbols:
            raise MachineError(f"affine rule for unknown symbol {symbol!r}")
        if not options:
            raise MissingTransition(f"no affine option at ({state}, {symbol})")
        for option in options:
            if len(option) != len(registers):
                raise MachineError(f"option {option} at ({state}, {symbol}) has wrong arity")
            for reg, op in zip(registers, option):
                if op != WEIGHT and op not in reg.operators:
                    raise UnknownOperator(f"register {reg.name} has no operator {op!r}")
            for outcome in _outcomes_for(option, dims):
                rules = m.classical_table.get((state, symbol, outcome))
                if not rules:
                    raise MissingTransition(f"no classical rule for ({state}, {symbol}, {outcome})")
    for key, rules in m.classical_table.items():
        for nxt, move in rules:
            if nxt not in states:
                raise MachineError(f"rule {key} -> unknown state {nxt!r}")
            if move not in MOVES:
                raise MachineError(f"rule {key} has head move {move}")

    return Machine(m.states, m.initial, m.accept, m.reject, m.alphabet_size, tuple(registers),
                   dict(m.affine_table), dict(m.classical_table), dict(m.roles), m.name)


def _symbol(m: Machine, c: Configuration, word: str) -> str:
    if m.is_halting(c.state):
        raise Halted(f"configuration is halted in {c.state!r}")
    return tape(word)[c.head]


def _affine_phase(m: Machine, c: Configuration, option: Option):
    """Yield ``(probability, outcome, registers)`` for every realizable outcome."""
    per_register = []
    for i, (op, v) in enumerate(zip(option, c.registers)):
        if op == WEIGHT:
            per_register.append([(w.probability, w.index, w.post_state) for w in weight(v)])
        else:
            per_register.append([(Fraction(1), 0, apply(m.operator(i, op), v))])
    for combo in itertools.product(*per_register):
        p = Fraction(1)
        for q, _, _ in combo:
            p *= q
        yield p, tuple(x[1] for x in combo), tuple(x[2] for x in combo)


def enumerate_choices(m: Machine, c: Configuration, word: str) -> ChoicePoint:
    symbol = _symbol(m, c, word)
    options = m.affine_table.get((c.state, symbol))
    if not options:
        raise MissingTransition(f"no affine rule at ({c.state}, {symbol})")
    per_option = []
    for option in options:
        rules = {}
        for _, outcome, _ in _affine_phase(m, c, option):
            found = m.classical_table.get((c.state, symbol, outcome))
            if not found:
                raise MissingTransition(f"no classical rule for ({c.state}, {symbol}, {outcome})")
            rules[outcome] = tuple(found)
        per_option.append(rules)
    return ChoicePoint(c.state, symbol, tuple(options), tuple(per_option))


def step(m: Machine, c: Configuration, word: str, affine_choice: int = 0,
         classical_choices: Union[int, Mapping[Outcome, int]] = 0) -> list[Branch]:
    """One affine + classical phase; returns the exact branch distribution."""
    symbol = _symbol(m, c, word)
    options = m.affine_table.get((c.state, symbol))
    if not options:
        raise MissingTransition(f"no affine rule at ({c.state}, {symbol})")
    if not 0 <= affine_choice < len(options):
        raise UnresolvedChoice(f"affine choice {affine_choice} out of range at ({c.state}, {symbol})")
    last_cell = len(word) + 1
    branches = []
    for p, outcome, regs in _affine_phase(m, c, options[affine_choice]):
        rules = m.classical_table.get((c.state, symbol, outcome))
        if not rules:
            raise MissingTransition(f"no classical rule for ({c.state}, {symbol}, {outcome})")
        if isinstance(classical_choices, int):
            choice = classical_choices
        else:
            choice = classical_choices.get(outcome)
            if choice is None:
                raise UnresolvedChoice(f"no classical choice for outcome {outcome}")
        if not 0 <= choice < len(rules):
            raise UnresolvedChoice(f"classical choice {choice} out of range for outcome {outcome}")
        nxt, move = rules[choice]
        head = c.head + move
        if not 0 <= head <= last_cell:
            raise HeadOutOfTape(f"head would move to cell {head} outside 0..{last_cell}")
        branches.append(Branch(p, outcome, Configuration(nxt, head, regs, c.steps + 1)))
    return branches


class Strategy:
    """A prover: resolves every choice point, possibly using a finite memory.

    ``blind_registers`` names registers whose contents can never influence
    a future probability (they will not be weighted again).  The exact
    evaluator drops them from configuration identity, which is what lets
    infinite stalling branches close into finite cycles.
    """

    def initial_memory(self):
        return None

    def decide(self, memory, machine: Machine, config: Configuration,
               point: ChoicePoint) -> tuple[int, Mapping[Outcome, int]]:
        raise NotImplementedError

    def advance(self, memory, machine: Machine, config: Configuration,
                point: ChoicePoint, affine_choice: int, outcome: Outcome):
        return memory

    def blind_registers(self, memory) -> frozenset:
        return frozenset()


class FirstOption(Strategy):
    """Always takes the first listed option; the only strategy of a deterministic machine."""

    def decide(self, memory, machine, config, point):
        return 0, {outcome: 0 for outcome in point.classical_options[0]}


def run_deterministic(m: Machine, word: str, max_steps: int = 10_000) -> Configuration:
    """Run a machine with no branching at all (a plain 2DFA) to its halting configuration."""
    c = m.initial_configuration()
    while not m.is_halting(c.state):
        if c.steps >= max_steps:
            raise MachineError(f"no halt within {max_steps} steps")
        branches = step(m, c, word)
        if len(branches) != 1:
            raise MachineError("machine branched; it is not deterministic")
        c = branches[0].configuration
    return c


def dump_machine(m: Machine) -> str:
    """Plain structured-text listing, stable for golden-file diffs."""
    out = [
        f"machine {m.name}",
        f"alphabet {m.alphabet_size}",
        "states " + " ".join(m.states),
        f"initial {m.initial}",
        f"accept {m.accept}",
        f"reject {m.reject}",
    ]
    for reg in m.registers:
        out.append(f"register {reg.name} dim {reg.dim}")
        for name in sorted(reg.operators):
            out.append(f"  operator {name}")
            op = reg.operators[name]
            rows = op.rows if isinstance(op, AffineOperator) else op
            cells = [[f"{Fraction(x).numerator}/{Fraction(x).denominator}" for x in row] for row in rows]
            width = max(len(x) for row in cells for x in row)
            out.extend("    " + " ".join(x.rjust(width) for x in row) for row in cells)
    out.append("affine")
    for (state, symbol), options in m.affine_table.items():
        opts = " | ".join("(" + ", ".join(o) + ")" for o in options)
        role = m.roles.get((state, symbol))
        out.append(f"  {state} {symbol} : {opts}" + (f"  # {role}" if role else ""))
    out.append("classical")
    for (state, symbol, outcome), rules in m.classical_table.items():
        rhs = " | ".join(f"{nxt} {move:+d}" for nxt, move in rules)
        out.append(f"  {state} {symbol} {outcome} : {rhs}")
    return "\n".join(out) + "\n"
