"""Verifier constructors for the weak and strong protocols, plus the honest prover.

Weak protocol (one 5-state register, head never moves left):

* scanning ``¢w`` sets the register to ``(1, K, -K, 0, 0)`` with ``K`` the
  shortlex index of ``w``;
* on ``$`` the encoding ``alpha_L`` is injected into entries 4 and 5;
* an unbounded loop on ``$``: each iteration applies the loop operator for
  the prover's digit guess ``g``, which counts the second/third entries
  down by one and maps ``beta -> d*beta - g`` in entries 4/5;
* on exit with ``g = 1`` the exit operator scales the counter by ``k/2``
  and ``beta`` by ``c`` and the register is weighted once; outcome
  ``e_1`` accepts.  Exit with ``g = 0`` rejects outright.

Strong protocol: the same, plus a 2-state coin register.  Between loop
iterations the head sweeps to the opposite end-marker, the coin operator
``[[1/64, 0], [63/64, 1]]`` being applied once per cell, and the next
iteration step weights the coin: ``e_1`` rejects.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .core import AffineOperator, ProbabilityInterval, identity
from .encoding import SYMBOLS, LanguageOracle, alpha_value, shortlex_index
from .errors import UnsupportedParams
from .machine import LEFT_END, RIGHT_END, WEIGHT, Machine, Register, Strategy, validate_machine

ACCEPT, REJECT = "accept", "reject"
GUESS_ROLE, ITERATE_ROLE = "guess", "iterate"


@dataclass(frozen=True)
class ProtocolParams:
    k: int = 3                 # error bound 1/k
    r: int = 2                 # alphabet size
    strong: bool = False
    coin_base: int = 64

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 3:
            raise UnsupportedParams(f"k must be an integer >= 3, got {self.k!r}")
        if not isinstance(self.r, int) or not 2 <= self.r <= len(SYMBOLS):
            raise UnsupportedParams(f"r must be an integer in 2..{len(SYMBOLS)}, got {self.r!r}")
        if self.coin_base < 2:
            raise UnsupportedParams(f"coin base must be >= 2, got {self.coin_base}")

    @property
    def d(self) -> int:
        return self.k * self.k - 2 * self.k + 3

    @property
    def c(self) -> Fraction:
        return Fraction(self.k * self.k - 2 * self.k + 2, 2 * self.k - 2)

    @property
    def epsilon(self) -> Fraction:
        return Fraction(1, self.k)

    def rejection_probability(self, length: int) -> Fraction:
        """Per-iteration coin rejection probability ``coin_base**-(length+1)``."""
        return Fraction(1, self.coin_base ** (length + 1))


# -- operators -----------------------------------------------------------------

def _op(rows) -> AffineOperator:
    return AffineOperator(tuple(tuple(row) for row in rows))


def binary_scan_operator(b: int) -> AffineOperator:
    """``A_0`` / ``A_1``: counter ``K -> 2K + b`` in entries 2/3."""
    return _op([
        [1, 0, 0, 0, 0],
        [b, 2, 0, 0, 0],
        [-b, -1, 1, 0, 0],
        [0, 0, 0, 1, 0],
        [0, 0, 0, 0, 1],
    ])


def rary_scan_operator(b: int, r: int) -> AffineOperator:
    """Counter ``K -> r*K + (b + 1)``."""
    return _op([
        [1, 0, 0, 0, 0],
        [b + 1, r, 0, 0, 0],
        [-b - 1, 1 - r, 1, 0, 0],
        [0, 0, 0, 1, 0],
        [0, 0, 0, 0, 1],
    ])


def setup_operator(alpha: Fraction, plus_one: bool = False) -> AffineOperator:
    """Inject ``+-alpha`` into entries 4/5; ``plus_one`` also bumps the counter."""
    one = int(plus_one)
    return _op([
        [1, 0, 0, 0, 0],
        [one, 1, 0, 0, 0],
        [-one, 0, 1, 0, 0],
        [alpha, 0, 0, 1, 0],
        [-alpha, 0, 0, 0, 1],
    ])


def loop_operator(g: int, d: int = 6) -> AffineOperator:
    """One loop iteration for guess ``g``: counter down by one, ``beta -> d*beta - g``."""
    return _op([
        [1, 0, 0, 0, 0],
        [-1, 1, 0, 0, 0],
        [1, 0, 1, 0, 0],
        [-g, 0, 0, d, 0],
        [g, 0, 0, 1 - d, 1],
    ])


def exit_operator(k: int = 3) -> AffineOperator:
    c = Fraction(k * k - 2 * k + 2, 2 * k - 2)
    half = Fraction(k, 2)
    return _op([
        [1, 0, 0, 0, 0],
        [0, half, 0, 0, 0],
        [0, 1 - half, 1, 0, 0],
        [0, 0, 0, c, 0],
        [0, 0, 0, 1 - c, 1],
    ])


def coin_operator(base: int = 64) -> AffineOperator:
    q = Fraction(1, base)
    return _op([[q, 0], [1 - q, 1]])


COLLAPSE_TO_E1 = _op([[1, 1], [0, 0]])
COLLAPSE_TO_E2 = _op([[0, 0], [1, 1]])


# -- builders ------------------------------------------------------------------

def _scan_ops(params: ProtocolParams) -> dict[str, AffineOperator]:
    ops = {"I": identity(5)}
    if params.r == 2:
        ops["A0"] = binary_scan_operator(0)
        ops["A1"] = binary_scan_operator(1)
    else:
        for b in range(params.r):
            ops[f"A{b}"] = rary_scan_operator(b, params.r)
    return ops


def _start_op(params: ProtocolParams) -> str:
    # binary: A_1 on ¢ plants the leading 1 of (1w)_2; r-ary: +1 happens on $
    return "A1" if params.r == 2 else "I"


def _register_ops(L: LanguageOracle, params: ProtocolParams) -> dict[str, AffineOperator]:
    if L.alphabet_size != params.r:
        raise UnsupportedParams(f"language is {L.alphabet_size}-ary but r = {params.r}")
    if not L.exact:
        raise UnsupportedParams("building an exact machine needs a language with a support bound")
    alpha = alpha_value(L, params.d, 1).exact
    ops = _scan_ops(params)
    ops["SETUP"] = setup_operator(alpha, plus_one=params.r > 2)
    ops["LOOP0"] = loop_operator(0, params.d)
    ops["LOOP1"] = loop_operator(1, params.d)
    ops["EXIT"] = exit_operator(params.k)
    return ops


def _exit_rule(g: int) -> tuple[str, int]:
    return ("exit", 0) if g else (REJECT, 0)


def build_weak(L: LanguageOracle, params: ProtocolParams = ProtocolParams()) -> Machine:
    if params.strong:
        raise UnsupportedParams("build_weak needs strong = False")
    ops = _register_ops(L, params)
    digits = SYMBOLS[: params.r]
    affine, classical, roles = {}, {}, {}

    def rule(state, symbol, option, outcomes_to_rules):
        affine[(state, symbol)] = (option,)
        for outcome, rules in outcomes_to_rules.items():
            classical[(state, symbol, outcome)] = tuple(rules)

    rule("scan", LEFT_END, (_start_op(params),), {(0,): [("scan", 1)]})
    for b in digits:
        rule("scan", b, (f"A{SYMBOLS.index(b)}",), {(0,): [("scan", 1)]})
    rule("scan", RIGHT_END, ("SETUP",), {(0,): [("loop0", 0), ("loop1", 0)]})
    roles[("scan", RIGHT_END)] = GUESS_ROLE
    for g in (0, 1):
        rule(f"loop{g}", RIGHT_END, (f"LOOP{g}",),
             {(0,): [("loop0", 0), ("loop1", 0), _exit_rule(g)]})
        roles[(f"loop{g}", RIGHT_END)] = ITERATE_ROLE
    rule("exit", RIGHT_END, ("EXIT",), {(0,): [("weigh", 0)]})
    rule("weigh", RIGHT_END, (WEIGHT,),
         {(j,): [(ACCEPT if j == 1 else REJECT, 0)] for j in range(1, 6)})

    states = ("scan", "loop0", "loop1", "exit", "weigh", ACCEPT, REJECT)
    return validate_machine(Machine(
        states, "scan", ACCEPT, REJECT, params.r, (Register("R1", 5, ops),),
        affine, classical, roles, name=f"weak-k{params.k}-r{params.r}-{L.name}",
    ))


def build_strong(L: LanguageOracle, params: ProtocolParams = ProtocolParams(strong=True)) -> Machine:
    if not params.strong:
        raise UnsupportedParams("build_strong needs strong = True")
    ops = _register_ops(L, params)
    coin = coin_operator(params.coin_base)
    coin_ops = {
        "I": identity(2),
        "C": coin,
        # reset to e_1, then the end-marker's and the first cell's coin applications
        "C2R": coin @ coin @ COLLAPSE_TO_E1,
        "E2": COLLAPSE_TO_E2,
    }
    digits = SYMBOLS[: params.r]
    affine, classical, roles = {}, {}, {}

    def rule(state, symbol, option, outcomes_to_rules):
        affine[(state, symbol)] = (option,)
        for outcome, rules in outcomes_to_rules.items():
            classical[(state, symbol, outcome)] = tuple(rules)

    empty_verdict = ACCEPT if L("") else REJECT
    rule("scan", LEFT_END, (_start_op(params), "I"), {(0, 0): [("first", 1)]})
    rule("first", RIGHT_END, ("I", "I"), {(0, 0): [(empty_verdict, 0)]})
    for b in digits:
        a = f"A{SYMBOLS.index(b)}"
        rule("first", b, (a, "I"), {(0, 0): [("scan", 1)]})
        rule("scan", b, (a, "I"), {(0, 0): [("scan", 1)]})
    # E2 makes the first iteration's coin weighting a certain survival
    rule("scan", RIGHT_END, ("SETUP", "E2"), {(0, 0): [("right0", 0), ("right1", 0)]})
    roles[("scan", RIGHT_END)] = GUESS_ROLE

    for g in (0, 1):
        for side, marker, away, first_away in (("right", RIGHT_END, -1, "lfirst"),
                                              ("left", LEFT_END, 1, "rfirst")):
            state = f"{side}{g}"
            rule(state, marker, (f"LOOP{g}", WEIGHT), {
                (0, 1): [(REJECT, 0)],
                (0, 2): [(f"{first_away}0", away), (f"{first_away}1", away), _exit_rule(g)],
            })
            roles[(state, marker)] = ITERATE_ROLE
            for b in digits:
                rule(state, b, ("I", "C"), {(0, 0): [(state, -away)]})
                rule(f"{side[0]}first{g}", b, ("I", "C2R"), {(0, 0): [(state, -away)]})
    for marker in (LEFT_END, RIGHT_END):
        rule("exit", marker, ("EXIT", "I"), {(0, 0): [("weigh", 0)]})
        rule("weigh", marker, (WEIGHT, "I"),
             {(j, 0): [(ACCEPT if j == 1 else REJECT, 0)] for j in range(1, 6)})

    states = ("scan", "first", "right0", "right1", "left0", "left1", "rfirst0", "rfirst1",
              "lfirst0", "lfirst1", "exit", "weigh", ACCEPT, REJECT)
    return validate_machine(Machine(
        states, "scan", ACCEPT, REJECT, params.r,
        (Register("R1", 5, ops), Register("coin", 2, coin_ops)),
        affine, classical, roles, name=f"strong-k{params.k}-r{params.r}-{L.name}",
    ))


def build(L: LanguageOracle, params: ProtocolParams) -> Machine:
    return build_strong(L, params) if params.strong else build_weak(L, params)


# -- provers -------------------------------------------------------------------

@dataclass(frozen=True)
class ProtocolStrategy(Strategy):
    """Prover for the protocol machines: digit guesses plus an exit iteration.

    ``guesses[n-1]`` is the guess used in iteration ``n``; iterations past
    the end of ``guesses`` use ``tail_guess``.  ``exit_at=None`` never exits.
    Memory is the number of iterations completed so far.
    """

    guesses: tuple[int, ...] = ()
    exit_at: Optional[int] = None
    tail_guess: int = 0

    def __post_init__(self):
        object.__setattr__(self, "guesses", tuple(int(g) for g in self.guesses))
        if any(g not in (0, 1) for g in self.guesses + (self.tail_guess,)):
            raise ValueError("guesses must be 0 or 1")
        if self.exit_at is not None:
            if self.exit_at < 1:
                raise ValueError("exit iteration must be >= 1")
            if len(self.guesses) < self.exit_at:
                raise ValueError(f"need {self.exit_at} guesses to exit at iteration {self.exit_at}")

    def guess(self, n: int) -> int:
        return self.guesses[n - 1] if n <= len(self.guesses) else self.tail_guess

    @property
    def exit_guess(self) -> Optional[int]:
        return None if self.exit_at is None else self.guesses[self.exit_at - 1]

    def initial_memory(self):
        return 0

    def decide(self, memory, machine, config, point):
        role = machine.roles.get((point.state, point.symbol))
        if role == GUESS_ROLE:
            choice = self.guess(1)
        elif role == ITERATE_ROLE:
            n = memory + 1
            choice = 2 if self.exit_at == n else self.guess(n + 1)
        else:
            choice = 0
        rules = point.classical_options[0]
        return 0, {outcome: (choice if len(opts) > 1 else 0) for outcome, opts in rules.items()}

    def advance(self, memory, machine, config, point, affine_choice, outcome):
        if machine.roles.get((point.state, point.symbol)) != ITERATE_ROLE:
            return memory
        if self.exit_at is None:
            # every later decision is the tail guess, so the memory can saturate
            return min(memory + 1, len(self.guesses))
        return memory + 1

    def blind_registers(self, memory):
        # never exiting means the main register is never weighted
        return frozenset({0}) if self.exit_at is None else frozenset()


def honest_strategy(L: LanguageOracle, w: str, params: ProtocolParams = ProtocolParams()) -> ProtocolStrategy:
    """True digits ``G_L(1..K)`` and exit at iteration ``K``."""
    K = shortlex_index(w, params.r)
    return ProtocolStrategy(tuple(L.digit(i) for i in range(1, K + 1)), exit_at=K)


def stall_strategy(tail_guess: int = 0) -> ProtocolStrategy:
    return ProtocolStrategy((), None, tail_guess)


def closed_form_acceptance(L: LanguageOracle, w: str, params: ProtocolParams = ProtocolParams(),
                           strategy: Optional[ProtocolStrategy] = None,
                           depth: Optional[int] = None) -> Union[Fraction, ProbabilityInterval]:
    """Honest-prover acceptance without simulation.

    Weak: ``1 / (1 + 2c * alpha_L[K+1])`` for members, 0 otherwise.  Strong
    mode multiplies by the survival probability ``(1-p)**(K-1)``; the empty
    word is decided deterministically there.
    """
    K = shortlex_index(w, params.r)
    if strategy is not None and strategy != honest_strategy(L, w, params):
        raise ValueError("closed form is only defined for the honest strategy")
    if not L(w):
        return Fraction(0)
    if params.strong and w == "":
        return Fraction(1)
    tail = alpha_value(L, params.d, K + 1, depth)
    survive = (1 - params.rejection_probability(len(w))) ** (K - 1) if params.strong else Fraction(1)
    if tail.exact is not None:
        return survive / (1 + 2 * params.c * tail.exact)
    lo = survive / (1 + 2 * params.c * tail.value.hi)
    hi = survive / (1 + 2 * params.c * tail.value.lo)
    return ProbabilityInterval(lo, hi)


def worst_case_step_bound(length: int) -> int:
    """Upper bound ``2**(l+1) + l + 3`` on the honest accepting branch length."""
    return 2 ** (length + 1) + length + 3


def honest_step_count(w: str, params: ProtocolParams = ProtocolParams()) -> int:
    """Length of the weak honest branch: ``(|w| + 2) + K + 2``."""
    return len(w) + 2 + shortlex_index(w, params.r) + 2
