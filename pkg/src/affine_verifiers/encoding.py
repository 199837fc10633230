"""Shortlex indexing, the base-``d`` language encoding and digit guessing.

A language ``L`` over ``{0, ..., r-1}`` is encoded as the real number

    alpha_L = sum_i G_L(i-th string in shortlex order) / d**i

and ``alpha_L[j]`` denotes the tail that starts at digit ``j``.  With a
finite support bound the sum is a finite rational; otherwise it is
truncated and carried as a certified interval.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence, Union

from .core import Interval, ProbabilityInterval
from .errors import InvalidSymbol, NotDiverged

SYMBOLS = "0123456789abcdefghijklmnopqrstuvwxyz"
MAX_ALPHABET = len(SYMBOLS)


def _symbol_values(w: str, r: int) -> list[int]:
    if not 2 <= r <= MAX_ALPHABET:
        raise InvalidSymbol(f"alphabet size {r} outside 2..{MAX_ALPHABET}")
    values = []
    for pos, ch in enumerate(w):
        b = SYMBOLS.find(ch)
        if b < 0 or b >= r:
            raise InvalidSymbol(f"symbol {ch!r} at position {pos} is not in the {r}-ary alphabet")
        values.append(b)
    return values


def shortlex_index(w: str, r: int = 2) -> int:
    """1-based position of ``w`` in shortlex order (``(1w)_2`` when ``r == 2``)."""
    value = 0
    for b in _symbol_values(w, r):
        value = value * r + b
    shorter = (r ** len(w) - 1) // (r - 1)
    return value + shorter + 1


def shortlex_string(i: int, r: int = 2) -> str:
    if i < 1:
        raise ValueError(f"shortlex positions start at 1, got {i}")
    if not 2 <= r <= MAX_ALPHABET:
        raise InvalidSymbol(f"alphabet size {r} outside 2..{MAX_ALPHABET}")
    length, shorter = 0, 0
    while shorter + r ** length < i:
        shorter += r ** length
        length += 1
    offset = i - 1 - shorter
    digits = []
    for _ in range(length):
        offset, b = divmod(offset, r)
        digits.append(SYMBOLS[b])
    return "".join(reversed(digits))


def strings_up_to(n: int, r: int = 2) -> list[str]:
    """All strings of length ``<= n`` in shortlex order."""
    return [shortlex_string(i, r) for i in range(1, (r ** (n + 1) - 1) // (r - 1) + 1)]


@dataclass(frozen=True, eq=False)
class LanguageOracle:
    """Membership oracle ``G_L``.

    ``membership`` must be a pure function.  When ``support_bound`` is set,
    strings longer than it are treated as non-members regardless of what
    ``membership`` says, so that ``alpha_L`` is an exact finite sum.
    """

    alphabet_size: int
    membership: Callable[[str], bool]
    support_bound: Optional[int] = None
    name: str = "L"
    _alpha_cache: dict = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def finite(cls, members: Iterable[str], alphabet_size: int = 2,
               support_bound: Optional[int] = None, name: str = "L") -> "LanguageOracle":
        members = frozenset(members)
        for w in members:
            _symbol_values(w, alphabet_size)
        longest = max((len(w) for w in members), default=0)
        if support_bound is None:
            support_bound = longest
        elif support_bound < longest:
            raise ValueError(f"member of length {longest} exceeds support bound {support_bound}")
        return cls(alphabet_size, members.__contains__, support_bound, name)

    @property
    def exact(self) -> bool:
        return self.support_bound is not None

    @property
    def horizon(self) -> Optional[int]:
        """Shortlex index of the last string within the support bound."""
        if self.support_bound is None:
            return None
        r = self.alphabet_size
        return (r ** (self.support_bound + 1) - 1) // (r - 1)

    def __call__(self, w: str) -> int:
        _symbol_values(w, self.alphabet_size)
        if self.support_bound is not None and len(w) > self.support_bound:
            return 0
        return int(bool(self.membership(w)))

    def digit(self, i: int) -> int:
        """``G_L`` of the ``i``-th string in shortlex order."""
        horizon = self.horizon
        if horizon is not None and i > horizon:
            return 0
        return self(shortlex_string(i, self.alphabet_size))

    def members(self) -> list[str]:
        if self.horizon is None:
            raise ValueError("an unbounded language cannot list its members")
        return [shortlex_string(i, self.alphabet_size)
                for i in range(1, self.horizon + 1) if self.digit(i)]


@dataclass(frozen=True)
class AlphaValue:
    value: ProbabilityInterval
    base: int
    start_index: int
    truncation_depth: Optional[int] = None    # None in exact mode

    @property
    def exact(self) -> Optional[Fraction]:
        return self.value.lo if self.value.is_point else None


def alpha_value(L: LanguageOracle, d: int, j: int = 1, depth: Optional[int] = None) -> AlphaValue:
    """``alpha_L[j]`` in base ``d``: exact with a support bound, else an interval."""
    if d < 3 or j < 1:
        raise ValueError(f"need d >= 3 and j >= 1, got d={d}, j={j}")
    if L.exact:
        key = (d, j)
        if key not in L._alpha_cache:
            total = Fraction(0)
            for i in range(L.horizon, j - 1, -1):      # Horner from the last digit
                total = (total + L.digit(i)) / d
            L._alpha_cache[key] = total
        return AlphaValue(ProbabilityInterval.point(L._alpha_cache[key]), d, j)
    if depth is None or depth < 0:
        raise ValueError("an unbounded language needs a truncation depth >= 0")
    partial = Fraction(0)
    for i in range(j + depth - 1, j - 1, -1):
        partial = (partial + L.digit(i)) / d
    tail = Fraction(1, (d - 1) * d ** depth)
    return AlphaValue(ProbabilityInterval(partial, partial + tail), d, j, depth)


def alpha_shift(a: AlphaValue, digit: int) -> AlphaValue:
    """``alpha_L[j+1] = d * alpha_L[j] - G_L(j)``."""
    d = a.base
    cap = Interval(0, Fraction(1, d - 1))
    shifted = a.value * d - digit
    try:
        shifted = shifted.intersect(cap)
    except ValueError:
        raise ValueError(f"digit {digit} is inconsistent with alpha value {a.value}") from None
    if a.truncation_depth is None and not shifted.is_point:
        raise ValueError(f"digit {digit} is inconsistent with alpha value {a.value}")
    depth = None if a.truncation_depth is None else max(a.truncation_depth - 1, 0)
    return AlphaValue(ProbabilityInterval(shifted.lo, shifted.hi), d, a.start_index + 1, depth)


Number = Union[Fraction, Interval]


@dataclass(frozen=True)
class BetaTrace:
    """Verifier-side reconstruction ``beta <- d * beta - g`` of the encoding.

    ``index`` is the digit position that ``current`` stands for: while all
    guesses are right, ``current == alpha_L[index]``.  ``error`` is the
    integer ``current - alpha_L[index]``, built from the guess mistakes.
    """

    current: Number
    index: int = 1
    guesses: tuple[int, ...] = ()
    first_wrong_index: Optional[int] = None
    error: int = 0

    @classmethod
    def start(cls, alpha: AlphaValue) -> "BetaTrace":
        current = alpha.exact if alpha.exact is not None else Interval(alpha.value.lo, alpha.value.hi)
        return cls(current, alpha.start_index)


def beta_step(t: BetaTrace, g: int, d: int, true_digit: int) -> BetaTrace:
    wrong = t.first_wrong_index
    if wrong is None and g != true_digit:
        wrong = t.index
    return BetaTrace(
        current=t.current * d - g,
        index=t.index + 1,
        guesses=t.guesses + (g,),
        first_wrong_index=wrong,
        error=t.error * d + (true_digit - g),
    )


def floor_after(steps: int, d: int) -> Fraction:
    """Lower bound on ``|beta|`` ``steps`` iterations after the first wrong step."""
    b = Fraction(d - 2, d - 1)
    for _ in range(steps):
        b = d * b - 1
    return b


def divergence_floor(t: BetaTrace, d: int) -> Fraction:
    if t.first_wrong_index is None:
        raise NotDiverged("every guess so far matches the true digits")
    return floor_after(t.index - t.first_wrong_index - 1, d)


def run_beta(L: LanguageOracle, guesses: Sequence[int], d: int,
             depth: Optional[int] = None) -> BetaTrace:
    """Start from ``alpha_L[1]`` and apply ``guesses`` in order."""
    t = BetaTrace.start(alpha_value(L, d, 1, depth))
    for g in guesses:
        t = beta_step(t, g, d, L.digit(t.index))
    return t
