"""Exact linear algebra for affine registers.

An affine state is a rational vector whose entries sum to 1 (negative
entries allowed).  An affine operator is a square rational matrix whose
columns each sum to 1, so it maps affine states to affine states.  The
weighting operator observes basis state ``j`` with probability
``|v_j| / |v|`` under the l1 norm and collapses the register to ``e_j``.

Everything is an exact :class:`fractions.Fraction`; there is no floating
point anywhere in this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ColumnSumNotOne, DimensionMismatch, SumNotOne

Rational = Fraction


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and ``"num/den"`` strings; reject floats."""
    if isinstance(x, float):
        raise TypeError("floats are not exact; pass a Fraction or 'num/den' string")
    return Fraction(x)


# -- intervals ---------------------------------------------------------------

@dataclass(frozen=True)
class Interval:
    """Closed rational interval ``[lo, hi]``; a point when ``lo == hi``."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", as_rational(self.lo))
        object.__setattr__(self, "hi", as_rational(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x):
        x = as_rational(x)
        return cls(x, x)

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def __add__(self, other):
        if isinstance(other, Interval):
            return Interval(self.lo + other.lo, self.hi + other.hi)
        other = as_rational(other)
        return Interval(self.lo + other, self.hi + other)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Interval):
            products = [a * b for a in (self.lo, self.hi) for b in (other.lo, other.hi)]
            return Interval(min(products), max(products))
        other = as_rational(other)
        if other >= 0:
            return Interval(self.lo * other, self.hi * other)
        return Interval(self.hi * other, self.lo * other)

    __rmul__ = __mul__

    def abs_bounds(self) -> tuple[Fraction, Fraction]:
        """Return ``(min |x|, max |x|)`` over the interval."""
        hi = max(abs(self.lo), abs(self.hi))
        if self.lo <= 0 <= self.hi:
            return Fraction(0), hi
        return min(abs(self.lo), abs(self.hi)), hi

    def intersect(self, other: "Interval") -> "Interval":
        return Interval(max(self.lo, other.lo), min(self.hi, other.hi))

    def __str__(self):
        if self.is_point:
            return str(self.lo)
        return f"[{self.lo}, {self.hi}]"


class ProbabilityInterval(Interval):
    """An :class:`Interval` constrained to ``0 <= lo <= hi <= 1``."""

    def __post_init__(self):
        super().__post_init__()
        if self.lo < 0 or self.hi > 1:
            raise ValueError(f"[{self.lo}, {self.hi}] is not inside [0, 1]")


def abs_bounds(x) -> tuple[Fraction, Fraction]:
    """``(min |x|, max |x|)`` for a Fraction or an :class:`Interval`."""
    if isinstance(x, Interval):
        return x.abs_bounds()
    return abs(x), abs(x)


# -- states and operators ----------------------------------------------------

@dataclass(frozen=True)
class AffineState:
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        entries = tuple(as_rational(x) for x in self.entries)
        if not entries:
            raise DimensionMismatch("an affine state needs dimension >= 1")
        total = sum(entries)
        if total != 1:
            raise SumNotOne(total)
        object.__setattr__(self, "entries", entries)

    @classmethod
    def _trusted(cls, entries: tuple[Fraction, ...]) -> "AffineState":
        # Skips validation; callers guarantee the sum-to-one invariant.
        obj = object.__new__(cls)
        object.__setattr__(obj, "entries", entries)
        return obj

    def __hash__(self):
        # configurations are hashed constantly during graph building; Fraction hashing is slow
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash(self.entries)
            object.__setattr__(self, "_hash", h)
        return h

    @property
    def dim(self) -> int:
        return len(self.entries)

    @property
    def norm(self) -> Fraction:
        return sum(abs(x) for x in self.entries)

    def __getitem__(self, j: int) -> Fraction:
        return self.entries[j]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __str__(self):
        return "(" + ", ".join(str(x) for x in self.entries) + ")"


def basis(m: int, j: int) -> AffineState:
    """The basis state ``e_j`` (1-based) of an ``m``-state register."""
    if not 1 <= j <= m:
        raise DimensionMismatch(f"basis index {j} outside 1..{m}")
    return AffineState._trusted(tuple(Fraction(int(i == j - 1)) for i in range(m)))


def validate_state(v: Iterable) -> AffineState:
    return AffineState(tuple(v))


@dataclass(frozen=True)
class AffineOperator:
    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(as_rational(x) for x in row) for row in self.rows)
        m = len(rows)
        if m == 0 or any(len(row) != m for row in rows):
            raise DimensionMismatch("an affine operator must be a non-empty square matrix")
        for i in range(m):
            col = sum(row[i] for row in rows)
            if col != 1:
                raise ColumnSumNotOne(i + 1, col)
        object.__setattr__(self, "rows", rows)
        # sparse rows for apply(); protocol matrices are mostly zeros
        object.__setattr__(
            self, "_sparse", tuple(tuple((i, a) for i, a in enumerate(row) if a) for row in rows)
        )

    @property
    def dim(self) -> int:
        return len(self.rows)

    def column(self, i: int) -> tuple[Fraction, ...]:
        """Column ``i`` (1-based)."""
        return tuple(row[i - 1] for row in self.rows)

    def __matmul__(self, other: "AffineOperator") -> "AffineOperator":
        if other.dim != self.dim:
            raise DimensionMismatch(f"cannot compose {self.dim}x{self.dim} with {other.dim}x{other.dim}")
        m = self.dim
        cols = [other.column(j + 1) for j in range(m)]
        return AffineOperator(tuple(
            tuple(sum((a * col[i] for i, a in sparse), Fraction(0)) for col in cols)
            for sparse in self._sparse
        ))

    def __pow__(self, n: int) -> "AffineOperator":
        if n < 0:
            raise ValueError("negative powers are not supported")
        result = identity(self.dim)
        for _ in range(n):
            result = self @ result
        return result

    def __str__(self):
        width = max(len(str(x)) for row in self.rows for x in row)
        return "\n".join(" ".join(str(x).rjust(width) for x in row) for row in self.rows)


def identity(m: int) -> AffineOperator:
    return AffineOperator(tuple(tuple(int(i == j) for j in range(m)) for i in range(m)))


def validate_operator(matrix: Sequence[Sequence]) -> AffineOperator:
    """Check that every column has plain (signed) sum exactly 1."""
    return AffineOperator(tuple(tuple(row) for row in matrix))


def apply(op: AffineOperator, v: AffineState) -> AffineState:
    if op.dim != v.dim:
        raise DimensionMismatch(f"operator is {op.dim}x{op.dim}, state has dimension {v.dim}")
    entries = v.entries
    return AffineState._trusted(tuple(
        sum((a * entries[i] for i, a in sparse), Fraction(0)) for sparse in op._sparse
    ))


@dataclass(frozen=True)
class WeightingOutcome:
    index: int            # 1-based basis index
    probability: Fraction
    post_state: AffineState


def weight(v: AffineState) -> list[WeightingOutcome]:
    """Weight ``v``: one outcome per nonzero entry, in index order."""
    norm = v.norm
    return [
        WeightingOutcome(j + 1, abs(x) / norm, basis(v.dim, j + 1))
        for j, x in enumerate(v.entries)
        if x != 0
    ]
