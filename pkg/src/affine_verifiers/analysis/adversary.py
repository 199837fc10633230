"""Certified maximum acceptance over every prover strategy of a protocol machine.

A protocol strategy that accepts with positive probability is determined by
its exit iteration ``i`` and guesses ``g_1..g_i`` with ``g_i = 1``; its
acceptance probability is

    f(i) / (1 + k*|K - i| + 2c*|beta_{i+1}|),    f(i) = (1-p)**(i-1) (strong) or 1

with ``beta_{i+1} = alpha_L[i+1] + error``, ``error`` the integer left by
wrong guesses.  Branch and bound over guess prefixes: once a guess is wrong,
``|beta|`` is bounded below by a floor that only grows, and exits far from
``K`` are dominated by ``1 / (1 + k*|K - i|)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Optional

from ..core import Interval, ProbabilityInterval, abs_bounds
from ..encoding import BetaTrace, LanguageOracle, alpha_value, beta_step, floor_after, shortlex_index
from ..errors import InconclusiveAtDepth, UnsupportedParams
from ..machine import Machine
from ..protocols import ProtocolParams, ProtocolStrategy, stall_strategy
from .evaluation import evaluate_strategy


@dataclass(frozen=True)
class AdversaryBound:
    max_accept: ProbabilityInterval
    witness: ProtocolStrategy
    search_frontier: int           # largest exit iteration examined
    explored: int = 0
    pruned: int = 0
    global_bound: bool = True      # False when a horizon cap restricted the search


def _survival(params: ProtocolParams, length: int, i: int) -> Fraction:
    if not params.strong:
        return Fraction(1)
    return (1 - params.rejection_probability(length)) ** (i - 1)


def exit_acceptance(params: ProtocolParams, K: int, length: int, i: int, beta_abs) -> Fraction:
    """Acceptance of an exit at iteration ``i`` (with ``g_i = 1``) given ``|beta_{i+1}|``."""
    return _survival(params, length, i) / (1 + params.k * abs(K - i) + 2 * params.c * beta_abs)


def max_acceptance(machine: Optional[Machine], L: LanguageOracle, w: str,
                   params: ProtocolParams = ProtocolParams(), *,
                   horizon: Optional[int] = None, depth: Optional[int] = None,
                   threshold: Optional[Fraction] = None) -> AdversaryBound:
    """Supremum of ``Acc`` over all strategies, certified by branch and bound.

    With ``horizon`` the search is restricted to exit iterations ``<= horizon``
    (no tail argument).  An unbounded ``L`` is handled with intervals at
    truncation ``depth``; ``threshold`` makes the call raise
    :class:`InconclusiveAtDepth` when the interval straddles that value.
    When ``machine`` is given in exact mode, the witness is re-checked by
    simulation.
    """
    if L.alphabet_size != params.r:
        raise UnsupportedParams(f"language is {L.alphabet_size}-ary but r = {params.r}")
    K = shortlex_index(w, params.r)
    d, k, c = params.d, params.k, params.c

    if params.strong and w == "":
        value = Fraction(L(""))
        return AdversaryBound(ProbabilityInterval.point(value), stall_strategy(), 0)

    alphas: dict[int, object] = {}

    def alpha_at(j):
        if j not in alphas:
            a = alpha_value(L, d, j, depth)
            alphas[j] = a.exact if a.exact is not None else Interval(a.value.lo, a.value.hi)
        return alphas[j]

    def acceptance_of(trace: BetaTrace) -> tuple[Fraction, Fraction]:
        i = len(trace.guesses)
        lo_abs, hi_abs = abs_bounds(alpha_at(i + 1) + trace.error)
        return (exit_acceptance(params, K, len(w), i, hi_abs),
                exit_acceptance(params, K, len(w), i, lo_abs))

    root = BetaTrace(alpha_at(1), 1)
    best_lo, best_hi, witness = Fraction(0), Fraction(0), stall_strategy()

    if horizon is None:
        # incumbent: true digits up to K-1, then g_K = 1 (the honest prover on members)
        t = root
        for j in range(1, K):
            t = beta_step(t, L.digit(j), d, L.digit(j))
        t = beta_step(t, 1, d, L.digit(K))
        best_lo, best_hi = acceptance_of(t)
        witness = ProtocolStrategy(t.guesses, exit_at=K)
        # exits with |K - i| >= delta accept with probability <= 1/(1 + k*delta) <= incumbent
        delta = max(1, math.ceil((1 / best_lo - 1) / k))
        max_exit = K + delta - 1
    else:
        max_exit = horizon

    def subtree_bound(t: BetaTrace) -> Fraction:
        """Upper bound on any exit at iteration >= len(t.guesses) below ``t``."""
        i0 = len(t.guesses)
        bound = Fraction(0)
        for i in range(max(i0, 1), max_exit + 1):
            if t.first_wrong_index is None:
                floor = Fraction(0)
            else:
                floor = floor_after(t.index - t.first_wrong_index - 1 + (i - i0), d)
            bound = max(bound, exit_acceptance(params, K, len(w), i, floor))
        return bound

    explored = pruned = 0
    stack = [root]
    while stack:
        t = stack.pop()
        explored += 1
        i = len(t.guesses)
        if i >= 1 and t.guesses[-1] == 1:
            lo, hi = acceptance_of(t)
            best_hi = max(best_hi, hi)
            if lo > best_lo:
                best_lo, witness = lo, ProtocolStrategy(t.guesses, exit_at=i)
        if i >= max_exit:
            continue
        true_digit = L.digit(i + 1)
        children = [beta_step(t, g, d, true_digit) for g in (1 - true_digit, true_digit)]
        for child in children:          # the correct guess ends on top of the stack
            if subtree_bound(child) <= best_lo:
                pruned += 1
            else:
                stack.append(child)

    if best_hi < best_lo:
        best_hi = best_lo
    result = AdversaryBound(ProbabilityInterval(best_lo, best_hi), witness, max_exit,
                            explored, pruned, horizon is None)
    if threshold is not None and best_lo <= threshold < best_hi:
        raise InconclusiveAtDepth(
            f"max acceptance in [{best_lo}, {best_hi}] straddles {threshold}; increase depth",
            result.max_accept)
    if machine is not None and L.exact and witness.exit_at is not None:
        simulated = evaluate_strategy(machine, w, witness).accept.lo
        if simulated != best_lo:
            raise RuntimeError(f"witness simulates to {simulated}, search claimed {best_lo}")
    return result


def brute_force_acceptance(machine: Machine, w: str, horizon: int) -> list[tuple[Fraction, ProtocolStrategy]]:
    """Simulate every strategy exiting at iteration ``<= horizon``; no pruning.

    Returns, for each ``H`` in ``0..horizon``, the best ``(acceptance, strategy)``
    among strategies that exit by iteration ``H`` (``H = 0``: never exit).
    """
    never = stall_strategy()
    best = [(Fraction(0), never)]
    for i in range(1, horizon + 1):
        value, strategy = best[-1]
        for guesses in product((0, 1), repeat=i):
            s = ProtocolStrategy(guesses, exit_at=i)
            acc = evaluate_strategy(machine, w, s).accept.lo
            if acc > value:
                value, strategy = acc, s
        best.append((value, strategy))
    return best
