"""Exact acceptance/rejection/running time of a machine under a fixed strategy.

The computation tree is folded into a finite graph of configurations
(registers the strategy declares blind are dropped from identity), and the
graph is solved as an absorbing Markov chain over exact rationals.  Cycles
are closed in exact form, which is the geometric-series summation of the
infinitely many stalling branches.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Union

import networkx as nx

from ..core import AffineState, ProbabilityInterval
from ..errors import StrategyDoesNotClose
from ..machine import Configuration, Machine, Strategy, enumerate_choices, step, tape

ACCEPT_SINK = ("<accept>",)
REJECT_SINK = ("<reject>",)
DEFAULT_NODE_CAP = 200_000

Steps = Union[Fraction, float]         # float only for math.inf


def node_key(config: Configuration, memory, blind: frozenset):
    regs = tuple(None if i in blind else v for i, v in enumerate(config.registers))
    return (config.state, config.head, memory, regs)


def successors(machine: Machine, word: str, strategy: Strategy, config: Configuration, memory):
    """``[(probability, outcome, child configuration, child memory)]`` for one step."""
    point = enumerate_choices(machine, config, word)
    affine_choice, classical = strategy.decide(memory, machine, config, point)
    out = []
    for branch in step(machine, config, word, affine_choice, classical):
        child_memory = strategy.advance(memory, machine, config, point, affine_choice, branch.outcome)
        out.append((branch.probability, branch.outcome, branch.configuration, child_memory))
    return out


@dataclass
class ComputationGraph:
    root: tuple
    edges: dict            # key -> {child key: probability}
    configs: dict          # key -> representative Configuration

    @property
    def size(self) -> int:
        return len(self.edges)


def build_graph(machine: Machine, word: str, strategy: Strategy,
                max_nodes: int = DEFAULT_NODE_CAP) -> ComputationGraph:
    tape(word)
    start = machine.initial_configuration()
    memory = strategy.initial_memory()

    def key_of(config, mem):
        if config.state == machine.accept:
            return ACCEPT_SINK
        if config.state == machine.reject:
            return REJECT_SINK
        return node_key(config, mem, strategy.blind_registers(mem))

    root = key_of(start, memory)
    edges, configs = {}, {}
    queue = deque([(root, start, memory)])
    seen = {root}
    while queue:
        key, config, mem = queue.popleft()
        if key in (ACCEPT_SINK, REJECT_SINK):
            continue
        if len(edges) >= max_nodes:
            raise StrategyDoesNotClose(
                f"more than {max_nodes} distinct configurations; the strategy may never "
                f"halt without declaring its unobserved registers blind")
        configs[key] = config
        out = edges[key] = {}
        for p, _, child, child_mem in successors(machine, word, strategy, config, mem):
            child_key = key_of(child, child_mem)
            out[child_key] = out.get(child_key, Fraction(0)) + p
            if child_key not in seen:
                seen.add(child_key)
                queue.append((child_key, child, child_mem))
    return ComputationGraph(root, edges, configs)


def _gauss_solve(matrix: list[list[Fraction]], rhs: list[list[Fraction]]) -> list[list[Fraction]]:
    """Solve ``matrix @ X = rhs`` for several right-hand sides at once."""
    n = len(rhs)
    width = len(rhs[0]) if rhs else 0
    a = [row[:] + b[:] for row, b in zip(matrix, rhs)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[pivot] = a[pivot], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[r][n:n + width] for r in range(n)]


def _live_nodes(graph: ComputationGraph) -> set:
    """Nodes from which a halting sink is reachable."""
    reverse: dict = {}
    for u, out in graph.edges.items():
        for v in out:
            reverse.setdefault(v, []).append(u)
    live, queue = set(), deque([ACCEPT_SINK, REJECT_SINK])
    while queue:
        v = queue.popleft()
        for u in reverse.get(v, ()):
            if u not in live:
                live.add(u)
                queue.append(u)
    return live


def solve_chain(graph: ComputationGraph, columns: list[tuple[dict, Fraction]],
                live: Optional[set] = None) -> list[dict]:
    """Solve ``x_v = cost + sum_u p_vu x_u`` over live nodes, for each ``(sink values, cost)``.

    Dead nodes (no path to a sink) get 0.  Strongly connected components are
    processed children-first, so only genuine cycles need a linear solve.
    """
    if live is None:
        live = _live_nodes(graph)
    g = nx.DiGraph()
    g.add_nodes_from(graph.edges)
    for u, out in graph.edges.items():
        g.add_edges_from((u, v) for v in out if v in graph.edges)
    condensed = nx.condensation(g)
    zero = tuple(Fraction(0) for _ in columns)
    costs = tuple(cost for _, cost in columns)
    values = {sink: tuple(sinks.get(sink, Fraction(0)) for sinks, _ in columns)
              for sink in (ACCEPT_SINK, REJECT_SINK)}
    for comp in reversed(list(nx.topological_sort(condensed))):
        members = [v for v in condensed.nodes[comp]["members"] if v in live]
        for v in condensed.nodes[comp]["members"]:
            if v not in live:
                values[v] = zero
        if not members:
            continue
        if len(members) == 1 and members[0] not in graph.edges[members[0]]:
            v = members[0]
            acc = list(costs)
            for u, p in graph.edges[v].items():
                acc = [a + p * x for a, x in zip(acc, values[u])]
            values[v] = tuple(acc)
            continue
        index = {v: i for i, v in enumerate(members)}
        n = len(members)
        matrix = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        rhs = []
        for i, v in enumerate(members):
            b = list(costs)
            for u, p in graph.edges[v].items():
                if u in index:
                    matrix[i][index[u]] -= p
                else:
                    b = [a + p * x for a, x in zip(b, values[u])]
            rhs.append(b)
        for v, x in zip(members, _gauss_solve(matrix, rhs)):
            values[v] = tuple(x)
    return [{v: x[i] for v, x in values.items()} for i in range(len(columns))]


@dataclass(frozen=True)
class StrategyOutcome:
    accept: ProbabilityInterval
    reject: ProbabilityInterval
    nonhalt: ProbabilityInterval
    expected_steps: Steps
    halting_certified: bool
    nodes: int = 0


def evaluate_graph(graph: ComputationGraph) -> StrategyOutcome:
    root = graph.root
    if root == ACCEPT_SINK or root == REJECT_SINK:
        acc = Fraction(int(root == ACCEPT_SINK))
        point = ProbabilityInterval.point
        return StrategyOutcome(point(acc), point(1 - acc), point(0), Fraction(0), True, 0)
    one, zero = Fraction(1), Fraction(0)
    acc, rej, steps = (values[root] for values in solve_chain(graph, [
        ({ACCEPT_SINK: one}, zero), ({REJECT_SINK: one}, zero), ({}, one)]))
    nonhalt = 1 - acc - rej
    if nonhalt != 0:
        steps = math.inf
    point = ProbabilityInterval.point
    return StrategyOutcome(point(acc), point(rej), point(nonhalt), steps, nonhalt == 0, graph.size)


def evaluate_strategy(machine: Machine, word: str, strategy: Strategy,
                      max_nodes: int = DEFAULT_NODE_CAP) -> StrategyOutcome:
    """Exact ``Acc``, ``Rej``, non-halting mass and expected step count."""
    return evaluate_graph(build_graph(machine, word, strategy, max_nodes))


def expected_steps(machine: Machine, word: str, strategy: Strategy) -> Steps:
    return evaluate_strategy(machine, word, strategy).expected_steps


@dataclass(frozen=True)
class TraceEntry:
    step: int
    state: str
    head: int
    symbol: str
    registers: tuple[AffineState, ...]
    option: tuple[str, ...]
    outcome: tuple[int, ...]
    probability: Fraction


def trace(machine: Machine, word: str, strategy: Strategy,
          choose: Optional[Callable[[list], int]] = None,
          max_steps: int = 10_000) -> tuple[list[TraceEntry], Configuration]:
    """Follow one branch step by step.

    ``choose`` picks the index of the branch to follow among the realized
    outcomes; by default the branch that halts in the accepting state if
    one exists, else the first.
    """
    if choose is None:
        def choose(branches):
            for i, (_, _, child, _) in enumerate(branches):
                if child.state == machine.accept:
                    return i
            return 0
    word_tape = tape(word)
    config, memory = machine.initial_configuration(), strategy.initial_memory()
    entries = []
    while not machine.is_halting(config.state):
        if config.steps >= max_steps:
            break
        point = enumerate_choices(machine, config, word)
        affine_choice, _ = strategy.decide(memory, machine, config, point)
        branches = successors(machine, word, strategy, config, memory)
        p, outcome, child, child_memory = branches[choose(branches)]
        entries.append(TraceEntry(config.steps, config.state, config.head, word_tape[config.head],
                                  config.registers, point.affine_options[affine_choice], outcome, p))
        config, memory = child, child_memory
    return entries, config


def amplify_majority(acc_single: Fraction, reps: int) -> Fraction:
    """Probability that a strict majority of ``reps`` independent runs accept."""
    if reps < 1 or reps % 2 == 0:
        raise ValueError(f"reps must be a positive odd integer, got {reps}")
    a = Fraction(acc_single)
    return sum((math.comb(reps, j) * a ** j * (1 - a) ** (reps - j)
                for j in range(reps // 2 + 1, reps + 1)), Fraction(0))
