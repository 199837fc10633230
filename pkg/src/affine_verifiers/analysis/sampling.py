"""Monte-Carlo runs of a machine under a strategy, as a cross-check of exact results.

Sampling is exact: each branch is drawn with ``random.Random.randrange``
over the common denominator of the branch probabilities, so no float
rounding enters.  Deterministic stretches of the computation are cached and
skipped in one jump.
"""

from __future__ import annotations

import bisect
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from ..machine import Machine, Strategy
from .evaluation import node_key, successors

_HALT, _BRANCH, _LOOP = "halt", "branch", "loop"


@dataclass(frozen=True)
class MonteCarloResult:
    samples: int
    accepted: int
    rejected: int
    timed_out: int
    mean_steps: Optional[float]     # over halted samples; None if none halted
    seed: int
    step_cap: int

    @property
    def accept_freq(self) -> Fraction:
        return Fraction(self.accepted, self.samples)

    @property
    def reject_freq(self) -> Fraction:
        return Fraction(self.rejected, self.samples)

    @property
    def timeout_freq(self) -> Fraction:
        return Fraction(self.timed_out, self.samples)


def binomial_sigma(p: Fraction, n: int) -> float:
    p = float(p)
    return math.sqrt(p * (1 - p) / n)


class _Sampler:
    def __init__(self, machine: Machine, word: str, strategy: Strategy):
        self.machine, self.word, self.strategy = machine, word, strategy
        self.nodes = {}     # key -> (kind, payload)
        self.jumps = {}     # key -> (target key, steps)

    def key(self, config, memory):
        if self.machine.is_halting(config.state):
            return ("<halt>", config.state)
        return node_key(config, memory, self.strategy.blind_registers(memory))

    def node(self, key, config, memory):
        if key not in self.nodes:
            if key[0] == "<halt>":
                self.nodes[key] = (_HALT, key[1])
            else:
                children = []
                for p, _, child, child_mem in successors(self.machine, self.word, self.strategy, config, memory):
                    children.append((p, self.key(child, child_mem), child, child_mem))
                if len(children) == 1:
                    self.nodes[key] = ("single", children[0][1:])
                else:
                    den = math.lcm(*(p.denominator for p, *_ in children))
                    cumulative, acc = [], 0
                    for p, *_ in children:
                        acc += p.numerator * (den // p.denominator)
                        cumulative.append(acc)
                    self.nodes[key] = (_BRANCH, (den, cumulative, [ch[1:] for ch in children]))
        return self.nodes[key]

    def jump(self, key, config, memory, limit):
        """Follow single-child links to the next branching or halting node."""
        if key in self.jumps:
            return self.jumps[key]
        path, seen = [], {key}
        cur = (key, config, memory)
        while True:
            kind, payload = self.node(*cur)
            if kind != "single" or len(path) >= limit:
                break
            path.append(cur[0])
            cur = payload
            if cur[0] in seen:
                # deterministic cycle: never halts
                result = ((_LOOP,), None, None), math.inf
                for k in path:
                    self.jumps[k] = result
                return result
            seen.add(cur[0])
        result = cur, len(path)
        if kind != "single":
            self.jumps[key] = result
        return result


def monte_carlo(machine: Machine, word: str, strategy: Strategy, samples: int,
                seed: int = 0, step_cap: int = 100_000) -> MonteCarloResult:
    """Sample ``samples`` runs; a run still going after ``step_cap`` steps times out."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = random.Random(seed)
    sampler = _Sampler(machine, word, strategy)
    start = machine.initial_configuration()
    memory = strategy.initial_memory()
    root = (sampler.key(start, memory), start, memory)
    accepted = rejected = timed_out = 0
    halted_steps = 0
    for _ in range(samples):
        cur, steps = root, 0
        while True:
            target, n = sampler.jump(*cur, limit=step_cap + 1)
            steps += n
            if steps > step_cap or target[0] == (_LOOP,):
                timed_out += 1
                break
            kind, payload = sampler.node(*target)
            if kind == _HALT:
                halted_steps += steps
                if payload == machine.accept:
                    accepted += 1
                else:
                    rejected += 1
                break
            if kind == "single":
                cur = target          # jump was cut by the limit; keep walking
                continue
            if steps >= step_cap:
                timed_out += 1
                break
            den, cumulative, children = payload
            u = rng.randrange(den)
            cur = children[bisect.bisect_right(cumulative, u)]
            steps += 1
    halted = accepted + rejected
    return MonteCarloResult(samples, accepted, rejected, timed_out,
                            halted_steps / halted if halted else None, seed, step_cap)
