"""Verification runs over a set of inputs and their serialization.

Every exact quantity is serialized as a ``"num/den"`` string in JSON and CSV.
Wall-clock timings are only recorded when asked for, so that reports are
byte-identical across runs by default.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from . import __version__
from .analysis.adversary import max_acceptance
from .analysis.evaluation import evaluate_strategy
from .analysis.sampling import monte_carlo
from .core import ProbabilityInterval
from .encoding import LanguageOracle, strings_up_to
from .errors import UnsupportedParams
from .protocols import (
    ProtocolParams,
    ProtocolStrategy,
    build,
    closed_form_acceptance,
    honest_step_count,
    honest_strategy,
    stall_strategy,
)

PASS, FAIL, INCONCLUSIVE = "PASS", "FAIL", "INCONCLUSIVE"
DEFAULT_DEPTH = 24

Steps = Union[Fraction, float, None]


@dataclass(frozen=True)
class ReportRow:
    word: str
    member: bool
    honest_accept: ProbabilityInterval
    closed_form: ProbabilityInterval
    max_accept: ProbabilityInterval
    witness: ProtocolStrategy
    reject_lo: Optional[Fraction]       # strong mode only
    halting: Optional[bool]             # strong mode only
    expected_steps: Steps               # of the honest strategy
    verdict: str
    mc_accept: Optional[Fraction] = None
    wall_time: Optional[float] = None


@dataclass(frozen=True)
class VerificationReport:
    language: str
    params: ProtocolParams
    depth: Optional[int]
    seed: int
    samples: int
    rows: tuple[ReportRow, ...] = ()
    version: str = __version__

    @property
    def all_pass(self) -> bool:
        return all(row.verdict == PASS for row in self.rows)

    @property
    def exit_code(self) -> int:
        return 0 if self.all_pass else 1


def member_threshold(params: ProtocolParams, length: int) -> Fraction:
    """Acceptance an honest prover must reach on a member of length ``length``."""
    base = 1 - params.epsilon
    if not params.strong:
        return base
    return (1 - params.rejection_probability(length)) ** (2 ** (length + 1) - 2) * base


def _as_interval(x) -> ProbabilityInterval:
    return x if isinstance(x, ProbabilityInterval) else ProbabilityInterval.point(Fraction(x))


def _judge_at_least(value: ProbabilityInterval, bound: Fraction) -> str:
    if value.lo >= bound:
        return PASS
    return FAIL if value.hi < bound else INCONCLUSIVE


def _judge_at_most(value: ProbabilityInterval, bound: Fraction) -> str:
    if value.hi <= bound:
        return PASS
    return FAIL if value.lo > bound else INCONCLUSIVE


def _halting_certified(L: LanguageOracle, params: ProtocolParams, w: str, machine) -> bool:
    # The stall strategy never reads the main register, so its behaviour is the
    # same for every language; an empty-language machine stands in when L has no
    # exact machine.
    if machine is None:
        machine = build(LanguageOracle.finite([], params.r, 0), params)
    return evaluate_strategy(machine, w, stall_strategy()).halting_certified


def verify_word(L: LanguageOracle, params: ProtocolParams, w: str, machine=None,
                depth: Optional[int] = None, seed: int = 0, samples: int = 0,
                step_cap: int = 100_000) -> ReportRow:
    member = bool(L(w))
    honest = honest_strategy(L, w, params)
    closed = _as_interval(closed_form_acceptance(L, w, params, depth=depth))
    mc_accept = None
    if machine is not None:
        outcome = evaluate_strategy(machine, w, honest)
        honest_acc, steps = outcome.accept, outcome.expected_steps
        if samples:
            mc_accept = monte_carlo(machine, w, honest, samples, seed, step_cap).accept_freq
    else:
        honest_acc = closed
        # a non-member's honest prover guesses 0 at the exit and is rejected two steps early
        steps = None if params.strong else Fraction(honest_step_count(w, params) - (0 if member else 2))
    bound = max_acceptance(machine, L, w, params, depth=depth)

    reject_lo = halting = None
    if member:
        verdict = _judge_at_least(honest_acc, member_threshold(params, len(w)))
    else:
        verdict = _judge_at_most(bound.max_accept, params.epsilon)
        if params.strong:
            halting = _halting_certified(L, params, w, machine)
            reject_lo = 1 - bound.max_accept.hi
            if not halting:
                verdict = FAIL
    agrees = closed.lo <= honest_acc.lo and honest_acc.hi <= closed.hi
    if not agrees:
        verdict = FAIL
    return ReportRow(w, member, honest_acc, closed, bound.max_accept, bound.witness,
                     reject_lo, halting, steps, verdict, mc_accept)


def run_verify(L: LanguageOracle, params: ProtocolParams = ProtocolParams(), *,
               inputs: Optional[Sequence[str]] = None, max_len: Optional[int] = None,
               depth: Optional[int] = None, seed: int = 0, samples: int = 0,
               step_cap: int = 100_000, timing: bool = False) -> VerificationReport:
    """Honest and adversary analysis of every input, in input order.

    Inputs are either an explicit list or every string of length ``<= max_len``.
    Languages without a support bound are analysed with intervals at
    truncation ``depth``.
    """
    if L.alphabet_size != params.r:
        raise UnsupportedParams(f"language is {L.alphabet_size}-ary but r = {params.r}")
    if (inputs is None) == (max_len is None):
        raise ValueError("give exactly one of inputs and max_len")
    words = list(inputs) if inputs is not None else strings_up_to(max_len, params.r)
    if L.exact:
        machine, depth = build(L, params), None
    else:
        machine = None
        depth = DEFAULT_DEPTH if depth is None else depth
    rows = []
    for w in words:
        start = time.perf_counter()
        row = verify_word(L, params, w, machine, depth, seed, samples, step_cap)
        if timing:
            row = ReportRow(**{**row.__dict__, "wall_time": time.perf_counter() - start})
        rows.append(row)
    return VerificationReport(L.name, params, depth, seed, samples, tuple(rows))


# -- serialization -------------------------------------------------------------

def fmt_rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def fmt_steps(x: Steps) -> Optional[str]:
    if x is None:
        return None
    return "inf" if x == math.inf else fmt_rational(x)


def fmt_witness(s: ProtocolStrategy) -> str:
    if s.exit_at is None:
        return "stall"
    return "".join(map(str, s.guesses)) + f"@{s.exit_at}"


def _interval_text(x: ProbabilityInterval) -> str:
    if x.is_point:
        return f"{fmt_rational(x.lo)} (~{float(x.lo):.6f})"
    return f"[{fmt_rational(x.lo)}, {fmt_rational(x.hi)}] (~{float(x.lo):.6f}..{float(x.hi):.6f})"


def _params_dict(report: VerificationReport) -> dict:
    p = report.params
    return {"k": p.k, "r": p.r, "strong": p.strong, "coin_base": p.coin_base,
            "depth": report.depth, "seed": report.seed, "samples": report.samples}


CSV_FIELDS = ("word", "member", "honest_lo", "honest_hi", "closed_lo", "closed_hi",
              "max_lo", "max_hi", "witness", "reject_lo", "halting", "expected_steps",
              "mc_accept", "verdict", "wall_time")


def _row_record(row: ReportRow) -> dict:
    opt = lambda x: None if x is None else fmt_rational(x)
    return {
        "word": row.word,
        "member": row.member,
        "honest_lo": fmt_rational(row.honest_accept.lo),
        "honest_hi": fmt_rational(row.honest_accept.hi),
        "closed_lo": fmt_rational(row.closed_form.lo),
        "closed_hi": fmt_rational(row.closed_form.hi),
        "max_lo": fmt_rational(row.max_accept.lo),
        "max_hi": fmt_rational(row.max_accept.hi),
        "witness": fmt_witness(row.witness),
        "reject_lo": opt(row.reject_lo),
        "halting": row.halting,
        "expected_steps": fmt_steps(row.expected_steps),
        "mc_accept": opt(row.mc_accept),
        "verdict": row.verdict,
        "wall_time": row.wall_time,
    }


def _emit_json(report: VerificationReport) -> str:
    data = {
        "artifact_version": report.version,
        "language": report.language,
        "params": _params_dict(report),
        "all_pass": report.all_pass,
        "rows": [_row_record(row) for row in report.rows],
    }
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def _emit_csv(report: VerificationReport) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for row in report.rows:
        record = _row_record(row)
        writer.writerow({k: ("" if v is None else v) for k, v in record.items()})
    return buf.getvalue()


def _emit_text(report: VerificationReport) -> str:
    p = report.params
    mode = "strong" if p.strong else "weak"
    header = (f"affine-verifiers {report.version}  language={report.language}  "
              f"k={p.k} r={p.r} mode={mode} depth={report.depth if report.depth is not None else '-'} "
              f"seed={report.seed}")
    columns = ["word", "member", "honest_accept", "max_accept", "witness", "reject_lo",
               "halting", "steps", "verdict"]
    if report.samples:
        columns.insert(-1, "mc_accept")
    if any(row.wall_time is not None for row in report.rows):
        columns.append("wall_s")
    table = [columns]
    for row in report.rows:
        cells = {
            "word": row.word or "eps",
            "member": "yes" if row.member else "no",
            "honest_accept": _interval_text(row.honest_accept),
            "max_accept": _interval_text(row.max_accept),
            "witness": fmt_witness(row.witness),
            "reject_lo": "-" if row.reject_lo is None else fmt_rational(row.reject_lo),
            "halting": "-" if row.halting is None else ("yes" if row.halting else "no"),
            "steps": fmt_steps(row.expected_steps) or "-",
            "mc_accept": "-" if row.mc_accept is None else fmt_rational(row.mc_accept),
            "verdict": row.verdict,
            "wall_s": "-" if row.wall_time is None else f"{row.wall_time:.3f}",
        }
        table.append([cells[c] for c in columns])
    widths = [max(len(line[i]) for line in table) for i in range(len(columns))]
    lines = [header]
    lines += ["  ".join(cell.ljust(width) for cell, width in zip(line, widths)).rstrip()
              for line in table]
    if report.rows:
        passed = sum(row.verdict == PASS for row in report.rows)
        lines.append(f"{passed}/{len(report.rows)} PASS")
    return "\n".join(lines) + "\n"


def emit_report(report: VerificationReport, fmt: str = "text") -> bytes:
    """Render ``report`` as ``text`` (fixed-width table), ``json`` or ``csv``."""
    emitters = {"text": _emit_text, "json": _emit_json, "csv": _emit_csv}
    if fmt not in emitters:
        raise ValueError(f"unknown format {fmt!r}; expected one of {sorted(emitters)}")
    return emitters[fmt](report).encode("utf-8")
