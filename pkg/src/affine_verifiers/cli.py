"""Command-line front end: ``affine-verifiers {build,verify,trace,adversary,sample}``.

Settings come from flags, then an optional JSON ``--config`` file, then the
defaults (k = 3, r = the language's alphabet size, weak mode).  Exit codes:
0 all verdicts PASS, 1 some verdict not PASS, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .analysis.adversary import brute_force_acceptance, max_acceptance
from .analysis.evaluation import evaluate_strategy, trace
from .analysis.sampling import binomial_sigma, monte_carlo
from .encoding import LanguageOracle, strings_up_to
from .errors import AffineVerifierError, AlphabetMismatch, ParseError
from .langspec import parse_language_spec
from .machine import dump_machine
from .protocols import ProtocolParams, ProtocolStrategy, build, honest_strategy, stall_strategy
from .report import emit_report, fmt_rational, fmt_steps, fmt_witness, run_verify

DEFAULTS = {
    "k": 3, "r": None, "strong": False, "max_len": None, "input": None, "depth": None,
    "seed": 0, "format": "text", "step_cap": 100_000, "samples": 0, "timing": False,
    "horizon": None, "brute_force": False, "strategy": "honest",
}
USAGE_ERROR = 2


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("spec", help="language spec file (JSON)")
    # default=None everywhere so that unset flags fall through to the config file
    common.add_argument("--config", help="JSON file of default settings")
    common.add_argument("--k", type=int, default=None, help="error bound 1/k (k >= 3)")
    common.add_argument("--r", type=int, default=None, help="alphabet size")
    common.add_argument("--strong", action="store_true", default=None, help="strong (halting) protocol")
    common.add_argument("--max-len", type=int, default=None, help="check every word up to this length")
    common.add_argument("--input", action="append", default=None, metavar="WORD",
                        help="input word (repeatable; use '' for the empty word)")
    common.add_argument("--depth", type=int, default=None, help="truncation depth for unbounded languages")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--format", choices=("text", "json", "csv"), default=None)
    common.add_argument("--step-cap", type=int, default=None, help="Monte-Carlo timeout in steps")
    common.add_argument("--samples", type=int, default=None, help="Monte-Carlo samples")
    common.add_argument("--timing", action="store_true", default=None, help="record wall time")

    parser = argparse.ArgumentParser(prog="affine-verifiers", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("build", parents=[common], help="dump the protocol machine")
    sub.add_parser("verify", parents=[common], help="honest + adversary analysis of each input")
    sub.add_parser("trace", parents=[common], help="step-by-step honest run")
    adv = sub.add_parser("adversary", parents=[common], help="certified max acceptance and witness")
    adv.add_argument("--horizon", type=int, default=None, help="restrict exits to iterations <= H")
    adv.add_argument("--brute-force", action="store_true", default=None,
                     help="also simulate every strategy up to --horizon")
    smp = sub.add_parser("sample", parents=[common], help="Monte-Carlo estimate")
    smp.add_argument("--strategy", default=None,
                     help="'honest', 'stall', 'stall1', or guesses@exit such as 01@2")
    return parser


def _settings(args: argparse.Namespace) -> dict:
    config = {}
    if args.config:
        try:
            config = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ParseError(f"config: {exc.msg}", exc.lineno, exc.colno) from None
        if not isinstance(config, dict):
            raise ParseError("config must be a JSON object")
        config = {key.replace("-", "_"): value for key, value in config.items()}
        unknown = set(config) - set(DEFAULTS)
        if unknown:
            raise ParseError(f"config: unknown keys {sorted(unknown)}")
        if isinstance(config.get("input"), str):
            config["input"] = [config["input"]]
    settings = dict(DEFAULTS)
    settings.update(config)
    settings.update({key: value for key, value in vars(args).items()
                     if key in DEFAULTS and value is not None})
    return settings


def _params(L: LanguageOracle, s: dict) -> ProtocolParams:
    r = s["r"] if s["r"] is not None else L.alphabet_size
    if r != L.alphabet_size:
        raise AlphabetMismatch(f"--r {r} but the language is over {L.alphabet_size} symbols")
    return ProtocolParams(k=s["k"], r=r, strong=bool(s["strong"]))


def _words(s: dict, r: int, default_len: Optional[int] = None) -> list[str]:
    if s["input"] is not None and s["max_len"] is not None:
        raise ParseError("give --input or --max-len, not both")
    if s["input"] is not None:
        return list(s["input"])
    if s["max_len"] is not None:
        return strings_up_to(s["max_len"], r)
    if default_len is None:
        raise ParseError("this command needs --input WORD")
    return strings_up_to(default_len, r)


def _parse_strategy(text: str, L: LanguageOracle, w: str, params: ProtocolParams) -> ProtocolStrategy:
    if text == "honest":
        return honest_strategy(L, w, params)
    if text in ("stall", "stall0", "stall1"):
        return stall_strategy(int(text == "stall1"))
    guesses, sep, exit_at = text.partition("@")
    if not sep or not exit_at.isdigit() or set(guesses) - {"0", "1"}:
        raise ParseError(f"bad strategy {text!r}")
    try:
        return ProtocolStrategy(tuple(int(g) for g in guesses), int(exit_at))
    except ValueError as exc:
        raise ParseError(f"bad strategy {text!r}: {exc}") from None


def _write(data, fmt: str) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(data, indent=2, ensure_ascii=False) + "\n")
    else:
        sys.stdout.write(data)


def cmd_build(L, params, s) -> int:
    _write(dump_machine(build(L, params)), "text")
    return 0


def cmd_verify(L, params, s) -> int:
    words = _words(s, params.r, default_len=L.support_bound if L.exact else 2)
    report = run_verify(L, params, inputs=words, depth=s["depth"], seed=s["seed"],
                        samples=s["samples"], step_cap=s["step_cap"], timing=bool(s["timing"]))
    sys.stdout.buffer.write(emit_report(report, s["format"]))
    sys.stdout.flush()
    return report.exit_code


def _regs_text(registers) -> str:
    return " ".join("(" + ", ".join(fmt_rational(x) for x in v.entries) + ")" for v in registers)


def cmd_trace(L, params, s) -> int:
    words = _words(s, params.r)
    machine = build(L, params)
    records, chunks = [], []
    for w in words:
        entries, final = trace(machine, w, honest_strategy(L, w, params), max_steps=s["step_cap"])
        records.append({
            "word": w,
            "final_state": final.state,
            "steps": [{"step": e.step, "state": e.state, "head": e.head, "symbol": e.symbol,
                       "registers": [[fmt_rational(x) for x in v.entries] for v in e.registers],
                       "option": list(e.option), "outcome": list(e.outcome),
                       "probability": fmt_rational(e.probability)} for e in entries],
        })
        lines = [f"word {w or 'eps'}"]
        for e in entries:
            lines.append(f"{e.step:>5} {e.state:<8} {e.head:>3} {e.symbol:<2} {','.join(e.option):<12} "
                         f"{''.join(map(str, e.outcome)) or '-':<3} p={fmt_rational(e.probability):<8} "
                         f"{_regs_text(e.registers)}")
        lines.append(f"halted in {final.state} after {final.steps} steps")
        chunks.append("\n".join(lines) + "\n")
    _write(records if s["format"] == "json" else "\n".join(chunks), s["format"])
    return 0


def cmd_adversary(L, params, s) -> int:
    words = _words(s, params.r)
    machine = build(L, params) if L.exact else None
    records, ok = [], True
    for w in words:
        bound = max_acceptance(machine, L, w, params, horizon=s["horizon"], depth=s["depth"])
        record = {
            "word": w, "member": bool(L(w)),
            "max_lo": fmt_rational(bound.max_accept.lo), "max_hi": fmt_rational(bound.max_accept.hi),
            "witness": fmt_witness(bound.witness), "frontier": bound.search_frontier,
            "explored": bound.explored, "pruned": bound.pruned, "global": bound.global_bound,
        }
        if s["brute_force"]:
            if machine is None or s["horizon"] is None:
                raise ParseError("--brute-force needs --horizon and a bounded language")
            best, best_strategy = brute_force_acceptance(machine, w, s["horizon"])[-1]
            record["brute_force"] = fmt_rational(best)
            record["brute_force_witness"] = fmt_witness(best_strategy)
            ok &= best == bound.max_accept.lo
        if not record["member"]:
            ok &= bound.max_accept.hi <= params.epsilon
        records.append(record)
    if s["format"] == "json":
        _write(records, "json")
    else:
        keys = list(records[0]) if records else []
        lines = [",".join(keys)] if s["format"] == "csv" else []
        for rec in records:
            if s["format"] == "csv":
                lines.append(",".join(str(rec[k]) for k in keys))
            else:
                lines.append("  ".join(f"{k}={rec[k] if rec[k] != '' else 'eps'}" for k in keys))
        _write("\n".join(lines) + "\n", "text")
    return 0 if ok else 1


def cmd_sample(L, params, s) -> int:
    words = _words(s, params.r)
    machine = build(L, params)
    samples = s["samples"] or 10_000
    records = []
    for w in words:
        strategy = _parse_strategy(s["strategy"], L, w, params)
        result = monte_carlo(machine, w, strategy, samples, s["seed"], s["step_cap"])
        exact = evaluate_strategy(machine, w, strategy)
        sigma = binomial_sigma(exact.accept.lo, samples)
        deviation = abs(float(result.accept_freq - exact.accept.lo))
        records.append({
            "word": w, "strategy": fmt_witness(strategy), "samples": samples, "seed": s["seed"],
            "accepted": result.accepted, "rejected": result.rejected, "timed_out": result.timed_out,
            "accept_freq": fmt_rational(result.accept_freq), "exact_accept": fmt_rational(exact.accept.lo),
            "exact_steps": fmt_steps(exact.expected_steps),
            "within_4_sigma": deviation <= 4 * sigma if sigma > 0 else deviation == 0,
        })
    if s["format"] == "json":
        _write(records, "json")
    else:
        _write("".join("  ".join(f"{k}={v if v != '' else 'eps'}" for k, v in rec.items()) + "\n"
                       for rec in records), "text")
    return 0


COMMANDS = {"build": cmd_build, "verify": cmd_verify, "trace": cmd_trace,
            "adversary": cmd_adversary, "sample": cmd_sample}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _parser()
    args = parser.parse_args(argv)
    try:
        s = _settings(args)
        L = parse_language_spec(args.spec)
        params = _params(L, s)
        return COMMANDS[args.command](L, params, s)
    except (OSError, AffineVerifierError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
