"""Language specification files (JSON).

Three ways to describe a language::

    {"name": "L1", "alphabet_size": 2, "members": ["0", "11"], "support_bound": 2}
    {"name": "even", "alphabet_size": 2, "regex": "(00|11)*", "support_bound": 4}
    {"name": "d", "alphabet_size": 2, "support_bound": 3,
     "dfa": {"start": "a", "accepting": ["a"],
             "transitions": {"a": {"0": "a", "1": "b"}, "b": {"0": "b", "1": "a"}}}}

``r`` and ``bound`` are accepted as short aliases.  Without a support bound a
regex/DFA language is unbounded and can only be analysed with intervals.
"""

from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Union

from .encoding import SYMBOLS, LanguageOracle
from .errors import AlphabetMismatch, InvalidSymbol, ParseError

_KNOWN = {"name", "alphabet_size", "r", "members", "support_bound", "bound", "regex", "dfa"}


def _pick(data: dict, *names):
    found = [n for n in names if n in data]
    if len(found) > 1:
        raise ParseError(f"keys {found} are aliases; give only one")
    return data[found[0]] if found else None


def _dfa_membership(dfa: dict, r: int):
    try:
        start, accepting, table = dfa["start"], set(dfa["accepting"]), dfa["transitions"]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"dfa needs 'start', 'accepting' and 'transitions': {exc}") from None
    for state, row in table.items():
        for ch, nxt in row.items():
            if ch not in SYMBOLS[:r]:
                raise AlphabetMismatch(f"dfa transition on {ch!r} outside the {r}-ary alphabet")
            if nxt not in table:
                raise ParseError(f"dfa transition {state} --{ch}--> unknown state {nxt!r}")
    if start not in table:
        raise ParseError(f"dfa start state {start!r} has no transition row")

    def member(w: str) -> bool:
        state = start
        for ch in w:
            state = table[state].get(ch)
            if state is None:
                return False
        return state in accepting

    return member


def language_from_dict(data: dict) -> LanguageOracle:
    if not isinstance(data, dict):
        raise ParseError("a language spec must be a JSON object")
    unknown = set(data) - _KNOWN
    if unknown:
        raise ParseError(f"unknown keys {sorted(unknown)}")
    r = _pick(data, "alphabet_size", "r")
    if not isinstance(r, int) or isinstance(r, bool) or not 2 <= r <= len(SYMBOLS):
        raise ParseError(f"alphabet_size must be an integer in 2..{len(SYMBOLS)}, got {r!r}")
    bound = _pick(data, "support_bound", "bound")
    if bound is not None and (not isinstance(bound, int) or isinstance(bound, bool) or bound < 0):
        raise ParseError(f"support_bound must be a non-negative integer, got {bound!r}")
    name = data.get("name", "L")
    if not isinstance(name, str) or not re.fullmatch(r"[A-Za-z0-9_.\-]+", name):
        raise ParseError(f"name must be an identifier, got {name!r}")
    kinds = [key for key in ("members", "regex", "dfa") if key in data]
    if len(kinds) != 1:
        raise ParseError("give exactly one of 'members', 'regex', 'dfa'")

    if kinds[0] == "members":
        members = data["members"]
        if not isinstance(members, list) or not all(isinstance(w, str) for w in members):
            raise ParseError("members must be a list of strings")
        try:
            return LanguageOracle.finite(members, r, bound, name)
        except InvalidSymbol as exc:
            raise AlphabetMismatch(str(exc)) from None
        except ValueError as exc:
            raise ParseError(str(exc)) from None
    if kinds[0] == "regex":
        try:
            pattern = re.compile(data["regex"])
        except (re.error, TypeError) as exc:
            raise ParseError(f"bad regex: {exc}") from None
        return LanguageOracle(r, lambda w: pattern.fullmatch(w) is not None, bound, name)
    return LanguageOracle(r, _dfa_membership(data["dfa"], r), bound, name)


def parse_language_spec(source: Union[str, Path]) -> LanguageOracle:
    """Read a spec file; JSON syntax errors carry line and column."""
    text = Path(source).read_text(encoding="utf-8")
    return parse_language_text(text)


def parse_language_text(text: str) -> LanguageOracle:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    return language_from_dict(data)


def emit_language_spec(L: LanguageOracle) -> str:
    """Serialize a bounded language as an explicit member list."""
    data = {
        "name": L.name,
        "alphabet_size": L.alphabet_size,
        "members": L.members(),
        "support_bound": L.support_bound,
    }
    return json.dumps(data, indent=2) + "\n"
