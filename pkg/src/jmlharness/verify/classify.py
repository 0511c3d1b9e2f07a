"""Turn verifier logs into classified errors using an editable pattern table.

Each diagnostic line (``File.java:12: verify: ...``) is matched against the
table in order; the first matching entry names its category and a repair
hint.  Diagnostics that share a source line and category are one obligation.
"""

from __future__ import annotations

import functools
import json
import re
import string
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .result import Category, ClassifiedError


@dataclass(frozen=True)
class Pattern:
    id: str
    regex: re.Pattern
    category: Category
    suggestion: str
    kinds: tuple = ()  # restrict to these diagnostic kinds; empty means any


@dataclass(frozen=True)
class PatternTable:
    version: int
    diagnostic: re.Pattern
    ignore: tuple
    patterns: tuple
    validated_against: str = ""

    @classmethod
    def from_json(cls, obj: dict) -> "PatternTable":
        pats = tuple(
            Pattern(
                p["id"],
                re.compile(p["regex"]),
                Category(p["category"]),
                p.get("suggestion", ""),
                tuple(p.get("kinds", ())),
            )
            for p in obj["patterns"]
        )
        return cls(
            int(obj["version"]),
            re.compile(obj["diagnostic"]),
            tuple(re.compile(r) for r in obj.get("ignore", [])),
            pats,
            obj.get("validatedAgainst", ""),
        )


def load_pattern_table(path=None) -> PatternTable:
    if path is None:
        return default_table()
    return PatternTable.from_json(json.loads(Path(path).read_text(encoding="utf-8")))


@functools.lru_cache(maxsize=1)
def default_table() -> PatternTable:
    text = resources.files("jmlharness.verify").joinpath("patterns.json").read_text(encoding="utf-8")
    return PatternTable.from_json(json.loads(text))


class _Defaulting(dict):
    def __missing__(self, key):
        return "?"


def _render(template: str, fields: dict) -> str:
    return string.Formatter().vformat(template, (), _Defaulting(fields))


@dataclass(frozen=True)
class Diagnostic:
    file: str
    line: int
    kind: str
    message: str


def parse_diagnostics(raw_log: str, table: PatternTable | None = None) -> list:
    table = table or default_table()
    out = []
    for line in raw_log.splitlines():
        m = table.diagnostic.match(line.rstrip())
        if m:
            out.append(Diagnostic(m["file"], int(m["line"]), m["kind"], m["message"].strip()))
    return out


def classify_diagnostic(d: Diagnostic, table: PatternTable | None = None):
    """Return a ClassifiedError, or None for ignorable lines."""
    table = table or default_table()
    if any(r.search(d.message) for r in table.ignore):
        return None
    for p in table.patterns:
        if p.kinds and d.kind not in p.kinds:
            continue
        m = p.regex.search(d.message)
        if m is None:
            continue
        groups = {k: v for k, v in m.groupdict().items() if v is not None}
        line = int(groups["specline"]) if "specline" in groups else d.line
        fields = {"line": d.line, "specline": line, "message": d.message, "file": d.file}
        return ClassifiedError(p.category, d.message, line, _render(p.suggestion, fields), p.id)
    if d.kind == "warning":
        return None
    return ClassifiedError(
        Category.UNKNOWN,
        d.message,
        d.line,
        f"Unrecognized verifier diagnostic at line {d.line}; read the message and revise the nearby clause.",
        "unknown",
    )


def classify_output(raw_log: str, table: PatternTable | None = None):
    """Split a verifier log into ``(E_s, E_v)``, one entry per obligation.

    Total and deterministic: the same log always yields the same tuples.
    """
    table = table or default_table()
    seen = set()
    static, proof = [], []
    for d in parse_diagnostics(raw_log, table):
        err = classify_diagnostic(d, table)
        if err is None:
            continue
        key = (err.source_line, err.category)
        if key in seen:
            continue
        seen.add(key)
        (static if err.category.is_static else proof).append(err)
    return tuple(static), tuple(proof)
