"""Reject candidates that change the method instead of annotating it."""

from __future__ import annotations

from dataclasses import dataclass

from ..javalex import code_tokens, line_of
from ..jml.annotations import strip_annotations


@dataclass(frozen=True)
class GuardResult:
    ok: bool
    summary: str = ""
    token_index: int = -1
    line: int = 0  # line in the stripped candidate


def _snippet(toks, i, width=4) -> str:
    return " ".join(t.text for t in toks[max(0, i - width) : i + width + 1])


def guard_code_unaltered(original: str, candidate: str) -> GuardResult:
    """OK iff both sources have the same code tokens once JML, other comments
    and whitespace are removed.  Raises ``LexError`` if either does not lex."""
    a_src = strip_annotations(original)
    b_src = strip_annotations(candidate)
    a, b = code_tokens(a_src), code_tokens(b_src)
    for i, (x, y) in enumerate(zip(a, b)):
        if x.text != y.text:
            return GuardResult(
                False,
                f"code altered at token {i} (line {line_of(b_src, y.start)}): expected {x.text!r}, found {y.text!r}\n"
                f"  original:  ... {_snippet(a, i)} ...\n  candidate: ... {_snippet(b, i)} ...",
                i,
                line_of(b_src, y.start),
            )
    if len(a) != len(b):
        i = min(len(a), len(b))
        if len(b) > len(a):
            what = f"extra code starting with {b[i].text!r}"
            line = line_of(b_src, b[i].start)
        else:
            what = f"code missing from {a[i].text!r} onward"
            line = line_of(b_src, len(b_src))
        return GuardResult(False, f"code altered at token {i} (line {line}): {what}", i, line)
    return GuardResult(True)
