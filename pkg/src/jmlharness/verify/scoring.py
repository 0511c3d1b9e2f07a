from __future__ import annotations

from .result import Status, VerifierResult

SCORE_VALUES = (0.0, 0.1, 0.3, 1.0)


class EmptyInput(ValueError):
    pass


def graduated_score(r: VerifierResult):
    """Partial credit for a verifier run, with feedback listing every error.

    1.0 when verified; 0.3 for exactly one proof failure and no syntax or type
    error; 0.1 for several proof failures; 0.0 whenever E_s is non-empty or no
    contract was produced.  Tool failures and timeouts also score 0.0.
    """
    n_s, n_v = len(r.syntax_errors), len(r.verification_errors)
    if r.status is Status.VERIFIED:
        return 1.0, "VERIFIED: no syntax or verification errors."
    if r.status is Status.EMPTY:
        return 0.0, "EMPTY: no JML specification was produced."
    if n_s > 0:
        score = 0.0
    elif n_v == 1:
        score = 0.3
    elif n_v >= 2:
        score = 0.1
    else:
        score = 0.0
    lines = [f"{r.status.value}: {n_s} syntax/type error(s), {n_v} verification error(s)."]
    if r.status is Status.TOOL_ERROR:
        lines.append("The verifier did not run to completion; check the raw log.")
    elif r.status is Status.TIMEOUT:
        lines.append("The verifier timed out; simplify quantifiers or split clauses.")
    for e in r.errors:
        lines.append(f"- [{e.category.value}] line {e.source_line}: {e.message}")
        if e.suggestion:
            lines.append(f"  hint: {e.suggestion}")
    return score, "\n".join(lines)


def verification_rate(results) -> float:
    results = list(results)
    if not results:
        raise EmptyInput("no verifier results")
    return sum(r.status is Status.VERIFIED for r in results) / len(results)
