"""Deterministic text observations for tool results."""

from __future__ import annotations

from ..harness import HarnessReport
from ..verify.result import Status, VerifierResult
from ..verify.scoring import graduated_score

MAX_OBSERVATION = 4000
_HEAD = 1800


def truncate(text: str, limit: int = MAX_OBSERVATION) -> str:
    """Keep the head and tail of ``text`` around a marker so the result fits ``limit``."""
    if len(text) <= limit:
        return text
    dropped = len(text) - limit
    # the marker's own length depends on the count, so iterate to a fixed point
    while True:
        marker = f"\n[... truncated {dropped} characters ...]\n"
        keep_tail = limit - _HEAD - len(marker)
        settled = len(text) - _HEAD - keep_tail
        if settled == dropped:
            break
        dropped = settled
    return text[:_HEAD] + marker + text[len(text) - keep_tail :]


def _fmt(x) -> str:
    return "n/a" if x is None else f"{x:.4f}"


def render_verifier_result(r: VerifierResult) -> str:
    score, feedback = graduated_score(r)
    if r.status is Status.VERIFIED:
        return f"VERIFIED\nscore: {_fmt(score)}\nThe annotated class passes the verifier with no errors."
    lines = [
        f"{r.status.value.upper()}",
        f"score: {_fmt(score)}",
        f"syntax/type errors: {len(r.syntax_errors)}",
        f"verification errors: {len(r.verification_errors)}",
        feedback,
    ]
    if r.raw_log.strip():
        lines += ["--- verifier log ---", r.raw_log.rstrip()]
    return "\n".join(lines)


def render_error_analysis(r: VerifierResult) -> str:
    if r.status is Status.VERIFIED:
        return "NO ERRORS\nThe last candidate verified; run the spec harness next."
    score, _ = graduated_score(r)
    lines = [f"ERROR ANALYSIS ({r.status.value})", f"score: {_fmt(score)}"]
    if not r.errors:
        lines.append("No classified errors. " + ("No JML was found in the candidate." if r.status is Status.EMPTY else "See the raw log."))
    for n, e in enumerate(r.errors, 1):
        side = "E_s" if e.category.is_static else "E_v"
        lines.append(f"{n}. [{side}/{e.category.value}] line {e.source_line}: {e.message}")
        lines.append(f"   fix: {e.suggestion}")
    return "\n".join(lines)


def render_report(rep: HarnessReport) -> str:
    t_corr, t_comp = rep.thresholds
    mvr = "yes" if rep.meaningfully_verified else "no"
    s = rep.pool_sizes
    lines = [
        "SPEC-HARNESS",
        f"PostCorr: {_fmt(rep.post_corr)}",
        f"PostComp: {_fmt(rep.post_comp)}",
        f"PreCorr: {_fmt(rep.pre_corr)}",
        f"PreComp: {_fmt(rep.pre_comp)}",
        f"pairs: {s['T']}  mutants: {s['T1']}  rejected mutants: {s['T2']}  invalid inputs: {s['T-']}",
        f"meaningfully verified: {mvr} (thresholds PostCorr >= {t_corr:.2f}, PostComp >= {t_comp:.2f})",
    ]
    if any(rep.eval_errors.values()):
        lines.append("undecidable checks: " + ", ".join(f"{k}={v}" for k, v in rep.eval_errors.items() if v))
    if rep.post_corr < 1.0:
        bad = [i for i, v in enumerate(rep.pair_verdicts) if not v.holds]
        lines.append(f"postcondition fails on valid pairs {bad}: it is too strong or wrong there.")
    if rep.post_comp < t_comp:
        lines.append("postcondition accepts most wrong outputs: constrain \\result more tightly.")
    if rep.pre_corr < 1.0:
        lines.append("precondition rejects some valid inputs: weaken it.")
    return "\n".join(lines)


def render_tool_result(tool: str, result) -> str:
    if isinstance(result, HarnessReport):
        text = render_report(result)
    elif isinstance(result, VerifierResult):
        text = render_error_analysis(result) if tool == "analyze_openjml_errors" else render_verifier_result(result)
    else:
        text = str(result)
    return truncate(text)
