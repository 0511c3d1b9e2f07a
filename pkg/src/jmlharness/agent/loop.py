"""The plan/act loop that drafts, verifies, analyzes and scores JML contracts."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional

from ..harness import DEFAULT_THRESHOLDS, EmptyMutantPool, EmptySuite, HarnessReport, spec_harness_report
from ..javalex import LexError, find_method
from ..jml.annotations import annotate_method_text, extract_contract
from ..jml.lexer import ParseError
from ..testkit.mutation import MutationConfig
from ..testkit.suite import TestSuite
from ..verify.builtin import BuiltinVerifier
from ..verify.result import Status, VerifierResult
from ..verify.scoring import graduated_score
from .guard import guard_code_unaltered
from .providers import ChatProvider, ProviderError, Reply
from .render import render_tool_result

TRAJECTORY_SCHEMA = 1

TOOLS = [
    {
        "name": "verify_with_openjml",
        "description": "Verify the class with a JML contract above the target method. Returns a graduated score and classified errors.",
        "parameters": {
            "type": "object",
            "properties": {
                "annotated_source": {"type": "string", "description": "Whole annotated class."},
                "requires": {"type": "array", "items": {"type": "string"}},
                "ensures": {"type": "array", "items": {"type": "string"}},
            },
        },
    },
    {
        "name": "analyze_openjml_errors",
        "description": "Explain the errors of the last verification with a repair hint for each.",
        "parameters": {"type": "object", "properties": {}},
    },
    {
        "name": "run_spec_harness",
        "description": "Score the last verified contract: PostCorr, PostComp, PreCorr, PreComp.",
        "parameters": {"type": "object", "properties": {}},
    },
    {
        "name": "task_complete",
        "description": "Finish. Accepted only when the last harness report clears the thresholds.",
        "parameters": {"type": "object", "properties": {"summary": {"type": "string"}}},
    },
]
TOOL_NAMES = tuple(t["name"] for t in TOOLS)

CORRECTIVE = (
    "Your reply was not a single well-formed tool call ({error}). "
    f"Answer with exactly one call to one of: {', '.join(TOOL_NAMES)}."
)


def system_prompt() -> str:
    return resources.files("jmlharness.agent").joinpath("system_prompt.md").read_text(encoding="utf-8")


class Outcome(str, enum.Enum):
    COMPLETED = "Completed"
    EXHAUSTED = "ExhaustedSteps"
    GUARDED = "Guarded"
    PROVIDER_ERROR = "ProviderError"


@dataclass(frozen=True)
class AgentConfig:
    max_steps: int = 12
    planning_interval: int = 4
    max_refinement_cycles: int = 3
    max_pairs: int = 5
    thresholds: tuple = DEFAULT_THRESHOLDS
    provider: str = "scripted"
    seed: int = 0
    mutation: MutationConfig = MutationConfig()

    def __post_init__(self):
        object.__setattr__(self, "thresholds", tuple(self.thresholds))
        if self.max_steps < 1:
            raise ValueError("max_steps must be at least 1")
        if self.planning_interval < 1 or self.max_refinement_cycles < 1 or self.max_pairs < 1:
            raise ValueError("planning_interval, max_refinement_cycles and max_pairs must be positive")
        if len(self.thresholds) != 2 or not all(0.0 <= t <= 1.0 for t in self.thresholds):
            raise ValueError("thresholds must be two numbers in [0, 1]")

    def to_json(self) -> dict:
        return {
            "maxSteps": self.max_steps,
            "planningInterval": self.planning_interval,
            "maxRefinementCycles": self.max_refinement_cycles,
            "maxPairs": self.max_pairs,
            "thresholds": list(self.thresholds),
            "provider": self.provider,
            "seed": self.seed,
            "mutation": self.mutation.to_json(),
        }


@dataclass
class Step:
    index: int
    thought: str
    tool: str
    arguments: dict
    observation: str

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "thought": self.thought,
            "action": {"tool": self.tool, "arguments": self.arguments},
            "observation": self.observation,
        }


@dataclass
class Trajectory:
    task_id: str
    config: AgentConfig
    provider: str
    verifier: str
    steps: list = field(default_factory=list)
    events: list = field(default_factory=list)
    outcome: Optional[Outcome] = None
    refinement_cycles: int = 0
    final_source: Optional[str] = None
    final_contract: Optional[dict] = None
    final_report: Optional[HarnessReport] = None
    error: str = ""

    def to_dict(self) -> dict:
        return {
            "schemaVersion": TRAJECTORY_SCHEMA,
            "taskId": self.task_id,
            "config": self.config.to_json(),
            "provider": self.provider,
            "verifier": self.verifier,
            "outcome": self.outcome.value if self.outcome else None,
            "error": self.error,
            "refinementCycles": self.refinement_cycles,
            "steps": [s.to_dict() for s in self.steps],
            "events": list(self.events),
            "finalSource": self.final_source,
            "finalContract": self.final_contract,
            "finalReport": None if self.final_report is None else self.final_report.to_dict(timing=False, items=False),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"


@dataclass
class _State:
    """The scratch store shared across steps."""

    current_source: Optional[str] = None
    last_result: Optional[VerifierResult] = None
    verified_source: Optional[str] = None
    last_report: Optional[HarnessReport] = None
    report_source: Optional[str] = None
    guard_strikes: int = 0
    failed_cycles: int = 0

    def render(self, method: str, steps: int, cfg: AgentConfig) -> str:
        lines = [f"STATE (tool calls used {steps}/{cfg.max_steps}, failed refinement cycles {self.failed_cycles}/{cfg.max_refinement_cycles})"]
        if self.current_source is not None:
            try:
                d = extract_contract(self.current_source, method)[0].to_dict()
                lines.append("current_contract: " + json.dumps({"requires": d["requires"], "ensures": d["ensures"]}))
            except (ParseError, LookupError, LexError):
                lines.append("current_contract: <does not parse>")
        if self.last_result is not None:
            score, _ = graduated_score(self.last_result)
            lines.append(f"last_verifier_result: {self.last_result.status.value} score {score:.4f}")
        if self.last_report is not None:
            s = self.last_report.scores()
            lines.append(
                "last_report: " + ", ".join(f"{k}={'n/a' if v is None else f'{v:.4f}'}" for k, v in s.items())
            )
        return "\n".join(lines)


def _task_message(source: str, method: str, suite: TestSuite) -> str:
    sig = suite.signature
    params = ", ".join(f"{t} {n}" for n, t in sig.params)
    return (
        f"Write a JML contract for method `{method}` ({params}) -> {sig.return_type}.\n"
        f"Do not modify the code.\n\n```java\n{source}```"
    )


def _replan_message(step: int, cfg: AgentConfig) -> str:
    return (
        f"PLANNING CHECKPOINT after {step} tool calls. Review the facts gathered so far, "
        "what the last verifier and harness results imply, and state the plan for the next "
        f"{cfg.planning_interval} tool calls before acting."
    )


def _validate(reply: Reply) -> str:
    if reply.error:
        return reply.error
    call = reply.tool_call
    if call is None:
        return "no tool call"
    if call.name not in TOOL_NAMES:
        return f"unknown tool {call.name!r}"
    if call.name == "verify_with_openjml":
        a = call.arguments
        if "annotated_source" in a:
            if not isinstance(a["annotated_source"], str):
                return "annotated_source must be a string"
        elif not any(k in a for k in ("requires", "ensures")):
            return "verify_with_openjml needs annotated_source or requires/ensures"
        for k in ("requires", "ensures"):
            if k in a and not (isinstance(a[k], list) and all(isinstance(x, str) for x in a[k])):
                return f"{k} must be a list of strings"
    return ""


def run_veriact(task, suite: TestSuite, cfg: AgentConfig, provider: ChatProvider,
                verifier=None, harness_backend=None) -> Trajectory:
    """Run the draft/verify/analyze/score loop on one task.

    ``task`` needs ``source`` and ``method_name`` attributes (``id`` is optional).
    The verifier defaults to the builtin checker over the full suite; the
    harness scores against the first ``cfg.max_pairs`` valid pairs.
    """
    source, method = task.source, task.method_name
    find_method(source, method)
    verifier = verifier or BuiltinVerifier(suite)
    harness_suite = suite.truncated(cfg.max_pairs)
    traj = Trajectory(getattr(task, "id", "task"), cfg, provider.identity, verifier.identity())
    state = _State()
    messages = [
        {"role": "system", "content": system_prompt()},
        {"role": "user", "content": _task_message(source, method, suite)},
    ]
    retried = False
    last_replan = 0

    def finish(outcome: Outcome, error: str = "") -> Trajectory:
        traj.outcome = outcome
        traj.error = error
        traj.refinement_cycles = state.failed_cycles + (1 if outcome is Outcome.COMPLETED else 0)
        if state.last_report is not None:
            traj.final_report = state.last_report
        final = state.report_source if outcome is Outcome.COMPLETED else state.verified_source
        if final is not None:
            traj.final_source = final
            try:
                traj.final_contract = extract_contract(final, method)[0].to_dict()
            except (ParseError, LookupError, LexError):
                traj.final_contract = None
        return traj

    while len(traj.steps) < cfg.max_steps:
        n = len(traj.steps)
        if n and n % cfg.planning_interval == 0 and n != last_replan:
            last_replan = n
            messages.append({"role": "user", "content": _replan_message(n, cfg)})
            traj.events.append({"type": "replan", "beforeStep": n})
        prompt = messages + [{"role": "user", "content": state.render(method, n, cfg)}]
        try:
            reply = provider.complete(prompt, TOOLS)
        except ProviderError as exc:
            return finish(Outcome.PROVIDER_ERROR, str(exc))
        problem = _validate(reply)
        if problem:
            traj.events.append({"type": "malformed", "beforeStep": n, "error": problem})
            if retried:
                return finish(Outcome.PROVIDER_ERROR, f"malformed reply after a corrective prompt: {problem}")
            retried = True
            messages.append({"role": "assistant", "content": reply.thought})
            messages.append({"role": "user", "content": CORRECTIVE.format(error=problem)})
            continue
        retried = False
        call = reply.tool_call
        observation, stop = _dispatch(call.name, call.arguments, source, method, verifier,
                                      harness_suite, harness_backend, cfg, state)
        step = Step(n + 1, reply.thought, call.name, dict(call.arguments), observation)
        traj.steps.append(step)
        call_id = f"call_{n + 1}"
        messages.append({
            "role": "assistant",
            "content": reply.thought,
            "tool_calls": [{"id": call_id, "type": "function",
                            "function": {"name": call.name, "arguments": json.dumps(call.arguments, sort_keys=True)}}],
        })
        messages.append({"role": "tool", "tool_call_id": call_id, "content": observation})
        if stop is not None:
            return finish(stop)
    return finish(Outcome.EXHAUSTED, f"no completion within {cfg.max_steps} tool calls")


def _dispatch(tool, args, source, method, verifier, harness_suite, harness_backend, cfg, state: _State):
    """Run one tool; returns ``(observation, outcome or None)``."""
    if tool == "verify_with_openjml":
        if "annotated_source" in args:
            candidate = args["annotated_source"]
        else:
            candidate = annotate_method_text(source, method, args.get("requires", []), args.get("ensures", []))
        try:
            guard = guard_code_unaltered(source, candidate)
            summary = guard.summary
        except LexError as exc:
            guard, summary = None, f"candidate does not tokenize: {exc}"
        if guard is None or not guard.ok:
            state.guard_strikes += 1
            text = "CODE ALTERED\nThe candidate changes the method's code; only add JML annotations.\n" + summary
            if state.guard_strikes >= 2:
                return render_tool_result(tool, text), Outcome.GUARDED
            return render_tool_result(tool, text), None
        state.guard_strikes = 0
        result = verifier.verify(candidate, method)
        state.current_source = candidate
        state.last_result = result
        if result.status is Status.VERIFIED:
            state.verified_source = candidate
        return render_tool_result(tool, result), None

    if tool == "analyze_openjml_errors":
        if state.last_result is None:
            return "NO VERIFIER RUN\nCall verify_with_openjml first.", None
        return render_tool_result(tool, state.last_result), None

    if tool == "run_spec_harness":
        if state.verified_source is None or state.current_source != state.verified_source:
            return "NOT VERIFIED\nThe current candidate has not verified; fix it before running the harness.", None
        contract, _ = extract_contract(state.verified_source, method)
        try:
            report = spec_harness_report(contract, harness_suite, cfg.mutation, harness_backend, cfg.thresholds)
        except (EmptySuite, EmptyMutantPool) as exc:
            return f"HARNESS UNAVAILABLE\n{exc}", None
        state.last_report = report
        state.report_source = state.verified_source
        obs = render_tool_result(tool, report)
        if not report.meaningfully_verified:
            state.failed_cycles += 1
            if state.failed_cycles >= cfg.max_refinement_cycles:
                return obs + f"\nRefinement budget spent ({state.failed_cycles} cycles).", Outcome.EXHAUSTED
        return obs, None

    # task_complete
    rep = state.last_report
    if rep is None:
        return "REJECTED\nNo harness report yet; verify a contract and run the spec harness first.", None
    if state.report_source != state.current_source:
        return "REJECTED\nThe current candidate changed since the last harness report; run the harness again.", None
    if not rep.meaningfully_verified:
        t_corr, t_comp = rep.thresholds
        return (
            f"REJECTED\nPostCorr {rep.post_corr:.4f} and PostComp {rep.post_comp:.4f} must reach "
            f"{t_corr:.2f} and {t_comp:.2f}; refine the contract.",
            None,
        )
    return "TASK COMPLETE", Outcome.COMPLETED

