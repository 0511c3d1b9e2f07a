import json
import threading
from http.server import BaseHTTPRequestHandler, HTTPServer
from pathlib import Path
from types import SimpleNamespace

import pytest
from hypothesis import given
from hypothesis import strategies as st

from jmlharness.agent import (
    MAX_OBSERVATION, TOOLS, AgentConfig, HTTPChatProvider, Outcome, ProviderError, Reply, ScriptedProvider,
    ToolCall, guard_code_unaltered, run_veriact, system_prompt, truncate,
)
from jmlharness.agent.providers import parse_chat_response
from jmlharness.testkit import load_suite

FIX = Path(__file__).parent / "fixtures"
AGENT = FIX / "agent"
SOURCE = (AGENT / "ChangeCase.java").read_text(encoding="utf-8")
ANNOTATED = (FIX / "changecase" / "ChangeCase.java").read_text(encoding="utf-8")
SUITE = load_suite(FIX / "changecase" / "changecase.suite.json")
TASK = SimpleNamespace(id="changecase", source=SOURCE, method_name="changeCase")


def run(script, cfg=AgentConfig(), **kw):
    provider = script if not isinstance(script, str) else ScriptedProvider.from_file(AGENT / f"{script}.json")
    return run_veriact(TASK, SUITE, cfg, provider, **kw)


class Recording:
    """Wraps a provider and keeps every prompt it was shown."""

    identity = "recording"
    deterministic = True

    def __init__(self, inner):
        self.inner = inner
        self.prompts = []

    def complete(self, messages, tools):
        self.prompts.append(messages)
        return self.inner.complete(messages, tools)


# guard -----------------------------------------------------------------------------

def test_guard_accepts_annotations_and_whitespace():
    assert guard_code_unaltered(SOURCE, ANNOTATED).ok
    assert guard_code_unaltered(SOURCE, SOURCE.replace("    ", "\t")).ok
    assert guard_code_unaltered(SOURCE, SOURCE.replace("return out;", "return out; // done")).ok


def test_guard_reports_first_divergence():
    altered = SOURCE.replace("(char)(c - 'a' + 'A')", "(char)(c - 32)")
    g = guard_code_unaltered(SOURCE, altered)
    assert not g.ok
    assert g.line == 5
    assert "'a'" in g.summary and "32" in g.summary


def test_guard_detects_appended_code():
    g = guard_code_unaltered(SOURCE, SOURCE + "class Extra {}\n")
    assert not g.ok and "extra code" in g.summary


# observation rendering -------------------------------------------------------------

def test_truncate_golden():
    log = (FIX / "logs" / "oversized.log").read_text(encoding="utf-8")
    golden = (FIX / "logs" / "oversized.rendered.txt").read_text(encoding="utf-8")
    assert truncate(log) == golden


@given(st.text(min_size=0, max_size=12000))
def test_truncate_bounds(text):
    out = truncate(text)
    assert len(out) <= MAX_OBSERVATION
    if len(text) <= MAX_OBSERVATION:
        assert out == text
    else:
        assert len(out) == MAX_OBSERVATION
        assert out.startswith(text[:1800])
        marker_start = out.index("\n[... truncated ", 1800)
        marker_end = out.index(" characters ...]\n", marker_start) + len(" characters ...]\n")
        dropped = int(out[marker_start:marker_end].split()[2])
        kept = len(out) - (marker_end - marker_start)
        assert dropped == len(text) - kept
        assert text.endswith(out[marker_end:])


# providers ------------------------------------------------------------------------

def test_scripted_provider_replays_and_exhausts():
    p = ScriptedProvider([{"tool": "task_complete", "arguments": {}}])
    assert p.complete([], TOOLS).tool_call == ToolCall("task_complete", {})
    with pytest.raises(ProviderError):
        p.complete([], TOOLS)


def test_parse_chat_response():
    data = {"choices": [{"message": {"content": "hmm", "tool_calls": [
        {"id": "1", "type": "function", "function": {"name": "run_spec_harness", "arguments": "{}"}}]}}]}
    assert parse_chat_response(data) == Reply("hmm", ToolCall("run_spec_harness", {}))
    assert parse_chat_response({"choices": [{"message": {"content": "no tools"}}]}).error
    bad_args = {"choices": [{"message": {"tool_calls": [{"function": {"name": "x", "arguments": "{"}}]}}]}
    assert "JSON" in parse_chat_response(bad_args).error
    with pytest.raises(ProviderError):
        parse_chat_response({"nope": 1})


def test_http_provider_request_shape(monkeypatch):
    seen = {}

    class Handler(BaseHTTPRequestHandler):
        def do_POST(self):
            seen["path"] = self.path
            seen["auth"] = self.headers.get("Authorization")
            seen["body"] = json.loads(self.rfile.read(int(self.headers["Content-Length"])))
            reply = {"choices": [{"message": {"content": "", "tool_calls": [
                {"id": "c", "type": "function", "function": {"name": "task_complete", "arguments": "{\"summary\": \"x\"}"}}]}}]}
            body = json.dumps(reply).encode()
            self.send_response(200)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def log_message(self, *args):
            pass

    server = HTTPServer(("127.0.0.1", 0), Handler)
    t = threading.Thread(target=server.handle_request, daemon=True)
    t.start()
    monkeypatch.setenv("JMLHARNESS_API_KEY", "k123")
    p = HTTPChatProvider(f"http://127.0.0.1:{server.server_port}/v1", "m", seed=7, timeout=5)
    reply = p.complete([{"role": "user", "content": "hi"}], TOOLS)
    t.join(5)
    server.server_close()
    assert reply.tool_call == ToolCall("task_complete", {"summary": "x"})
    assert seen["path"] == "/v1/chat/completions"
    assert seen["auth"] == "Bearer k123"
    body = seen["body"]
    assert body["model"] == "m" and body["seed"] == 7 and body["temperature"] == 0
    assert [t["function"]["name"] for t in body["tools"]] == [t["name"] for t in TOOLS]


def test_http_provider_unreachable():
    p = HTTPChatProvider("http://127.0.0.1:9/v1", "m", timeout=1)
    with pytest.raises(ProviderError):
        p.complete([], TOOLS)


# the loop -------------------------------------------------------------------------

def test_system_prompt_is_versioned():
    assert system_prompt().startswith("<!-- prompt-version: 1 -->")


def test_success_scenario():
    traj = run("success")
    assert traj.outcome is Outcome.COMPLETED
    assert [s.tool for s in traj.steps] == [
        "verify_with_openjml", "analyze_openjml_errors", "verify_with_openjml", "run_spec_harness", "task_complete",
    ]
    assert traj.steps[0].observation.startswith("FAILED")
    assert traj.steps[2].observation.startswith("VERIFIED")
    assert traj.final_report.meaningfully_verified
    assert guard_code_unaltered(SOURCE, traj.final_source).ok
    assert len(traj.final_contract["ensures"]) == 3


def test_trajectory_is_byte_identical_on_rerun():
    assert run("success").to_json() == run("success").to_json()
    assert run("vacuous").to_json() == run("vacuous").to_json()


def test_vacuous_scenario_exhausts_refinement():
    traj = run("vacuous")
    assert traj.outcome is Outcome.EXHAUSTED
    assert traj.refinement_cycles == 3
    assert len(traj.steps) == 6
    assert traj.final_report.post_comp == 0.0


def test_altered_scenario_is_guarded():
    traj = run("altered")
    assert traj.outcome is Outcome.GUARDED
    assert all(s.observation.startswith("CODE ALTERED") for s in traj.steps)


def test_replan_checkpoint_every_interval():
    rec = Recording(ScriptedProvider.from_file(AGENT / "vacuous.json"))
    traj = run(rec, AgentConfig(max_refinement_cycles=10, max_steps=9))
    assert traj.outcome is Outcome.EXHAUSTED and len(traj.steps) == 9
    assert [e["beforeStep"] for e in traj.events if e["type"] == "replan"] == [4, 8]
    checkpoints = [sum("PLANNING CHECKPOINT" in str(m.get("content")) for m in p) for p in rec.prompts]
    assert checkpoints == [0, 0, 0, 0, 1, 1, 1, 1, 2]
    assert rec.prompts[0][-1]["content"].startswith("STATE")


def test_malformed_reply_gets_one_corrective_retry():
    ok = {"tool": "verify_with_openjml", "arguments": {"ensures": ["true"]}}
    traj = run(ScriptedProvider([{"text": "I think..."}, ok, {"tool": "bogus"}, {"tool": "bogus"}]))
    assert traj.outcome is Outcome.PROVIDER_ERROR
    assert len(traj.steps) == 1
    assert [e["type"] for e in traj.events] == ["malformed", "malformed", "malformed"]


def test_harness_requires_current_verified_candidate():
    script = [
        {"tool": "run_spec_harness", "arguments": {}},
        {"tool": "task_complete", "arguments": {}},
        {"tool": "verify_with_openjml", "arguments": {"ensures": ["\\result == c"]}},
        {"tool": "run_spec_harness", "arguments": {}},
    ]
    traj = run(ScriptedProvider(script), AgentConfig(max_steps=4))
    obs = [s.observation.splitlines()[0] for s in traj.steps]
    assert obs == ["NOT VERIFIED", "REJECTED", "FAILED", "NOT VERIFIED"]
    assert traj.outcome is Outcome.EXHAUSTED


def test_task_complete_rejected_below_threshold():
    script = [
        {"tool": "verify_with_openjml", "arguments": {"ensures": ["true"]}},
        {"tool": "run_spec_harness", "arguments": {}},
        {"tool": "task_complete", "arguments": {}},
    ]
    traj = run(ScriptedProvider(script), AgentConfig(max_steps=3))
    assert traj.steps[2].observation.startswith("REJECTED")
    assert traj.outcome is Outcome.EXHAUSTED


def test_config_validation():
    with pytest.raises(ValueError):
        AgentConfig(max_steps=0)
    with pytest.raises(ValueError):
        AgentConfig(thresholds=(0.5, 1.5))
