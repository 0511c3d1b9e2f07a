import json
import shutil
from pathlib import Path

import pytest

from jmlharness.cli import EXIT_BACKEND, EXIT_FAIL, EXIT_OK, EXIT_USAGE, main, parse_loose_value
from jmlharness.values import Value

FIX = Path(__file__).parent / "fixtures"
CC = str(FIX / "changecase" / "ChangeCase.java")
SUITE = str(FIX / "changecase" / "changecase.suite.json")


def run(capsys, *argv):
    code = main(["--quiet", *argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse(capsys):
    code, out, _ = run(capsys, "parse", CC)
    assert code == EXIT_OK
    assert out.splitlines()[0] == "requires ((c >= 'A') && (c <= 'z'))"


def test_parse_bad_expression(tmp_path, capsys):
    p = tmp_path / "e.jml"
    p.write_text("x + ")
    code, _, err = run(capsys, "parse", str(p))
    assert code == EXIT_FAIL and "expected" in err


def test_eval(capsys):
    assert run(capsys, "eval", "c >= 'a'", "--env", '{"c": {"t": "char", "v": 98}}')[:2] == (EXIT_OK, "Holds\n")
    assert run(capsys, "eval", "\\result > n", "--env", '{"n": 3}', "--result", "2")[:2] == (EXIT_FAIL, "Violated\n")
    code, out, _ = run(capsys, "eval", "1 / n == 0", "--env", '{"n": 0}')
    assert code == EXIT_FAIL and out.startswith("EvalError(DivisionByZero)")


def test_eval_bad_env_is_usage_error(capsys):
    assert run(capsys, "eval", "true", "--env", "{oops")[0] == EXIT_USAGE


def test_mutate(capsys):
    code, out, _ = run(capsys, "mutate", '{"t": "char", "v": 98}')
    assert code == EXIT_OK
    assert [json.loads(l)["v"] for l in out.splitlines()] == [ord("c"), ord("a"), ord("B")]
    assert len(run(capsys, "mutate", "5", "--k", "2")[1].splitlines()) == 2


def test_harness_changecase(capsys, tmp_path):
    out_file = tmp_path / "r.json"
    code, _, _ = run(capsys, "harness", CC, "--suite", SUITE, "-o", str(out_file))
    assert code == EXIT_FAIL  # not meaningfully verified
    golden = json.loads((FIX / "changecase" / "golden_report.json").read_text())
    assert json.loads(out_file.read_text()) == golden


def test_verify_and_score(capsys):
    code, out, _ = run(capsys, "verify", CC, "--suite", SUITE)
    assert code == EXIT_OK and json.loads(out)["score"] == 1.0
    code, out, _ = run(capsys, "score", str(FIX / "logs" / "two_failures.log"), "--exit-code", "1")
    assert code == EXIT_FAIL and out.splitlines()[0] == "0.1"


def test_verify_openjml_missing_is_exit_3(capsys, monkeypatch, tmp_path):
    monkeypatch.delenv("JMLHARNESS_OPENJML", raising=False)
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"verifier": {"executable": "/nonexistent/openjml"}}))
    code, _, err = run(capsys, "--config", str(cfg), "verify", CC, "--backend", "openjml")
    assert code == EXIT_BACKEND and "unavailable" in err


def test_bad_config_is_exit_2(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text('{"nope": 1}')
    assert run(capsys, "--config", str(cfg), "eval", "true")[0] == EXIT_USAGE


def test_normalize(capsys):
    code, out, _ = run(capsys, "normalize", CC)
    assert code == EXIT_OK
    assert "public class Solution" in out and "public char solve (char c)" in out


def test_agent(capsys):
    code, out, _ = run(capsys, "agent", str(FIX / "agent" / "ChangeCase.java"), "--suite", SUITE,
                       "--script", str(FIX / "agent" / "success.json"))
    assert code == EXIT_OK
    assert json.loads(out)["outcome"] == "Completed"


def test_agent_needs_script(capsys):
    assert run(capsys, "agent", CC, "--suite", SUITE)[0] == EXIT_USAGE


def test_batch_to_stdout_and_dir(capsys, tmp_path):
    code, out, _ = run(capsys, "batch", str(FIX / "minibench" / "tasks.json"))
    assert code == EXIT_OK
    assert out == (FIX / "minibench" / "golden.csv").read_text()
    code, _, _ = run(capsys, "batch", str(FIX / "minibench" / "tasks.json"), "--out", str(tmp_path), "--formats", "csv")
    assert (tmp_path / "batch_report.csv").exists() and not (tmp_path / "batch_report.json").exists()


def test_version(capsys):
    with pytest.raises(SystemExit) as info:
        main(["--version"])
    assert info.value.code == 0
    assert "pattern table v1" in capsys.readouterr().out


@pytest.mark.parametrize("raw,expected", [
    (3, Value.int32(3)), (2**40, Value.int64(2**40)), (True, Value.bool(True)), ("s", Value.string("s")),
    (None, Value.null()), ([1, 2], Value.array("int32", [Value.int32(1), Value.int32(2)])),
    ({"t": "char", "v": 97}, Value.char("a")),
])
def test_parse_loose_value(raw, expected):
    assert parse_loose_value(raw) == expected


def test_console_script_installed():
    assert shutil.which("jmlharness") is not None
