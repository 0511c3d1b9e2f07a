"""Rebuild every committed golden file from the current code.

Review the diff by hand before committing: goldens freeze behavior.

    python3 scripts/regenerate_goldens.py
"""

import json
from pathlib import Path

from jmlharness.agent.render import truncate
from jmlharness.bench import BatchConfig, Mode, load_manifest, report_csv, run_batch
from jmlharness.harness import spec_harness_report
from jmlharness.jml.annotations import extract_contract
from jmlharness.testkit.suite import MethodSignature, TestSuite, save_suite
from jmlharness.values import Value

FIX = Path(__file__).resolve().parent.parent / "tests" / "fixtures"
CHANGECASE_PAIRS = [("b", "B"), ("B", "b"), ("!", "!"), ("0", "0"), ("|", "|")]


def changecase():
    sig = MethodSignature("changeCase", (("c", "char"),), "char")
    suite = TestSuite(sig, [((Value.char(i),), Value.char(o)) for i, o in CHANGECASE_PAIRS])
    save_suite(suite, FIX / "changecase" / "changecase.suite.json")
    source = (FIX / "changecase" / "ChangeCase.java").read_text(encoding="utf-8")
    contract, _ = extract_contract(source, "changeCase")
    report = spec_harness_report(contract, suite)
    text = json.dumps(report.to_dict(timing=False), indent=2) + "\n"
    (FIX / "changecase" / "golden_report.json").write_text(text, encoding="utf-8")


def minibench():
    tasks = load_manifest(FIX / "minibench" / "tasks.json")
    report = run_batch(tasks, BatchConfig(mode=Mode.HARNESS))
    (FIX / "minibench" / "golden.csv").write_text(report_csv(report), encoding="utf-8")


def render():
    log = (FIX / "logs" / "oversized.log").read_text(encoding="utf-8")
    (FIX / "logs" / "oversized.rendered.txt").write_text(truncate(log), encoding="utf-8")


if __name__ == "__main__":
    changecase()
    minibench()
    render()
    print("goldens rewritten under", FIX)
