"""Walk through the ChangeCase example: verify, score with the harness, print a table.

    python3 scripts/changecase_demo.py
"""

from pathlib import Path

from jmlharness.harness import spec_harness_report
from jmlharness.jml.annotations import extract_contract
from jmlharness.jml.printer import print_expression
from jmlharness.testkit.suite import load_suite
from jmlharness.values import format_value
from jmlharness.verify import BuiltinVerifier, graduated_score

FIX = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "changecase"


def main():
    source = (FIX / "ChangeCase.java").read_text(encoding="utf-8")
    suite = load_suite(FIX / "changecase.suite.json")
    contract, _ = extract_contract(source, "changeCase")
    for e in contract.requires:
        print("requires", print_expression(e))
    for e in contract.ensures:
        print("ensures ", print_expression(e))

    result = BuiltinVerifier(suite).verify(source, "changeCase")
    print(f"\nverifier: {result.status.value}, score {graduated_score(result)[0]}")

    rep = spec_harness_report(contract, suite)
    print("\npair          post   pre")
    for p, post, pre in zip(suite.valid_pairs, rep.pair_verdicts, rep.pre_verdicts):
        print(f"{format_value(p.inputs[0]):>4} -> {format_value(p.output):<5} {str(post):<6} {pre}")
    print("\nmutants rejected:", ", ".join(
        f"{format_value(m.output)} (pair {m.pair_index})" for m, v in zip(rep.mutants, rep.mutant_verdicts) if v.violated
    ) or "none")
    for k, v in rep.scores().items():
        print(f"{k:<9} {'n/a' if v is None else f'{v:.4f}'}")
    print("meaningfully verified:", rep.meaningfully_verified)


if __name__ == "__main__":
    main()
