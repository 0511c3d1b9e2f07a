from pathlib import Path

import pytest

from jmlharness.javalex import AmbiguousMethod, MethodNotFound
from jmlharness.jml import JmlSyntaxError, UnsupportedConstruct, parse_expression, print_expression
from jmlharness.jml import ast
from jmlharness.jml.annotations import (
    Contract, NoContractFound, annotate_method, annotate_method_text, extract_contract, parse_contract,
    strip_annotations,
)

FIX = Path(__file__).parent / "fixtures"
CHANGECASE = (FIX / "changecase" / "ChangeCase.java").read_text(encoding="utf-8")
STRIPPED = (FIX / "agent" / "ChangeCase.java").read_text(encoding="utf-8")


def test_changecase_clauses():
    contract, spans = extract_contract(CHANGECASE, "changeCase")
    assert [print_expression(e) for e in contract.requires] == ["((c >= 'A') && (c <= 'z'))"]
    assert [print_expression(e) for e in contract.ensures] == [
        "(((c >= 'a') && (c <= 'z')) ==> ((\\result >= 'A') && (\\result <= 'Z')))"
    ]
    assert len(spans) == 1
    assert "requires" in contract.raw_text


def test_changecase_clauses_roundtrip():
    contract, _ = extract_contract(CHANGECASE, "changeCase")
    for e in contract.requires + contract.ensures:
        assert parse_expression(print_expression(e)) == e


def test_spans_point_into_source():
    contract, _ = extract_contract(CHANGECASE, "changeCase")
    s, e = contract.ensures[0].span
    assert CHANGECASE[s:e].startswith("(c >= 'a'")


def test_strip_gives_plain_class():
    assert strip_annotations(CHANGECASE) == STRIPPED


def test_strip_without_annotations_is_identity():
    assert strip_annotations(STRIPPED) == STRIPPED


def test_annotate_then_extract():
    contract = Contract.from_clauses(["c != ' '"], ["\\result != ' '"])
    out = annotate_method(STRIPPED, "changeCase", contract)
    assert extract_contract(out, "changeCase")[0] == contract
    assert strip_annotations(out) == STRIPPED


def test_annotate_replaces_existing():
    out = annotate_method_text(CHANGECASE, "changeCase", [], ["\\result == c"])
    contract, _ = extract_contract(out, "changeCase")
    assert contract.requires == ()
    assert len(contract.ensures) == 1
    assert strip_annotations(out) == STRIPPED


def test_missing_method_and_contract():
    with pytest.raises(MethodNotFound):
        extract_contract(STRIPPED, "nope")
    with pytest.raises(NoContractFound):
        extract_contract(STRIPPED, "changeCase")


def test_overloads_are_ambiguous():
    src = "class A { //@ ensures true;\n int f(int x) { return x; }\n int f(long x) { return 0; } }"
    with pytest.raises(AmbiguousMethod):
        extract_contract(src, "f")


def test_other_clauses_ignored():
    c = parse_contract("requires x > 0; assignable \\nothing; ensures \\result > 0;")
    assert len(c.requires) == 1 and len(c.ensures) == 1


def test_empty_lists_mean_true():
    c = parse_contract("pure")
    assert c.precondition == ast.TRUE and c.postcondition == ast.TRUE


def test_exceptional_cases_skipped():
    c = parse_contract(
        "normal_behavior requires x > 0; ensures \\result > 0; "
        "also exceptional_behavior requires x <= 0; signals (Exception e) true;"
    )
    assert [print_expression(e) for e in c.requires] == ["(x > 0)"]


def test_also_desugars_into_guarded_posts():
    c = parse_contract("requires x > 0; ensures \\result == 1; also requires x < 0; ensures \\result == -1;")
    assert print_expression(c.precondition) == "((x > 0) || (x < 0))"
    assert [print_expression(e) for e in c.ensures] == [
        "(\\old((x > 0)) ==> (\\result == 1))",
        "(\\old((x < 0)) ==> (\\result == (-1)))",
    ]


def test_result_not_allowed_in_requires():
    with pytest.raises((JmlSyntaxError, UnsupportedConstruct)):
        parse_contract("requires \\result > 0;")


def test_clause_syntax_error_offset_is_absolute():
    text = "requires x > 0;\nensures x + ;"
    with pytest.raises(JmlSyntaxError) as info:
        parse_contract(text)
    assert info.value.position == text.index(";", text.index("x +"))
