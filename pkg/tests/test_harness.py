import json
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jmlharness.harness import (
    RESULT_LOCAL, STUB_CLASS, BuiltinBackend, EmptyInvalidSet, EmptySuite, HarnessReport, OpenJMLBackend,
    StubCheck, StubKind, StubTypeMismatch, build_post_stub, build_pre_stub, meaningfully_verified,
    post_completeness, post_correctness, pre_completeness, pre_correctness, spec_harness_report,
)
from jmlharness.jml import Reason
from jmlharness.jml.annotations import Contract, extract_contract
from jmlharness.testkit import MethodSignature, MutationConfig, TestSuite, build_mutant_pool, load_suite
from jmlharness.values import Value
from jmlharness.verify.result import Category, ClassifiedError, Status, VerifierResult

from strategies import clauses, int_suite

FIX = Path(__file__).parent / "fixtures" / "changecase"
SUITE = load_suite(FIX / "changecase.suite.json")
CONTRACT = extract_contract((FIX / "ChangeCase.java").read_text(encoding="utf-8"), "changeCase")[0]


def oracle_post(c: str, r: str) -> bool:
    # hand translation of the ChangeCase ensures clause
    return not ("a" <= c <= "z") or ("A" <= r <= "Z")


def oracle_pre(c: str) -> bool:
    return "A" <= c <= "z"


def oracle_mutants(o: str):
    # +1, -1 and a case flip for letters, deduplicated against o
    out = []
    for m in (chr(ord(o) + 1), chr(ord(o) - 1), o.swapcase() if o.isalpha() else o):
        if m != o and m not in out:
            out.append(m)
    return out


def test_changecase_against_brute_force_oracle():
    pairs = [(chr(p.inputs[0].v), chr(p.output.v)) for p in SUITE.valid_pairs]
    pool = [(c, m) for c, o in pairs for m in oracle_mutants(o)]
    expected_comp = sum(not oracle_post(c, m) for c, m in pool) / len(pool)
    expected_corr = sum(oracle_post(c, o) for c, o in pairs) / len(pairs)
    expected_pre = sum(oracle_pre(c) for c, _ in pairs) / len(pairs)
    rep = spec_harness_report(CONTRACT, SUITE)
    assert len(pool) == rep.pool_sizes["T1"] == 12
    assert rep.post_comp == expected_comp == 1 / 12
    assert rep.post_corr == expected_corr == 1.0
    assert rep.pre_corr == expected_pre == 0.4
    assert rep.pre_comp is None and not rep.pre_comp_applicable
    assert not rep.meaningfully_verified


def test_changecase_report_matches_golden():
    golden = json.loads((FIX / "golden_report.json").read_text(encoding="utf-8"))
    assert spec_harness_report(CONTRACT, SUITE).to_dict(timing=False) == golden


def test_only_b_upper_mutant_rejected():
    rep = spec_harness_report(CONTRACT, SUITE)
    rejected = [m for m, v in zip(rep.mutants, rep.mutant_verdicts) if v.violated]
    assert [(m.pair_index, chr(m.output.v)) for m in rejected] == [(0, "b")]


def test_stub_construction():
    sig = SUITE.signature
    stub = build_post_stub(sig, CONTRACT, (SUITE.valid_pairs[0].inputs, SUITE.valid_pairs[0].output), render=True)
    assert stub.assignments[-1] == (RESULT_LOCAL, Value.char("B"))
    env = stub.env()
    assert env.old() == env.bindings
    src = stub.rendered_source
    assert f"public class {STUB_CLASS}" in src
    assert "char c = 'b';" in src
    assert f"char {RESULT_LOCAL} = 'B';" in src
    assert "//@ assert" in src and "\\result" not in src
    pre = build_pre_stub(sig, CONTRACT, SUITE.valid_pairs[0].inputs)
    assert pre.kind is StubKind.PRE and pre.rendered_source is None


def test_stub_old_is_stripped_in_rendering():
    c = Contract.from_clauses([], ["\\result == \\old(c)"])
    src = build_post_stub(SUITE.signature, c, ((Value.char("a"),), Value.char("a")), render=True).rendered_source
    assert f"//@ assert ({RESULT_LOCAL} == c);" in src


def test_stub_invariants():
    with pytest.raises(ValueError):
        StubCheck(StubKind.POST, (("c", Value.char("a")),), CONTRACT.postcondition)
    with pytest.raises(StubTypeMismatch):
        build_post_stub(SUITE.signature, CONTRACT, ((Value.int32(1),), Value.char("a")))
    with pytest.raises(StubTypeMismatch):
        build_pre_stub(SUITE.signature, CONTRACT, ())


def test_eval_errors_count_against_contract():
    sig = MethodSignature("f", (("x", "int32"),), "int32")
    suite = TestSuite(sig, [((Value.int32(0),), Value.int32(0)), ((Value.int32(2),), Value.int32(1))], [(Value.int32(0),)])
    c = Contract.from_clauses(["10 / x > 0"], ["\\result == 10 / x"])
    corr, verdicts = post_correctness(c, suite)
    assert corr == 0.0
    assert verdicts[0].reason is Reason.DIVISION_BY_ZERO
    comp, _ = post_completeness(c, suite)
    # the four mutants of 1 are rejected; the two mutants of 0 error out and do not count
    assert comp == 4 / 6
    assert pre_correctness(c, suite)[0] == 0.5
    assert pre_completeness(c, suite)[0] == 0.0
    rep = spec_harness_report(c, suite)
    assert rep.eval_errors == {"postCorr": 1, "postComp": 2, "preCorr": 1, "preComp": 1}


def test_empty_inputs_rejected():
    sig = MethodSignature("f", (("x", "int32"),), "int32")
    c = Contract()
    with pytest.raises(EmptySuite):
        post_correctness(c, TestSuite(sig))
    with pytest.raises(EmptyInvalidSet):
        pre_completeness(c, TestSuite(sig, [((Value.int32(1),), Value.int32(1))]))


def test_thresholds_inclusive():
    assert meaningfully_verified((0.5, 0.5))
    assert not meaningfully_verified((0.5, 0.4999))
    assert not meaningfully_verified((1.0, 1.0), (1.0, 1.01))


def test_report_invariants():
    rep = spec_harness_report(CONTRACT, SUITE)
    with pytest.raises(ValueError):
        HarnessReport(**{**rep.__dict__, "post_comp": 1.5})
    with pytest.raises(ValueError):
        HarnessReport(**{**rep.__dict__, "pool_sizes": {**rep.pool_sizes, "T2": 13}})


def test_parallel_checks_match_serial():
    a = spec_harness_report(CONTRACT, SUITE).to_dict(timing=False)
    b = spec_harness_report(CONTRACT, SUITE, workers=4).to_dict(timing=False)
    assert a == b


def test_timings_reported():
    d = spec_harness_report(CONTRACT, SUITE).to_dict()
    assert len(d["timingsMs"]["postComp"]) == 12


@settings(max_examples=60, deadline=None)
@given(int_suite(), st.lists(clauses, max_size=3), clauses)
def test_strengthening_is_monotone(suite, phi, extra):
    base = Contract.from_clauses([], phi)
    strong = Contract.from_clauses([], phi + [extra])
    a, b = spec_harness_report(base, suite), spec_harness_report(strong, suite)
    assert b.post_corr <= a.post_corr
    assert b.post_comp >= a.post_comp


@settings(max_examples=60, deadline=None)
@given(int_suite(), clauses)
def test_postcomp_is_t2_over_t1(suite, phi):
    rep = spec_harness_report(Contract.from_clauses([], [phi]), suite)
    pool, _ = build_mutant_pool(suite, MutationConfig())
    assert rep.pool_sizes["T1"] == len(pool)
    assert rep.post_comp == rep.pool_sizes["T2"] / rep.pool_sizes["T1"]


# external backend verdict mapping, with a fake verifier -------------------------

class FakeVerifier:
    def __init__(self, result):
        self.result = result
        self.sources = []

    def available(self):
        return True

    def require(self):
        pass

    def identity(self):
        return "fake"

    def run(self, source, file_stem=None):
        self.sources.append((file_stem, source))
        return self.result


def _err(cat, msg):
    return ClassifiedError(cat, msg, 5, "", "x")


@pytest.mark.parametrize("result,expected", [
    (VerifierResult(Status.VERIFIED), "Holds"),
    (VerifierResult(Status.FAILED, (), (_err(Category.ASSERT, "assertion"),)), "Violated"),
    (VerifierResult(Status.FAILED, (), (_err(Category.ARITHMETIC, "PossiblyDivideByZero"),)), Reason.DIVISION_BY_ZERO),
    (VerifierResult(Status.FAILED, (), (_err(Category.NULLNESS, "PossiblyNullDeReference"),)), Reason.NULL_DEREFERENCE),
    (VerifierResult(Status.FAILED, (_err(Category.SYNTAX, "';' expected"),), ()), Reason.BACKEND_FAILURE),
    (VerifierResult(Status.TIMEOUT), Reason.BACKEND_FAILURE),
    (VerifierResult(Status.TOOL_ERROR, exit_code=2), Reason.BACKEND_FAILURE),
])
def test_openjml_backend_mapping(result, expected):
    fake = FakeVerifier(result)
    backend = OpenJMLBackend(fake)
    stub = build_post_stub(SUITE.signature, CONTRACT, ((Value.char("b"),), Value.char("B")), render=True)
    v = backend.check(stub)
    if isinstance(expected, Reason):
        assert v.reason is expected
    else:
        assert v.kind == expected
    assert fake.sources[0][0] == STUB_CLASS


def test_builtin_backend_identity():
    assert BuiltinBackend().identity().startswith("builtin:math")
