"""Correctness and completeness of a contract against a test suite.

Each check is a Hoare triple whose program is a harness stub: the method
body replaced by literal assignments of one test's inputs (and, for
postconditions, its output).  Postcondition correctness asks whether every
valid pair satisfies the ensures clauses; completeness asks how many
mutated outputs they reject.  The precondition metrics are the analogues
over valid and invalid inputs.
"""

from __future__ import annotations

import enum
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Protocol

from .errors import BackendUnavailable
from .jml import ast
from .jml.annotations import Contract
from .jml.evaluator import DEFAULT_BUDGET, ArithMode, Env, Reason, Verdict, eval_error, evaluate, HOLDS, VIOLATED
from .jml.printer import print_expression
from .testkit.mutation import MutationConfig, build_mutant_pool
from .testkit.suite import MethodSignature, TestSuite
from .values import conforms, java_literal, java_type, value_to_json

STUB_CLASS = "__SpecHarnessStub"
RESULT_LOCAL = "__sh_result"
DEFAULT_THRESHOLDS = (0.5, 0.5)
REPORT_VERSION = 1


class EmptySuite(ValueError):
    pass


class EmptyMutantPool(ValueError):
    pass


class EmptyInvalidSet(ValueError):
    pass


class StubTypeMismatch(ValueError):
    pass


class StubKind(str, enum.Enum):
    POST = "Post"
    PRE = "Pre"


@dataclass(frozen=True)
class StubCheck:
    kind: StubKind
    assignments: tuple  # ((name, Value), ...); Post stubs end with the result binding
    predicate: ast.Expr
    rendered_source: Optional[str] = None

    def __post_init__(self):
        names = [n for n, _ in self.assignments]
        if self.kind is StubKind.POST and RESULT_LOCAL not in names:
            raise ValueError("a postcondition stub must bind the result")
        if self.kind is StubKind.PRE and RESULT_LOCAL in names:
            raise ValueError("a precondition stub binds parameters only")

    def env(self) -> Env:
        bindings = {n: v for n, v in self.assignments if n != RESULT_LOCAL}
        result = dict(self.assignments).get(RESULT_LOCAL)
        return Env(bindings, result, bindings)


def _check_arity(sig: MethodSignature, inputs) -> None:
    if len(inputs) != len(sig.params):
        raise StubTypeMismatch(f"{sig.name} takes {len(sig.params)} arguments, got {len(inputs)}")
    for (name, tag), v in zip(sig.params, inputs):
        if not conforms(v, tag):
            raise StubTypeMismatch(f"{name}: {v!r} is not a {tag}")


def _java_predicate(e: ast.Expr) -> str:
    """Rewrite for the stub: ``\\result`` becomes the result local, ``\\old(e)`` becomes e."""

    def fn(node):
        if isinstance(node, ast.Result):
            return ast.Ident(RESULT_LOCAL)
        if isinstance(node, ast.Old):
            return node.inner
        return None

    return print_expression(ast.substitute(e, fn))


def render_stub(kind: StubKind, sig: MethodSignature, assignments, predicate: ast.Expr) -> str:
    types = dict(sig.params)
    types[RESULT_LOCAL] = sig.return_type
    lines = [f"public class {STUB_CLASS} {{", "    public static void check() {"]
    for name, v in assignments:
        tag = types[name]
        lines.append(f"        {java_type(tag)} {name} = {java_literal(v, tag)};")
    lines.append(f"        //@ assert {_java_predicate(predicate)};")
    lines += ["    }", "}", ""]
    return "\n".join(lines)


def build_post_stub(sig: MethodSignature, contract: Contract, pair, render: bool = False) -> StubCheck:
    inputs, output = pair
    _check_arity(sig, inputs)
    if not conforms(output, sig.return_type):
        raise StubTypeMismatch(f"result {output!r} is not a {sig.return_type}")
    assignments = tuple(zip(sig.param_names, inputs)) + ((RESULT_LOCAL, output),)
    pred = contract.postcondition
    src = render_stub(StubKind.POST, sig, assignments, pred) if render else None
    return StubCheck(StubKind.POST, assignments, pred, src)


def build_pre_stub(sig: MethodSignature, contract: Contract, inputs, render: bool = False) -> StubCheck:
    _check_arity(sig, inputs)
    assignments = tuple(zip(sig.param_names, inputs))
    pred = contract.precondition
    src = render_stub(StubKind.PRE, sig, assignments, pred) if render else None
    return StubCheck(StubKind.PRE, assignments, pred, src)


# backends ---------------------------------------------------------------------

class StubBackend(Protocol):
    name: str
    renders: bool

    def check(self, stub: StubCheck) -> Verdict: ...

    def identity(self) -> str: ...


@dataclass
class BuiltinBackend:
    """Decides a stub by evaluating its predicate in the assigned state."""

    budget: int = DEFAULT_BUDGET
    mode: ArithMode = ArithMode.MATH
    name: str = field(default="builtin", init=False)
    renders: bool = field(default=False, init=False)

    def available(self) -> bool:
        return True

    def check(self, stub: StubCheck) -> Verdict:
        return evaluate(stub.predicate, stub.env(), self.budget, self.mode)

    def identity(self) -> str:
        return f"builtin:{ArithMode(self.mode).value}:budget={self.budget}"


class OpenJMLBackend:
    """Decides a stub by asking OpenJML to prove its assert."""

    name = "openjml"
    renders = True

    def __init__(self, verifier=None):
        from .verify.openjml import OpenJMLVerifier

        self.verifier = verifier or OpenJMLVerifier()

    def available(self) -> bool:
        return self.verifier.available()

    def identity(self) -> str:
        return self.verifier.identity()

    def check(self, stub: StubCheck) -> Verdict:
        from .verify.result import Category, Status

        self.verifier.require()
        if stub.rendered_source is None:
            raise ValueError("stub was built without rendered source")
        r = self.verifier.run(stub.rendered_source, file_stem=STUB_CLASS)
        if r.status is Status.VERIFIED:
            return HOLDS
        if r.status is Status.TIMEOUT:
            return eval_error(Reason.BACKEND_FAILURE, detail="verifier timeout")
        if r.status is Status.TOOL_ERROR:
            return eval_error(Reason.BACKEND_FAILURE, detail=r.raw_log[-400:])
        if r.syntax_errors:
            return eval_error(Reason.BACKEND_FAILURE, detail="stub rejected: " + r.syntax_errors[0].message)
        cats = {e.category for e in r.verification_errors}
        if cats == {Category.ASSERT}:
            return VIOLATED
        for e in r.verification_errors:
            if "DivideByZero" in e.message:
                return eval_error(Reason.DIVISION_BY_ZERO, detail=e.message)
            if "Index" in e.message:
                return eval_error(Reason.INDEX_OUT_OF_BOUNDS, detail=e.message)
            if e.category is Category.NULLNESS:
                return eval_error(Reason.NULL_DEREFERENCE, detail=e.message)
        return eval_error(Reason.BACKEND_FAILURE, detail="; ".join(e.message for e in r.verification_errors))


def check_stub(stub: StubCheck, backend: StubBackend) -> Verdict:
    if hasattr(backend, "available") and not backend.available():
        raise BackendUnavailable(f"backend {backend.name} is not available")
    return backend.check(stub)


# metrics ----------------------------------------------------------------------

def _run_checks(stubs, backend, workers: int):
    """Check every stub in order; returns (verdicts, per-check milliseconds)."""

    def one(stub):
        t0 = time.perf_counter()
        v = check_stub(stub, backend)
        return v, (time.perf_counter() - t0) * 1000

    if workers > 1 and len(stubs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            out = list(pool.map(one, stubs))
    else:
        out = [one(s) for s in stubs]
    return [v for v, _ in out], [ms for _, ms in out]


def _renders(backend) -> bool:
    return bool(getattr(backend, "renders", False))


def post_correctness(contract: Contract, suite: TestSuite, backend: StubBackend = None, workers: int = 1, _timings=None):
    """Share of valid pairs whose output satisfies the postcondition.

    Undecidable checks (EvalError) count as not holding.
    """
    backend = backend or BuiltinBackend()
    if not suite.valid_pairs:
        raise EmptySuite("no valid pairs")
    stubs = [build_post_stub(suite.signature, contract, (p.inputs, p.output), _renders(backend)) for p in suite.valid_pairs]
    verdicts, ms = _run_checks(stubs, backend, workers)
    if _timings is not None:
        _timings.extend(ms)
    return sum(v.holds for v in verdicts) / len(verdicts), verdicts


def post_completeness(contract: Contract, suite: TestSuite, cfg: MutationConfig = MutationConfig(),
                      backend: StubBackend = None, workers: int = 1, _timings=None, _pool=None):
    """Share of mutated outputs the postcondition rejects: ``|T2| / |T1|``.

    Undecidable checks count as not rejected.
    """
    backend = backend or BuiltinBackend()
    if not suite.valid_pairs:
        raise EmptySuite("no valid pairs")
    pool, skipped = build_mutant_pool(suite, cfg)
    if not pool:
        raise EmptyMutantPool("no valid pair has a mutable output")
    if _pool is not None:
        _pool.extend([pool, skipped])
    stubs = [build_post_stub(suite.signature, contract, (m.inputs, m.output), _renders(backend)) for m in pool]
    verdicts, ms = _run_checks(stubs, backend, workers)
    if _timings is not None:
        _timings.extend(ms)
    return sum(v.violated for v in verdicts) / len(verdicts), verdicts


def pre_correctness(contract: Contract, suite: TestSuite, backend: StubBackend = None, workers: int = 1, _timings=None):
    """Share of valid inputs the precondition admits."""
    backend = backend or BuiltinBackend()
    inputs = suite.valid_inputs
    if not inputs:
        raise EmptySuite("no valid inputs")
    stubs = [build_pre_stub(suite.signature, contract, i, _renders(backend)) for i in inputs]
    verdicts, ms = _run_checks(stubs, backend, workers)
    if _timings is not None:
        _timings.extend(ms)
    return sum(v.holds for v in verdicts) / len(verdicts), verdicts


def pre_completeness(contract: Contract, suite: TestSuite, backend: StubBackend = None, workers: int = 1, _timings=None):
    """Share of known-invalid inputs the precondition rejects."""
    backend = backend or BuiltinBackend()
    if not suite.invalid_inputs:
        raise EmptyInvalidSet("no invalid inputs; precondition completeness is not applicable")
    stubs = [build_pre_stub(suite.signature, contract, i, _renders(backend)) for i in suite.invalid_inputs]
    verdicts, ms = _run_checks(stubs, backend, workers)
    if _timings is not None:
        _timings.extend(ms)
    return sum(v.violated for v in verdicts) / len(verdicts), verdicts


# report -----------------------------------------------------------------------

@dataclass
class HarnessReport:
    post_corr: float
    post_comp: float
    pre_corr: float
    pre_comp: Optional[float]  # None when there are no invalid inputs
    pair_verdicts: list
    mutant_verdicts: list
    pre_verdicts: list
    invalid_verdicts: list
    pool_sizes: dict  # T, T1, T2, T+, T-
    eval_errors: dict
    contract: Contract
    suite: TestSuite = field(repr=False, default=None)
    mutants: list = field(repr=False, default_factory=list)
    skipped_pairs: list = field(default_factory=list)
    thresholds: tuple = DEFAULT_THRESHOLDS
    backend: str = "builtin"
    mutation: MutationConfig = MutationConfig()
    timings: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("post_corr", "post_comp", "pre_corr", "pre_comp"):
            v = getattr(self, name)
            if v is not None and not 0.0 <= v <= 1.0:
                raise ValueError(f"{name}={v} outside [0, 1]")
        if self.pool_sizes["T2"] > self.pool_sizes["T1"]:
            raise ValueError("|T2| cannot exceed |T1|")

    @property
    def pre_comp_applicable(self) -> bool:
        return self.pre_comp is not None

    @property
    def meaningfully_verified(self) -> bool:
        return meaningfully_verified(self, self.thresholds)

    def scores(self) -> dict:
        return {"postCorr": self.post_corr, "postComp": self.post_comp, "preCorr": self.pre_corr, "preComp": self.pre_comp}

    def to_dict(self, timing: bool = True, items: bool = True) -> dict:
        d = {
            "reportVersion": REPORT_VERSION,
            "backend": self.backend,
            "contract": {
                "requires": [print_expression(e) for e in self.contract.requires],
                "ensures": [print_expression(e) for e in self.contract.ensures],
            },
            "scores": self.scores(),
            "preCompApplicable": self.pre_comp_applicable,
            "thresholds": {"postCorr": self.thresholds[0], "postComp": self.thresholds[1]},
            "meaningfullyVerified": self.meaningfully_verified,
            "poolSizes": dict(self.pool_sizes),
            "evalErrors": dict(self.eval_errors),
            "skippedPairs": list(self.skipped_pairs),
            "mutation": self.mutation.to_json(),
        }
        if items:
            suite = self.suite
            d["pairVerdicts"] = [
                {"pair": i, **v.to_dict()} for i, v in enumerate(self.pair_verdicts)
            ]
            d["mutantVerdicts"] = [
                {"pair": m.pair_index, "output": value_to_json(m.output), **v.to_dict()}
                for m, v in zip(self.mutants, self.mutant_verdicts)
            ]
            d["preVerdicts"] = [{"input": i, **v.to_dict()} for i, v in enumerate(self.pre_verdicts)]
            d["invalidVerdicts"] = [{"input": i, **v.to_dict()} for i, v in enumerate(self.invalid_verdicts)]
            if suite is not None:
                d["suite"] = suite.to_json()
        if timing:
            d["timingsMs"] = {k: [round(x, 3) for x in v] for k, v in self.timings.items()}
        return d


def _errors(verdicts) -> int:
    return sum(v.is_error for v in verdicts)


def spec_harness_report(contract: Contract, suite: TestSuite, cfg: MutationConfig = MutationConfig(),
                        backend: StubBackend = None, thresholds=DEFAULT_THRESHOLDS, workers: int = 1) -> HarnessReport:
    """All four metrics for one contract; precondition completeness is None without T-."""
    backend = backend or BuiltinBackend()
    t_post, t_comp, t_pre, t_inv = [], [], [], []
    pool_info = []
    post_corr, pair_v = post_correctness(contract, suite, backend, workers, t_post)
    post_comp, mut_v = post_completeness(contract, suite, cfg, backend, workers, t_comp, pool_info)
    pre_corr, pre_v = pre_correctness(contract, suite, backend, workers, t_pre)
    try:
        pre_comp, inv_v = pre_completeness(contract, suite, backend, workers, t_inv)
    except EmptyInvalidSet:
        pre_comp, inv_v = None, []
    pool, skipped = pool_info
    sizes = {
        "T": len(suite.valid_pairs),
        "T1": len(pool),
        "T2": sum(v.violated for v in mut_v),
        "T+": len(suite.valid_inputs),
        "T-": len(suite.invalid_inputs),
    }
    return HarnessReport(
        post_corr=post_corr,
        post_comp=post_comp,
        pre_corr=pre_corr,
        pre_comp=pre_comp,
        pair_verdicts=pair_v,
        mutant_verdicts=mut_v,
        pre_verdicts=pre_v,
        invalid_verdicts=inv_v,
        pool_sizes=sizes,
        eval_errors={
            "postCorr": _errors(pair_v),
            "postComp": _errors(mut_v),
            "preCorr": _errors(pre_v),
            "preComp": _errors(inv_v),
        },
        contract=contract,
        suite=suite,
        mutants=pool,
        skipped_pairs=skipped,
        thresholds=tuple(thresholds),
        backend=backend.identity(),
        mutation=cfg,
        timings={"postCorr": t_post, "postComp": t_comp, "preCorr": t_pre, "preComp": t_inv},
    )


def meaningfully_verified(report, thresholds=DEFAULT_THRESHOLDS) -> bool:
    """``postCorr >= tau_corr and postComp >= tau_comp`` (both bounds inclusive).

    ``report`` is a HarnessReport or a ``(postCorr, postComp)`` pair.
    """
    if isinstance(report, HarnessReport):
        corr, comp = report.post_corr, report.post_comp
    else:
        corr, comp = report
    tau_corr, tau_comp = thresholds
    return corr >= tau_corr and comp >= tau_comp
