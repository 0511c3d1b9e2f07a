"""A verifier stand-in that needs no Java toolchain.

It checks what can be checked without a prover: the annotation parses, every
name resolves, and the contract holds on each known-correct execution in a
test suite.  Findings are written as OpenJML-style diagnostics and classified
by the same pattern table, so scores and feedback are produced exactly as for
the external tool.  Passing here is necessary, not sufficient, for a proof.
"""

from __future__ import annotations

import time

from ..javalex import LexError, MethodNotFound, AmbiguousMethod, find_methods, line_of
from ..jml import ast
from ..jml.annotations import NoContractFound, extract_contract
from ..jml.evaluator import DEFAULT_BUDGET, ArithMode, Env, Reason, evaluate
from ..jml.lexer import JmlSyntaxError, UnsupportedConstruct
from ..testkit.suite import TestSuite
from .classify import classify_output
from .openjml import has_jml, primary_class_name
from .result import Status, VerifierResult

_OBLIGATION = {
    Reason.DIVISION_BY_ZERO: "PossiblyDivideByZero",
    Reason.INDEX_OUT_OF_BOUNDS: "PossiblyTooLargeIndex",
    Reason.NULL_DEREFERENCE: "PossiblyNullDeReference",
}


class BuiltinVerifier:
    name = "builtin"

    def __init__(self, suite: TestSuite | None = None, budget: int = DEFAULT_BUDGET, mode: ArithMode = ArithMode.MATH):
        self.suite = suite
        self.budget = budget
        self.mode = ArithMode(mode)

    def available(self) -> bool:
        return True

    def require(self) -> None:
        pass

    def identity(self) -> str:
        return f"builtin:{self.mode.value}"

    def verify(self, source: str, method: str | None = None) -> VerifierResult:
        if not source.strip():
            raise ValueError("empty source")
        if not has_jml(source):
            return VerifierResult(Status.EMPTY, raw_log="no JML annotations in source")
        start = time.perf_counter()
        lines = self._diagnose(source, method)
        raw = "\n".join(lines) + ("\n" if lines else "")
        e_s, e_v = classify_output(raw)
        status = Status.FAILED if (e_s or e_v) else Status.VERIFIED
        return VerifierResult(status, e_s, e_v, raw, (time.perf_counter() - start) * 1000, 1 if lines else 0)

    def _diagnose(self, source: str, method: str | None) -> list:
        fname = primary_class_name(source) + ".java"

        def diag(offset_or_line, kind, message, is_line=False):
            line = offset_or_line if is_line else line_of(source, offset_or_line)
            return f"{fname}:{line}: {kind}: {message}"

        try:
            methods = find_methods(source)
        except LexError as exc:
            return [diag(exc.position, "error", f"illegal start of expression ({exc})")]
        if method is None:
            method = self.suite.signature.name if self.suite else None
        if method is None:
            names = [m.name for m in methods]
            if len(names) != 1:
                return [diag(1, "error", "cannot find symbol: no single target method", True)]
            method = names[0]
        try:
            contract, _ = extract_contract(source, method)
        except (MethodNotFound, AmbiguousMethod) as exc:
            return [diag(1, "error", f"cannot find symbol: method {exc}", True)]
        except NoContractFound:
            return []
        except JmlSyntaxError as exc:
            return [diag(exc.position, "error", f"'{' or '.join(exc.expected)}' expected")]
        except UnsupportedConstruct as exc:
            if "\\result" in exc.name:
                return [diag(exc.position, "error", f"{exc.name} may not be used here")]
            return [diag(exc.position, "verify", f"builtin checker cannot decide: {exc.name}")]
        decl = next(m for m in methods if m.name == method)
        method_line = line_of(source, decl.header_start)
        params = {name for _, name in decl.params}

        out = []
        for clause in contract.requires + contract.ensures:
            for name in sorted(ast.free_identifiers(clause) - params):
                out.append(diag(_offset(clause, decl.header_start), "error", f"cannot find symbol: variable {name}"))
        if out or self.suite is None:
            return out

        clause_lines = [line_of(source, _offset(c, decl.header_start)) for c in contract.ensures]
        reported = set()

        def report(key, text):
            if key not in reported:
                reported.add(key)
                out.append(text)

        for pair in self.suite.valid_pairs:
            bindings = dict(zip(self.suite.signature.param_names, pair.inputs))
            pre = evaluate(contract.precondition, Env(bindings), self.budget, self.mode)
            if pre.is_error:
                self._report_error(pre, source, decl.header_start, report, diag)
                continue
            if pre.violated:
                continue
            env = Env(bindings, pair.output, bindings)
            for clause, cline in zip(contract.ensures, clause_lines):
                v = evaluate(clause, env, self.budget, self.mode)
                if v.violated:
                    report(
                        ("post", cline),
                        diag(method_line, "verify", f"The prover cannot establish an assertion (Postcondition: {fname}:{cline}:) in method {method}", True),
                    )
                elif v.is_error:
                    self._report_error(v, source, decl.header_start, report, diag)
        return out

    @staticmethod
    def _report_error(v, source, fallback, report, diag):
        offset = v.span[0] if v.span else fallback
        line = line_of(source, offset)
        if v.reason is Reason.TYPE_MISMATCH:
            report(("type", line), diag(offset, "error", f"bad operand types: {v.detail}"))
        elif v.reason in _OBLIGATION:
            report(
                (v.reason, line),
                diag(offset, "verify", f"The prover cannot establish an assertion ({_OBLIGATION[v.reason]}) in method"),
            )
        else:
            report((v.reason, line), diag(offset, "verify", f"builtin checker cannot decide: {v.reason.value} {v.detail}"))


def _offset(e: ast.Expr, fallback: int) -> int:
    for node in ast.walk(e):
        if node.span is not None:
            return node.span[0]
    return fallback
