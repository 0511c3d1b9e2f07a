"""Concrete three-valued evaluation of JML expressions.

With every variable bound to a concrete value, validity of the triple
``{true} x := i; y := o {P}`` is just the truth of ``P`` in that state, so
checking a harness stub reduces to evaluating its predicate here.
"""

from __future__ import annotations

import enum
import math
import struct
from dataclasses import dataclass, field
from typing import Mapping, Optional

from ..values import Value, element_type, is_array_type, wrap_int
from . import ast
from .printer import print_expression

DEFAULT_BUDGET = 100_000


class Reason(str, enum.Enum):
    UNSUPPORTED_CONSTRUCT = "UnsupportedConstruct"
    UNBOUNDED_QUANTIFIER = "UnboundedQuantifier"
    DIVISION_BY_ZERO = "DivisionByZero"
    INDEX_OUT_OF_BOUNDS = "IndexOutOfBounds"
    TYPE_MISMATCH = "TypeMismatch"
    QUANTIFIER_BUDGET_EXCEEDED = "QuantifierBudgetExceeded"
    NULL_DEREFERENCE = "NullDereference"
    # external verifier could not decide the check (crash, timeout, rejected stub)
    BACKEND_FAILURE = "BackendFailure"


class ArithMode(str, enum.Enum):
    MATH = "math"  # unbounded integers
    JAVA = "java"  # 32/64-bit two's complement wraparound


@dataclass(frozen=True)
class Verdict:
    kind: str  # Holds | Violated | EvalError
    reason: Optional[Reason] = None
    span: Optional[tuple] = None
    detail: str = ""

    @property
    def holds(self) -> bool:
        return self.kind == "Holds"

    @property
    def violated(self) -> bool:
        return self.kind == "Violated"

    @property
    def is_error(self) -> bool:
        return self.kind == "EvalError"

    def __str__(self):
        if self.is_error:
            return f"EvalError({self.reason.value})"
        return self.kind

    def to_dict(self) -> dict:
        d = {"verdict": self.kind}
        if self.is_error:
            d["reason"] = self.reason.value
            d["detail"] = self.detail
            if self.span is not None:
                d["span"] = list(self.span)
        return d

    @staticmethod
    def from_dict(d: dict) -> "Verdict":
        if d["verdict"] == "EvalError":
            span = tuple(d["span"]) if d.get("span") is not None else None
            return Verdict("EvalError", Reason(d["reason"]), span, d.get("detail", ""))
        return Verdict(d["verdict"])


HOLDS = Verdict("Holds")
VIOLATED = Verdict("Violated")


def eval_error(reason: Reason, span=None, detail: str = "") -> Verdict:
    return Verdict("EvalError", reason, span, detail)


@dataclass
class Env:
    bindings: Mapping[str, Value] = field(default_factory=dict)
    result: Optional[Value] = None
    old_bindings: Optional[Mapping[str, Value]] = None

    def old(self) -> Mapping[str, Value]:
        return self.bindings if self.old_bindings is None else self.old_bindings


class _Fail(Exception):
    def __init__(self, reason: Reason, node: ast.Expr, detail: str = ""):
        self.reason = reason
        self.node = node
        self.detail = detail


# runtime values are (type, payload) pairs:
#   bool/char/int/long/double/string carry Python payloads, "null" carries None,
#   "array" carries the array Value itself (elements converted lazily)
_NUMERIC_RANK = {"char": 0, "int": 1, "long": 2, "double": 3}
_TAG_TO_RT = {"bool": "bool", "char": "char", "int32": "int", "int64": "long", "float64": "double", "string": "string"}


def _from_value(v: Value):
    if v.is_null:
        return ("null", None)
    if is_array_type(v.tag):
        return ("array", v)
    return (_TAG_TO_RT[v.tag], v.v)


def _float_bits(x: float) -> bytes:
    return struct.pack(">d", x)


class _Evaluator:
    def __init__(self, env: Env, budget: int, mode: ArithMode):
        self.env = env
        self.budget = budget
        self.mode = ArithMode(mode)
        self.locals: dict = {}
        self.in_old = False

    # numeric helpers
    def _fit(self, kind: str, n: int) -> int:
        if self.mode is ArithMode.JAVA:
            return wrap_int(n, 64 if kind == "long" else 32)
        return n

    def _num(self, node, v):
        if v[0] not in _NUMERIC_RANK:
            raise _Fail(Reason.TYPE_MISMATCH, node, f"numeric operand expected, got {v[0]}")
        return v

    def _promote(self, node, a, b):
        a = self._num(node, a)
        b = self._num(node, b)
        rank = max(_NUMERIC_RANK[a[0]], _NUMERIC_RANK[b[0]], 1)
        kind = ("char", "int", "long", "double")[rank]
        return kind, a[1], b[1]

    def _integral(self, node, v):
        if v[0] not in ("char", "int", "long"):
            raise _Fail(Reason.TYPE_MISMATCH, node, f"integral operand expected, got {v[0]}")
        return v

    def _bool(self, node, v) -> bool:
        if v[0] != "bool":
            raise _Fail(Reason.TYPE_MISMATCH, node, f"boolean expected, got {v[0]}")
        return v[1]

    # evaluation
    def eval(self, e: ast.Expr):
        method = getattr(self, "_eval_" + type(e).__name__)
        return method(e)

    def _eval_Literal(self, e: ast.Literal):
        if e.kind == "char":
            return ("char", ord(e.value))
        if e.kind == "null":
            return ("null", None)
        if e.kind == "double":
            return ("double", float(e.value))
        return (e.kind, e.value)

    def _eval_Ident(self, e: ast.Ident):
        if e.name in self.locals:
            return self.locals[e.name]
        scope = self.env.old() if self.in_old else self.env.bindings
        if e.name not in scope:
            raise _Fail(Reason.UNSUPPORTED_CONSTRUCT, e, f"unbound identifier {e.name}")
        return _from_value(scope[e.name])

    def _eval_Result(self, e: ast.Result):
        if self.env.result is None:
            raise _Fail(Reason.UNSUPPORTED_CONSTRUCT, e, "\\result outside a postcondition")
        if self.in_old:
            raise _Fail(Reason.UNSUPPORTED_CONSTRUCT, e, "\\result inside \\old")
        return _from_value(self.env.result)

    def _eval_Old(self, e: ast.Old):
        saved = self.in_old
        self.in_old = True
        try:
            return self.eval(e.inner)
        finally:
            self.in_old = saved

    def _array(self, node, v) -> Value:
        if v[0] == "null":
            raise _Fail(Reason.NULL_DEREFERENCE, node, "null array")
        if v[0] != "array":
            raise _Fail(Reason.TYPE_MISMATCH, node, f"array expected, got {v[0]}")
        return v[1]

    def _eval_Index(self, e: ast.Index):
        arr = self._array(e.base, self.eval(e.base))
        idx = self.eval(e.index)
        if idx[0] not in ("char", "int", "long"):
            raise _Fail(Reason.TYPE_MISMATCH, e.index, "integral index expected")
        if not 0 <= idx[1] < len(arr.v):
            raise _Fail(Reason.INDEX_OUT_OF_BOUNDS, e, f"index {idx[1]} of length {len(arr.v)}")
        return _from_value(arr.v[idx[1]])

    def _eval_Length(self, e: ast.Length):
        arr = self._array(e.base, self.eval(e.base))
        return ("int", len(arr.v))

    def _eval_Unary(self, e: ast.Unary):
        v = self.eval(e.operand)
        if e.op == "!":
            return ("bool", not self._bool(e, v))
        if e.op == "-":
            self._num(e, v)
            if v[0] == "double":
                return ("double", -v[1])
            kind = "long" if v[0] == "long" else "int"
            return (kind, self._fit(kind, -v[1]))
        self._integral(e, v)
        kind = "long" if v[0] == "long" else "int"
        return (kind, self._fit(kind, ~v[1]))

    def _eval_Cast(self, e: ast.Cast):
        v = self._num(e, self.eval(e.operand))
        x = v[1]
        if e.type == "double":
            return ("double", float(x))
        if v[0] == "double":
            if math.isnan(x):
                x = 0
            elif math.isinf(x):
                x = 2**63 if x > 0 else -(2**63)
            else:
                x = int(x)
            # Java saturates the narrowing to int/long before any further truncation
            bits = 64 if e.type == "long" else 32
            x = max(-(2 ** (bits - 1)), min(2 ** (bits - 1) - 1, x))
        if e.type == "char":
            return ("char", x & 0xFFFF)
        if e.type == "long":
            return ("long", wrap_int(x, 64))
        if e.type == "short":
            return ("int", wrap_int(x, 16))
        if e.type == "byte":
            return ("int", wrap_int(x, 8))
        return ("int", wrap_int(x, 32))

    def _eval_Cond(self, e: ast.Cond):
        c = self._bool(e.cond, self.eval(e.cond))
        return self.eval(e.then if c else e.orelse)

    def _eval_Binary(self, e: ast.Binary):
        op = e.op
        if op == "&&":
            if not self._bool(e.left, self.eval(e.left)):
                return ("bool", False)
            return ("bool", self._bool(e.right, self.eval(e.right)))
        if op == "||":
            if self._bool(e.left, self.eval(e.left)):
                return ("bool", True)
            return ("bool", self._bool(e.right, self.eval(e.right)))
        if op == "==>":
            if not self._bool(e.left, self.eval(e.left)):
                return ("bool", True)
            return ("bool", self._bool(e.right, self.eval(e.right)))
        if op == "<==":
            if self._bool(e.left, self.eval(e.left)):
                return ("bool", True)
            return ("bool", not self._bool(e.right, self.eval(e.right)))
        a = self.eval(e.left)
        b = self.eval(e.right)
        if op == "<==>":
            return ("bool", self._bool(e.left, a) == self._bool(e.right, b))
        if op in ("==", "!="):
            eq = self._equal(e, a, b)
            return ("bool", eq if op == "==" else not eq)
        if op in ("&", "|", "^") and a[0] == "bool" and b[0] == "bool":
            x, y = a[1], b[1]
            return ("bool", {"&": x and y, "|": x or y, "^": x != y}[op])
        if op in ("<", "<=", ">", ">="):
            _, x, y = self._promote(e, a, b)
            return ("bool", {"<": x < y, "<=": x <= y, ">": x > y, ">=": x >= y}[op])
        if op in ("<<", ">>", ">>>"):
            return self._shift(e, a, b)
        if op in ("&", "|", "^"):
            self._integral(e.left, a)
            self._integral(e.right, b)
            kind, x, y = self._promote(e, a, b)
            r = {"&": x & y, "|": x | y, "^": x ^ y}[op]
            return (kind, self._fit(kind, r))
        kind, x, y = self._promote(e, a, b)
        if kind == "double":
            return ("double", _float_arith(op, x, y))
        if op in ("/", "%") and y == 0:
            raise _Fail(Reason.DIVISION_BY_ZERO, e, print_expression(e.right) + " is zero")
        if op == "+":
            r = x + y
        elif op == "-":
            r = x - y
        elif op == "*":
            r = x * y
        elif op == "/":
            r = abs(x) // abs(y) * (1 if (x >= 0) == (y >= 0) else -1)
        else:
            r = abs(x) % abs(y) * (1 if x >= 0 else -1)
        return (kind, self._fit(kind, r))

    def _shift(self, e, a, b):
        self._integral(e.left, a)
        self._integral(e.right, b)
        kind = "long" if a[0] == "long" else "int"
        width = 64 if kind == "long" else 32
        dist = b[1] & (width - 1)
        x = a[1]
        if e.op == "<<":
            return (kind, self._fit(kind, x << dist))
        if e.op == ">>":
            return (kind, x >> dist)
        return (kind, wrap_int((x & ((1 << width) - 1)) >> dist, width))

    def _equal(self, node, a, b) -> bool:
        if a[0] in _NUMERIC_RANK and b[0] in _NUMERIC_RANK:
            kind, x, y = self._promote(node, a, b)
            if kind == "double":
                return _float_bits(float(x)) == _float_bits(float(y))
            return x == y
        if a[0] == "bool" and b[0] == "bool":
            return a[1] == b[1]
        if a[0] == "null" or b[0] == "null":
            if a[0] in ("null", "string", "array") and b[0] in ("null", "string", "array"):
                return a[0] == b[0] == "null"
            raise _Fail(Reason.TYPE_MISMATCH, node, f"cannot compare {a[0]} with null")
        if a[0] == b[0] == "string":
            return a[1] == b[1]
        if a[0] == b[0] == "array":
            return a[1] == b[1]
        raise _Fail(Reason.TYPE_MISMATCH, node, f"cannot compare {a[0]} with {b[0]}")

    def _eval_Quantified(self, e: ast.Quantified):
        lo, hi = self._bounds(e)
        count = max(0, hi - lo)
        if count > self.budget:
            raise _Fail(Reason.QUANTIFIER_BUDGET_EXCEEDED, e, f"{count} instances, budget {self.budget}")
        self.budget -= count
        kind = "long" if e.var_type == "long" else "int"
        saved = self.locals.get(e.var, _MISSING)
        try:
            for i in range(lo, hi):
                self.locals[e.var] = (kind, i)
                if e.range is not None and not self._bool(e.range, self.eval(e.range)):
                    continue
                b = self._bool(e.body, self.eval(e.body))
                if e.kind == "forall" and not b:
                    return ("bool", False)
                if e.kind == "exists" and b:
                    return ("bool", True)
        finally:
            if saved is _MISSING:
                self.locals.pop(e.var, None)
            else:
                self.locals[e.var] = saved
        return ("bool", e.kind == "forall")

    def _bounds(self, e: ast.Quantified):
        """Evaluate the integer interval [lo, hi) the range confines the bound variable to."""
        if e.range is None:
            raise _Fail(Reason.UNBOUNDED_QUANTIFIER, e, "quantifier without a range")
        lows, highs = [], []
        for c in ast.conjuncts(e.range):
            if not isinstance(c, ast.Binary) or c.op not in ("<", "<=", ">", ">="):
                continue
            op, left, right = c.op, c.left, c.right
            if isinstance(right, ast.Ident) and right.name == e.var and e.var not in ast.free_identifiers(left):
                op = {"<": ">", "<=": ">=", ">": "<", ">=": "<="}[op]
                left, right = right, left
            if not (isinstance(left, ast.Ident) and left.name == e.var) or e.var in ast.free_identifiers(right):
                continue
            bound = self.eval(right)
            if bound[0] not in ("char", "int", "long"):
                raise _Fail(Reason.TYPE_MISMATCH, right, "integral quantifier bound expected")
            n = bound[1]
            if op == "<":
                highs.append(n)
            elif op == "<=":
                highs.append(n + 1)
            elif op == ">":
                lows.append(n + 1)
            else:
                lows.append(n)
        if not lows or not highs:
            raise _Fail(Reason.UNBOUNDED_QUANTIFIER, e, "range does not bound the variable on both sides")
        return max(lows), min(highs)


_MISSING = object()


def _float_arith(op: str, x: float, y: float) -> float:
    x, y = float(x), float(y)
    if op == "+":
        return x + y
    if op == "-":
        return x - y
    if op == "*":
        return x * y
    if op == "/":
        if y == 0.0:
            if x == 0.0 or math.isnan(x):
                return math.nan
            return math.copysign(math.inf, x) * math.copysign(1.0, y)
        return x / y
    if y == 0.0 or math.isinf(x) or math.isnan(x) or math.isnan(y):
        return math.nan
    return math.fmod(x, y)


def evaluate(e: ast.Expr, env: Env, budget: int = DEFAULT_BUDGET, mode: ArithMode = ArithMode.MATH) -> Verdict:
    """Decide a boolean JML expression in a concrete state.

    Returns ``HOLDS``/``VIOLATED``, or an ``EvalError`` verdict naming why the
    expression could not be decided (division by zero, unbounded quantifier,
    unbound identifier, ...).  ``&&``, ``||`` and ``==>`` short-circuit.
    """
    ev = _Evaluator(env, budget, mode)
    try:
        v = ev.eval(e)
        if v[0] != "bool":
            raise _Fail(Reason.TYPE_MISMATCH, e, f"predicate has type {v[0]}")
    except _Fail as f:
        return eval_error(f.reason, f.node.span, f.detail)
    except RecursionError:
        return eval_error(Reason.UNSUPPORTED_CONSTRUCT, e.span, "expression nesting too deep")
    return HOLDS if v[1] else VIOLATED


def evaluate_value(e: ast.Expr, env: Env, budget: int = DEFAULT_BUDGET, mode: ArithMode = ArithMode.MATH):
    """Evaluate to a runtime ``(type, payload)`` pair; raises ValueError on failure."""
    ev = _Evaluator(env, budget, mode)
    try:
        return ev.eval(e)
    except _Fail as f:
        raise ValueError(f"{f.reason.value}: {f.detail}") from None
