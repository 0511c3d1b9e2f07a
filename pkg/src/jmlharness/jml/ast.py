"""Expression trees for the requires/ensures subset of JML.

Nodes are frozen dataclasses.  Source spans are kept for diagnostics but are
excluded from equality, so a reparsed tree compares equal to the original.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple

Span = Tuple[int, int]

BINARY_OPS = (
    "*", "/", "%", "+", "-", "<<", ">>", ">>>",
    "<", "<=", ">", ">=", "==", "!=",
    "&", "|", "^", "&&", "||", "==>", "<==", "<==>",
)
UNARY_OPS = ("!", "-", "~")
CAST_TYPES = ("char", "int", "long", "short", "byte", "double")
QUANT_VAR_TYPES = ("int", "long")


def _span():
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Expr:
    pass


@dataclass(frozen=True)
class Literal(Expr):
    # kind: bool | char | int | long | double | string | null
    kind: str
    value: object
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Ident(Expr):
    name: str
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Result(Expr):
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Old(Expr):
    inner: Expr
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Index(Expr):
    base: Expr
    index: Expr
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Length(Expr):
    base: Expr
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Unary(Expr):
    op: str
    operand: Expr
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Cast(Expr):
    type: str
    operand: Expr
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Binary(Expr):
    op: str
    left: Expr
    right: Expr
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Cond(Expr):
    cond: Expr
    then: Expr
    orelse: Expr
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Quantified(Expr):
    kind: str  # forall | exists
    var: str
    var_type: str
    range: Optional[Expr]
    body: Expr
    span: Optional[Span] = _span()


TRUE = Literal("bool", True)
FALSE = Literal("bool", False)


def children(e: Expr):
    if isinstance(e, (Old,)):
        return (e.inner,)
    if isinstance(e, Index):
        return (e.base, e.index)
    if isinstance(e, Length):
        return (e.base,)
    if isinstance(e, (Unary, Cast)):
        return (e.operand,)
    if isinstance(e, Binary):
        return (e.left, e.right)
    if isinstance(e, Cond):
        return (e.cond, e.then, e.orelse)
    if isinstance(e, Quantified):
        return (e.range, e.body) if e.range is not None else (e.body,)
    return ()


def walk(e: Expr):
    yield e
    for c in children(e):
        yield from walk(c)


def mentions_result(e: Expr) -> bool:
    return any(isinstance(n, Result) for n in walk(e))


def free_identifiers(e: Expr, bound: frozenset = frozenset()) -> set:
    if isinstance(e, Ident):
        return set() if e.name in bound else {e.name}
    if isinstance(e, Quantified):
        inner = bound | {e.var}
        out = free_identifiers(e.body, inner)
        if e.range is not None:
            out |= free_identifiers(e.range, inner)
        return out
    out = set()
    for c in children(e):
        out |= free_identifiers(c, bound)
    return out


def conjoin(exprs) -> Expr:
    exprs = list(exprs)
    if not exprs:
        return TRUE
    acc = exprs[0]
    for e in exprs[1:]:
        acc = Binary("&&", acc, e)
    return acc


def conjuncts(e: Expr) -> list:
    if isinstance(e, Binary) and e.op == "&&":
        return conjuncts(e.left) + conjuncts(e.right)
    return [e]


def substitute(e: Expr, fn) -> Expr:
    """Bottom-up rewrite; ``fn`` returns a replacement node or None."""
    if isinstance(e, Old):
        e = Old(substitute(e.inner, fn), span=e.span)
    elif isinstance(e, Index):
        e = Index(substitute(e.base, fn), substitute(e.index, fn), span=e.span)
    elif isinstance(e, Length):
        e = Length(substitute(e.base, fn), span=e.span)
    elif isinstance(e, Unary):
        e = Unary(e.op, substitute(e.operand, fn), span=e.span)
    elif isinstance(e, Cast):
        e = Cast(e.type, substitute(e.operand, fn), span=e.span)
    elif isinstance(e, Binary):
        e = Binary(e.op, substitute(e.left, fn), substitute(e.right, fn), span=e.span)
    elif isinstance(e, Cond):
        e = Cond(substitute(e.cond, fn), substitute(e.then, fn), substitute(e.orelse, fn), span=e.span)
    elif isinstance(e, Quantified):
        rng = substitute(e.range, fn) if e.range is not None else None
        e = Quantified(e.kind, e.var, e.var_type, rng, substitute(e.body, fn), span=e.span)
    out = fn(e)
    return e if out is None else out
