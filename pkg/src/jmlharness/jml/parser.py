"""Recursive-descent parser for JML requires/ensures expressions.

Precedence, loosest first: ``?:``, ``<==>``, ``==>``/``<==``, ``||``, ``&&``,
``|``, ``^``, ``&``, equality, relational, shift, additive, multiplicative,
unary/cast, postfix.  ``==>`` is right-associative; ``<==`` is left-associative.
"""

from __future__ import annotations

from . import ast
from .lexer import JmlSyntaxError, Token, UnsupportedConstruct, tokenize

_UNSUPPORTED_OPS = {"<=!=>", "++", "--", "->", "::", "=", "@", "{", "}"}
_PRIMITIVE_NAMES = {"boolean", "char", "int", "long", "short", "byte", "double", "float"}
_LEVELS = [
    ("||",),
    ("&&",),
    ("|",),
    ("^",),
    ("&",),
    ("==", "!="),
    ("<", "<=", ">", ">="),
    ("<<", ">>", ">>>"),
    ("+", "-"),
    ("*", "/", "%"),
]


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.pos = 0

    # token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.pos]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def advance(self) -> Token:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def at_op(self, *ops) -> bool:
        return self.tok.kind == "op" and self.tok.text in ops

    def expect_op(self, op: str) -> Token:
        if not self.at_op(op):
            self.fail({op})
        return self.advance()

    def fail(self, expected):
        t = self.tok
        if t.kind == "op" and t.text in _UNSUPPORTED_OPS:
            raise UnsupportedConstruct(t.text, t.start)
        raise JmlSyntaxError(t.start, expected, t.text if t.kind != "eof" else "end of input")

    def span_from(self, start: int):
        return (start, self.toks[self.pos - 1].end)

    # grammar
    def parse(self) -> ast.Expr:
        if self.tok.kind == "eof":
            self.fail({"expression"})
        e = self.conditional()
        if self.tok.kind != "eof":
            self.fail({"end of input"})
        return e

    def conditional(self) -> ast.Expr:
        start = self.tok.start
        c = self.equivalence()
        if self.at_op("?"):
            self.advance()
            a = self.conditional()
            self.expect_op(":")
            b = self.conditional()
            return ast.Cond(c, a, b, span=self.span_from(start))
        return c

    def equivalence(self) -> ast.Expr:
        start = self.tok.start
        e = self.implication()
        while self.at_op("<==>"):
            self.advance()
            r = self.implication()
            e = ast.Binary("<==>", e, r, span=self.span_from(start))
        return e

    def implication(self) -> ast.Expr:
        start = self.tok.start
        e = self.binary(0)
        if self.at_op("==>"):
            self.advance()
            r = self.implication()
            return ast.Binary("==>", e, r, span=self.span_from(start))
        while self.at_op("<=="):
            self.advance()
            r = self.binary(0)
            e = ast.Binary("<==", e, r, span=self.span_from(start))
        return e

    def binary(self, level: int) -> ast.Expr:
        if level == len(_LEVELS):
            return self.unary()
        start = self.tok.start
        e = self.binary(level + 1)
        ops = _LEVELS[level]
        while self.at_op(*ops):
            op = self.advance().text
            r = self.binary(level + 1)
            e = ast.Binary(op, e, r, span=self.span_from(start))
        if level == 6 and self.tok.kind == "ident" and self.tok.text == "instanceof":
            raise UnsupportedConstruct("instanceof", self.tok.start)
        return e

    def unary(self) -> ast.Expr:
        start = self.tok.start
        if self.at_op("!", "-", "~"):
            op = self.advance().text
            return ast.Unary(op, self.unary(), span=self.span_from(start))
        if self.at_op("+"):
            self.advance()
            return self.unary()
        if self.at_op("(") and self.peek().kind == "ident" and self.peek().text in _PRIMITIVE_NAMES \
                and self.peek(2).kind == "op" and self.peek(2).text == ")":
            type_name = self.peek().text
            if type_name not in ast.CAST_TYPES:
                raise UnsupportedConstruct(f"cast to {type_name}", start)
            self.pos += 3
            return ast.Cast(type_name, self.unary(), span=self.span_from(start))
        return self.postfix()

    def postfix(self) -> ast.Expr:
        start = self.tok.start
        e = self.primary()
        while True:
            if self.at_op("["):
                self.advance()
                idx = self.conditional()
                self.expect_op("]")
                e = ast.Index(e, idx, span=self.span_from(start))
            elif self.at_op("."):
                self.advance()
                name = self.tok
                if name.kind != "ident":
                    self.fail({"field name"})
                self.advance()
                if self.at_op("("):
                    raise UnsupportedConstruct(f"method call .{name.text}()", name.start)
                if name.text != "length":
                    raise UnsupportedConstruct(f"field access .{name.text}", name.start)
                e = ast.Length(e, span=self.span_from(start))
            elif self.at_op("("):
                raise UnsupportedConstruct("method call", self.tok.start)
            else:
                return e

    def primary(self) -> ast.Expr:
        t = self.tok
        start = t.start
        if t.kind in ("int", "long", "double", "char", "string"):
            self.advance()
            kind = {"double": "double", "char": "char", "string": "string", "int": "int", "long": "long"}[t.kind]
            return ast.Literal(kind, t.value, span=(t.start, t.end))
        if t.kind == "ident":
            if t.text in ("true", "false"):
                self.advance()
                return ast.Literal("bool", t.text == "true", span=(t.start, t.end))
            if t.text == "null":
                self.advance()
                return ast.Literal("null", None, span=(t.start, t.end))
            if t.text in ("this", "super", "new", "instanceof"):
                raise UnsupportedConstruct(t.text, t.start)
            self.advance()
            return ast.Ident(t.text, span=(t.start, t.end))
        if t.kind == "backslash":
            if t.text == "\\result":
                self.advance()
                return ast.Result(span=(t.start, t.end))
            if t.text in ("\\old", "\\pre"):
                self.advance()
                self.expect_op("(")
                inner = self.conditional()
                if self.at_op(","):
                    raise UnsupportedConstruct("\\old with label", self.tok.start)
                self.expect_op(")")
                return ast.Old(inner, span=self.span_from(start))
            raise UnsupportedConstruct(t.text, t.start)
        if self.at_op("("):
            nxt = self.peek()
            if nxt.kind == "backslash" and nxt.text in ("\\forall", "\\exists"):
                return self.quantifier()
            if nxt.kind == "backslash" and nxt.text in ("\\sum", "\\product", "\\max", "\\min", "\\num_of"):
                raise UnsupportedConstruct(nxt.text, nxt.start)
            self.advance()
            e = self.conditional()
            self.expect_op(")")
            return e
        self.fail({"expression"})

    def quantifier(self) -> ast.Expr:
        start = self.tok.start
        self.advance()
        kind = self.advance().text[1:]
        ty = self.tok
        if ty.kind != "ident":
            self.fail({"type"})
        if ty.text not in ast.QUANT_VAR_TYPES:
            raise UnsupportedConstruct(f"quantifier over {ty.text}", ty.start)
        self.advance()
        var = self.tok
        if var.kind != "ident":
            self.fail({"identifier"})
        self.advance()
        if self.at_op(","):
            raise UnsupportedConstruct("quantifier with several bound variables", self.tok.start)
        self.expect_op(";")
        first = self.conditional()
        rng = None
        if self.at_op(";"):
            self.advance()
            rng, body = first, self.conditional()
        else:
            body = first
        self.expect_op(")")
        return ast.Quantified(kind, var.text, ty.text, rng, body, span=self.span_from(start))


def parse_expression(text: str) -> ast.Expr:
    """Parse a single JML expression.

    Raises :class:`JmlSyntaxError` on malformed input and
    :class:`UnsupportedConstruct` for JML outside the supported subset
    (``\\sum``, method calls, field access other than ``.length``, ...).
    """
    if not text or not text.strip():
        raise JmlSyntaxError(0, {"expression"}, "end of input")
    return _Parser(text).parse()
