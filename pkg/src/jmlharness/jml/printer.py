"""Fully parenthesised JML printer and a debugging tree dump."""

from __future__ import annotations

from . import ast

_ESC = {"\n": "\\n", "\t": "\\t", "\b": "\\b", "\r": "\\r", "\f": "\\f", "\\": "\\\\"}


def _escape(s: str, quote: str) -> str:
    out = []
    for ch in s:
        if ch in _ESC:
            out.append(_ESC[ch])
        elif ch == quote:
            out.append("\\" + ch)
        elif 0x20 <= ord(ch) < 0x7F:
            out.append(ch)
        else:
            out.append(f"\\u{ord(ch):04x}")
    return "".join(out)


def _literal(e: ast.Literal) -> str:
    if e.kind == "bool":
        return "true" if e.value else "false"
    if e.kind == "null":
        return "null"
    if e.kind == "int":
        return str(e.value)
    if e.kind == "long":
        return f"{e.value}L"
    if e.kind == "double":
        text = repr(float(e.value))
        return text if ("." in text or "e" in text) else text + ".0"
    if e.kind == "char":
        return "'" + _escape(e.value, "'") + "'"
    if e.kind == "string":
        return '"' + _escape(e.value, '"') + '"'
    raise ValueError(f"unknown literal kind {e.kind}")


def _postfix_base(e: ast.Expr) -> str:
    text = print_expression(e)
    if isinstance(e, ast.Literal) and e.kind in ("int", "long", "double"):
        return f"({text})"
    return text


def print_expression(e: ast.Expr) -> str:
    if isinstance(e, ast.Literal):
        return _literal(e)
    if isinstance(e, ast.Ident):
        return e.name
    if isinstance(e, ast.Result):
        return "\\result"
    if isinstance(e, ast.Old):
        return f"\\old({print_expression(e.inner)})"
    if isinstance(e, ast.Index):
        return f"{_postfix_base(e.base)}[{print_expression(e.index)}]"
    if isinstance(e, ast.Length):
        return f"{_postfix_base(e.base)}.length"
    if isinstance(e, ast.Unary):
        return f"({e.op}{print_expression(e.operand)})"
    if isinstance(e, ast.Cast):
        return f"(({e.type}) {print_expression(e.operand)})"
    if isinstance(e, ast.Binary):
        return f"({print_expression(e.left)} {e.op} {print_expression(e.right)})"
    if isinstance(e, ast.Cond):
        return f"({print_expression(e.cond)} ? {print_expression(e.then)} : {print_expression(e.orelse)})"
    if isinstance(e, ast.Quantified):
        head = f"(\\{e.kind} {e.var_type} {e.var}; "
        if e.range is not None:
            head += print_expression(e.range) + "; "
        return head + print_expression(e.body) + ")"
    raise TypeError(f"not an expression: {e!r}")


def dump_tree(e: ast.Expr, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(e, ast.Literal):
        return f"{pad}Literal[{e.kind}] {_literal(e)}"
    if isinstance(e, ast.Ident):
        return f"{pad}Ident {e.name}"
    if isinstance(e, ast.Result):
        return f"{pad}Result"
    label = {
        ast.Old: lambda: "Old",
        ast.Index: lambda: "Index",
        ast.Length: lambda: "Length",
        ast.Unary: lambda: f"Unary {e.op}",
        ast.Cast: lambda: f"Cast ({e.type})",
        ast.Binary: lambda: f"Binary {e.op}",
        ast.Cond: lambda: "Cond",
        ast.Quantified: lambda: f"Quantified \\{e.kind} {e.var_type} {e.var}"
        + ("" if e.range is not None else " (no range)"),
    }[type(e)]()
    lines = [pad + label]
    lines.extend(dump_tree(c, indent + 1) for c in ast.children(e))
    return "\n".join(lines)
