"""Tokenizer for JML annotation expressions."""

from __future__ import annotations

import re
from dataclasses import dataclass


class ParseError(Exception):
    """Base class for expression parse failures."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at offset {position}")
        self.position = position


class JmlSyntaxError(ParseError):
    def __init__(self, position: int, expected, found: str = ""):
        self.expected = tuple(sorted(expected)) if not isinstance(expected, str) else (expected,)
        self.found = found
        what = " or ".join(self.expected)
        msg = f"expected {what}" + (f", found {found!r}" if found else "")
        super().__init__(msg, position)


class UnsupportedConstruct(ParseError):
    def __init__(self, name: str, position: int):
        self.name = name
        super().__init__(f"unsupported JML construct {name}", position)


@dataclass(frozen=True)
class Token:
    kind: str  # ident | backslash | int | long | double | char | string | op | eof
    text: str
    start: int
    end: int
    value: object = None


OPERATORS = sorted(
    """<==> <=!=> ==> <== >>> << >> <= >= == != && || ++ -- -> :: + - * / % < > ! ~ & | ^ ? : ( ) [ ] { } . , ; @ =""".split(),
    key=len,
    reverse=True,
)

_WS = re.compile(r"\s+")
_IDENT = re.compile(r"[A-Za-z_$][A-Za-z0-9_$]*")
_BACKSLASH = re.compile(r"\\[A-Za-z_][A-Za-z0-9_]*")
_FLOAT = re.compile(
    r"(?:\d[\d_]*\.(?:\d[\d_]*)?(?:[eE][+-]?\d+)?[dDfF]?"
    r"|\.\d[\d_]*(?:[eE][+-]?\d+)?[dDfF]?"
    r"|\d[\d_]*[eE][+-]?\d+[dDfF]?"
    r"|\d[\d_]*[dDfF])"
)
_INT = re.compile(r"(?:0[xX][0-9a-fA-F_]+|0[bB][01_]+|\d[\d_]*)[lL]?")

_ESCAPES = {"n": "\n", "t": "\t", "b": "\b", "r": "\r", "f": "\f", "s": " ", "'": "'", '"': '"', "\\": "\\"}


def _read_escape(text: str, i: int):
    """Decode an escape starting at the backslash at ``i``; returns (char, next index)."""
    if i + 1 >= len(text):
        raise JmlSyntaxError(i, "escape sequence")
    c = text[i + 1]
    if c in _ESCAPES:
        return _ESCAPES[c], i + 2
    if c == "u":
        j = i + 1
        while j < len(text) and text[j] == "u":
            j += 1
        digits = text[j : j + 4]
        if not re.fullmatch(r"[0-9a-fA-F]{4}", digits):
            raise JmlSyntaxError(i, "unicode escape")
        return chr(int(digits, 16)), j + 4
    m = re.match(r"[0-3][0-7]{0,2}|[0-7]{1,2}", text[i + 1 :])
    if m:
        return chr(int(m.group(0), 8)), i + 1 + m.end()
    raise JmlSyntaxError(i, "escape sequence")


def _int_value(lit: str) -> int:
    body = lit.rstrip("lL").replace("_", "")
    if body[:2] in ("0x", "0X"):
        return int(body[2:], 16)
    if body[:2] in ("0b", "0B"):
        return int(body[2:], 2)
    if len(body) > 1 and body[0] == "0":
        return int(body, 8)
    return int(body)


def tokenize(text: str) -> list[Token]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        m = _WS.match(text, i)
        if m:
            i = m.end()
            continue
        ch = text[i]
        if ch == "\\":
            m = _BACKSLASH.match(text, i)
            if not m:
                raise JmlSyntaxError(i, "JML keyword", ch)
            tokens.append(Token("backslash", m.group(0), i, m.end()))
            i = m.end()
            continue
        if ch.isalpha() or ch in "_$":
            m = _IDENT.match(text, i)
            tokens.append(Token("ident", m.group(0), i, m.end()))
            i = m.end()
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            m = _FLOAT.match(text, i)
            if m and not (m.group(0).endswith(".") and i + len(m.group(0)) < n and text[m.end()].isalpha()):
                lit = m.group(0)
                tokens.append(Token("double", lit, i, m.end(), float(lit.rstrip("dDfF").replace("_", ""))))
                i = m.end()
                continue
            m = _INT.match(text, i)
            lit = m.group(0)
            kind = "long" if lit[-1] in "lL" else "int"
            tokens.append(Token(kind, lit, i, m.end(), _int_value(lit)))
            i = m.end()
            continue
        if ch == "'":
            j = i + 1
            if j < n and text[j] == "\\":
                c, j = _read_escape(text, j)
            elif j < n and text[j] not in "'\n":
                c, j = text[j], j + 1
            else:
                raise JmlSyntaxError(i, "character literal")
            if j >= n or text[j] != "'":
                raise JmlSyntaxError(j, "'")
            tokens.append(Token("char", text[i : j + 1], i, j + 1, c))
            i = j + 1
            continue
        if ch == '"':
            j = i + 1
            buf = []
            while True:
                if j >= n or text[j] == "\n":
                    raise JmlSyntaxError(j, '"')
                if text[j] == '"':
                    break
                if text[j] == "\\":
                    c, j = _read_escape(text, j)
                    buf.append(c)
                else:
                    buf.append(text[j])
                    j += 1
            tokens.append(Token("string", text[i : j + 1], i, j + 1, "".join(buf)))
            i = j + 1
            continue
        for op in OPERATORS:
            if text.startswith(op, i):
                tokens.append(Token("op", op, i, i + len(op)))
                i += len(op)
                break
        else:
            raise JmlSyntaxError(i, "token", ch)
    tokens.append(Token("eof", "", n, n))
    return tokens
