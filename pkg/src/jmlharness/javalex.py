"""A small Java tokenizer that keeps comments (JML lives in them) and offsets."""

from __future__ import annotations

import re
from dataclasses import dataclass


class LexError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at offset {position}")
        self.position = position


@dataclass(frozen=True)
class JToken:
    kind: str  # ident | number | char | string | op | comment
    text: str
    start: int
    end: int

    @property
    def is_jml(self) -> bool:
        return self.kind == "comment" and (self.text.startswith("/*@") or self.text.startswith("//@"))


_OPS = sorted(
    """>>>= <<= >>= >>> ... -> :: ++ -- && || == != <= >= += -= *= /= %= &= |= ^= << >>
    ( ) { } [ ] ; , . @ = > < ! ~ ? : + - * / & | ^ %""".split(),
    key=len,
    reverse=True,
)
_IDENT = re.compile(r"[A-Za-z_$\u0080-￿][A-Za-z0-9_$\u0080-￿]*")
_NUMBER = re.compile(
    r"0[xX][0-9a-fA-F_]+[lL]?|0[bB][01_]+[lL]?"
    r"|(?:\d[\d_]*\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)[fFdDlL]?"
)


def lex(source: str) -> list[JToken]:
    """Tokenize Java source; whitespace is dropped, comments are kept."""
    toks = []
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch.isspace():
            i += 1
            continue
        if source.startswith("//", i):
            j = source.find("\n", i)
            j = n if j < 0 else j
            toks.append(JToken("comment", source[i:j], i, j))
            i = j
            continue
        if source.startswith("/*", i):
            j = source.find("*/", i + 2)
            if j < 0:
                raise LexError("unterminated comment", i)
            toks.append(JToken("comment", source[i : j + 2], i, j + 2))
            i = j + 2
            continue
        if source.startswith('"""', i):
            j = source.find('"""', i + 3)
            while j > 0 and source[j - 1] == "\\":
                j = source.find('"""', j + 1)
            if j < 0:
                raise LexError("unterminated text block", i)
            toks.append(JToken("string", source[i : j + 3], i, j + 3))
            i = j + 3
            continue
        if ch in "\"'":
            j = i + 1
            while j < n and source[j] != ch:
                if source[j] == "\n":
                    raise LexError("unterminated literal", i)
                j += 2 if source[j] == "\\" else 1
            if j >= n:
                raise LexError("unterminated literal", i)
            toks.append(JToken("string" if ch == '"' else "char", source[i : j + 1], i, j + 1))
            i = j + 1
            continue
        m = _IDENT.match(source, i)
        if m:
            toks.append(JToken("ident", m.group(0), i, m.end()))
            i = m.end()
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and source[i + 1].isdigit()):
            m = _NUMBER.match(source, i)
            toks.append(JToken("number", m.group(0), i, m.end()))
            i = m.end()
            continue
        for op in _OPS:
            if source.startswith(op, i):
                toks.append(JToken("op", op, i, i + len(op)))
                i += len(op)
                break
        else:
            raise LexError(f"unexpected character {ch!r}", i)
    return toks


def code_tokens(source: str) -> list[JToken]:
    return [t for t in lex(source) if t.kind != "comment"]


def line_of(source: str, offset: int) -> int:
    return source.count("\n", 0, offset) + 1


_NOT_TYPES = {
    "new", "return", "throw", "else", "case", "assert", "yield",
    "public", "private", "protected", "static", "final", "abstract", "synchronized",
    "native", "strictfp", "default", "transient", "volatile",
}
MODIFIERS = {
    "public", "private", "protected", "static", "final", "abstract", "synchronized",
    "native", "strictfp", "default",
}


@dataclass(frozen=True)
class MethodDecl:
    name: str
    name_index: int  # index into the code-token list
    return_type: str
    params: tuple  # ((java type, name), ...)
    modifiers: tuple
    header_start: int  # offset of the first header token
    body_start: int  # offset of "{" (or ";")


def _matching(toks, i, open_, close):
    depth = 0
    for j in range(i, len(toks)):
        if toks[j].text == open_:
            depth += 1
        elif toks[j].text == close:
            depth -= 1
            if depth == 0:
                return j
    raise LexError(f"unbalanced {open_}", toks[i].start)


def _split_params(toks):
    params, cur, depth = [], [], 0
    for t in toks:
        if t.text in ("<", "(", "["):
            depth += 1
        elif t.text in (">", ")", "]"):
            depth -= 1
        if t.text == "," and depth == 0:
            params.append(cur)
            cur = []
        else:
            cur.append(t)
    if cur:
        params.append(cur)
    out = []
    for p in params:
        p = [t for t in p if t.text != "final"]
        while p and p[0].text == "@":
            p = p[2:]
        name_pos = max(i for i, t in enumerate(p) if t.kind == "ident")
        name = p[name_pos].text
        type_text = "".join(t.text for t in p[:name_pos])
        type_text += "".join(t.text for t in p[name_pos + 1 :])  # C-style "int a[]"
        type_text = type_text.replace("...", "[]")
        out.append((type_text, name))
    return tuple(out)


def find_methods(source: str) -> list[MethodDecl]:
    """Locate method declarations (not calls, not constructors) in ``source``."""
    toks = code_tokens(source)
    found = []
    for k in range(1, len(toks) - 1):
        t = toks[k]
        if t.kind != "ident" or toks[k + 1].text != "(":
            continue
        prev = toks[k - 1]
        if not (prev.kind == "ident" and prev.text not in _NOT_TYPES) and prev.text not in ("]", ">"):
            continue
        close = _matching(toks, k + 1, "(", ")")
        after = toks[close + 1] if close + 1 < len(toks) else None
        if after is None or after.text not in ("{", "throws", ";"):
            continue
        # walk back over the return type, type parameters, modifiers and annotations
        j = k - 1
        while j >= 0 and toks[j].text not in (";", "{", "}"):
            j -= 1
        header = toks[j + 1 : k]
        mods = tuple(h.text for h in header if h.text in MODIFIERS)
        rest = [h for h in header if h.text not in MODIFIERS]
        # strip annotations like @Override or @SuppressWarnings(...)
        cleaned, i = [], 0
        while i < len(rest):
            if rest[i].text == "@":
                i += 2
                if i < len(rest) and rest[i].text == "(":
                    i = _matching(rest, i, "(", ")") + 1
                continue
            cleaned.append(rest[i])
            i += 1
        if any(h.text in ("=", "(", ")", "return", "new") for h in cleaned):
            continue
        if cleaned and cleaned[0].text == "<":
            cleaned = cleaned[_matching(cleaned, 0, "<", ">") + 1 :]
        ret = "".join(c.text for c in cleaned)
        body = toks[close + 1]
        if body.text == "throws":
            body = next(x for x in toks[close + 1 :] if x.text in ("{", ";"))
        found.append(
            MethodDecl(
                name=t.text,
                name_index=k,
                return_type=ret,
                params=_split_params(toks[k + 2 : close]),
                modifiers=mods,
                header_start=toks[j + 1].start,
                body_start=body.start,
            )
        )
    return found


def find_method(source: str, name: str) -> MethodDecl:
    matches = [m for m in find_methods(source) if m.name == name]
    if not matches:
        raise MethodNotFound(name)
    if len(matches) > 1:
        raise AmbiguousMethod(name)
    return matches[0]


class MethodNotFound(LookupError):
    pass


class AmbiguousMethod(LookupError):
    pass


def class_names(source: str) -> list[str]:
    toks = code_tokens(source)
    return [
        toks[i + 1].text
        for i, t in enumerate(toks[:-1])
        if t.text in ("class", "interface", "enum", "record") and toks[i + 1].kind == "ident"
        and (i == 0 or toks[i - 1].text != ".")
    ]
