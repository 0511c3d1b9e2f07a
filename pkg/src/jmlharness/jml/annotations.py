"""Finding, parsing and removing JML annotations in Java source."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

from ..javalex import AmbiguousMethod, MethodNotFound, find_methods, lex
from . import ast
from .lexer import JmlSyntaxError, UnsupportedConstruct
from .parser import parse_expression
from .printer import print_expression

_REQUIRES = {"requires", "pre", "requires_redundantly", "pre_redundantly"}
_ENSURES = {"ensures", "post", "ensures_redundantly", "post_redundantly"}
_BEHAVIORS = {"behavior", "behaviour", "normal_behavior", "normal_behaviour"}
_EXCEPTIONAL = {"exceptional_behavior", "exceptional_behaviour"}
_PREFIX_WORDS = {
    "public", "private", "protected", "pure", "strictly_pure", "helper", "spec_public",
    "spec_protected", "non_null", "nullable", "non_null_by_default", "nullable_by_default",
    "model", "ghost", "instance", "static", "code", "final",
}


class NoContractFound(LookupError):
    pass


@dataclass(frozen=True)
class Contract:
    requires: tuple = ()
    ensures: tuple = ()
    raw_text: str = field(default="", compare=False)

    @property
    def precondition(self) -> ast.Expr:
        return ast.conjoin(self.requires)

    @property
    def postcondition(self) -> ast.Expr:
        return ast.conjoin(self.ensures)

    def to_dict(self) -> dict:
        return {
            "requires": [print_expression(e) for e in self.requires],
            "ensures": [print_expression(e) for e in self.ensures],
            "rawText": self.raw_text,
        }

    @classmethod
    def from_clauses(cls, requires=(), ensures=()) -> "Contract":
        req = tuple(parse_expression(t) for t in requires)
        ens = tuple(parse_expression(t) for t in ensures)
        _check_requires(req, 0)
        lines = [f"requires {t};" for t in requires] + [f"ensures {t};" for t in ensures]
        return cls(req, ens, "\n".join(lines))


def _check_requires(requires, base):
    for e in requires:
        for node in ast.walk(e):
            if isinstance(node, ast.Result):
                pos = base + (node.span[0] if node.span else 0)
                raise UnsupportedConstruct("\\result in a requires clause", pos)


# annotation comments ---------------------------------------------------------

def _blank_markers(text: str) -> str:
    """Replace comment delimiters and ``@`` gutters with spaces, keeping offsets."""
    chars = list(text)
    if text.startswith("//@"):
        chars[0:3] = "   "
        i = 3
        while i < len(chars) and chars[i] == "@":
            chars[i] = " "
            i += 1
        return "".join(chars)
    chars[0:3] = "   "
    chars[-2:] = "  "
    j = len(chars) - 3
    while j >= 3 and chars[j] == "@":
        chars[j] = " "
        j -= 1
    at_line_start = False
    for i in range(3, len(chars) - 2):
        c = chars[i]
        if c == "\n":
            at_line_start = True
        elif at_line_start and c in " \t":
            continue
        elif at_line_start and c == "@":
            chars[i] = " "
        else:
            at_line_start = False
    return "".join(chars)


def _removal_span(source: str, start: int, end: int):
    line_start = source.rfind("\n", 0, start) + 1
    nl = source.find("\n", end)
    line_end = len(source) if nl < 0 else nl
    if source[line_start:start].strip() == "" and source[end:line_end].strip() == "":
        return (line_start, line_end + 1 if nl >= 0 else line_end)
    return (start, end)


def annotation_spans(source: str) -> list:
    """Spans of every JML annotation, widened to whole lines where it stands alone."""
    return [_removal_span(source, t.start, t.end) for t in lex(source) if t.is_jml]


def _remove(source: str, spans) -> str:
    out, pos = [], 0
    for s, e in sorted(spans):
        if s < pos:
            s = pos
        out.append(source[pos:s])
        pos = max(pos, e)
    out.append(source[pos:])
    return "".join(out)


def strip_annotations(source: str) -> str:
    """Remove all JML annotation comments; everything else is kept byte for byte."""
    spans = annotation_spans(source)
    if not spans:
        return source
    return _remove(source, spans)


# clause parsing -------------------------------------------------------------

def _split_top_level(text: str):
    """Yield (offset, segment) pieces separated by ``;`` outside brackets and literals."""
    depth, start, i, n = 0, 0, 0, len(text)
    while i < n:
        c = text[i]
        if c in "\"'":
            j = i + 1
            while j < n and text[j] != c:
                j += 2 if text[j] == "\\" else 1
            i = j + 1
            continue
        if c in "([{":
            depth += 1
        elif c in ")]}":
            depth -= 1
        elif c == ";" and depth == 0:
            yield start, text[start:i]
            start = i + 1
        i += 1
    yield start, text[start:]


def _leading_word(seg: str, pos: int):
    while pos < len(seg) and seg[pos].isspace():
        pos += 1
    end = pos
    while end < len(seg) and (seg[end].isalnum() or seg[end] == "_"):
        end += 1
    return seg[pos:end], pos, end


def parse_contract(text: str, base: int = 0, raw_text: str | None = None) -> Contract:
    """Parse annotation text (``requires ...; ensures ...;``) into a Contract.

    Exceptional spec cases are skipped.  Several normal spec cases joined with
    ``also`` are desugared: the precondition becomes the disjunction of the
    case preconditions and each case contributes ``\\old(pre) ==> post``.
    """
    cases = [{"exceptional": False, "requires": [], "ensures": []}]

    def new_case(exceptional=False):
        cur = cases[-1]
        if cur["requires"] or cur["ensures"] or cur["exceptional"]:
            cases.append({"exceptional": exceptional, "requires": [], "ensures": []})
        else:
            cur["exceptional"] = exceptional

    for off, seg in _split_top_level(text):
        if "{|" in seg:
            raise UnsupportedConstruct("nested specification cases", base + off + seg.index("{|"))
        pos = 0
        while True:
            word, wstart, wend = _leading_word(seg, pos)
            if word == "also":
                new_case()
            elif word in _BEHAVIORS or word in _EXCEPTIONAL:
                new_case(word in _EXCEPTIONAL)
            elif word not in _PREFIX_WORDS:
                break
            pos = wend
        body = seg[wend:]
        if word in _REQUIRES or word in _ENSURES:
            if not body.strip():
                raise JmlSyntaxError(base + off + wend, {"expression"}, ";")
            try:
                expr = parse_expression(body)
            except JmlSyntaxError as exc:
                raise JmlSyntaxError(base + off + wend + exc.position, exc.expected, exc.found) from None
            except UnsupportedConstruct as exc:
                raise UnsupportedConstruct(exc.name, base + off + wend + exc.position) from None
            expr = _shift_spans(expr, base + off + wend)
            cases[-1]["requires" if word in _REQUIRES else "ensures"].append(expr)
        elif word == "" and seg[wend:].strip():
            raise JmlSyntaxError(base + off + wstart, {"clause keyword"}, seg.strip()[:20])
        # any other clause kind (assignable, signals, loop_invariant, ...) is ignored

    normal = [c for c in cases if not c["exceptional"] and (c["requires"] or c["ensures"])]
    requires, ensures = [], []
    if len(normal) == 1:
        requires, ensures = normal[0]["requires"], normal[0]["ensures"]
    elif len(normal) > 1:
        pres = [ast.conjoin(c["requires"]) for c in normal]
        disj = pres[0]
        for p in pres[1:]:
            disj = ast.Binary("||", disj, p)
        requires = [disj]
        for p, c in zip(pres, normal):
            post = ast.conjoin(c["ensures"])
            ensures.append(post if p == ast.TRUE else ast.Binary("==>", ast.Old(p), post))
    _check_requires(requires, 0)
    return Contract(tuple(requires), tuple(ensures), text if raw_text is None else raw_text)


def _shift_spans(e: ast.Expr, delta: int) -> ast.Expr:
    def fn(node):
        if node.span is None:
            return None
        s, t = node.span
        return _with_span(node, (s + delta, t + delta))

    return ast.substitute(e, fn)


def _with_span(node, span):
    return dataclasses.replace(node, span=span)


def _method_jml_tokens(source: str, method_name: str) -> list:
    """JML comment tokens attached to a method: those between the previous
    ``;``/``{``/``}`` and the body, in source order."""
    methods = [m for m in find_methods(source) if m.name == method_name]
    if not methods:
        raise MethodNotFound(method_name)
    if len(methods) > 1:
        raise AmbiguousMethod(method_name)
    method = methods[0]
    toks = lex(source)
    name_pos = next(i for i, t in enumerate(toks) if t.kind != "comment" and t.start >= method.header_start)
    j = name_pos - 1
    jml = []
    while j >= 0 and not (toks[j].kind == "op" and toks[j].text in (";", "{", "}")):
        if toks[j].is_jml:
            jml.append(toks[j])
        j -= 1
    # JML modifiers inside the header itself (e.g. /*@ pure @*/)
    for t in toks[name_pos:]:
        if t.start >= method.body_start:
            break
        if t.is_jml:
            jml.append(t)
    jml.sort(key=lambda t: t.start)
    return jml


def _method_annotation_spans(source: str, method_name: str) -> list:
    return [_removal_span(source, t.start, t.end) for t in _method_jml_tokens(source, method_name)]


def extract_contract(source: str, method_name: str):
    """Return ``(Contract, spans)`` for the JML annotations directly above a method.

    ``spans`` are the removal spans of those annotations (see
    :func:`annotation_spans`).  Raises :class:`NoContractFound` if the method
    carries no JML annotation and ``AmbiguousMethod`` if the name is declared
    more than once.
    """
    jml = _method_jml_tokens(source, method_name)
    if not jml:
        raise NoContractFound(method_name)
    blank = [" "] * len(source)
    for t in jml:
        cleaned = _blank_markers(t.text)
        blank[t.start : t.end] = cleaned
    region_start, region_end = jml[0].start, jml[-1].end
    region = "".join(blank[region_start:region_end])
    raw = "\n".join(t.text for t in jml)
    contract = parse_contract(region, base=region_start, raw_text=raw)
    spans = [_removal_span(source, t.start, t.end) for t in jml]
    return contract, spans


def render_annotation(contract: Contract, indent: str = "    ") -> str:
    return render_clauses(
        [print_expression(e) for e in contract.requires],
        [print_expression(e) for e in contract.ensures],
        indent,
    )


def render_clauses(requires, ensures, indent: str = "    ") -> str:
    """A block annotation from clause bodies given as text (not parsed)."""
    lines = [f"{indent}/*@"]
    lines += [f"{indent}  @ requires {t.strip().rstrip(';')};" for t in requires]
    lines += [f"{indent}  @ ensures {t.strip().rstrip(';')};" for t in ensures]
    lines.append(f"{indent}  @*/")
    return "\n".join(lines) + "\n"


def annotate_method(source: str, method_name: str, contract: Contract) -> str:
    """Insert ``contract`` as a block annotation above ``method_name``.

    Existing JML annotations of that method are replaced.
    """
    return annotate_method_text(
        source,
        method_name,
        [print_expression(e) for e in contract.requires],
        [print_expression(e) for e in contract.ensures],
    )


def annotate_method_text(source: str, method_name: str, requires=(), ensures=()) -> str:
    """Like :func:`annotate_method` but with clause text inserted verbatim."""
    spans = _method_annotation_spans(source, method_name)
    source = _remove(source, spans) if spans else source
    method = next(m for m in find_methods(source) if m.name == method_name)
    line_start = source.rfind("\n", 0, method.header_start) + 1
    indent = source[line_start : method.header_start]
    if indent.strip():
        indent = ""
        line_start = method.header_start
    return source[:line_start] + render_clauses(requires, ensures, indent) + source[line_start:]
