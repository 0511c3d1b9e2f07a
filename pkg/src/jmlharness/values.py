"""Concrete Java-domain values.

A :class:`Value` is a tagged, immutable payload. Scalar tags are ``bool``,
``char``, ``int32``, ``int64``, ``float64`` and ``string``; ``null`` is the
null reference; arrays carry their element type in the tag (``int32[]``,
``char[][]``).  Equality is structural, and floats compare by bit pattern.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from typing import Any

SCALAR_TAGS = ("bool", "char", "int32", "int64", "float64", "string")
INT32_MIN, INT32_MAX = -(2**31), 2**31 - 1
INT64_MIN, INT64_MAX = -(2**63), 2**63 - 1
CHAR_MAX = 0xFFFF

_JAVA_TO_TAG = {
    "boolean": "bool",
    "char": "char",
    "int": "int32",
    "long": "int64",
    "double": "float64",
    "float": "float64",
    "String": "string",
    "java.lang.String": "string",
}
_TAG_TO_JAVA = {
    "bool": "boolean",
    "char": "char",
    "int32": "int",
    "int64": "long",
    "float64": "double",
    "string": "String",
}


class UnsupportedType(ValueError):
    """A type that has no concrete value model (void, Object, user classes)."""


def is_array_type(tag: str) -> bool:
    return tag.endswith("[]")


def element_type(tag: str) -> str:
    if not is_array_type(tag):
        raise ValueError(f"not an array type: {tag}")
    return tag[:-2]


def is_reference_type(tag: str) -> bool:
    return tag == "string" or is_array_type(tag)


def check_type(tag: str) -> str:
    base = tag
    while is_array_type(base):
        base = element_type(base)
    if base not in SCALAR_TAGS:
        raise UnsupportedType(tag)
    return tag


def type_from_java(name: str) -> str:
    """Map a Java type name (``int[]``, ``String``) to a value tag."""
    name = name.replace(" ", "")
    dims = 0
    while name.endswith("[]"):
        name = name[:-2]
        dims += 1
    if name not in _JAVA_TO_TAG:
        raise UnsupportedType(name)
    return _JAVA_TO_TAG[name] + "[]" * dims


def java_type(tag: str) -> str:
    dims = 0
    while is_array_type(tag):
        tag = element_type(tag)
        dims += 1
    return _TAG_TO_JAVA[tag] + "[]" * dims


def _float_bits(x: float) -> bytes:
    return struct.pack(">d", x)


@dataclass(frozen=True, eq=False)
class Value:
    tag: str
    v: Any = None

    def __post_init__(self):
        _validate(self)

    # structural equality; floats by bits so NaN == NaN and 0.0 != -0.0
    def key(self):
        if self.tag == "float64":
            return ("float64", _float_bits(self.v))
        if is_array_type(self.tag):
            return (self.tag, tuple(e.key() for e in self.v))
        return (self.tag, self.v)

    def __eq__(self, other):
        if not isinstance(other, Value):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Value({self.tag}, {format_value(self)})"

    @property
    def is_null(self) -> bool:
        return self.tag == "null"

    # constructors
    @staticmethod
    def bool(b: bool) -> Value:
        return Value("bool", bool(b))

    @staticmethod
    def char(c) -> Value:
        return Value("char", ord(c) if isinstance(c, str) else int(c))

    @staticmethod
    def int32(n: int) -> Value:
        return Value("int32", int(n))

    @staticmethod
    def int64(n: int) -> Value:
        return Value("int64", int(n))

    @staticmethod
    def float64(x: float) -> Value:
        return Value("float64", float(x))

    @staticmethod
    def string(s: str) -> Value:
        return Value("string", s)

    @staticmethod
    def null() -> Value:
        return Value("null", None)

    @staticmethod
    def array(elem: str, items) -> Value:
        return Value(elem + "[]", tuple(items))


def _validate(val: Value) -> None:
    tag, v = val.tag, val.v
    if tag == "null":
        if v is not None:
            raise ValueError("null carries no payload")
    elif tag == "bool":
        if not isinstance(v, bool):
            raise ValueError(f"bool payload expected, got {v!r}")
    elif tag == "char":
        if isinstance(v, bool) or not isinstance(v, int) or not 0 <= v <= CHAR_MAX:
            raise ValueError(f"char code point out of range: {v!r}")
    elif tag == "int32":
        if isinstance(v, bool) or not isinstance(v, int) or not INT32_MIN <= v <= INT32_MAX:
            raise ValueError(f"int32 out of range: {v!r}")
    elif tag == "int64":
        if isinstance(v, bool) or not isinstance(v, int) or not INT64_MIN <= v <= INT64_MAX:
            raise ValueError(f"int64 out of range: {v!r}")
    elif tag == "float64":
        if not isinstance(v, float):
            raise ValueError(f"float64 payload expected, got {v!r}")
    elif tag == "string":
        if not isinstance(v, str):
            raise ValueError(f"string payload expected, got {v!r}")
    elif is_array_type(tag):
        check_type(tag)
        if not isinstance(v, tuple):
            raise ValueError("array payload must be a tuple")
        elem = element_type(tag)
        for e in v:
            if not isinstance(e, Value):
                raise ValueError("array elements must be Values")
            if e.tag != elem and not (e.is_null and is_reference_type(elem)):
                raise ValueError(f"heterogeneous array: {e.tag} in {tag}")
    else:
        raise UnsupportedType(tag)


NULL = Value("null")


def conforms(val: Value, tag: str) -> bool:
    """True if ``val`` may be stored in a variable of type ``tag``."""
    if val.is_null:
        return is_reference_type(tag)
    return val.tag == tag


def wrap_int(n: int, bits: int) -> int:
    mask = (1 << bits) - 1
    n &= mask
    return n - (1 << bits) if n >> (bits - 1) else n


# JSON codec ---------------------------------------------------------------

def _payload_to_json(tag: str, val: Value):
    if val.is_null:
        return None
    if tag == "float64":
        x = val.v
        if math.isnan(x):
            return "NaN"
        if math.isinf(x):
            return "Infinity" if x > 0 else "-Infinity"
        return x
    if is_array_type(tag):
        elem = element_type(tag)
        return [_payload_to_json(elem, e) for e in val.v]
    return val.v


def payload_from_json(tag: str, raw) -> Value:
    if raw is None:
        if not is_reference_type(tag):
            raise ValueError(f"null is not a {tag}")
        return NULL
    if is_array_type(tag):
        elem = element_type(tag)
        return Value(tag, tuple(payload_from_json(elem, r) for r in raw))
    if tag == "float64":
        if isinstance(raw, str):
            return Value.float64(float({"NaN": "nan", "Infinity": "inf", "-Infinity": "-inf"}[raw]))
        return Value.float64(float(raw))
    return Value(tag, raw)


def value_to_json(val: Value) -> dict:
    if val.is_null:
        return {"t": "null"}
    return {"t": val.tag, "v": _payload_to_json(val.tag, val)}


def value_from_json(obj: dict) -> Value:
    tag = obj["t"]
    if tag == "null":
        return NULL
    check_type(tag)
    return payload_from_json(tag, obj["v"])


# rendering -----------------------------------------------------------------

def _char_repr(code: int) -> str:
    ch = chr(code)
    if ch == "'":
        return "'\\''"
    if ch == "\\":
        return "'\\\\'"
    if 0x20 <= code < 0x7F:
        return f"'{ch}'"
    return f"'\\u{code:04x}'"


def format_value(val: Value) -> str:
    """Human-readable rendering, JML-literal flavoured."""
    if val.is_null:
        return "null"
    if val.tag == "bool":
        return "true" if val.v else "false"
    if val.tag == "char":
        return _char_repr(val.v)
    if val.tag == "int32":
        return str(val.v)
    if val.tag == "int64":
        return f"{val.v}L"
    if val.tag == "float64":
        return repr(val.v)
    if val.tag == "string":
        return '"' + _escape_string(val.v) + '"'
    return "{" + ", ".join(format_value(e) for e in val.v) + "}"


def _escape_string(s: str) -> str:
    out = []
    for ch in s:
        code = ord(ch)
        if ch == '"':
            out.append('\\"')
        elif ch == "\\":
            out.append("\\\\")
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\t":
            out.append("\\t")
        elif 0x20 <= code < 0x7F:
            out.append(ch)
        else:
            out.append(f"\\u{code:04x}")
    return "".join(out)


def java_literal(val: Value, tag: str | None = None) -> str:
    """Java source expression producing ``val`` (``tag`` types nulls and empty arrays)."""
    tag = tag or val.tag
    if val.is_null:
        return "null" if tag == "null" else f"({java_type(tag)}) null"
    if val.tag == "bool":
        return "true" if val.v else "false"
    if val.tag == "char":
        # \u escapes are pre-lexed by javac, so control chars go through a cast
        if 0x20 <= val.v < 0x7F:
            return _char_repr(val.v)
        return f"(char) {val.v}"
    if val.tag == "int32":
        return str(val.v) if val.v != INT32_MIN else "Integer.MIN_VALUE"
    if val.tag == "int64":
        return f"{val.v}L" if val.v != INT64_MIN else "Long.MIN_VALUE"
    if val.tag == "float64":
        x = val.v
        if math.isnan(x):
            return "Double.NaN"
        if math.isinf(x):
            return "Double.POSITIVE_INFINITY" if x > 0 else "Double.NEGATIVE_INFINITY"
        return repr(x) + "d" if "e" not in repr(x) else repr(x)
    if val.tag == "string":
        return _java_string(val.v)
    elem = element_type(val.tag)
    inner = ", ".join(java_literal(e, elem) for e in val.v)
    return f"new {java_type(val.tag)} {{{inner}}}"


def _java_string(s: str) -> str:
    parts = []
    for ch in s:
        code = ord(ch)
        if ch == '"':
            parts.append('\\"')
        elif ch == "\\":
            parts.append("\\\\")
        elif 0x20 <= code < 0x7F:
            parts.append(ch)
        else:
            parts.append(f"\\{code:03o}" if code < 0x100 else "\" + (char) " + str(code) + " + \"")
    return '"' + "".join(parts) + '"'
