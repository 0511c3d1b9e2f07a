"""Random input tuples for extending a suite, biased toward boundary values."""

from __future__ import annotations

import random

from ..values import (
    INT32_MAX,
    INT32_MIN,
    INT64_MAX,
    INT64_MIN,
    UnsupportedType,
    Value,
    check_type,
    element_type,
    is_array_type,
)
from .suite import MethodSignature

# half of all draws come from the boundary set, so each of five boundary
# values is hit with probability 0.1
BOUNDARY_PROB = 0.5
MAX_ARRAY_LEN = 8
MAX_STRING_LEN = 8

_BOUNDARIES = {
    "bool": [Value.bool(False), Value.bool(True)],
    "char": [Value.char(0), Value.char("A"), Value.char("z"), Value.char(" "), Value.char(0xFFFF)],
    "int32": [Value.int32(x) for x in (0, 1, -1, INT32_MIN, INT32_MAX)],
    "int64": [Value.int64(x) for x in (0, 1, -1, INT64_MIN, INT64_MAX)],
    "float64": [Value.float64(x) for x in (0.0, 1.0, -1.0, 1e300, -1e300)],
}


def _typical(tag: str, rng: random.Random) -> Value:
    if tag == "bool":
        return Value.bool(rng.random() < 0.5)
    if tag == "char":
        return Value.char(rng.randint(0x20, 0x7E))
    if tag == "int32":
        return Value.int32(rng.randint(-1000, 1000) if rng.random() < 0.8 else rng.randint(INT32_MIN, INT32_MAX))
    if tag == "int64":
        return Value.int64(rng.randint(-1000, 1000) if rng.random() < 0.8 else rng.randint(INT64_MIN, INT64_MAX))
    if tag == "float64":
        return Value.float64(round(rng.uniform(-1000.0, 1000.0), 3))
    if tag == "string":
        n = rng.randint(1, MAX_STRING_LEN)
        return Value.string("".join(chr(rng.randint(0x20, 0x7E)) for _ in range(n)))
    elem = element_type(tag)
    n = rng.randint(1, MAX_ARRAY_LEN)
    return Value(tag, tuple(draw_value(elem, rng) for _ in range(n)))


def _boundary(tag: str, rng: random.Random) -> Value:
    if tag == "string":
        return rng.choice([Value.string(""), Value.string(chr(rng.randint(0x20, 0x7E)))])
    if is_array_type(tag):
        if rng.random() < 0.5:
            return Value(tag, ())
        return Value(tag, (draw_value(element_type(tag), rng),))
    return rng.choice(_BOUNDARIES[tag])


def draw_value(tag: str, rng: random.Random) -> Value:
    if rng.random() < BOUNDARY_PROB:
        return _boundary(tag, rng)
    return _typical(tag, rng)


def generate_random_inputs(sig: MethodSignature, n: int, seed: int = 0) -> list:
    """``n`` input tuples for ``sig``, reproducible for a given seed."""
    for _, tag in sig.params:
        try:
            check_type(tag)
        except UnsupportedType:
            raise UnsupportedType(f"cannot generate values of type {tag}") from None
    rng = random.Random(seed)
    return [tuple(draw_value(tag, rng) for _, tag in sig.params) for _ in range(n)]
