"""Type-specific output mutants and the mutant pool used for completeness."""

from __future__ import annotations

import json
import logging
import random
import zlib
from dataclasses import asdict, dataclass, replace

from ..values import Value, element_type, is_array_type, value_to_json, wrap_int
from .suite import TestSuite

log = logging.getLogger(__name__)

ARRAY_OPS = ("InsertElement", "DeleteElement", "PerturbElement", "SwapAdjacent")
STRING_OPS = ("FlipCase", "DropChar", "AppendChar")
# symbolic integer deltas; plain ints are fixed offsets
TWICE_ABS_PLUS_ONE = "+2|o|+1"
NEGATE = "neg"


class UnmutableValue(ValueError):
    pass


@dataclass(frozen=True)
class MutationConfig:
    k: int = 4
    integer_deltas: tuple = (1, -1, TWICE_ABS_PLUS_ONE, NEGATE)
    char_deltas: tuple = (1, -1)
    char_case_flip: bool = True
    float_ops: tuple = (("mul", 2.0), ("mul", -1.0), ("add", 1.0))
    array_ops: tuple = ARRAY_OPS
    string_ops: tuple = STRING_OPS
    seed: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be at least 1")
        for op in self.array_ops:
            if op not in ARRAY_OPS:
                raise ValueError(f"unknown array op {op}")
        for op in self.string_ops:
            if op not in STRING_OPS:
                raise ValueError(f"unknown string op {op}")
        for d in self.integer_deltas:
            if not isinstance(d, int) and d not in (TWICE_ABS_PLUS_ONE, NEGATE):
                raise ValueError(f"unknown integer delta {d!r}")

    def to_json(self) -> dict:
        d = asdict(self)
        d["float_ops"] = [list(op) for op in self.float_ops]
        return {k: list(v) if isinstance(v, tuple) else v for k, v in d.items()}

    @classmethod
    def from_json(cls, obj: dict) -> "MutationConfig":
        obj = dict(obj)
        if "float_ops" in obj:
            obj["float_ops"] = tuple((op, float(x)) for op, x in obj["float_ops"])
        for key in ("integer_deltas", "char_deltas", "array_ops", "string_ops"):
            if key in obj:
                obj[key] = tuple(obj[key])
        return cls(**obj)


def _int_candidates(o: int, cfg: MutationConfig, bits: int):
    for d in cfg.integer_deltas:
        if d == TWICE_ABS_PLUS_ONE:
            yield wrap_int(o + 2 * abs(o) + 1, bits)
        elif d == NEGATE:
            yield wrap_int(-o, bits)
        else:
            yield wrap_int(o + d, bits)


def _char_candidates(c: int, cfg: MutationConfig):
    for d in cfg.char_deltas:
        yield (c + d) & 0xFFFF
    if cfg.char_case_flip:
        ch = chr(c)
        if ch.isalpha() and ch.swapcase() != ch and len(ch.swapcase()) == 1:
            yield ord(ch.swapcase())


def _string_candidates(s: str, cfg: MutationConfig):
    for op in cfg.string_ops:
        if op == "FlipCase":
            for i, ch in enumerate(s):
                flipped = ch.swapcase()
                if flipped != ch and len(flipped) == 1:
                    yield s[:i] + flipped + s[i + 1 :]
                    break
        elif op == "DropChar" and s:
            yield s[:-1]
        elif op == "AppendChar":
            yield s + ("a" if not s.endswith("a") else "b")


def _default_element(tag: str) -> Value:
    if is_array_type(tag):
        return Value(tag, ())
    return {
        "bool": Value.bool(False),
        "char": Value.char("a"),
        "int32": Value.int32(0),
        "int64": Value.int64(0),
        "float64": Value.float64(0.0),
        "string": Value.string(""),
    }[tag]


def _rng_for(o: Value, cfg: MutationConfig) -> random.Random:
    digest = zlib.crc32(json.dumps(value_to_json(o), sort_keys=True).encode())
    return random.Random((cfg.seed << 32) ^ digest)


def _array_candidates(o: Value, cfg: MutationConfig):
    """Round-robin over the enabled operators so the first k mix operator kinds."""
    items = list(o.v)
    elem = element_type(o.tag)
    rng = _rng_for(o, cfg)
    per_op = {}
    n = len(items)
    if "DeleteElement" in cfg.array_ops and n:
        per_op["DeleteElement"] = [items[:-1], items[1:]]
    if "InsertElement" in cfg.array_ops:
        filler = items[0] if n and not items[0].is_null else _default_element(elem)
        per_op["InsertElement"] = [items + [filler], [filler] + items]
    if "PerturbElement" in cfg.array_ops and n:
        cands = []
        for pos in rng.sample(range(n), n):
            if items[pos].is_null:
                continue
            try:
                m = mutate_output(items[pos], replace(cfg, k=1))
            except UnmutableValue:
                continue
            cands.append(items[:pos] + [m[0]] + items[pos + 1 :])
            if len(cands) == 2:
                break
        per_op["PerturbElement"] = cands
    if "SwapAdjacent" in cfg.array_ops:
        cands = []
        for pos in range(n - 1):
            if items[pos] != items[pos + 1]:
                swapped = list(items)
                swapped[pos], swapped[pos + 1] = swapped[pos + 1], swapped[pos]
                cands.append(swapped)
                if len(cands) == 2:
                    break
        per_op["SwapAdjacent"] = cands
    rounds = max((len(c) for c in per_op.values()), default=0)
    for r in range(rounds):
        for op in ARRAY_OPS:
            if op in per_op and r < len(per_op[op]):
                yield Value(o.tag, tuple(per_op[op][r]))


def mutate_output(o: Value, cfg: MutationConfig = MutationConfig()) -> list:
    """Up to ``cfg.k`` distinct, type-preserving mutants of ``o``, none equal to ``o``.

    Deterministic for a fixed ``(o, cfg)``.  Raises :class:`UnmutableValue` for
    null or when the enabled operators cannot produce any distinct value.
    """
    if o.is_null:
        raise UnmutableValue("null outputs have no mutants")
    tag = o.tag
    if tag == "bool":
        cands = [Value.bool(not o.v)]
    elif tag == "int32":
        cands = [Value.int32(x) for x in _int_candidates(o.v, cfg, 32)]
    elif tag == "int64":
        cands = [Value.int64(x) for x in _int_candidates(o.v, cfg, 64)]
    elif tag == "char":
        cands = [Value.char(x) for x in _char_candidates(o.v, cfg)]
    elif tag == "float64":
        cands = [Value.float64(o.v * x if op == "mul" else o.v + x) for op, x in cfg.float_ops]
    elif tag == "string":
        cands = [Value.string(s) for s in _string_candidates(o.v, cfg)]
    elif is_array_type(tag):
        cands = _array_candidates(o, cfg)
    else:
        raise UnmutableValue(f"no mutation operators for {tag}")
    out, seen = [], {o}
    for c in cands:
        if c not in seen:
            seen.add(c)
            out.append(c)
            if len(out) == cfg.k:
                break
    if not out:
        raise UnmutableValue(f"no operator produces a distinct mutant of {o!r}")
    return out


@dataclass(frozen=True)
class MutantPair:
    pair_index: int
    inputs: tuple
    output: Value


def build_mutant_pool(suite: TestSuite, cfg: MutationConfig = MutationConfig()):
    """The pool T1: every valid pair's inputs with each of its output mutants.

    Pairs whose output cannot be mutated are skipped with a warning; the
    skipped pair indices are returned alongside the pool.
    """
    if not suite.valid_pairs:
        raise ValueError("suite has no valid pairs")
    pool, skipped = [], []
    for i, pair in enumerate(suite.valid_pairs):
        try:
            mutants = mutate_output(pair.output, cfg)
        except UnmutableValue as exc:
            log.warning("pair %d skipped: %s", i, exc)
            skipped.append(i)
            continue
        pool.extend(MutantPair(i, pair.inputs, m) for m in mutants)
    return pool, skipped

