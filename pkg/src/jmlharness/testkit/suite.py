from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..javalex import MethodDecl
from ..values import UnsupportedType, Value, check_type, conforms, type_from_java, value_from_json, value_to_json

SCHEMA_VERSION = 1


class SuiteError(ValueError):
    pass


@dataclass(frozen=True)
class MethodSignature:
    name: str
    params: tuple  # ((name, type tag), ...)
    return_type: str

    def __post_init__(self):
        if self.return_type in ("void", "", None):
            raise UnsupportedType("methods without a return value cannot be evaluated")
        check_type(self.return_type)
        for _, tag in self.params:
            check_type(tag)

    @property
    def param_names(self) -> list:
        return [n for n, _ in self.params]

    @classmethod
    def from_decl(cls, decl: MethodDecl) -> "MethodSignature":
        if decl.return_type == "void":
            raise UnsupportedType("void")
        return cls(
            decl.name,
            tuple((name, type_from_java(t)) for t, name in decl.params),
            type_from_java(decl.return_type),
        )

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "params": [{"name": n, "type": t} for n, t in self.params],
            "returnType": self.return_type,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "MethodSignature":
        return cls(obj["name"], tuple((p["name"], p["type"]) for p in obj["params"]), obj["returnType"])


@dataclass(frozen=True)
class TestPair:
    inputs: tuple
    output: Value


@dataclass
class TestSuite:
    signature: MethodSignature
    valid_pairs: list = field(default_factory=list)
    invalid_inputs: list = field(default_factory=list)

    __test__ = False  # not a pytest class

    def __post_init__(self):
        self.valid_pairs = [p if isinstance(p, TestPair) else TestPair(tuple(p[0]), p[1]) for p in self.valid_pairs]
        self.invalid_inputs = [tuple(i) for i in self.invalid_inputs]
        for p in self.valid_pairs:
            self.check_inputs(p.inputs)
            if not conforms(p.output, self.signature.return_type):
                raise SuiteError(f"output {p.output!r} is not a {self.signature.return_type}")
        for inp in self.invalid_inputs:
            self.check_inputs(inp)

    def check_inputs(self, inputs) -> None:
        params = self.signature.params
        if len(inputs) != len(params):
            raise SuiteError(f"expected {len(params)} inputs, got {len(inputs)}")
        for (name, tag), v in zip(params, inputs):
            if not conforms(v, tag):
                raise SuiteError(f"input {name}={v!r} is not a {tag}")

    @property
    def valid_inputs(self) -> list:
        """T+, the input projection of the valid pairs."""
        return [p.inputs for p in self.valid_pairs]

    def truncated(self, max_pairs: int) -> "TestSuite":
        return TestSuite(self.signature, self.valid_pairs[:max_pairs], list(self.invalid_inputs))

    def to_json(self) -> dict:
        return {
            "schemaVersion": SCHEMA_VERSION,
            "signature": self.signature.to_json(),
            "validPairs": [
                {"inputs": [value_to_json(v) for v in p.inputs], "output": value_to_json(p.output)}
                for p in self.valid_pairs
            ],
            "invalidInputs": [[value_to_json(v) for v in inp] for inp in self.invalid_inputs],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "TestSuite":
        version = obj.get("schemaVersion")
        if version != SCHEMA_VERSION:
            raise SuiteError(f"unsupported suite schemaVersion {version!r}")
        sig = MethodSignature.from_json(obj["signature"])
        pairs = [
            TestPair(tuple(value_from_json(v) for v in p["inputs"]), value_from_json(p["output"]))
            for p in obj.get("validPairs", [])
        ]
        invalid = [tuple(value_from_json(v) for v in inp) for inp in obj.get("invalidInputs", [])]
        return cls(sig, pairs, invalid)


def load_suite(path) -> TestSuite:
    with open(path, encoding="utf-8") as f:
        return TestSuite.from_json(json.load(f))


def dump_suite(suite: TestSuite) -> str:
    return json.dumps(suite.to_json(), indent=2) + "\n"


def save_suite(suite: TestSuite, path) -> None:
    Path(path).write_text(dump_suite(suite), encoding="utf-8")
