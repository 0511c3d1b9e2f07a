from __future__ import annotations

import os
from dataclasses import asdict, dataclass

EXECUTABLE_ENV = "JMLHARNESS_OPENJML"
# extended static checking, the argument set used against OpenJML 21-0.21
DEFAULT_FLAGS = ("--esc", "--quiet")


@dataclass(frozen=True)
class VerifierConfig:
    executable: str = "openjml"
    flags: tuple = DEFAULT_FLAGS
    timeout: float = 300.0
    parallelism: int = 1
    pattern_table: str | None = None  # path to an alternative patterns.json

    def __post_init__(self):
        object.__setattr__(self, "flags", tuple(self.flags))
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if self.parallelism < 1:
            raise ValueError("parallelism must be at least 1")

    def resolved_executable(self) -> str:
        return os.environ.get(EXECUTABLE_ENV) or self.executable

    def to_json(self) -> dict:
        d = asdict(self)
        d["flags"] = list(self.flags)
        return d

    @classmethod
    def from_json(cls, obj: dict) -> "VerifierConfig":
        unknown = set(obj) - {f for f in cls.__dataclass_fields__}
        if unknown:
            raise ValueError(f"unknown verifier keys: {sorted(unknown)}")
        return cls(**obj)
