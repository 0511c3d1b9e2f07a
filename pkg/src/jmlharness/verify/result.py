from __future__ import annotations

import enum
from dataclasses import dataclass, field


class Status(str, enum.Enum):
    VERIFIED = "Verified"
    FAILED = "Failed"
    TOOL_ERROR = "ToolError"
    TIMEOUT = "Timeout"
    EMPTY = "Empty"  # no specification was produced


class Category(str, enum.Enum):
    SYNTAX = "Syntax"
    TYPE = "Type"
    POSTCONDITION = "PostconditionNotProven"
    CALLER_PRECONDITION = "PreconditionCallerViolation"
    ASSERT = "AssertNotProven"
    ARITHMETIC = "ArithmeticCheck"
    NULLNESS = "NullnessCheck"
    TIMEOUT = "TimeoutObligation"
    UNKNOWN = "Unknown"

    @property
    def is_static(self) -> bool:
        """Syntax and type errors make up E_s; everything else is a proof failure."""
        return self in (Category.SYNTAX, Category.TYPE)


@dataclass(frozen=True)
class ClassifiedError:
    category: Category
    message: str
    source_line: int
    suggestion: str = ""
    pattern_id: str = ""

    def to_dict(self) -> dict:
        return {
            "category": self.category.value,
            "message": self.message,
            "sourceLine": self.source_line,
            "suggestion": self.suggestion,
            "patternId": self.pattern_id,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ClassifiedError":
        return cls(Category(d["category"]), d["message"], d["sourceLine"], d.get("suggestion", ""), d.get("patternId", ""))


@dataclass(frozen=True)
class VerifierResult:
    status: Status
    syntax_errors: tuple = ()
    verification_errors: tuple = ()
    raw_log: str = ""
    elapsed_ms: float = field(default=0.0, compare=False)
    exit_code: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "status", Status(self.status))
        object.__setattr__(self, "syntax_errors", tuple(self.syntax_errors))
        object.__setattr__(self, "verification_errors", tuple(self.verification_errors))
        if self.status is Status.VERIFIED and (self.syntax_errors or self.verification_errors):
            raise ValueError("a verified result cannot carry errors")
        if any(not e.category.is_static for e in self.syntax_errors):
            raise ValueError("E_s holds only Syntax and Type errors")
        if any(e.category.is_static for e in self.verification_errors):
            raise ValueError("E_v cannot hold Syntax or Type errors")

    @property
    def verified(self) -> bool:
        return self.status is Status.VERIFIED

    @property
    def errors(self) -> tuple:
        return self.syntax_errors + self.verification_errors

    def to_dict(self, timing: bool = True) -> dict:
        d = {
            "status": self.status.value,
            "exitCode": self.exit_code,
            "syntaxErrors": [e.to_dict() for e in self.syntax_errors],
            "verificationErrors": [e.to_dict() for e in self.verification_errors],
            "rawLog": self.raw_log,
        }
        if timing:
            d["elapsedMs"] = round(self.elapsed_ms, 3)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "VerifierResult":
        return cls(
            Status(d["status"]),
            tuple(ClassifiedError.from_dict(e) for e in d.get("syntaxErrors", [])),
            tuple(ClassifiedError.from_dict(e) for e in d.get("verificationErrors", [])),
            d.get("rawLog", ""),
            d.get("elapsedMs", 0.0),
            d.get("exitCode"),
        )
