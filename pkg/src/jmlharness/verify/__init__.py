"""Whole-program verification: run a verifier, classify its log, score the result."""

from .builtin import BuiltinVerifier
from .classify import PatternTable, classify_output, default_table, load_pattern_table
from .config import VerifierConfig
from .openjml import OpenJMLVerifier, has_jml, result_from_log
from .result import Category, ClassifiedError, Status, VerifierResult
from .scoring import EmptyInput, graduated_score, verification_rate

__all__ = [
    "BuiltinVerifier", "Category", "ClassifiedError", "EmptyInput", "OpenJMLVerifier", "PatternTable",
    "Status", "VerifierConfig", "VerifierResult", "classify_output", "default_table", "graduated_score",
    "has_jml", "load_pattern_table", "result_from_log", "verification_rate",
]
