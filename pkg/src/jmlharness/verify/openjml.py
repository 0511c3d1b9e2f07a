"""Subprocess adapter for the OpenJML extended static checker."""

from __future__ import annotations

import logging
import os
import shutil
import subprocess
import tempfile
import threading
import time
from pathlib import Path

from ..errors import BackendUnavailable
from ..javalex import LexError, class_names, code_tokens, lex
from .classify import PatternTable, classify_output, load_pattern_table
from .config import VerifierConfig
from .result import Status, VerifierResult

log = logging.getLogger(__name__)


def has_jml(source: str) -> bool:
    try:
        return any(t.is_jml for t in lex(source))
    except LexError:
        return "/*@" in source or "//@" in source


def primary_class_name(source: str) -> str:
    """Name of the public top-level class (the file must be named after it)."""
    try:
        toks = code_tokens(source)
    except LexError:
        return "Main"
    for i, t in enumerate(toks[:-2]):
        if t.text == "public" and toks[i + 1].text in ("class", "interface", "enum", "record"):
            return toks[i + 2].text
    names = class_names(source)
    return names[0] if names else "Main"


def result_from_log(raw_log: str, exit_code: int, elapsed_ms: float, table: PatternTable | None = None) -> VerifierResult:
    """Status rules: any classified error means Failed; a non-zero exit with no
    classified error is a tool failure; otherwise the class verified."""
    e_s, e_v = classify_output(raw_log, table)
    if e_s or e_v:
        status = Status.FAILED
    elif exit_code != 0:
        status = Status.TOOL_ERROR
    else:
        status = Status.VERIFIED
    return VerifierResult(status, e_s, e_v, raw_log, elapsed_ms, exit_code)


class OpenJMLVerifier:
    """Runs ``<executable> <flags> File.java`` in a fresh temp directory per call."""

    name = "openjml"

    def __init__(self, config: VerifierConfig | None = None):
        self.config = config or VerifierConfig()
        self.table = load_pattern_table(self.config.pattern_table)
        self._slots = threading.BoundedSemaphore(self.config.parallelism)

    @property
    def executable(self) -> str:
        return self.config.resolved_executable()

    def available(self) -> bool:
        exe = self.executable
        return shutil.which(exe) is not None or (os.path.isfile(exe) and os.access(exe, os.X_OK))

    def require(self) -> None:
        if not self.available():
            raise BackendUnavailable(f"OpenJML executable {self.executable!r} not found")

    def identity(self) -> str:
        return f"openjml:{self.executable} {' '.join(self.config.flags)}".rstrip()

    def verify(self, source: str, method: str | None = None) -> VerifierResult:
        """Check the whole class; ``method`` is accepted for interface parity and ignored."""
        if not source.strip():
            raise ValueError("empty source")
        if not has_jml(source):
            return VerifierResult(Status.EMPTY, raw_log="no JML annotations in source")
        return self.run(source)

    def run(self, source: str, file_stem: str | None = None) -> VerifierResult:
        exe = self.executable
        stem = file_stem or primary_class_name(source)
        with self._slots, tempfile.TemporaryDirectory(prefix="jmlharness-") as tmp:
            path = Path(tmp) / f"{stem}.java"
            path.write_text(source, encoding="utf-8")
            cmd = [exe, *self.config.flags, path.name]
            log.debug("running %s in %s", cmd, tmp)
            start = time.perf_counter()
            try:
                proc = subprocess.run(
                    cmd, cwd=tmp, capture_output=True, text=True, timeout=self.config.timeout
                )
            except FileNotFoundError as exc:
                return VerifierResult(Status.TOOL_ERROR, raw_log=str(exc), exit_code=None)
            except subprocess.TimeoutExpired as exc:
                out = (exc.stdout or b"") if isinstance(exc.stdout, bytes) else (exc.stdout or "")
                text = out.decode(errors="replace") if isinstance(out, bytes) else out
                elapsed = (time.perf_counter() - start) * 1000
                return VerifierResult(Status.TIMEOUT, raw_log=text + f"\n[timeout after {self.config.timeout}s]", elapsed_ms=elapsed)
            elapsed = (time.perf_counter() - start) * 1000
        raw = proc.stdout + proc.stderr
        return result_from_log(raw, proc.returncode, elapsed, self.table)
