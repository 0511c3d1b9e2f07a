"""Capture reference outputs by compiling and running the Java method."""

from __future__ import annotations

import json
import os
import shutil
import subprocess
import tempfile
from pathlib import Path

from ..errors import BackendUnavailable
from ..javalex import class_names, code_tokens, find_method
from ..values import payload_from_json, java_literal
from .suite import MethodSignature, TestPair

DEFAULT_TIMEOUT = 5.0
DRIVER = "__RefDriver"

_SERIALIZER = r"""
    static String ser(Object o) {
        if (o == null) return "null";
        if (o.getClass().isArray()) {
            StringBuilder sb = new StringBuilder("[");
            int n = java.lang.reflect.Array.getLength(o);
            for (int i = 0; i < n; i++) {
                if (i > 0) sb.append(",");
                sb.append(ser(java.lang.reflect.Array.get(o, i)));
            }
            return sb.append("]").toString();
        }
        if (o instanceof Character) return String.valueOf((int) ((Character) o).charValue());
        if (o instanceof Double || o instanceof Float) {
            double d = ((Number) o).doubleValue();
            if (Double.isNaN(d)) return "\"NaN\"";
            if (Double.isInfinite(d)) return d > 0 ? "\"Infinity\"" : "\"-Infinity\"";
            return Double.toString(d);
        }
        if (o instanceof String) {
            String s = (String) o;
            StringBuilder sb = new StringBuilder("\"");
            for (int i = 0; i < s.length(); i++) {
                char c = s.charAt(i);
                if (c == '"' || c == '\\') sb.append('\\').append(c);
                else if (c < 0x20 || c > 0x7e) sb.append(String.format("\\u%04x", (int) c));
                else sb.append(c);
            }
            return sb.append("\"").toString();
        }
        return o.toString();
    }
"""


class CompileError(RuntimeError):
    pass


class RuntimeCrash(RuntimeError):
    def __init__(self, index: int, stderr: str = ""):
        super().__init__(f"reference method crashed on input {index}: {stderr.strip()[-500:]}")
        self.index = index


class Timeout(RuntimeError):
    def __init__(self, index: int, seconds: float):
        super().__init__(f"input {index} exceeded {seconds}s")
        self.index = index


def find_jdk() -> tuple:
    home = os.environ.get("JAVA_HOME")
    javac = shutil.which("javac") or (home and shutil.which(str(Path(home) / "bin" / "javac")))
    java = shutil.which("java") or (home and shutil.which(str(Path(home) / "bin" / "java")))
    if not javac or not java:
        raise BackendUnavailable("javac/java not found on PATH or under JAVA_HOME")
    return javac, java


def _strip_package(source: str) -> str:
    toks = code_tokens(source)
    if toks and toks[0].text == "package":
        end = next(t for t in toks if t.text == ";")
        return source[: toks[0].start] + source[end.end :]
    return source


def render_driver(source: str, sig: MethodSignature, inputs: list) -> str:
    decl = find_method(source, sig.name)
    owner = class_names(source)[0]
    target = owner if "static" in decl.modifiers else f"new {owner}()"
    cases = []
    for i, inp in enumerate(inputs):
        args = ", ".join(java_literal(v, tag) for v, (_, tag) in zip(inp, sig.params))
        cases.append(f"            case {i}: System.out.println(ser({target}.{sig.name}({args}))); break;")
    body = "\n".join(cases)
    return (
        f"public class {DRIVER} {{\n"
        "    public static void main(String[] args) throws Throwable {\n"
        "        switch (Integer.parseInt(args[0])) {\n"
        f"{body}\n"
        "        }\n"
        "    }\n"
        f"{_SERIALIZER}"
        "}\n"
    )


def execute_reference(source: str, sig: MethodSignature, inputs: list, timeout: float = DEFAULT_TIMEOUT) -> list:
    """Run the reference method on each input tuple and return ``TestPair`` objects."""
    if not inputs:
        return []
    javac, java = find_jdk()
    source = _strip_package(source)
    owner = class_names(source)[0]
    with tempfile.TemporaryDirectory(prefix="jmlharness-ref-") as tmp:
        tmpdir = Path(tmp)
        (tmpdir / f"{owner}.java").write_text(source, encoding="utf-8")
        (tmpdir / f"{DRIVER}.java").write_text(render_driver(source, sig, inputs), encoding="utf-8")
        proc = subprocess.run(
            [javac, "-nowarn", "-d", tmp, str(tmpdir / f"{owner}.java"), str(tmpdir / f"{DRIVER}.java")],
            capture_output=True, text=True,
        )
        if proc.returncode != 0:
            raise CompileError(proc.stderr)
        pairs = []
        for i, inp in enumerate(inputs):
            try:
                run = subprocess.run([java, "-cp", tmp, DRIVER, str(i)], capture_output=True, text=True, timeout=timeout)
            except subprocess.TimeoutExpired:
                raise Timeout(i, timeout) from None
            if run.returncode != 0:
                raise RuntimeCrash(i, run.stderr)
            out = payload_from_json(sig.return_type, json.loads(run.stdout.strip().splitlines()[-1]))
            pairs.append(TestPair(tuple(inp), out))
        return pairs
