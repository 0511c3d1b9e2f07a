"""Benchmark tasks, batch runs and VR/MVR aggregation."""

from __future__ import annotations

import csv
import enum
import hashlib
import io
import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Optional

from .agent.loop import AgentConfig, Outcome, run_veriact
from .errors import BackendUnavailable
from .harness import DEFAULT_THRESHOLDS, BuiltinBackend, OpenJMLBackend, spec_harness_report
from .javalex import code_tokens, find_methods
from .jml.annotations import extract_contract, strip_annotations
from .testkit.mutation import MutationConfig
from .testkit.suite import load_suite
from .verify.builtin import BuiltinVerifier
from .verify.config import VerifierConfig
from .verify.openjml import OpenJMLVerifier
from .verify.result import Status
from .verify.scoring import graduated_score

log = logging.getLogger(__name__)

CATEGORIES = ("branch", "multi_path_loop", "nested", "sequential", "single_path_loop")
MANIFEST_VERSION = 1
CLASS_NAME = "Solution"
METHOD_NAME = "solve"


class AmbiguousDeclaration(ValueError):
    pass


class RenameCollision(ValueError):
    pass


class ManifestError(ValueError):
    pass


@dataclass(frozen=True)
class Task:
    id: str
    category: str
    source: str
    method_name: str
    suite_path: Optional[str] = None
    script_path: Optional[str] = None  # response script for a scripted provider

    def __post_init__(self):
        if self.category not in CATEGORIES:
            raise ManifestError(f"task {self.id}: unknown category {self.category!r}")


def load_manifest(path) -> list:
    """Read ``tasks.json``; file paths inside it are relative to its directory."""
    path = Path(path)
    data = json.loads(path.read_text(encoding="utf-8"))
    if data.get("schemaVersion") != MANIFEST_VERSION:
        raise ManifestError(f"unsupported manifest schemaVersion {data.get('schemaVersion')!r}")
    root = path.parent
    tasks = []
    for entry in data["tasks"]:
        unknown = set(entry) - {"id", "category", "file", "method", "suite", "script"}
        if unknown:
            raise ManifestError(f"task {entry.get('id')}: unknown keys {sorted(unknown)}")
        tasks.append(
            Task(
                id=entry["id"],
                category=entry["category"],
                source=(root / entry["file"]).read_text(encoding="utf-8"),
                method_name=entry["method"],
                suite_path=str(root / entry["suite"]) if entry.get("suite") else None,
                script_path=str(root / entry["script"]) if entry.get("script") else None,
            )
        )
    ids = [t.id for t in tasks]
    if len(set(ids)) != len(ids):
        raise ManifestError("duplicate task ids")
    return tasks


# normalization ----------------------------------------------------------------

def _top_level_classes(toks) -> list:
    out, depth = [], 0
    for i, t in enumerate(toks):
        if t.text == "{":
            depth += 1
        elif t.text == "}":
            depth -= 1
        elif depth == 0 and t.text in ("class", "interface", "enum", "record") and i + 1 < len(toks):
            if i == 0 or toks[i - 1].text != ".":
                out.append(i + 1)
    return out


def normalize_task(t: Task) -> Task:
    """Rename the class to ``Solution`` and the target method to ``solve``.

    Rewriting is token-level over code only (comments and literals are left
    alone): every use of the class name, and every call or method reference
    of the target method that is unqualified or qualified by ``this`` or the
    class, is renamed.  Idempotent.
    """
    toks = code_tokens(t.source)
    classes = _top_level_classes(toks)
    if len(classes) != 1:
        raise AmbiguousDeclaration(f"expected one top-level class, found {len(classes)}")
    cls = toks[classes[0]].text
    decls = [m for m in find_methods(t.source) if m.name == t.method_name]
    if len(decls) != 1:
        raise AmbiguousDeclaration(f"expected one declaration of {t.method_name}, found {len(decls)}")
    method = t.method_name
    idents = {x.text for x in toks if x.kind == "ident"}
    if cls != CLASS_NAME and CLASS_NAME in idents:
        raise RenameCollision(f"identifier {CLASS_NAME} already used")
    if method != METHOD_NAME and METHOD_NAME in idents:
        raise RenameCollision(f"identifier {METHOD_NAME} already used")
    edits = []
    for i, x in enumerate(toks):
        if x.kind != "ident":
            continue
        if x.text == cls and cls != CLASS_NAME:
            edits.append((x.start, x.end, CLASS_NAME))
        elif x.text == method and method != METHOD_NAME:
            prev = toks[i - 1].text if i else ""
            nxt = toks[i + 1].text if i + 1 < len(toks) else ""
            qualifier = toks[i - 2].text if i >= 2 else ""
            call = nxt == "(" and (prev != "." or qualifier in ("this", cls))
            if call or prev == "::":
                edits.append((x.start, x.end, METHOD_NAME))
    src = t.source
    for start, end, new in sorted(edits, reverse=True):
        src = src[:start] + new + src[end:]
    return replace(t, source=src, method_name=METHOD_NAME)


# batch runs -------------------------------------------------------------------

class Mode(str, enum.Enum):
    CLASSIFY = "classify"
    HARNESS = "harness"
    AGENT = "agent"


@dataclass(frozen=True)
class BatchConfig:
    mode: Mode = Mode.HARNESS
    backend: str = "builtin"  # builtin | openjml
    verifier: VerifierConfig = VerifierConfig()
    mutation: MutationConfig = MutationConfig()
    thresholds: tuple = DEFAULT_THRESHOLDS
    agent: AgentConfig = AgentConfig()
    workers: int = 1
    normalize: bool = True  # agent mode only: hide names that hint at behavior

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        object.__setattr__(self, "thresholds", tuple(self.thresholds))
        if self.backend not in ("builtin", "openjml"):
            raise ValueError(f"unknown backend {self.backend!r}")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")

    def fingerprint(self) -> str:
        blob = json.dumps(
            {
                "mode": self.mode.value,
                "backend": self.backend,
                "verifier": self.verifier.to_json() if self.backend == "openjml" else None,
                "mutation": self.mutation.to_json(),
                "thresholds": list(self.thresholds),
                "agent": self.agent.to_json() if self.mode is Mode.AGENT else None,
                "normalize": self.normalize if self.mode is Mode.AGENT else None,
            },
            sort_keys=True,
        )
        return hashlib.sha256(blob.encode()).hexdigest()[:12]


@dataclass
class TaskRow:
    id: str
    category: str
    status: str
    score: Optional[float] = None
    post_corr: Optional[float] = None
    post_comp: Optional[float] = None
    pre_corr: Optional[float] = None
    pre_comp: Optional[float] = None
    mvr: Optional[bool] = None  # None when the harness did not run
    outcome: str = ""
    error: str = ""
    wall_ms: float = 0.0

    @property
    def verified(self) -> bool:
        return self.status == Status.VERIFIED.value

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "category": self.category,
            "status": self.status,
            "score": self.score,
            "postCorr": self.post_corr,
            "postComp": self.post_comp,
            "preCorr": self.pre_corr,
            "preComp": self.pre_comp,
            "mvr": self.mvr,
            "outcome": self.outcome,
            "error": self.error,
            "wallMs": round(self.wall_ms, 3),
        }


@dataclass(frozen=True)
class Aggregate:
    n: int
    vr: float
    mvr: Optional[float]  # None in classify mode
    mvr_given_verified: Optional[float]

    def to_dict(self) -> dict:
        return {"n": self.n, "VR": self.vr, "MVR": self.mvr, "MVRgivenVerified": self.mvr_given_verified}


def aggregate(rows, with_mvr: bool = True) -> Aggregate:
    """VR over all rows, MVR over all rows, and MVR among the verified rows."""
    rows = list(rows)
    if not rows:
        raise ValueError("no rows")
    n = len(rows)
    verified = sum(r.verified for r in rows)
    if not with_mvr:
        return Aggregate(n, verified / n, None, None)
    mvr = sum(bool(r.mvr) and r.verified for r in rows)
    return Aggregate(n, verified / n, mvr / n, mvr / verified if verified else None)


@dataclass
class BatchReport:
    mode: Mode
    rows: list
    fingerprint: str
    overall: Aggregate = None
    per_category: dict = field(default_factory=dict)

    def __post_init__(self):
        with_mvr = self.mode is not Mode.CLASSIFY
        self.overall = aggregate(self.rows, with_mvr)
        cats = [c for c in CATEGORIES if any(r.category == c for r in self.rows)]
        self.per_category = {c: aggregate([r for r in self.rows if r.category == c], with_mvr) for c in cats}

    def to_dict(self) -> dict:
        return {
            "schemaVersion": 1,
            "mode": self.mode.value,
            "configFingerprint": self.fingerprint,
            "rows": [r.to_dict() for r in self.rows],
            "overall": self.overall.to_dict(),
            "perCategory": {c: a.to_dict() for c, a in self.per_category.items()},
        }


def _verifier_for(cfg: BatchConfig, suite):
    if cfg.backend == "openjml":
        return OpenJMLVerifier(cfg.verifier)
    return BuiltinVerifier(suite)


def _harness_backend(cfg: BatchConfig, verifier):
    return OpenJMLBackend(verifier) if cfg.backend == "openjml" else BuiltinBackend()


def _run_task(t: Task, cfg: BatchConfig, provider_factory) -> TaskRow:
    start = time.perf_counter()
    row = TaskRow(t.id, t.category, "Error")
    try:
        suite = load_suite(t.suite_path) if t.suite_path else None
        if cfg.mode is not Mode.CLASSIFY and suite is None:
            raise ManifestError(f"task {t.id} has no suite")
        verifier = _verifier_for(cfg, suite)
        if cfg.mode is Mode.AGENT:
            task = replace(t, source=strip_annotations(t.source))
            if cfg.normalize:
                task = normalize_task(task)
            provider = provider_factory(task)
            traj = run_veriact(task, suite, cfg.agent, provider, verifier, _harness_backend(cfg, verifier))
            row.outcome = traj.outcome.value
            row.status = Status.VERIFIED.value if traj.final_source is not None else Status.FAILED.value
            row.score = 1.0 if traj.final_source is not None else 0.0
            rep = traj.final_report
            if rep is not None:
                row.post_corr, row.post_comp, row.pre_corr, row.pre_comp = (
                    rep.post_corr, rep.post_comp, rep.pre_corr, rep.pre_comp,
                )
            row.mvr = traj.outcome is Outcome.COMPLETED
            row.error = traj.error
        else:
            result = verifier.verify(t.source, t.method_name)
            row.status = result.status.value
            row.score = graduated_score(result)[0]
            if cfg.mode is Mode.HARNESS and result.verified:
                contract, _ = extract_contract(t.source, t.method_name)
                rep = spec_harness_report(contract, suite, cfg.mutation, _harness_backend(cfg, verifier), cfg.thresholds)
                row.post_corr, row.post_comp, row.pre_corr, row.pre_comp = (
                    rep.post_corr, rep.post_comp, rep.pre_corr, rep.pre_comp,
                )
                row.mvr = rep.meaningfully_verified
    except BackendUnavailable:
        raise
    except Exception as exc:  # noqa: BLE001 - a failing task must not abort the batch
        log.warning("task %s failed: %s", t.id, exc)
        row.status = "Error"
        row.error = f"{type(exc).__name__}: {exc}"
    row.wall_ms = (time.perf_counter() - start) * 1000
    return row


def run_batch(tasks, cfg: BatchConfig = BatchConfig(), provider_factory: Callable | None = None) -> BatchReport:
    """Evaluate every task and aggregate; per-task failures become rows.

    ``provider_factory(task)`` supplies a fresh chat provider per task in
    agent mode.  A missing external verifier aborts before any task runs.
    """
    tasks = list(tasks)
    if not tasks:
        raise ValueError("no tasks")
    if cfg.backend == "openjml":
        OpenJMLVerifier(cfg.verifier).require()
    if cfg.mode is Mode.AGENT and provider_factory is None:
        raise ValueError("agent mode needs a provider factory")
    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            rows = list(pool.map(lambda t: _run_task(t, cfg, provider_factory), tasks))
    else:
        rows = [_run_task(t, cfg, provider_factory) for t in tasks]
    return BatchReport(cfg.mode, rows, cfg.fingerprint())


# emission ---------------------------------------------------------------------

CSV_COLUMNS = ("id", "category", "status", "score", "postCorr", "postComp", "preCorr", "preComp", "mvr", "error")


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.4f}"
    return str(v)


def _pct(x) -> str:
    return "" if x is None else f"{100 * x:.1f}"


def report_csv(r: BatchReport) -> str:
    """Task rows, a blank line, then ``metric,value`` aggregate rows (no timings)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for row in r.rows:
        d = row.to_dict()
        w.writerow([_cell(d[c]) for c in CSV_COLUMNS])
    w.writerow([])
    w.writerow(["metric", "value"])
    w.writerow(["n", r.overall.n])
    w.writerow(["VR", _pct(r.overall.vr)])
    w.writerow(["MVR", _pct(r.overall.mvr)])
    w.writerow(["MVR|verified", _pct(r.overall.mvr_given_verified)])
    for c, a in r.per_category.items():
        w.writerow([f"n[{c}]", a.n])
        w.writerow([f"VR[{c}]", _pct(a.vr)])
        w.writerow([f"MVR[{c}]", _pct(a.mvr)])
        w.writerow([f"MVR|verified[{c}]", _pct(a.mvr_given_verified)])
    w.writerow(["config", r.fingerprint])
    return buf.getvalue()


def report_json(r: BatchReport) -> str:
    return json.dumps(r.to_dict(), indent=2) + "\n"


def emit_report(r: BatchReport, out_dir, formats=("json", "csv"), stem: str = "batch_report") -> list:
    out_dir = Path(out_dir)
    written = []
    for fmt in formats:
        if fmt not in ("json", "csv"):
            raise ValueError(f"unknown report format {fmt!r}")
        path = out_dir / f"{stem}.{fmt}"
        text = report_json(r) if fmt == "json" else report_csv(r)
        try:
            out_dir.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding="utf-8")
        except OSError as exc:
            raise OSError(f"cannot write {path}: {exc}") from exc
        written.append(path)
    return written

