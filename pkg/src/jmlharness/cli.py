"""Command-line entry point.

Exit codes: 0 success, 1 the analysis found failures (for example a contract
that is not meaningfully verified), 2 usage or configuration error, 3 the
requested verifier backend is unavailable.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .agent.loop import TRAJECTORY_SCHEMA, run_veriact
from .agent.providers import HTTPChatProvider, ScriptedProvider
from .bench import BatchConfig, Mode, Task, emit_report, load_manifest, normalize_task, report_csv, run_batch
from .config import ConfigError, GlobalConfig, load_config
from .errors import BackendUnavailable
from .harness import REPORT_VERSION, BuiltinBackend, OpenJMLBackend, meaningfully_verified, spec_harness_report
from .javalex import LexError, find_methods
from .jml.annotations import NoContractFound, extract_contract
from .jml.evaluator import Env, evaluate
from .jml.lexer import ParseError
from .jml.parser import parse_expression
from .jml.printer import dump_tree, print_expression
from .testkit.mutation import UnmutableValue, mutate_output
from .testkit.suite import SCHEMA_VERSION, load_suite
from .values import Value, value_from_json, value_to_json
from .verify.builtin import BuiltinVerifier
from .verify.classify import default_table
from .verify.openjml import OpenJMLVerifier, result_from_log
from .verify.scoring import graduated_score

log = logging.getLogger("jmlharness")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BACKEND = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _read(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _emit(text: str, output=None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def parse_loose_value(obj) -> Value:
    """Typed JSON (``{"t": "char", "v": 98}``) or a bare JSON scalar/array."""
    if isinstance(obj, dict):
        return value_from_json(obj)
    if obj is None:
        return Value.null()
    if isinstance(obj, bool):
        return Value.bool(obj)
    if isinstance(obj, int):
        return Value.int32(obj) if -(2**31) <= obj < 2**31 else Value.int64(obj)
    if isinstance(obj, float):
        return Value.float64(obj)
    if isinstance(obj, str):
        return Value.string(obj)
    if isinstance(obj, list):
        items = [parse_loose_value(x) for x in obj]
        if not items:
            return Value.array("int32", [])
        return Value.array(items[0].tag, items)
    raise UsageError(f"cannot read a value from {obj!r}")


def _json_arg(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{what} is not valid JSON: {exc}") from exc


def _target_method(source: str, method: str | None) -> str:
    if method:
        return method
    names = []
    for m in find_methods(source):
        try:
            extract_contract(source, m.name)
            names.append(m.name)
        except NoContractFound:
            continue
    if len(names) != 1:
        raise UsageError("cannot tell which method to use; pass --method")
    return names[0]


def _verifier(cfg: GlobalConfig, backend: str, suite=None):
    if backend == "openjml":
        v = OpenJMLVerifier(cfg.verifier)
        v.require()
        return v
    return BuiltinVerifier(suite)


# subcommands ------------------------------------------------------------------

def cmd_parse(args, cfg) -> int:
    source = _read(args.file)
    try:
        if args.file.endswith(".java") or args.method:
            method = _target_method(source, args.method)
            contract, _ = extract_contract(source, method)
            clauses = [("requires", e) for e in contract.requires] + [("ensures", e) for e in contract.ensures]
        else:
            clauses = [("expr", parse_expression(source))]
    except (ParseError, LexError, NoContractFound, LookupError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    for kind, e in clauses:
        print(f"{kind} {print_expression(e)}")
        print(dump_tree(e, indent=1))
    return EXIT_OK


def cmd_eval(args, cfg) -> int:
    try:
        expr = parse_expression(args.expr)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    env_obj = _json_arg(args.env, "--env") if args.env else {}
    if not isinstance(env_obj, dict):
        raise UsageError("--env must be a JSON object of name -> value")
    bindings = {k: parse_loose_value(v) for k, v in env_obj.items()}
    result = parse_loose_value(_json_arg(args.result, "--result")) if args.result is not None else None
    verdict = evaluate(expr, Env(bindings, result, bindings))
    print(str(verdict) + (f": {verdict.detail}" if verdict.is_error and verdict.detail else ""))
    return EXIT_OK if verdict.holds else EXIT_FAIL


def cmd_mutate(args, cfg) -> int:
    value = parse_loose_value(_json_arg(args.value, "value"))
    mcfg = cfg.mutation if args.k is None else replace(cfg.mutation, k=args.k)
    try:
        mutants = mutate_output(value, mcfg)
    except UnmutableValue as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    for m in mutants:
        print(json.dumps(value_to_json(m)))
    return EXIT_OK


def cmd_harness(args, cfg) -> int:
    source = _read(args.task)
    suite = load_suite(args.suite)
    method = args.method or suite.signature.name
    try:
        contract, _ = extract_contract(source, method)
    except (ParseError, LexError, NoContractFound, LookupError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if args.max_pairs:
        suite = suite.truncated(args.max_pairs)
    backend_name = args.backend or cfg.backend
    if backend_name == "openjml":
        backend = OpenJMLBackend(OpenJMLVerifier(cfg.verifier))
        backend.verifier.require()
    else:
        backend = BuiltinBackend()
    report = spec_harness_report(contract, suite, cfg.mutation, backend, cfg.thresholds, cfg.workers)
    _emit(json.dumps(report.to_dict(timing=args.timings), indent=2) + "\n", args.output)
    s = report.scores()
    log.info("postCorr=%.4f postComp=%.4f preCorr=%.4f preComp=%s meaningfully verified: %s",
             s["postCorr"], s["postComp"], s["preCorr"],
             "n/a" if s["preComp"] is None else f"{s['preComp']:.4f}", report.meaningfully_verified)
    return EXIT_OK if meaningfully_verified(report, cfg.thresholds) else EXIT_FAIL


def cmd_verify(args, cfg) -> int:
    source = _read(args.file)
    suite = load_suite(args.suite) if args.suite else None
    verifier = _verifier(cfg, args.backend or cfg.backend, suite)
    method = args.method or (suite.signature.name if suite else None)
    result = verifier.verify(source, method)
    score, feedback = graduated_score(result)
    _emit(json.dumps({**result.to_dict(timing=False), "score": score}, indent=2) + "\n", args.output)
    log.info("%s", feedback)
    return EXIT_OK if result.verified else EXIT_FAIL


def cmd_score(args, cfg) -> int:
    raw = _read(args.logfile)
    result = result_from_log(raw, args.exit_code, 0.0)
    score, feedback = graduated_score(result)
    print(score)
    print(feedback)
    return EXIT_OK if result.verified else EXIT_FAIL


def cmd_normalize(args, cfg) -> int:
    source = _read(args.file)
    method = args.method or _target_method(source, None)
    try:
        task = normalize_task(Task("cli", "branch", source, method))
    except (ValueError, LookupError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _emit(task.source, args.output)
    return EXIT_OK


def _provider(cfg: GlobalConfig, name: str, script):
    if name == "scripted":
        path = script or cfg.provider.script
        if not path:
            raise UsageError("the scripted provider needs --script")
        return ScriptedProvider.from_file(path)
    p = cfg.provider
    if not p.endpoint or not p.model:
        raise UsageError("the http provider needs provider.endpoint and provider.model in the config")
    return HTTPChatProvider(p.endpoint, p.model, p.api_key_env, p.timeout, cfg.seed)


def cmd_agent(args, cfg) -> int:
    source = _read(args.task)
    suite = load_suite(args.suite)
    method = args.method or suite.signature.name
    provider = _provider(cfg, args.provider or cfg.provider.kind, args.script)
    backend_name = args.backend or cfg.backend
    verifier = _verifier(cfg, backend_name, suite)
    harness_backend = OpenJMLBackend(verifier) if backend_name == "openjml" else BuiltinBackend()
    task = Task(Path(args.task).stem, "branch", source, method)
    traj = run_veriact(task, suite, cfg.agent_config(), provider, verifier, harness_backend)
    _emit(traj.to_json(), args.output)
    log.info("outcome %s after %d tool calls", traj.outcome.value, len(traj.steps))
    return EXIT_OK if traj.outcome.value == "Completed" else EXIT_FAIL


def cmd_batch(args, cfg) -> int:
    try:
        tasks = load_manifest(args.manifest)
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot load manifest: {exc}") from exc
    bcfg = BatchConfig(
        mode=Mode(args.mode),
        backend=args.backend or cfg.backend,
        verifier=cfg.verifier,
        mutation=cfg.mutation,
        thresholds=cfg.thresholds,
        agent=cfg.agent_config(),
        workers=args.workers or cfg.workers,
    )
    factory = None
    if bcfg.mode is Mode.AGENT:
        name = args.provider or cfg.provider.kind

        def factory(task):
            return _provider(cfg, name, task.script_path or args.script)

    report = run_batch(tasks, bcfg, factory)
    if args.out:
        formats = [f.strip() for f in args.formats.split(",") if f.strip()]
        for path in emit_report(report, args.out, formats):
            log.info("wrote %s", path)
    else:
        sys.stdout.write(report_csv(report))
    return EXIT_OK


def version_text() -> str:
    return (
        f"jmlharness {__version__} (suite schema {SCHEMA_VERSION}, report schema {REPORT_VERSION}, "
        f"trajectory schema {TRAJECTORY_SCHEMA}, pattern table v{default_table().version})"
    )


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="jmlharness", description="Score and synthesize JML contracts.")
    p.add_argument("--version", action="version", version=version_text())
    p.add_argument("--config", help="JSON config file with all defaults")
    p.add_argument("--quiet", action="store_true", help="silence diagnostics on stderr")
    p.add_argument("-v", "--verbose", action="store_true", help="more diagnostics")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("parse", help="extract and print a contract (or a bare expression file)")
    s.add_argument("file")
    s.add_argument("--method")
    s.set_defaults(fn=cmd_parse)

    s = sub.add_parser("eval", help="evaluate a JML expression in a concrete state")
    s.add_argument("expr")
    s.add_argument("--env", help='JSON object, e.g. \'{"c": {"t": "char", "v": 98}, "n": 3}\'')
    s.add_argument("--result", help="JSON value bound to \\result")
    s.set_defaults(fn=cmd_eval)

    s = sub.add_parser("mutate", help="print the mutants of a value")
    s.add_argument("value", help='JSON value, e.g. \'{"t": "char", "v": 98}\' or 5')
    s.add_argument("--k", type=int)
    s.set_defaults(fn=cmd_mutate)

    s = sub.add_parser("harness", help="compute the four harness metrics for an annotated method")
    s.add_argument("task")
    s.add_argument("--suite", required=True)
    s.add_argument("--method")
    s.add_argument("--backend", choices=("builtin", "openjml"))
    s.add_argument("--max-pairs", type=int)
    s.add_argument("--timings", action="store_true", help="include per-check wall clock")
    s.add_argument("--output", "-o")
    s.set_defaults(fn=cmd_harness)

    s = sub.add_parser("verify", help="verify an annotated class and score it")
    s.add_argument("file")
    s.add_argument("--suite", help="test suite for the builtin checker")
    s.add_argument("--method")
    s.add_argument("--backend", choices=("builtin", "openjml"))
    s.add_argument("--output", "-o")
    s.set_defaults(fn=cmd_verify)

    s = sub.add_parser("score", help="graduated score of a saved verifier log")
    s.add_argument("logfile")
    s.add_argument("--exit-code", type=int, default=0, help="the verifier's exit status")
    s.set_defaults(fn=cmd_score)

    s = sub.add_parser("normalize", help="rename class to Solution and method to solve")
    s.add_argument("file")
    s.add_argument("--method")
    s.add_argument("--output", "-o")
    s.set_defaults(fn=cmd_normalize)

    s = sub.add_parser("agent", help="run the synthesis loop on one task")
    s.add_argument("task")
    s.add_argument("--suite", required=True)
    s.add_argument("--provider", choices=("scripted", "http"))
    s.add_argument("--script", help="response script for the scripted provider")
    s.add_argument("--method")
    s.add_argument("--backend", choices=("builtin", "openjml"))
    s.add_argument("--output", "-o")
    s.set_defaults(fn=cmd_agent)

    s = sub.add_parser("batch", help="evaluate every task in a manifest")
    s.add_argument("manifest")
    s.add_argument("--mode", choices=[m.value for m in Mode], default="harness")
    s.add_argument("--backend", choices=("builtin", "openjml"))
    s.add_argument("--provider", choices=("scripted", "http"))
    s.add_argument("--script")
    s.add_argument("--workers", type=int)
    s.add_argument("--out", help="directory for report files (default: CSV to stdout)")
    s.add_argument("--formats", default="json,csv")
    s.set_defaults(fn=cmd_batch)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    level = logging.ERROR if args.quiet else (logging.DEBUG if args.verbose else getattr(logging, cfg.verbosity.upper()))
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr, force=True)
    try:
        return args.fn(args, cfg)
    except BackendUnavailable as exc:
        print(f"backend unavailable: {exc}", file=sys.stderr)
        return EXIT_BACKEND
    except (UsageError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, LookupError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
