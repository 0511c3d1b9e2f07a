"""Run the mini-benchmark in one mode and write JSON and CSV reports.

    python3 scripts/run_minibench.py --mode harness --out results/
"""

import argparse
import logging

from jmlharness.bench import BatchConfig, Mode, emit_report, load_manifest, run_batch


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--manifest", default="tests/fixtures/minibench/tasks.json")
    ap.add_argument("--mode", choices=[m.value for m in Mode if m is not Mode.AGENT], default="harness")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default="results")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")

    report = run_batch(load_manifest(args.manifest), BatchConfig(mode=Mode(args.mode), workers=args.workers))
    for row in report.rows:
        print(f"{row.id:<20} {row.status:<9} mvr={row.mvr}")
    o = report.overall
    mvr = "n/a" if o.mvr is None else f"{100 * o.mvr:.1f}%"
    print(f"\nn={o.n}  VR={100 * o.vr:.1f}%  MVR={mvr}  config={report.fingerprint}")
    for path in emit_report(report, args.out):
        print("wrote", path)


if __name__ == "__main__":
    main()
