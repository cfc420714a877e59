#!/usr/bin/env python3
"""Run every applicable law on every preset instance and summarize.

Writes one report directory per instance under --out (default ./reports).
Exact instances run at full trial counts; the integrator-backed instance
gets a lighter count so the whole sweep stays around a minute.  The broken
presets are expected to fail exactly their advertised law; anything else
counts as a surprise and flips the exit status.
"""

import argparse
import sys
from pathlib import Path

from fibretransport.cli import run_law
from fibretransport.instances import instance_names, make_instance

HEAVY = {"sphere-levi-civita"}


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", type=Path, default=Path("reports"))
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--heavy-trials", type=int, default=40,
                    help="trial count for integrator-backed instances")
    args = ap.parse_args()

    surprises = []
    for name in instance_names():
        spec = make_instance(name)
        trials = args.heavy_trials if name in HEAVY else args.trials
        outdir = args.out / name.replace(":", "_")
        outdir.mkdir(parents=True, exist_ok=True)
        expected_fail = spec.transport.violates
        print(f"\n=== {name} (trials {trials}) ===")
        for law in spec.applicable:
            report = run_law(spec, law, trials=trials, seed=args.seed)
            fname = "law_" + law.replace("/", "+") + ".json"
            (outdir / fname).write_text(report.to_json())
            status = "PASS" if report.passed else "FAIL"
            note = ""
            if not report.passed and law == expected_fail:
                note = "  (expected for this instance)"
            elif not report.passed:
                surprises.append((name, law, "failed"))
            elif law == expected_fail:
                note = "  (should have failed!)"
                surprises.append((name, law, "passed but should fail"))
            print(f"  {law:<14} {status}  max_dev={report.max_deviation:.3g}"
                  f"{note}")

    print()
    if surprises:
        print("surprises:")
        for name, law, what in surprises:
            print(f"  {name} law {law}: {what}")
        return 1
    print("all instances behaved as documented")
    return 0


if __name__ == "__main__":
    sys.exit(main())
