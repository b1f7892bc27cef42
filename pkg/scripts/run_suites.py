"""Run the seeded verification suites and write one JSON report per suite to artifacts/."""
import argparse
import json
import time
from pathlib import Path

from dgha.verify import SUITES, run_suite

# instance counts used for the acceptance runs
COUNTS = {"oracle": 100, "ab": 200, "bass": 100, "depth": 200, "fj": 100, "cohgor": 30,
          "dualizing": 60, "lemmas": 100, "conjecture": 100}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--suite", choices=sorted(SUITES), action="append", help="repeatable; default all")
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--scale", type=float, default=1.0, help="multiply the default instance counts")
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "artifacts")
    args = ap.parse_args()

    args.out.mkdir(parents=True, exist_ok=True)
    for name in args.suite or sorted(SUITES):
        count = max(1, round(COUNTS[name] * args.scale))
        t = time.perf_counter()
        res = run_suite(name, args.seed, count)
        dt = time.perf_counter() - t
        (args.out / f"{name}_seed{args.seed}.json").write_text(json.dumps(res.to_json(), indent=1, sort_keys=True))
        print(f"{name:11s} {res.verdict:12s} {res.counts()}  {dt:6.1f}s")


if __name__ == "__main__":
    main()
