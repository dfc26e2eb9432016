"""Run every verification check for both families up to a given order.

Writes one JSON report per (family, order) into --out-dir and prints a
summary line for each check.
"""
import argparse
import json
import time
from pathlib import Path

from pyramidfe.spaces import Family, SpaceSpec
from pyramidfe.verify import CHECKS, run_check


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-order", type=int, default=5)
    ap.add_argument("--out-dir", type=Path, default=Path("reports"))
    args = ap.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)
    failed = 0
    start = time.perf_counter()
    for fam in Family:
        for r in range(1, args.max_order + 1):
            spec = SpaceSpec(fam, r)
            reports = [run_check(spec, c) for c in CHECKS]
            doc = {"passed": all(x.passed for x in reports), "reports": [x.to_json() for x in reports]}
            (args.out_dir / f"{fam.value}{r}.json").write_text(json.dumps(doc, indent=1) + "\n")
            for rep in reports:
                failed += not rep.passed
                print(f"{'PASS' if rep.passed else 'FAIL'}  {fam.value}{r:<2d} {rep.check:<13s} {rep.seconds:7.2f}s")
    print(f"{failed} failing checks, {time.perf_counter() - start:.1f}s total")
    raise SystemExit(1 if failed else 0)


if __name__ == "__main__":
    main()
