#!/usr/bin/env python3
"""Sweep the preserver check battery over a list of shapes and write one
summary JSON per shape.

Usage:
    python scripts/run_suite.py --out results/ [--seed 12345] [--trials 20]
    python scripts/run_suite.py --shapes 2,2,2 3,3,2 3,4,6
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from knrange.checks import preserver_suite, suite_passed, suite_to_payload
from knrange.matcore import BipartiteShape

DEFAULT_SHAPES = [
    (2, 2, 1), (2, 2, 2), (2, 2, 3),
    (2, 3, 3), (3, 3, 2), (3, 3, 4),
    (2, 4, 4), (3, 4, 6),
]


def parse_shape(text: str) -> tuple[int, int, int]:
    parts = tuple(int(p) for p in text.split(","))
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected m,n,k, got {text!r}")
    return parts


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--shapes", nargs="*", type=parse_shape, default=DEFAULT_SHAPES)
    parser.add_argument("--seed", type=int, default=12345)
    parser.add_argument("--trials", type=int, default=20)
    parser.add_argument("--angles", type=int, default=360)
    parser.add_argument("--out", default="suite_results")
    args = parser.parse_args()

    os.makedirs(args.out, exist_ok=True)
    all_pass = True
    for m, n, k in args.shapes:
        shape = BipartiteShape(m, n, k)
        t0 = time.perf_counter()
        items = preserver_suite(
            shape, seed=args.seed, trials=args.trials, num_angles=args.angles
        )
        elapsed = time.perf_counter() - t0
        ok = suite_passed(items)
        all_pass = all_pass and ok
        path = os.path.join(args.out, f"suite_{m}x{n}_k{k}.json")
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(suite_to_payload(items), fh, indent=2, sort_keys=True)
        n_pass = sum(item.passed for item in items)
        print(f"({m},{n},{k}): {n_pass}/{len(items)} items pass in {elapsed:.1f}s -> {path}")
    return 0 if all_pass else 1


if __name__ == "__main__":
    sys.exit(main())
