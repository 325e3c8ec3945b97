#!/usr/bin/env python3
"""Scaling run: full expansion plus one huge-exponent evaluation per size.

Dense random integer matrices with entries in [-5, 5], one seeded instance
per size.  Prints a markdown table; pass sizes as arguments to override the
default n in {50, 100, 200, 300}.
"""

import random
import sys
import time

from maxplus import expand
from maxplus.oracle import random_matrix


def run(sizes):
    print("| n   | arcs   | terms | expand (s) | evaluate t=10^18 (s) |")
    print("|-----|--------|-------|------------|----------------------|")
    for n in sizes:
        rng = random.Random(1000 + n)
        a = random_matrix(rng, n, 1.0, -5, 5)
        started = time.perf_counter()
        x = expand(a)
        expand_s = time.perf_counter() - started
        started = time.perf_counter()
        x.evaluate(10**18)
        evaluate_s = time.perf_counter() - started
        print(
            f"| {n:<3} | {a.finite_count:<6} | {len(x.terms):<5} "
            f"| {expand_s:>10.2f} | {evaluate_s:>20.3f} |"
        )


if __name__ == "__main__":
    sizes = [int(arg) for arg in sys.argv[1:]] or [50, 100, 200, 300]
    run(sizes)
