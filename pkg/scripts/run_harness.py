#!/usr/bin/env python3
"""Sweep the soundness harness over every rule and print a summary table.

Equality rules are checked as semantic equations under random rank-0
assignments; sequent rules as validity preservation between premises and
conclusion. Usage:

    python scripts/run_harness.py [--trials N] [--seed S]
"""

import argparse
import sys
import time

from ctt.gen import SLM_RULE_IDS
from ctt.semantics import (
    check_equation, cts_rule_harness, mu_exhaustive_cases, soundness_harness,
)
from ctt.sequents import INTRO_RULES, SUBST_RULES


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    failures = 0
    t0 = time.time()
    print(f"{'rule':14s} {'pass':>5s} {'fail':>5s} {'skip':>5s}")
    for rule in SLM_RULE_IDS:
        rep = soundness_harness(rule, trials=args.trials, seed=args.seed)
        skip = len(rep.records) - rep.passes - len(rep.failures)
        failures += len(rep.failures)
        print(f"{rule:14s} {rep.passes:5d} {len(rep.failures):5d} {skip:5d}")
    exhaustive = [check_equation(l, r, m, rho)
                  for _, l, r, m, rho in mu_exhaustive_cases()]
    bad = exhaustive.count(False)
    failures += bad
    print(f"{'mu (contexts)':14s} {exhaustive.count(True):5d} {bad:5d} {0:5d}")
    for rule in INTRO_RULES + SUBST_RULES:
        rep = cts_rule_harness(rule, trials=max(10, args.trials // 5),
                               seed=args.seed)
        skip = len(rep.records) - rep.passes - len(rep.failures)
        failures += len(rep.failures)
        print(f"{rule:14s} {rep.passes:5d} {len(rep.failures):5d} {skip:5d}")
    print(f"total failures: {failures}  ({time.time() - t0:.1f}s)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
