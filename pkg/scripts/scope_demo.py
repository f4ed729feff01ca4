#!/usr/bin/env python3
"""Scope-ambiguity walkthrough: one sentence shape, two rank assignments,
two canonical forms, and the sequent derivations connecting them.

    python scripts/scope_demo.py
"""

from ctt.cli import demo_scope_outputs
from ctt.sequents import Sequent, check_derivation, prove, render_derivation_file
from ctt.syntax import parse_cts, parse_type, Base

SIG = {"L": (parse_type("(e -> ~e)"), 0), "A": (Base("e"), 0),
       "B": (Base("e"), 0), "C": (Base("e"), 0), "D": (Base("e"), 0)}


def main():
    print("'Adam and Bob love Carol or Diane' has one grammatical shape;")
    print("the two readings differ only in the rank of the conjunction.\n")
    for reading, (text, canon, gloss) in demo_scope_outputs().items():
        print(f"reading {reading}")
        print(f"  input:     {text}")
        print(f"  canonical: {canon}")
        print(f"  gloss:     {gloss}")
        lhs = parse_cts(text, sig=dict(SIG))
        rhs = parse_cts(canon, sig=dict(SIG))
        derivation = prove(Sequent.make([lhs], [rhs]), depth=30)
        assert derivation is not None and check_derivation(derivation) is None
        steps = sum(1 for _ in derivation.nodes()) - 1
        print(f"  derivation: {steps} substitution steps, re-checked")
        print("  " + render_derivation_file(derivation).replace("\n", "\n  "))


if __name__ == "__main__":
    main()
