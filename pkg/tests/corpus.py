"""Shared golden corpus: named inputs and their frozen expected outputs.

The canonicalization goldens are the three bracketed displays (two with
identical output shape, one with the meet/join nesting swapped) and the
two scope-demo readings; expected structures were derived by hand from
the rank-driven distribution discipline and frozen here.
"""

from ctt.domains import Individual, ModelConfig, make_join, make_meet, make_neg
from ctt.syntax import Base, parse_cts, parse_type

E = Base("e")
S = Base("s")
T = Base("t")

EMPTY_MODEL = ModelConfig()

# --- the three bracketed canonicalization examples -------------------------

BRACKETED_1_TEXT = (
    "((and[1](p:(s -> ~t)@0, q:(s -> ~t)@0) neg[1](a:s@0)) or[2](r:t@0, w:t@0))"
)
BRACKETED_2_TEXT = (
    "(and[1](p:~t@0, q:~t@0) (neg[1](f:(s -> t)@0) or[2](r:s@0, w:s@0)))"
)
BRACKETED_3_TEXT = (
    "(and[2](p:~t@0, q:~t@0) (neg[1](f:(s -> t)@0) or[2](r:s@0, w:s@0)))"
)

BRACKETED_1_GOLDEN = (
    "or[2](and[1](neg[1](((p a) r)),neg[1](((q a) r))),"
    "and[1](neg[1](((p a) w)),neg[1](((q a) w))))"
)
BRACKETED_2_GOLDEN = (
    "or[2](and[1](neg[1]((p (f r))),neg[1]((q (f r)))),"
    "and[1](neg[1]((p (f w))),neg[1]((q (f w)))))"
)
BRACKETED_3_GOLDEN = (
    "and[2](or[2](neg[1]((p (f r))),neg[1]((p (f w)))),"
    "or[2](neg[1]((q (f r))),neg[1]((q (f w)))))"
)


def bracketed_examples():
    return [
        (parse_cts(BRACKETED_1_TEXT), BRACKETED_1_GOLDEN),
        (parse_cts(BRACKETED_2_TEXT), BRACKETED_2_GOLDEN),
        (parse_cts(BRACKETED_3_TEXT), BRACKETED_3_GOLDEN),
    ]


# --- scope demo -------------------------------------------------------------

SCOPE_SIG = {
    "L": (parse_type("(e -> ~e)"), 0),
    "A": (E, 0), "B": (E, 0), "C": (E, 0), "D": (E, 0),
}
SCOPE_INPUT_1 = "((L or[1](C,D)) and[1](A,B))"
SCOPE_INPUT_2 = "((L or[1](C,D)) and[2](A,B))"
SCOPE_GOLDEN_1 = "or[1](and[1](((L C) A),((L C) B)),and[1](((L D) A),((L D) B)))"
SCOPE_GOLDEN_2 = "and[2](or[1](((L C) A),((L D) A)),or[1](((L C) B),((L D) B)))"


def scope_assignment():
    return {name: Individual(ty, name) for name, (ty, _) in SCOPE_SIG.items()}


# --- the type-reduction worked example --------------------------------------

def worked_iso_expected(model: ModelConfig):
    """{{a},{b,c}} over a three-element carrier as its frozen full DNF."""
    a, b, c = (Individual(E, n) for n in "abc")
    return make_join(1, E, [
        make_meet(1, E, [a, make_neg(1, b), make_neg(1, c)]),
        make_meet(1, E, [make_neg(1, a), b, c]),
    ])


WORKED_ISO_GOLDEN = "or[1](and[1](a,neg[1](b),neg[1](c)),and[1](b,c,neg[1](a)))"

# --- assorted well-formed inputs used across round-trip/agreement tests -----

SLM_TEXTS = [
    r"\x:e. x",
    "#x:~e. (x y:e)",
    r"((\x:e. x) y:e)",
    r"\x:(e -> t). \z:e. (x z)",
    "#x:~(e -> t). (x r:(e -> t))",
    r"(q:~e #x:~e. (x w:e))",
    r"\x:e. (f:(e -> (e -> bot)) x)",
    "#x:~bot. (x (g:(e -> bot) y:e))",
]

CTS_TEXTS = [
    "x:bot@0",
    "and[1](p:bot@0,q:bot@0)",
    "neg[2](or[1](p:bot@0,neg[1](q:bot@0)))",
    "(f:(e -> bot)@0 a:e@0)",
    "((g:(e -> (e -> bot))@0 a:e@0) b:e@0)",
    "and[1]((f:(e -> bot)@0 a:e@0),neg[1](x:bot@0))",
    "All[1](x:e@0)",
    "Ex[2](x:bot@1)",
    "(f:(e -> bot)@0 or[1](a:e@0,b:e@0))",
    BRACKETED_1_TEXT,
    BRACKETED_2_TEXT,
    BRACKETED_3_TEXT,
]
