import pytest
from hypothesis import given, settings, strategies as st

from ctt import gen
from ctt.syntax import (
    App, Arrow, BOT, Base, CConj, CVar, Lam, Mu, ParseError,
    RankViolation, SyntaxClass, TypeMismatch, UnboundVariable, Var, classify,
    cts_signature, free_vars, parse, parse_cts, parse_sequent_members,
    parse_slm, parse_type, rank_check, render, render_type, typecheck_slm,
)

import corpus


def test_parse_identity_lambda():
    t = parse_slm(r"\x:e. x")
    assert isinstance(t, Lam)
    assert render_type(t.ty) == "(e -> e)"


def test_parse_mu_with_free_variable():
    t = parse_slm("#x:~e. (x y:e)")
    assert isinstance(t, Mu)
    assert t.ty == Base("e")
    assert t.body.ty == BOT
    assert free_vars(t) == {"y": Base("e")}
    # an external context types bare free variables too
    t2 = parse_slm("#x:~e. (x y)", ctx={"y": Base("e")})
    assert t2 == t


def test_parse_cts_rank_side_condition():
    with pytest.raises(RankViolation):
        parse_cts("and[1](p:bot@0, neg[2](q:bot@0))")


def test_parse_mode_dispatch():
    assert parse("(e -> bot)", "type") == Arrow(Base("e"), BOT)
    assert isinstance(parse(r"\x:e. x", "slm"), Lam)
    assert isinstance(parse("x:bot@0", "cts"), CVar)
    with pytest.raises(Exception):
        parse("x", "nonsense")


def test_type_sugar_expands_before_comparison():
    assert parse_type("~e") == Arrow(Base("e"), BOT)
    assert parse_type("~(e -> t)") == Arrow(Arrow(Base("e"), Base("t")), BOT)


def test_default_type_prefix():
    t = parse_slm(r"e: ((\x:e. x) y)")
    assert free_vars(t) == {"y": Base("e")}
    # a bare annotated variable is not mistaken for the prefix form
    v = parse_slm("x:e")
    assert v == Var("x", Base("e"))


def test_parse_error_carries_position():
    with pytest.raises(ParseError) as exc:
        parse_slm(r"\x:e. (x ))")
    assert exc.value.line == 1
    assert exc.value.col >= 9


def test_typecheck_app_mismatch_path():
    t = App(Var("x", Base("e")), Var("x", Base("e")))
    with pytest.raises(TypeMismatch) as exc:
        typecheck_slm(t, {"x": Base("e")})
    assert "not an arrow" in str(exc.value)


def test_typecheck_unbound():
    with pytest.raises(UnboundVariable):
        typecheck_slm(Var("z", Base("e")), {})


def test_typecheck_mu_rule_shape():
    t = parse_slm("#x:~e. (x y:e)")
    assert typecheck_slm(t, {"y": Base("e")}) == Base("e")


def test_typecheck_agrees_with_stored_annotations_on_corpus():
    for text in corpus.SLM_TEXTS:
        t = parse_slm(text)
        assert typecheck_slm(t, free_vars(t)) == t.ty


def test_classify_examples():
    assert classify(parse_cts("((g:(e -> (e -> bot))@0 a:e@0) b:e@0)")) is SyntaxClass.ATOMIC
    assert classify(parse_cts("and[1]((f:(e -> bot)@0 a:e@0), r:bot@0)")) is SyntaxClass.CANONICAL
    assert classify(parse_cts("(f:(e -> bot)@0 and[1](a:e@0, b:e@0))")) is SyntaxClass.MOLECULAR


def test_classify_big_operator_index_rank():
    assert classify(parse_cts("All[1](x:e@0)")) is SyntaxClass.CANONICAL
    assert classify(parse_cts("All[1](x:e@1)")) is SyntaxClass.MOLECULAR


def test_free_vars_examples():
    t = parse_slm(r"\x:(e -> t). (x y:e)")
    assert free_vars(t) == {"y": Base("e")}  # the lambda binds x
    t2 = parse_slm("#x:~e. (x y:e)")
    assert free_vars(t2) == {"y": Base("e")}  # mu binds too
    v = Var("x", Base("e"))
    assert free_vars(v) == {"x": Base("e")}


def test_free_vars_conflicting_types():
    t = App(Var("f", Arrow(Base("e"), BOT)), Var("f", Base("e")))
    with pytest.raises(TypeMismatch):
        free_vars(t)


def test_cts_signature_excludes_bound_index():
    sub = parse_cts("and[1]((f:(e -> bot)@0 a:e@0), neg[1](x:bot@0))")
    assert cts_signature(sub) == {
        "f": (Arrow(Base("e"), BOT), 0), "a": (Base("e"), 0), "x": (BOT, 0)}
    big = parse_cts("All[1](x:e@0)")
    assert cts_signature(big) == {}


def test_rank_invariant_on_corpus():
    for text in corpus.CTS_TEXTS:
        sub = parse_cts(text)
        assert rank_check(sub) == sub.rank


def test_sequent_parsing_defaults():
    ante, succ = parse_sequent_members("A |- A")
    assert ante == [CVar("A", BOT, 0)] and succ == [CVar("A", BOT, 0)]
    ante, succ = parse_sequent_members("|- or[1](A, neg[1](A))")
    assert ante == [] and len(succ) == 1
    with pytest.raises(TypeMismatch):
        parse_sequent_members("x:e@0 |- x")


def test_render_sorted_children_flag():
    sub = parse_cts("and[1](q:bot@0,p:bot@0)")
    assert render(sub) == "and[1](q:bot@0,p:bot@0)"
    assert render(sub, sort_children=True) == "and[1](p:bot@0,q:bot@0)"


def test_comment_handling():
    sub = parse_cts("and[1](p:bot@0, # trailing comment\n q:bot@0)")
    assert isinstance(sub, CConj)
    # the mu sigil still works in term mode
    t = parse_slm("#x:~e. (x y:e) # comment")
    assert isinstance(t, Mu)


@settings(max_examples=500, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_render_parse_round_trip_slm(seed):
    rng = gen.make_rng(seed)
    tg = gen.TermGen(rng)
    ty = gen.random_type(rng, depth=2)
    term = tg.term(ty, depth=3)
    assert parse_slm(render(term)) == term


@settings(max_examples=500, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_render_parse_round_trip_cts(seed):
    rng = gen.make_rng(seed)
    sig = {}
    sub = gen.random_bot_subterm(rng, depth=3, sig=sig)
    assert parse_cts(render(sub)) == sub


def test_round_trip_on_corpus():
    for text in corpus.SLM_TEXTS:
        t = parse_slm(text)
        assert parse_slm(render(t)) == t
    for text in corpus.CTS_TEXTS:
        s = parse_cts(text)
        assert parse_cts(render(s)) == s
