import pytest

from ctt import gen
from ctt.domains import (
    FALSE, FnTable, Individual, ModelConfig, RankOverflow, TRUE,
    apply_elem, ba_equal, bottom_at, enumerate_domain, fn_table, make_join,
    make_meet, make_neg, render_elem, top_at, CapExceeded,
)
from ctt.rewrite import step
from ctt.semantics import (
    ContextClass, NonGroundValue, UnassignedVariable, canonicalize_cts,
    check_equation, classify_context, cts_rule_harness, enumerate_assignments,
    eval_cts, eval_slm, mu_exhaustive_cases, sequent_valid, soundness_harness,
    standard_model_family, symbolic_assignment,
)
from ctt.syntax import (
    App, Arrow, BOT, Base, Hole, Lam, Mu, Var, parse_cts,
    parse_sequent_members, parse_slm,
)

import corpus

E = Base("e")


@pytest.fixture
def m3():
    return ModelConfig(base_sizes={"e": 3})


@pytest.fixture
def m22():
    return ModelConfig(base_sizes={"e": 2, "t": 2})


def test_eval_identity_lambda(m3):
    v = eval_slm(parse_slm(r"\x:e. x"), m3, {})
    atoms = enumerate_domain(m3, E, 0)
    assert isinstance(v, FnTable)
    assert all(v.lookup(a) == a for a in atoms)


def test_eval_eta_mu_identity(m3):
    a = Individual(E, "a")
    v = eval_slm(parse_slm("#x:~e. (x p:e)"), m3, {"p": a})
    assert v == a  # the principal image collapses to the atom itself


def test_eval_mu_constant_false_body_is_rank1_bottom(m3):
    # independent oracle: build the lambda table by brute force over every
    # rank-0 argument, read it as a set family, and check it is empty
    term = parse_slm("#x:~e. (n:(bot -> bot) (x p:e))")
    const0 = fn_table(BOT, BOT, {FALSE: FALSE, TRUE: FALSE})
    rho = {"n": const0, "p": Individual(E, "a")}
    family = set()
    for t in enumerate_domain(m3, Arrow(E, BOT), 0):
        body_val = apply_elem(const0, apply_elem(t, rho["p"]))
        if body_val == TRUE:
            family.add(t)
    assert family == set()  # constant-0 table, empty set-of-sets
    v = eval_slm(term, m3, rho)
    assert v == bottom_at(1, E)


def test_eval_lambda_shadow_body_overflows(m3):
    # a lambda whose body is a mu produces shadows on rank-0 inputs
    term = Lam("z", E, Mu("x", Arrow(E, BOT),
                          App(Var("n", Arrow(BOT, BOT)),
                              App(Var("x", Arrow(E, BOT)), Var("z", E)))))
    const0 = fn_table(BOT, BOT, {FALSE: FALSE, TRUE: FALSE})
    with pytest.raises(RankOverflow):
        eval_slm(term, m3, {"n": const0})


def test_eval_unassigned_variable(m3):
    with pytest.raises(UnassignedVariable):
        eval_slm(Var("mystery", E), m3, {})


def test_eval_mu_needs_ground_values(m3):
    term = parse_slm("#x:~e. (x p:e)")
    with pytest.raises(NonGroundValue):
        # p is symbolic: the table is not 0/1-valued
        eval_slm(term, m3, {"p": Individual(E, "zz")})


def test_mu_rank_cap():
    model = ModelConfig(base_sizes={"e": 2}, rank_cap=0)
    with pytest.raises(RankOverflow):
        eval_slm(parse_slm("#x:~e. (x p:e)"), model,
                 {"p": Individual(E, "a")})


def test_eval_cts_conjunction(m3):
    sub = parse_cts("and[1](x:bot@0,y:bot@0)")
    v = eval_cts(sub, m3, {"x": FALSE, "y": TRUE})
    assert v == make_meet(1, BOT, [FALSE, TRUE])


def test_eval_cts_big_meet_ranges_over_carrier(m3):
    v = eval_cts(parse_cts("All[1](x:e@0)"), m3, {})
    assert v == make_meet(1, E, enumerate_domain(m3, E, 0))
    v2 = eval_cts(parse_cts("Ex[2](x:bot@0)"), m3, {})
    assert v2 == make_join(2, BOT, [FALSE, TRUE])


def test_eval_cts_big_meet_rejects_positive_index_rank(m3):
    with pytest.raises(Exception) as exc:
        eval_cts(parse_cts("All[1](x:e@1)"), m3, {})
    assert "rank-0" in str(exc.value)


def test_eval_cts_rank_bound_on_assignment(m3):
    sub = parse_cts("x:bot@0")
    shadow = make_neg(1, FALSE)
    with pytest.raises(Exception):
        eval_cts(sub, m3, {"x": shadow})  # rank 1 value at a rank-0 variable


def test_scope_readings_evaluate_codenotationally():
    # the canonical outputs denote the same elements as the inputs
    model = ModelConfig()
    rho = corpus.scope_assignment()
    for text, golden in ((corpus.SCOPE_INPUT_1, corpus.SCOPE_GOLDEN_1),
                         (corpus.SCOPE_INPUT_2, corpus.SCOPE_GOLDEN_2)):
        sub = parse_cts(text, sig=dict(corpus.SCOPE_SIG))
        value = eval_cts(sub, model, rho)
        assert render_elem(value) == golden


def test_canonical_output_equals_molecular_input_on_corpus(m22):
    for sub, _ in corpus.bracketed_examples():
        molecular = eval_cts(sub, m22, symbolic_assignment([sub], m22))
        again = canonicalize_cts(sub, m22)
        assert ba_equal(molecular, again)


def test_classify_context_cases(m3):
    neg_t = fn_table(BOT, BOT, {FALSE: TRUE, TRUE: FALSE})
    const0 = fn_table(BOT, BOT, {FALSE: FALSE, TRUE: FALSE})
    const1 = fn_table(BOT, BOT, {FALSE: TRUE, TRUE: TRUE})
    assert classify_context(Hole(), m3, {}) is ContextClass.T1
    wrap = App(Var("n", Arrow(BOT, BOT)), Hole())
    assert classify_context(wrap, m3, {"n": neg_t}) is ContextClass.T2
    assert classify_context(wrap, m3, {"n": const0}) is ContextClass.T3
    assert classify_context(wrap, m3, {"n": const1}) is ContextClass.T4


def test_classify_context_exhausts_outcomes(m3):
    tables = enumerate_domain(m3, Arrow(BOT, BOT), 0)
    seen = set()
    wrap = App(Var("n", Arrow(BOT, BOT)), Hole())
    for t in tables:
        seen.add(classify_context(wrap, m3, {"n": t}))
    assert seen == set(ContextClass)


def test_classify_context_needs_exactly_one_hole(m3):
    with pytest.raises(Exception):
        classify_context(Var("x", BOT), m3, {})


def test_check_equation_beta(m22):
    lhs = parse_slm(r"((\x:e. (f:(e -> bot) x)) y:e)")
    rhs = parse_slm("(f:(e -> bot) y:e)")
    tables = enumerate_domain(m22, Arrow(E, BOT), 0)
    for t in tables:
        for a in enumerate_domain(m22, E, 0):
            assert check_equation(lhs, rhs, m22, {"f": t, "y": a})


def test_check_equation_distinct_atoms(m22):
    assert not check_equation(Var("x", E), Var("y", E), m22,
                              {"x": Individual(E, "a"), "y": Individual(E, "b")})


def test_mu_rule_t2_case_keeps_negation_on_both_sides():
    for cls, lhs, rhs, model, rho in mu_exhaustive_cases():
        if cls is not ContextClass.T2:
            continue
        lv, rv = eval_slm(lhs, model, rho), eval_slm(rhs, model, rho)
        assert ba_equal(lv, rv)
        # both sides are the rank-1 complement of the same atom
        rq = apply_elem(rho["r"], rho["q"])
        assert ba_equal(lv, make_neg(1, rq))


def test_mu_exhaustive_t3_t4_bottom_top():
    for cls, lhs, rhs, model, rho in mu_exhaustive_cases():
        lv, rv = eval_slm(lhs, model, rho), eval_slm(rhs, model, rho)
        assert ba_equal(lv, rv)
        tau = Base("t")
        if cls is ContextClass.T3:
            assert ba_equal(lv, bottom_at(1, tau))
            assert ba_equal(rv, bottom_at(1, tau))
        if cls is ContextClass.T4:
            assert ba_equal(lv, top_at(1, tau))
            assert ba_equal(rv, top_at(1, tau))


def test_beta_mu_constant_body_corner_documented(m22):
    """Under the free reading of truth values, the beta-mu equality fails
    when the bound continuation is unused: the left side is the rank-1
    bottom, the right side a bare truth value (see the decisions notes).
    The harness therefore samples continuation-positive bodies."""
    lhs = parse_slm("(q:~e #x:~e. w:bot)")
    rhs = parse_slm("w:bot")
    rho = {"q": enumerate_domain(m22, Arrow(E, BOT), 0)[0], "w": FALSE}
    assert not check_equation(lhs, rhs, m22, rho)
    assert ba_equal(eval_slm(lhs, m22, rho), bottom_at(1, BOT))


def test_sequent_valid_axiom_shape(m22):
    ante, succ = parse_sequent_members("A |- A")
    report = sequent_valid(ante, succ, [m22])
    assert report.valid
    assert len(report.verdicts) == 2  # A:bot@0 ranges over 0 and 1


def test_sequent_valid_excluded_middle(m22):
    ante, succ = parse_sequent_members("|- or[1](A, neg[1](A))")
    assert sequent_valid(ante, succ, standard_model_family()).valid


def test_sequent_not_valid_truth_value_is_free_generator(m22):
    ante, succ = parse_sequent_members("|- x:bot@0")
    report = sequent_valid(ante, succ, [m22])
    assert not report.valid
    ce = report.counterexample()
    assert ce is not None  # fails already at x = 0


def test_sequent_rank_jump_invalid(m22):
    # or[2] over a rank-1 complement is not valid: the rank-1 element is an
    # opaque generator at rank 2
    ante, succ = parse_sequent_members("|- or[2](A, neg[1](A))")
    assert not sequent_valid(ante, succ, [m22]).valid


def test_assignment_cap(m22):
    members, _ = parse_sequent_members(
        "x:bot@1, y:bot@1, z:bot@1, v:bot@1 |- x")
    with pytest.raises(CapExceeded):
        enumerate_assignments(members, m22, cap=1000)


def test_empty_sequent_invalid(m22):
    assert not sequent_valid([], [], [m22]).valid


@pytest.mark.parametrize("rule", [r for r in gen.SLM_RULE_IDS if r != "mu"])
def test_soundness_harness_rules(rule):
    report = soundness_harness(rule, trials=25, seed=11)
    assert not report.failures
    assert report.passes >= 20


def test_soundness_harness_mu():
    report = soundness_harness("mu", trials=25, seed=11)
    assert not report.failures


def test_soundness_harness_detects_corruption():
    report = soundness_harness("mu", trials=30, seed=11, mutate=True)
    assert report.failures  # the sanity control must trip


def test_harness_records_render():
    report = soundness_harness("beta", trials=3, seed=5)
    lines = [r.line() for r in report.records]
    assert all("rule=beta" in ln and "seed=5" in ln for ln in lines)


def test_eta_mu_semantic_identity_random(m22):
    rng = gen.make_rng(17)
    for _ in range(60):
        lhs, rhs, ctx = gen.slm_rule_instance("eta-mu", rng)
        rho = gen.random_ground_assignment(rng, m22, ctx)
        assert check_equation(lhs, rhs, m22, rho)


def test_eta_mu_guard_violation_has_counterexample(m22):
    # mu x. (x (f x-applied)) with x free in P: find a model refuting it
    x_ty = Arrow(BOT, BOT)
    p = App(Var("f", Arrow(BOT, BOT)), App(Var("x", x_ty), Var("w", BOT)))
    lhs = Mu("x", x_ty, App(Var("x", x_ty), p))
    found = False
    for f_tab in enumerate_domain(m22, Arrow(BOT, BOT), 0):
        for w in (FALSE, TRUE):
            rho = {"f": f_tab, "w": w, "x": None}
            del rho["x"]
            lv = eval_slm(lhs, m22, rho)
            for x_tab in enumerate_domain(m22, x_ty, 0):
                rv = eval_slm(p, m22, {**rho, "x": x_tab})
                if not ba_equal(lv, rv):
                    found = True
    assert found


def test_bridging_rewrite_steps_hold_semantically(m22):
    rng = gen.make_rng(23)
    for _ in range(40):
        rule = rng.choice(["beta", "eta", "beta-mu", "eta-mu", "mu"])
        lhs, rhs, ctx = gen.slm_rule_instance(rule, rng)
        hit = step(lhs)
        assert hit is not None
        stepped = hit[0]
        rho = gen.random_ground_assignment(rng, m22, ctx)
        try:
            assert check_equation(lhs, stepped, m22, rho)
        except RankOverflow:
            continue


def test_cts_rule_harness_smoke():
    report = cts_rule_harness("and-Rr", trials=8, seed=3)
    assert not [r for r in report.records if r.status == "fail"]
