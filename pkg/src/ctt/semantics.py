"""Interpretation of lambda-mu terms and ranked subterms in finite models.

Lambdas denote extensional rank-0 tables over the enumerated carrier of
their domain; a body value above rank 0 raises RankOverflow rather than
inventing a representation. Mu builds the table of the matching lambda
over the rank-0 ~s carrier and pushes it through the type-reduction
isomorphism, landing one rank up.

A sequent is read as free-Boolean-algebra consequence: the meet of the
antecedent lies below the join of the succedent at the maximal rank
present. Empty sides are top and bottom at that rank.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional

from . import gen as _gen
from .rewrite import structural_subst
from .domains import (
    CanonElem, CapExceeded, FALSE, Individual, ModelConfig, RankOverflow,
    TRUE, TruthVal, apply_elem, ba_equal, ba_leq, bottom_at, elem_rank,
    enumerate_domain, fn_table, iso_i, make_join, make_meet, make_neg,
    render_elem, resolve_constant, top_at,
)
from .syntax import (
    App, Arrow, BOT, Base, CApp, CBigConj, CBigDisj, CConj, CDisj, CNeg,
    CVar, CtsSubterm, CttError, Hole, Lam, Mu, SlmTerm, TypeExpr,
    TypeMismatch, Var, cts_signature, render, slm_children, typecheck_slm,
)

Assignment = dict[str, CanonElem]


class UnassignedVariable(CttError):
    pass


class NonGroundValue(CttError):
    """Mu needed concrete truth values but met a symbolic atom."""


def _lookup(name: str, ty: TypeExpr, model: ModelConfig, rho: Assignment,
            rank_bound: Optional[int] = None) -> CanonElem:
    if name in rho:
        value = rho[name]
    else:
        value = resolve_constant(model, name, ty)
        if value is None:
            raise UnassignedVariable(f"no value for {name} : {ty}")
    if value.ty != ty:
        raise TypeMismatch(f"{name} : {ty} assigned a value of type {value.ty}")
    if rank_bound is not None and elem_rank(value) > rank_bound:
        raise TypeMismatch(
            f"{name}@{rank_bound} assigned a rank-{elem_rank(value)} value")
    return value


def eval_slm(term: SlmTerm, model: ModelConfig, rho: Assignment) -> CanonElem:
    """Denotation of a typechecked lambda-mu term under rho."""
    match term:
        case Var(name, ty):
            return _lookup(name, ty, model, rho)
        case App(fun, arg):
            return apply_elem(eval_slm(fun, model, rho), eval_slm(arg, model, rho))
        case Lam(binder, binder_ty, body):
            table = {}
            for a in enumerate_domain(model, binder_ty, 0):
                v = eval_slm(body, model, {**rho, binder: a})
                if elem_rank(v) != 0:
                    raise RankOverflow(
                        f"lambda body over {binder}:{binder_ty} yields the rank-"
                        f"{elem_rank(v)} shadow {render_elem(v)}; tables are rank 0")
                table[a] = v
            return fn_table(binder_ty, body_ty(term), table)
        case Mu(binder, binder_ty, body):
            if model.rank_cap < 1:
                raise RankOverflow("mu needs rank cap >= 1")
            table = {}
            for a in enumerate_domain(model, binder_ty, 0):
                v = eval_slm(body, model, {**rho, binder: a})
                if elem_rank(v) != 0:
                    raise RankOverflow(
                        f"mu body yields the rank-{elem_rank(v)} shadow "
                        f"{render_elem(v)}; this exceeds the table form")
                if not isinstance(v, TruthVal):
                    raise NonGroundValue(
                        f"mu body value {render_elem(v)} is symbolic, not 0/1")
                table[a] = v
            return iso_i(fn_table(binder_ty, BOT, table), model)
        case Hole():
            raise CttError("cannot evaluate a context hole")
    raise CttError(f"cannot evaluate {term!r}")


def body_ty(lam: Lam) -> TypeExpr:
    return lam.ty.cod


def eval_cts(sub: CtsSubterm, model: ModelConfig, rho: Assignment) -> CanonElem:
    """Denotation of a rank-checked subterm: operators land on the same-rank
    lattice constructors; big operators expand over the rank-0 carrier."""
    match sub:
        case CVar(name, ty, rank):
            return _lookup(name, ty, model, rho, rank_bound=rank)
        case CApp(fun, arg):
            return apply_elem(eval_cts(fun, model, rho), eval_cts(arg, model, rho))
        case CNeg(k, child):
            return make_neg(k, eval_cts(child, model, rho))
        case CConj(k, left, right):
            l, r = eval_cts(left, model, rho), eval_cts(right, model, rho)
            return make_meet(k, l.ty, [l, r])
        case CDisj(k, left, right):
            l, r = eval_cts(left, model, rho), eval_cts(right, model, rho)
            return make_join(k, l.ty, [l, r])
        case CBigConj(k, _, ty, m) | CBigDisj(k, _, ty, m):
            if m != 0:
                raise CttError(
                    f"big operators evaluate only over rank-0 carriers, got @{m}")
            make = make_meet if isinstance(sub, CBigConj) else make_join
            return make(k, ty, enumerate_domain(model, ty, 0))
    raise CttError(f"cannot evaluate {sub!r}")


def symbolic_assignment(subs: Iterable[CtsSubterm], model: ModelConfig) -> Assignment:
    """Map every free rank-0 variable to a symbolic named atom (used for
    canonicalization, where no concrete carrier is wanted). Variables
    already naming a model constant keep that value; rank >= 1 variables
    have no symbolic representation and are rejected."""
    rho: Assignment = {}
    for sub in subs:
        for name, (ty, rank) in cts_signature(sub).items():
            if resolve_constant(model, name, ty) is not None:
                continue
            if rank != 0:
                raise CttError(
                    f"cannot canonicalize symbolically with {name}@{rank}; "
                    "only rank-0 free variables stay symbolic")
            rho[name] = Individual(ty, name)
    return rho


def canonicalize_cts(sub: CtsSubterm, model: ModelConfig,
                     rho: Optional[Assignment] = None) -> CanonElem:
    """Canonical form of a subterm: evaluate with symbolic atoms for its
    free variables."""
    if rho is None:
        rho = symbolic_assignment([sub], model)
    return eval_cts(sub, model, rho)


# ---------------------------------------------------------------------------
# truth contexts

class ContextClass(Enum):
    T1 = "T1"  # identity
    T2 = "T2"  # negation
    T3 = "T3"  # constant falsity
    T4 = "T4"  # constant truth


def count_holes(term: SlmTerm) -> int:
    if isinstance(term, Hole):
        return 1
    return sum(count_holes(c) for c in slm_children(term))


def fill_hole(context: SlmTerm, filler: SlmTerm) -> SlmTerm:
    """Plug the unique bot-typed hole."""
    match context:
        case Hole():
            return filler
        case App(fun, arg):
            return App(fill_hole(fun, filler), fill_hole(arg, filler))
        case Lam(b, bty, body):
            return Lam(b, bty, fill_hole(body, filler))
        case Mu(b, bty, body):
            return Mu(b, bty, fill_hole(body, filler))
        case _:
            return context


def classify_context(context: SlmTerm, model: ModelConfig,
                     rho: Assignment) -> ContextClass:
    """Which of the four truth functions a one-hole bot-context denotes,
    by evaluating it with the hole set to 0 and then 1."""
    if count_holes(context) != 1:
        raise CttError("a truth context has exactly one hole")
    h = "h"
    while h in rho:
        h += "'"
    filled = fill_hole(context, Var(h, BOT))
    if typecheck_slm(filled, {**{n: v.ty for n, v in rho.items()}, h: BOT}) != BOT:
        raise TypeMismatch("a truth context must have type bot")
    outcomes = []
    for tv in (FALSE, TRUE):
        v = eval_slm(filled, model, {**rho, h: tv})
        if not isinstance(v, TruthVal):
            raise NonGroundValue(
                f"context value {render_elem(v)} is not a rank-0 truth value")
        outcomes.append(v.value)
    return {
        (0, 1): ContextClass.T1,
        (1, 0): ContextClass.T2,
        (0, 0): ContextClass.T3,
        (1, 1): ContextClass.T4,
    }[tuple(outcomes)]


# ---------------------------------------------------------------------------
# equations and sequents

def check_equation(lhs: SlmTerm, rhs: SlmTerm, model: ModelConfig,
                   rho: Assignment) -> bool:
    """lhs = rhs holds in the model under rho (ba_equal of denotations)."""
    if lhs.ty != rhs.ty:
        raise TypeMismatch(f"equating terms of types {lhs.ty} and {rhs.ty}")
    return ba_equal(eval_slm(lhs, model, rho), eval_slm(rhs, model, rho))


MAX_ASSIGNMENTS = 4096


@dataclass
class SequentVerdict:
    model_index: int
    assignment: Assignment
    holds: bool


@dataclass
class SequentReport:
    verdicts: list[SequentVerdict] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return all(v.holds for v in self.verdicts)

    def counterexample(self) -> Optional[SequentVerdict]:
        return next((v for v in self.verdicts if not v.holds), None)


def _pool_size(model: ModelConfig, ty: TypeExpr, rank: int) -> int:
    base = len(enumerate_domain(model, ty, 0))
    return base if rank <= 0 else 2 ** (2 ** base)


def _candidate_values(model: ModelConfig, ty: TypeExpr, rank: int) -> list[CanonElem]:
    if rank <= 0:
        return enumerate_domain(model, ty, 0)
    return enumerate_domain(model, ty, 1)  # rank-1 list covers rank 0 up to ba_equal


def enumerate_assignments(members: list[CtsSubterm], model: ModelConfig,
                          cap: int = MAX_ASSIGNMENTS) -> list[Assignment]:
    """Every assignment of the members' free non-constant variables,
    each variable ranging over its type's carrier up to rank min(bound, 1)."""
    sig: dict[str, tuple[TypeExpr, int]] = {}
    for m in members:
        for name, (ty, rank) in cts_signature(m).items():
            if name in sig and sig[name] != (ty, rank):
                raise TypeMismatch(f"{name} used at two signatures across the sequent")
            sig[name] = (ty, rank)
    chosen = []
    total = 1
    for name, (ty, rank) in sorted(sig.items()):
        if resolve_constant(model, name, ty) is not None:
            continue
        total *= _pool_size(model, ty, rank)  # sized before any enumeration
        if total > cap:
            raise CapExceeded(f"assignment space {total} exceeds the cap {cap}")
        chosen.append((name, ty, rank))
    names = [n for n, _, _ in chosen]
    pools = [_candidate_values(model, ty, rank) for _, ty, rank in chosen]
    return [dict(zip(names, values)) for values in itertools.product(*pools)]


def sequent_semantics(ante: list[CtsSubterm], succ: list[CtsSubterm],
                      model: ModelConfig, rho: Assignment) -> bool:
    """ba_leq of the antecedent meet against the succedent join at the
    maximal rank present (>= 1)."""
    lvals = [eval_cts(m, model, rho) for m in ante]
    rvals = [eval_cts(m, model, rho) for m in succ]
    k = max([1] + [elem_rank(v) for v in lvals + rvals])
    lhs = make_meet(k, BOT, lvals) if lvals else top_at(k, BOT)
    rhs = make_join(k, BOT, rvals) if rvals else bottom_at(k, BOT)
    return ba_leq(lhs, rhs)


def sequent_valid(ante: list[CtsSubterm], succ: list[CtsSubterm],
                  models: Iterable[ModelConfig],
                  cap: int = MAX_ASSIGNMENTS) -> SequentReport:
    """Validity over a family of models, one verdict per model and
    enumerated assignment."""
    report = SequentReport()
    for idx, model in enumerate(models):
        for rho in enumerate_assignments(list(ante) + list(succ), model, cap):
            holds = sequent_semantics(ante, succ, model, rho)
            report.verdicts.append(SequentVerdict(idx, rho, holds))
    return report


def standard_model_family() -> list[ModelConfig]:
    return [
        ModelConfig(base_sizes={"e": 1, "t": 2}),
        ModelConfig(base_sizes={"e": 2, "t": 2}),
        ModelConfig(base_sizes={"e": 3, "t": 2}),
    ]


# ---------------------------------------------------------------------------
# the soundness harness

@dataclass
class TrialRecord:
    rule: str
    seed: int
    trial: int
    status: str  # pass | fail | skip
    detail: str = ""

    def line(self) -> str:
        out = f"rule={self.rule} seed={self.seed} trial={self.trial} status={self.status}"
        if self.detail:
            out += f" detail={self.detail!r}"
        return out


@dataclass
class HarnessReport:
    rule: str
    records: list[TrialRecord] = field(default_factory=list)

    @property
    def failures(self) -> list[TrialRecord]:
        return [r for r in self.records if r.status == "fail"]

    @property
    def passes(self) -> int:
        return sum(1 for r in self.records if r.status == "pass")


def harness_model() -> ModelConfig:
    return ModelConfig(base_sizes={"e": 2, "t": 2})


def soundness_harness(rule: str, model: Optional[ModelConfig] = None,
                      trials: int = 100, seed: int = 0,
                      mutate: bool = False) -> HarnessReport:
    """Random well-typed instances of one equality rule, checked against
    the finite semantics with rank-0 assignments for the free variables.

    `mutate` corrupts the mu rule (forgetting its truth context) as a
    sanity control: the harness must then report failures. For the mu rule
    the exhaustive four-truth-context sweep is appended after the random
    trials.
    """
    model = model or harness_model()
    report = HarnessReport(rule)
    rule_salt = sum(map(ord, rule))
    for trial in range(trials):
        rng = _gen.make_rng(seed * 1000003 + rule_salt * 9176 + trial)
        try:
            lhs, rhs, ctx = _gen.slm_rule_instance(rule, rng)
            if mutate and rule == "mu":
                rhs = _mutate_mu_rhs(lhs, rhs)
            rho = _gen.random_ground_assignment(rng, model, ctx)
            ok = check_equation(lhs, rhs, model, rho)
        except (RankOverflow, CapExceeded) as ex:
            report.records.append(TrialRecord(rule, seed, trial, "skip", str(ex)))
            continue
        if ok:
            report.records.append(TrialRecord(rule, seed, trial, "pass"))
        else:
            detail = f"{render(lhs)} /= {render(rhs)}"
            report.records.append(TrialRecord(rule, seed, trial, "fail", detail))
    if rule == "mu" and not mutate:
        for i, (cls, lhs, rhs, m, rho) in enumerate(mu_exhaustive_cases()):
            ok = check_equation(lhs, rhs, m, rho)
            report.records.append(TrialRecord(
                rule, seed, trials + i, "pass" if ok else "fail",
                f"context={cls.value}"))
    return report


def _mutate_mu_rhs(lhs: SlmTerm, rhs: SlmTerm) -> SlmTerm:
    """Deliberately wrong mu contraction: forget the truth context around
    the bound application, as if the rule ignored it."""

    def find_bound_app(t: SlmTerm, binder: str) -> Optional[App]:
        match t:
            case App(Var(name, _), _) if name == binder:
                return t
            case _:
                for c in slm_children(t):
                    hit = find_bound_app(c, binder)
                    if hit is not None:
                        return hit
        return None

    if not isinstance(rhs, Mu):
        return rhs
    inner = find_bound_app(rhs.body, rhs.binder)
    if inner is None:
        return rhs
    return Mu(rhs.binder, rhs.binder_ty, inner)


def cts_harness_model(size: int = 2) -> ModelConfig:
    """Model for sequent-rule trials: base e plus constants naming every
    e -> bot table, so functor-side big-operator substitution has a
    name-addressable carrier."""
    model = ModelConfig(base_sizes={"e": size})
    for i, tab in enumerate(enumerate_domain(model, Arrow(Base("e"), BOT), 0)):
        model.constants[f"k{i}"] = tab
    return model


def cts_rule_harness(rule: str, trials: int = 100, seed: int = 0,
                     models=None) -> HarnessReport:
    """Random accepted instances of one sequent rule, checked for validity
    preservation: premise validity implies conclusion validity, and
    conversely for the bidirectional substitution rules.

    Big-operator substitution instances expand over their generating
    model's carrier and are checked on that model alone; everything else
    runs over a small family of sizes."""
    from . import sequents as sq

    gen_model = cts_harness_model()
    big_subst = rule.startswith(("all-", "ex-")) and rule[-1] in "rl"
    if models is None:
        models = [gen_model] if big_subst else [cts_harness_model(1), gen_model]
    report = HarnessReport(rule)
    rule_salt = sum(map(ord, rule))
    double_line = rule in sq.SUBST_RULES
    for trial in range(trials):
        rng = _gen.make_rng(seed * 2000003 + rule_salt * 5077 + trial)
        try:
            conclusion, premises, pos, direction = _gen.cts_rule_instance(
                rule, rng, gen_model)
            violation = sq.check_rule_instance(
                conclusion, premises, rule, pos, direction, gen_model)
            if violation is not None:
                report.records.append(TrialRecord(
                    rule, seed, trial, "fail", f"generator rejected: {violation}"))
                continue
            def valid(seq):
                return all(
                    sequent_valid(seq.side("L"), seq.side("R"), [m]).valid
                    for m in models)
            prem_ok = all(valid(p) for p in premises)
            concl_ok = valid(conclusion)
            sound = concl_ok or not prem_ok
            if double_line:
                sound = sound and (prem_ok or not concl_ok)
        except CapExceeded as ex:
            report.records.append(TrialRecord(rule, seed, trial, "skip", str(ex)))
            continue
        if sound:
            report.records.append(TrialRecord(rule, seed, trial, "pass"))
        else:
            report.records.append(TrialRecord(
                rule, seed, trial, "fail",
                f"{sq.render_sequent(conclusion)} breaks validity preservation"))
    return report


def mu_exhaustive_cases(sizes: tuple[int, int] = (2, 2)):
    """Every truth-context class x functor table x argument atom for the mu
    rule at small base sizes; yields (context_class, lhs, rhs, model, rho)."""
    model = ModelConfig(base_sizes={"s": sizes[0], "t": sizes[1]})
    sigma, tau = Base("s"), Base("t")
    fn_ty = Arrow(sigma, tau)

    neg_table = fn_table(BOT, BOT, {FALSE: TRUE, TRUE: FALSE})
    const0 = fn_table(BOT, BOT, {FALSE: FALSE, TRUE: FALSE})
    const1 = fn_table(BOT, BOT, {FALSE: TRUE, TRUE: TRUE})
    contexts = {
        ContextClass.T1: (Hole(), {}),
        ContextClass.T2: (App(Var("n", Arrow(BOT, BOT)), Hole()), {"n": neg_table}),
        ContextClass.T3: (App(Var("n", Arrow(BOT, BOT)), Hole()), {"n": const0}),
        ContextClass.T4: (App(Var("n", Arrow(BOT, BOT)), Hole()), {"n": const1}),
    }
    x = Var("x0", Arrow(fn_ty, BOT))
    for cls, (ctx_term, extra) in contexts.items():
        for r_table in enumerate_domain(model, fn_ty, 0):
            for q_atom in enumerate_domain(model, sigma, 0):
                body = fill_hole(ctx_term, App(x, Var("r", fn_ty)))
                lhs = App(Mu("x0", Arrow(fn_ty, BOT), body), Var("q", sigma))
                rhs = Mu("y0", Arrow(tau, BOT),
                         structural_subst(body, "x0", Var("q", sigma), "y0"))
                rho = {"r": r_table, "q": q_atom, **extra}
                yield cls, lhs, rhs, model, rho
