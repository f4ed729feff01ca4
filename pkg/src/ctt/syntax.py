"""Types, lambda-mu terms, ranked subterms: AST, parsing, printing, checking.

Three term languages share one tokenizer:

  types     bot | e | (s -> t) | ~s          (~s sugar for (s -> bot))
  lambda-mu x | (P Q) | \\x:TY. P | #x:~TY. P
  ranked    x:TY@k | (P Q) | neg[k](P) | and[k](P,Q) | or[k](P,Q)
            | All[k](x:TY@m) | Ex[k](x:TY@m)

Variables carry their type (and rank, in the ranked language) at binding or
first use; later occurrences may be bare and must be consistent.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Optional, Union


class CttError(Exception):
    """Base for all library errors."""


class ParseError(CttError):
    def __init__(self, msg: str, pos: int, text: str = ""):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{msg} at line {line}, column {col}")
        self.pos = pos
        self.line = line
        self.col = col


class TypeMismatch(CttError):
    """Term fails to typecheck; carries the path to the offending node."""

    def __init__(self, msg: str, path: tuple[int, ...] = ()):
        super().__init__(f"{msg} (at path {'.'.join(map(str, path)) or 'root'})")
        self.path = path


class RankViolation(CttError):
    """A ranked subterm breaks a grammar side condition."""


class UnboundVariable(CttError):
    pass


# ---------------------------------------------------------------------------
# types

@dataclass(frozen=True)
class Base:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Arrow:
    dom: "TypeExpr"
    cod: "TypeExpr"

    def __str__(self):
        return f"({self.dom} -> {self.cod})"


@dataclass(frozen=True)
class Bot:
    def __str__(self):
        return "bot"


TypeExpr = Union[Base, Arrow, Bot]
BOT = Bot()


def neg_type(ty: TypeExpr) -> Arrow:
    return Arrow(ty, BOT)


def is_neg_type(ty: TypeExpr) -> bool:
    return isinstance(ty, Arrow) and ty.cod == BOT


def strip_negations(ty: TypeExpr) -> tuple[int, TypeExpr]:
    """Count leading negations: ~~~s -> (3, s)."""
    n = 0
    while is_neg_type(ty):
        n += 1
        ty = ty.dom
    return n, ty


# ---------------------------------------------------------------------------
# lambda-mu terms

@dataclass(frozen=True)
class Var:
    name: str
    ty: TypeExpr


@dataclass(frozen=True)
class App:
    fun: "SlmTerm"
    arg: "SlmTerm"

    @cached_property
    def ty(self) -> TypeExpr:
        fty = self.fun.ty
        if not isinstance(fty, Arrow):
            raise TypeMismatch(f"{fty} is not an arrow type")
        return fty.cod


@dataclass(frozen=True)
class Lam:
    binder: str
    binder_ty: TypeExpr
    body: "SlmTerm"

    @cached_property
    def ty(self) -> TypeExpr:
        return Arrow(self.binder_ty, self.body.ty)


@dataclass(frozen=True)
class Mu:
    """mu-abstraction: binder has type ~s, body type bot, whole term type s."""

    binder: str
    binder_ty: TypeExpr
    body: "SlmTerm"

    @cached_property
    def ty(self) -> TypeExpr:
        if not is_neg_type(self.binder_ty):
            raise TypeMismatch("mu binder must have a negation type")
        return self.binder_ty.dom


@dataclass(frozen=True)
class Hole:
    """One-hole position in a bot-typed context (internal; not parseable)."""

    ty: TypeExpr = BOT


SlmTerm = Union[Var, App, Lam, Mu, Hole]


def typecheck_slm(term: SlmTerm, ctx: Optional[dict[str, TypeExpr]] = None,
                  _path: tuple[int, ...] = ()) -> TypeExpr:
    """Type of `term` under `ctx`; raises on unbound variables or mismatches."""
    ctx = ctx or {}
    match term:
        case Var(name, ty):
            if name in ctx and ctx[name] != ty:
                raise TypeMismatch(
                    f"variable {name} annotated {ty} but bound to {ctx[name]}", _path)
            if name not in ctx:
                raise UnboundVariable(f"unbound variable {name}")
            return ty
        case App(fun, arg):
            fty = typecheck_slm(fun, ctx, _path + (0,))
            aty = typecheck_slm(arg, ctx, _path + (1,))
            if not isinstance(fty, Arrow):
                raise TypeMismatch(f"{fty} is not an arrow type", _path + (0,))
            if fty.dom != aty:
                raise TypeMismatch(
                    f"argument type {aty} does not match domain {fty.dom}", _path + (1,))
            return fty.cod
        case Lam(binder, binder_ty, body):
            bty = typecheck_slm(body, {**ctx, binder: binder_ty}, _path + (0,))
            return Arrow(binder_ty, bty)
        case Mu(binder, binder_ty, body):
            if not is_neg_type(binder_ty):
                raise TypeMismatch("mu binder must have a negation type", _path)
            bty = typecheck_slm(body, {**ctx, binder: binder_ty}, _path + (0,))
            if bty != BOT:
                raise TypeMismatch(f"mu body has type {bty}, expected bot", _path + (0,))
            return binder_ty.dom
        case Hole(ty):
            return ty
    raise TypeMismatch(f"unknown node {term!r}", _path)


def slm_children(term: SlmTerm) -> tuple[SlmTerm, ...]:
    match term:
        case App(fun, arg):
            return (fun, arg)
        case Lam(_, _, body) | Mu(_, _, body):
            return (body,)
        case _:
            return ()


def slm_replace(term: SlmTerm, path: tuple[int, ...], new: SlmTerm) -> SlmTerm:
    if not path:
        return new
    i, rest = path[0], path[1:]
    match term, i:
        case App(fun, arg), 0:
            return App(slm_replace(fun, rest, new), arg)
        case App(fun, arg), 1:
            return App(fun, slm_replace(arg, rest, new))
        case Lam(b, bt, body), 0:
            return Lam(b, bt, slm_replace(body, rest, new))
        case Mu(b, bt, body), 0:
            return Mu(b, bt, slm_replace(body, rest, new))
    raise CttError(f"bad path {path} into {render(term)}")


def slm_at(term: SlmTerm, path: tuple[int, ...]) -> SlmTerm:
    for i in path:
        term = slm_children(term)[i]
    return term


# ---------------------------------------------------------------------------
# ranked subterms

@dataclass(frozen=True)
class CVar:
    name: str
    ty: TypeExpr
    rank: int


@dataclass(frozen=True)
class CApp:
    fun: "CtsSubterm"
    arg: "CtsSubterm"

    @property
    def rank(self) -> int:
        return max(self.fun.rank, self.arg.rank)

    @cached_property
    def ty(self) -> TypeExpr:
        fty = self.fun.ty
        if not isinstance(fty, Arrow):
            raise TypeMismatch(f"{fty} is not an arrow type")
        return fty.cod


@dataclass(frozen=True)
class CNeg:
    k: int
    child: "CtsSubterm"

    @property
    def rank(self) -> int:
        return self.k

    @property
    def ty(self) -> TypeExpr:
        return self.child.ty


@dataclass(frozen=True)
class CConj:
    k: int
    left: "CtsSubterm"
    right: "CtsSubterm"

    @property
    def rank(self) -> int:
        return self.k

    @property
    def ty(self) -> TypeExpr:
        return self.left.ty


@dataclass(frozen=True)
class CDisj:
    k: int
    left: "CtsSubterm"
    right: "CtsSubterm"

    @property
    def rank(self) -> int:
        return self.k

    @property
    def ty(self) -> TypeExpr:
        return self.left.ty


@dataclass(frozen=True)
class CBigConj:
    """Generalized conjunction over the rank-`atom_rank` carrier of `index_ty`."""

    k: int
    index_var: str
    index_ty: TypeExpr
    atom_rank: int = 0

    @property
    def rank(self) -> int:
        return self.k

    @property
    def ty(self) -> TypeExpr:
        return self.index_ty


@dataclass(frozen=True)
class CBigDisj:
    k: int
    index_var: str
    index_ty: TypeExpr
    atom_rank: int = 0

    @property
    def rank(self) -> int:
        return self.k

    @property
    def ty(self) -> TypeExpr:
        return self.index_ty


CtsSubterm = Union[CVar, CApp, CNeg, CConj, CDisj, CBigConj, CBigDisj]


def cts_children(sub: CtsSubterm) -> tuple[CtsSubterm, ...]:
    match sub:
        case CApp(fun, arg):
            return (fun, arg)
        case CNeg(_, child):
            return (child,)
        case CConj(_, l, r) | CDisj(_, l, r):
            return (l, r)
        case _:
            return ()


def cts_at(sub: CtsSubterm, path: tuple[int, ...]) -> CtsSubterm:
    for i in path:
        kids = cts_children(sub)
        if i >= len(kids):
            raise CttError(f"bad path component {i} at {render(sub)}")
        sub = kids[i]
    return sub


def cts_replace(sub: CtsSubterm, path: tuple[int, ...], new: CtsSubterm) -> CtsSubterm:
    if not path:
        return new
    i, rest = path[0], path[1:]
    match sub, i:
        case CApp(fun, arg), 0:
            return CApp(cts_replace(fun, rest, new), arg)
        case CApp(fun, arg), 1:
            return CApp(fun, cts_replace(arg, rest, new))
        case CNeg(k, child), 0:
            return CNeg(k, cts_replace(child, rest, new))
        case CConj(k, l, r), 0:
            return CConj(k, cts_replace(l, rest, new), r)
        case CConj(k, l, r), 1:
            return CConj(k, l, cts_replace(r, rest, new))
        case CDisj(k, l, r), 0:
            return CDisj(k, cts_replace(l, rest, new), r)
        case CDisj(k, l, r), 1:
            return CDisj(k, l, cts_replace(r, rest, new))
    raise CttError(f"bad path {path} into {render(sub)}")


def rank_check(sub: CtsSubterm) -> int:
    """Validate every rank side condition; returns the subterm's rank.

    Boolean nodes need k >= 1 and k >= every immediate child's rank;
    application ranks are max(m, n) by construction and types must compose.
    """
    match sub:
        case CVar(_, _, rank):
            if rank < 0:
                raise RankViolation("variable rank must be a natural number")
            return rank
        case CApp(fun, arg):
            m, n = rank_check(fun), rank_check(arg)
            fty = fun.ty
            if not isinstance(fty, Arrow):
                raise TypeMismatch(f"{fty} is not an arrow type")
            if fty.dom != arg.ty:
                raise TypeMismatch(
                    f"argument type {arg.ty} does not match domain {fty.dom}")
            return max(m, n)
        case CNeg(k, child):
            m = rank_check(child)
            if k < 1 or m > k:
                raise RankViolation(f"neg[{k}] needs child rank {m} <= k, k >= 1")
            return k
        case CConj(k, l, r) | CDisj(k, l, r):
            m, n = rank_check(l), rank_check(r)
            op = "and" if isinstance(sub, CConj) else "or"
            if k < 1 or m > k or n > k:
                raise RankViolation(
                    f"{op}[{k}] needs child ranks {m},{n} <= k, k >= 1")
            if l.ty != r.ty:
                raise TypeMismatch(f"{op}[{k}] children differ in type: {l.ty} vs {r.ty}")
            return k
        case CBigConj(k, _, _, m) | CBigDisj(k, _, _, m):
            if k < 1 or m > k or m < 0:
                raise RankViolation(f"big operator needs index rank {m} <= k, k >= 1")
            return k
    raise CttError(f"unknown subterm {sub!r}")


class SyntaxClass(Enum):
    ATOMIC = "atomic"
    MOLECULAR = "molecular"
    CANONICAL = "canonical"


def _has_boolean(sub: CtsSubterm) -> bool:
    if isinstance(sub, (CNeg, CConj, CDisj, CBigConj, CBigDisj)):
        return True
    return any(_has_boolean(c) for c in cts_children(sub))


def _canonical_shape(sub: CtsSubterm) -> bool:
    match sub:
        case CApp():
            return not _has_boolean(sub)
        case CBigConj(_, _, _, m) | CBigDisj(_, _, _, m):
            return m == 0
        case _:
            return all(_canonical_shape(c) for c in cts_children(sub))


def classify(sub: CtsSubterm) -> SyntaxClass:
    """Strongest syntactic class: atomic < canonical < molecular.

    Atomic: no Boolean operator at all. Canonical: Boolean operators never
    occur beneath an application, and big-operator indices are rank 0.
    """
    if not _has_boolean(sub):
        return SyntaxClass.ATOMIC
    if _canonical_shape(sub):
        return SyntaxClass.CANONICAL
    return SyntaxClass.MOLECULAR


# ---------------------------------------------------------------------------
# free variables

def free_vars(term: Union[SlmTerm, CtsSubterm]) -> dict[str, TypeExpr]:
    """Free variable names with their types; lambda and mu both bind.

    Raises TypeMismatch if one name occurs free at two different types.
    """
    out: dict[str, TypeExpr] = {}

    def add(name: str, ty: TypeExpr):
        if name in out and out[name] != ty:
            raise TypeMismatch(f"{name} occurs free at both {out[name]} and {ty}")
        out[name] = ty

    def go(t, bound: frozenset[str]):
        match t:
            case Var(name, ty) | CVar(name, ty, _):
                if name not in bound:
                    add(name, ty)
            case Lam(b, _, body) | Mu(b, _, body):
                go(body, bound | {b})
            case App(fun, arg) | CApp(fun, arg):
                go(fun, bound)
                go(arg, bound)
            case CNeg(_, child):
                go(child, bound)
            case CConj(_, l, r) | CDisj(_, l, r):
                go(l, bound)
                go(r, bound)
            case CBigConj() | CBigDisj() | Hole():
                pass  # big-operator indices range over the carrier, not rho
            case _:
                raise CttError(f"unknown node {t!r}")

    go(term, frozenset())
    return out


def cts_signature(sub: CtsSubterm) -> dict[str, tuple[TypeExpr, int]]:
    """Free ranked variables of a subterm: name -> (type, rank bound).

    Big-operator index variables are bound by the operator and excluded.
    Inconsistent reuse of a name raises TypeMismatch.
    """
    out: dict[str, tuple[TypeExpr, int]] = {}

    def go(s: CtsSubterm):
        match s:
            case CVar(name, ty, rank):
                if name in out and out[name] != (ty, rank):
                    raise TypeMismatch(
                        f"{name} used at {out[name]} and ({ty}, {rank})")
                out[name] = (ty, rank)
            case CBigConj() | CBigDisj():
                pass
            case _:
                for c in cts_children(s):
                    go(c)

    go(sub)
    return out


# ---------------------------------------------------------------------------
# tokenizer

_TOKEN_RE = re.compile(r"""
      (?P<ARROW>->)
    | (?P<TURNSTILE>\|-)
    | (?P<IDENT>[A-Za-z_][A-Za-z0-9_']*)
    | (?P<NAT>[0-9]+)
    | (?P<SYM>[()\[\]{}.,:;@~\\#=])
    | (?P<WS>\s+)
""", re.VERBOSE)

RESERVED = {"bot", "and", "or", "neg", "All", "Ex", "table"}


@dataclass
class Token:
    kind: str
    text: str
    pos: int


def tokenize(text: str, mu_sigil: bool = False) -> list[Token]:
    """Tokenize; `#` starts a comment unless mu_sigil and directly glued to
    an identifier (the mu binder form `#x:...`)."""
    toks: list[Token] = []
    i = 0
    while i < len(text):
        if text[i] == "#":
            rest = text[i + 1:]
            if mu_sigil and re.match(r"[A-Za-z_]", rest[:1] or ""):
                toks.append(Token("SYM", "#", i))
                i += 1
                continue
            nl = text.find("\n", i)
            i = len(text) if nl < 0 else nl + 1
            continue
        m = _TOKEN_RE.match(text, i)
        if not m:
            raise ParseError(f"unexpected character {text[i]!r}", i, text)
        kind = m.lastgroup or "WS"
        if kind != "WS":
            toks.append(Token(kind, m.group(), i))
        i = m.end()
    toks.append(Token("EOF", "", len(text)))
    return toks


class _Cursor:
    def __init__(self, toks: list[Token], text: str):
        self.toks = toks
        self.text = text
        self.i = 0

    def peek(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        t = self.peek()
        if t.text != text:
            raise ParseError(f"expected {text!r}, found {t.text or 'end of input'!r}",
                             t.pos, self.text)
        return self.next()

    def at(self, text: str) -> bool:
        return self.peek().text == text

    def fail(self, msg: str):
        t = self.peek()
        raise ParseError(msg, t.pos, self.text)


# ---------------------------------------------------------------------------
# type parser

def _parse_type_atom(c: _Cursor) -> TypeExpr:
    t = c.peek()
    if t.text == "bot":
        c.next()
        return BOT
    if t.text == "~":
        c.next()
        return neg_type(_parse_type_atom(c))
    if t.text == "(":
        c.next()
        ty = _parse_type(c)
        c.expect(")")
        return ty
    if t.kind == "IDENT" and t.text not in RESERVED:
        c.next()
        return Base(t.text)
    c.fail("expected a type")


def _parse_type(c: _Cursor) -> TypeExpr:
    left = _parse_type_atom(c)
    if c.at("->"):
        c.next()
        return Arrow(left, _parse_type(c))
    return left


def parse_type(text: str) -> TypeExpr:
    c = _Cursor(tokenize(text), text)
    ty = _parse_type(c)
    if c.peek().kind != "EOF":
        c.fail("trailing input after type")
    return ty


# ---------------------------------------------------------------------------
# lambda-mu parser

class _SlmParser:
    def __init__(self, text: str, ctx: Optional[dict[str, TypeExpr]],
                 default_ty: Optional[TypeExpr]):
        self.c = _Cursor(tokenize(text, mu_sigil=True), text)
        self.known: dict[str, TypeExpr] = dict(ctx or {})
        self.default_ty = default_ty

    def term(self, bound: dict[str, TypeExpr]) -> SlmTerm:
        c = self.c
        t = c.peek()
        if t.text == "\\" or t.text == "#":
            is_mu = t.text == "#"
            c.next()
            name = self.ident()
            c.expect(":")
            bty = _parse_type_atom(c)
            if is_mu and not is_neg_type(bty):
                c.fail(f"mu binder must have a negation type, got {bty}")
            c.expect(".")
            body = self.term({**bound, name: bty})
            return Mu(name, bty, body) if is_mu else Lam(name, bty, body)
        if t.text == "(":
            c.next()
            out = self.term(bound)
            while not c.at(")"):  # (P) groups, (P Q R) left-folds
                out = App(out, self.term(bound))
            c.expect(")")
            return out
        if t.kind == "IDENT" and t.text not in RESERVED:
            c.next()
            name = t.text
            if c.at(":") and name not in bound:
                c.next()
                ty = _parse_type_atom(c)
                if name in self.known and self.known[name] != ty:
                    c.fail(f"{name} already annotated as {self.known[name]}")
                self.known[name] = ty
                return Var(name, ty)
            if name in bound:
                return Var(name, bound[name])
            if name in self.known:
                return Var(name, self.known[name])
            if self.default_ty is not None:
                self.known[name] = self.default_ty
                return Var(name, self.default_ty)
            c.fail(f"free variable {name} needs a type annotation")
        c.fail("expected a term")

    def ident(self) -> str:
        t = self.c.peek()
        if t.kind != "IDENT" or t.text in RESERVED:
            self.c.fail("expected an identifier")
        self.c.next()
        return t.text


def _parse_slm_once(text: str, ctx, default_ty) -> SlmTerm:
    p = _SlmParser(text, ctx, default_ty)
    term = p.term({})
    if p.c.peek().kind != "EOF":
        p.c.fail("trailing input after term")
    typecheck_slm(term, {**(ctx or {}), **p.known})
    return term


def parse_slm(text: str, ctx: Optional[dict[str, TypeExpr]] = None,
              default_ty: Optional[TypeExpr] = None) -> SlmTerm:
    """Parse a lambda-mu term and typecheck it.

    A leading `TYPE :` gives unannotated free variables a default type,
    e.g. `e: ((\\x:e. x) y)` types the free y as e. A plain term is tried
    first, so `x:e` stays an annotated variable.
    """
    try:
        return _parse_slm_once(text, ctx, default_ty)
    except CttError as original:
        head, sep, rest = text.partition(":")
        if default_ty is not None or not sep:
            raise
        try:
            prefix_ty = parse_type(head)
        except CttError:
            raise original from None
        return _parse_slm_once(rest, ctx, prefix_ty)


# ---------------------------------------------------------------------------
# ranked-subterm parser

class _CtsParser:
    def __init__(self, text: str, sig: Optional[dict[str, tuple[TypeExpr, int]]]):
        self.c = _Cursor(tokenize(text), text)
        self.known: dict[str, tuple[TypeExpr, int]] = dict(sig or {})
        self.default_var: Optional[tuple[TypeExpr, int]] = None

    def rank(self) -> int:
        t = self.c.peek()
        if t.kind != "NAT":
            self.c.fail("expected a rank (natural number)")
        self.c.next()
        return int(t.text)

    def bracket_rank(self) -> int:
        self.c.expect("[")
        k = self.rank()
        self.c.expect("]")
        return k

    def annotated_var(self) -> tuple[str, TypeExpr, int]:
        t = self.c.peek()
        if t.kind != "IDENT" or t.text in RESERVED:
            self.c.fail("expected a variable")
        self.c.next()
        self.c.expect(":")
        ty = _parse_type_atom(self.c)
        self.c.expect("@")
        m = self.rank()
        return t.text, ty, m

    def subterm(self) -> CtsSubterm:
        c = self.c
        t = c.peek()
        if t.text in ("neg", "and", "or", "All", "Ex"):
            op = t.text
            c.next()
            k = self.bracket_rank()
            c.expect("(")
            if op == "neg":
                child = self.subterm()
                c.expect(")")
                return CNeg(k, child)
            if op in ("and", "or"):
                left = self.subterm()
                c.expect(",")
                right = self.subterm()
                c.expect(")")
                return (CConj if op == "and" else CDisj)(k, left, right)
            name, ty, m = self.annotated_var()
            c.expect(")")
            return (CBigConj if op == "All" else CBigDisj)(k, name, ty, m)
        if t.text == "(":
            c.next()
            out = self.subterm()
            while not c.at(")"):
                out = CApp(out, self.subterm())
            c.expect(")")
            return out
        if t.kind in ("IDENT", "NAT"):  # 0 and 1 name the truth values
            c.next()
            name = t.text
            if c.at(":"):
                c.next()
                ty = _parse_type_atom(c)
                c.expect("@")
                m = self.rank()
                if name in self.known and self.known[name] != (ty, m):
                    c.fail(f"{name} already annotated as "
                           f"{self.known[name][0]}@{self.known[name][1]}")
                self.known[name] = (ty, m)
                return CVar(name, ty, m)
            if name in self.known:
                ty, m = self.known[name]
                return CVar(name, ty, m)
            if self.default_var is not None:
                self.known[name] = self.default_var
                return CVar(name, *self.default_var)
            c.fail(f"variable {name} needs a `:type@rank` annotation")
        c.fail("expected a subterm")


def parse_cts(text: str, sig: Optional[dict[str, tuple[TypeExpr, int]]] = None) -> CtsSubterm:
    """Parse a ranked subterm and check every rank side condition."""
    p = _CtsParser(text, sig)
    sub = p.subterm()
    if p.c.peek().kind != "EOF":
        p.c.fail("trailing input after subterm")
    rank_check(sub)
    return sub


def parse_sequent_members(text: str,
                          sig: Optional[dict[str, tuple[TypeExpr, int]]] = None,
                          default_var: tuple[TypeExpr, int] = (BOT, 0),
                          ) -> tuple[list[CtsSubterm], list[CtsSubterm]]:
    """Parse `A, B |- C, D`. Bare unannotated variables default to bot@0."""
    p = _CtsParser(text, sig)
    p.default_var = default_var

    def side(stop_kind: str) -> list[CtsSubterm]:
        members = []
        while not p.c.at(stop_kind) and p.c.peek().kind != "EOF":
            members.append(p.subterm())
            if p.c.at(","):
                p.c.next()
            else:
                break
        return members

    ante = side("|-")
    p.c.expect("|-")
    succ = side("")
    if p.c.peek().kind != "EOF":
        p.c.fail("trailing input after sequent")
    for m in ante + succ:
        rank_check(m)
        if m.ty != BOT:
            raise TypeMismatch(f"sequent member {render(m)} has type {m.ty}, expected bot")
    return ante, succ


def parse(text: str, mode: str):
    """Dispatch parser: mode is 'type', 'slm', or 'cts'."""
    if mode == "type":
        return parse_type(text)
    if mode == "slm":
        return parse_slm(text)
    if mode == "cts":
        return parse_cts(text)
    raise CttError(f"unknown parse mode {mode!r}")


# ---------------------------------------------------------------------------
# rendering

def render_type(ty: TypeExpr) -> str:
    return str(ty)


def _render_binder_ty(ty: TypeExpr, mu: bool) -> str:
    if mu:
        assert is_neg_type(ty)
        return "~" + render_type(ty.dom)
    return render_type(ty)


def render(ast, sort_children: bool = False, annotate: bool = True) -> str:
    """Deterministic text for types, lambda-mu terms and ranked subterms.

    Free variables are annotated at first (leftmost) use only; annotate=False
    drops those annotations (display form, not reparseable in general). With
    sort_children=True the children of and/or nodes print in lexicographic
    order (canonical printing for golden files).
    """
    if isinstance(ast, (Base, Arrow, Bot)):
        return render_type(ast)

    def _bare_key(s: CtsSubterm) -> str:
        match s:
            case CVar(name, _, _):
                return name
            case CApp(fun, arg):
                return f"({_bare_key(fun)} {_bare_key(arg)})"
            case CNeg(k, child):
                return f"neg[{k}]({_bare_key(child)})"
            case CConj(k, l, r) | CDisj(k, l, r):
                op = "and" if isinstance(s, CConj) else "or"
                a, b = _bare_key(l), _bare_key(r)
                if sort_children and b < a:
                    a, b = b, a
                return f"{op}[{k}]({a},{b})"
            case CBigConj(k, x, _, m) | CBigDisj(k, x, _, m):
                op = "All" if isinstance(s, CBigConj) else "Ex"
                return f"{op}[{k}]({x}@{m})"
        raise CttError(f"cannot render {s!r}")

    seen: set[str] = set()

    def slm(t: SlmTerm, bound: frozenset[str]) -> str:
        match t:
            case Hole():
                return "_"
            case Var(name, ty):
                if name in bound or name in seen or not annotate:
                    return name
                seen.add(name)
                return f"{name}:{_type_atom(ty)}"
            case App(fun, arg):
                f = slm(fun, bound)
                if isinstance(fun, (Lam, Mu)):
                    f = f"({f})"
                return f"({f} {slm(arg, bound)})"
            case Lam(b, bty, body):
                return f"\\{b}:{_type_atom(bty)}. {slm(body, bound | {b})}"
            case Mu(b, bty, body):
                return f"#{b}:{_render_binder_ty(bty, mu=True)}. {slm(body, bound | {b})}"
        raise CttError(f"cannot render {t!r}")

    def _type_atom(ty: TypeExpr) -> str:
        # annotation position binds tight: parenthesized unless atomic
        return render_type(ty)

    def cts(s: CtsSubterm) -> str:
        match s:
            case CVar(name, ty, rank):
                if name in seen or not annotate:
                    return name
                seen.add(name)
                return f"{name}:{_type_atom(ty)}@{rank}"
            case CApp(fun, arg):
                return f"({cts(fun)} {cts(arg)})"
            case CNeg(k, child):
                return f"neg[{k}]({cts(child)})"
            case CConj(k, l, r) | CDisj(k, l, r):
                op = "and" if isinstance(s, CConj) else "or"
                # ordering is decided on annotation-free keys, then the
                # children are rendered in that order so first-use
                # annotations still come out left to right
                if sort_children and _bare_key(r) < _bare_key(l):
                    l, r = r, l
                return f"{op}[{k}]({cts(l)},{cts(r)})"
            case CBigConj(k, x, ty, m) | CBigDisj(k, x, ty, m):
                op = "All" if isinstance(s, CBigConj) else "Ex"
                return f"{op}[{k}]({x}:{_type_atom(ty)}@{m})"
        raise CttError(f"cannot render {s!r}")

    if isinstance(ast, (Var, App, Lam, Mu, Hole)):
        return slm(ast, frozenset())
    if isinstance(ast, (CVar, CApp, CNeg, CConj, CDisj, CBigConj, CBigDisj)):
        return cts(ast)
    raise CttError(f"cannot render {ast!r}")
