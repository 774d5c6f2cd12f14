"""The trusted rule engine: linear proofs, dependency and discharge
bookkeeping, the full rule table, Qed verification, undo, log replay and
theory checking.

A proof is a list of ProofElements.  Rules append exactly one element; the
only mutation of earlier lines is discharge bookkeeping.  Each element i was
produced by log entry i, so a log replays to the same proof.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace as _dc_replace
from typing import Callable

from . import syntax
from .environment import ProofEnvironment, TheoremStore, TheoremFileError
from .syntax import (
    BOTTOM,
    And,
    Const,
    Equal,
    Equiv,
    Exists,
    Extension,
    Forall,
    Formula,
    Implies,
    Member,
    Or,
    PredApp,
    SOVar,
    UniqueExists,
    Var,
    alpha_equal,
    binders_on_path,
    contains_sovar,
    find_alpha_occurrences,
    find_occurrences,
    free_vars,
    fresh_name,
    parse_formula,
    parse_term,
    replace_paths,
    render,
    strip_outer_parens,
    substitute,
    substitute_many,
)


class KernelError(ValueError):
    pass


class ReplayError(ValueError):
    def __init__(self, index: int, cause: str) -> None:
        super().__init__(f"log entry {index}: {cause}")
        self.index = index
        self.cause = cause


@dataclass(frozen=True)
class RuleInvocation:
    """One unit of the proof log: a rule name with its raw arguments."""

    name: str
    args: tuple

    def to_json(self) -> dict:
        return {"rule": self.name, "args": [_plain(a) for a in self.args]}

    @classmethod
    def from_json(cls, data: dict) -> "RuleInvocation":
        return cls(data["rule"], tuple(tuple(a) if isinstance(a, list) else a for a in data["args"]))

    def call_text(self) -> str:
        return f"{self.name}({','.join(json.dumps(_plain(a), ensure_ascii=False) for a in self.args)})"


def _plain(a):
    return list(a) if isinstance(a, tuple) else a


@dataclass
class ProofElement:
    formula: Formula
    rule: str
    parents: tuple[int, ...]
    parameters: tuple
    pos: int
    discharged_by: list[int] = field(default_factory=list)
    qed: bool = False
    comment: str = ""

    @property
    def discharging(self) -> tuple[int, ...]:
        """Later line indices at which this hypothesis was discharged."""
        return tuple(self.discharged_by)


class LinearProof:
    def __init__(self) -> None:
        self.elements: list[ProofElement] = []
        self.log: list[RuleInvocation] = []

    def __len__(self) -> int:
        return len(self.elements)


# ---------------------------------------------------------------------------
# Dependency and discharge bookkeeping


def dependency_tree(proof: LinearProof, n: int) -> set[int]:
    """n plus the transitive closure over parents."""
    _check_index(proof, n)
    seen: set[int] = set()
    stack = [n]
    while stack:
        i = stack.pop()
        if i in seen:
            continue
        seen.add(i)
        stack.extend(proof.elements[i].parents)
    return seen


def hypotheses_of(proof: LinearProof, n: int) -> set[int]:
    """Undischarged hypothesis lines the given line depends on: Hyp leaves of
    the dependency tree whose dischargers all lie outside the tree."""
    tree = dependency_tree(proof, n)
    out = set()
    for i in tree:
        e = proof.elements[i]
        if e.rule == "Hyp" and not (set(e.discharged_by) & tree):
            out.add(i)
    return out


def qed(proof: LinearProof, n: int) -> bool:
    _check_index(proof, n)
    if hypotheses_of(proof, n):
        return False
    proof.elements[n].qed = True
    return True


def undo(proof: LinearProof) -> None:
    if not proof.elements:
        raise KernelError("the proof is empty")
    removed = len(proof.elements) - 1
    proof.elements.pop()
    proof.log.pop()
    for e in proof.elements:
        if removed in e.discharged_by:
            e.discharged_by.remove(removed)


def _check_index(proof: LinearProof, n) -> None:
    if not isinstance(n, int) or n < 0 or n >= len(proof.elements):
        raise KernelError(f"line index {n!r} out of range (proof has {len(proof.elements)} lines)")


# ---------------------------------------------------------------------------
# Rule table

# Parameter kinds: line (a parent), discharge (a line reference that is not a
# parent), formula/term (parsed in the active signature), var/name (bare
# identifiers), names/terms (lists), positions (occurrence indices), int.
@dataclass(frozen=True)
class RuleSpec:
    name: str
    params: tuple[tuple[str, str], ...]
    handler: Callable
    derived: bool = False


RULES: dict[str, RuleSpec] = {}


def _rule(name: str, *params: tuple[str, str], derived: bool = False):
    def wrap(fn: Callable) -> Callable:
        RULES[name] = RuleSpec(name, params, fn, derived)
        return fn

    return wrap


class _Ctx:
    def __init__(self, env: ProofEnvironment, proof: LinearProof) -> None:
        self.env = env
        self.proof = proof

    def formula_of(self, i: int) -> Formula:
        return self.proof.elements[i].formula

    def hyp_line(self, i: int, role: str) -> ProofElement:
        e = self.proof.elements[i]
        if e.rule != "Hyp":
            raise KernelError(f"{role} line {i} is not a hypothesis")
        return e

    def live_hypotheses(self, i: int) -> list[ProofElement]:
        return [self.proof.elements[h] for h in sorted(hypotheses_of(self.proof, i))]

    def check_eigenvariable(self, y: str, premise: int, rule: str, exclude: set[int] = frozenset()) -> None:
        for h in sorted(hypotheses_of(self.proof, premise)):
            if h in exclude:
                continue
            if y in free_vars(self.proof.elements[h].formula):
                raise KernelError(
                    f"{rule}: variable {y!r} occurs free in undischarged hypothesis {h}"
                )

    def check_binder_name(self, x: str) -> None:
        sig = self.env.signature
        if x in sig.constants or x in sig.functions or x in sig.predicates:
            raise KernelError(f"{x!r} is a declared symbol and cannot be bound")


def _select_positions(occs: list, positions: list[int], what: str) -> list:
    chosen = []
    for i in positions:
        if i < 0 or i >= len(occs):
            raise KernelError(f"position {i} out of range: {what} has {len(occs)} occurrence(s)")
        chosen.append(occs[i])
    return chosen


@_rule("Hyp", ("formula", "formula"))
def _r_hyp(ctx: _Ctx, f: Formula):
    return f, ()


@_rule("AndInt", ("a", "line"), ("b", "line"))
def _r_andint(ctx: _Ctx, a: int, b: int):
    return And(ctx.formula_of(a), ctx.formula_of(b)), ()


@_rule("AndElimL", ("a", "line"))
def _r_andeliml(ctx: _Ctx, a: int):
    f = ctx.formula_of(a)
    if not isinstance(f, And):
        raise KernelError(f"line {a} is not a conjunction")
    return f.left, ()


@_rule("AndElimR", ("a", "line"))
def _r_andelimr(ctx: _Ctx, a: int):
    f = ctx.formula_of(a)
    if not isinstance(f, And):
        raise KernelError(f"line {a} is not a conjunction")
    return f.right, ()


@_rule("ImpInt", ("a", "line"), ("hyp", "discharge"))
def _r_impint(ctx: _Ctx, a: int, h: int):
    hyp = ctx.hyp_line(h, "discharge")
    return Implies(hyp.formula, ctx.formula_of(a)), (h,)


@_rule("ImpElim", ("a", "line"), ("imp", "line"))
def _r_impelim(ctx: _Ctx, a: int, i: int):
    f = ctx.formula_of(i)
    if not isinstance(f, Implies):
        raise KernelError(f"line {i} is not an implication")
    if not alpha_equal(f.left, ctx.formula_of(a)):
        raise KernelError(f"line {a} does not match the antecedent of line {i}")
    return f.right, ()


@_rule("OrIntL", ("a", "line"), ("formula", "formula"))
def _r_orintl(ctx: _Ctx, a: int, f: Formula):
    return Or(f, ctx.formula_of(a)), ()


@_rule("OrIntR", ("a", "line"), ("formula", "formula"))
def _r_orintr(ctx: _Ctx, a: int, f: Formula):
    return Or(ctx.formula_of(a), f), ()


@_rule("OrElim", ("or", "line"), ("hypL", "line"), ("conL", "line"), ("hypR", "line"), ("conR", "line"))
def _r_orelim(ctx: _Ctx, o: int, hl: int, cl: int, hr: int, cr: int):
    f = ctx.formula_of(o)
    if not isinstance(f, Or):
        raise KernelError(f"line {o} is not a disjunction")
    eh_l = ctx.hyp_line(hl, "left branch hypothesis")
    eh_r = ctx.hyp_line(hr, "right branch hypothesis")
    if not alpha_equal(eh_l.formula, f.left):
        raise KernelError(f"hypothesis {hl} does not match the left disjunct")
    if not alpha_equal(eh_r.formula, f.right):
        raise KernelError(f"hypothesis {hr} does not match the right disjunct")
    if not alpha_equal(ctx.formula_of(cl), ctx.formula_of(cr)):
        raise KernelError("the two branch conclusions differ")
    if hl not in dependency_tree(ctx.proof, cl):
        raise KernelError(f"left conclusion {cl} does not depend on hypothesis {hl}")
    if hr not in dependency_tree(ctx.proof, cr):
        raise KernelError(f"right conclusion {cr} does not depend on hypothesis {hr}")
    return ctx.formula_of(cl), (hl,) if hl == hr else (hl, hr)


@_rule("ForallInt", ("a", "line"), ("var", "var"), ("newVar", "var"))
def _r_forallint(ctx: _Ctx, a: int, y: str, x: str):
    f = ctx.formula_of(a)
    ctx.check_eigenvariable(y, a, "ForallInt")
    ctx.check_binder_name(x)
    if x != y and x in free_vars(f):
        raise KernelError(f"ForallInt: {x!r} already occurs free in the premise")
    return Forall(x, substitute(f, y, Var(x))), ()


@_rule("ForallElim", ("a", "line"), ("term", "term"))
def _r_forallelim(ctx: _Ctx, a: int, t):
    f = ctx.formula_of(a)
    if not isinstance(f, Forall):
        raise KernelError(f"line {a} is not universally quantified")
    return substitute(f.body, f.var, t), ()


@_rule("ExistsInt", ("a", "line"), ("term", "term"), ("newVar", "var"), ("positions", "positions"))
def _r_existsint(ctx: _Ctx, a: int, t, x: str, positions: list[int]):
    f = ctx.formula_of(a)
    ctx.check_binder_name(x)
    occs = find_occurrences(f, t)
    chosen = _select_positions(occs, positions, f"term {render(t, 'ascii')!r}")
    tvars = free_vars(t)
    for p in chosen:
        binders = binders_on_path(f, p)
        if x in binders:
            raise KernelError(f"ExistsInt: new variable {x!r} would be captured")
        if binders & tvars:
            raise KernelError("ExistsInt: the abstracted occurrence lies under a binder of the term's variables")
    sentinel = replace_paths(f, {p: Const("\x00sentinel") for p in chosen})
    if x in free_vars(sentinel):
        raise KernelError(f"ExistsInt: {x!r} occurs free outside the abstracted positions")
    body = replace_paths(f, {p: Var(x) for p in chosen})
    return Exists(x, body), ()


@_rule("ExistsElim", ("exists", "line"), ("inst", "line"), ("con", "line"), ("var", "var"))
def _r_existselim(ctx: _Ctx, ex: int, inst: int, con: int, y: str):
    f = ctx.formula_of(ex)
    if not isinstance(f, Exists):
        raise KernelError(f"line {ex} is not existentially quantified")
    hyp = ctx.hyp_line(inst, "instance")
    if not alpha_equal(hyp.formula, substitute(f.body, f.var, Var(y))):
        raise KernelError(f"hypothesis {inst} is not the instance of line {ex} at {y!r}")
    c = ctx.formula_of(con)
    if y in free_vars(f):
        raise KernelError(f"ExistsElim: {y!r} occurs free in the existential premise")
    if y in free_vars(c):
        raise KernelError(f"ExistsElim: {y!r} occurs free in the conclusion")
    ctx.check_eigenvariable(y, con, "ExistsElim", exclude={inst})
    return c, (inst,)


@_rule("AbsI", ("bot", "line"), ("formula", "formula"))
def _r_absi(ctx: _Ctx, a: int, f: Formula):
    if ctx.formula_of(a) != BOTTOM:
        raise KernelError(f"line {a} is not absurdity")
    return f, ()


@_rule("AbsC", ("negHyp", "line"), ("bot", "line"))
def _r_absc(ctx: _Ctx, nh: int, b: int):
    hyp = ctx.hyp_line(nh, "negated hypothesis")
    f = hyp.formula
    if not (isinstance(f, Implies) and f.right == BOTTOM):
        raise KernelError(f"hypothesis {nh} is not a negation")
    if ctx.formula_of(b) != BOTTOM:
        raise KernelError(f"line {b} is not absurdity")
    return f.left, (nh,)


@_rule("ClassElim", ("a", "line"))
def _r_classelim(ctx: _Ctx, a: int):
    f = ctx.formula_of(a)
    if not (isinstance(f, Member) and isinstance(f.right, Extension)):
        raise KernelError(f"line {a} is not a membership in an extension")
    guard = _guard_predicate(ctx)
    ext = f.right
    return And(PredApp(guard, (f.left,)), substitute(ext.body, ext.var, f.left)), ()


@_rule("ClassInt", ("a", "line"), ("newVar", "var"))
def _r_classint(ctx: _Ctx, a: int, x: str):
    f = ctx.formula_of(a)
    guard = _guard_predicate(ctx)
    if not (
        isinstance(f, And)
        and isinstance(f.left, PredApp)
        and f.left.name == guard
        and len(f.left.args) == 1
    ):
        raise KernelError(f"line {a} is not of the form {guard}(t) & A")
    t = f.left.args[0]
    rest = f.right
    ctx.check_binder_name(x)
    occs = find_occurrences(rest, t)
    tvars = free_vars(t)
    for p in occs:
        binders = binders_on_path(rest, p)
        if x in binders:
            raise KernelError(f"ClassInt: new variable {x!r} would be captured")
        if binders & tvars:
            raise KernelError("ClassInt: an occurrence of the term lies under a binder of its variables")
    sentinel = replace_paths(rest, {p: Const("\x00sentinel") for p in occs})
    if x in free_vars(sentinel):
        raise KernelError(f"ClassInt: {x!r} occurs free outside the occurrences of the term")
    body = replace_paths(rest, {p: Var(x) for p in occs})
    return Member(t, Extension(x, body)), ()


def _guard_predicate(ctx: _Ctx) -> str:
    guard = ctx.env.class_guard
    decl = ctx.env.signature.predicates.get(guard)
    if decl is None or decl[0] != 1:
        raise KernelError(f"class guard predicate {guard!r} is not declared with arity 1")
    return guard


@_rule("Identity", ("term", "term"))
def _r_identity(ctx: _Ctx, t):
    return Equal(t, t), ()


@_rule("Symmetry", ("eq", "line"))
def _r_symmetry(ctx: _Ctx, a: int):
    f = ctx.formula_of(a)
    if not isinstance(f, Equal):
        raise KernelError(f"line {a} is not an equation")
    return Equal(f.right, f.left), ()


@_rule("EqualitySub", ("a", "line"), ("eq", "line"), ("positions", "positions"))
def _r_equalitysub(ctx: _Ctx, a: int, e: int, positions: list[int]):
    f = ctx.formula_of(a)
    eq = ctx.formula_of(e)
    if not isinstance(eq, Equal):
        raise KernelError(f"line {e} is not an equation")
    t, s = eq.left, eq.right
    occs = find_occurrences(f, t)
    chosen = _select_positions(occs, positions, f"term {render(t, 'ascii')!r}")
    guard_vars = free_vars(t) | free_vars(s)
    for p in chosen:
        if binders_on_path(f, p) & guard_vars:
            raise KernelError("EqualitySub: replacement would capture or release bound variables")
    return replace_paths(f, {p: s for p in chosen}), ()


@_rule("PolySub", ("a", "line"), ("sovar", "name"), ("formula", "formula"))
def _r_polysub(ctx: _Ctx, a: int, name: str, b: Formula):
    f = ctx.formula_of(a)
    for h in ctx.live_hypotheses(a):
        if contains_sovar(h.formula, name):
            raise KernelError(
                f"PolySub: {name!r} occurs in undischarged hypothesis {h.pos}"
            )
    bvars = free_vars(b)
    for p in find_occurrences(f, SOVar(name)):
        if binders_on_path(f, p) & bvars:
            raise KernelError("PolySub: a free variable of the substituted formula would become bound")
    return syntax.replace_sovar(f, name, b), ()


@_rule("PredSub", ("a", "line"), ("pred", "name"), ("params", "names"), ("formula", "raw"), ("positions", "positions"))
def _r_predsub(ctx: _Ctx, a: int, pred: str, params: list[str], body_text: str, positions: list[int]):
    sig = ctx.env.signature
    decl = sig.predicates.get(pred)
    if decl is None:
        raise KernelError(f"predicate {pred!r} is not declared")
    if pred in ("Elem", "=") or ctx.env.definition_for(pred) is not None:
        raise KernelError("Predicate is defined.")
    if decl[0] != len(params):
        raise KernelError(f"predicate {pred!r} has arity {decl[0]}, got {len(params)} parameters")
    scope = _dc_replace(sig, variables=sig.variables | set(params))
    b = parse_formula(body_text, scope)
    f = ctx.formula_of(a)
    for h in ctx.live_hypotheses(a):
        if any(isinstance(s, PredApp) and s.name == pred for s in syntax.subexpressions(h.formula)):
            raise KernelError(f"PredSub: {pred!r} occurs in undischarged hypothesis {h.pos}")
    occs = [
        p
        for p, s in _walk_with_paths(f)
        if isinstance(s, PredApp) and s.name == pred
    ]
    if sorted(set(positions)) != list(range(len(occs))):
        raise KernelError(
            f"PredSub must replace every occurrence of {pred!r}: expected positions {list(range(len(occs)))}"
        )
    chosen = _select_positions(occs, positions, f"predicate {pred!r}")
    extra = free_vars(b) - set(params)
    replacements = {}
    for p in chosen:
        app = syntax.subexpr_at(f, p)
        if binders_on_path(f, p) & extra:
            raise KernelError("PredSub: a free variable of the substituted formula would become bound")
        replacements[p] = substitute_many(b, dict(zip(params, app.args)))
    return replace_paths(f, replacements), ()


def _walk_with_paths(e):
    out = []

    def walk(node, path):
        out.append((path, node))
        for i, c in enumerate(syntax.children(node)):
            walk(c, path + (i,))

    walk(e, ())
    return out


@_rule("AxInt", ("n", "int"))
def _r_axint(ctx: _Ctx, n: int):
    return _env_entry(ctx.env.axioms, n, "axiom"), ()


@_rule("TheoremInt", ("n", "int"))
def _r_theoremint(ctx: _Ctx, n: int):
    return _env_entry(ctx.env.theorems, n, "theorem"), ()


@_rule("DefEqInt", ("n", "int"))
def _r_defeqint(ctx: _Ctx, n: int):
    return _env_entry(ctx.env.def_equations, n, "defining equation"), ()


def _env_entry(entries: tuple, n: int, what: str):
    if n < 0 or n >= len(entries):
        raise KernelError(f"{what} index {n} out of range ({len(entries)} available)")
    return entries[n]


@_rule("DefExp", ("a", "line"), ("pred", "name"), ("positions", "positions"))
def _r_defexp(ctx: _Ctx, a: int, pred: str, positions: list[int]):
    defn = ctx.env.definition_for(pred)
    if defn is None:
        raise KernelError(f"predicate {pred!r} has no definition")
    f = ctx.formula_of(a)
    occs = [p for p, s in _walk_with_paths(f) if isinstance(s, PredApp) and s.name == pred]
    chosen = _select_positions(occs, positions, f"predicate {pred!r}")
    replacements = {}
    for p in chosen:
        app = syntax.subexpr_at(f, p)
        replacements[p] = substitute_many(defn.body, dict(zip(defn.params, app.args)))
    return replace_paths(f, replacements), ()


@_rule("DefSub", ("a", "line"), ("pred", "name"), ("args", "terms"), ("positions", "positions"))
def _r_defsub(ctx: _Ctx, a: int, pred: str, args: list, positions: list[int]):
    defn = ctx.env.definition_for(pred)
    if defn is None:
        raise KernelError(f"predicate {pred!r} has no definition")
    if len(args) != len(defn.params):
        raise KernelError(f"predicate {pred!r} has arity {len(defn.params)}, got {len(args)} arguments")
    f = ctx.formula_of(a)
    pattern = substitute_many(defn.body, dict(zip(defn.params, args)))
    occs = find_alpha_occurrences(f, pattern)
    chosen = _select_positions(occs, positions, f"instance of {pred!r}")
    return replace_paths(f, {p: PredApp(pred, tuple(args)) for p in chosen}), ()


@_rule("EquivConst", ("a", "line"))
def _r_equivconst(ctx: _Ctx, a: int):
    f = ctx.formula_of(a)
    if not (isinstance(f, And) and isinstance(f.left, Implies) and isinstance(f.right, Implies)):
        raise KernelError(f"line {a} is not a conjunction of two implications")
    if not (alpha_equal(f.left.left, f.right.right) and alpha_equal(f.left.right, f.right.left)):
        raise KernelError(f"the implications on line {a} are not mutually converse")
    return Equiv(f.left.left, f.left.right), ()


@_rule("EquivExp", ("a", "line"))
def _r_equivexp(ctx: _Ctx, a: int):
    f = ctx.formula_of(a)
    if not isinstance(f, Equiv):
        raise KernelError(f"line {a} is not an equivalence")
    return And(Implies(f.left, f.right), Implies(f.right, f.left)), ()


@_rule("EquivJoin", ("a", "line"), ("b", "line"), derived=True)
def _r_equivjoin(ctx: _Ctx, a: int, b: int):
    fa, fb = ctx.formula_of(a), ctx.formula_of(b)
    if not (isinstance(fa, Implies) and isinstance(fb, Implies)):
        raise KernelError("EquivJoin needs two implications")
    if not (alpha_equal(fa.left, fb.right) and alpha_equal(fa.right, fb.left)):
        raise KernelError("the implications are not mutually converse")
    return Equiv(fa.left, fa.right), ()


@_rule("EquivLeft", ("a", "line"), derived=True)
def _r_equivleft(ctx: _Ctx, a: int):
    f = ctx.formula_of(a)
    if not isinstance(f, Equiv):
        raise KernelError(f"line {a} is not an equivalence")
    return Implies(f.left, f.right), ()


@_rule("EquivRight", ("a", "line"), derived=True)
def _r_equivright(ctx: _Ctx, a: int):
    f = ctx.formula_of(a)
    if not isinstance(f, Equiv):
        raise KernelError(f"line {a} is not an equivalence")
    return Implies(f.right, f.left), ()


@_rule("FreeSub", ("a", "line"), ("var", "var"), ("term", "term"), derived=True)
def _r_freesub(ctx: _Ctx, a: int, y: str, t):
    # ForallInt over y followed by ForallElim at t, in one logged step.
    ctx.check_eigenvariable(y, a, "FreeSub")
    return substitute(ctx.formula_of(a), y, t), ()


@_rule("UniqueElim", ("a", "line"))
def _r_uniqueelim(ctx: _Ctx, a: int):
    f = ctx.formula_of(a)
    if not isinstance(f, UniqueExists):
        raise KernelError(f"line {a} is not a unique-existence formula")
    x, body = f.var, f.body
    w = fresh_name(x, free_vars(body) | {x})
    uniq = Forall(w, Implies(substitute(body, x, Var(w)), Equal(Var(w), Var(x))))
    return Exists(x, And(body, uniq)), ()


# ---------------------------------------------------------------------------
# Application, replay, theory checking


def parse_args(env: ProofEnvironment, proof: LinearProof, spec: RuleSpec, args: tuple) -> tuple[list, tuple[int, ...]]:
    """Type-check and parse raw invocation arguments; returns the parsed
    argument list and the parent indices (the 'line'-kind arguments)."""
    if len(args) != len(spec.params):
        names = ", ".join(n for n, _ in spec.params)
        raise KernelError(f"{spec.name} expects {len(spec.params)} argument(s) ({names}), got {len(args)}")
    parsed: list = []
    parents: list[int] = []
    for (pname, kind), raw in zip(spec.params, args):
        if kind in ("line", "discharge"):
            if isinstance(raw, bool) or not isinstance(raw, int):
                raise KernelError(f"{spec.name}: {pname} must be a line index")
            _check_index(proof, raw)
            if kind == "line":
                parents.append(raw)
            parsed.append(raw)
        elif kind == "int":
            if isinstance(raw, bool) or not isinstance(raw, int):
                raise KernelError(f"{spec.name}: {pname} must be an integer")
            parsed.append(raw)
        elif kind == "formula":
            if not isinstance(raw, str):
                raise KernelError(f"{spec.name}: {pname} must be a formula string")
            parsed.append(parse_formula(raw, env.signature))
        elif kind == "raw":
            if not isinstance(raw, str):
                raise KernelError(f"{spec.name}: {pname} must be a string")
            parsed.append(raw)
        elif kind == "term":
            if not isinstance(raw, str):
                raise KernelError(f"{spec.name}: {pname} must be a term string")
            parsed.append(parse_term(raw, env.signature))
        elif kind in ("var", "name"):
            if not isinstance(raw, str) or not raw:
                raise KernelError(f"{spec.name}: {pname} must be an identifier")
            parsed.append(raw)
        elif kind == "positions":
            if not isinstance(raw, (list, tuple)) or not all(
                isinstance(i, int) and not isinstance(i, bool) for i in raw
            ):
                raise KernelError(f"{spec.name}: {pname} must be a list of occurrence indices")
            parsed.append(list(raw))
        elif kind == "names":
            if isinstance(raw, str):
                raw = [raw]
            if not isinstance(raw, (list, tuple)) or not all(isinstance(s, str) for s in raw):
                raise KernelError(f"{spec.name}: {pname} must be a list of names")
            parsed.append(list(raw))
        elif kind == "terms":
            if isinstance(raw, str):
                raw = [raw]
            if not isinstance(raw, (list, tuple)) or not all(isinstance(s, str) for s in raw):
                raise KernelError(f"{spec.name}: {pname} must be a list of term strings")
            parsed.append([parse_term(s, env.signature) for s in raw])
        else:
            raise KernelError(f"internal: unknown parameter kind {kind!r}")
    return parsed, tuple(parents)


def apply_rule(env: ProofEnvironment, proof: LinearProof, inv: RuleInvocation) -> ProofElement:
    """Validate and apply one rule invocation, appending exactly one line."""
    spec = RULES.get(inv.name)
    if spec is None:
        raise KernelError(f"unknown rule {inv.name!r}")
    ctx = _Ctx(env, proof)
    parsed, parents = parse_args(env, proof, spec, inv.args)
    formula, discharges = spec.handler(ctx, *parsed)
    pos = len(proof.elements)
    element = ProofElement(formula=formula, rule=inv.name, parents=parents, parameters=inv.args, pos=pos)
    proof.elements.append(element)
    proof.log.append(inv)
    for h in discharges:
        proof.elements[h].discharged_by.append(pos)
    return element


def hyp(env: ProofEnvironment, proof: LinearProof, formula_text: str) -> ProofElement:
    return apply_rule(env, proof, RuleInvocation("Hyp", (formula_text,)))


def apply_entries(env: ProofEnvironment, entries: list[RuleInvocation]) -> LinearProof:
    """Apply log entries in order into a fresh proof.  Qed entries are
    accepted amid the rule entries: they mark lines and produce none."""
    proof = LinearProof()
    for i, inv in enumerate(entries):
        try:
            if inv.name == "Qed":
                if len(inv.args) != 1:
                    raise KernelError("Qed expects one line index")
                qed(proof, inv.args[0])
            else:
                apply_rule(env, proof, inv)
        except (KernelError, syntax.ParseError, syntax.LexError, syntax.PositionError) as exc:
            raise ReplayError(i, str(exc)) from exc
    return proof


def replay_log(env: ProofEnvironment, entries: list[RuleInvocation]) -> tuple[LinearProof, bool | None]:
    """Apply the entries in order; on success run qed on the last line and
    return the proof with the final verdict (None for an empty log)."""
    proof = apply_entries(env, entries)
    if not proof.elements:
        return proof, None
    return proof, qed(proof, len(proof.elements) - 1)


def used_theorems(proof: LinearProof) -> list[int]:
    return sorted({inv.args[0] for inv in proof.log if inv.name == "TheoremInt"})


@dataclass(frozen=True)
class TheoryItem:
    name: str
    status: str  # qed | failed | load-error
    detail: str = ""


@dataclass(frozen=True)
class TheoryReport:
    items: tuple[TheoryItem, ...]

    @property
    def ok(self) -> bool:
        return all(i.status == "qed" for i in self.items)


def check_theory(store: TheoremStore, names: list[str]) -> TheoryReport:
    """Regenerate each theorem from its log; success means a Qed final line."""
    items = []
    for name in names:
        try:
            doc = store.read(name)
            env = ProofEnvironment.from_json(doc)
            entries = [RuleInvocation.from_json(e) for e in doc["log"]]
            _, verdict = replay_log(env, entries)
        except (TheoremFileError, syntax.ParseError, syntax.LexError) as exc:
            items.append(TheoryItem(name, "load-error", str(exc)))
            continue
        except ReplayError as exc:
            items.append(TheoryItem(name, "failed", str(exc)))
            continue
        if verdict:
            items.append(TheoryItem(name, "qed"))
        else:
            items.append(TheoryItem(name, "failed", "final line is not Qed" if verdict is not None else "empty log"))
    return TheoryReport(tuple(items))


# ---------------------------------------------------------------------------
# Display


def format_line(proof: LinearProof, i: int, sig) -> str:
    e = proof.elements[i]
    parts = [f"{e.pos}.", strip_outer_parens(render(e.formula, "pretty", sig)), e.rule]
    if e.parents:
        parts.append(" ".join(str(p) for p in e.parents))
    if e.qed:
        parts.append("Qed")
    return " ".join(parts)


def format_proof(proof: LinearProof, sig) -> list[str]:
    return [format_line(proof, i, sig) for i in range(len(proof.elements))]


def rule_manifest() -> list[dict]:
    """Rule signatures for clients that build parameter forms."""
    out = []
    for spec in RULES.values():
        out.append(
            {
                "name": spec.name,
                "derived": spec.derived,
                "params": [{"name": n, "kind": k} for n, k in spec.params],
            }
        )
    return out
