"""Expression language: terms and formulas, tokenizer, parser, printers,
free variables, capture-avoiding substitution, alpha-equivalence and
positional occurrence editing.

Terms and formulas are immutable trees.  Negation is not a node: ``neg A``
parses to ``Implies(A, Bottom)`` and only the pretty printer shows it as
``¬A``.  Identifiers used in formula position that are not declared
predicates parse as second-order variables.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from types import SimpleNamespace
from typing import Iterator, Sequence


class LexError(ValueError):
    """Character outside the token alphabet, with its offset."""


class ParseError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Tree nodes


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class FunApp:
    name: str
    args: tuple


@dataclass(frozen=True)
class Extension:
    """Class term {x: A}."""

    var: str
    body: "Formula"


@dataclass(frozen=True)
class PredApp:
    name: str
    args: tuple


@dataclass(frozen=True)
class Equal:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Member:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class SOVar:
    """Second-order (propositional) variable; no free first-order variables."""

    name: str


@dataclass(frozen=True)
class Bottom:
    pass


BOTTOM = Bottom()


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Equiv:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class UniqueExists:
    """Unique existence, written ``exists1 x. A``."""

    var: str
    body: "Formula"


Term = Const | Var | FunApp | Extension
Formula = (
    PredApp | Equal | Member | SOVar | Bottom | And | Or | Implies | Equiv
    | Forall | Exists | UniqueExists
)
Expr = Term | Formula

_BINOPS = {And: "&", Or: "v", Implies: "->", Equiv: "<->"}
_QUANTS = {Forall: "forall", Exists: "exists", UniqueExists: "exists1"}


def is_term(e: Expr) -> bool:
    return isinstance(e, (Const, Var, FunApp, Extension))


def is_formula(e: Expr) -> bool:
    return not is_term(e)


def is_negation(e: Expr) -> bool:
    return isinstance(e, Implies) and e.right == BOTTOM


def children(e: Expr) -> tuple:
    match e:
        case FunApp(_, args) | PredApp(_, args):
            return args
        case Extension(_, b) | Forall(_, b) | Exists(_, b) | UniqueExists(_, b):
            return (b,)
        case Equal(l, r) | Member(l, r) | And(l, r) | Or(l, r) | Implies(l, r) | Equiv(l, r):
            return (l, r)
        case _:
            return ()


def rebuild(e: Expr, kids: Sequence[Expr]) -> Expr:
    match e:
        case FunApp(name, _):
            return FunApp(name, tuple(kids))
        case PredApp(name, _):
            return PredApp(name, tuple(kids))
        case Extension(v, _):
            return Extension(v, kids[0])
        case Forall(v, _):
            return Forall(v, kids[0])
        case Exists(v, _):
            return Exists(v, kids[0])
        case UniqueExists(v, _):
            return UniqueExists(v, kids[0])
        case Equal():
            return Equal(kids[0], kids[1])
        case Member():
            return Member(kids[0], kids[1])
        case And():
            return And(kids[0], kids[1])
        case Or():
            return Or(kids[0], kids[1])
        case Implies():
            return Implies(kids[0], kids[1])
        case Equiv():
            return Equiv(kids[0], kids[1])
        case _:
            return e


def binder_var(e: Expr) -> str | None:
    if isinstance(e, (Extension, Forall, Exists, UniqueExists)):
        return e.var
    return None


def subexpressions(e: Expr) -> Iterator[Expr]:
    """Preorder (leftmost-outermost first) traversal."""
    yield e
    for c in children(e):
        yield from subexpressions(c)


# ---------------------------------------------------------------------------
# Free variables, substitution, alpha-equivalence


def free_vars(e: Expr) -> frozenset[str]:
    match e:
        case Var(x):
            return frozenset((x,))
        case Const() | SOVar() | Bottom():
            return frozenset()
        case Extension(x, b) | Forall(x, b) | Exists(x, b) | UniqueExists(x, b):
            return free_vars(b) - {x}
        case _:
            out: frozenset[str] = frozenset()
            for c in children(e):
                out |= free_vars(c)
            return out


def fresh_name(base: str, avoid: set[str] | frozenset[str]) -> str:
    """Smallest numeric suffix not in use: x -> x0, x1, ..."""
    i = 0
    while f"{base}{i}" in avoid:
        i += 1
    return f"{base}{i}"


def substitute(e: Expr, var: str, term: Term) -> Expr:
    return substitute_many(e, {var: term})


def substitute_many(e: Expr, subs: dict[str, Term]) -> Expr:
    """Simultaneous capture-avoiding substitution of terms for variables."""
    if not subs:
        return e
    match e:
        case Var(x):
            return subs.get(x, e)
        case Const() | SOVar() | Bottom():
            return e
        case Extension(x, b) | Forall(x, b) | Exists(x, b) | UniqueExists(x, b):
            live = {v: t for v, t in subs.items() if v != x and v in free_vars(b)}
            if not live:
                return e
            clash = set().union(*(free_vars(t) for t in live.values()))
            if x in clash:
                x2 = fresh_name(x, set(clash) | free_vars(b) | set(live))
                b = substitute_many(b, {x: Var(x2)})
                x = x2
            return type(e)(x, substitute_many(b, live))
        case _:
            kids = children(e)
            if not kids:
                return e
            return rebuild(e, tuple(substitute_many(c, subs) for c in kids))


def replace_sovar(e: Expr, name: str, f: Formula) -> Expr:
    """Replace every occurrence of the second-order variable by a formula."""
    if isinstance(e, SOVar) and e.name == name:
        return f
    kids = children(e)
    if not kids:
        return e
    return rebuild(e, tuple(replace_sovar(c, name, f) for c in kids))


def contains_sovar(e: Expr, name: str) -> bool:
    return any(isinstance(s, SOVar) and s.name == name for s in subexpressions(e))


def alpha_equal(a: Expr, b: Expr) -> bool:
    return _alpha(a, b, {}, {}, 0)


def _alpha(a: Expr, b: Expr, ea: dict, eb: dict, depth: int) -> bool:
    if type(a) is not type(b):
        return False
    match a:
        case Var(x):
            return ea.get(x, ("f", x)) == eb.get(b.name, ("f", b.name))
        case Const(x) | SOVar(x) | PredApp(x, _) | FunApp(x, _):
            if x != getattr(b, "name"):
                return False
        case Bottom():
            return True
    va, vb = binder_var(a), binder_var(b)
    if va is not None:
        ea = {**ea, va: ("b", depth)}
        eb = {**eb, vb: ("b", depth)}
        depth += 1
    ca, cb = children(a), children(b)
    if len(ca) != len(cb):
        return False
    return all(_alpha(x, y, ea, eb, depth) for x, y in zip(ca, cb))


# ---------------------------------------------------------------------------
# Occurrences and positional replacement

Path = tuple[int, ...]


class PositionError(ValueError):
    pass


def find_occurrences(e: Expr, target: Expr) -> list[Path]:
    """Preorder paths of all subexpressions syntactically equal to target."""
    out: list[Path] = []

    def walk(node: Expr, path: Path) -> None:
        if node == target:
            out.append(path)
        for i, c in enumerate(children(node)):
            walk(c, path + (i,))

    walk(e, ())
    return out


def find_alpha_occurrences(e: Expr, target: Expr) -> list[Path]:
    """Like find_occurrences but matching up to alpha-equivalence."""
    out: list[Path] = []

    def walk(node: Expr, path: Path) -> None:
        if type(node) is type(target) and alpha_equal(node, target):
            out.append(path)
        for i, c in enumerate(children(node)):
            walk(c, path + (i,))

    walk(e, ())
    return out


def binders_on_path(e: Expr, path: Path) -> set[str]:
    seen: set[str] = set()
    node = e
    for i in path:
        v = binder_var(node)
        if v is not None:
            seen.add(v)
        node = children(node)[i]
    return seen


def subexpr_at(e: Expr, path: Path) -> Expr:
    node = e
    for i in path:
        node = children(node)[i]
    return node


def replace_paths(e: Expr, replacements: dict[Path, Expr]) -> Expr:
    """Replace the subexpressions at the given paths; replaced subtrees are
    not descended into."""

    def walk(node: Expr, path: Path) -> Expr:
        if path in replacements:
            return replacements[path]
        kids = children(node)
        if not kids:
            return node
        return rebuild(node, tuple(walk(c, path + (i,)) for i, c in enumerate(kids)))

    return walk(e, ())


def replace_at(e: Expr, target: Expr, replacement: Expr, positions: Sequence[int]) -> Expr:
    """Replace exactly the indexed occurrences (preorder numbering) of target."""
    if is_term(target) != is_term(replacement):
        raise PositionError("replacement is not of the same syntactic category as target")
    occs = find_occurrences(e, target)
    chosen = _select(occs, positions)
    return replace_paths(e, {p: replacement for p in chosen})


def _select(occs: list[Path], positions: Sequence[int]) -> list[Path]:
    chosen = []
    for i in positions:
        if not isinstance(i, int) or i < 0 or i >= len(occs):
            raise PositionError(f"occurrence index {i} out of range (found {len(occs)})")
        chosen.append(occs[i])
    return chosen


# ---------------------------------------------------------------------------
# Tokenizer

_IDENT = re.compile(r"[A-Za-z0-9][A-Za-z0-9_]*")
_PUNCT = ("<->", "->", "_|_", "(", ")", ",", ".", "=", "&")


@dataclass(frozen=True)
class Token:
    kind: str  # 'ident' or one of the punctuation strings
    value: str
    pos: int


def tokenize(text: str) -> list[Token]:
    out: list[Token] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        for p in _PUNCT:
            if text.startswith(p, i):
                out.append(Token(p, p, i))
                i += len(p)
                break
        else:
            m = _IDENT.match(text, i)
            if m:
                out.append(Token("ident", m.group(), i))
                i = m.end()
            else:
                raise LexError(f"unexpected character {ch!r} at offset {i}")
    return out


# ---------------------------------------------------------------------------
# Parser

EMPTY_SIGNATURE = SimpleNamespace(
    constants=set(), functions={}, predicates={"Elem": (2, "prefix"), "=": (2, "infix")},
    variables=set(), pretty_map={},
)

_KEYWORDS = {"neg", "forall", "exists", "exists1", "extension", "v"}


class _Parser:
    def __init__(self, tokens: list[Token], sig) -> None:
        self.toks = tokens
        self.sig = sig
        self.i = 0
        self.bound: list[str] = []

    def peek(self) -> Token | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self, expect: str | None = None) -> Token:
        t = self.peek()
        if t is None:
            raise ParseError("unexpected end of input" + (f", expected {expect!r}" if expect else ""))
        if expect is not None and t.kind != expect and t.value != expect:
            raise ParseError(f"expected {expect!r} but found {t.value!r} at offset {t.pos}")
        self.i += 1
        return t

    def at_ident(self, word: str | None = None) -> bool:
        t = self.peek()
        return t is not None and t.kind == "ident" and (word is None or t.value == word)

    # symbol classification (lexical scope shadows the signature)
    def is_variable(self, name: str) -> bool:
        return name in self.bound or name in self.sig.variables

    def check_binder_name(self, name: str) -> str:
        if name in self.sig.constants or name in self.sig.functions or name in self.sig.predicates:
            raise ParseError(f"cannot bind declared symbol {name!r}")
        return name

    def parse_formula(self) -> Formula:
        t = self.peek()
        if t is None:
            raise ParseError("expected a formula, found end of input")
        if t.kind == "_|_":
            self.next()
            return BOTTOM
        if t.kind == "(":
            return self.parse_group()
        if self.at_ident("neg"):
            self.next()
            return Implies(self.parse_formula(), BOTTOM)
        if t.kind == "ident" and t.value in ("forall", "exists", "exists1"):
            self.next()
            v = self.check_binder_name(self.next("ident").value)
            self.next(".")
            self.bound.append(v)
            body = self.parse_formula()
            self.bound.pop()
            cls = {"forall": Forall, "exists": Exists, "exists1": UniqueExists}[t.value]
            return cls(v, body)
        if t.kind == "ident":
            name = t.value
            if name in self.sig.predicates and name != "=":
                self.next()
                args = self.parse_arglist()
                arity = self.sig.predicates[name][0]
                if len(args) != arity:
                    raise ParseError(f"predicate {name!r} expects {arity} arguments, got {len(args)}")
                if name == "Elem":
                    return Member(args[0], args[1])
                return PredApp(name, tuple(args))
            if (
                self.is_variable(name)
                or name in self.sig.constants
                or name in self.sig.functions
                or name == "extension"
            ):
                left = self.parse_term()
                self.next("=")
                return Equal(left, self.parse_term())
            # fall back: an undeclared identifier in formula position
            self.next()
            nxt = self.peek()
            if nxt is not None and nxt.kind == "(":
                raise ParseError(f"undeclared predicate {name!r} at offset {t.pos}")
            return SOVar(name)
        raise ParseError(f"expected a formula but found {t.value!r} at offset {t.pos}")

    def parse_group(self) -> Formula:
        """Parenthesized formula: redundant parens or a right-grouped
        homogeneous chain of one binary connective."""
        self.next("(")
        parts = [self.parse_formula()]
        op: str | None = None
        while True:
            t = self.peek()
            if t is None:
                raise ParseError("unbalanced parenthesis: expected ')'")
            cur = t.value if (t.kind != "ident" or t.value == "v") else None
            if t.kind == ")":
                self.next()
                break
            if cur in ("&", "v", "->", "<->"):
                if op is None:
                    op = cur
                elif cur != op:
                    raise ParseError(f"mixed operators {op!r} and {cur!r} need parentheses (offset {t.pos})")
                if cur in ("->", "<->") and len(parts) == 2:
                    raise ParseError(f"chained {cur!r} needs parentheses (offset {t.pos})")
                self.next()
                parts.append(self.parse_formula())
            else:
                raise ParseError(f"expected a connective or ')' but found {t.value!r} at offset {t.pos}")
        if op is None:
            return parts[0]
        cls = {"&": And, "v": Or, "->": Implies, "<->": Equiv}[op]
        out = parts[-1]
        for p in reversed(parts[:-1]):
            out = cls(p, out)
        return out

    def parse_term(self) -> Term:
        t = self.peek()
        if t is None:
            raise ParseError("expected a term, found end of input")
        if t.kind == "(":
            self.next()
            inner = self.parse_term()
            self.next(")")
            return inner
        if self.at_ident("extension"):
            self.next()
            v = self.check_binder_name(self.next("ident").value)
            self.next(".")
            self.bound.append(v)
            body = self.parse_formula()
            self.bound.pop()
            return Extension(v, body)
        if t.kind != "ident":
            raise ParseError(f"expected a term but found {t.value!r} at offset {t.pos}")
        name = self.next().value
        if name in self.sig.functions:
            args = self.parse_arglist()
            arity = self.sig.functions[name][0]
            if len(args) != arity:
                raise ParseError(f"function {name!r} expects {arity} arguments, got {len(args)}")
            return FunApp(name, tuple(args))
        if self.is_variable(name):
            return Var(name)
        if name in self.sig.constants:
            return Const(name)
        raise ParseError(f"unknown term symbol {name!r} at offset {t.pos}")

    def parse_arglist(self) -> list[Term]:
        self.next("(")
        args = [self.parse_term()]
        while self.peek() is not None and self.peek().kind == ",":
            self.next()
            args.append(self.parse_term())
        self.next(")")
        return args


def parse_formula(source: str | list[Token], sig=None) -> Formula:
    toks = tokenize(source) if isinstance(source, str) else source
    p = _Parser(toks, sig or EMPTY_SIGNATURE)
    f = p.parse_formula()
    if p.peek() is not None:
        t = p.peek()
        raise ParseError(f"trailing input {t.value!r} at offset {t.pos}")
    return f


def parse_term(source: str | list[Token], sig=None) -> Term:
    toks = tokenize(source) if isinstance(source, str) else source
    p = _Parser(toks, sig or EMPTY_SIGNATURE)
    t = p.parse_term()
    if p.peek() is not None:
        tok = p.peek()
        raise ParseError(f"trailing input {tok.value!r} at offset {tok.pos}")
    return t


# ---------------------------------------------------------------------------
# Rendering

_TEMPLATE_ARG = re.compile(r"%(\d)")


def _apply_template(tpl: str, args: Sequence[str]) -> str:
    return _TEMPLATE_ARG.sub(lambda m: args[int(m.group(1))], tpl)


def render(e: Expr, mode: str = "pretty", sig=None) -> str:
    """Render an expression.  ``ascii`` output round-trips through the
    parser; ``pretty`` follows the display conventions (¬ sugar, per-symbol
    templates from the signature's pretty map)."""
    sig = sig or EMPTY_SIGNATURE
    if mode == "ascii":
        return _ascii(e)
    if mode == "pretty":
        return _pretty(e, sig)
    raise ValueError(f"unknown render mode {mode!r}")


def _ascii(e: Expr) -> str:
    match e:
        case Const(x) | Var(x) | SOVar(x):
            return x
        case Bottom():
            return "_|_"
        case FunApp(f, args):
            return f"{f}({','.join(_ascii(a) for a in args)})"
        case Extension(x, b):
            return f"extension {x}. {_ascii(b)}"
        case Member(l, r):
            return f"Elem({_ascii(l)},{_ascii(r)})"
        case PredApp(p, args):
            return f"{p}({','.join(_ascii(a) for a in args)})"
        case Equal(l, r):
            return f"({_ascii(l)} = {_ascii(r)})"
        case Implies(l, r) if r == BOTTOM:
            return f"neg {_ascii(l)}"
        case And(l, r) | Or(l, r) | Implies(l, r) | Equiv(l, r):
            return f"({_ascii(l)} {_BINOPS[type(e)]} {_ascii(r)})"
        case Forall(x, b) | Exists(x, b) | UniqueExists(x, b):
            return f"{_QUANTS[type(e)]} {x}. {_ascii(b)}"
    raise TypeError(f"not an expression: {e!r}")


_PRETTY_QUANTS = {Forall: "∀", Exists: "∃", UniqueExists: "∃¹"}


def _pretty(e: Expr, sig) -> str:
    pm = sig.pretty_map

    def sym(name: str, args: Sequence[str], table: dict) -> str:
        tpl = pm.get(name)
        if tpl is not None and "%" in tpl:
            return _apply_template(tpl, args)
        shown = tpl if tpl is not None else name
        if not args:
            return shown
        fixity = table.get(name, (len(args), "prefix"))[1]
        if fixity == "infix" and len(args) == 2:
            return f"({args[0]} {shown} {args[1]})"
        return f"{shown}({','.join(args)})"

    match e:
        case Const(x):
            return sym(x, (), {})
        case Var(x) | SOVar(x):
            return x
        case Bottom():
            return "_|_"
        case FunApp(f, args):
            return sym(f, [_pretty(a, sig) for a in args], sig.functions)
        case Extension(x, b):
            return f"{{{x}: {_pretty(b, sig)}}}"
        case Member(l, r):
            tpl = pm.get("Elem", "(%0 ε %1)")
            return _apply_template(tpl, [_pretty(l, sig), _pretty(r, sig)])
        case PredApp(p, args):
            return sym(p, [_pretty(a, sig) for a in args], sig.predicates)
        case Equal(l, r):
            return f"({_pretty(l, sig)} = {_pretty(r, sig)})"
        case Implies(l, r) if r == BOTTOM:
            return f"¬{_pretty(l, sig)}"
        case And(l, r) | Or(l, r) | Implies(l, r) | Equiv(l, r):
            return f"({_pretty(l, sig)} {_BINOPS[type(e)]} {_pretty(r, sig)})"
        case Forall(x, b) | Exists(x, b) | UniqueExists(x, b):
            return f"{_PRETTY_QUANTS[type(e)]}{x}.{_pretty(b, sig)}"
    raise TypeError(f"not an expression: {e!r}")


def display(e: Expr, sig=None) -> str:
    """Pretty rendering with the exterior parenthesis pair stripped."""
    return strip_outer_parens(render(e, "pretty", sig))


def strip_outer_parens(s: str) -> str:
    if not (s.startswith("(") and s.endswith(")")):
        return s
    depth = 0
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth == 0 and i < len(s) - 1:
                return s
    return s[1:-1]
