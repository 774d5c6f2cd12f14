"""Proof environments: signatures, axioms, assumed theorems, defining
equations, predicate definitions, pretty maps, and theorem persistence.

Environments are values: every operation returns an updated copy, so a
session can keep the previous state on failure and snapshots are safe to
share across threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

from . import syntax
from .syntax import (
    Const,
    Equal,
    Formula,
    FunApp,
    Var,
    alpha_equal,
    free_vars,
    parse_formula,
    render,
)


class EnvironmentError_(ValueError):
    pass


class TheoremFileError(ValueError):
    pass


FORMAT = "ndkernel-theorem/1"


@dataclass(frozen=True)
class Signature:
    """Declared symbols.  Functions and predicates map to (arity, fixity);
    prettyMap holds display templates with %0.. placeholders (a plain string
    just renames the symbol)."""

    constants: frozenset[str] = frozenset()
    functions: dict[str, tuple[int, str]] = field(default_factory=dict)
    predicates: dict[str, tuple[int, str]] = field(default_factory=dict)
    variables: frozenset[str] = frozenset()
    pretty_map: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        preds = dict(self.predicates)
        preds.setdefault("Elem", (2, "prefix"))
        preds.setdefault("=", (2, "infix"))
        object.__setattr__(self, "predicates", preds)

    def _taken(self, name: str) -> str | None:
        if name in self.constants:
            return "constant"
        if name in self.functions:
            return "function"
        if name in self.predicates:
            return "predicate"
        if name in self.variables:
            return "variable"
        return None

    def declare(self, kind: str, name: str, arity: int | None = None, fixity: str = "prefix") -> "Signature":
        taken = self._taken(name)
        if taken is not None:
            raise EnvironmentError_(f"{name!r} is already declared as a {taken}")
        if kind in ("function", "predicate"):
            if arity is None or arity < 1:
                raise EnvironmentError_(f"{kind} {name!r} needs an arity >= 1")
            if fixity not in ("prefix", "infix"):
                raise EnvironmentError_(f"unknown fixity {fixity!r}")
            if fixity == "infix" and arity != 2:
                raise EnvironmentError_("infix notation requires arity 2")
            entry = {name: (arity, fixity)}
            if kind == "function":
                return replace(self, functions={**self.functions, **entry})
            return replace(self, predicates={**self.predicates, **entry})
        if kind == "constant":
            return replace(self, constants=self.constants | {name})
        if kind == "variable":
            return replace(self, variables=self.variables | {name})
        raise EnvironmentError_(f"unknown declaration kind {kind!r}")

    def with_pretty(self, name: str, template: str) -> "Signature":
        return replace(self, pretty_map={**self.pretty_map, name: template})

    def to_json(self) -> dict:
        return {
            "constants": sorted(self.constants),
            "functions": {n: {"arity": a, "fixity": f} for n, (a, f) in sorted(self.functions.items())},
            "predicates": {n: {"arity": a, "fixity": f} for n, (a, f) in sorted(self.predicates.items())},
            "variables": sorted(self.variables),
            "prettyMap": dict(sorted(self.pretty_map.items())),
        }

    @classmethod
    def from_json(cls, data: dict) -> "Signature":
        return cls(
            constants=frozenset(data.get("constants", ())),
            functions={n: (d["arity"], d["fixity"]) for n, d in data.get("functions", {}).items()},
            predicates={n: (d["arity"], d["fixity"]) for n, d in data.get("predicates", {}).items()},
            variables=frozenset(data.get("variables", ())),
            pretty_map=dict(data.get("prettyMap", {})),
        )


@dataclass(frozen=True)
class PredicateDefinition:
    name: str
    params: tuple[str, ...]
    body: Formula


@dataclass(frozen=True)
class ProofEnvironment:
    name: str = "default"
    signature: Signature = field(default_factory=Signature)
    axioms: tuple[Formula, ...] = ()
    theorems: tuple[Formula, ...] = ()
    def_equations: tuple[Formula, ...] = ()
    definitions: tuple[PredicateDefinition, ...] = ()
    class_guard: str = "Set"

    @classmethod
    def default(cls) -> "ProofEnvironment":
        """Base environment: Elem and = plus the single Set(x) definition."""
        sig = Signature(variables=frozenset("uvwxyz")).declare("predicate", "Set", 1)
        env = cls(signature=sig)
        return env.new_def("Set", ["x"], "exists y. Elem(x,y)")

    # -- signature updates ---------------------------------------------------

    def declare(self, kind: str, name: str, arity: int | None = None, fixity: str = "prefix") -> "ProofEnvironment":
        return replace(self, signature=self.signature.declare(kind, name, arity, fixity))

    def set_pretty(self, name: str, template: str) -> "ProofEnvironment":
        return replace(self, signature=self.signature.with_pretty(name, template))

    def definition_for(self, name: str) -> PredicateDefinition | None:
        for d in self.definitions:
            if d.name == name:
                return d
        return None

    # -- content updates -----------------------------------------------------

    def new_def(self, pred_name: str, params: list[str] | tuple[str, ...], body_text: str) -> "ProofEnvironment":
        decl = self.signature.predicates.get(pred_name)
        if decl is None:
            raise EnvironmentError_(f"predicate {pred_name!r} is not declared")
        if decl[0] != len(params):
            raise EnvironmentError_(
                f"predicate {pred_name!r} has arity {decl[0]}, got {len(params)} parameters"
            )
        if self.definition_for(pred_name) is not None:
            raise EnvironmentError_(f"predicate {pred_name!r} is already defined")
        scope = replace(self.signature, variables=self.signature.variables | set(params))
        body = parse_formula(body_text, scope)
        leaked = free_vars(body) - set(params)
        if leaked:
            raise EnvironmentError_(f"definition body leaks free variables {sorted(leaked)}")
        defn = PredicateDefinition(pred_name, tuple(params), body)
        return replace(self, definitions=self.definitions + (defn,))

    def new_def_eq(self, equation_text: str) -> "ProofEnvironment":
        eq = parse_formula(equation_text, self.signature)
        if not isinstance(eq, Equal):
            raise EnvironmentError_("a defining equation must have '=' at the root")
        head = eq.left
        if isinstance(head, Const):
            params: set[str] = set()
        elif isinstance(head, FunApp):
            if not all(isinstance(a, Var) for a in head.args) or len(set(head.args)) != len(head.args):
                raise EnvironmentError_("defining equation head must apply the symbol to distinct variables")
            params = {a.name for a in head.args}
        else:
            raise EnvironmentError_("defining equation head must be a constant or a function application")
        leaked = free_vars(eq.right) - params
        if leaked:
            raise EnvironmentError_(f"defining equation leaks free variables {sorted(leaked)}")
        return replace(self, def_equations=self.def_equations + (eq,))

    def add_axiom(self, text: str) -> "ProofEnvironment":
        return replace(self, axioms=self.axioms + (parse_formula(text, self.signature),))

    def add_theorem(self, f: str | Formula) -> "ProofEnvironment":
        if isinstance(f, str):
            f = parse_formula(f, self.signature)
        return replace(self, theorems=self.theorems + (f,))

    # -- comparison ----------------------------------------------------------

    def matches(self, other: "ProofEnvironment") -> bool:
        """Same axioms, defining equations, definitions and signature, up to
        alpha-equality and ordering.  Assumed theorems and pretty strings do
        not participate."""
        if (
            self.signature.constants != other.signature.constants
            or self.signature.functions != other.signature.functions
            or self.signature.predicates != other.signature.predicates
            or self.signature.variables != other.signature.variables
        ):
            return False
        if len(self.axioms) != len(other.axioms) or len(self.def_equations) != len(other.def_equations):
            return False
        if not all(alpha_equal(a, b) for a, b in zip(self.axioms, other.axioms)):
            return False
        if not all(alpha_equal(a, b) for a, b in zip(self.def_equations, other.def_equations)):
            return False
        if len(self.definitions) != len(other.definitions):
            return False
        for d, e in zip(self.definitions, other.definitions):
            if d.name != e.name or d.params != e.params or not alpha_equal(d.body, e.body):
                return False
        return self.class_guard == other.class_guard

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "signature": self.signature.to_json(),
            "axioms": [render(a, "ascii") for a in self.axioms],
            "theorems": [render(t, "ascii") for t in self.theorems],
            "defEquations": [render(e, "ascii") for e in self.def_equations],
            "definitions": [
                {"name": d.name, "params": list(d.params), "body": render(d.body, "ascii")}
                for d in self.definitions
            ],
            "classGuard": self.class_guard,
        }

    @classmethod
    def from_json(cls, data: dict) -> "ProofEnvironment":
        sig = Signature.from_json(data["signature"])
        def parse(t: str) -> Formula:
            return parse_formula(t, sig)
        definitions = []
        for d in data.get("definitions", ()):
            scope = replace(sig, variables=sig.variables | set(d["params"]))
            definitions.append(PredicateDefinition(d["name"], tuple(d["params"]), parse_formula(d["body"], scope)))
        return cls(
            name=data.get("name", "unnamed"),
            signature=sig,
            axioms=tuple(parse(t) for t in data.get("axioms", ())),
            theorems=tuple(parse(t) for t in data.get("theorems", ())),
            def_equations=tuple(parse(t) for t in data.get("defEquations", ())),
            definitions=tuple(definitions),
            class_guard=data.get("classGuard", "Set"),
        )


def is_validity(f: Formula) -> bool:
    """True when the formula's atoms are exclusively second-order variables
    and bottom (a logical validity candidate, portable across environments)."""
    match f:
        case syntax.SOVar() | syntax.Bottom():
            return True
        case syntax.And() | syntax.Or() | syntax.Implies() | syntax.Equiv():
            return is_validity(f.left) and is_validity(f.right)
        case _:
            return False


# ---------------------------------------------------------------------------
# Theorem files


def theorem_document(env: ProofEnvironment, log: list[dict], conclusion: Formula | None) -> dict:
    doc = {"format": FORMAT}
    doc.update(env.to_json())
    doc["log"] = log
    doc["conclusion"] = render(conclusion, "ascii") if conclusion is not None else None
    return doc


def dump_document(doc: dict) -> str:
    return json.dumps(doc, ensure_ascii=False, sort_keys=True, indent=1) + "\n"


class TheoremStore:
    """A theory is a directory of theorem files; an empty file (log = [])
    holds just the environment."""

    def __init__(self, search_paths: list[str | Path]) -> None:
        self.search_paths = [Path(p) for p in search_paths]

    def path_for(self, name: str) -> Path:
        for base in self.search_paths:
            p = base / f"{name}.json"
            if p.exists():
                return p
        raise TheoremFileError(f"no theorem file named {name!r} in {[str(p) for p in self.search_paths]}")

    def read(self, name: str) -> dict:
        p = self.path_for(name)
        try:
            doc = json.loads(p.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise TheoremFileError(f"{p}: not valid JSON ({exc})") from exc
        validate_document(doc, str(p))
        return doc

    def write(self, name: str, doc: dict) -> Path:
        base = self.search_paths[0]
        base.mkdir(parents=True, exist_ok=True)
        p = base / f"{name}.json"
        p.write_text(dump_document(doc), encoding="utf-8")
        return p

    def names(self) -> list[str]:
        seen = []
        for base in self.search_paths:
            if base.is_dir():
                for p in sorted(base.glob("*.json")):
                    if p.stem not in seen:
                        seen.append(p.stem)
        return seen


def validate_document(doc: dict, origin: str = "<document>") -> None:
    if not isinstance(doc, dict):
        raise TheoremFileError(f"{origin}: theorem file must be a JSON object")
    if doc.get("format") != FORMAT:
        raise TheoremFileError(f"{origin}: unsupported format {doc.get('format')!r} (want {FORMAT!r})")
    for key in (
        "name", "signature", "axioms", "theorems", "defEquations",
        "definitions", "classGuard", "log", "conclusion",
    ):
        if key not in doc:
            raise TheoremFileError(f"{origin}: missing field {key!r}")
    for entry in doc["log"]:
        if not isinstance(entry, dict) or "rule" not in entry or "args" not in entry:
            raise TheoremFileError(f"{origin}: malformed log entry {entry!r}")
