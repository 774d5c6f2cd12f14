"""Seeded random expression generator for the property suites."""

from __future__ import annotations

import random
from types import SimpleNamespace

from ndkernel import syntax as S

GEN_SIG = SimpleNamespace(
    constants={"c", "k"},
    functions={"f": (1, "prefix"), "g": (2, "infix")},
    predicates={"Elem": (2, "prefix"), "=": (2, "infix"), "P": (1, "prefix"), "Q": (2, "infix")},
    variables={"u", "v", "w", "x", "y", "z"},
    pretty_map={},
)

_VARS = sorted(GEN_SIG.variables)
_SOVARS = ["A", "B", "C", "D"]


class ExprGen:
    def __init__(self, seed: int, sig=GEN_SIG) -> None:
        self.rng = random.Random(seed)
        self.sig = sig

    def term(self, depth: int) -> S.Term:
        r = self.rng
        if depth <= 0 or r.random() < 0.45:
            if r.random() < 0.7:
                return S.Var(r.choice(_VARS))
            return S.Const(r.choice(sorted(self.sig.constants)))
        kind = r.randrange(3)
        if kind == 0:
            return S.FunApp("f", (self.term(depth - 1),))
        if kind == 1:
            return S.FunApp("g", (self.term(depth - 1), self.term(depth - 1)))
        return S.Extension(r.choice(_VARS), self.formula(depth - 1))

    def atom(self, depth: int) -> S.Formula:
        r = self.rng
        kind = r.randrange(6)
        if kind == 0:
            return S.SOVar(r.choice(_SOVARS))
        if kind == 1:
            return S.BOTTOM
        if kind == 2:
            return S.PredApp("P", (self.term(depth),))
        if kind == 3:
            return S.PredApp("Q", (self.term(depth), self.term(depth)))
        if kind == 4:
            return S.Equal(self.term(depth), self.term(depth))
        return S.Member(self.term(depth), self.term(depth))

    def formula(self, depth: int) -> S.Formula:
        r = self.rng
        if depth <= 0 or r.random() < 0.3:
            return self.atom(max(depth - 1, 0))
        kind = r.randrange(8)
        if kind < 4:
            cls = (S.And, S.Or, S.Implies, S.Equiv)[kind]
            return cls(self.formula(depth - 1), self.formula(depth - 1))
        if kind == 4:
            return S.Implies(self.formula(depth - 1), S.BOTTOM)
        cls = (S.Forall, S.Exists, S.UniqueExists)[kind - 5]
        return cls(self.rng.choice(_VARS), self.formula(depth - 1))
