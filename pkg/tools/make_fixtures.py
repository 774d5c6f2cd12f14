#!/usr/bin/env python3
"""Regenerate the bundled theory fixtures.

Builds each proof environment programmatically, replays the golden logs
from tests/goldens.py, asserts the rendered lines and Qed marks, and
writes canonical theorem files into src/ndkernel/theories/.
"""

from __future__ import annotations

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))
sys.path.insert(0, str(ROOT / "tests"))

import goldens
from ndkernel.environment import ProofEnvironment, Signature, dump_document, theorem_document
from ndkernel.kernel import apply_entries, qed
from ndkernel.syntax import display

THEORIES = ROOT / "src" / "ndkernel" / "theories"


def build(env, raw_log, qeds, expected=None, name=""):
    entries = goldens.invocations(raw_log)
    proof = apply_entries(env, entries)
    sig = env.signature
    if expected is not None:
        assert len(proof.elements) == len(expected), f"{name}: {len(proof.elements)} lines, want {len(expected)}"
        for i, want in enumerate(expected):
            if want is None:
                continue
            got = display(proof.elements[i].formula, sig)
            assert got == want, f"{name} line {i}:\n  got  {got}\n  want {want}"
    for n in qeds:
        assert qed(proof, n), f"{name}: line {n} fails Qed"
    log = [e.to_json() for e in entries]
    log.extend({"rule": "Qed", "args": [n]} for n in qeds)
    conclusion = proof.elements[-1].formula if proof.elements else None
    return theorem_document(env, log, conclusion)


def write(theory: str, name: str, doc: dict) -> None:
    doc["name"] = name
    out = THEORIES / theory / f"{name}.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(dump_document(doc), encoding="utf-8")
    print(f"wrote {out.relative_to(ROOT)}")


# ---------------------------------------------------------------------------
# Environments


def kelley_morse_env() -> ProofEnvironment:
    env = ProofEnvironment.default()
    env = ProofEnvironment(
        name="Kelley-Morse",
        signature=env.signature,
        definitions=env.definitions,
    )
    for v in "abcfghmnrs":
        env = env.declare("variable", v)
    functions = [
        ("union", 2, "infix", "(%0 ∪ %1)"),
        ("intersection", 2, "infix", "(%0 ∩ %1)"),
        ("complement1", 1, "prefix", "~%0"),
        ("complement2", 2, "infix", "(%0 ~ %1)"),
        ("bigunion", 1, "prefix", "∪%0"),
        ("bigintersection", 1, "prefix", "∩%0"),
        ("parts", 1, "prefix", "P%0"),
        ("singleton", 1, "prefix", "{%0}"),
        ("pair", 2, "prefix", "{%0,%1}"),
        ("orderedpair", 2, "prefix", "(%0,%1)"),
        ("proj1", 1, "prefix", None),
        ("proj2", 1, "prefix", None),
        ("comp", 2, "infix", "(%0∘%1)"),
        ("inv", 1, "prefix", "(%0)⁻¹"),
        ("domain", 1, "prefix", None),
        ("range", 1, "prefix", None),
        ("app", 2, "infix", "(%0'%1)"),
        ("prod", 2, "infix", "(%0 X %1)"),
        ("func", 2, "prefix", None),
        ("suc", 1, "prefix", "suc %0"),
        ("restrict", 2, "infix", "(%0|%1)"),
    ]
    for fname, arity, fixity, tpl in functions:
        env = env.declare("function", fname, arity, fixity)
        if tpl:
            env = env.set_pretty(fname, tpl)
    for c, tpl in [("0", None), ("U", None), ("E", None), ("ord", None), ("int", "ω")]:
        env = env.declare("constant", c)
        if tpl:
            env = env.set_pretty(c, tpl)
    predicates = [
        ("Subset", 2, "infix", "(%0 ⊂ %1)"),
        ("Relation", 1, "prefix", None),
        ("Function", 1, "prefix", None),
        ("Trans", 1, "prefix", None),
        ("Connects", 2, "prefix", None),
        ("Asymmetric", 2, "prefix", None),
        ("First", 3, "prefix", None),
        ("WellOrders", 2, "prefix", None),
        ("Section", 3, "prefix", None),
        ("OrderPreserving", 3, "prefix", None),
        ("OneToOne", 1, "prefix", "1-to-1"),
        ("Full", 1, "prefix", None),
        ("Ordinal", 1, "prefix", None),
        ("Integer", 1, "prefix", None),
        ("Choice", 1, "prefix", None),
        ("Equi", 2, "prefix", None),
        ("Card", 1, "prefix", None),
        ("TransIn", 2, "prefix", None),
    ]
    for pname, arity, fixity, tpl in predicates:
        env = env.declare("predicate", pname, arity, fixity)
        if tpl:
            env = env.set_pretty(pname, tpl)

    for eq in [
        "union(x,y) = extension z. (Elem(z,x) v Elem(z,y))",
        "intersection(x,y) = extension z. (Elem(z,x) & Elem(z,y))",
        "complement1(x) = extension y. neg Elem(y,x)",
        "complement2(x,y) = intersection(x,complement1(y))",
        "0 = extension x. neg (x = x)",
        "U = extension x. (x = x)",
        "bigunion(x) = extension z. exists y.(Elem(y,x) & Elem(z,y))",
        "bigintersection(x) = extension z. forall y.(Elem(y,x) -> Elem(z,y))",
        "parts(x) = extension y. Subset(y,x)",
        "singleton(x) = extension z. (Elem(z,U) -> (z = x))",
        "pair(x,y) = union(singleton(x),singleton(y))",
        "orderedpair(x,y) = pair(x,pair(x,y))",
        "proj1(x) = bigintersection(bigintersection(x))",
        "proj2(x) = union(bigintersection(bigunion(x)),complement2(bigunion(bigunion(x)),bigunion(bigintersection(x))))",
        "comp(a,b) = extension w. exists x. exists y. exists z.((Elem(orderedpair(x,y),a) & Elem(orderedpair(y,z),b)) & (w = orderedpair(x,z)))",
        "inv(r) = extension z. exists x. exists y.(Elem(orderedpair(x,y),r) & (z = orderedpair(y,x)))",
        "domain(f) = extension x. exists y. Elem(orderedpair(x,y),f)",
        "range(f) = extension y. exists x. Elem(orderedpair(x,y),f)",
        "app(f,x) = bigintersection(extension y. Elem(orderedpair(x,y),f))",
        "prod(x,y) = extension z. exists a. exists b.((z = orderedpair(a,b)) & (Elem(a,x) & Elem(b,y)))",
        "func(x,y) = extension f. (Function(f) & ((domain(f) = x) & (range(f) = y)))",
        "E = extension z. exists x. exists y.((z = orderedpair(x,y)) & Elem(x,y))",
        "ord = extension x. Ordinal(x)",
        "suc(x) = union(x,singleton(x))",
        "restrict(f,x) = intersection(f,prod(x,U))",
        "int = extension x. Integer(x)",
    ]:
        env = env.new_def_eq(eq)

    for name, params, body in [
        ("Subset", ["x", "y"], "forall z.(Elem(z,x) -> Elem(z,y))"),
        ("Relation", ["r"], "forall z.(Elem(z,r) -> exists x. exists y.(z = orderedpair(x,y)))"),
        ("Function", ["f"], "(Relation(f) & forall x. forall y. forall z.((Elem(orderedpair(x,y),f) & Elem(orderedpair(x,z),f)) -> (y = z)))"),
        ("Trans", ["r"], "forall x. forall y. forall z.((Elem(orderedpair(x,y),r) & Elem(orderedpair(y,z),r)) -> Elem(orderedpair(x,z),r))"),
        ("Connects", ["r", "x"], "forall y. forall z.((Elem(y,x) & Elem(z,x)) -> ((y = z) v (Elem(orderedpair(y,z),r) v Elem(orderedpair(z,y),r))))"),
        ("Asymmetric", ["r", "x"], "forall y. forall z.((Elem(y,x) & Elem(z,x)) -> (Elem(orderedpair(y,z),r) -> neg Elem(orderedpair(z,y),r)))"),
        ("First", ["r", "x", "z"], "(Elem(z,x) & forall y.(Elem(y,x) -> neg Elem(orderedpair(y,z),r)))"),
        ("WellOrders", ["r", "x"], "(Connects(r,x) & forall y.((Subset(y,x) & neg (y = 0)) -> exists z. First(r,y,z)))"),
        ("Section", ["r", "x", "y"], "((Subset(y,x) & WellOrders(r,x)) & forall u. forall v.(((Elem(u,x) & Elem(v,y)) & Elem(orderedpair(u,v),r)) -> Elem(u,y)))"),
        ("OrderPreserving", ["f", "r", "s"], "((Function(f) & (WellOrders(r,domain(f)) & WellOrders(r,range(f)))) & forall u. forall v.(((Elem(u,domain(f)) & Elem(v,domain(f))) & Elem(orderedpair(u,v),r)) -> Elem(orderedpair(app(f,u),app(f,v)),r)))"),
        ("OneToOne", ["f"], "(Function(f) & Function(inv(f)))"),
        ("Full", ["x"], "forall y.(Elem(y,x) -> Subset(y,x))"),
        ("Ordinal", ["x"], "(Full(x) & Connects(E,x))"),
        ("Integer", ["x"], "(Ordinal(x) & WellOrders(inv(E),x))"),
        ("Choice", ["f"], "(Function(f) & forall y.(Elem(y,domain(f)) -> Elem(app(f,y),y)))"),
        ("Equi", ["x", "y"], "exists f.(OneToOne(f) & ((domain(f) = x) & (range(f) = y)))"),
        ("Card", ["x"], "(Ordinal(x) & forall y.((Elem(y,x) & Elem(y,ord)) -> neg Equi(y,x)))"),
        ("TransIn", ["r", "x"], "forall u. forall v. forall w.((Elem(u,x) & (Elem(v,x) & Elem(w,x))) -> ((Elem(orderedpair(u,v),r) & Elem(orderedpair(v,w),r)) -> Elem(orderedpair(u,w),r)))"),
    ]:
        env = env.new_def(name, params, body)

    for ax in [
        "forall x. forall y.((x = y) <-> forall z.(Elem(z,x) <-> Elem(z,y)))",
        "(Set(x) -> exists y.(Set(y) & forall z.(Subset(z,x) -> Elem(z,y))))",
        "((Set(x) & Set(y)) -> Set(union(x,y)))",
        "((Function(f) & Set(domain(f))) -> Set(range(f)))",
        "(Set(x) -> Set(bigunion(x)))",
        "(neg (x = 0) -> exists y.(Elem(y,x) & (intersection(y,x) = 0)))",
        "exists y.((Set(y) & Elem(0,y)) & forall x.(Elem(x,y) -> Elem(suc(x),y)))",
        "exists f.(Choice(f) & (domain(f) = complement2(U,singleton(0))))",
    ]:
        env = env.add_axiom(ax)

    env = env.add_theorem("(A v neg A)")
    return env


def category_env() -> ProofEnvironment:
    sig = Signature(variables=frozenset("ABCDEFGST") | frozenset("abcefghjklmrsuv"))
    env = ProofEnvironment(name="Category", signature=sig)
    for fname, arity, tpl in [
        ("comp", 2, "(%0∘%1)"),
        ("id", 1, None),
        ("func", 2, None),
        ("ap", 2, "%0%1"),
        ("nat", 2, None),
    ]:
        env = env.declare("function", fname, arity)
        if tpl:
            env = env.set_pretty(fname, tpl)
    for pname, arity, tpl in [
        ("Hom", 4, "[%0: %1 → %2|%3]"),
        ("In", 2, "%0:%1"),
        ("Cat", 1, None),
        ("Terminal", 2, None),
        ("Isomorphism", 4, None),
        ("Iso", 3, None),
    ]:
        env = env.declare("predicate", pname, arity)
        if tpl:
            env = env.set_pretty(pname, tpl)
    for name, params, body in [
        ("Terminal", ["A", "C"], "(In(A,C) & forall B.(In(B,C) -> exists1 f. Hom(f,B,A,C)))"),
        ("Isomorphism", ["f", "A", "B", "C"], "(Hom(f,A,B,C) & exists g.(Hom(g,B,A,C) & ((comp(g,f) = id(A)) & (comp(f,g) = id(B)))))"),
        ("Iso", ["A", "B", "C"], "exists f. Isomorphism(f,A,B,C)"),
    ]:
        env = env.new_def(name, params, body)
    for ax in [
        "((Hom(f,A,B,C) & Hom(g,B,D,C)) -> Hom(comp(g,f),A,D,C))",
        "(In(A,C) -> Hom(id(A),A,A,C))",
        "((In(A,C) & Hom(f,A,B,C)) -> ((comp(id(A),f) = f) & (comp(f,id(A)) = f)))",
        "((Hom(f,A,B,C) & (Hom(g,B,D,C) & Hom(h,D,E,C))) -> (comp(h,comp(g,f)) = comp(comp(h,g),f)))",
        "(In(A,C) -> Cat(C))",
        "(Hom(f,A,B,C) -> (In(A,C) & In(B,C)))",
        "((Cat(A) & Cat(B)) <-> Cat(func(A,B)))",
        "(In(F,func(A,B)) -> In(ap(F,A),B))",
        "((In(F,func(A,B)) & Hom(f,a,b,A)) -> Hom(ap(F,f),ap(F,a),ap(F,b),B))",
        "((In(F,func(A,B)) & In(a,A)) -> (ap(F,id(A)) = id(ap(F,A))))",
        "((In(F,func(A,B)) & (Hom(f,a,b,C) & Hom(g,b,c,C))) -> (ap(F,comp(g,f)) = comp(ap(F,g),ap(F,f))))",
        "((Hom(e,F,G,func(A,B)) & In(a,A)) -> Hom(nat(e,a),ap(F,a),ap(G,a),B))",
        "((Hom(e,F,G,func(A,B)) & Hom(f,a,b,A)) -> (comp(ap(G,f),nat(e,a)) = comp(nat(e,b),ap(F,f))))",
    ]:
        env = env.add_axiom(ax)
    return env


def z2_env() -> ProofEnvironment:
    sig = Signature(variables=frozenset({"n", "m", "x", "y", "X", "Y"}))
    env = ProofEnvironment(name="Z2", signature=sig, class_guard="Nat")
    env = env.declare("constant", "0").declare("constant", "1")
    env = env.declare("function", "plus", 2, "infix").set_pretty("plus", "(%0 + %1)")
    env = env.declare("function", "times", 2, "infix").set_pretty("times", "(%0 * %1)")
    env = env.declare("predicate", "Nat", 1)
    env = env.declare("predicate", "Set", 1)
    env = env.declare("predicate", "less", 2, "infix").set_pretty("less", "(%0 < %1)")
    for ax in [
        "(Nat(x) v Set(x))",
        "(Nat(x) -> neg Set(x))",
        "(Nat(0) & Nat(1))",
        "(Nat(n) -> neg (plus(n,1) = 0))",
        "((Nat(n) & Nat(m)) -> ((plus(m,1) = plus(n,1)) -> (m = n)))",
        "(Nat(m) -> (plus(m,0) = m))",
        "((Nat(n) & Nat(m)) -> (plus(m,plus(n,1)) = plus(plus(m,n),1)))",
        "(Nat(m) -> (times(m,0) = 0))",
        "((Nat(n) & Nat(m)) -> (times(m,plus(n,1)) = plus(times(m,n),m)))",
        "(Nat(m) -> neg less(m,0))",
        "((Nat(n) & Nat(m)) -> (less(m,plus(n,1)) <-> (less(m,n) v (m = n))))",
        "(Elem(x,X) -> (Nat(x) & Set(X)))",
        "((Elem(0,X) & forall n.(Elem(n,X) -> Elem(plus(n,1),X))) -> forall n. Elem(n,X))",
    ]:
        env = env.add_axiom(ax)
    return env


def main() -> None:
    km = kelley_morse_env()
    sig = km.signature
    assert [display(a, sig) for a in km.axioms] == goldens.KM_AXIOM_DISPLAY
    assert [display(e, sig) for e in km.def_equations] == goldens.KM_DEFEQ_DISPLAY
    assert len(km.definitions) == 19 and len(km.def_equations) == 26 and len(km.axioms) == 8
    write("kelley_morse", "Kelley-Morse", theorem_document(km, [], None))

    write("kelley_morse", "Th4", build(km, goldens.TH4_LOG, goldens.TH4_QEDS, goldens.TH4_DISPLAY, "Th4"))

    th4_conclusion = "((Elem(z,union(x,y)) <-> (Elem(z,x) v Elem(z,y))) & (Elem(z,intersection(x,y)) <-> (Elem(z,x) & Elem(z,y))))"
    th5_env = km.add_theorem(th4_conclusion)
    write("kelley_morse", "Th5", build(th5_env, goldens.TH5_LOG, goldens.TH5_QEDS, goldens.TH5_DISPLAY, "Th5"))

    logic = ProofEnvironment(name="Logic")
    write("logic", "Logic", theorem_document(logic, [], None))
    write("logic", "Log1", build(logic, goldens.LOG1_LOG, goldens.LOG1_QEDS, goldens.LOG1_DISPLAY, "Log1"))

    exmid_env = logic
    for t in goldens.EXMID_THEOREMS:
        exmid_env = exmid_env.add_theorem(t)
    write("logic", "ExcludedMiddle", build(exmid_env, goldens.EXMID_LOG, goldens.EXMID_QEDS, goldens.EXMID_DISPLAY, "ExcludedMiddle"))

    cat = category_env()
    assert [display(a, cat.signature) for a in cat.axioms] == goldens.CATEGORY_AXIOM_DISPLAY
    expected = [goldens.TERMINAL_SPOT_DISPLAY.get(i) for i in range(87)]
    write("category", "Category", theorem_document(cat, [], None))
    write("category", "TerminalIso", build(cat, goldens.TERMINAL_LOG, goldens.TERMINAL_QEDS, expected, "TerminalIso"))

    z2 = z2_env()
    write("z2", "Z2", theorem_document(z2, [], None))
    write("z2", "NotOneZero", build(z2, goldens.Z2_LOG, goldens.Z2_QEDS, goldens.Z2_DISPLAY, "NotOneZero"))

    print("all fixtures verified and written")


if __name__ == "__main__":
    main()
