import pytest

import goldens
from ndkernel.environment import ProofEnvironment, TheoremStore
from ndkernel.kernel import (
    KernelError,
    LinearProof,
    ReplayError,
    RuleInvocation,
    apply_entries,
    apply_rule,
    check_theory,
    dependency_tree,
    format_line,
    hyp,
    hypotheses_of,
    qed,
    replay_log,
    rule_manifest,
    undo,
    used_theorems,
)
from ndkernel.shell import default_store, make_invocation
from ndkernel.syntax import alpha_equal, display, parse_formula, render


@pytest.fixture()
def env():
    e = ProofEnvironment.default()
    e = e.declare("predicate", "P", 1).declare("predicate", "Q", 2)
    e = e.declare("constant", "c").declare("function", "g", 2)
    return e


@pytest.fixture()
def proof():
    return LinearProof()


def run(env, proof, name, *args):
    return apply_rule(env, proof, make_invocation(name, args))


def shows(env, proof, i):
    return display(proof.elements[i].formula, env.signature)


class TestHyp:
    def test_appends_hypothesis_line(self, env, proof):
        e = hyp(env, proof, "Elem(z,g(x,y))")
        assert e.rule == "Hyp" and e.parents == () and e.discharged_by == []
        assert format_line(proof, 0, env.signature) == "0. z ε g(x,y) Hyp"

    def test_parse_failure_leaves_proof_unchanged(self, env, proof):
        with pytest.raises(Exception):
            hyp(env, proof, "Elem(z")
        assert len(proof) == 0 and len(proof.log) == 0


class TestPropositionalRules:
    def test_and_int_elim(self, env, proof):
        hyp(env, proof, "P(x)")
        hyp(env, proof, "Q(x,y)")
        run(env, proof, "AndInt", 0, 1)
        assert shows(env, proof, 2) == "P(x) & Q(x,y)"
        run(env, proof, "AndElimL", 2)
        run(env, proof, "AndElimR", 2)
        assert shows(env, proof, 3) == "P(x)" and shows(env, proof, 4) == "Q(x,y)"
        with pytest.raises(KernelError, match="not a conjunction"):
            run(env, proof, "AndElimL", 0)

    def test_imp_int_discharges(self, env, proof):
        hyp(env, proof, "P(x)")
        run(env, proof, "AndInt", 0, 0)
        run(env, proof, "ImpInt", 1, 0)
        assert shows(env, proof, 2) == "P(x) -> (P(x) & P(x))"
        assert proof.elements[0].discharged_by == [2]
        assert proof.elements[0].discharging == (2,)

    def test_imp_int_requires_hypothesis_line(self, env, proof):
        hyp(env, proof, "P(x)")
        run(env, proof, "AndInt", 0, 0)
        with pytest.raises(KernelError, match="not a hypothesis"):
            run(env, proof, "ImpInt", 0, 1)

    def test_imp_elim(self, env, proof):
        hyp(env, proof, "P(x)")
        hyp(env, proof, "(P(x) -> Q(x,x))")
        run(env, proof, "ImpElim", 0, 1)
        assert shows(env, proof, 2) == "Q(x,x)"
        with pytest.raises(KernelError, match="antecedent"):
            run(env, proof, "ImpElim", 2, 1)

    def test_or_int_sides(self, env, proof):
        hyp(env, proof, "P(x)")
        run(env, proof, "OrIntL", 0, "Q(x,y)")
        run(env, proof, "OrIntR", 0, "Q(x,y)")
        assert shows(env, proof, 1) == "Q(x,y) v P(x)"
        assert shows(env, proof, 2) == "P(x) v Q(x,y)"

    def test_or_elim_branches(self, env, proof):
        hyp(env, proof, "(P(x) v P(y))")
        hyp(env, proof, "P(x)")
        run(env, proof, "OrIntL", 1, "P(y)")  # P(y) v P(x)
        hyp(env, proof, "P(y)")
        run(env, proof, "OrIntR", 3, "P(x)")  # P(y) v P(x)
        run(env, proof, "OrElim", 0, 1, 2, 3, 4)
        assert shows(env, proof, 5) == "P(y) v P(x)"
        assert proof.elements[1].discharged_by == [5]
        assert proof.elements[3].discharged_by == [5]

    def test_or_elim_same_hypothesis_twice(self, env, proof):
        hyp(env, proof, "(P(x) v P(x))")
        hyp(env, proof, "P(x)")
        hyp(env, proof, "P(x)")
        run(env, proof, "OrElim", 0, 1, 1, 2, 2)
        assert proof.elements[1].discharged_by == [3]

    def test_or_elim_branch_must_depend_on_its_hypothesis(self, env, proof):
        hyp(env, proof, "(P(x) v P(x))")
        hyp(env, proof, "P(x)")
        hyp(env, proof, "P(x)")
        with pytest.raises(KernelError, match="does not depend"):
            run(env, proof, "OrElim", 0, 1, 2, 2, 2)

    def test_or_elim_branch_conclusions_must_agree(self, env, proof):
        hyp(env, proof, "(P(x) v P(y))")
        hyp(env, proof, "P(x)")
        hyp(env, proof, "P(y)")
        with pytest.raises(KernelError, match="differ"):
            run(env, proof, "OrElim", 0, 1, 1, 2, 2)


class TestQuantifierRules:
    def test_forall_int_and_elim(self, env, proof):
        run(env, proof, "Identity", "x")
        run(env, proof, "ForallInt", 0, "x", "x")
        assert shows(env, proof, 1) == "∀x.(x = x)"
        run(env, proof, "ForallElim", 1, "g(c,y)")
        assert shows(env, proof, 2) == "g(c,y) = g(c,y)"

    def test_forall_int_eigenvariable_violation(self, env, proof):
        hyp(env, proof, "P(z)")
        with pytest.raises(KernelError, match="occurs free in undischarged hypothesis"):
            run(env, proof, "ForallInt", 0, "z", "z")

    def test_forall_int_rename(self, env, proof):
        hyp(env, proof, "P(z)")
        run(env, proof, "ImpInt", 0, 0)
        run(env, proof, "ForallInt", 1, "z", "w")
        assert shows(env, proof, 2) == "∀w.(P(w) -> P(w))"

    def test_forall_int_new_variable_collision(self, env, proof):
        hyp(env, proof, "Q(x,y)")
        run(env, proof, "ImpInt", 0, 0)
        with pytest.raises(KernelError, match="already occurs free"):
            run(env, proof, "ForallInt", 1, "x", "y")

    def test_exists_int_at_positions(self, env, proof):
        hyp(env, proof, "Q(x,x)")
        run(env, proof, "ExistsInt", 0, "x", "w", [1])
        assert shows(env, proof, 1) == "∃w.Q(x,w)"

    def test_exists_int_rejects_partial_capture(self, env, proof):
        hyp(env, proof, "Q(x,x)")
        with pytest.raises(KernelError, match="occurs free outside"):
            run(env, proof, "ExistsInt", 0, "x", "x", [0])

    def test_exists_int_rejects_bound_occurrence(self, env, proof):
        hyp(env, proof, "(P(c) & forall x. P(x))")
        with pytest.raises(KernelError, match="captured"):
            run(env, proof, "ExistsInt", 0, "x", "x", [0])

    def test_exists_elim(self, env, proof):
        hyp(env, proof, "exists x. P(x)")
        hyp(env, proof, "P(w)")
        run(env, proof, "ExistsInt", 1, "w", "x", [0])
        run(env, proof, "ExistsElim", 0, 1, 2, "w")
        assert shows(env, proof, 3) == "∃x.P(x)"
        assert proof.elements[1].discharged_by == [3]
        assert qed(proof, 3) is False  # still depends on hypothesis 0

    def test_exists_elim_witness_in_conclusion(self, env, proof):
        hyp(env, proof, "exists x. P(x)")
        hyp(env, proof, "P(w)")
        with pytest.raises(KernelError, match="occurs free in the conclusion"):
            run(env, proof, "ExistsElim", 0, 1, 1, "w")

    def test_exists_elim_witness_in_live_hypothesis(self, env, proof):
        hyp(env, proof, "exists x. P(x)")
        hyp(env, proof, "P(w)")
        hyp(env, proof, "Q(w,w)")
        run(env, proof, "ExistsInt", 2, "w", "u", [0, 1])
        run(env, proof, "AndInt", 1, 3)
        run(env, proof, "ExistsInt", 4, "w", "v", [0])
        with pytest.raises(KernelError, match="undischarged hypothesis"):
            run(env, proof, "ExistsElim", 0, 1, 5, "w")

    def test_unique_elim(self, env, proof):
        hyp(env, proof, "exists1 x. P(x)")
        run(env, proof, "UniqueElim", 0)
        want = parse_formula("exists x.(P(x) & forall y.(P(y) -> (y = x)))", env.signature)
        assert alpha_equal(proof.elements[1].formula, want)


class TestAbsurdityRules:
    def test_abs_i_concludes_stated_formula(self, env, proof):
        hyp(env, proof, "_|_")
        run(env, proof, "AbsI", 0, "Q(x,y)")
        assert shows(env, proof, 1) == "Q(x,y)"
        with pytest.raises(KernelError, match="absurdity"):
            run(env, proof, "AbsI", 1, "P(x)")

    def test_abs_c_classical(self, env, proof):
        hyp(env, proof, "neg neg P(x)")
        hyp(env, proof, "neg P(x)")
        run(env, proof, "ImpElim", 1, 0)
        run(env, proof, "AbsC", 1, 2)
        assert shows(env, proof, 3) == "P(x)"
        assert proof.elements[1].discharged_by == [3]
        run(env, proof, "ImpInt", 3, 0)
        assert qed(proof, 4)

    def test_abs_c_needs_negated_hypothesis(self, env, proof):
        hyp(env, proof, "P(x)")
        hyp(env, proof, "_|_")
        with pytest.raises(KernelError, match="not a negation"):
            run(env, proof, "AbsC", 0, 1)


class TestClassRules:
    def test_class_elim_and_int(self, env, proof):
        hyp(env, proof, "Elem(z,extension w. Q(w,w))")
        run(env, proof, "ClassElim", 0)
        assert shows(env, proof, 1) == "Set(z) & Q(z,z)"
        run(env, proof, "ClassInt", 1, "w")
        assert shows(env, proof, 2) == "z ε {w: Q(w,w)}"

    def test_class_elim_shape(self, env, proof):
        hyp(env, proof, "Elem(z,x)")
        with pytest.raises(KernelError, match="extension"):
            run(env, proof, "ClassElim", 0)

    def test_class_guard_follows_environment(self, proof):
        env = ProofEnvironment.from_json(default_store().read("Z2"))
        hyp(env, proof, "Elem(n,extension x. (x = x))")
        run(env, proof, "ClassElim", 0)
        assert shows(env, proof, 1) == "Nat(n) & (n = n)"


class TestEqualityRules:
    def test_identity_and_symmetry(self, env, proof):
        run(env, proof, "Identity", "g(x,c)")
        assert shows(env, proof, 0) == "g(x,c) = g(x,c)"
        assert proof.elements[0].parents == ()
        run(env, proof, "Symmetry", 0)
        assert shows(env, proof, 1) == "g(x,c) = g(x,c)"
        hyp(env, proof, "(x = c)")
        run(env, proof, "Symmetry", 2)
        assert shows(env, proof, 3) == "c = x"

    def test_equality_sub_positions(self, env, proof):
        hyp(env, proof, "Q(g(x,x),x)")
        hyp(env, proof, "(x = c)")
        run(env, proof, "EqualitySub", 0, 1, [0, 2])
        assert shows(env, proof, 2) == "Q(g(c,x),c)"

    def test_equality_sub_out_of_range(self, env, proof):
        hyp(env, proof, "P(x)")
        hyp(env, proof, "(x = c)")
        with pytest.raises(KernelError, match="out of range"):
            run(env, proof, "EqualitySub", 0, 1, [5])

    def test_equality_sub_respects_binders(self, env, proof):
        hyp(env, proof, "forall x. P(x)")
        hyp(env, proof, "(x = c)")
        with pytest.raises(KernelError, match="bound"):
            run(env, proof, "EqualitySub", 0, 1, [0])


class TestSecondOrderRules:
    def test_poly_sub_instantiates_validity(self, env, proof):
        run(env, proof, "Hyp", "((A v B) -> (B v A))")
        run(env, proof, "ImpInt", 0, 0)
        # the validity is now hypothesis-free, so the placeholders are fair game
        run(env, proof, "PolySub", 1, "C", "P(x)")  # no occurrences: identity
        assert shows(env, proof, 2) == shows(env, proof, 1)

    def test_poly_sub_all_occurrences(self):
        env = ProofEnvironment.default()
        proof = LinearProof()
        env2 = env.add_theorem("((A v B) -> (B v A))")
        run(env2, proof, "TheoremInt", 0)
        run(env2, proof, "PolySub", 0, "A", "Elem(z,x)")
        assert shows(env2, proof, 1) == "((z ε x) v B) -> (B v (z ε x))"
        run(env2, proof, "PolySub", 1, "B", "Elem(z,y)")
        assert shows(env2, proof, 2) == "((z ε x) v (z ε y)) -> ((z ε y) v (z ε x))"

    def test_poly_sub_hypothesis_side_condition(self, env, proof):
        hyp(env, proof, "(A v B)")
        with pytest.raises(KernelError, match="undischarged hypothesis"):
            run(env, proof, "PolySub", 0, "A", "P(x)")

    def test_poly_sub_capture(self, env, proof):
        run(env, proof, "Hyp", "(A -> forall x. (A & P(x)))")
        run(env, proof, "ImpInt", 0, 0)
        with pytest.raises(KernelError, match="become bound"):
            run(env, proof, "PolySub", 1, "A", "P(x)")

    def test_pred_sub_rejects_defined(self, env, proof):
        hyp(env, proof, "Set(x)")
        with pytest.raises(KernelError, match="Predicate is defined."):
            run(env, proof, "PredSub", 0, "Set", ["x"], "neg Set(x)", [0])

    def test_pred_sub_schematic_predicate(self):
        env = ProofEnvironment.default().declare("predicate", "Foo", 1)
        proof = LinearProof()
        run(env, proof, "Identity", "x")
        run(env, proof, "OrIntL", 0, "Foo(w)")
        run(env, proof, "PredSub", 1, "Foo", ["y"], "neg Elem(y,y)", [0])
        assert shows(env, proof, 2) == "¬(w ε w) v (x = x)"

    def test_pred_sub_requires_every_occurrence(self):
        env = ProofEnvironment.default().declare("predicate", "Foo", 1)
        proof = LinearProof()
        run(env, proof, "Identity", "x")
        run(env, proof, "OrIntL", 0, "(Foo(w) & Foo(x))")
        with pytest.raises(KernelError, match="every occurrence"):
            run(env, proof, "PredSub", 1, "Foo", ["y"], "neg Elem(y,y)", [0])

    def test_pred_sub_hypothesis_side_condition(self):
        env = ProofEnvironment.default().declare("predicate", "Foo", 1)
        proof = LinearProof()
        hyp(env, proof, "Foo(x)")
        with pytest.raises(KernelError, match="undischarged hypothesis"):
            run(env, proof, "PredSub", 0, "Foo", ["y"], "neg Set(y)", [0])


class TestEnvironmentRules:
    def test_env_introductions(self):
        env = ProofEnvironment.default().add_axiom("(x = x)").add_theorem("(A v neg A)")
        env = env.declare("constant", "c").new_def_eq("c = extension y. neg (y = y)")
        proof = LinearProof()
        run(env, proof, "AxInt", 0)
        run(env, proof, "TheoremInt", 0)
        run(env, proof, "DefEqInt", 0)
        assert [shows(env, proof, i) for i in range(3)] == [
            "x = x",
            "A v ¬A",
            "c = {y: ¬(y = y)}",
        ]
        for rule in ("AxInt", "TheoremInt", "DefEqInt"):
            with pytest.raises(KernelError, match="out of range"):
                run(env, proof, rule, 7)

    def test_def_exp_and_def_sub(self):
        env = ProofEnvironment.default()
        proof = LinearProof()
        hyp(env, proof, "Set(x)")
        run(env, proof, "DefExp", 0, "Set", [0])
        assert shows(env, proof, 1) == "∃y.(x ε y)"
        run(env, proof, "DefSub", 1, "Set", ["x"], [0])
        assert shows(env, proof, 2) == "Set(x)"

    def test_def_sub_matches_up_to_alpha(self):
        env = ProofEnvironment.default()
        proof = LinearProof()
        hyp(env, proof, "exists w. Elem(x,w)")
        run(env, proof, "DefSub", 0, "Set", ["x"], [0])
        assert shows(env, proof, 1) == "Set(x)"

    def test_def_exp_needs_definition(self, env, proof):
        hyp(env, proof, "P(x)")
        with pytest.raises(KernelError, match="no definition"):
            run(env, proof, "DefExp", 0, "P", [0])


class TestEquivRules:
    def test_equiv_const_and_exp(self, env, proof):
        hyp(env, proof, "((P(x) -> P(y)) & (P(y) -> P(x)))")
        run(env, proof, "EquivConst", 0)
        assert shows(env, proof, 1) == "P(x) <-> P(y)"
        run(env, proof, "EquivExp", 1)
        assert alpha_equal(proof.elements[2].formula, proof.elements[0].formula)

    def test_equiv_const_requires_converses(self, env, proof):
        hyp(env, proof, "((P(x) -> P(y)) & (P(x) -> P(y)))")
        with pytest.raises(KernelError, match="converse"):
            run(env, proof, "EquivConst", 0)

    def test_derived_equiv_rules(self, env, proof):
        hyp(env, proof, "(P(x) -> P(y))")
        hyp(env, proof, "(P(y) -> P(x))")
        run(env, proof, "EquivJoin", 0, 1)
        assert shows(env, proof, 2) == "P(x) <-> P(y)"
        run(env, proof, "EquivLeft", 2)
        run(env, proof, "EquivRight", 2)
        assert shows(env, proof, 3) == "P(x) -> P(y)"
        assert shows(env, proof, 4) == "P(y) -> P(x)"

    def test_free_sub(self, env, proof):
        run(env, proof, "Identity", "x")
        run(env, proof, "FreeSub", 0, "x", "g(c,c)")
        assert shows(env, proof, 1) == "g(c,c) = g(c,c)"

    def test_free_sub_eigenvariable(self, env, proof):
        hyp(env, proof, "P(x)")
        with pytest.raises(KernelError, match="occurs free"):
            run(env, proof, "FreeSub", 0, "x", "c")


class TestDependencies:
    def make_th4_prefix(self, km_env):
        proof = LinearProof()
        for entry in goldens.invocations(goldens.TH4_LOG[:6]):
            apply_rule(km_env, proof, entry)
        return proof

    def test_dependency_tree_transitive(self, km_env):
        proof = self.make_th4_prefix(km_env)
        assert dependency_tree(proof, 5) == {0, 1, 2, 3, 4, 5}

    def test_leaf_lines_are_their_own_tree(self, env, proof):
        hyp(env, proof, "P(x)")
        run(env, proof, "Identity", "x")
        assert dependency_tree(proof, 0) == {0}
        assert dependency_tree(proof, 1) == {1}

    def test_hypotheses_track_discharge(self, km_env):
        proof = self.make_th4_prefix(km_env)
        assert hypotheses_of(proof, 4) == {0}
        assert hypotheses_of(proof, 5) == set()

    def test_fresh_hyp_is_its_own_hypothesis(self, env, proof):
        hyp(env, proof, "P(x)")
        assert hypotheses_of(proof, 0) == {0}
        assert qed(proof, 0) is False

    def test_index_out_of_range(self, env, proof):
        with pytest.raises(KernelError, match="out of range"):
            dependency_tree(proof, 0)


class TestUndo:
    def test_hyp_then_undo(self, env, proof):
        hyp(env, proof, "P(x)")
        undo(proof)
        assert len(proof) == 0 and len(proof.log) == 0

    def test_undo_restores_discharge(self, env, proof):
        hyp(env, proof, "P(x)")
        run(env, proof, "AndInt", 0, 0)
        run(env, proof, "ImpInt", 1, 0)
        assert proof.elements[0].discharged_by == [2]
        undo(proof)
        assert proof.elements[0].discharged_by == []

    def test_undo_empty_proof(self, proof):
        with pytest.raises(KernelError, match="empty"):
            undo(proof)


class TestReplay:
    def test_replay_reports_failing_entry(self, km_env):
        entries = goldens.invocations(goldens.TH4_LOG)
        entries[4] = RuleInvocation("AndElimR", (2,))
        with pytest.raises(ReplayError) as err:
            replay_log(km_env, entries)
        assert err.value.index == 4 and "conjunction" in err.value.cause

    def test_empty_log(self, km_env):
        proof, verdict = replay_log(km_env, [])
        assert len(proof) == 0 and verdict is None

    def test_replay_determinism(self, km_env):
        entries = goldens.invocations(goldens.TH4_LOG)
        first = apply_entries(km_env, entries)
        second = apply_entries(km_env, entries)
        for a, b in zip(first.elements, second.elements):
            assert a.rule == b.rule and a.parents == b.parents
            assert alpha_equal(a.formula, b.formula)
            assert a.discharged_by == b.discharged_by

    def test_monotone_append(self, km_env):
        entries = goldens.invocations(goldens.TH4_LOG)
        proof = LinearProof()
        snapshots = []
        for inv in entries:
            apply_rule(km_env, proof, inv)
            snapshots.append([e.formula for e in proof.elements])
        final = [e.formula for e in proof.elements]
        for i, snap in enumerate(snapshots):
            assert final[: len(snap)] == snap, f"formula changed after step {i}"

    def test_qed_stability(self, km_env):
        entries = goldens.invocations(goldens.TH4_LOG)
        proof = LinearProof()
        for inv in entries[:21]:
            apply_rule(km_env, proof, inv)
        assert qed(proof, 20)
        for inv in entries[21:]:
            apply_rule(km_env, proof, inv)
        assert proof.elements[20].qed
        assert hypotheses_of(proof, 20) == set()

    def test_used_theorems(self, km_env, store):
        entries = goldens.invocations(goldens.TH5_LOG)
        env5 = ProofEnvironment.from_json(store.read("Th5"))
        proof, verdict = replay_log(env5, entries)
        assert verdict
        assert used_theorems(proof) == [1]
        proof2, _ = replay_log(km_env, goldens.invocations(goldens.TH4_LOG))
        assert used_theorems(proof2) == []
        exmid = ProofEnvironment.from_json(store.read("ExcludedMiddle"))
        proof3, _ = replay_log(exmid, goldens.invocations(goldens.EXMID_LOG))
        assert used_theorems(proof3) == [0, 1, 2]

    def test_used_theorems_deduplicates(self):
        env = ProofEnvironment.default().add_theorem("(A v neg A)").add_theorem("(B -> B)")
        proof = LinearProof()
        for n in (1, 1, 0, 1):
            apply_rule(env, proof, RuleInvocation("TheoremInt", (n,)))
        assert used_theorems(proof) == [0, 1]

    def test_environment_indices_resolve_in_listing_order(self):
        env = ProofEnvironment.default().add_axiom("(x = x)").add_axiom("(y = y)")
        env = env.add_theorem("(A v neg A)").add_theorem("(B -> B)")
        proof = LinearProof()
        for rule, n in (("AxInt", 0), ("AxInt", 1), ("TheoremInt", 0), ("TheoremInt", 1)):
            apply_rule(env, proof, RuleInvocation(rule, (n,)))
        sig = env.signature
        assert [display(e.formula, sig) for e in proof.elements] == [
            "x = x",
            "y = y",
            "A v ¬A",
            "B -> B",
        ]


class TestCheckTheory:
    def test_bundled_theorems_pass(self, store):
        report = check_theory(store, ["Th4", "Th5"])
        assert report.ok
        assert [i.status for i in report.items] == ["qed", "qed"]

    def test_missing_is_load_error(self, store):
        report = check_theory(store, ["missing"])
        assert not report.ok and report.items[0].status == "load-error"

    def test_empty_list_passes(self, store):
        assert check_theory(store, []).ok

    def test_failure_reports_entry(self, tmp_path, store):
        doc = store.read("Log1")
        doc["log"][2] = {"rule": "OrIntL", "args": [0, "B"]}
        bad_store = TheoremStore([tmp_path])
        import json

        (tmp_path / "Bad.json").write_text(json.dumps(doc), encoding="utf-8")
        report = check_theory(bad_store, ["Bad"])
        assert report.items[0].status == "failed"


class TestManifest:
    def test_rule_manifest_covers_table(self):
        manifest = {m["name"]: m for m in rule_manifest()}
        assert "ImpInt" in manifest and "PredSub" in manifest
        assert manifest["ImpInt"]["params"][1]["kind"] == "discharge"
        assert manifest["EquivJoin"]["derived"] is True
        assert manifest["Hyp"]["params"] == [{"name": "formula", "kind": "formula"}]
