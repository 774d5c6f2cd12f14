"""Decision procedure for intuitionistic propositional validities via the
inverted G3i calculus.

A state holds a list of sequents; the nine reduction rules (rand, ror1,
ror2, rimp, land, lor, limp, labs, ax) consume the selected sequent and
splice its premises in at the same position.  A proof of a formula is a
history of steps that empties the list starting from ``=> goal``.

Loop control: every sequent carries the set of sequents on its own
derivation path; a step whose premise repeats one of those is rejected with
a distinguished CycleError.  Contexts never keep duplicate formulas, so the
reachable sequents over a goal's subformulas are finite and the search
always terminates.  The state also accumulates every sequent ever generated
in ``memory``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterator

from .syntax import (
    BOTTOM,
    And,
    Bottom,
    Equiv,
    Formula,
    Implies,
    Or,
    SOVar,
    parse_formula,
    render,
    strip_outer_parens,
)


class GentzenError(ValueError):
    pass


class CycleError(GentzenError):
    """A reduction step that would repeat a sequent on its own path."""


RULE_NAMES = ("rand", "ror1", "ror2", "rimp", "land", "lor", "limp", "labs", "ax")
_BODY_RULES = ("land", "lor", "limp", "labs", "ax")


def negation_expand(f: Formula) -> Formula:
    """Normalize to the propositional ∧/∨/→/⊥ fragment.  Negation sugar is
    already Implies(A, Bottom) after parsing; equivalences expand to the
    conjunction of both implications.  Rejects non-propositional input."""
    match f:
        case SOVar() | Bottom():
            return f
        case And(l, r):
            return And(negation_expand(l), negation_expand(r))
        case Or(l, r):
            return Or(negation_expand(l), negation_expand(r))
        case Implies(l, r):
            return Implies(negation_expand(l), negation_expand(r))
        case Equiv(l, r):
            l, r = negation_expand(l), negation_expand(r)
            return And(Implies(l, r), Implies(r, l))
        case _:
            raise GentzenError(f"not a propositional formula: {render(f, 'ascii')}")


@dataclass(frozen=True)
class Sequent:
    head: Formula
    body: tuple[Formula, ...] = ()

    def key(self):
        return (self.head, frozenset(Counter(self.body).items()))


@dataclass(frozen=True)
class ReductionStep:
    rule: str
    sequent: int
    body_index: int | None = None

    def __str__(self) -> str:
        if self.body_index is None:
            return f"{self.rule}({self.sequent})"
        return f"{self.rule}({self.sequent},{self.body_index})"


def parse_step(text: str) -> ReductionStep:
    text = text.strip()
    if not text.endswith(")") or "(" not in text:
        raise GentzenError(f"malformed step {text!r}")
    name, argtext = text[:-1].split("(", 1)
    name = name.strip()
    if name not in RULE_NAMES:
        raise GentzenError(f"unknown reduction rule {name!r}")
    parts = [p.strip() for p in argtext.split(",")] if argtext.strip() else []
    try:
        nums = [int(p) for p in parts]
    except ValueError as exc:
        raise GentzenError(f"malformed step {text!r}") from exc
    if len(nums) == 1:
        return ReductionStep(name, nums[0])
    if len(nums) == 2:
        return ReductionStep(name, nums[0], nums[1])
    raise GentzenError(f"malformed step {text!r}")


@dataclass(frozen=True)
class SequentListState:
    sequents: tuple[Sequent, ...]
    ancestors: tuple[frozenset, ...]  # per sequent: keys on its derivation path
    memory: frozenset  # every sequent key ever generated
    history: tuple[ReductionStep, ...] = ()

    @classmethod
    def initial(cls, goal: Formula | str) -> "SequentListState":
        if isinstance(goal, str):
            goal = parse_formula(goal)
        seq = Sequent(negation_expand(goal))
        return cls((seq,), (frozenset(),), frozenset((seq.key(),)))

    def display(self) -> list[str]:
        return [f"{i}.  {format_sequent(s)}" for i, s in enumerate(self.sequents)]


def format_sequent(s: Sequent) -> str:
    body = ", ".join(strip_outer_parens(render(f, "pretty")) for f in s.body)
    return f"{body} => {strip_outer_parens(render(s.head, 'pretty'))}"


def _dedup(parts) -> tuple[Formula, ...]:
    out = []
    for f in parts:
        if f not in out:
            out.append(f)
    return tuple(out)


def _premises(s: Sequent, step: ReductionStep) -> list[Sequent]:
    """The inverted-rule premises for the selected sequent, or a shape error."""
    rule, k = step.rule, step.body_index
    if rule in _BODY_RULES:
        if k is None:
            raise GentzenError(f"{rule} needs a context index")
        if k < 0 or k >= len(s.body):
            raise GentzenError(f"context index {k} out of range")
    elif k is not None:
        raise GentzenError(f"{rule} takes no context index")

    match rule:
        case "rand":
            if not isinstance(s.head, And):
                raise GentzenError("rand: the goal is not a conjunction")
            return [Sequent(s.head.left, s.body), Sequent(s.head.right, s.body)]
        case "ror1" | "ror2":
            if not isinstance(s.head, Or):
                raise GentzenError(f"{rule}: the goal is not a disjunction")
            side = s.head.left if rule == "ror1" else s.head.right
            return [Sequent(side, s.body)]
        case "rimp":
            if not isinstance(s.head, Implies):
                raise GentzenError("rimp: the goal is not an implication")
            return [Sequent(s.head.right, _dedup((s.head.left,) + s.body))]
        case "land":
            f = s.body[k]
            if not isinstance(f, And):
                raise GentzenError(f"land: context formula {k} is not a conjunction")
            rest = s.body[:k] + (f.left, f.right) + s.body[k + 1 :]
            return [Sequent(s.head, _dedup(rest))]
        case "lor":
            f = s.body[k]
            if not isinstance(f, Or):
                raise GentzenError(f"lor: context formula {k} is not a disjunction")
            left = s.body[:k] + (f.left,) + s.body[k + 1 :]
            right = s.body[:k] + (f.right,) + s.body[k + 1 :]
            return [Sequent(s.head, _dedup(left)), Sequent(s.head, _dedup(right))]
        case "limp":
            f = s.body[k]
            if not isinstance(f, Implies):
                raise GentzenError(f"limp: context formula {k} is not an implication")
            keep = Sequent(f.left, s.body)  # A->B stays in the context
            drop = s.body[:k] + (f.right,) + s.body[k + 1 :]
            return [keep, Sequent(s.head, _dedup(drop))]
        case "labs":
            if s.body[k] != BOTTOM:
                raise GentzenError(f"labs: context formula {k} is not absurdity")
            return []
        case "ax":
            if not isinstance(s.head, (SOVar, Bottom)):
                raise GentzenError("ax: the goal is not atomic")
            if s.body[k] != s.head:
                raise GentzenError(f"ax: context formula {k} does not match the goal")
            return []
        case _:
            raise GentzenError(f"unknown reduction rule {rule!r}")


def reduce(state: SequentListState, step: ReductionStep) -> SequentListState:
    """Apply one reduction step, replacing the selected sequent by its
    premises.  Raises CycleError when a premise repeats a sequent on the
    selected sequent's own derivation path."""
    n = step.sequent
    if n < 0 or n >= len(state.sequents):
        raise GentzenError(f"sequent index {n} out of range")
    target = state.sequents[n]
    premises = _premises(target, step)
    path = state.ancestors[n] | {target.key()}
    for p in premises:
        if p.key() in path:
            raise CycleError(f"step {step} repeats sequent {format_sequent(p)!r} on its own path")
    anc = frozenset(path)
    return SequentListState(
        sequents=state.sequents[:n] + tuple(premises) + state.sequents[n + 1 :],
        ancestors=state.ancestors[:n] + tuple(anc for _ in premises) + state.ancestors[n + 1 :],
        memory=state.memory | {p.key() for p in premises},
        history=state.history + (step,),
    )


# ---------------------------------------------------------------------------
# Search


def _candidate_steps(s: Sequent) -> Iterator[ReductionStep]:
    """Applicable (rule, index) pairs on sequent 0, in the fixed search
    order: ax, labs, land, rand, rimp, lor, limp, ror1, ror2."""
    if isinstance(s.head, (SOVar, Bottom)):
        for k, f in enumerate(s.body):
            if f == s.head:
                yield ReductionStep("ax", 0, k)
    for k, f in enumerate(s.body):
        if f == BOTTOM:
            yield ReductionStep("labs", 0, k)
    for k, f in enumerate(s.body):
        if isinstance(f, And):
            yield ReductionStep("land", 0, k)
    if isinstance(s.head, And):
        yield ReductionStep("rand", 0)
    if isinstance(s.head, Implies):
        yield ReductionStep("rimp", 0)
    for k, f in enumerate(s.body):
        if isinstance(f, Or):
            yield ReductionStep("lor", 0, k)
    for k, f in enumerate(s.body):
        if isinstance(f, Implies):
            yield ReductionStep("limp", 0, k)
    if isinstance(s.head, Or):
        yield ReductionStep("ror1", 0)
        yield ReductionStep("ror2", 0)


def _search(state: SequentListState) -> SequentListState | None:
    if not state.sequents:
        return state
    for step in _candidate_steps(state.sequents[0]):
        try:
            new = reduce(state, step)
        except CycleError:
            continue
        found = _search(new)
        if found is not None:
            return found
    return None


@dataclass(frozen=True)
class AutoResult:
    proved: bool
    goal: Formula
    history: tuple[ReductionStep, ...]

    def history_strings(self) -> list[str]:
        return [str(s) for s in self.history]


def auto(goal: Formula | str) -> AutoResult:
    """Brute-force cycle-avoiding search.  A success history, replayed via
    reduce from the initial state, empties the sequent list; a failure is a
    definitive no-proof verdict for intuitionistic propositional logic."""
    state = SequentListState.initial(goal)
    goal_formula = state.sequents[0].head
    found = _search(state)
    if found is None:
        return AutoResult(False, goal_formula, ())
    return AutoResult(True, goal_formula, found.history)


# ---------------------------------------------------------------------------
# Linear sequent-proof reconstruction


@dataclass(frozen=True)
class SequentProofLine:
    sequent: Sequent
    rule: str
    body_index: int | None
    premises: tuple[int, ...]

    def rule_label(self) -> str:
        label = self.rule.capitalize()
        if self.rule in _BODY_RULES:
            label += str(self.body_index)
        return label


def reconstruct(history, goal: Formula | str) -> list[SequentProofLine]:
    """Bottom-up linear listing of the sequent proof encoded by a history
    that empties the initial state: premises precede their conclusion and
    the last line is ``=> goal``."""
    steps = [parse_step(s) if isinstance(s, str) else s for s in history]
    state = SequentListState.initial(goal)
    # Node tree mirroring the reductions; slots[i] corresponds to sequents[i].
    nodes: list[dict] = []
    root = {"sequent": state.sequents[0], "step": None, "children": []}
    slots = [root]
    for i, step in enumerate(steps):
        try:
            new_state = reduce(state, step)
        except GentzenError as exc:
            raise GentzenError(f"history step {i} ({step}) fails replay: {exc}") from exc
        n = step.sequent
        target = slots[n]
        target["step"] = step
        kids = [
            {"sequent": s, "step": None, "children": []}
            for s in new_state.sequents[n : n + len(new_state.sequents) - len(state.sequents) + 1]
        ]
        target["children"] = kids
        slots[n : n + 1] = kids
        state = new_state
    if state.sequents:
        raise GentzenError(f"history does not empty the sequent list ({len(state.sequents)} left)")

    lines: list[SequentProofLine] = []

    def emit(node) -> int:
        premise_lines = tuple(emit(c) for c in node["children"])
        step = node["step"]
        lines.append(SequentProofLine(node["sequent"], step.rule, step.body_index, premise_lines))
        return len(lines) - 1

    emit(root)
    return lines


def format_reconstruction(lines: list[SequentProofLine]) -> list[str]:
    out = []
    for i, line in enumerate(lines):
        premises = " ".join(str(p) for p in line.premises)
        out.append(f"{i}.  {format_sequent(line.sequent)}   {line.rule_label()}  {premises}".rstrip())
    return out
