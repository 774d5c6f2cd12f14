"""Human-facing command layer: sessions, the command dispatcher and the
interactive REPL.

Commands use the call notation of the transcripts, e.g.
``EqualitySub(0,1,[0])`` or ``Hyp("Elem(z,union(x,y))")``, so session logs
paste directly.  A failed command never mutates session state.
"""

from __future__ import annotations

import ast
import dataclasses
import uuid
from dataclasses import dataclass
from pathlib import Path

from . import gentzen, kernel, theories
from .environment import (
    EnvironmentError_,
    ProofEnvironment,
    TheoremFileError,
    TheoremStore,
    is_validity,
    theorem_document,
)
from .kernel import (
    KernelError,
    LinearProof,
    ReplayError,
    RuleInvocation,
    apply_entries,
    apply_rule,
    format_proof,
    hypotheses_of,
    replay_log,
    used_theorems,
)
from .syntax import LexError, ParseError, PositionError, display, parse_formula

_ERRORS = (
    KernelError,
    ReplayError,
    EnvironmentError_,
    TheoremFileError,
    ParseError,
    LexError,
    PositionError,
    gentzen.GentzenError,
)


@dataclass
class CommandResult:
    ok: bool
    lines: list[str] | None = None
    message: str | None = None


def default_store(extra: list[str | Path] | None = None) -> TheoremStore:
    paths = list(extra or [])
    paths.extend(theories.theory_dirs())
    return TheoremStore(paths)


def _freeze(value):
    if isinstance(value, list):
        return tuple(_freeze(v) for v in value)
    return value


def make_invocation(name: str, args) -> RuleInvocation:
    return RuleInvocation(name, tuple(_freeze(a) for a in args))


class Session:
    """One interactive proof: an environment value plus a linear proof.
    Commands apply in arrival order; failures leave the state unchanged."""

    def __init__(self, store: TheoremStore | None = None, env: ProofEnvironment | None = None) -> None:
        self.id = uuid.uuid4().hex
        self.env = env or ProofEnvironment.default()
        self.proof = LinearProof()
        self.store = store or default_store()
        self.transcript: list[tuple[str, bool]] = []
        self.auto_goal: str | None = None

    # -- views ---------------------------------------------------------------

    def proof_lines(self) -> list[str]:
        return format_proof(self.proof, self.env.signature)

    def log_calls(self) -> list[str]:
        return [f"{i}. {inv.call_text()}" for i, inv in enumerate(self.proof.log)]

    def saved_log(self) -> list[dict]:
        entries = [inv.to_json() for inv in self.proof.log]
        entries.extend(
            {"rule": "Qed", "args": [e.pos]} for e in self.proof.elements if e.qed
        )
        return entries

    def document(self, name: str | None = None) -> dict:
        conclusion = self.proof.elements[-1].formula if self.proof.elements else None
        doc = theorem_document(self.env, self.saved_log(), conclusion)
        if name:
            doc["name"] = name
        return doc

    # -- command execution -----------------------------------------------

    def execute(self, name: str, args: list) -> CommandResult:
        self.transcript.append((make_invocation(name, args).call_text(), True))
        try:
            result = self._execute(name, list(args))
        except _ERRORS as exc:
            self.transcript[-1] = (self.transcript[-1][0], False)
            return CommandResult(False, message=str(exc))
        return result

    def _execute(self, name: str, args: list) -> CommandResult:
        if name in kernel.RULES:
            apply_rule(self.env, self.proof, make_invocation(name, args))
            return CommandResult(True, lines=self.proof_lines())
        handler = getattr(self, f"_cmd_{name}", None)
        if handler is None:
            raise KernelError(f"unknown command {name!r}")
        return handler(*args)

    # -- proof commands ----------------------------------------------------

    def _cmd_Qed(self, n: int) -> CommandResult:
        if kernel.qed(self.proof, n):
            return CommandResult(True, lines=self.proof_lines())
        return CommandResult(False, message=f"line {n} still depends on undischarged hypotheses")

    def _cmd_Undo(self) -> CommandResult:
        kernel.undo(self.proof)
        return CommandResult(True, lines=self.proof_lines())

    def _cmd_Hypotheses(self, n: int) -> CommandResult:
        hyps = sorted(hypotheses_of(self.proof, n))
        return CommandResult(True, lines=[kernel.format_line(self.proof, h, self.env.signature) for h in hyps])

    def _cmd_ShowProof(self) -> CommandResult:
        return CommandResult(True, lines=self.proof_lines())

    def _cmd_ShowLog(self) -> CommandResult:
        return CommandResult(True, lines=self.log_calls())

    def _cmd_UsedTheorems(self) -> CommandResult:
        return CommandResult(True, lines=[str(i) for i in used_theorems(self.proof)])

    def _cmd_GenerateProof(self) -> CommandResult:
        proof, verdict = replay_log(self.env, list(self.proof.log))
        self.proof = proof
        lines = self.proof_lines()
        if verdict is False:
            return CommandResult(False, lines=lines, message="final line is not Qed")
        return CommandResult(True, lines=lines)

    # -- environment commands ------------------------------------------------

    def _cmd_NewAx(self, text: str) -> CommandResult:
        self.env = self.env.add_axiom(text)
        return CommandResult(True, lines=self._listing(self.env.axioms))

    def _cmd_AddTheorem(self, text: str) -> CommandResult:
        self.env = self.env.add_theorem(text)
        return CommandResult(True, lines=self._listing(self.env.theorems))

    def _cmd_AddPredicate(self, name: str, arity: int, prefix: bool = True) -> CommandResult:
        self.env = self.env.declare("predicate", name, arity, "prefix" if prefix else "infix")
        return CommandResult(True)

    def _cmd_AddFunction(self, name: str, arity: int, prefix: bool = True) -> CommandResult:
        self.env = self.env.declare("function", name, arity, "prefix" if prefix else "infix")
        return CommandResult(True)

    def _cmd_AddConstants(self, names) -> CommandResult:
        env = self.env
        for n in [names] if isinstance(names, str) else names:
            env = env.declare("constant", n)
        self.env = env
        return CommandResult(True)

    _cmd_AddConstant = _cmd_AddConstants

    def _cmd_AddVariables(self, names) -> CommandResult:
        env = self.env
        for n in [names] if isinstance(names, str) else names:
            env = env.declare("variable", n)
        self.env = env
        return CommandResult(True)

    _cmd_AddVariable = _cmd_AddVariables

    def _cmd_NewDef(self, name: str, params, body: str) -> CommandResult:
        params = [params] if isinstance(params, str) else list(params)
        self.env = self.env.new_def(name, params, body)
        return CommandResult(True, lines=self._definition_lines())

    def _cmd_NewDefEq(self, equation: str) -> CommandResult:
        self.env = self.env.new_def_eq(equation)
        return CommandResult(True, lines=self._listing(self.env.def_equations))

    def _cmd_SetPretty(self, name: str, template: str) -> CommandResult:
        self.env = self.env.set_pretty(name, template)
        return CommandResult(True)

    def _cmd_ShowAxioms(self) -> CommandResult:
        return CommandResult(True, lines=self._listing(self.env.axioms))

    def _cmd_ShowTheorems(self) -> CommandResult:
        return CommandResult(True, lines=self._listing(self.env.theorems))

    def _cmd_ShowDefEquations(self) -> CommandResult:
        return CommandResult(True, lines=self._listing(self.env.def_equations))

    def _cmd_ShowDefinitions(self) -> CommandResult:
        return CommandResult(True, lines=self._definition_lines())

    def _listing(self, formulas) -> list[str]:
        sig = self.env.signature
        return [f"{i}. {display(f, sig)}" for i, f in enumerate(formulas)]

    def _definition_lines(self) -> list[str]:
        sig = self.env.signature
        out = []
        for d in self.env.definitions:
            head = display(parse_formula(f"{d.name}({','.join(d.params)})", _with_vars(sig, d.params)), sig)
            out.append(f"{head} <-> {display(d.body, sig)}")
        return out

    # -- persistence -----------------------------------------------------

    def _cmd_Save(self, name: str) -> CommandResult:
        path = self.store.write(name, self.document(name))
        return CommandResult(True, lines=[str(path)])

    def _cmd_Load(self, name: str) -> CommandResult:
        doc = self.store.read(name)
        env = ProofEnvironment.from_json(doc)
        proof = apply_entries(env, [RuleInvocation.from_json(e) for e in doc["log"]])
        self.env, self.proof = env, proof
        return CommandResult(True, lines=self.proof_lines())

    def _cmd_ViewTheorem(self, name: str) -> CommandResult:
        doc = self.store.read(name)
        if not doc.get("conclusion"):
            raise TheoremFileError(f"{name!r} has no proved conclusion")
        env = ProofEnvironment.from_json(doc)
        shown = display(parse_formula(doc["conclusion"], env.signature), env.signature)
        return CommandResult(True, lines=[f"{name} : {shown}"])

    def _cmd_LoadTheorem(self, name: str) -> CommandResult:
        doc = self.store.read(name)
        if not doc.get("conclusion"):
            raise TheoremFileError(f"{name!r} has no proved conclusion")
        stored = ProofEnvironment.from_json(doc)
        conclusion = parse_formula(doc["conclusion"], stored.signature)
        if not is_validity(conclusion) and not stored.matches(self.env):
            raise TheoremFileError(
                f"{name!r} was saved in a different environment and is not a logical validity"
            )
        _, verdict = replay_log(stored, [RuleInvocation.from_json(e) for e in doc["log"]])
        if not verdict:
            raise TheoremFileError(f"{name!r} does not replay to a Qed final line")
        self.env = self.env.add_theorem(conclusion)
        return CommandResult(True, lines=self._listing(self.env.theorems))

    def _cmd_ViewTheory(self, dirname: str) -> CommandResult:
        store = TheoremStore([dirname])
        lines = []
        for n in store.names():
            doc = store.read(n)
            if doc.get("conclusion"):
                env = ProofEnvironment.from_json(doc)
                lines.append(f"{n} : {display(parse_formula(doc['conclusion'], env.signature), env.signature)}")
            else:
                lines.append(f"{n} : (environment)")
        return CommandResult(True, lines=lines)

    def _cmd_CheckTheory(self, names) -> CommandResult:
        names = [names] if isinstance(names, str) else list(names)
        report = kernel.check_theory(self.store, names)
        lines = [
            f"{item.name}: {item.status}" + (f" ({item.detail})" if item.detail else "")
            for item in report.items
        ]
        return CommandResult(report.ok, lines=lines)

    # -- automatic prover ------------------------------------------------

    def _cmd_Auto(self, formula: str) -> CommandResult:
        gentzen.SequentListState.initial(formula)  # validate now
        self.auto_goal = formula
        return CommandResult(True)

    def _cmd_Prove(self) -> CommandResult:
        if self.auto_goal is None:
            raise gentzen.GentzenError("no goal set; call Auto(formula) first")
        result = gentzen.auto(self.auto_goal)
        if not result.proved:
            return CommandResult(False, message="no intuitionistic proof exists")
        lines = [f"{i + 1}. {s}" for i, s in enumerate(result.history_strings())]
        lines.append("")
        lines.extend(gentzen.format_reconstruction(gentzen.reconstruct(result.history, self.auto_goal)))
        return CommandResult(True, lines=lines)


def _with_vars(sig, names):
    return dataclasses.replace(sig, variables=sig.variables | set(names))


# ---------------------------------------------------------------------------
# Text command parsing


def parse_command(text: str) -> tuple[str, list]:
    """Parse the transcript call notation: Name(arg, ...) with literal
    arguments (strings, ints, booleans, lists)."""
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise KernelError(f"cannot parse command: {exc.msg}") from exc
    call = tree.body
    if not isinstance(call, ast.Call) or not isinstance(call.func, ast.Name) or call.keywords:
        raise KernelError("commands have the form Name(arg, ...)")
    args = []
    for a in call.args:
        try:
            args.append(ast.literal_eval(a))
        except ValueError as exc:
            raise KernelError("command arguments must be literals") from exc
    return call.func.id, args


def dispatch(session: Session, command_line: str) -> CommandResult:
    try:
        name, args = parse_command(command_line)
    except KernelError as exc:
        return CommandResult(False, message=str(exc))
    return session.execute(name, args)


def repl(env_file: str | None = None, store: TheoremStore | None = None) -> None:
    session = Session(store=store)
    if env_file:
        doc_path = Path(env_file)
        session.store = default_store([doc_path.parent])
        result = session.execute("Load", [doc_path.stem])
        if not result.ok:
            print(result.message)
    print("ndkernel interactive proof shell")
    print('commands use call notation, e.g. Hyp("Elem(z,union(x,y))"); exit() to quit')
    while True:
        try:
            line = input(">>> ")
        except EOFError:
            print()
            return
        line = line.strip()
        if not line:
            continue
        if line in ("exit()", "quit()", "exit", "quit"):
            return
        result = dispatch(session, line)
        for out in result.lines or []:
            print(out)
        if result.ok:
            print("True")
        else:
            print(result.message)
