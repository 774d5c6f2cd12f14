"""ndkernel: a natural deduction proof kernel for first-order logic with
equality, a class-forming operator and second-order propositional
variables, plus an automatic prover for intuitionistic propositional
validities."""

from .environment import ProofEnvironment, Signature, TheoremStore
from .kernel import LinearProof, RuleInvocation, apply_rule, check_theory, replay_log
from .shell import Session, dispatch

__all__ = [
    "ProofEnvironment",
    "Signature",
    "TheoremStore",
    "LinearProof",
    "RuleInvocation",
    "apply_rule",
    "check_theory",
    "replay_log",
    "Session",
    "dispatch",
]

__version__ = "0.1.0"
