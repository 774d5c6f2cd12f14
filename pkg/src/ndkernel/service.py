"""JSON-over-HTTP session service for the workbench.

Every state change goes through the same execution path as the shell, so a
command sequence issued here yields exactly the proof a REPL session would
produce.  Commands on one session are serialized.
"""

from __future__ import annotations

import threading

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from . import gentzen, kernel
from .environment import TheoremFileError, TheoremStore
from .shell import CommandResult, Session, default_store
from .syntax import display, render


class CommandBody(BaseModel):
    command: str
    args: list = []


class SaveBody(BaseModel):
    name: str


class CheckBody(BaseModel):
    names: list[str]


class AutoBody(BaseModel):
    formula: str


def create_app(store: TheoremStore | None = None) -> FastAPI:
    app = FastAPI(title="ndkernel session service")
    store = store or default_store()
    sessions: dict[str, Session] = {}
    locks: dict[str, threading.Lock] = {}

    def get_session(sid: str) -> Session:
        s = sessions.get(sid)
        if s is None:
            raise HTTPException(status_code=404, detail=f"no session {sid!r}")
        return s

    def result_payload(session: Session, result: CommandResult) -> dict:
        return {
            "ok": result.ok,
            "message": result.message,
            "lines": result.lines,
            "proof": proof_payload(session),
        }

    def proof_payload(session: Session) -> dict:
        sig = session.env.signature
        elements = [
            {
                "index": e.pos,
                "formula": display(e.formula, sig),
                "ascii": render(e.formula, "ascii"),
                "rule": e.rule,
                "parents": list(e.parents),
                "qed": e.qed,
                "dischargedBy": list(e.discharged_by),
            }
            for e in session.proof.elements
        ]
        return {"lines": session.proof_lines(), "elements": elements}

    @app.post("/session")
    def create_session() -> dict:
        s = Session(store=store)
        sessions[s.id] = s
        locks[s.id] = threading.Lock()
        return {"id": s.id}

    @app.get("/session/{sid}/proof")
    def get_proof(sid: str) -> dict:
        return proof_payload(get_session(sid))

    @app.get("/session/{sid}/environment")
    def get_environment(sid: str) -> dict:
        s = get_session(sid)
        sig = s.env.signature
        return {
            "name": s.env.name,
            "axioms": [display(f, sig) for f in s.env.axioms],
            "theorems": [display(f, sig) for f in s.env.theorems],
            "defEquations": [display(f, sig) for f in s.env.def_equations],
            "definitions": s._definition_lines(),
            "classGuard": s.env.class_guard,
            "signature": sig.to_json(),
        }

    @app.get("/session/{sid}/log")
    def get_log(sid: str) -> dict:
        s = get_session(sid)
        return {"log": s.saved_log(), "calls": s.log_calls()}

    @app.post("/session/{sid}/command")
    def run_command(sid: str, body: CommandBody) -> dict:
        s = get_session(sid)
        with locks[sid]:
            result = s.execute(body.command, body.args)
        return result_payload(s, result)

    @app.post("/session/{sid}/undo")
    def undo(sid: str) -> dict:
        s = get_session(sid)
        with locks[sid]:
            result = s.execute("Undo", [])
        return result_payload(s, result)

    @app.post("/session/{sid}/save")
    def save(sid: str, body: SaveBody) -> dict:
        s = get_session(sid)
        with locks[sid]:
            result = s.execute("Save", [body.name])
        if not result.ok:
            raise HTTPException(status_code=400, detail=result.message)
        return {"ok": True, "name": body.name, "document": s.document(body.name)}

    @app.get("/theorem/{name}")
    def get_theorem(name: str) -> dict:
        try:
            return store.read(name)
        except TheoremFileError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc

    @app.post("/check")
    def check(body: CheckBody) -> dict:
        report = kernel.check_theory(store, body.names)
        return {
            "ok": report.ok,
            "items": [{"name": i.name, "status": i.status, "detail": i.detail} for i in report.items],
        }

    @app.post("/auto")
    def run_auto(body: AutoBody) -> dict:
        from .syntax import LexError, ParseError

        try:
            result = gentzen.auto(body.formula)
        except (gentzen.GentzenError, ParseError, LexError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        payload = {
            "proved": result.proved,
            "formula": display(result.goal),
            "history": result.history_strings(),
            "reconstruction": [],
        }
        if result.proved:
            lines = gentzen.reconstruct(result.history, result.goal)
            payload["reconstruction"] = gentzen.format_reconstruction(lines)
        return payload

    @app.get("/rules")
    def rules() -> dict:
        return {
            "rules": kernel.rule_manifest(),
            "commands": ["Qed", "Undo", "Hypotheses", "ShowProof", "ShowLog"],
        }

    return app


def serve(host: str = "127.0.0.1", port: int = 8457, store: TheoremStore | None = None) -> None:
    import uvicorn

    uvicorn.run(create_app(store), host=host, port=port)
