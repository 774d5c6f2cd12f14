"""Bundled theory directories (each a directory of theorem files)."""

from __future__ import annotations

from pathlib import Path

_ROOT = Path(__file__).parent


def theory_dirs() -> list[Path]:
    return sorted(p for p in _ROOT.iterdir() if p.is_dir())


def theory_dir(name: str) -> Path:
    p = _ROOT / name
    if not p.is_dir():
        raise FileNotFoundError(f"no bundled theory named {name!r}")
    return p
