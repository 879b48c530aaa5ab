"""Packaged golden blow-up paths, one file per k."""

from importlib import resources
from typing import Optional


def golden_path(k: int) -> Optional[str]:
    """Text of the packaged path for k, or None when there is none (k <= 2 needs no path)."""
    if k <= 2:
        return ""
    f = resources.files(__name__) / f"k{k}.tree"
    if not f.is_file():
        return None
    return f.read_text()


def available() -> list:
    return sorted(int(p.name[1:-5]) for p in resources.files(__name__).iterdir() if p.name.endswith(".tree"))


def packaged_file(name: str) -> Optional[str]:
    """Text of a packaged path file by base name (e.g. "k3.tree"), or None."""
    f = resources.files(__name__) / name
    return f.read_text() if name.endswith(".tree") and f.is_file() else None
