"""Bundled sample inputs: annotated paragraphs, replay fixtures, and traces."""
from __future__ import annotations

from importlib.resources import files
from pathlib import Path


def fixture_path(name: str) -> Path:
    path = Path(str(files(__package__).joinpath(name)))
    if not path.exists():
        raise FileNotFoundError(f"no bundled fixture named {name!r}")
    return path


def fixture_text(name: str) -> str:
    return files(__package__).joinpath(name).read_text("utf-8")
