"""Shipped input files: a 30-state permutation with cycle ranks 2, 3, 6, 8
and 11, and a two-state machine with clock periods (10, 7) and one
interchange point."""

from importlib import resources
from pathlib import Path


def fixture_path(name: str) -> Path:
    """Filesystem path of a shipped fixture, e.g. ``fixture_path("figure1.json")``."""
    path = resources.files(__package__) / name
    return Path(str(path))
