"""Access to the JSON schemas shipped with the package."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources


@lru_cache(maxsize=None)
def _document() -> dict:
    return json.loads(resources.files("zerosum").joinpath("schemas/outputs.json").read_text())


def names() -> list[str]:
    return sorted(_document()["$defs"])


def load_schema(name: str) -> dict:
    """A standalone schema for the output ``name`` (one of :func:`names`)."""
    doc = _document()
    if name not in doc["$defs"]:
        raise KeyError(f"unknown schema {name!r}; available: {names()}")
    return {"$schema": doc["$schema"], "$defs": doc["$defs"], "$ref": f"#/$defs/{name}"}
