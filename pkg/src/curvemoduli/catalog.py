"""The bundled example curves with their expected invariants."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

from .coeffcore import InputError
from .curvegerm import CurveGerm


@lru_cache(maxsize=1)
def _entries() -> dict:
    text = resources.files("curvemoduli").joinpath("data/catalog.json").read_text()
    return {e["name"]: e for e in json.loads(text)["curves"]}


def catalog_names() -> list[str]:
    return list(_entries())


def catalog_entry(name: str) -> dict:
    try:
        return _entries()[name]
    except KeyError:
        raise InputError(f"no catalog curve named {name!r}; known: {', '.join(catalog_names())}") from None


def catalog_curve(name: str) -> CurveGerm:
    entry = catalog_entry(name)
    doc = {k: entry[k] for k in ("field", "branches", "equation") if k in entry}
    doc["name"] = name
    return CurveGerm.from_json(doc)


def expected(name: str) -> dict:
    return dict(catalog_entry(name).get("expected", {}))
