"""JSON round-trip for explicit finite categories (schema ``category.v1``).

Format::

    {"schema": "category.v1",
     "objects": ["a", ...],
     "morphisms": [{"id": "f", "src": "a", "dst": "b"}, ...],
     "identities": {"a": "id_a", ...},
     "compose": [["f", "g", "fg"], ...]}   # f-then-g = fg

Serialization is deterministic (insertion order preserved) and
round-trips bit-exactly.
"""

from __future__ import annotations

import json

from .core import FiniteCategory, StructureError

SCHEMA = "category.v1"


def category_to_dict(cat: FiniteCategory) -> dict:
    return {
        "schema": SCHEMA,
        "name": cat.name,
        "objects": list(cat.objects),
        "morphisms": [{"id": m, "src": cat.src(m), "dst": cat.dst(m)}
                      for m in cat.morphisms],
        "identities": {o: cat.id_of(o) for o in cat.objects},
        "compose": [[f, g, h] for (f, g), h in sorted(cat._compose.items())],
    }


def category_from_dict(d: dict) -> FiniteCategory:
    if d.get("schema") != SCHEMA:
        raise StructureError(f"expected schema {SCHEMA!r}, got {d.get('schema')!r}")
    try:
        mors = [(m["id"], m["src"], m["dst"]) for m in d["morphisms"]]
        comp = {(f, g): h for f, g, h in d["compose"]}
        return FiniteCategory(d["objects"], mors, d["identities"], comp,
                              name=d.get("name", ""))
    except (KeyError, TypeError) as exc:
        raise StructureError(f"malformed category.v1 payload: {exc}")


def dumps(cat: FiniteCategory) -> str:
    return json.dumps(category_to_dict(cat), indent=1, sort_keys=False)


def loads(text: str) -> FiniteCategory:
    return category_from_dict(json.loads(text))
