"""Instance files: schema validation and parsing."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

import jsonschema
from referencing import Registry, Resource

from hellylab import geometry
from hellylab.errors import SchemaError
from hellylab.hypergraph import Hypergraph

SCHEMAS = ("hypergraph", "geometry", "instance", "cover", "certificate", "trace")


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    return json.loads(resources.files("hellylab").joinpath("schemas", f"{name}.json").read_text("utf-8"))


@lru_cache(maxsize=None)
def _registry() -> Registry:
    return Registry().with_resources(
        (f"{name}.json", Resource.from_contents(load_schema(name))) for name in SCHEMAS)


def validate(doc, name: str) -> None:
    """Raise SchemaError unless ``doc`` matches the shipped schema ``name``."""
    validator = jsonschema.Draft202012Validator(load_schema(name), registry=_registry())
    err = jsonschema.exceptions.best_match(validator.iter_errors(doc))
    if err is not None:
        where = "/".join(str(p) for p in err.absolute_path) or "<root>"
        raise SchemaError(f"{name} schema violation at {where}: {err.message}")


@dataclass
class Instance:
    version: str
    objects: list = field(default_factory=list)
    hypergraph: Hypergraph | None = None
    spec: dict = field(default_factory=dict)
    families: list[list[int]] | None = None
    blocks: list[list[str]] | None = None


def parse_instance(doc) -> Instance:
    validate(doc, "instance")
    objs = [geometry.from_json(o) for o in doc.get("objects", [])]
    h = Hypergraph.from_json(doc["hypergraph"]) if "hypergraph" in doc else None
    fams = doc.get("families")
    if fams is not None:
        n = len(objs) if objs else (h.n if h else 0)
        seen: set[int] = set()
        for f in fams:
            if any(i >= n for i in f):
                raise SchemaError(f"family index out of range (have {n} objects)")
            if seen.intersection(f):
                raise SchemaError("families must be pairwise disjoint")
            seen.update(f)
    return Instance(doc["version"], objs, h, dict(doc.get("spec", {})), fams, doc.get("blocks"))


def load_instance(path: str) -> Instance:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON ({exc})") from None
    return parse_instance(doc)
