"""Search and enumeration caps.

Every exhaustive routine checks its instance size against one of these caps
and raises :class:`~hellylab.errors.SizeLimitError` instead of truncating.
The environment variable ``HELLYLAB_LIMIT`` overrides defaults with a
comma-separated list of ``name=value`` pairs, e.g.
``HELLYLAB_LIMIT="vertices=60,lattice=5000000"``.
"""

from __future__ import annotations

import os

from hellylab.errors import SizeLimitError

DEFAULTS: dict[str, int] = {
    # vertices in exhaustive independence / clique search
    "vertices": 40,
    # s * t in forbidden-pattern search
    "pattern": 20,
    # integer points enumerated for lattice membership
    "lattice": 10**6,
    # q-subsets, tuples, triples, cells and other plain enumerations
    "enumeration": 10**6,
    # nodes visited by backtracking searches
    "search_nodes": 5 * 10**6,
    # cover instances
    "candidates": 10**4,
    "targets": 10**3,
    # structural variables of an exact LP
    "lp_variables": 4000,
    # edges for exhaustive / pruned lambda search
    "lambda_exhaustive": 20,
    "lambda": 80,
    # bits allowed in a planned block size before it is reported as unbounded
    "plan_bits": 4096,
}


def _parse_env(raw: str) -> dict[str, int]:
    out = {}
    for item in raw.split(","):
        item = item.strip()
        if not item:
            continue
        name, sep, value = item.partition("=")
        name = name.strip()
        if not sep or name not in DEFAULTS:
            raise ValueError(f"bad HELLYLAB_LIMIT entry {item!r}")
        out[name] = int(value)
    return out


def get_limit(name: str, override: int | None = None) -> int:
    if override is not None:
        return override
    raw = os.environ.get("HELLYLAB_LIMIT")
    if raw:
        env = _parse_env(raw)
        if name in env:
            return env[name]
    return DEFAULTS[name]


def check(name: str, size, override: int | None = None, what: str | None = None) -> None:
    """Raise ``SizeLimitError`` when ``size`` exceeds the cap called ``name``."""
    cap = get_limit(name, override)
    if size > cap:
        raise SizeLimitError(what or name, size, cap)


class NodeBudget:
    """Counter for backtracking searches; raises once the node cap is spent."""

    __slots__ = ("left", "cap", "what")

    def __init__(self, what: str, override: int | None = None):
        self.cap = get_limit("search_nodes", override)
        self.left = self.cap
        self.what = what

    def tick(self) -> None:
        self.left -= 1
        if self.left < 0:
            raise SizeLimitError(f"{self.what} search nodes", self.cap + 1, self.cap)
