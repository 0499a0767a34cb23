"""
Example automorphisms, covers and graph maps shipped with the package.

Automorphisms are addressed as ``"file:name"``, e.g. ``"twist:twist_b"`` for
the entry ``@twist_b`` of ``data/twist.aut``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .free_group import FreeAutomorphism, parse_automorphisms
from .laurent import FiniteAbelianQuotient
from .shadow import GraphMap


def data_path(*parts: str) -> Path:
    return Path(str(resources.files("coverreps").joinpath("data", *parts)))


@lru_cache(maxsize=None)
def bundled_automorphisms() -> dict[str, FreeAutomorphism]:
    out = {}
    for path in sorted(data_path().glob("*.aut")):
        for name, aut in parse_automorphisms(path.read_text(), source=path.name):
            out[f"{path.stem}:{name}"] = aut
    return out


def automorphism(ref: str) -> FreeAutomorphism:
    try:
        return bundled_automorphisms()[ref]
    except KeyError:
        raise KeyError(f"no bundled automorphism {ref!r}") from None


@dataclass(frozen=True)
class BundledCover:
    name: str
    automorphisms: tuple[str, ...]
    quotient: FiniteAbelianQuotient

    def generators(self) -> list[FreeAutomorphism]:
        return [automorphism(r) for r in self.automorphisms]


@lru_cache(maxsize=None)
def bundled_covers() -> tuple[BundledCover, ...]:
    raw = json.loads(data_path("covers.json").read_text())
    out = []
    for entry in raw["covers"]:
        q = FiniteAbelianQuotient(tuple(entry["invariant_factors"]),
                                  tuple(tuple(r) for r in entry["projection"]))
        out.append(BundledCover(entry["name"], tuple(entry["automorphisms"]), q))
    return tuple(out)


def bundled_graph_maps() -> dict[str, GraphMap]:
    out = {}
    for path in sorted(data_path("graph_maps").glob("*.json")):
        gm = GraphMap.from_dict(json.loads(path.read_text()))
        out[gm.name or path.stem] = gm
    return out
