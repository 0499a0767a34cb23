"""
Breadth-first search through towers of admissible abelian covers for a cover
on which the target automorphism has an eigenvalue off the unit circle, plus
the solvability probe on the image of the generating set.

Each cover in the tower is re-presented as a rose (via its spanning tree) and
the generators are rewritten as automorphisms of the new free group, so every
level reuses the same machinery.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from . import intmat
from .covers import (CoverGraph, NoAdmissibleCover, NotLiftable, admissible_quotients, build_cover,
                     coinvariant_lattice, lift_automorphism, rebase)
from .free_group import FreeAutomorphism, Word, derived_series_words, format_automorphism
from .homrep import chain_action, homology_rep
from .laurent import FiniteAbelianQuotient
from .spectra import (Inconclusive, NonsolvableWitness, SolvableCertificate, SpectralReport, kronecker_test,
                      solvability_probe)


@dataclass(frozen=True)
class SearchConfig:
    primes: tuple[int, ...] = (2, 3, 5)
    max_depth: int = 3
    max_covers_per_level: int = 64
    modulus_cap: int = 7  # largest deck group order considered
    max_homology_rank: int = 64  # covers above this are skipped, not tested
    derived_samples: int = 2  # derived-series words of the generators checked per cover
    probe_depth: int = 2
    probe_word_budget: int = 16
    probe_max_words: int = 2000

    def __post_init__(self):
        object.__setattr__(self, "primes", tuple(sorted(int(p) for p in self.primes)))
        if len(set(self.primes)) != len(self.primes):
            raise ValueError("primes must be distinct")
        if any(p < 2 for p in self.primes):
            raise ValueError("moduli must be at least 2")
        for name in ("max_depth", "max_covers_per_level", "modulus_cap", "max_homology_rank",
                     "probe_depth", "probe_word_budget", "probe_max_words"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.derived_samples < 0:
            raise ValueError("derived_samples must be non-negative")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["primes"] = list(self.primes)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SearchConfig":
        return cls(**{k: tuple(v) if k == "primes" else v for k, v in d.items()})


@dataclass
class CoverRecord:
    level: int
    path: list[dict]
    order: int
    rank: int
    homology_rank: int
    checks: dict[str, bool]
    target: SpectralReport | None
    derived: list[dict] = field(default_factory=list)
    skipped: str | None = None

    def to_dict(self) -> dict:
        return {"level": self.level, "path": self.path, "order": self.order, "rank": self.rank,
                "homology_rank": self.homology_rank, "checks": self.checks,
                "target": self.target.to_dict() if self.target else None,
                "derived": self.derived, "skipped": self.skipped}


@dataclass
class SearchReport:
    config: SearchConfig
    target: FreeAutomorphism
    gamma0: list[FreeAutomorphism]
    covers: list[CoverRecord]
    errors: list[dict]
    verdict: str  # "WitnessFound" or "Exhausted"
    witness_index: int | None = None
    reason: str = ""

    @property
    def witness(self) -> CoverRecord | None:
        return self.covers[self.witness_index] if self.witness_index is not None else None

    @property
    def admissible_covers(self) -> list[CoverRecord]:
        return [c for c in self.covers if c.level > 0]

    def counts(self) -> dict:
        per_level: dict[int, int] = {}
        for c in self.covers:
            per_level[c.level] = per_level.get(c.level, 0) + 1
        return {"covers": len(self.covers), "admissible_covers": len(self.admissible_covers),
                "skipped": sum(1 for c in self.covers if c.skipped),
                "per_level": [per_level.get(k, 0) for k in range(max(per_level, default=-1) + 1)],
                "errors": len(self.errors)}

    def to_dict(self) -> dict:
        verdict: dict = {"kind": self.verdict, "counts": self.counts()}
        if self.witness is not None:
            verdict["path"] = self.witness.path
            verdict["level"] = self.witness.level
            verdict["report"] = self.witness.target.to_dict()
        else:
            verdict["reason"] = self.reason
        return {
            "config": self.config.to_dict(),
            "target": format_automorphism(self.target),
            "gamma0": [format_automorphism(g) for g in self.gamma0],
            "covers": [c.to_dict() for c in self.covers],
            "errors": self.errors,
            "verdict": verdict,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1) + "\n"


@dataclass
class _Node:
    level: int
    path: list[dict]
    gens: tuple[FreeAutomorphism, ...]
    target: FreeAutomorphism


def _homology_matrix(aut: FreeAutomorphism, cover: CoverGraph) -> np.ndarray:
    return homology_rep(chain_action(lift_automorphism(aut, cover))).matrix


def _word_matrix(w: Word, mats: Sequence[np.ndarray], invs: Sequence[np.ndarray]) -> np.ndarray:
    out = intmat.identity(mats[0].shape[0])
    for x in w.letters:
        out = out @ (mats[x - 1] if x > 0 else invs[-x - 1])
    return out


def _derived_reports(mats: Sequence[np.ndarray], samples: int, budget: int) -> list[dict]:
    if samples == 0 or len(mats) < 2:
        return []
    invs = [intmat.int_inverse(m) for m in mats]
    out = []
    for w in derived_series_words(len(mats), 1, budget, limit=samples):
        rep = kronecker_test(_word_matrix(w, mats, invs), with_roots=False)
        out.append({"word": str(w), "verdict": rep.verdict,
                    "char_poly": [int(c) for c in rep.char_poly.coeffs]})
    return out


def _cover_record(node: _Node, q: FiniteAbelianQuotient, cfg: SearchConfig) -> tuple[CoverRecord, _Node | None]:
    cover = build_cover(q)
    path = node.path + [q.describe()]
    lifted = [lift_automorphism(g, cover) for g in node.gens]
    lifted_h = lift_automorphism(node.target, cover)
    n = q.rank
    rank_ok = cover.homology_rank == cover.order * (n - 1) + 1
    checks = {"homology_rank_formula": rank_ok, "generators_lift": True,
              "deck_action_trivial": all(l.deck_trivial for l in lifted)}
    if cover.homology_rank > cfg.max_homology_rank:
        rec = CoverRecord(node.level + 1, path, q.order, n, cover.homology_rank, checks, None,
                          skipped=f"homology rank {cover.homology_rank} above {cfg.max_homology_rank}")
        return rec, None
    h_mat = homology_rep(chain_action(lifted_h)).matrix
    report = kronecker_test(h_mat)
    derived = []
    if cfg.derived_samples and len(lifted) >= 2:
        mats = [homology_rep(chain_action(l)).matrix for l in lifted]
        derived = _derived_reports(mats, cfg.derived_samples, cfg.probe_word_budget)
    rec = CoverRecord(node.level + 1, path, q.order, n, cover.homology_rank, checks, report, derived)
    child = _Node(node.level + 1, path, tuple(rebase(l) for l in lifted), rebase(lifted_h))
    return rec, child


def search_off_circle(h: FreeAutomorphism, gamma0: Sequence[FreeAutomorphism],
                      cfg: SearchConfig | None = None) -> SearchReport:
    """Level-by-level search for an admissible cover where ``h`` has an eigenvalue off the unit circle.

    ``h`` is always included when computing coinvariants, so it lifts with
    trivial deck action whether or not it lies in the group generated by
    ``gamma0``. Failures on a branch are recorded and the search goes on.
    """
    cfg = cfg or SearchConfig()
    gamma0 = list(gamma0)
    if any(g.rank != h.rank for g in gamma0):
        raise ValueError("all automorphisms must have the same rank")
    covers: list[CoverRecord] = []
    errors: list[dict] = []
    base_report = kronecker_test(h.abelianization)
    derived0 = _derived_reports([g.abelianization for g in gamma0], cfg.derived_samples, cfg.probe_word_budget) \
        if len(gamma0) >= 2 else []
    covers.append(CoverRecord(0, [], 1, h.rank, h.rank,
                              {"homology_rank_formula": True, "generators_lift": True, "deck_action_trivial": True},
                              base_report, derived0))
    report = SearchReport(cfg, h, gamma0, covers, errors, "Exhausted")
    if base_report.off_circle:
        report.verdict, report.witness_index = "WitnessFound", 0
        return report
    frontier = [_Node(0, [], tuple(gamma0), h)]
    truncated = False
    for level in range(1, cfg.max_depth + 1):
        next_frontier: list[_Node] = []
        count = 0
        for node in frontier:
            lattice = coinvariant_lattice(list(node.gens) + [node.target])
            quotients: list[FiniteAbelianQuotient] = []
            for p in cfg.primes:
                quotients += admissible_quotients(lattice, p, max_order=cfg.modulus_cap)
            if not quotients:
                err = NoAdmissibleCover(f"no admissible quotient with order <= {cfg.modulus_cap}", level)
                errors.append({"level": level, "path": node.path, "kind": "NoAdmissibleCover",
                               "message": str(err), "free_rank": lattice.free_rank})
                continue
            for q in quotients:
                if count >= cfg.max_covers_per_level:
                    truncated = True
                    break
                count += 1
                try:
                    rec, child = _cover_record(node, q, cfg)
                except NotLiftable as exc:
                    errors.append({"level": level, "path": node.path + [q.describe()], "kind": "NotLiftable",
                                   "message": str(exc)})
                    continue
                covers.append(rec)
                if rec.target is not None and rec.target.off_circle:
                    report.verdict, report.witness_index = "WitnessFound", len(covers) - 1
                    return report
                if child is not None:
                    next_frontier.append(child)
        frontier = next_frontier
        if not frontier:
            break
    skipped = any(c.skipped for c in covers)
    if truncated or skipped:
        report.reason = "budget exhausted" + (" (per-level cap)" if truncated else "") + \
                        (" (homology rank cap)" if skipped else "")
    elif errors and not frontier:
        report.reason = "no further admissible covers"
    else:
        report.reason = f"all covers up to depth {cfg.max_depth} pass the Kronecker test"
    return report


# -- re-checking -----------------------------------------------------------------------------------


def follow_path(gens: Sequence[FreeAutomorphism], h: FreeAutomorphism | None, path: Sequence[dict]
                ) -> tuple[CoverGraph | None, list[FreeAutomorphism], FreeAutomorphism | None]:
    """Walk a serialized cover path.

    Returns the last cover together with the generators and target rebased up
    to (but not including) the last level, ready to be lifted to that cover.
    """
    cover = None
    cur = list(gens)
    cur_h = h
    for k, desc in enumerate(path):
        q = FiniteAbelianQuotient.from_description(desc)
        cover = build_cover(q)
        if k == len(path) - 1:
            break
        cur = [rebase(lift_automorphism(g, cover)) for g in cur]
        cur_h = rebase(lift_automorphism(cur_h, cover)) if cur_h is not None else None
    return cover, cur, cur_h


def recheck_witness(report_dict: dict) -> bool:
    """Recompute a serialized witness from the automorphisms and cover path alone."""
    from .free_group import parse_automorphisms

    verdict = report_dict["verdict"]
    if verdict["kind"] != "WitnessFound":
        return False
    h = parse_automorphisms(report_dict["target"])[0][1]
    gamma0 = [parse_automorphisms(t)[0][1] for t in report_dict["gamma0"]]
    path = verdict["path"]
    if not path:
        mat = h.abelianization
    else:
        cover, gens, cur_h = follow_path(gamma0, h, path)
        for g in gens:
            if not lift_automorphism(g, cover).deck_trivial:
                return False
        mat = _homology_matrix(cur_h, cover)
    rep = kronecker_test(mat, with_roots=False)
    want = verdict["report"]
    return rep.off_circle and [int(c) for c in rep.char_poly.coeffs] == want["char_poly"] \
        and [int(c) for c in rep.witness.coeffs] == want["witness"]


def certify_image(gamma0: Sequence[FreeAutomorphism], path: Sequence[dict] = (), *, depth_max: int = 2,
                  word_budget: int = 16, max_words: int = 2000
                  ) -> SolvableCertificate | NonsolvableWitness | Inconclusive:
    """Solvability probe on the homology representation of ``gamma0`` at the end of ``path``.

    Raises ``NotLiftable`` if a generator does not lift along the path.
    """
    gamma0 = list(gamma0)
    if not gamma0:
        return solvability_probe([], depth_max, word_budget, max_words)
    if not path:
        mats = [g.abelianization for g in gamma0]
    else:
        cover, gens, _ = follow_path(gamma0, None, path)
        mats = [_homology_matrix(g, cover) for g in gens]
    return solvability_probe([intmat.to_rows(m) for m in mats], depth_max, word_budget, max_words)
