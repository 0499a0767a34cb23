"""
Transition graphs of graph maps, their A-matrices over the deck lattice's
Laurent ring, trace supports, equivariant shadow polytopes and vertex
subgraphs.

A graph map is given by a finite graph ``X`` with a base vertex, a marking
(the homology vector of every edge, so that the fundamental cycles form a
basis of ``Z^n``), and an edge path for the image of each edge. Translations
are measured in the torsion-free coinvariant lattice of the induced action on
homology, projected by ``P``.

Conventions: a lifted vertex is a pair ``(vertex, offset)`` meaning the deck
translate by ``offset`` of the fundamental-domain lift. Traversing ``e``
forward adds ``tau(e)``; backward subtracts it. The lift of the map sends the
base lift to ``(phi(b), 0)``.
"""
from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import networkx as nx
import numpy as np

from . import intmat
from .covers import CoinvariantLattice, lattice_of_matrices
from .free_group import FreeAutomorphism, letter_name
from .laurent import LaurentPoly
from .polytope import Point, as_point, hull_vertices, in_hull, supporting_functional

DEFAULT_CYCLE_CAP = 10 ** 6


class GraphMapError(ValueError):
    pass


class DisconnectedGraph(GraphMapError):
    pass


class LatticeNotInvariant(GraphMapError):
    pass


class NotAVertex(ValueError):
    pass


# -- graph maps ---------------------------------------------------------------------------

PathLetter = tuple[str, int]  # (edge name, +1 or -1)


def parse_edge_path(text: str | Sequence[str]) -> tuple[PathLetter, ...]:
    """``"a b^-1 c"`` (or a token list) to ``(("a", 1), ("b", -1), ("c", 1))``."""
    tokens = text.split() if isinstance(text, str) else list(text)
    out = []
    for tok in tokens:
        if tok.endswith("^-1"):
            out.append((tok[:-3], -1))
        else:
            out.append((tok, 1))
    return tuple(out)


def format_edge_path(path: Iterable[PathLetter]) -> str:
    return " ".join(e if s > 0 else f"{e}^-1" for e, s in path)


@dataclass
class GraphMap:
    vertices: tuple[str, ...]
    edges: dict[str, tuple[str, str]]  # name -> (tail, head), in a fixed order
    marking: dict[str, tuple[int, ...]]
    images: dict[str, tuple[PathLetter, ...]]
    base: str
    projection: tuple[tuple[int, ...], ...] | None = None
    name: str = ""
    expected_dimension: int | None = None

    def __post_init__(self):
        self.validate()

    @property
    def rank(self) -> int:
        return len(next(iter(self.marking.values()))) if self.marking else 0

    @property
    def edge_names(self) -> tuple[str, ...]:
        return tuple(self.edges)

    def endpoints(self, letter: PathLetter) -> tuple[str, str]:
        tail, head = self.edges[letter[0]]
        return (tail, head) if letter[1] > 0 else (head, tail)

    def validate(self) -> None:
        verts = set(self.vertices)
        if self.base not in verts:
            raise GraphMapError(f"base vertex {self.base!r} is not a vertex")
        for e, (t, h) in self.edges.items():
            if t not in verts or h not in verts:
                raise GraphMapError(f"edge {e!r} has an unknown endpoint")
        if set(self.marking) != set(self.edges) or set(self.images) != set(self.edges):
            raise GraphMapError("marking and images must cover exactly the edges")
        if len({len(v) for v in self.marking.values()}) > 1:
            raise GraphMapError("marking vectors have different lengths")
        vmap: dict[str, str] = {}
        for e, path in self.images.items():
            if not path:
                raise GraphMapError(f"image of edge {e!r} is empty")
            for letter in path:
                if letter[0] not in self.edges:
                    raise GraphMapError(f"image of {e!r} uses unknown edge {letter[0]!r}")
            for a, b in zip(path, path[1:]):
                if self.endpoints(a)[1] != self.endpoints(b)[0]:
                    raise GraphMapError(f"image of {e!r} is not an edge path at {format_edge_path([a, b])!r}")
            t, h = self.edges[e]
            for v, w in ((t, self.endpoints(path[0])[0]), (h, self.endpoints(path[-1])[1])):
                if vmap.setdefault(v, w) != w:
                    raise GraphMapError(f"vertex {v!r} has two images")
        self.bfs_paths()  # raises DisconnectedGraph
        if len(self.edges) - len(self.vertices) + 1 != self.rank:
            raise GraphMapError("marking rank does not match the graph's first Betti number")

    @property
    def vertex_map(self) -> dict[str, str]:
        vmap = {}
        for e, path in self.images.items():
            t, h = self.edges[e]
            vmap[t] = self.endpoints(path[0])[0]
            vmap[h] = self.endpoints(path[-1])[1]
        for v in self.vertices:
            vmap.setdefault(v, v)
        return vmap

    def bfs_paths(self, base: str | None = None) -> dict[str, tuple[PathLetter, ...]]:
        """Minimal-length paths from the base, ties broken by edge order (forward first)."""
        base = self.base if base is None else base
        paths = {base: ()}
        queue = deque([base])
        while queue:
            v = queue.popleft()
            for e, (t, h) in self.edges.items():
                for letter, (a, b) in (((e, 1), (t, h)), ((e, -1), (h, t))):
                    if a == v and b not in paths:
                        paths[b] = paths[v] + (letter,)
                        queue.append(b)
        if len(paths) != len(self.vertices):
            raise DisconnectedGraph("graph is not connected")
        return paths

    def path_marking(self, path: Iterable[PathLetter]) -> list[int]:
        out = [0] * self.rank
        for e, s in path:
            out = [a + s * b for a, b in zip(out, self.marking[e])]
        return out

    def image_path(self, path: Iterable[PathLetter]) -> tuple[PathLetter, ...]:
        out: list[PathLetter] = []
        for e, s in path:
            img = self.images[e] if s > 0 else tuple((f, -t) for f, t in reversed(self.images[e]))
            out.extend(img)
        return tuple(out)

    def fundamental_cycles(self) -> list[tuple[PathLetter, ...]]:
        paths = self.bfs_paths()
        tree = {p[-1][0] for p in paths.values() if p}
        out = []
        for e, (t, h) in self.edges.items():
            if e not in tree:
                back = tuple((f, -s) for f, s in reversed(paths[h]))
                out.append(paths[t] + ((e, 1),) + back)
        return out

    def homology_action(self) -> np.ndarray:
        """Matrix of the induced map on ``Z^n`` (columns are images of basis vectors)."""
        cycles = self.fundamental_cycles()
        w = intmat.as_matrix([[v[i] for v in map(self.path_marking, cycles)] for i in range(self.rank)],
                             self.rank, len(cycles))
        w_img = intmat.as_matrix([[v[i] for v in (self.path_marking(self.image_path(c)) for c in cycles)]
                                  for i in range(self.rank)], self.rank, len(cycles))
        try:
            w_inv = intmat.int_inverse(w)
        except (ValueError, ZeroDivisionError) as exc:
            raise GraphMapError("marking is not a basis of the homology lattice") from exc
        return w_img @ w_inv

    def lattice(self) -> CoinvariantLattice:
        return lattice_of_matrices([self.homology_action()], self.rank)

    def deck_projection(self) -> tuple[tuple[int, ...], ...]:
        """``P``: the declared projection (checked) or the coinvariant lattice's."""
        m = self.homology_action()
        if self.projection is None:
            return self.lattice().projection
        p = intmat.as_matrix(self.projection, len(self.projection), self.rank)
        if (p @ (m - intmat.identity(self.rank))).any():
            raise LatticeNotInvariant("declared projection is not invariant under the map")
        return self.projection

    @classmethod
    def from_dict(cls, d: Mapping) -> "GraphMap":
        edges = {e["name"]: (e["tail"], e["head"]) for e in d["edges"]}
        marking = {e["name"]: tuple(int(x) for x in e["marking"]) for e in d["edges"]}
        images = {e["name"]: parse_edge_path(e["image"]) for e in d["edges"]}
        proj = d.get("projection")
        return cls(tuple(d["vertices"]), edges, marking, images, d.get("base", d["vertices"][0]),
                   tuple(tuple(int(x) for x in r) for r in proj) if proj is not None else None,
                   d.get("name", ""), d.get("expected_dimension"))

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "vertices": list(self.vertices),
            "base": self.base,
            "edges": [{"name": e, "tail": t, "head": h, "marking": list(self.marking[e]),
                       "image": format_edge_path(self.images[e])} for e, (t, h) in self.edges.items()],
        }
        if self.projection is not None:
            out["projection"] = [list(r) for r in self.projection]
        if self.expected_dimension is not None:
            out["expected_dimension"] = self.expected_dimension
        return out

    @classmethod
    def from_automorphism(cls, aut: FreeAutomorphism, name: str = "") -> "GraphMap":
        """The rose with the automorphism's images as edge paths."""
        n = aut.rank
        names = [letter_name(i) for i in range(1, n + 1)]
        edges = {x: ("b", "b") for x in names}
        marking = {x: tuple(int(i == j) for j in range(n)) for i, x in enumerate(names)}
        images = {names[i]: tuple((names[abs(l) - 1], 1 if l > 0 else -1) for l in aut.images[i])
                  for i in range(n)}
        return cls(("b",), edges, marking, images, "b", None, name)


def load_graph_map(path) -> GraphMap:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise GraphMapError(f"{path}: invalid JSON: {exc}") from exc
    try:
        return GraphMap.from_dict(data)
    except KeyError as exc:
        raise GraphMapError(f"{path}: missing field {exc}") from exc


# -- labels and translations -----------------------------------------------------------------


def _project(p: Sequence[Sequence[int]], v: Sequence[int]) -> tuple[int, ...]:
    return tuple(sum(a * b for a, b in zip(row, v)) for row in p)


def vertex_labels(gm: GraphMap, projection: Sequence[Sequence[int]] | None = None,
                  base: str | None = None) -> dict[str, tuple[int, ...]]:
    """Lattice label of each vertex: the projected marking of its BFS path from the base."""
    p = gm.deck_projection() if projection is None else projection
    return {v: _project(p, gm.path_marking(path)) for v, path in gm.bfs_paths(base).items()}


def edge_translations(gm: GraphMap, labels: Mapping[str, tuple[int, ...]],
                      projection: Sequence[Sequence[int]]) -> dict[str, tuple[int, ...]]:
    """``tau(e) = a(tail) + P m(e) - a(head)``: where the lift of ``e`` ends up."""
    out = {}
    for e, (t, h) in gm.edges.items():
        pm = _project(projection, gm.marking[e])
        out[e] = tuple(a + b - c for a, b, c in zip(labels[t], pm, labels[h]))
    return out


@dataclass(frozen=True)
class TransitionEdge:
    source: str
    target: str
    sign: int
    translation: tuple[int, ...]
    position: int = 0  # index of the letter inside the source's image


@dataclass
class TransitionGraph:
    """Vertices are edges of the graph; one transition edge per letter of each image."""

    vertices: tuple[str, ...]
    edges: tuple[TransitionEdge, ...]
    rank: int

    @classmethod
    def from_edges(cls, vertices: Sequence[str], edges: Iterable[Sequence], rank: int | None = None
                   ) -> "TransitionGraph":
        """Build from ``(source, target, sign, translation)`` tuples."""
        es = []
        for k, (s, t, sign, tr) in enumerate(edges):
            es.append(TransitionEdge(s, t, int(sign), tuple(int(x) for x in tr), k))
        if rank is None:
            rank = len(es[0].translation) if es else 0
        return cls(tuple(vertices), tuple(es), rank)

    @property
    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def restrict(self, edge_ids: Iterable[int]) -> "TransitionGraph":
        keep = sorted(set(edge_ids))
        used = {self.edges[k].source for k in keep} | {self.edges[k].target for k in keep}
        return TransitionGraph(tuple(v for v in self.vertices if v in used),
                               tuple(self.edges[k] for k in keep), self.rank)

    def to_dict(self) -> dict:
        return {"rank": self.rank, "vertices": list(self.vertices),
                "edges": [{"source": e.source, "target": e.target, "sign": e.sign,
                           "translation": list(e.translation)} for e in self.edges]}

    def to_dot(self, name: str = "transition") -> str:
        lines = [f"digraph {name} {{"]
        lines += [f'  "{v}";' for v in self.vertices]
        for e in self.edges:
            tr = ",".join(str(x) for x in e.translation)
            s = "+" if e.sign > 0 else "-"
            lines.append(f'  "{e.source}" -> "{e.target}" [label="{s} ({tr})", sign={e.sign}, '
                         f'translation="{tr}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def lift_offsets(gm: GraphMap, tau: Mapping[str, tuple[int, ...]], base: str | None = None
                 ) -> dict[str, tuple[int, ...]]:
    """Offset ``delta(c)`` with the lifted map sending ``(c, 0)`` to ``(phi(c), delta(c))``."""
    paths = gm.bfs_paths(base)
    r = len(next(iter(tau.values()))) if tau else 0
    out = {}
    for c, path in paths.items():
        o = [0] * r
        for e, s in gm.image_path(path):
            o = [a + s * b for a, b in zip(o, tau[e])]
        out[c] = tuple(o)
    return out


def transition_graph(gm: GraphMap, labels: Mapping[str, tuple[int, ...]] | None = None,
                     projection: Sequence[Sequence[int]] | None = None,
                     base: str | None = None) -> TransitionGraph:
    """One transition edge per letter of each edge image, with sign and prefix translation."""
    p = gm.deck_projection() if projection is None else projection
    labels = vertex_labels(gm, p, base) if labels is None else labels
    tau = edge_translations(gm, labels, p)
    r = len(p)
    delta = lift_offsets(gm, tau, base)
    vmap = gm.vertex_map
    edges = []
    for e, (t, h) in gm.edges.items():
        o = list(delta[t])
        for k, (f, s) in enumerate(gm.images[e]):
            if s > 0:
                tr = tuple(o)
                o = [a + b for a, b in zip(o, tau[f])]
            else:
                o = [a - b for a, b in zip(o, tau[f])]
                tr = tuple(o)
            edges.append(TransitionEdge(e, f, s, tr, k))
        want = tuple(a + b for a, b in zip(delta[h], tau[e]))
        if tuple(o) != want:
            raise LatticeNotInvariant(f"lift of the image of {e!r} ends at offset {tuple(o)}, expected {want} "
                                      f"(vertex {vmap[h]!r})")
    return TransitionGraph(gm.edge_names, tuple(edges), r)


# -- A-matrix and traces ------------------------------------------------------------------------------


def a_matrix(tg: TransitionGraph) -> list[list[LaurentPoly]]:
    """Entry ``(i, j)``: signed sum of ``T^t(eta)`` over transition edges from ``e_i`` to ``e_j``."""
    idx = tg.index
    n = len(tg.vertices)
    m = [[LaurentPoly.zero(tg.rank) for _ in range(n)] for _ in range(n)]
    for e in tg.edges:
        i, j = idx[e.source], idx[e.target]
        m[i][j] = m[i][j] + LaurentPoly.monomial(e.translation, e.sign)
    return m


def _laurent_matmul(a: list[list[LaurentPoly]], b: list[list[LaurentPoly]], rank: int) -> list[list[LaurentPoly]]:
    n = len(a)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = LaurentPoly.zero(rank)
            for k in range(n):
                if a[i][k].terms and b[k][j].terms:
                    acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


def trace_powers(tg: TransitionGraph, k_max: int) -> list[LaurentPoly]:
    """``[trace(A^1), ..., trace(A^k_max)]``."""
    a = a_matrix(tg)
    n = len(a)
    out = []
    power = a
    for k in range(1, k_max + 1):
        if k > 1:
            power = _laurent_matmul(power, a, tg.rank)
        acc = LaurentPoly.zero(tg.rank)
        for i in range(n):
            acc = acc + power[i][i]
        out.append(acc)
    return out


def trace_polynomial(tg: TransitionGraph, k: int) -> LaurentPoly:
    if k < 1:
        raise ValueError("k must be positive")
    return trace_powers(tg, k)[-1]


def trace_support(tg: TransitionGraph, k: int) -> set[Point]:
    """``S_k``: exponents of ``trace(A^k)`` scaled by ``1/k``."""
    poly = trace_polynomial(tg, k)
    return {tuple(Fraction(x, k) for x in e) for e in poly.terms}


# -- cycles and the shadow -------------------------------------------------------------------------------


@dataclass(frozen=True)
class Cycle:
    edges: tuple[int, ...]  # transition edge indices, rotated to start at the smallest

    def translation(self, tg: TransitionGraph) -> tuple[int, ...]:
        out = [0] * tg.rank
        for k in self.edges:
            out = [a + b for a, b in zip(out, tg.edges[k].translation)]
        return tuple(out)

    def sign(self, tg: TransitionGraph) -> int:
        s = 1
        for k in self.edges:
            s *= tg.edges[k].sign
        return s

    def normalized(self, tg: TransitionGraph) -> Point:
        n = len(self.edges)
        return tuple(Fraction(x, n) for x in self.translation(tg))

    def vertices(self, tg: TransitionGraph) -> list[str]:
        return [tg.edges[k].source for k in self.edges]


def _rotate(edges: Sequence[int]) -> tuple[int, ...]:
    i = min(range(len(edges)), key=lambda k: edges[k])
    return tuple(edges[i:]) + tuple(edges[:i])


@dataclass
class CycleEnumeration:
    cycles: list[Cycle]
    complete: bool


def simple_cycles(tg: TransitionGraph, cap: int = DEFAULT_CYCLE_CAP, length_bound: int | None = None
                  ) -> CycleEnumeration:
    """Simple cycles (no repeated vertex) as edge sequences; parallel edges give distinct cycles."""
    g = nx.DiGraph()
    g.add_nodes_from(tg.vertices)
    parallel: dict[tuple[str, str], list[int]] = {}
    for k, e in enumerate(tg.edges):
        parallel.setdefault((e.source, e.target), []).append(k)
        g.add_edge(e.source, e.target)
    out: list[Cycle] = []
    for nodes in nx.simple_cycles(g, length_bound=length_bound):
        hops = [parallel[(nodes[i], nodes[(i + 1) % len(nodes)])] for i in range(len(nodes))]
        for choice in itertools.product(*hops):
            if len(out) >= cap:
                return CycleEnumeration(sorted(out, key=lambda c: (len(c.edges), c.edges)), False)
            out.append(Cycle(_rotate(choice)))
    return CycleEnumeration(sorted(out, key=lambda c: (len(c.edges), c.edges)), True)


@dataclass
class ShadowPolytope:
    rank: int
    vertices: list[Point]
    witnesses: dict[Point, Cycle]
    complete: bool = True
    cycle_count: int = 0

    @property
    def dimension(self) -> int:
        from .polytope import dimension
        return dimension(self.vertices)

    def contains(self, q: Sequence) -> bool:
        return in_hull(q, self.vertices)

    def to_dict(self, tg: TransitionGraph | None = None) -> dict:
        def fmt(p):
            return [str(x) for x in p]

        verts = []
        for v in self.vertices:
            item = {"point": fmt(v), "witness": list(self.witnesses[v].edges)}
            if tg is not None:
                item["witness_vertices"] = self.witnesses[v].vertices(tg)
            verts.append(item)
        return {"rank": self.rank, "dimension": self.dimension, "complete": self.complete,
                "cycle_count": self.cycle_count, "vertices": verts}

    def describe(self, tg: TransitionGraph | None = None) -> str:
        lines = [f"shadow rank {self.rank} dimension {self.dimension} vertices {len(self.vertices)}"
                 + ("" if self.complete else " (cycle enumeration truncated)")]
        for v in self.vertices:
            w = self.witnesses[v]
            via = " ".join(w.vertices(tg)) if tg is not None else " ".join(map(str, w.edges))
            lines.append(f"  ({', '.join(str(x) for x in v)})  witness: {via}")
        return "\n".join(lines) + "\n"


def equivariant_shadow(tg: TransitionGraph, cap: int = DEFAULT_CYCLE_CAP) -> ShadowPolytope:
    """Convex hull of the normalized translations of all simple cycles."""
    enum = simple_cycles(tg, cap)
    first: dict[Point, Cycle] = {}
    for c in enum.cycles:
        first.setdefault(c.normalized(tg), c)
    verts = hull_vertices(list(first))
    return ShadowPolytope(tg.rank, verts, {v: first[v] for v in verts}, enum.complete, len(enum.cycles))


# -- vertex subgraphs ----------------------------------------------------------------------------------


def _scc_of(nodes: Sequence[str], arcs: Sequence[tuple[str, str]]) -> dict[str, int]:
    g = nx.DiGraph()
    g.add_nodes_from(nodes)
    g.add_edges_from(arcs)
    comp = {}
    for i, c in enumerate(nx.strongly_connected_components(g)):
        for v in c:
            comp[v] = i
    return comp


def max_cycle_mean(nodes: Sequence[str], arcs: Sequence[tuple[str, str, Fraction]]) -> Fraction | None:
    """Karp's maximum cycle mean, exact; ``None`` for an acyclic graph."""
    comp = _scc_of(nodes, [(u, v) for u, v, _ in arcs])
    best = None
    for c in set(comp.values()):
        members = [v for v in nodes if comp[v] == c]
        inner = [(u, v, w) for u, v, w in arcs if comp[u] == c and comp[v] == c]
        if not inner:
            continue
        n = len(members)
        # d[k][v]: max weight of a k-edge walk ending at v, starting anywhere in the component
        d = [{v: Fraction(0) for v in members}]
        for _ in range(n):
            prev, cur = d[-1], {}
            for u, v, w in inner:
                if u in prev:
                    val = prev[u] + w
                    if v not in cur or val > cur[v]:
                        cur[v] = val
            d.append(cur)
        for v, dn in d[n].items():
            worst = min((dn - d[k][v]) / (n - k) for k in range(n) if v in d[k])
            if best is None or worst > best:
                best = worst
    return best


def critical_edges(tg: TransitionGraph, weights: Sequence[Fraction]) -> tuple[Fraction | None, list[int]]:
    """Maximum cycle mean and the edges lying on some cycle attaining it."""
    arcs = [(e.source, e.target, w) for e, w in zip(tg.edges, weights)]
    lam = max_cycle_mean(tg.vertices, arcs)
    if lam is None:
        return None, []
    reduced = [w - lam for w in weights]
    # longest-path potentials; no positive cycles after reduction
    pot = {v: Fraction(0) for v in tg.vertices}
    for _ in range(len(tg.vertices) + 1):
        changed = False
        for e, w in zip(tg.edges, reduced):
            if pot[e.source] + w > pot[e.target]:
                pot[e.target] = pot[e.source] + w
                changed = True
        if not changed:
            break
    tight = [k for k, (e, w) in enumerate(zip(tg.edges, reduced)) if pot[e.source] + w == pot[e.target]]
    comp = _scc_of(tg.vertices, [(tg.edges[k].source, tg.edges[k].target) for k in tight])
    return lam, [k for k in tight if comp[tg.edges[k].source] == comp[tg.edges[k].target]]


def vertex_subgraph(tg: TransitionGraph, shadow: ShadowPolytope, v: Sequence) -> TransitionGraph:
    """Union of the cycles whose normalized translation is the polytope vertex ``v``.

    A functional maximized on the shadow exactly at ``v`` turns this into a
    maximum-cycle-mean problem: the critical edges are the answer.
    """
    v = as_point(v)
    if v not in shadow.vertices:
        raise NotAVertex(f"{tuple(str(x) for x in v)} is not a vertex of the shadow")
    ell = supporting_functional(v, shadow.vertices)
    if ell is None:
        raise NotAVertex("no strict supporting functional")
    weights = [sum((a * b for a, b in zip(ell, e.translation)), Fraction(0)) for e in tg.edges]
    lam, keep = critical_edges(tg, weights)
    target = sum((a * b for a, b in zip(ell, v)), Fraction(0))
    if lam is not None and lam != target and shadow.complete:
        raise AssertionError(f"maximum cycle mean {lam} disagrees with the shadow vertex value {target}")
    return tg.restrict(keep)


# -- stability ----------------------------------------------------------------------------------------


@dataclass
class StabilityReport:
    k_max: int
    surviving: list[int]
    traces: list[LaurentPoly] = field(repr=False)
    period: int | None
    verdict: str

    def to_dict(self) -> dict:
        return {"k_max": self.k_max, "surviving": self.surviving, "period": self.period,
                "verdict": self.verdict, "traces": [p.to_records() for p in self.traces]}


def stability_probe(tg_v: TransitionGraph, k_max: int) -> StabilityReport:
    """Lengths ``k <= k_max`` whose signed cycle sum ``trace(A^k)`` is nonzero.

    The verdict is a bounded semidecision: it never claims infinitely many
    survivors, only the pattern seen up to ``k_max``.
    """
    if k_max < 1:
        raise ValueError("k_max must be positive")
    if not tg_v.edges:
        return StabilityReport(k_max, [], [], None, "empty")
    traces = trace_powers(tg_v, k_max)
    alive = [not t.is_zero() for t in traces]
    surviving = [k + 1 for k, a in enumerate(alive) if a]
    if not surviving:
        return StabilityReport(k_max, [], traces, None, f"no surviving lengths up to {k_max}")
    period = None
    for p in range(1, k_max // 2 + 1):
        if all(alive[k] == alive[k - p] for k in range(p, k_max)):
            period = p
            break
    if period is not None:
        verdict = f"survivors periodic with period {period} up to {k_max} (semidecision)"
    else:
        verdict = f"survivors irregular up to {k_max} (semidecision)"
    return StabilityReport(k_max, surviving, traces, period, verdict)
