"""
Command line interface.

Exit codes: 0 when a verdict was produced, 1 on malformed input, 2 when a
budget ran out before a verdict (search exhausted, probe inconclusive,
cycle enumeration truncated).
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import bundled
from .intmat import determinant
from .covers import NotLiftable, build_cover, coinvariant_lattice, lift_automorphism
from .free_group import AutomorphismFileError, FreeAutomorphism, format_automorphism, parse_automorphisms
from .homrep import (block_decompose, chain_action, compare_blocks, format_matrix, homology_rep,
                     magnus_matrix, parse_matrix, specialize_magnus)
from .laurent import FiniteAbelianQuotient, RotationPoint
from .pipeline import SearchConfig, certify_image, recheck_witness, search_off_circle
from .shadow import (GraphMapError, equivariant_shadow, load_graph_map, stability_probe, trace_support,
                     transition_graph, vertex_subgraph)
from .spectra import kronecker_test, ratio_degeneracy_test, solvability_probe

EXIT_OK, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2


class InputError(Exception):
    pass


# -- input helpers --------------------------------------------------------------------------------


def _read_automorphisms(source: str) -> list[tuple[str, FreeAutomorphism]]:
    """A path, or ``bundled:NAME`` for one of the shipped ``.aut`` files."""
    if source.startswith("bundled:"):
        path = bundled.data_path(source.split(":", 1)[1] + ".aut")
    else:
        path = Path(source)
    if not path.exists():
        raise InputError(f"{source}: no such file")
    return parse_automorphisms(path.read_text(encoding="utf-8"), str(source))


def _select(auts: list[tuple[str, FreeAutomorphism]], names: Sequence[str] | None
            ) -> list[tuple[str, FreeAutomorphism]]:
    if not names:
        return auts
    table = dict(auts)
    missing = [n for n in names if n not in table]
    if missing:
        raise InputError(f"unknown automorphism(s): {', '.join(missing)}; have {', '.join(table)}")
    return [(n, table[n]) for n in names]


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise InputError(f"expected integers, got {text!r}") from None


def _quotient(factors: str, projection: str) -> FiniteAbelianQuotient:
    rows = [_int_list(r) for r in projection.split(";")]
    try:
        return FiniteAbelianQuotient(tuple(_int_list(factors)), tuple(tuple(r) for r in rows))
    except ValueError as exc:
        raise InputError(f"bad quotient: {exc}") from None


def _read_matrix(path: str):
    try:
        return parse_matrix(Path(path).read_text())
    except FileNotFoundError:
        raise InputError(f"{path}: no such file") from None
    except (ValueError, IndexError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _emit(text: str, output: str | None) -> None:
    if output and output != "-":
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


# -- subcommands ----------------------------------------------------------------------------------


def cmd_validate(args) -> int:
    for name, aut in _select(_read_automorphisms(args.file), args.name):
        print(f"{name}: rank {aut.rank}, det {determinant(aut.abelianization)}, "
              f"{'certified' if aut.certified else 'uncertified'}")
        if args.verbose:
            print(format_automorphism(aut), end="")
    return EXIT_OK


def cmd_abelianize(args) -> int:
    for name, aut in _select(_read_automorphisms(args.file), args.name):
        print(f"# {name}")
        print(format_matrix(aut.abelianization), end="")
    return EXIT_OK


def cmd_magnus(args) -> int:
    for name, aut in _select(_read_automorphisms(args.file), args.name):
        m = magnus_matrix(aut)
        if args.json:
            print(_dump_json({"name": name, "rank": m.rank, "entries": m.to_records()}), end="")
            continue
        print(f"# {name}")
        for row in m.entries:
            print(" | ".join(str(p) for p in row))
    return EXIT_OK


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"bad rotation number {text!r}") from None


def cmd_specialize(args) -> int:
    rotations = tuple(_fraction(x) for x in args.at.replace(",", " ").split())
    for name, aut in _select(_read_automorphisms(args.file), args.name):
        if len(rotations) != aut.rank:
            raise InputError(f"need {aut.rank} rotation numbers, got {len(rotations)}")
        point = RotationPoint(rotations)
        m = magnus_matrix(aut)
        print(f"# {name} at {' '.join(map(str, rotations))}")
        if args.float:
            for row in specialize_magnus(m, point.to_complex()):
                print(" ".join(f"{z.real:.12g}{z.imag:+.12g}j" for z in row))
        else:
            for row in specialize_magnus(m, point):
                print(" | ".join(str(x) for x in row))
    return EXIT_OK


def cmd_cover(args) -> int:
    q = _quotient(args.factors, args.projection)
    cover = build_cover(q)
    out = {"cover": cover.describe(), "automorphisms": []}
    if args.dot:
        Path(args.dot).write_text(cover.to_dot())
    if args.file:
        for name, aut in _select(_read_automorphisms(args.file), args.name):
            if aut.rank != q.rank:
                raise InputError(f"{name} has rank {aut.rank}, quotient has rank {q.rank}")
            try:
                lifted = lift_automorphism(aut, cover)
            except NotLiftable as exc:
                raise InputError(str(exc)) from None
            entry = {"name": name, "deck_trivial": lifted.deck_trivial,
                     "deck_matrix": [list(r) for r in lifted.deck_matrix]}
            c = chain_action(lifted)
            if args.chain:
                entry["chain"] = format_matrix(c.matrix)
            if args.homology:
                entry["homology"] = format_matrix(homology_rep(c).matrix)
            if args.blocks:
                dec = block_decompose(c, exact=not args.float)
                if dec.exact:
                    entry["blocks"] = dec.describe()
                    entry["blocks_match_magnus"] = compare_blocks(dec, lifted)
                else:
                    entry["blocks"] = [{**b, "block": [[f"{z:.12g}" for z in row] for row in b["block"]]}
                                       for b in dec.describe()]
                    entry["blocks_match_magnus"] = compare_blocks(dec, lifted) < 1e-9
                    entry["residual"] = dec.residual
            out["automorphisms"].append(entry)
    _emit(_dump_json(out), args.output)
    return EXIT_OK


def cmd_lattice(args) -> int:
    auts = [a for _, a in _select(_read_automorphisms(args.file), args.name)]
    print(_dump_json(coinvariant_lattice(auts).describe()), end="")
    return EXIT_OK


def cmd_kronecker(args) -> int:
    rep = kronecker_test(_read_matrix(args.matrix))
    d = rep.to_dict()
    if rep.radius_bracket:
        d["radius_decimal"] = [f"{float(x):.12f}" for x in rep.radius_bracket]
    print(_dump_json(d), end="")
    return EXIT_OK


def cmd_ratio(args) -> int:
    if args.bound < 2:
        raise InputError("bound must be at least 2")
    ks = sorted(ratio_degeneracy_test(_read_matrix(args.matrix).tolist(), args.bound))
    print(_dump_json({"bound": args.bound, "degenerate_powers": ks}), end="")
    return EXIT_OK


def _probe_exit(verdict) -> int:
    print(_dump_json(verdict.to_dict()), end="")
    return EXIT_BUDGET if verdict.kind == "Inconclusive" else EXIT_OK


def cmd_solvability(args) -> int:
    mats = [_read_matrix(p).tolist() for p in args.matrices]
    if len({len(m) for m in mats}) > 1:
        raise InputError("matrices have different sizes")
    return _probe_exit(solvability_probe(mats, args.depth, args.word_budget, args.max_words))


def _read_path(text: str | None) -> list[dict]:
    if not text:
        return []
    try:
        raw = json.loads(Path(text).read_text()) if Path(text).exists() else json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"bad cover path: {exc}") from None
    return raw["verdict"]["path"] if isinstance(raw, dict) and "verdict" in raw else raw


def cmd_certify(args) -> int:
    auts = [a for _, a in _select(_read_automorphisms(args.file), args.name)]
    try:
        verdict = certify_image(auts, _read_path(args.path), depth_max=args.depth,
                                word_budget=args.word_budget, max_words=args.max_words)
    except NotLiftable as exc:
        raise InputError(str(exc)) from None
    return _probe_exit(verdict)


def cmd_search(args) -> int:
    auts = _read_automorphisms(args.file)
    table = dict(auts)
    if args.target not in table:
        raise InputError(f"unknown target {args.target!r}; have {', '.join(table)}")
    gamma0 = [a for n, a in _select(auts, args.gamma0)] if args.gamma0 else \
        [a for n, a in auts if n != args.target]
    try:
        cfg = SearchConfig(primes=tuple(_int_list(args.primes)), max_depth=args.max_depth,
                           max_covers_per_level=args.max_covers, modulus_cap=args.modulus_cap,
                           max_homology_rank=args.max_homology_rank, derived_samples=args.derived_samples)
        report = search_off_circle(table[args.target], gamma0, cfg)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    _emit(report.to_json(), args.output)
    counts = report.counts()
    line = f"{report.verdict}: {counts['admissible_covers']} admissible covers explored"
    if report.witness is not None:
        lo, hi = report.witness.target.radius_bracket
        line += f"; witness at level {report.witness.level}, spectral radius in [{float(lo):.9f}, {float(hi):.9f}]"
    print(line, file=sys.stderr)
    return EXIT_OK if report.verdict == "WitnessFound" else EXIT_BUDGET


def cmd_recheck(args) -> int:
    try:
        ok = recheck_witness(json.loads(Path(args.report).read_text()))
    except (FileNotFoundError, json.JSONDecodeError, KeyError) as exc:
        raise InputError(f"{args.report}: {exc}") from None
    print("witness confirmed" if ok else "witness NOT confirmed")
    return EXIT_OK if ok else EXIT_INPUT


def _graph_map(path: str):
    if path.startswith("bundled:"):
        path = str(bundled.data_path("graph_maps", path.split(":", 1)[1] + ".json"))
    try:
        return load_graph_map(path)
    except FileNotFoundError:
        raise InputError(f"{path}: no such file") from None


def cmd_transition(args) -> int:
    gm = _graph_map(args.graph_map)
    tg = transition_graph(gm)
    if args.dot:
        _emit(tg.to_dot(gm.name or "transition"), args.output)
    else:
        _emit(_dump_json(tg.to_dict()), args.output)
    return EXIT_OK


def cmd_shadow(args) -> int:
    gm = _graph_map(args.graph_map)
    tg = transition_graph(gm)
    sh = equivariant_shadow(tg, cap=args.cap)
    out = sh.to_dict(tg)
    out["graph_map"] = gm.name
    out["expected_dimension"] = gm.expected_dimension
    if args.k_max:
        out["trace_supports"] = {str(k): sorted([str(x) for x in p] for p in trace_support(tg, k))
                                 for k in range(1, args.k_max + 1)}
    if args.stability:
        out["stability"] = []
        for v in sh.vertices:
            sub = vertex_subgraph(tg, sh, v)
            rep = stability_probe(sub, args.stability)
            out["stability"].append({"vertex": [str(x) for x in v], "edges": len(sub.edges),
                                     "surviving": rep.surviving, "verdict": rep.verdict})
    _emit(_dump_json(out), args.output)
    return EXIT_OK if sh.complete else EXIT_BUDGET


def cmd_bundled(args) -> int:
    for ref, aut in bundled.bundled_automorphisms().items():
        print(f"automorphism {ref} (rank {aut.rank})")
    for bc in bundled.bundled_covers():
        print(f"cover {bc.name}: {list(bc.quotient.invariant_factors)} via "
              f"{[list(r) for r in bc.quotient.projection]} for {', '.join(bc.automorphisms)}")
    for name in bundled.bundled_graph_maps():
        print(f"graph map {name}")
    return EXIT_OK


# -- parser ---------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="coverreps", description=__doc__.strip().splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def aut_cmd(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("file", help="automorphism file, or bundled:NAME")
        sp.add_argument("--name", action="append", help="restrict to these automorphisms (repeatable)")
        sp.set_defaults(func=func)
        return sp

    def probe_budgets(sp):
        sp.add_argument("--depth", type=int, default=2, help="derived-series depth")
        sp.add_argument("--word-budget", type=int, default=16)
        sp.add_argument("--max-words", type=int, default=2000)

    sp = aut_cmd("validate", cmd_validate, "parse and check automorphism files")
    sp.add_argument("-v", "--verbose", action="store_true")
    aut_cmd("abelianize", cmd_abelianize, "print abelianized matrices")
    sp = aut_cmd("magnus", cmd_magnus, "print Magnus matrices")
    sp.add_argument("--json", action="store_true", help="Laurent records instead of text")
    sp = aut_cmd("specialize", cmd_specialize, "specialize Magnus matrices at a root-of-unity point")
    sp.add_argument("--at", required=True, help="rotation numbers, e.g. '1/2,0'")
    sp.add_argument("--float", action="store_true", help="complex floating output")
    aut_cmd("lattice", cmd_lattice, "coinvariant lattice of a generating set")

    sp = sub.add_parser("cover", help="build a cover and dump the lifted representations")
    sp.add_argument("file", nargs="?", help="automorphism file, or bundled:NAME")
    sp.add_argument("--name", action="append")
    sp.add_argument("--factors", required=True, help="invariant factors, e.g. '2,2'")
    sp.add_argument("--projection", required=True, help="rows separated by ';', e.g. '1,0;0,1'")
    sp.add_argument("--chain", action="store_true", help="include chain matrices")
    sp.add_argument("--homology", action="store_true", help="include homology matrices")
    sp.add_argument("--blocks", action="store_true", help="include the character block decomposition")
    mode = sp.add_mutually_exclusive_group()
    mode.add_argument("--exact", dest="float", action="store_false", help="cyclotomic arithmetic (default)")
    mode.add_argument("--float", dest="float", action="store_true", help="complex floating point")
    sp.add_argument("--dot", help="write the cover graph in dot format here")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_cover, float=False)

    sp = sub.add_parser("kronecker", help="Kronecker unit-circle test of an integer matrix")
    sp.add_argument("matrix", help="matrix file: 'rows cols' header then rows")
    sp.set_defaults(func=cmd_kronecker)

    sp = sub.add_parser("ratio", help="eigenvalue-ratio degeneracy test")
    sp.add_argument("matrix")
    sp.add_argument("--bound", type=int, default=10)
    sp.set_defaults(func=cmd_ratio)

    sp = sub.add_parser("solvability", help="solvability probe on integer matrices")
    sp.add_argument("matrices", nargs="*")
    probe_budgets(sp)
    sp.set_defaults(func=cmd_solvability)

    sp = aut_cmd("certify", cmd_certify, "solvability probe on the homology image of a generating set")
    sp.add_argument("--path", help="cover path as JSON text, a JSON file, or a search report")
    probe_budgets(sp)

    sp = sub.add_parser("search", help="search admissible cover towers for an off-circle eigenvalue")
    sp.add_argument("file", help="automorphism file, or bundled:NAME")
    sp.add_argument("--target", required=True, help="name of the target automorphism")
    sp.add_argument("--gamma0", action="append",
                    help="generating set (repeatable); default: every other automorphism in the file")
    d = SearchConfig()
    sp.add_argument("--primes", default=",".join(map(str, d.primes)))
    sp.add_argument("--max-depth", type=int, default=d.max_depth)
    sp.add_argument("--max-covers", type=int, default=d.max_covers_per_level)
    sp.add_argument("--modulus-cap", type=int, default=d.modulus_cap)
    sp.add_argument("--max-homology-rank", type=int, default=d.max_homology_rank)
    sp.add_argument("--derived-samples", type=int, default=d.derived_samples)
    sp.add_argument("-o", "--output", help="report path (default stdout)")
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("recheck", help="recompute the witness of a saved search report")
    sp.add_argument("report")
    sp.set_defaults(func=cmd_recheck)

    sp = sub.add_parser("transition", help="transition graph of a graph map")
    sp.add_argument("graph_map", help="graph-map JSON file, or bundled:NAME")
    sp.add_argument("--dot", action="store_true", help="dot output instead of JSON")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_transition)

    sp = sub.add_parser("shadow", help="equivariant shadow of a graph map")
    sp.add_argument("graph_map", help="graph-map JSON file, or bundled:NAME")
    sp.add_argument("--k-max", type=int, default=0, help="also list trace supports S_k for k <= K")
    sp.add_argument("--stability", type=int, default=0, help="stability probe up to this power")
    sp.add_argument("--cap", type=int, default=10 ** 6, help="simple-cycle enumeration cap")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_shadow)

    sp = sub.add_parser("bundled", help="list bundled examples")
    sp.set_defaults(func=cmd_bundled)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors, which would read as a budget exit
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (InputError, AutomorphismFileError, GraphMapError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
