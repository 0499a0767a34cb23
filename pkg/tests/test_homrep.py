from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import automorphisms
from coverreps.bundled import bundled_covers
from coverreps.covers import build_cover, lift_automorphism
from coverreps.cyclotomic import Cyclo
from coverreps.free_group import FreeAutomorphism, compose
from coverreps.homrep import (block_decompose, chain_action, compare_blocks, format_matrix, homology_rep,
                              magnus_matrix, parse_matrix, pushforward, specialize_magnus, transfer,
                              vertex_action_matrix)
from coverreps.laurent import FiniteAbelianQuotient, LaurentPoly, RotationPoint, all_characters
from oracles import schreier_homology

Z2 = FiniteAbelianQuotient((2,), ((1, 0),))
KLEIN = FiniteAbelianQuotient((2, 2), ((1, 0), (0, 1)))


def chain(aut, q):
    return chain_action(lift_automorphism(aut, q))


# -- chain action -------------------------------------------------------------------------------


def test_chain_identity():
    c = chain(FreeAutomorphism.identity(2), FiniteAbelianQuotient((3,), ((1, 2),)))
    assert np.array_equal(c.matrix, np.eye(6, dtype=int))


def test_chain_twist_on_rose(twist):
    assert chain(twist, FiniteAbelianQuotient.trivial(2)).matrix.tolist() == [[1, 0], [1, 1]]


def test_chain_twist_on_z2(twist):
    # edges (x,0) (x,1) (y,0) (y,1); lift of xy from 0 crosses (x,0) then (y,1)
    assert chain(twist, Z2).matrix.tolist() == [[1, 0, 0, 0], [0, 1, 0, 0], [0, 1, 1, 0], [1, 0, 0, 1]]


@given(automorphisms(rank=2), automorphisms(rank=2))
def test_chain_functoriality_klein(f, g):
    lhs = chain(compose(f, g), KLEIN).matrix
    assert np.array_equal(lhs, chain(f, KLEIN).matrix @ chain(g, KLEIN).matrix)


@given(automorphisms(rank=3))
def test_boundary_equivariance(f):
    q = FiniteAbelianQuotient((2, 2, 2), ((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    lifted = lift_automorphism(f, q)
    c = chain_action(lifted)
    d = c.cover.boundary_matrix
    assert np.array_equal(d @ c.matrix, vertex_action_matrix(lifted) @ d)


# -- Magnus matrices ----------------------------------------------------------------------------


def test_magnus_identity():
    m = magnus_matrix(FreeAutomorphism.identity(2))
    assert m[0, 0] == LaurentPoly.constant(2) and m[0, 1].is_zero()


def test_magnus_twist(twist):
    m = magnus_matrix(twist)
    assert m[1, 0] == LaurentPoly.variable(2, 1) and m[0, 0] == LaurentPoly.constant(2)
    assert m[0, 1].is_zero() and m[1, 1] == LaurentPoly.constant(2)


def test_magnus_inversion():
    m = magnus_matrix(FreeAutomorphism.from_strings(["X"]))
    assert m[0, 0] == -LaurentPoly.variable(1, 1, -1)


def test_specialize_at_ones_is_abelianization(fib):
    values = specialize_magnus(magnus_matrix(fib), [1, 1])
    assert np.array_equal(values.real, fib.abelianization)


def test_specialize_twist_at_minus_one(twist):
    values = specialize_magnus(magnus_matrix(twist), RotationPoint((Fraction(1, 2), 0)))
    assert [[int(x.to_rational()) for x in row] for row in values] == [[1, 0], [-1, 1]]


def test_specialize_inversion_at_i():
    values = specialize_magnus(magnus_matrix(FreeAutomorphism.from_strings(["X"])), [1j])
    assert abs(values[0, 0] - 1j) < 1e-15
    exact = specialize_magnus(magnus_matrix(FreeAutomorphism.from_strings(["X"])),
                              RotationPoint((Fraction(1, 4),)))
    assert exact[0][0] == Cyclo.root(4, 1)


@given(automorphisms())
def test_trivial_character_gives_abelianization(f):
    values = specialize_magnus(magnus_matrix(f), RotationPoint((0,) * f.rank))
    assert [[x.to_rational() for x in row] for row in values] == f.abelianization.tolist()


# -- block decomposition ------------------------------------------------------------------------


def test_blocks_identity():
    c = chain(FreeAutomorphism.identity(2), KLEIN)
    dec = block_decompose(c)
    assert dec.nonzero_pairs() == [(a, a) for a in range(4)]
    for a in range(4):
        assert dec.block(a, a) == [[1, 0], [0, 1]]


def test_blocks_twist_z2(twist):
    dec = block_decompose(chain(twist, Z2))
    assert dec.block(0, 0) == [[1, 0], [1, 1]]
    assert dec.block(1, 1) == [[1, 0], [-1, 1]]
    assert dec.nonzero_pairs() == [(0, 0), (1, 1)]
    fl = block_decompose(chain(twist, Z2), exact=False)
    assert fl.residual < 1e-9


def test_blocks_swap_permute_characters():
    swap = FreeAutomorphism.from_strings(["y", "x"])
    lifted = lift_automorphism(swap, KLEIN)
    dec = block_decompose(chain_action(lifted))
    chars = all_characters(KLEIN)
    # the block from xi lands at xi with coordinates swapped
    want = sorted((chars.index(type(ch)(KLEIN, ch.rotation_numbers[::-1])), b) for b, ch in enumerate(chars))
    assert dec.nonzero_pairs() == want
    assert compare_blocks(dec, lifted)


@pytest.mark.parametrize("bc", bundled_covers(), ids=lambda b: b.name)
def test_blocks_match_magnus_bundled(bc):
    for g in bc.generators():
        lifted = lift_automorphism(g, bc.quotient)
        c = chain_action(lifted)
        if bc.quotient.order <= 6:
            assert compare_blocks(block_decompose(c, exact=True), lifted) is True
        dec = block_decompose(c, exact=False)
        assert dec.residual < 1e-9
        assert compare_blocks(dec, lifted) < 1e-9


# -- homology -------------------------------------------------------------------------------------


def test_homology_identity():
    h = homology_rep(chain(FreeAutomorphism.identity(3), FiniteAbelianQuotient((3,), ((1, 0, 0),))))
    assert np.array_equal(h.matrix, np.eye(7, dtype=int))


def test_homology_rose_is_abelianization(twist):
    assert homology_rep(chain(twist, FiniteAbelianQuotient.trivial(2))).matrix.tolist() == [[1, 0], [1, 1]]


def test_homology_twist_z2_frozen(twist):
    # value produced by the Reidemeister-Schreier oracle in tests/oracles.py
    assert homology_rep(chain(twist, Z2)).matrix.tolist() == [[1, 1, 0], [0, 1, 0], [0, 1, 1]]


@pytest.mark.parametrize("bc", bundled_covers(), ids=lambda b: b.name)
def test_homology_matches_schreier_oracle(bc):
    for g in bc.generators():
        h = homology_rep(chain(g, bc.quotient))
        want = schreier_homology(g, bc.quotient.invariant_factors, bc.quotient.projection)
        assert h.matrix.tolist() == want
        assert h.matrix.shape[0] == bc.quotient.order * (g.rank - 1) + 1


@given(automorphisms(rank=2))
def test_homology_matches_oracle_random(f):
    h = homology_rep(chain(f, KLEIN))
    assert h.matrix.tolist() == schreier_homology(f, (2, 2), ((1, 0), (0, 1)))


# -- pushforward and transfer ------------------------------------------------------------------


def test_transfer_of_x_loop_z2():
    c = build_cover(Z2)
    assert transfer(c, [1, 0]) == [1, 1, 0, 0]
    assert pushforward(c, [1, 1, 0, 0]) == [2, 0]


def test_transfer_of_zero():
    c = build_cover(KLEIN)
    assert transfer(c, [0, 0]) == [0] * c.num_edges


def test_pushforward_kills_difference_of_lifts():
    c = build_cover(FiniteAbelianQuotient((3,), ((0, 1),)))
    # x-loops at two different vertices have the same image
    a = [0] * c.num_edges
    a[c.edge_index(0, 1)] = 1
    a[c.edge_index(1, 1)] = -1
    assert pushforward(c, a) == [0, 0]


def test_pushforward_rejects_non_cycle():
    c = build_cover(Z2)
    with pytest.raises(ValueError):
        pushforward(c, [1, 0, 0, 0])


def _transfer_identities(aut, q) -> bool:
    lifted = lift_automorphism(aut, q)
    c = chain_action(lifted)
    cover = c.cover
    a = aut.abelianization
    for j in range(aut.rank):
        v = [int(i == j) for i in range(aut.rank)]
        t = transfer(cover, v)
        if pushforward(cover, t) != [cover.order * x for x in v]:
            return False
        lhs = (c.matrix @ np.array(t, dtype=object)).tolist()
        rhs = transfer(cover, (a @ np.array(v, dtype=object)).tolist())
        if lhs != rhs:
            return False
        # the same identity in homology coordinates
        rho = homology_rep(c).matrix
        if (rho @ np.array(cover.cycle_coordinates(t), dtype=object)).tolist() != cover.cycle_coordinates(rhs):
            return False
    return True


@pytest.mark.parametrize("bc", bundled_covers(), ids=lambda b: b.name)
def test_transfer_identities_bundled(bc):
    for g in bc.generators():
        assert _transfer_identities(g, bc.quotient)


# -- text format --------------------------------------------------------------------------------


def test_matrix_text_round_trip():
    m = np.array([[1, -2], [0, 3]], dtype=object)
    text = format_matrix(m)
    assert text.splitlines()[0] == "2 2"
    assert np.array_equal(parse_matrix(text), m)


def test_matrix_text_bad_header():
    with pytest.raises(ValueError):
        parse_matrix("2 2\n1 0\n")
