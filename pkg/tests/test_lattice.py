from fractions import Fraction

import pytest

from conftest import E
from oracles import brute_closure
from pipsheaf.lattice import (
    FORMAL_BOTTOM,
    FORMAL_TOP,
    DimensionMismatchError,
    IndexLattice,
    LatticeError,
    NotAnElementError,
    check_lattice_laws,
    close_lattice,
    lattice_query,
)
from pipsheaf.vectors import PipVector, membership


def test_chain_closure(L1):
    assert list(L1) == [E(1), E(0), E(-1)]


def test_self_dual_singleton():
    assert list(close_lattice([E(0)])) == [E(0)]


def test_two_block_closure_matches_brute_force(L2):
    expected = brute_closure([(1, 0), (0, 1)], True)
    assert {tuple(e) for e in L2} == expected
    # the points (1,-1) and (-1,1) are not generated: every element keeps |a - b| <= 1
    assert E(1, -1) not in L2 and E(-1, 1) not in L2
    assert len(L2) == 7


def test_grid_closure(grid):
    assert {tuple(e) for e in grid} == {(Fraction(a), Fraction(b)) for a in (-1, 0, 1) for b in (-1, 0, 1)}


def test_mixed_lengths_rejected():
    with pytest.raises(DimensionMismatchError):
        close_lattice([E(1), E(1, 0)])


def test_queries(L2):
    assert lattice_query(L2, "involution", E(1, 0)) == E(-1, 0)
    assert lattice_query(L2, "meet", E(1, 0), E(0, 1)) == E(1, 1)
    assert lattice_query(L2, "join", E(1, 0), E(0, 1)) == E(0, 0)
    assert lattice_query(L2, "leq", E(1, 1), E(0, 0)) is True
    assert lattice_query(L2, "leq", E(0, 0), E(1, 1)) is False


def test_meet_join_agree_with_space_inclusion(L2):
    # a tail sigma on block j is in V_r iff sigma + r_j < -1/2; sample sigmas around the thresholds
    samples = [PipVector.power(2, {0: (1, Fraction(a, 2)), 1: (1, Fraction(b, 2))}) for a in range(-6, 2) for b in range(-6, 2)]
    for p in L2:
        for q in L2:
            meet, join = L2.meet(p, q), L2.join(p, q)
            for f in samples:
                assert membership(f, meet) == (membership(f, p) and membership(f, q))
                if membership(f, p) or membership(f, q):
                    assert membership(f, join)


def test_leq_matches_membership_oracle(L2):
    f = PipVector.power(2, {0: (1, Fraction(-7, 4)), 1: (1, Fraction(-7, 4))})
    assert membership(f, E(1, 1)) and membership(f, E(0, 0))


def test_formal_markers(L1):
    assert L1.leq(FORMAL_BOTTOM, E(1)) and L1.leq(E(-1), FORMAL_TOP)
    assert not L1.leq(FORMAL_TOP, E(0))
    assert L1.involution(FORMAL_BOTTOM) is FORMAL_TOP
    with pytest.raises(NotAnElementError):
        L1.meet(FORMAL_TOP, E(0))


def test_not_an_element(L1):
    with pytest.raises(NotAnElementError):
        lattice_query(L1, "involution", E(2))


def test_unclosed_family_rejected():
    with pytest.raises(LatticeError):
        IndexLattice([E(1), E(0)])


def test_bounds_and_center(L2):
    assert L2.max_exponent == E(1, 1) and L2.min_exponent == E(-1, -1)
    assert L2.has_self_dual_center()


def test_law_report(L2, grid):
    for L, gens in ((L2, [E(1, 0), E(0, 1)]), (grid, [E(1, 0), E(0, 1), E(1, -1)])):
        rep = check_lattice_laws(L, gens, True)
        assert rep.ok, rep.text()


def test_rational_exponents():
    L = close_lattice([E(Fraction(1, 2))])
    assert list(L) == [E(Fraction(1, 2)), E(Fraction(-1, 2))]
