import random
from fractions import Fraction

import pytest

from conftest import E, G4
from pipsheaf.lattice import LatticeError
from pipsheaf.sheaf import (
    MalformedSectionError,
    OrderViolationError,
    S2ViolationError,
    SheafModel,
    SymbolSpace,
    check_presheaf_laws,
    check_s1,
    check_s2,
    check_sheaf,
    check_vector_gluing,
    decompose,
    random_decomposition,
    random_vector,
)
from pipsheaf.vectors import membership


def test_sections_chain(L1):
    syms = SymbolSpace(1, [(0,), (1,)])
    S = SheafModel(L1, syms)
    g0, g1 = syms.coordinate_of((0,)), syms.coordinate_of((1,))
    assert S.sections_at(E(1)) == {g0, g1}
    assert S.sections_at(E(0)) == {g0, g1}
    assert S.sections_at(E(-1)) == {g0}


def test_identity_direction_everywhere(L2, symbols4):
    S = SheafModel(L2, symbols4)
    c = symbols4.coordinate_of((0, 0))
    assert all(c in S.sections_at(r) for r in L2)


def test_high_exponent_lives_at_smallest_space(L2):
    syms = SymbolSpace(2, G4 + [(2, 2)], matrix_size=1)
    S = SheafModel(L2, syms)
    c = syms.coordinate_of((2, 2))
    assert [r for r in L2 if c in S.sections_at(r)] == [E(1, 1)]
    m = syms.unit_coordinate(1, 1)
    assert all(m in S.sections_at(r) for r in L2)


def test_restrict(L1):
    syms = SymbolSpace(1, [(0,), (1,)])
    S = SheafModel(L1, syms)
    s = {syms.coordinate_of((1,)): Fraction(3)}
    assert S.restrict(s, E(1), E(1)) == s
    # V_1 sits inside V_0, so restriction runs from 0 to 1
    assert S.restrict(S.restrict(s, E(0), E(0)), E(0), E(1)) == S.restrict(s, E(0), E(1)) == s
    with pytest.raises(OrderViolationError):
        S.restrict(s, E(1), E(0))
    with pytest.raises(LatticeError):
        S.sections_at(E(5))


def test_glue_examples(L2, symbols4):
    S = SheafModel(L2, symbols4)
    c = symbols4.coordinate_of((1, 0))
    top, vec = S.glue([(E(1, 0), {c: 1}), (E(0, 1), {c: 1})])
    assert top == E(0, 0) and vec == {c: 1}
    assert S.glue([(E(0, 0), {c: 2})]) == (E(0, 0), {c: 2})


def test_glue_disagreement(L2, symbols4):
    S = SheafModel(L2, symbols4)
    a, b = symbols4.coordinate_of((0, 0)), symbols4.coordinate_of((1, 0))
    with pytest.raises(S2ViolationError) as exc:
        S.glue([(E(1, 0), {a: 1}), (E(0, 1), {b: 1})])
    assert set(exc.value.pair) == {E(1, 0), E(0, 1)}


def test_glue_malformed(L1):
    syms = SymbolSpace(1, [(0,), (1,)])
    S = SheafModel(L1, syms)
    with pytest.raises(MalformedSectionError):
        S.glue([(E(-1), {syms.coordinate_of((1,)): 1})])


def test_decompositions_sum_back(L2):
    rng = random.Random(3)
    for _ in range(50):
        r, s = rng.choice(list(L2)), rng.choice(list(L2))
        f = random_vector(rng, 2, L2.join(r, s))
        fr, fs = decompose(f, r, s)
        assert fr + fs == f and membership(fr, r) and membership(fs, s)
        gr, gs = random_decomposition(rng, f, r, s)
        assert gr + gs == f and membership(gr, r) and membership(gs, s)


@pytest.mark.parametrize("msize", [0, 2])
def test_axiom_reports(L2, grid, symbols4, msize):
    syms = SymbolSpace(2, G4, msize)
    for L in (L2, grid):
        S = SheafModel(L, syms)
        for rep in (check_presheaf_laws(S), check_s1(S), check_s2(S)):
            assert rep.ok, rep.text()
    assert check_vector_gluing(SheafModel(L2, syms), random.Random(0), trials=30).ok


def test_full_sheaf_report_on_chain(L1):
    assert check_sheaf(SheafModel(L1, SymbolSpace(1, [(0,), (1,), (-1,)], 1)), trials=20).ok
