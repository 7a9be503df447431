import pytest

from conftest import E, G4
from pipsheaf.cosheaf import (
    CosheafError,
    CosheafModel,
    ExtensionUndefinedError,
    check_cosheaf,
    check_extension_laws,
    check_sheaf_and_cosheaf,
    universal_left_multipliers,
)
from pipsheaf.sheaf import SymbolSpace


def _subsets(L):
    xs = list(L)
    for mask in range(1, 1 << len(xs)):
        yield [x for i, x in enumerate(xs) if mask >> i & 1]


def test_universal_multipliers_examples(L1, L2, symbols4):
    syms1 = SymbolSpace(1, [(0,), (1,)])
    assert universal_left_multipliers(L1, syms1) == {syms1.coordinate_of((0,))}
    got = universal_left_multipliers(L2, symbols4)
    assert got == {symbols4.coordinate_of((0, 0)), symbols4.coordinate_of((-1, -1))}
    withm = SymbolSpace(2, G4, 2)
    assert len(universal_left_multipliers(L2, withm)) == 2 + 4


def test_universal_extension_is_identity(L2, symbols4):
    C = CosheafModel(L2, symbols4, "universal_L")
    t = {c: 1 for c in C.cosections_at(E(1, 1))}
    for q in L2:
        for p in L2:
            if L2.leq(q, p):
                assert C.extend(t, q, p) == t


def test_final_set_chain(L1):
    syms = SymbolSpace(1, [(0,), (1,)])
    C = CosheafModel(L1, syms, "final_set")
    g1 = syms.coordinate_of((1,))
    assert [r for r in L1 if g1 in C.cosections_at(r)] == [E(0), E(-1)]
    assert C.extend({g1: 2}, E(0), E(-1)) == {g1: 2}
    with pytest.raises(ExtensionUndefinedError):
        C.extend({g1: 2}, E(-1), E(0))


def test_final_set_glue_examples(L2, symbols4):
    C = CosheafModel(L2, symbols4, "final_set")
    z = symbols4.coordinate_of((0, 0))
    res = C.glue_cosections([(E(1, 0), {z: 1}), (E(0, 1), {z: 1})])
    assert res.status == "glued" and res.index == E(1, 1) and res.cosection == {z: 1}
    a, b = symbols4.coordinate_of((1, 0)), symbols4.coordinate_of((0, 1))
    assert C.glue_cosections([(E(1, 0), {a: 1}), (E(0, 1), {b: 1})]).status == "no-glue-required"


def test_universal_passes_on_all_covers(L1, L2, symbols4):
    for L, syms in ((L1, SymbolSpace(1, [(0,), (1,), (-1,)], 1)), (L2, symbols4)):
        C = CosheafModel(L, syms, "universal_L")
        for J in _subsets(L):
            assert check_cosheaf(C, J, samples=3).ok


def test_final_set_passes(L2, grid, symbols4):
    for L in (L2, grid):
        C = CosheafModel(L, symbols4, "final_set")
        assert check_extension_laws(C).ok
        for J in _subsets(L2):
            assert check_cosheaf(C, J, samples=3).ok


def test_partial_on_doctored_family(L2, symbols4):
    C = CosheafModel(L2, symbols4, "partial_additive", family=[E(1, 1), E(1, 0)])
    assert C.precedes(E(0, 1), E(0, 0))  # (0,1) v (1,0)
    assert not C.precedes(E(1, 0), E(0, 0))  # needs (0,1), absent from the family
    with pytest.raises(ExtensionUndefinedError) as exc:
        C.extend({symbols4.coordinate_of((0, 0)): 1}, E(1, 0), E(0, 0))
    assert exc.value.pair == (E(1, 0), E(0, 0))
    assert check_extension_laws(C).ok


def test_partial_full_family_is_total(L2, symbols4):
    C = CosheafModel(L2, symbols4, "partial_additive")
    for q in L2:
        for p in L2:
            assert C.precedes(q, p) == L2.leq(q, p)


def test_unknown_variant(L1):
    with pytest.raises(CosheafError):
        CosheafModel(L1, SymbolSpace(1), "nope")


def test_sheaf_and_cosheaf_together(L2, symbols4):
    covers = [[E(1, 0), E(0, 1)], list(L2)]
    assert check_sheaf_and_cosheaf(L2, symbols4, covers).ok
