"""Hypothesis-driven laws over random lattices, operators and coverings."""

import random

from hypothesis import HealthCheck, given, settings, strategies as st

from helpers import random_operator
from oracles import brute_closure, cech_dims
from pipsheaf.cohomology import Covering, build_complex, cohomology_dims
from pipsheaf.cosheaf import CosheafModel
from pipsheaf.lattice import BlockExponent, check_lattice_laws, close_lattice
from pipsheaf.operators import (
    UndefinedProductError,
    adjoint,
    compose,
    domain_set,
    image_set,
)
from pipsheaf.sheaf import SheafModel, SymbolSpace

small = st.integers(min_value=-2, max_value=2)


@st.composite
def generator_sets(draw):
    k = draw(st.integers(1, 2))
    gens = draw(st.lists(st.tuples(*[small] * k), min_size=1, max_size=3))
    return k, [BlockExponent(g) for g in gens]


@st.composite
def symbol_spaces(draw, k):
    exps = draw(st.lists(st.tuples(*[small] * k), max_size=4, unique=True))
    return SymbolSpace(k, exps, draw(st.integers(0, 1)))


FAST = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@FAST
@given(generator_sets(), st.booleans())
def test_closure_matches_brute_force(data, lhs):
    k, gens = data
    L = close_lattice(gens, lhs_mode=lhs)
    assert {tuple(e) for e in L} == brute_closure([tuple(g) for g in gens], lhs)
    assert check_lattice_laws(L, gens, lhs).ok


@FAST
@given(generator_sets(), st.integers(0, 10 ** 6))
def test_operator_sets_and_adjoint(data, seed):
    k, gens = data
    L = close_lattice(gens, lhs_mode=True)
    A = random_operator(random.Random(seed), L)
    d, i = set(domain_set(A)), set(image_set(A))
    for p in L:
        for q in L:
            if L.leq(q, p):
                assert not (p in d) or q in d
                assert not (q in i) or p in i
    assert adjoint(adjoint(A)) == A


@FAST
@given(generator_sets(), st.integers(0, 10 ** 6))
def test_composition_associative_when_defined(data, seed):
    k, gens = data
    L = close_lattice(gens, lhs_mode=True)
    rng = random.Random(seed)
    A, B, C = (random_operator(rng, L, max_terms=2) for _ in range(3))
    try:
        left = compose(C, compose(B, A))
        right = compose(compose(C, B), A)
    except UndefinedProductError:
        return
    assert left == right


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_coboundary_squares_to_zero_and_dims_match(data):
    k = data.draw(st.integers(1, 2))
    gens = data.draw(st.lists(st.tuples(*[small] * k), min_size=1, max_size=2))
    L = close_lattice([BlockExponent(g) for g in gens], lhs_mode=True)
    syms = data.draw(symbol_spaces(k))
    members = data.draw(st.lists(st.sampled_from(list(L)), min_size=1, max_size=4, unique=True))
    mode = data.draw(st.sampled_from(["sheaf", "final_set", "universal_L"]))
    if mode == "sheaf":
        model, cov = SheafModel(L, syms), Covering(L, members)
        space, combine = model.sections_at, L.meet_all
    else:
        model, cov = CosheafModel(L, syms, mode), Covering(L, members, "cosheaf")
        space, combine = model.cosections_at, L.join_all
    cx = build_complex(model, cov)
    assert cx.check_dd_zero()
    dims = cohomology_dims(cx)
    assert dims.oracle_agrees
    assert [dims.h(p) for p in range(cx.pmax + 1)] == cech_dims(space, list(cov.members), combine, cx.pmax)
    if cov.cone_point() is not None:
        assert dims.acyclic
