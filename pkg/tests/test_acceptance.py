"""Acceptance criteria, one test each.

Every test appends a ``criterion N: PASS|FAIL ...`` line that the terminal
summary prints, then asserts.  Tolerances are pinned here.
"""

import random
from fractions import Fraction
from itertools import combinations

import numpy as np

from conftest import ACCEPTANCE_LINES, E, G4
from helpers import compatible_pair, random_homomorphism, random_operator
from oracles import basel_enclosure, brute_closure, dense_rank
from pipsheaf import cli
from pipsheaf.categories import check_AVI_category, check_VI_category
from pipsheaf.cohomology import (
    CohomologyBuildError,
    Covering,
    agree_on_cohomology,
    build_complex,
    cohomology_dims,
    contracting_homotopy,
    refinement_map,
)
from pipsheaf.cosheaf import CosheafModel, ExtensionUndefinedError, check_cosheaf, check_extension_laws
from pipsheaf.lattice import check_lattice_laws, close_lattice
from pipsheaf.operators import OperatorSymbol, adjoint, apply, classify, compose, domain_set, image_set
from pipsheaf.sheaf import SheafModel, SymbolSpace, check_s1, check_s2, check_vector_gluing
from pipsheaf.vectors import PipVector, UndefinedInnerProductError, absolutely_compatible, partial_inner_product

BASEL_TOL = Fraction(1, 10 ** 6)
BASEL_VALUE = Fraction(16449340668, 10 ** 10)
EXPECTED_L2_SIZE = 9
SEED = 20240601


def record(n, ok, detail):
    ACCEPTANCE_LINES.append(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
    return ok


def _subsets(xs, max_size):
    for size in range(1, max_size + 1):
        yield from combinations(xs, size)


def test_criterion_01_lattice_closure():
    gens = [E(1, 0), E(0, 1)]
    L = close_lattice(gens, lhs_mode=True)
    brute = brute_closure([(1, 0), (0, 1)], True)
    laws = check_lattice_laws(L, gens, True)
    ok = len(L) == EXPECTED_L2_SIZE and laws.ok and {tuple(e) for e in L} == brute
    detail = (f"closure has {len(L)} elements (brute-force fixpoint: {len(brute)}, expected {EXPECTED_L2_SIZE}); "
              f"involution and De Morgan on all {len(L) ** 2} pairs: {'pass' if laws.ok else 'fail'}")
    record(1, ok, detail)
    assert laws.ok and {tuple(e) for e in L} == brute
    assert len(L) == EXPECTED_L2_SIZE, detail


def test_criterion_02_domain_image_adjoint(L1, L2):
    rng = random.Random(SEED)
    bad = 0
    for L in (L1, L2):
        for _ in range(200):
            A = random_operator(rng, L)
            d, i = set(domain_set(A)), set(image_set(A))
            for p in L:
                for q in L:
                    if L.leq(q, p) and ((p in d and q not in d) or (q in i and p not in i)):
                        bad += 1
            bad += adjoint(adjoint(A)) != A
    record(2, bad == 0, f"400 operators: d(A) initial, i(A) final, adjoint involutive; {bad} violations")
    assert bad == 0


def test_criterion_03_homomorphism_composition(L1, L2):
    rng = random.Random(SEED + 3)
    bad = 0
    for n in range(50):
        L = (L1, L2)[n % 2]
        A, B = random_homomorphism(rng, L), random_homomorphism(rng, L)
        BA = compose(B, A)
        bad += not classify(BA).is_homomorphism
    record(3, bad == 0, f"50 homomorphism pairs composed; {bad} non-homomorphic composites")
    assert bad == 0


def test_criterion_04_compatibility_preserved(L1, L2):
    rng = random.Random(SEED + 4)
    bad = checked = 0
    for n in range(20):
        L = (L1, L2)[n % 2]
        A = random_homomorphism(rng, L)
        for _ in range(20):
            f, g, r = compatible_pair(rng, L)
            assert absolutely_compatible(f, g)
            Af, Ag = apply(A, f, r), apply(A, g, -r)
            checked += 1
            bad += not absolutely_compatible(Af, Ag)
    record(4, bad == 0, f"{checked} pairs (20 homomorphisms x 20 compatible pairs): Af # Ag; {bad} failures")
    assert bad == 0


def test_criterion_05_sheaf_axioms(L2, symbols4):
    S = SheafModel(L2, symbols4)
    reps = [check_s1(S), check_s2(S), check_vector_gluing(S, random.Random(SEED), trials=100)]
    ok = all(r.ok for r in reps)
    record(5, ok, "S1, S2 on all pairs of L2 and 100 random decompositions: "
           + ", ".join(f"{r.title}={'pass' if r.ok else 'fail'}" for r in reps))
    assert ok


def test_criterion_06_coboundary_squares_to_zero(L2, symbols4):
    rng = random.Random(SEED + 6)
    models = [SheafModel(L2, symbols4)] + [CosheafModel(L2, symbols4, v) for v in ("universal_L", "final_set", "partial_additive")]
    bad = total = aborted = 0
    for model in models:
        mode = "sheaf" if isinstance(model, SheafModel) else "cosheaf"
        for members in _subsets(list(L2), 6):
            try:
                cx = build_complex(model, Covering(L2, members, mode), 4)
            except CohomologyBuildError:
                # partial extensions only run where cosections survive the join
                assert model.variant == "partial_additive"
                aborted += 1
                continue
            total += 1
            bad += not (cx.check_dd_zero() and cx.check_dd_random(rng, 100))
    record(6, bad == 0, f"DD = 0 exactly on {total} complexes (all coverings of size <= 6, degrees <= 4, "
           f"sheaf and three cosheaf variants, 100 random cochains each; {aborted} partial builds "
           f"aborted on an undefined extension); {bad} failures")
    assert bad == 0


def test_criterion_07_cohomology(L2):
    notes, ok = [], True
    for msize in (0, 1):
        cx = build_complex(SheafModel(L2, SymbolSpace(2, G4, msize)), Covering(L2, list(L2)), 3)
        dims = cohomology_dims(cx)
        hom = contracting_homotopy(cx)
        h = [dims.h(p) for p in range(4)]
        # second elimination routine: dense rational rank of every coboundary
        ranks = [dense_rank([[Fraction(int(x)) for x in row] for row in cx.D[p]]) for p in range(4)]
        oracle = [cx.dim(p) - ranks[p] - (ranks[p - 1] if p else 0) for p in range(4)]
        good = h == oracle == [2 + msize ** 2, 0, 0, 0] and hom.verified and dims.oracle_agrees
        ok &= good
        notes.append(f"M0={msize}: H={h}")
    cx = build_complex(SheafModel(L2, SymbolSpace(2, G4 + [(2, 2)])), Covering(L2, [E(1, 0), E(0, 1)]))
    h1 = cohomology_dims(cx).h(1)
    ok &= h1 == 1
    notes.append(f"pair covering with (2,2): H^1={h1}")
    record(7, ok, "; ".join(notes) + "; homotopy D h + h D = id verified")
    assert ok


def test_criterion_08_refinement(L2):
    S = SheafModel(L2, SymbolSpace(2, G4 + [(2, 2)]))
    J = build_complex(S, Covering(L2, [E(1, 1), E(1, 0), E(0, 1)]))
    K = build_complex(S, Covering(L2, [E(1, 0), E(0, 1), E(0, 0)]))
    M = build_complex(S, Covering(L2, [E(0, 0), E(-1, -1)]))
    base = {E(1, 0): E(1, 0), E(0, 1): E(0, 1)}
    choices = [refinement_map(J, K, {**base, E(1, 1): t}) for t in (E(1, 0), E(0, 1), E(0, 0))]
    t = {E(1, 0): E(0, 0), E(0, 1): E(-1, -1), E(0, 0): E(0, 0)}
    Rt = refinement_map(K, M, t)
    Rts = refinement_map(J, M, {j: t[base.get(j, E(1, 0))] for j in J.covering.members})
    commute = all(R.commutes for R in choices + [Rt, Rts])
    top = min(J.pmax, M.pmax)
    functorial = all(agree_on_cohomology(J, M, Rts.T[p], choices[0].T[p] @ Rt.T[p], p) for p in range(top + 1))
    independent = all(agree_on_cohomology(J, K, choices[0].T[p], R.T[p], p)
                      for R in choices[1:] for p in range(min(J.pmax, K.pmax) + 1))
    distinct = not np.array_equal(choices[0].T[1], choices[1].T[1])
    ok = commute and functorial and independent and distinct
    record(8, ok, f"cochain maps commute with D: {commute}; (t o s)* = s* t* on H^p: {functorial}; "
           f"three distinct refinements agree on H^p: {independent}")
    assert ok


def test_criterion_09_cosheaves(L1, L2, symbols4):
    syms1 = SymbolSpace(1, [(0,), (1,), (-1,)], 1)
    universal = all(check_cosheaf(CosheafModel(L, s, "universal_L"), J, samples=3).ok
                    for L, s in ((L1, syms1), (L2, symbols4)) for J in _subsets(list(L), len(L)))
    final = CosheafModel(L2, symbols4, "final_set")
    final_ok = check_extension_laws(final).ok and all(
        check_cosheaf(final, J, samples=3).ok for J in _subsets(list(L2), len(L2)))
    doctored = CosheafModel(L2, symbols4, "partial_additive", family=[E(1, 1), E(1, 0)])
    try:
        doctored.extend({symbols4.coordinate_of((0, 0)): 1}, E(1, 0), E(0, 0))
        partial_ok = False
    except ExtensionUndefinedError as exc:
        partial_ok = exc.pair == (E(1, 0), E(0, 0))
    ok = universal and final_ok and partial_ok
    record(9, ok, f"universal_L on all coverings of L1, L2: {universal}; final_set on L2: {final_ok}; "
           f"partial reports extension-undefined on (1,0) -> (0,0): {partial_ok}")
    assert ok


def test_criterion_10_partial_inner_product(L1):
    f = PipVector.power(1, {0: (1, Fraction(-1))})
    ip = partial_inner_product(f, f, L1, BASEL_TOL)
    lo, hi = ip.real
    olo, ohi = basel_enclosure()
    value = Fraction(ip.value.real)
    within = abs(value - Fraction(olo)) <= BASEL_TOL + Fraction(ohi - olo) and lo <= Fraction(ohi) and Fraction(olo) <= hi
    contains = lo <= BASEL_VALUE <= hi
    try:
        partial_inner_product(PipVector.power(1, {0: (1, Fraction(1))}), f, L1, BASEL_TOL)
        raises = False
    except UndefinedInnerProductError:
        raises = True
    ok = within and contains and raises and hi - lo <= 2 * BASEL_TOL
    record(10, ok, f"sum n^-2 in [{float(lo):.12f}, {float(hi):.12f}], tol 1e-6, contains 1.6449340668: {contains}; "
           f"incompatible pair raises: {raises}")
    assert ok


def test_criterion_11_categories(L1):
    vi = check_VI_category(L1)
    avi = check_AVI_category(L1, OperatorSymbol.power(L1, [-1]), 4)
    ok = vi.ok and avi.ok
    record(11, ok, f"{vi.title}: {'pass' if vi.ok else 'fail'}; {avi.title}: {'pass' if avi.ok else 'fail'}")
    assert ok, vi.text() + avi.text()


def test_criterion_12_cli_determinism(tmp_path, capsys):
    outputs = []
    for run in ("a", "b"):
        for name in ("l1", "l2", "l2_obstruction"):
            cli.main(["--config", f"configs/{name}.toml", "--command", "report-all", "--out", str(tmp_path / run / name)])
        outputs.append([(tmp_path / run / name / "report-all.txt").read_bytes() for name in ("l1", "l2", "l2_obstruction")])
    ok = outputs[0] == outputs[1]
    record(12, ok, f"report-all twice on 3 configs: byte-identical={ok}")
    assert ok
