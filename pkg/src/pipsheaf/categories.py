"""Finite categories built from index lattices and operators, with law checkers."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Hashable, Iterable

from .lattice import FORMAL_BOTTOM, FORMAL_TOP, IndexLattice, exponent_leq
from .operators import (
    OperatorSymbol,
    UndefinedProductError,
    classify,
    compose,
    homomorphism_failure,
    is_homomorphism,
    power,
    representative_exists,
)
from .reporting import Report


class CategoryError(ValueError):
    pass


class NotTotallyRegularError(CategoryError):
    pass


class NotAHomomorphismError(CategoryError):
    def __init__(self, message, condition, witness):
        super().__init__(message)
        self.condition = condition
        self.witness = witness


@dataclass(frozen=True)
class Arrow:
    key: Hashable
    source: Hashable
    target: Hashable
    label: str


class FiniteCategory:
    """Objects, arrows, a partial composition table ``(g, f) -> g∘f`` and identities.

    ``truncated`` marks graded categories where composites past the grading
    bound are deliberately absent.
    """

    def __init__(self, objects: Iterable, arrows: Iterable[Arrow], table: dict, identities: dict,
                 truncated: bool = False):
        self.objects = list(objects)
        self.arrows = {a.key: a for a in arrows}
        self.table = dict(table)
        self.identities = dict(identities)
        self.truncated = truncated

    def compose(self, g, f):
        """``g ∘ f`` (``f`` first); ``None`` when undefined."""
        return self.table.get((g, f))

    def hom(self, x, y) -> list:
        return [a.key for a in self.arrows.values() if a.source == x and a.target == y]

    def check_axioms(self) -> Report:
        rep = Report("category axioms")
        ids_ok = all(
            x in self.identities
            and self.arrows[self.identities[x]].source == x
            and self.arrows[self.identities[x]].target == x
            for x in self.objects
        )
        rep.add("FiniteCategory.check_axioms.identity", ids_ok, "every object has an identity arrow")

        typed = closed = True
        for (g, f), h in self.table.items():
            A, B, C = self.arrows[f], self.arrows[g], self.arrows[h]
            if A.target != B.source:
                typed = False
            if C.source != A.source or C.target != B.target:
                typed = False
        if not self.truncated:
            for f, g in product(self.arrows.values(), repeat=2):
                if f.target == g.source and (g.key, f.key) not in self.table:
                    closed = False
        rep.add("FiniteCategory.check_axioms.composition", typed and closed,
                "composites exist exactly for matching inner objects"
                + (" (within the grading bound)" if self.truncated else ""))

        unit = True
        for a in self.arrows.values():
            unit &= self.compose(a.key, self.identities[a.source]) == a.key
            unit &= self.compose(self.identities[a.target], a.key) == a.key
        rep.add("FiniteCategory.check_axioms.unit", unit, f"unit law on {len(self.arrows)} arrows")

        assoc = True
        triples = 0
        for (g, f), gf in self.table.items():
            for h in self.arrows:
                hg = self.compose(h, g)
                if hg is None:
                    continue
                left = self.compose(h, gf)
                right = self.compose(hg, f)
                if left is None and right is None:
                    continue
                triples += 1
                assoc &= left == right
        rep.add("FiniteCategory.check_axioms.associativity", assoc, f"associativity on {triples} composable triples")
        return rep

    def initial_objects(self) -> list:
        return [x for x in self.objects if all(len(self.hom(x, y)) == 1 for y in self.objects)]

    def terminal_objects(self) -> list:
        return [x for x in self.objects if all(len(self.hom(y, x)) == 1 for y in self.objects)]


# the lattice as a category -------------------------------------------------------


def _embedding_label(s, r) -> str:
    return f"E[{s}<-{r}]"


def build_VI_category(L: IndexLattice) -> FiniteCategory:
    """Objects ``V#``, the lattice, ``V``; one embedding ``E_sr : V_r -> V_s`` per ``r <= s``."""
    objects = [FORMAL_BOTTOM, *L.elements, FORMAL_TOP]
    arrows = []
    for r in objects:
        for s in objects:
            if exponent_leq(r, s):
                arrows.append(Arrow(("E", s, r), r, s, _embedding_label(s, r)))
    table = {}
    for f in arrows:
        for g in arrows:
            if f.target == g.source:
                table[(g.key, f.key)] = ("E", g.target, f.source)
    identities = {x: ("E", x, x) for x in objects}
    return FiniteCategory(objects, arrows, table, identities)


def involution_functor_check(C: FiniteCategory, L: IndexLattice) -> Report:
    """Contravariant functor laws for ``r -> -r`` and ``E_sr -> E_{-r,-s}``."""
    rep = Report("involution functor")

    def on_object(x):
        return L.involution(x)

    def on_arrow(key):
        _, s, r = key
        return ("E", on_object(r), on_object(s))

    ok_map = True
    for a in C.arrows.values():
        img = on_arrow(a.key)
        ok_map &= img in C.arrows
        if img in C.arrows:
            b = C.arrows[img]
            ok_map &= b.source == on_object(a.target) and b.target == on_object(a.source)
    rep.add("involution_functor_check.arrows", ok_map, "every arrow maps to a reversed arrow")
    ok_id = all(on_arrow(C.identities[x]) == C.identities[on_object(x)] for x in C.objects)
    rep.add("involution_functor_check.identity", ok_id, "identities map to identities")
    ok_comp = all(
        on_arrow(gf) == C.compose(on_arrow(f), on_arrow(g)) for (g, f), gf in C.table.items()
    )
    rep.add("involution_functor_check.composition", ok_comp,
            f"composites map to reversed composites on {len(C.table)} pairs")
    ok_inv = all(on_arrow(on_arrow(k)) == k for k in C.arrows)
    rep.add("involution_functor_check.involutive", ok_inv, "applying the functor twice is the identity")
    return rep


def check_VI_category(L: IndexLattice) -> Report:
    C = build_VI_category(L)
    rep = Report(f"V_I category ({len(C.objects)} objects, {len(C.arrows)} arrows)")
    rep.extend(C.check_axioms())
    rep.add("FiniteCategory.initial_objects", C.initial_objects() == [FORMAL_BOTTOM], "V# is the unique initial object")
    rep.add("FiniteCategory.terminal_objects", C.terminal_objects() == [FORMAL_TOP], "V is the unique terminal object")
    rep.extend(involution_functor_check(C, L))
    return rep


# the category generated by a totally regular operator ------------------------------


def build_AVI_category(L: IndexLattice, A: OperatorSymbol, n_max: int = 4) -> FiniteCategory:
    """Arrows ``A^n_pq : V_q -> V_p`` for ``q <= p`` and ``0 <= n <= n_max``; ``n = 0`` are the identities."""
    if A.source != L or A.target != L:
        raise CategoryError("operator must act on the given lattice")
    if not classify(A).is_totally_regular:
        raise NotTotallyRegularError("operator is not totally regular (e(A) <= 0 fails)")
    if n_max < 0:
        raise CategoryError("n_max must be nonnegative")
    powers = [power(A, n) for n in range(n_max + 1)]
    arrows = []
    for n, An in enumerate(powers):
        for q in L:
            for p in L:
                if L.leq(q, p):
                    if not representative_exists(An, p, q):
                        raise CategoryError(f"A^{n} has no representative {q} -> {p}")
                    arrows.append(Arrow((n, p, q), q, p, f"A^{n}[{p}<-{q}]"))
    table = {}
    for f in arrows:
        for g in arrows:
            n, m = f.key[0], g.key[0]
            if f.target == g.source and n + m <= n_max:
                table[(g.key, f.key)] = (n + m, g.target, f.source)
    identities = {r: (0, r, r) for r in L}
    C = FiniteCategory(list(L), arrows, table, identities, truncated=True)
    C.powers = powers
    return C


def check_AVI_category(L: IndexLattice, A: OperatorSymbol, n_max: int = 4) -> Report:
    C = build_AVI_category(L, A, n_max)
    rep = Report(f"category generated by A up to degree {n_max} ({len(C.arrows)} arrows)")
    rep.extend(C.check_axioms())
    ok = True
    for m in range(n_max + 1):
        for n in range(n_max + 1 - m):
            ok &= compose(C.powers[m], C.powers[n]) == C.powers[m + n]
    rep.add("check_AVI_category.powers", ok, f"A^m ∘ A^n = A^(m+n) as symbols for m + n <= {n_max}")
    rep.add("check_AVI_category.identity", C.powers[0] == OperatorSymbol.identity(L),
            "degree-0 arrows are the identity operator")
    return rep


# homomorphisms ------------------------------------------------------------------------


def _require_homomorphism(A: OperatorSymbol, name: str) -> None:
    failure = homomorphism_failure(A)
    if failure is not None:
        cond, w = failure
        raise NotAHomomorphismError(f"{name} is not a homomorphism: condition ({cond}) fails at {w}", cond, w)


def check_pip_composition(A: OperatorSymbol, B: OperatorSymbol) -> Report:
    """Composite ``B∘A`` of homomorphisms exists, is a homomorphism, and unit laws hold."""
    _require_homomorphism(A, "A")
    _require_homomorphism(B, "B")
    rep = Report("composition of homomorphisms")
    try:
        BA = compose(B, A)
    except UndefinedProductError:
        rep.add("check_pip_composition.defined", False, "composite B∘A is undefined")
        return rep
    rep.add("check_pip_composition.defined", True, f"B∘A = {BA}")
    rep.add("check_pip_composition.homomorphism", is_homomorphism(BA), "B∘A is a homomorphism")
    one_src = OperatorSymbol.identity(A.source)
    one_tgt = OperatorSymbol.identity(A.target)
    rep.add("check_pip_composition.unit", compose(A, one_src) == A and compose(one_tgt, A) == A,
            "A∘1 = A = 1∘A")
    if BA.is_zero():
        rep.info("check_pip_composition.zero", "composite is the zero operator (flagged edge case)")
    return rep


def check_pip_associativity(A: OperatorSymbol, B: OperatorSymbol, C: OperatorSymbol) -> bool:
    for X, name in ((A, "A"), (B, "B"), (C, "C")):
        _require_homomorphism(X, name)
    return compose(C, compose(B, A)) == compose(compose(C, B), A)


def parallel_homomorphisms(L: IndexLattice) -> tuple[OperatorSymbol, OperatorSymbol]:
    """Two distinct homomorphisms ``V_L -> V_L``: the identity and twice the identity.

    Their coexistence shows ``V_L`` is neither initial nor terminal among PIP-spaces.
    """
    one = OperatorSymbol.identity(L)
    two = OperatorSymbol.identity(L, 2)
    assert is_homomorphism(one) and is_homomorphism(two) and one != two
    return one, two
