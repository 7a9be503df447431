"""Operator cosheaves over a finite index lattice.

Three variants share the coordinate model of :mod:`pipsheaf.sheaf`:

``universal_L``
    constant cosections: operators defined on every assaying space.
``final_set``
    ``r -> {gamma : r in i(A_gamma)}``, increasing along the index order.
``partial_additive``
    cosections are the sheaf's ``Op_r``; an extension ``q -> p`` needs a
    ``w`` in a chosen family with ``p = q v w`` and the coordinates must land
    in the target, so extensions are genuinely partial.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from .lattice import BlockExponent, IndexLattice, exponent_join
from .operators import OperatorSymbol, domain_set, image_set
from .reporting import Report
from .sheaf import SheafModel, SymbolSpace, _clean, _support, check_s1, check_s2, check_presheaf_laws

VARIANTS = ("universal_L", "final_set", "partial_additive")


class CosheafError(ValueError):
    pass


class ExtensionUndefinedError(CosheafError):
    def __init__(self, message, pair):
        super().__init__(message)
        self.pair = pair


def universal_left_multipliers(L: IndexLattice, symbols: SymbolSpace) -> frozenset[int]:
    """Coordinates of operators whose domain is the whole lattice, plus all matrix units."""
    out = set(symbols.matrix_coords)
    everything = set(L)
    for c, g in enumerate(symbols.exponents):
        if set(domain_set(OperatorSymbol(L, {g: 1}))) == everything:
            out.add(c)
    return frozenset(out)


class CosheafModel:
    def __init__(self, lattice: IndexLattice, symbols: SymbolSpace, variant: str,
                 family: Iterable[BlockExponent] | None = None):
        if variant not in VARIANTS:
            raise CosheafError(f"unknown cosheaf variant {variant!r}; expected one of {VARIANTS}")
        self.lattice = lattice
        self.symbols = symbols
        self.variant = variant
        # family searched for join witnesses in the partial variant
        self.family = tuple(lattice) if family is None else tuple(family)

    @cached_property
    def _cosections(self) -> dict[BlockExponent, frozenset[int]]:
        L = self.lattice
        if self.variant == "universal_L":
            constant = universal_left_multipliers(L, self.symbols)
            return {r: constant for r in L}
        if self.variant == "partial_additive":
            sheaf = SheafModel(L, self.symbols)
            return {r: sheaf.sections_at(r) for r in L}
        out = {r: set(self.symbols.matrix_coords) for r in L}
        for c, g in enumerate(self.symbols.exponents):
            for u in image_set(OperatorSymbol(L, {g: 1})):
                out[u].add(c)
        return {r: frozenset(v) for r, v in out.items()}

    def cosections_at(self, r: BlockExponent) -> frozenset[int]:
        self.lattice.require(r)
        return self._cosections[r]

    def precedes(self, q: BlockExponent, p: BlockExponent) -> bool:
        """The relation along which extensions are requested.

        For the partial variant this is ``exists w in family: p = q v w``;
        otherwise the index order.
        """
        self.lattice.require(q, p)
        if self.variant == "partial_additive":
            return any(exponent_join(q, w) == p for w in self.family)
        return self.lattice.leq(q, p)

    def extension_total(self, q: BlockExponent, p: BlockExponent) -> bool:
        return self.precedes(q, p) and self.cosections_at(q) <= self.cosections_at(p)

    def extend(self, cosection, q: BlockExponent, p: BlockExponent) -> dict[int, object]:
        if not self.precedes(q, p):
            raise ExtensionUndefinedError(f"no extension from {q} to {p}: relation fails", (q, p))
        support = _support(cosection)
        if not support <= self.cosections_at(q):
            raise CosheafError(f"cosection is not in the cosection space at {q}")
        if not support <= self.cosections_at(p):
            missing = sorted(support - self.cosections_at(p))
            raise ExtensionUndefinedError(
                f"no extension from {q} to {p}: coordinates {missing} do not survive", (q, p))
        return _clean(cosection)

    def glue_cosections(self, items: Sequence[tuple[BlockExponent, dict]]) -> "CosheafGlue":
        """Produce the cosection at the meet restricting to each ``t_j``, if the hypotheses hold."""
        L = self.lattice
        # extensions are coordinate inclusions, so they agree iff the vectors do
        for (a, s), (b, t) in combinations(items, 2):
            if _clean(s) != _clean(t):
                return CosheafGlue("no-glue-required", witness=(a, b))
        for (a, s), (b, t) in combinations(items, 2):
            w = L.join(a, b)
            try:
                self.extend(s, a, w)
                self.extend(t, b, w)
            except ExtensionUndefinedError as exc:
                return CosheafGlue("extension-undefined", witness=exc.pair)
        meet = L.meet_all([a for a, _ in items])
        glued = _clean(items[0][1])
        if not _support(glued) <= self.cosections_at(meet):
            return CosheafGlue("counterexample", index=meet, witness=(items[0][0], meet))
        for a, t in items:
            if self.extend(glued, meet, a) != _clean(t):
                return CosheafGlue("counterexample", index=meet, witness=(meet, a))
        return CosheafGlue("glued", index=meet, cosection=glued)


class CosheafGlue:
    __slots__ = ("status", "index", "cosection", "witness")

    def __init__(self, status, index=None, cosection=None, witness=None):
        self.status = status
        self.index = index
        self.cosection = cosection
        self.witness = witness

    def __repr__(self):
        return f"CosheafGlue({self.status}, index={self.index}, cosection={self.cosection}, witness={self.witness})"


def check_cosheaf(C: CosheafModel, J: Sequence[BlockExponent], rng: random.Random | None = None,
                  samples: int = 10) -> Report:
    """CS1 and CS2 for the closed cover ``J`` (unions realized as joins)."""
    rng = rng or random.Random(0)
    L = C.lattice
    J = list(dict.fromkeys(J))
    if not J:
        raise CosheafError("a cover needs at least one member")
    L.require(*J)
    prefix = "p" if C.variant == "partial_additive" else ""
    rep = Report(f"cosheaf axioms ({C.variant}) on cover {{{', '.join(map(str, J))}}}")
    meet = L.meet_all(J)

    # CS1: equal extensions to every member force equality
    ok = True
    coords = sorted(C.cosections_at(meet))
    reachable = [W for W in J if C.extension_total(meet, W)]
    for _ in range(samples if coords and reachable else 0):
        a = {c: Fraction(rng.randint(-3, 3)) for c in coords}
        b = dict(a)
        if rng.random() < 0.5:
            b[rng.choice(coords)] += 1
        ext_equal = all(C.extend(a, meet, W) == C.extend(b, meet, W) for W in reachable)
        ok &= ext_equal == (_clean(a) == _clean(b))
    rep.add("check_cosheaf.cs1", ok, f"{prefix}CS1: extensions from the meet {meet} are injective")

    # CS2: the common coordinates of all members live at the meet
    common = frozenset.intersection(*(C.cosections_at(W) for W in J))
    lost = sorted(common - C.cosections_at(meet))
    ok2 = not lost
    for c in sorted(common):
        res = C.glue_cosections([(W, {c: 1}) for W in J])
        ok2 &= res.status in ("glued", "extension-undefined")
    rep.add("check_cosheaf.cs2", ok2,
            f"{prefix}CS2: {len(common)} agreeing coordinate families glue at {meet}"
            + ("" if not lost else f"; counterexample coordinates {[C.symbols.label(c) for c in lost]}"))
    return rep


def check_extension_laws(C: CosheafModel) -> Report:
    """Identity and cocycle laws on all chains; monotonicity for ``final_set``."""
    rep = Report(f"extension laws ({C.variant})")
    L = C.lattice
    full = {r: {c: 1 for c in C.cosections_at(r)} for r in L}
    ok_id = all(C.extend(full[p], p, p) == _clean(full[p]) for p in L if C.precedes(p, p))
    rep.add("check_extension_laws.identity", ok_id, "extension from p to p is the identity")
    ok = True
    chains = 0
    for w in L:
        for z in L:
            if not C.extension_total(w, z):
                continue
            for t in L:
                if C.extension_total(z, t) and C.precedes(w, t):
                    chains += 1
                    ok &= C.extend(C.extend(full[w], w, z), z, t) == C.extend(full[w], w, t)
    rep.add("check_extension_laws.cocycle", ok, f"extension w->z->t equals w->t on {chains} chains")
    if C.variant == "final_set":
        mono = all(C.cosections_at(q) <= C.cosections_at(p) for p in L for q in L if L.leq(q, p))
        rep.add("check_extension_laws.monotone", mono, "q <= p implies cosections at q inside those at p")
    return rep


def check_sheaf_and_cosheaf(L: IndexLattice, symbols: SymbolSpace, covers: Sequence[Sequence[BlockExponent]]) -> Report:
    """Sheaf axioms and final-set cosheaf axioms on the same lattice in one run."""
    rep = Report("sheaf and final-set cosheaf on one lattice")
    S = SheafModel(L, symbols)
    C = CosheafModel(L, symbols, "final_set")
    for part in (check_presheaf_laws(S), check_s1(S), check_s2(S), check_extension_laws(C)):
        rep.extend(part)
    for J in covers:
        rep.extend(check_cosheaf(C, J))
    return rep
