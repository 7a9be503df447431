"""The operator sheaf ``V_r -> Op_r`` over a finite index lattice.

Operators are drawn from a fixed finite :class:`SymbolSpace`: a list ``G`` of
diagonal exponents plus all matrix units on coordinates ``1..M0``.  Because
boundedness is decided from the symbol support, every ``Op_r`` is a
coordinate subspace and every restriction map is an inclusion of coordinates.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .exact import ComplexRational, cq
from .lattice import BlockExponent, DimensionMismatchError, IndexLattice
from .operators import OperatorSymbol, SymbolExponent, apply, domain_set
from .reporting import Report
from .vectors import PipVector, membership


class SheafError(ValueError):
    pass


class OrderViolationError(SheafError):
    pass


class MalformedSectionError(SheafError):
    pass


class S2ViolationError(SheafError):
    def __init__(self, message, pair):
        super().__init__(message)
        self.pair = pair


class SymbolSpace:
    """Coordinates: one per exponent in ``G``, then the ``M0 x M0`` matrix units row-major."""

    def __init__(self, blocks: int, exponents: Iterable = (), matrix_size: int = 0):
        self.blocks = blocks
        exps = [SymbolExponent.of(g) for g in exponents]
        for g in exps:
            if len(g) != blocks:
                raise DimensionMismatchError(f"symbol exponent {g} has wrong length")
        if len(set(exps)) != len(exps):
            raise ValueError("symbol exponents must be distinct")
        self.exponents: tuple[SymbolExponent, ...] = tuple(exps)
        if matrix_size < 0:
            raise ValueError("matrix size must be nonnegative")
        self.matrix_size = matrix_size

    @property
    def dimension(self) -> int:
        return len(self.exponents) + self.matrix_size ** 2

    @property
    def diagonal_coords(self) -> range:
        return range(len(self.exponents))

    @property
    def matrix_coords(self) -> range:
        return range(len(self.exponents), self.dimension)

    def coordinate_of(self, exponent) -> int:
        try:
            return self.exponents.index(SymbolExponent.of(exponent))
        except ValueError:
            raise KeyError(f"{exponent} is not in the symbol set") from None

    def unit_coordinate(self, row: int, col: int) -> int:
        """Coordinate of the matrix unit ``E[row, col]`` (1-based)."""
        if not (1 <= row <= self.matrix_size and 1 <= col <= self.matrix_size):
            raise KeyError(f"matrix unit ({row},{col}) outside 1..{self.matrix_size}")
        return len(self.exponents) + (row - 1) * self.matrix_size + (col - 1)

    def label(self, c: int) -> str:
        if c < len(self.exponents):
            return f"n^{self.exponents[c]}"
        i, j = divmod(c - len(self.exponents), self.matrix_size)
        return f"E[{i + 1},{j + 1}]"

    def operator(self, L: IndexLattice, vector: Mapping[int, object]) -> OperatorSymbol:
        """The operator whose symbol has the given coordinates."""
        diag = {}
        size = self.matrix_size
        matrix = [[ComplexRational()] * size for _ in range(size)]
        for c, v in vector.items():
            if c < len(self.exponents):
                diag[self.exponents[c]] = v
            else:
                i, j = divmod(c - len(self.exponents), size)
                matrix[i][j] = cq(v)
        return OperatorSymbol(L, diag, matrix)


Section = Mapping[int, object]


def _support(vector: Section) -> frozenset[int]:
    return frozenset(c for c, v in vector.items() if v)


def _clean(vector: Section) -> dict[int, object]:
    return {c: v for c, v in sorted(vector.items()) if v}


class SheafModel:
    def __init__(self, lattice: IndexLattice, symbols: SymbolSpace):
        if lattice.blocks != symbols.blocks:
            raise DimensionMismatchError("lattice and symbol space disagree on the block count")
        self.lattice = lattice
        self.symbols = symbols

    @cached_property
    def _sections(self) -> dict[BlockExponent, frozenset[int]]:
        out = {r: set(self.symbols.matrix_coords) for r in self.lattice}
        for c, g in enumerate(self.symbols.exponents):
            for r in domain_set(OperatorSymbol(self.lattice, {g: 1})):
                out[r].add(c)
        return {r: frozenset(v) for r, v in out.items()}

    def sections_at(self, r: BlockExponent) -> frozenset[int]:
        self.lattice.require(r)
        return self._sections[r]

    def restrict(self, section: Section, p: BlockExponent, q: BlockExponent) -> dict[int, object]:
        """Restriction from ``V_p`` to ``V_q`` for ``q <= p``: the same coordinates."""
        if not self.lattice.leq(q, p):
            raise OrderViolationError(f"cannot restrict from {p} to {q}: {q} is not below {p}")
        if not _support(section) <= self.sections_at(p):
            raise MalformedSectionError(f"section is not in Op at {p}")
        out = _clean(section)
        assert _support(out) <= self.sections_at(q)
        return out

    def glue(self, sections: Sequence[tuple[BlockExponent, Section]]):
        """Glue sections agreeing on pairwise meets; returns ``(join, section)``."""
        if not sections:
            raise SheafError("nothing to glue")
        for r, s in sections:
            if not _support(s) <= self.sections_at(r):
                raise MalformedSectionError(f"section is not in Op at {r}")
        for (r, s), (q, t) in combinations(sections, 2):
            w = self.lattice.meet(r, q)
            if self.restrict(s, r, w) != self.restrict(t, q, w):
                raise S2ViolationError(f"sections at {r} and {q} disagree on the meet {w}", (r, q))
        top = self.lattice.join_all([r for r, _ in sections])
        glued = _clean(sections[0][1])
        if not _support(glued) <= self.sections_at(top):
            raise S2ViolationError(f"glued section is not in Op at {top}", (sections[0][0], top))
        for r, s in sections:
            assert self.restrict(glued, top, r) == _clean(s)
        return top, glued


# vector decompositions ------------------------------------------------------


def _block_fits(terms, alpha: Fraction) -> bool:
    return not terms or terms[0][0] + alpha < Fraction(-1, 2)


def decompose(f: PipVector, r: BlockExponent, s: BlockExponent) -> tuple[PipVector, PipVector]:
    """Split ``f`` in ``V_{r v s}`` as ``f_r + f_s``.

    Each tail block goes to whichever space accommodates it (``r`` on ties);
    the finite part goes to ``r``.
    """
    tails_r, tails_s = {}, {}
    for j, terms in enumerate(f.tails):
        if _block_fits(terms, r[j]):
            tails_r[j] = [(c, sigma) for sigma, c in terms]
        elif _block_fits(terms, s[j]):
            tails_s[j] = [(c, sigma) for sigma, c in terms]
        else:
            raise ValueError(f"block {j} of the vector fits neither {r} nor {s}")
    fr = PipVector(f.blocks, f.finite, f.tail_start, tails_r)
    fs = PipVector(f.blocks, {}, f.tail_start, tails_s)
    return fr, fs


def random_vector(rng: random.Random, blocks: int, inside: BlockExponent, *, head: int = 3) -> PipVector:
    """Random vector of ``V_inside`` with integer tail exponents and a small exact head."""
    N = rng.randint(0, head)
    finite = {n: Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for n in range(1, N + 1)}
    tails = {}
    for j in range(blocks):
        if rng.random() < 0.2:
            continue
        bound = -inside[j] - Fraction(1, 2)  # need sigma < bound
        top = -(-bound // 1) - 1  # largest integer strictly below bound
        terms = []
        for _ in range(rng.randint(1, 2)):
            sigma = top - rng.randint(0, 2)
            terms.append((Fraction(rng.randint(-4, 4) or 1, rng.randint(1, 3)), sigma))
        tails[j] = terms
    return PipVector(blocks, finite, N, tails)


def random_decomposition(rng: random.Random, f: PipVector, r: BlockExponent, s: BlockExponent):
    """Another decomposition ``f = (f_r + h) + (f_s - h)`` with random ``h`` in ``V_{r ^ s}``."""
    fr, fs = decompose(f, r, s)
    h = random_vector(rng, f.blocks, BlockExponent(max(a, b) for a, b in zip(r, s)))
    return fr + h, fs - h


# law checks -------------------------------------------------------------------


def check_presheaf_laws(S: SheafModel) -> Report:
    rep = Report("presheaf laws")
    L = S.lattice
    ok_mono = all(
        S.sections_at(p) <= S.sections_at(q)
        for p in L for q in L if L.leq(q, p)
    )
    rep.add("check_presheaf_laws.monotone", ok_mono, "q <= p implies Op_p inside Op_q")
    full = {r: {c: 1 for c in S.sections_at(r)} for r in L}
    ok_id = all(S.restrict(full[p], p, p) == _clean(full[p]) for p in L)
    rep.add("check_presheaf_laws.identity", ok_id, "restriction from p to p is the identity")
    ok_comp = True
    for p in L:
        for q in L:
            if not L.leq(q, p):
                continue
            for r in L:
                if L.leq(r, q):
                    via = S.restrict(S.restrict(full[p], p, q), q, r)
                    ok_comp &= via == S.restrict(full[p], p, r)
    rep.add("check_presheaf_laws.composition", ok_comp, "restriction p->q->r equals p->r on all chains")
    return rep


def check_s1(S: SheafModel, rng: random.Random | None = None, samples: int = 20) -> Report:
    """Local identity: sections equal on every member of a cover are equal."""
    rng = rng or random.Random(0)
    rep = Report("sheaf axiom S1")
    L = S.lattice
    ok = True
    for r in L:
        for q in L:
            w = L.join(r, q)
            coords = sorted(S.sections_at(w))
            for _ in range(samples if coords else 0):
                a = {c: Fraction(rng.randint(-3, 3)) for c in coords}
                b = dict(a)
                if rng.random() < 0.5:
                    c = rng.choice(coords)
                    b[c] = b[c] + 1
                local_equal = all(S.restrict(a, w, x) == S.restrict(b, w, x) for x in (r, q))
                ok &= local_equal == (_clean(a) == _clean(b))
    rep.add("check_s1", ok, f"S1 on all covers {{r, q}} of r v q over {len(L)} indices")
    return rep


def check_s2(S: SheafModel) -> Report:
    """Gluing for every pair and every coordinate in ``Op_r ∩ Op_s``."""
    rep = Report("sheaf axiom S2")
    L = S.lattice
    ok = True
    detail = f"S2 on all {len(L) ** 2} ordered pairs"
    for r in L:
        for s in L:
            shared = S.sections_at(r) & S.sections_at(s)
            if shared != S.sections_at(L.join(r, s)):
                ok = False
                detail = f"Op_{r} ∩ Op_{s} differs from Op at the join"
            for c in shared:
                top, glued = S.glue([(r, {c: 1}), (s, {c: 1})])
                ok &= top == L.join(r, s) and glued == {c: 1}
                ok &= S.restrict(glued, top, r) == {c: 1} and S.restrict(glued, top, s) == {c: 1}
    rep.add("check_s2", ok, detail)
    return rep


def check_vector_gluing(S: SheafModel, rng: random.Random | None = None, trials: int = 100) -> Report:
    """Action of glued operators does not depend on the decomposition ``f = f_r + f_s``."""
    rng = rng or random.Random(0)
    rep = Report("vector-level gluing")
    L = S.lattice
    pairs = [(r, s) for r in L for s in L]
    ok = True
    done = 0
    bad = None
    for _ in range(trials):
        r, s = rng.choice(pairs)
        top = L.join(r, s)
        coords = sorted(S.sections_at(top))
        if not coords:
            continue
        vec = {c: Fraction(rng.randint(-3, 3) or 1) for c in rng.sample(coords, min(len(coords), 3))}
        A = S.symbols.operator(L, vec)
        f = random_vector(rng, L.blocks, top)
        assert membership(f, top)
        fr, fs = decompose(f, r, s)
        gr, gs = random_decomposition(rng, f, r, s)
        direct = apply(A, f, top)
        first = apply(A, fr, r) + apply(A, fs, s)
        second = apply(A, gr, r) + apply(A, gs, s)
        if not (direct == first == second):
            ok = False
            bad = (r, s)
        done += 1
    rep.add("check_vector_gluing", ok,
            f"{done} random decompositions, glued action decomposition independent"
            + ("" if ok else f"; failed at pair {bad}"))
    return rep


def check_sheaf(S: SheafModel, rng: random.Random | None = None, trials: int = 100) -> Report:
    rng = rng or random.Random(0)
    rep = Report("sheaf")
    for part in (check_presheaf_laws(S), check_s1(S, rng), check_s2(S), check_vector_gluing(S, rng, trials)):
        rep.extend(part)
    return rep
