"""Finite involutive lattices of power-weighted sequence spaces.

A block exponent ``alpha = (alpha_0, ..., alpha_{k-1})`` names the space of
complex sequences ``f`` with ``sum |f_n|^2 n^(2 alpha_j) < inf`` on every
residue block ``j = n mod k``.  Larger exponents give smaller spaces, so the
index order is the reverse of the componentwise order on exponents:

* ``p <= q`` (``V_p`` inside ``V_q``) iff ``alpha(p) >= alpha(q)`` componentwise
* meet (intersection) is the componentwise max
* join (sum) is the componentwise min
* involution (Koethe dual) is negation

The two extreme spaces ``V#`` (finite sequences) and ``V`` (all sequences)
are kept as formal markers, never as lattice elements.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Union

from .exact import format_rational, parse_rational


class LatticeError(ValueError):
    pass


class DimensionMismatchError(LatticeError):
    pass


class NotAnElementError(LatticeError):
    pass


@dataclass(frozen=True)
class BlockExponent:
    values: tuple[Fraction, ...]

    def __init__(self, values):
        object.__setattr__(self, "values", tuple(Fraction(v) for v in values))
        if not self.values:
            raise DimensionMismatchError("a block exponent needs at least one block")
        object.__setattr__(self, "_hash", hash(self.values))

    def __hash__(self):
        return self._hash

    @classmethod
    def parse(cls, items) -> "BlockExponent":
        return cls(parse_rational(x) for x in items)

    @property
    def blocks(self) -> int:
        return len(self.values)

    def __len__(self):
        return len(self.values)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.values)

    def __getitem__(self, j) -> Fraction:
        return self.values[j]

    def __neg__(self) -> "BlockExponent":
        return BlockExponent(-v for v in self.values)

    def __add__(self, other: "BlockExponent") -> "BlockExponent":
        _check_same_length(self, other)
        return BlockExponent(a + b for a, b in zip(self, other))

    def __sub__(self, other: "BlockExponent") -> "BlockExponent":
        _check_same_length(self, other)
        return BlockExponent(a - b for a, b in zip(self, other))

    def __str__(self):
        return "(" + ",".join(format_rational(v) for v in self.values) + ")"

    def __repr__(self):
        return f"BlockExponent{self}"

    @classmethod
    def zero(cls, blocks: int) -> "BlockExponent":
        return cls([0] * blocks)


class FormalObject:
    """One of the two extreme spaces ``V#`` (bottom) or ``V`` (top)."""

    __slots__ = ("name", "is_bottom")

    def __init__(self, name: str, is_bottom: bool):
        self.name = name
        self.is_bottom = is_bottom

    def __repr__(self):
        return self.name

    __str__ = __repr__

    def __reduce__(self):
        return ("FORMAL_BOTTOM" if self.is_bottom else "FORMAL_TOP")


FORMAL_BOTTOM = FormalObject("V#", True)
FORMAL_TOP = FormalObject("V", False)

Index = Union[BlockExponent, FormalObject]


def _check_same_length(p: BlockExponent, q: BlockExponent) -> None:
    if len(p) != len(q):
        raise DimensionMismatchError(f"exponents {p} and {q} have different block counts")


def exponent_meet(p: BlockExponent, q: BlockExponent) -> BlockExponent:
    _check_same_length(p, q)
    return BlockExponent(max(a, b) for a, b in zip(p, q))


def exponent_join(p: BlockExponent, q: BlockExponent) -> BlockExponent:
    _check_same_length(p, q)
    return BlockExponent(min(a, b) for a, b in zip(p, q))


def exponent_leq(p: Index, q: Index) -> bool:
    """Index order: ``V_p`` is contained in ``V_q``."""
    if isinstance(p, FormalObject) or isinstance(q, FormalObject):
        if p is FORMAL_BOTTOM or q is FORMAL_TOP:
            return True
        return p is q
    _check_same_length(p, q)
    return all(a >= b for a, b in zip(p, q))


def canonical_key(p: BlockExponent):
    """Sort key of the canonical total order.

    Decreasing lexicographic order on exponents; it is a linear extension of
    the index order, so smaller spaces always come first.
    """
    return tuple(-v for v in p.values)


def canonical_sorted(items: Iterable[BlockExponent]) -> list[BlockExponent]:
    return sorted(items, key=canonical_key)


class IndexLattice:
    """A finite involutive lattice of block exponents (immutable)."""

    def __init__(self, elements: Iterable[BlockExponent], *, check: bool = True):
        elements = list(elements)
        if not elements:
            raise LatticeError("a lattice needs at least one element")
        k = len(elements[0])
        for e in elements:
            if len(e) != k:
                raise DimensionMismatchError("mixed exponent lengths in lattice")
        self.blocks = k
        self.elements: tuple[BlockExponent, ...] = tuple(canonical_sorted(set(elements)))
        self._members = frozenset(self.elements)
        self._position = {e: i for i, e in enumerate(self.elements)}
        if check:
            self._check_closed()

    def _check_closed(self) -> None:
        for p in self.elements:
            if -p not in self._members:
                raise LatticeError(f"not closed under involution: {p}")
            for q in self.elements:
                if exponent_meet(p, q) not in self._members or exponent_join(p, q) not in self._members:
                    raise LatticeError(f"not closed under meet/join: {p}, {q}")

    def __contains__(self, item) -> bool:
        return item in self._members

    def __iter__(self) -> Iterator[BlockExponent]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __eq__(self, other):
        return isinstance(other, IndexLattice) and self._members == other._members

    def __hash__(self):
        return hash(self._members)

    def __repr__(self):
        return f"IndexLattice({', '.join(map(str, self.elements))})"

    def position(self, p: BlockExponent) -> int:
        self.require(p)
        return self._position[p]

    def require(self, *items: Index, allow_formal: bool = False) -> None:
        for p in items:
            if isinstance(p, FormalObject):
                if allow_formal:
                    continue
                raise NotAnElementError(f"{p} is a formal extreme, not a lattice element")
            if p not in self._members:
                raise NotAnElementError(f"{p} is not an element of the lattice")

    @property
    def max_exponent(self) -> BlockExponent:
        """Componentwise-maximal exponent M: the smallest space in the lattice."""
        return BlockExponent(max(e[j] for e in self.elements) for j in range(self.blocks))

    @property
    def min_exponent(self) -> BlockExponent:
        """Componentwise-minimal exponent m: the largest space in the lattice."""
        return BlockExponent(min(e[j] for e in self.elements) for j in range(self.blocks))

    def leq(self, p: Index, q: Index) -> bool:
        self.require(p, q, allow_formal=True)
        return exponent_leq(p, q)

    def meet(self, p: BlockExponent, q: BlockExponent) -> BlockExponent:
        self.require(p, q)
        return exponent_meet(p, q)

    def join(self, p: BlockExponent, q: BlockExponent) -> BlockExponent:
        self.require(p, q)
        return exponent_join(p, q)

    def involution(self, p: Index) -> Index:
        self.require(p, allow_formal=True)
        if p is FORMAL_BOTTOM:
            return FORMAL_TOP
        if p is FORMAL_TOP:
            return FORMAL_BOTTOM
        return -p

    def meet_all(self, items: Iterable[BlockExponent]) -> BlockExponent:
        items = list(items)
        out = items[0]
        for q in items[1:]:
            out = exponent_meet(out, q)
        return out

    def join_all(self, items: Iterable[BlockExponent]) -> BlockExponent:
        items = list(items)
        out = items[0]
        for q in items[1:]:
            out = exponent_join(out, q)
        return out

    def has_self_dual_center(self) -> bool:
        return BlockExponent.zero(self.blocks) in self._members

    def canonical_text(self) -> str:
        return "\n".join(str(e) for e in self.elements)


def close_lattice(generators: Iterable[BlockExponent], lhs_mode: bool = False) -> IndexLattice:
    """Smallest family containing the generators closed under negation, max and min.

    With ``lhs_mode`` the zero exponent (the self-dual central space) is added.
    The fixpoint lives inside the finite grid spanned by the coordinate values
    of the seeds, so the worklist terminates.
    """
    generators = list(generators)
    if not generators:
        raise LatticeError("close_lattice needs at least one generator")
    k = len(generators[0])
    for g in generators:
        if len(g) != k:
            raise DimensionMismatchError("mixed exponent lengths among generators")
    found: set[BlockExponent] = set()
    work = list(generators)
    if lhs_mode:
        work.append(BlockExponent.zero(k))
    while work:
        p = work.pop()
        if p in found:
            continue
        found.add(p)
        new = [-p]
        for q in list(found):
            new.append(exponent_meet(p, q))
            new.append(exponent_join(p, q))
        work.extend(x for x in new if x not in found)
    return IndexLattice(found, check=False)


def lattice_query(L: IndexLattice, op: str, p: Index, q: Index | None = None):
    """Dispatch one of ``leq``, ``meet``, ``join``, ``involution``."""
    if op == "involution":
        return L.involution(p)
    if q is None:
        raise LatticeError(f"{op} needs two arguments")
    if op == "leq":
        return L.leq(p, q)
    if op == "meet":
        return L.meet(p, q)
    if op == "join":
        return L.join(p, q)
    raise LatticeError(f"unknown lattice operation {op!r}")


def check_lattice_laws(L: IndexLattice, generators: Iterable[BlockExponent] = (), lhs_mode: bool = False):
    """Exhaustive involution, De Morgan, closure and bound checks."""
    from .reporting import Report

    rep = Report(f"lattice laws ({len(L)} elements)")
    els = list(L)
    closed = all(-p in L for p in els) and all(
        exponent_meet(p, q) in L and exponent_join(p, q) in L for p in els for q in els
    )
    rep.add("check_lattice_laws.closed", closed, "closed under negation, max and min")
    rev = all(L.leq(p, q) == L.leq(-q, -p) for p in els for q in els)
    rep.add("check_lattice_laws.order_reversing", rev, f"involution reverses order on {len(els) ** 2} pairs")
    dm = all(
        -L.meet(p, q) == L.join(-p, -q) and -L.join(p, q) == L.meet(-p, -q)
        for p in els for q in els
    )
    rep.add("check_lattice_laws.de_morgan", dm, f"De Morgan on {len(els) ** 2} pairs")
    gens = list(generators)
    if gens:
        again = close_lattice(L.elements, lhs_mode)
        rep.add("check_lattice_laws.idempotent", again == L, "closing the closure changes nothing")
        rep.add("check_lattice_laws.generators", all(g in L for g in gens), "generators are members")
    M, m = L.max_exponent, L.min_exponent
    bounds = M in L and m in L and all(exponent_leq(M, e) and exponent_leq(e, m) for e in els)
    rep.add("check_lattice_laws.bounds", bounds, f"m = {m} <= e <= M = {M} componentwise, both attained")
    return rep
