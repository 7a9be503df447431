"""Sequences with a finite exact head and power-law tails.

A :class:`PipVector` over ``k`` blocks stores

* ``finite``: exact complex-rational coordinates ``f_n`` for ``1 <= n <= N``;
* ``tails``: for each block ``j`` a list of power terms ``(sigma, c)`` so that
  ``f_n = sum c * n**sigma`` for ``n > N`` with ``n % k == j``.

Membership in ``V_alpha`` only depends on the leading tail exponents, which
makes inclusion, compatibility and the partial inner product decidable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from mpmath import iv

from .exact import ComplexRational, cq, format_complex, format_rational
from .lattice import (
    FORMAL_BOTTOM,
    FORMAL_TOP,
    BlockExponent,
    DimensionMismatchError,
    Index,
    IndexLattice,
)

iv.dps = 40

HALF = Fraction(1, 2)


class InexactError(ArithmeticError):
    """An exact result would need an irrational power ``n**sigma``."""


class UndefinedInnerProductError(ValueError):
    """The pair is not compatible, so the partial inner product does not exist."""


def _normalize_terms(terms: Iterable[tuple]) -> tuple[tuple[Fraction, ComplexRational], ...]:
    acc: dict[Fraction, ComplexRational] = {}
    for sigma, c in terms:
        sigma = Fraction(sigma)
        acc[sigma] = acc.get(sigma, ComplexRational()) + cq(c)
    return tuple(sorted(((s, c) for s, c in acc.items() if c), key=lambda t: -t[0]))


def _power(n: int, sigma: Fraction) -> Fraction:
    if sigma.denominator != 1:
        raise InexactError(f"{n}^{sigma} is not rational")
    return Fraction(n) ** int(sigma)


class PipVector:
    __slots__ = ("blocks", "tail_start", "finite", "tails")

    def __init__(self, blocks: int, finite: Mapping[int, object] | None = None,
                 tail_start: int = 0, tails: Mapping[int, Iterable[tuple]] | None = None):
        if blocks < 1:
            raise DimensionMismatchError("block count must be positive")
        self.blocks = blocks
        self.tail_start = int(tail_start)
        if self.tail_start < 0:
            raise ValueError("tail_start must be a natural number")
        head = {}
        for n, v in (finite or {}).items():
            if not 1 <= n <= self.tail_start:
                raise ValueError(f"finite coordinate {n} outside 1..{self.tail_start}")
            v = cq(v)
            if v:
                head[int(n)] = v
        self.finite = head
        per_block = [() for _ in range(blocks)]
        for j, terms in (tails or {}).items():
            if not 0 <= j < blocks:
                raise DimensionMismatchError(f"tail block {j} outside 0..{blocks - 1}")
            per_block[j] = _normalize_terms((s, c) for c, s in terms)
        self.tails = tuple(per_block)

    # constructors -------------------------------------------------------

    @classmethod
    def basis(cls, blocks: int, n: int, value=1) -> "PipVector":
        """The coordinate vector ``value * e_n``."""
        return cls(blocks, {n: value}, tail_start=n)

    @classmethod
    def power(cls, blocks: int, tails: Mapping[int, tuple], tail_start: int = 0) -> "PipVector":
        """Single power law per block, ``{block: (c, sigma)}``."""
        return cls(blocks, tail_start=tail_start, tails={j: [t] for j, t in tails.items()})

    def _replace(self, finite=None, tail_start=None, tails=None) -> "PipVector":
        out = PipVector.__new__(PipVector)
        out.blocks = self.blocks
        out.tail_start = self.tail_start if tail_start is None else tail_start
        out.finite = dict(self.finite) if finite is None else {n: v for n, v in finite.items() if v}
        out.tails = self.tails if tails is None else tuple(_normalize_terms(t) for t in tails)
        return out

    # structure ----------------------------------------------------------

    def block_of(self, n: int) -> int:
        return n % self.blocks

    def leading_exponent(self, j: int) -> Fraction | None:
        terms = self.tails[j]
        return terms[0][0] if terms else None

    def is_finite(self) -> bool:
        return not any(self.tails)

    def value_at(self, n: int) -> ComplexRational:
        """Exact coordinate ``f_n``; raises :class:`InexactError` for irrational powers."""
        if n < 1:
            raise ValueError("coordinates start at 1")
        if n <= self.tail_start:
            return self.finite.get(n, ComplexRational())
        total = ComplexRational()
        for sigma, c in self.tails[self.block_of(n)]:
            total = total + c * _power(n, sigma)
        return total

    def interval_at(self, n: int):
        """Coordinate ``f_n`` as a pair of mpmath intervals (re, im)."""
        if n <= self.tail_start:
            v = self.finite.get(n, ComplexRational())
            return _iv_const(v)
        re = iv.mpf(0)
        im = iv.mpf(0)
        for sigma, c in self.tails[self.block_of(n)]:
            p = iv.mpf(n) ** _iv_rational(sigma)
            re += _iv_rational(c.re) * p
            im += _iv_rational(c.im) * p
        return re, im

    def extended_to(self, N: int) -> "PipVector":
        """Same sequence with the exact head stretched to ``N``."""
        if N <= self.tail_start:
            return self
        head = dict(self.finite)
        for n in range(self.tail_start + 1, N + 1):
            head[n] = self.value_at(n)
        return self._replace(finite=head, tail_start=N)

    # arithmetic ---------------------------------------------------------

    def _aligned(self, other: "PipVector"):
        if self.blocks != other.blocks:
            raise DimensionMismatchError("vectors over different block counts")
        N = max(self.tail_start, other.tail_start)
        return self.extended_to(N), other.extended_to(N), N

    def __add__(self, other: "PipVector") -> "PipVector":
        a, b, N = self._aligned(other)
        head = dict(a.finite)
        for n, v in b.finite.items():
            head[n] = head.get(n, ComplexRational()) + v
        tails = [a.tails[j] + b.tails[j] for j in range(self.blocks)]
        return a._replace(finite=head, tail_start=N, tails=tails)

    def scale(self, c) -> "PipVector":
        c = cq(c)
        return self._replace(
            finite={n: c * v for n, v in self.finite.items()},
            tails=[[(s, c * x) for s, x in t] for t in self.tails],
        )

    def __neg__(self) -> "PipVector":
        return self.scale(-1)

    def __sub__(self, other: "PipVector") -> "PipVector":
        return self + (-other)

    def equals(self, other: "PipVector") -> bool:
        a, b, _ = self._aligned(other)
        return a.finite == b.finite and a.tails == b.tails

    def __eq__(self, other):
        if not isinstance(other, PipVector):
            return NotImplemented
        return self.equals(other)

    __hash__ = None

    def __repr__(self):
        head = ", ".join(f"{n}:{format_complex(v)}" for n, v in sorted(self.finite.items()))
        tails = "; ".join(
            f"b{j}:" + "+".join(f"({format_complex(c)})n^{format_rational(s)}" for s, c in t)
            for j, t in enumerate(self.tails) if t
        )
        return f"PipVector(N={self.tail_start}, head={{{head}}}, tails={{{tails}}})"


def _iv_rational(q: Fraction):
    q = Fraction(q)
    return iv.mpf(q.numerator) / q.denominator


def _iv_const(z: ComplexRational):
    return _iv_rational(z.re), _iv_rational(z.im)


def _raw_to_fraction(raw) -> Fraction:
    sign, man, exp, _ = raw
    value = Fraction(man) * Fraction(2) ** exp
    return -value if sign else value


def _endpoints(x) -> tuple[Fraction, Fraction]:
    """Exact rational endpoints of an mpmath interval."""
    lo, hi = x._mpi_
    return _raw_to_fraction(lo), _raw_to_fraction(hi)


# membership and compatibility ---------------------------------------------


def membership(f: PipVector, r: Index) -> bool:
    """Whether ``f`` lies in the assaying space ``V_r``.

    Block ``j`` converges iff its leading exponent satisfies
    ``sigma + alpha_j < -1/2``; the boundary case diverges.
    """
    if r is FORMAL_TOP:
        return True
    if r is FORMAL_BOTTOM:
        return f.is_finite()
    if len(r) != f.blocks:
        raise DimensionMismatchError("vector and exponent have different block counts")
    for j in range(f.blocks):
        lead = f.leading_exponent(j)
        if lead is not None and not lead + r[j] < -HALF:
            return False
    return True


@dataclass(frozen=True)
class CompatibilityWitness:
    """Outcome of a compatibility test.

    ``status`` is ``"absolute"`` or ``"incompatible"``; ``witness`` is the
    first lattice index ``r`` (canonical order) with ``f`` in ``V_r`` and
    ``g`` in the dual space, or ``None`` when only the absolute criterion holds.
    """

    status: str
    witness: BlockExponent | None = None

    @property
    def is_compatible(self) -> bool:
        return self.status == "absolute"

    @property
    def lattice_certified(self) -> bool:
        return self.witness is not None

    def __str__(self):
        if not self.is_compatible:
            return "incompatible"
        if self.witness is None:
            return "absolute (no lattice witness)"
        return f"absolute, witness r = {self.witness}"


def absolutely_compatible(f: PipVector, g: PipVector) -> bool:
    """``sum |f_n g_n| < inf``, decided on the leading exponents."""
    if f.blocks != g.blocks:
        raise DimensionMismatchError("vectors over different block counts")
    for j in range(f.blocks):
        a, b = f.leading_exponent(j), g.leading_exponent(j)
        if a is not None and b is not None and not a + b < -1:
            return False
    return True


def compatible(f: PipVector, g: PipVector, L: IndexLattice) -> CompatibilityWitness:
    if f.blocks != g.blocks or f.blocks != L.blocks:
        raise DimensionMismatchError("vectors and lattice must share the block count")
    for r in L:
        if membership(f, r) and membership(g, -r):
            return CompatibilityWitness("absolute", r)
    if absolutely_compatible(f, g):
        return CompatibilityWitness("absolute", None)
    return CompatibilityWitness("incompatible", None)


# partial inner product -----------------------------------------------------


@dataclass(frozen=True)
class InnerProduct:
    """Certified value of a partial inner product.

    ``real`` and ``imag`` are rigorous enclosures ``(lo, hi)``; ``value`` is
    their midpoint and ``error`` bounds ``|value - true value|`` in each part.
    """

    real: tuple
    imag: tuple
    exact_part: ComplexRational

    @property
    def value(self) -> complex:
        re = (self.real[0] + self.real[1]) / 2
        im = (self.imag[0] + self.imag[1]) / 2
        return complex(float(re), float(im))

    @property
    def error(self) -> float:
        return float(max(self.real[1] - self.real[0], self.imag[1] - self.imag[0]) / 2)

    def contains(self, z) -> bool:
        z = complex(z)
        re, im = Fraction(z.real), Fraction(z.imag)
        return self.real[0] <= re <= self.real[1] and self.imag[0] <= im <= self.imag[1]


def _block_power_sum(s: Fraction, j: int, k: int, start: int, budget: Fraction):
    """Enclose ``sum n**s`` over ``n > start`` with ``n % k == j``, for ``s < -1``.

    Partial sums are taken explicitly up to a cut ``n*``; the remainder of a
    convex decreasing sequence sampled with step ``k`` from ``n1`` lies in
    ``[I(n1) + n1**s / 2, I(n1 - k/2)]`` with ``I(x) = x**(s+1) / (k(-s-1))``.
    The cut is doubled until the enclosure is narrower than ``budget``.
    """
    assert s < -1
    s_iv = _iv_rational(s)
    first = start + 1 + ((j - (start + 1)) % k)
    cut = max(first + 8 * k, 16)
    partial = iv.mpf(0)
    n = first
    while True:
        while n <= cut:
            partial += iv.mpf(n) ** s_iv
            n += k
        n1 = n
        e = s_iv + 1
        denom = k * (-s_iv - 1)
        lower = iv.mpf(n1) ** e / denom + iv.mpf(n1) ** s_iv / 2
        upper = (iv.mpf(n1) - iv.mpf(k) / 2) ** e / denom
        lo, _ = _endpoints(partial + lower)
        _, hi = _endpoints(partial + upper)
        if hi - lo <= budget or cut > 10 ** 7:
            return iv.mpf([(partial + lower).a, (partial + upper).b])
        cut *= 2


def partial_inner_product(f: PipVector, g: PipVector, L: IndexLattice, tol=Fraction(1, 10 ** 6)) -> InnerProduct:
    """``<f, g> = sum conj(f_n) g_n``, antilinear in ``f`` and linear in ``g``.

    Raises :class:`UndefinedInnerProductError` for incompatible pairs.
    """
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    if not compatible(f, g, L).is_compatible:
        raise UndefinedInnerProductError("f and g are not compatible; <f, g> is undefined")
    N = max(f.tail_start, g.tail_start)
    exact = ComplexRational()
    re = iv.mpf(0)
    im = iv.mpf(0)
    for n in range(1, N + 1):
        try:
            exact = exact + f.value_at(n).conjugate() * g.value_at(n)
        except InexactError:
            (ar, ai), (br, bi) = f.interval_at(n), g.interval_at(n)
            re += ar * br + ai * bi
            im += ar * bi - ai * br
    k = f.blocks
    pairs = []
    for j in range(k):
        for sigma, c in f.tails[j]:
            for tau, d in g.tails[j]:
                pairs.append((j, sigma + tau, c.conjugate() * d))
    if pairs:
        budget = 2 * tol / len(pairs)
    for j, s, w in pairs:
        scale = max(abs(w.re), abs(w.im))
        S = _block_power_sum(s, j, k, N, budget / scale)
        re += _iv_rational(w.re) * S
        im += _iv_rational(w.im) * S
    re += _iv_rational(exact.re)
    im += _iv_rational(exact.im)
    return InnerProduct(_endpoints(re), _endpoints(im), exact)
