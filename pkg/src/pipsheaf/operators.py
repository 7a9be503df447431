"""Operators on indexed PIP-spaces realized as diagonal power symbols.

An :class:`OperatorSymbol` is ``A = sum_gamma c_gamma D_gamma + M`` where
``D_gamma`` multiplies coordinate ``n`` (block ``j = n mod k``) by
``n**gamma_j`` and ``M`` is a finite matrix on coordinates ``1..M0``.  A
component ``gamma_j = None`` means the term vanishes on block ``j``, which is
how block indicators are written.

Boundedness is decided from the support of the symbol: with the effective
exponent ``e_j = max gamma_j`` the representative ``A_ur : V_r -> V_u``
exists iff ``u_j <= r_j - e_j`` on every block where ``e_j`` is finite.
Cancellation between terms is ignored, so this is a certificate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .exact import ComplexRational, cq, format_complex, format_rational, parse_rational
from .lattice import BlockExponent, DimensionMismatchError, IndexLattice
from .linalg import field_rank, inverse
from .vectors import InexactError, PipVector, membership


class OperatorError(ValueError):
    pass


class UndefinedProductError(OperatorError):
    """No factorization space exists: ``i(A)`` and ``d(B)`` are disjoint."""


class LatticeMismatchError(OperatorError):
    pass


class OutsideDomainError(OperatorError):
    pass


class NotInSourceError(OperatorError):
    pass


@dataclass(frozen=True)
class SymbolExponent:
    """Exponent vector of a diagonal term; ``None`` marks a vanishing block."""

    values: tuple[Optional[Fraction], ...]

    def __init__(self, values):
        object.__setattr__(
            self, "values", tuple(None if v is None else Fraction(v) for v in values)
        )
        if all(v is None for v in self.values):
            raise ValueError("a diagonal term must act on at least one block")

    @classmethod
    def parse(cls, items) -> "SymbolExponent":
        out = []
        for x in items:
            if isinstance(x, str) and x.strip().lower() in ("-inf", "none"):
                out.append(None)
            else:
                out.append(parse_rational(x))
        return cls(out)

    @classmethod
    def of(cls, exponent) -> "SymbolExponent":
        if isinstance(exponent, SymbolExponent):
            return exponent
        if isinstance(exponent, BlockExponent):
            return cls(exponent.values)
        return cls(exponent)

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, j):
        return self.values[j]

    @property
    def full_support(self) -> bool:
        return all(v is not None for v in self.values)

    def __add__(self, other: "SymbolExponent") -> Optional["SymbolExponent"]:
        vals = [None if a is None or b is None else a + b for a, b in zip(self, other)]
        if all(v is None for v in vals):
            return None
        return SymbolExponent(vals)

    def __neg__(self) -> "SymbolExponent":
        return SymbolExponent(None if v is None else -v for v in self.values)

    def sort_key(self):
        return tuple((0, 0) if v is None else (1, -v) for v in self.values)

    def __str__(self):
        return "(" + ",".join("-inf" if v is None else format_rational(v) for v in self.values) + ")"

    __repr__ = __str__


Matrix = tuple[tuple[ComplexRational, ...], ...]


def _trim(matrix: Sequence[Sequence]) -> Matrix:
    rows = [[cq(x) for x in row] for row in matrix]
    size = len(rows)
    for row in rows:
        if len(row) != size:
            raise OperatorError("matrix block must be square")
    while size and not any(rows[size - 1][:size]) and not any(r[size - 1] for r in rows[:size]):
        size -= 1
    return tuple(tuple(rows[i][:size]) for i in range(size))


def _pad(matrix: Matrix, size: int) -> list[list[ComplexRational]]:
    zero = ComplexRational()
    out = [[zero] * size for _ in range(size)]
    for i, row in enumerate(matrix):
        for j, x in enumerate(row):
            out[i][j] = x
    return out


class OperatorSymbol:
    """A coherent family of representatives, stored as its symbol (immutable)."""

    __slots__ = ("diag", "matrix", "source", "target")

    def __init__(self, source: IndexLattice, diag: Mapping | Iterable = (), matrix: Sequence[Sequence] = (),
                 target: IndexLattice | None = None):
        target = source if target is None else target
        if source.blocks != target.blocks:
            raise DimensionMismatchError("source and target lattices must share the block count")
        items = diag.items() if isinstance(diag, Mapping) else diag
        acc: dict[SymbolExponent, ComplexRational] = {}
        for gamma, c in items:
            gamma = SymbolExponent.of(gamma)
            if len(gamma) != source.blocks:
                raise DimensionMismatchError(f"diagonal exponent {gamma} has wrong length")
            acc[gamma] = acc.get(gamma, ComplexRational()) + cq(c)
        self.diag = {g: c for g, c in sorted(acc.items(), key=lambda t: t[0].sort_key()) if c}
        self.matrix = _trim(matrix)
        self.source = source
        self.target = target

    # construction helpers -------------------------------------------------

    @classmethod
    def identity(cls, L: IndexLattice, scale=1) -> "OperatorSymbol":
        return cls(L, {BlockExponent.zero(L.blocks): scale})

    @classmethod
    def zero(cls, source: IndexLattice, target: IndexLattice | None = None) -> "OperatorSymbol":
        return cls(source, {}, (), target)

    @classmethod
    def power(cls, L: IndexLattice, gamma, c=1) -> "OperatorSymbol":
        return cls(L, {SymbolExponent.of(gamma): c})

    @property
    def blocks(self) -> int:
        return self.source.blocks

    @property
    def matrix_size(self) -> int:
        return len(self.matrix)

    def is_zero(self) -> bool:
        return not self.diag and not self.matrix

    def effective_exponent(self) -> tuple[Optional[Fraction], ...]:
        """Per block the largest supported exponent, ``None`` for minus infinity."""
        out = []
        for j in range(self.blocks):
            vals = [g[j] for g in self.diag if g[j] is not None]
            out.append(max(vals) if vals else None)
        return tuple(out)

    def diagonal_value(self, n: int) -> ComplexRational:
        j = n % self.blocks
        total = ComplexRational()
        for g, c in self.diag.items():
            if g[j] is None:
                continue
            if g[j].denominator != 1:
                raise InexactError(f"{n}^{g[j]} is not rational")
            total = total + c * Fraction(n) ** int(g[j])
        return total

    def finite_block(self, size: int | None = None) -> list[list[ComplexRational]]:
        """Exact action on coordinates ``1..size`` (diagonal plus matrix)."""
        size = self.matrix_size if size is None else size
        out = _pad(self.matrix, size)
        for i in range(size):
            out[i][i] = out[i][i] + self.diagonal_value(i + 1)
        return out

    def __eq__(self, other):
        if not isinstance(other, OperatorSymbol):
            return NotImplemented
        return (self.diag == other.diag and self.matrix == other.matrix
                and self.source == other.source and self.target == other.target)

    def __hash__(self):
        return hash((tuple(self.diag.items()), self.matrix))

    def __str__(self):
        parts = [f"({format_complex(c)})·n^{g}" for g, c in self.diag.items()]
        if self.matrix:
            rows = "; ".join(" ".join(format_complex(x) for x in row) for row in self.matrix)
            parts.append(f"M[{rows}]")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"OperatorSymbol({self})"


# representatives -----------------------------------------------------------


def _exists(e: tuple, u: BlockExponent, r: BlockExponent) -> bool:
    return all(ej is None or u[j] <= r[j] - ej for j, ej in enumerate(e))


def representative_exists(A: OperatorSymbol, u: BlockExponent, r: BlockExponent) -> bool:
    """Whether ``A_ur : V_r -> Y_u`` is bounded."""
    A.target.require(u)
    A.source.require(r)
    return _exists(A.effective_exponent(), u, r)


def domain_set(A: OperatorSymbol) -> list[BlockExponent]:
    """``d(A)`` in canonical order (empty means not an operator on these lattices)."""
    e = A.effective_exponent()
    return [r for r in A.source if any(_exists(e, u, r) for u in A.target)]


def image_set(A: OperatorSymbol) -> list[BlockExponent]:
    e = A.effective_exponent()
    return [u for u in A.target if any(_exists(e, u, r) for r in A.source)]


def is_operator(A: OperatorSymbol) -> bool:
    return bool(domain_set(A))


# algebra -------------------------------------------------------------------


def adjoint(A: OperatorSymbol) -> OperatorSymbol:
    diag = {g: c.conjugate() for g, c in A.diag.items()}
    n = A.matrix_size
    matrix = [[A.matrix[j][i].conjugate() for j in range(n)] for i in range(n)]
    return OperatorSymbol(A.target, diag, matrix, A.source)


def factorization_witness(B: OperatorSymbol, A: OperatorSymbol) -> BlockExponent | None:
    """First ``t`` (canonical order) in ``i(A) ∩ d(B)``."""
    if A.target != B.source:
        raise LatticeMismatchError("target of A must be the source of B")
    dB = set(domain_set(B))
    for t in image_set(A):
        if t in dB:
            return t
    return None


def compose(B: OperatorSymbol, A: OperatorSymbol, *, return_witness: bool = False):
    """Partial product ``BA``; raises :class:`UndefinedProductError` if undefined."""
    t = factorization_witness(B, A)
    if t is None:
        raise UndefinedProductError("i(A) and d(B) do not intersect; BA is undefined")
    diag: dict[SymbolExponent, ComplexRational] = {}
    for gb, cb in B.diag.items():
        for ga, ca in A.diag.items():
            g = gb + ga
            if g is not None:
                diag[g] = diag.get(g, ComplexRational()) + cb * ca
    size = max(A.matrix_size, B.matrix_size)
    zero = ComplexRational()
    AM = _pad(A.matrix, size)
    BM = _pad(B.matrix, size)
    out = [[zero] * size for _ in range(size)]
    for i in range(size):
        for j in range(size):
            acc = zero
            if AM[i][j]:
                acc = acc + B.diagonal_value(i + 1) * AM[i][j]
            if BM[i][j]:
                acc = acc + BM[i][j] * A.diagonal_value(j + 1)
            for m in range(size):
                if BM[i][m] and AM[m][j]:
                    acc = acc + BM[i][m] * AM[m][j]
            out[i][j] = acc
    product = OperatorSymbol(A.source, diag, out, B.target)
    return (product, t) if return_witness else product


def power(A: OperatorSymbol, n: int) -> OperatorSymbol:
    if n < 0:
        raise ValueError("negative powers are not symbols")
    out = OperatorSymbol.identity(A.source)
    for _ in range(n):
        out = compose(A, out)
    return out


# classification ------------------------------------------------------------


@dataclass
class Classification:
    is_homomorphism: bool
    homomorphism_failure: tuple[str, BlockExponent] | None
    is_totally_regular: bool
    is_isomorphism_certified: bool
    inverse: OperatorSymbol | None
    is_projection: bool
    mono_certificate: bool
    epi_certificate: bool
    is_zero: bool
    domain: list[BlockExponent] = field(default_factory=list)
    image: list[BlockExponent] = field(default_factory=list)

    def summary(self) -> str:
        if self.is_homomorphism:
            head = "homomorphism"
        else:
            cond, w = self.homomorphism_failure
            var = "r" if cond == "i" else "u"
            head = f"not a homomorphism; witness {var} = {w}"
        flags = [
            ("totally regular", self.is_totally_regular),
            ("isomorphism (certified)", self.is_isomorphism_certified),
            ("projection", self.is_projection),
            ("mono certificate", self.mono_certificate),
            ("epi certificate", self.epi_certificate),
            ("zero operator", self.is_zero),
        ]
        return head + "; " + ", ".join(f"{name}={'yes' if v else 'no'}" for name, v in flags)


def homomorphism_failure(A: OperatorSymbol) -> tuple[str, BlockExponent] | None:
    """First failing condition of the homomorphism definition, or ``None``.

    (i) every ``r`` admits ``u`` with both ``A_ur`` and ``A_{-u,-r}``;
    (ii) every ``u`` admits such an ``r``.
    """
    e = A.effective_exponent()

    def paired(u, r):
        return _exists(e, u, r) and _exists(e, -u, -r)

    for r in A.source:
        if not any(paired(u, r) for u in A.target):
            return ("i", r)
    for u in A.target:
        if not any(paired(u, r) for r in A.source):
            return ("ii", u)
    return None


def is_homomorphism(A: OperatorSymbol) -> bool:
    return homomorphism_failure(A) is None


def is_totally_regular(A: OperatorSymbol) -> bool:
    if A.source != A.target:
        return False
    e = A.effective_exponent()
    return all(_exists(e, r, r) for r in A.source)


def _single_full_term(A: OperatorSymbol):
    if len(A.diag) != 1:
        return None
    (g, c), = A.diag.items()
    return (g, c) if g.full_support else None


def certified_inverse(A: OperatorSymbol) -> OperatorSymbol | None:
    """Two-sided inverse within the symbol family, verified exactly, or ``None``."""
    term = _single_full_term(A)
    if term is None or not is_homomorphism(A):
        return None
    g, c = term
    inv_c = 1 / c
    size = A.matrix_size
    matrix: list = []
    try:
        if size:
            F = A.finite_block()
            Finv = inverse(F, ComplexRational(1), ComplexRational())
            if Finv is None:
                return None
            probe = OperatorSymbol(A.target, {-g: inv_c}, (), A.source)
            for i in range(size):
                Finv[i][i] = Finv[i][i] - probe.diagonal_value(i + 1)
            matrix = Finv
        B = OperatorSymbol(A.target, {-g: inv_c}, matrix, A.source)
        if not is_homomorphism(B):
            return None
        if compose(B, A) != OperatorSymbol.identity(A.source):
            return None
        if compose(A, B) != OperatorSymbol.identity(A.target):
            return None
    except (InexactError, UndefinedProductError):
        return None
    return B


def _finite_block_rank(A: OperatorSymbol) -> int | None:
    try:
        return field_rank(A.finite_block())
    except InexactError:
        return None


def is_projection(A: OperatorSymbol) -> bool:
    if A.source != A.target or not is_homomorphism(A):
        return False
    try:
        square = compose(A, A)
    except (UndefinedProductError, InexactError):
        return False
    return square == A and adjoint(A) == A


def classify(A: OperatorSymbol) -> Classification:
    failure = homomorphism_failure(A)
    hom = failure is None
    inv = certified_inverse(A) if hom else None
    mono = epi = False
    if hom and _single_full_term(A) is not None:
        rk = _finite_block_rank(A)
        if rk is not None and rk == A.matrix_size:
            # square finite block: injective iff surjective
            mono = epi = True
    return Classification(
        is_homomorphism=hom,
        homomorphism_failure=failure,
        is_totally_regular=is_totally_regular(A),
        is_isomorphism_certified=inv is not None,
        inverse=inv,
        is_projection=is_projection(A),
        mono_certificate=mono,
        epi_certificate=epi,
        is_zero=A.is_zero(),
        domain=domain_set(A),
        image=image_set(A),
    )


# evaluation ----------------------------------------------------------------


def apply(A: OperatorSymbol, f: PipVector, r: BlockExponent) -> PipVector:
    """Evaluate the representative of ``A`` on ``V_r`` at ``f``."""
    if f.blocks != A.blocks:
        raise DimensionMismatchError("vector and operator have different block counts")
    if r not in domain_set(A):
        raise OutsideDomainError(f"{r} is not in d(A)")
    if not membership(f, r):
        raise NotInSourceError(f"vector is not in V_{r}")
    size = A.matrix_size
    N = max(f.tail_start, size)
    f = f.extended_to(N)
    head = {}
    for n in range(1, N + 1):
        fn = f.finite.get(n)
        value = A.diagonal_value(n) * fn if fn else ComplexRational()
        if n <= size:
            for m in range(1, size + 1):
                a = A.matrix[n - 1][m - 1]
                fm = f.finite.get(m)
                if a and fm:
                    value = value + a * fm
        head[n] = value
    tails = {}
    for j in range(f.blocks):
        terms = []
        for sigma, c in f.tails[j]:
            for g, cg in A.diag.items():
                if g[j] is not None:
                    terms.append((cg * c, sigma + g[j]))
        tails[j] = terms
    return PipVector(f.blocks, head, N, tails)


def check_operator_laws(A: OperatorSymbol):
    """Domain initial, image final, adjoint involutive and dual to ``A`` on representatives."""
    from .reporting import Report

    rep = Report(f"operator laws for {A}")
    d, i = domain_set(A), image_set(A)
    S, T = A.source, A.target
    initial = all(q in d for r in d for q in S if S.leq(q, r))
    final = all(v in i for u in i for v in T if T.leq(u, v))
    rep.add("check_operator_laws.domain_initial", initial, f"d(A) = {{{', '.join(map(str, d))}}} is downward closed")
    rep.add("check_operator_laws.image_final", final, f"i(A) = {{{', '.join(map(str, i))}}} is upward closed")
    Ax = adjoint(A)
    rep.add("check_operator_laws.adjoint_involution", adjoint(Ax) == A, "adjoint of the adjoint is A")
    dual = all(
        representative_exists(Ax, -r, -u) == representative_exists(A, u, r) for u in T for r in S
    )
    rep.add("check_operator_laws.adjoint_representatives", dual, "A^x exists on (-r, -u) iff A exists on (u, r)")
    return rep
