"""Čech complexes of the operator sheaf and cosheaves over a finite covering.

A p-cochain assigns to every strictly increasing ``(p+1)``-tuple of covering
members (canonical order) a coordinate vector in the (co)section space at the
tuple's meet (sheaf) or join (cosheaf).  All structure maps are coordinate
inclusions, so the coboundary is a signed 0/±1 matrix and the complex splits
into one small subcomplex per symbol coordinate.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping, Sequence

import numpy as np

from .cosheaf import CosheafModel
from .lattice import BlockExponent, IndexLattice, LatticeError, canonical_key
from .linalg import column_space_dim, hstack, matmul, nullspace, rank, rank_fraction_free
from .sheaf import SheafModel


class CohomologyError(ValueError):
    pass


class CohomologyBuildError(CohomologyError):
    def __init__(self, message, tuple_):
        super().__init__(message)
        self.tuple = tuple_


class HomotopyUnavailableError(CohomologyError):
    pass


class RefinementError(CohomologyError):
    pass


class Covering:
    """Distinct lattice members in canonical order, combined by meets or joins."""

    def __init__(self, lattice: IndexLattice, members: Sequence[BlockExponent], mode: str = "sheaf"):
        if mode not in ("sheaf", "cosheaf"):
            raise CohomologyError(f"unknown covering mode {mode!r}")
        members = list(members)
        if not members:
            raise CohomologyError("a covering needs at least one member")
        lattice.require(*members)
        if len(set(members)) != len(members):
            raise CohomologyError("covering members must be distinct")
        self.lattice = lattice
        self.mode = mode
        self.members: tuple[BlockExponent, ...] = tuple(sorted(members, key=canonical_key))

    def __len__(self):
        return len(self.members)

    def combine(self, positions: Sequence[int]) -> BlockExponent:
        items = [self.members[i] for i in positions]
        if self.mode == "sheaf":
            return self.lattice.meet_all(items)
        return self.lattice.join_all(items)

    def cone_point(self) -> BlockExponent | None:
        """A member absorbed by every combination: the maximum (sheaf) or minimum (cosheaf)."""
        L = self.lattice
        for t in self.members:
            if self.mode == "sheaf" and all(L.leq(j, t) for j in self.members):
                return t
            if self.mode == "cosheaf" and all(L.leq(t, j) for j in self.members):
                return t
        return None

    def covers_top(self) -> bool:
        return self.lattice.join_all(self.members) == self.lattice.join_all(self.lattice)

    def __repr__(self):
        return f"Covering({self.mode}: {', '.join(map(str, self.members))})"


def default_pmax(covering: Covering) -> int:
    return max(1, min(4, len(covering) - 1))


class CochainComplex:
    def __init__(self, model, covering: Covering, pmax: int | None = None):
        if isinstance(model, SheafModel):
            if covering.mode != "sheaf":
                raise CohomologyError("a sheaf needs a covering in sheaf mode")
            self._space = model.sections_at
        elif isinstance(model, CosheafModel):
            if covering.mode != "cosheaf":
                raise CohomologyError("a cosheaf needs a covering in cosheaf mode")
            self._space = model.cosections_at
        else:
            raise TypeError("model must be a SheafModel or CosheafModel")
        if covering.lattice != model.lattice:
            raise LatticeError("covering and model use different lattices")
        self.model = model
        self.covering = covering
        self.pmax = default_pmax(covering) if pmax is None else pmax
        if self.pmax < 1:
            raise CohomologyError("pmax must be at least 1")
        n = len(covering)
        self.tuples: list[list[tuple[int, ...]]] = []
        self.basis: list[list[tuple[tuple[int, ...], int]]] = []
        self.index: list[dict] = []
        for p in range(self.pmax + 2):
            tups = list(combinations(range(n), p + 1))
            basis = [(tau, c) for tau in tups for c in sorted(self.space(tau))]
            self.tuples.append(tups)
            self.basis.append(basis)
            self.index.append({b: i for i, b in enumerate(basis)})
        self.D = [self._coboundary(p) for p in range(self.pmax + 1)]

    def space(self, tau: Sequence[int]) -> frozenset[int]:
        return self._space(self.covering.combine(tau))

    def dim(self, p: int) -> int:
        return len(self.basis[p]) if p < len(self.basis) else 0

    def _coboundary(self, p: int) -> np.ndarray:
        """Matrix of ``(DA)_{j0..j(p+1)} = sum_i (-1)^i A_{j0..^ji..j(p+1)}``."""
        out = np.zeros((self.dim(p + 1), self.dim(p)), dtype=np.int64)
        partial = isinstance(self.model, CosheafModel)
        for tau in self.tuples[p + 1]:
            target = self.space(tau)
            for i in range(len(tau)):
                face = tau[:i] + tau[i + 1:]
                source = self.space(face)
                if partial and not self.model.extension_total(self.covering.combine(face), self.covering.combine(tau)):
                    names = tuple(str(self.covering.members[k]) for k in tau)
                    raise CohomologyBuildError(
                        f"extension undefined from face {face} into tuple {names}", names)
                if not source <= target:
                    raise CohomologyBuildError("structure map is not an inclusion", tau)
                sign = -1 if i % 2 else 1
                for c in source:
                    out[self.index[p + 1][(tau, c)], self.index[p][(face, c)]] += sign
        return out

    def coordinates(self) -> list[int]:
        coords = set()
        for b in self.basis:
            coords.update(c for _, c in b)
        return sorted(coords)

    def coordinate_block(self, p: int, c: int) -> np.ndarray:
        rows = [i for i, (_, d) in enumerate(self.basis[p + 1]) if d == c]
        cols = [i for i, (_, d) in enumerate(self.basis[p]) if d == c]
        return self.D[p][np.ix_(rows, cols)]

    def check_dd_zero(self) -> bool:
        return all(not np.any(self.D[p + 1] @ self.D[p]) for p in range(self.pmax))

    def check_dd_random(self, rng: random.Random, samples: int = 100) -> bool:
        ok = True
        for p in range(self.pmax):
            if not self.dim(p):
                continue
            for _ in range(samples):
                x = np.array([rng.randint(-9, 9) for _ in range(self.dim(p))], dtype=np.int64)
                ok &= not np.any(self.D[p + 1] @ (self.D[p] @ x))
        return ok


def build_complex(model, covering: Covering, pmax: int | None = None) -> CochainComplex:
    """Assemble the complex and assert ``DD = 0`` exactly."""
    cx = CochainComplex(model, covering, pmax)
    if not cx.check_dd_zero():
        raise CohomologyError("coboundary does not square to zero")
    return cx


@dataclass
class DegreeRow:
    p: int
    dim_c: int
    dim_z: int
    dim_b: int
    dim_h: int
    rank_elimination: int
    rank_columns: int


@dataclass
class CohomologyReport:
    covering: Covering
    rows: list[DegreeRow]
    oracle_agrees: bool
    covers_top: bool
    homotopy_verified: bool | None = None
    homotopy_point: BlockExponent | None = None
    notes: list[str] = field(default_factory=list)

    def h(self, p: int) -> int:
        return self.rows[p].dim_h

    @property
    def acyclic(self) -> bool:
        return all(r.dim_h == 0 for r in self.rows[1:])

    def table(self) -> str:
        head = f"{'p':>2} {'dim C':>6} {'dim Z':>6} {'dim B':>6} {'dim H':>6}"
        lines = [head]
        for r in self.rows:
            lines.append(f"{r.p:>2} {r.dim_c:>6} {r.dim_z:>6} {r.dim_b:>6} {r.dim_h:>6}")
        lines.append(f"acyclic (H^p = 0 for 1 <= p <= {self.rows[-1].p}): {'yes' if self.acyclic else 'no'}")
        lines.append(f"join of the covering is the lattice top: {'yes' if self.covers_top else 'no'}")
        return "\n".join(lines)

    def as_dict(self) -> dict:
        return {
            "covering": [str(m) for m in self.covering.members],
            "mode": self.covering.mode,
            "degrees": [
                {"p": r.p, "dim_C": r.dim_c, "dim_Z": r.dim_z, "dim_B": r.dim_b, "dim_H": r.dim_h}
                for r in self.rows
            ],
            "acyclic": self.acyclic,
            "covers_top": self.covers_top,
            "rank_oracle_agrees": self.oracle_agrees,
            "homotopy_verified": self.homotopy_verified,
        }


def _ranks(cx: CochainComplex, p: int) -> tuple[int, int]:
    """Rank of ``D_p`` by two independent routines, summed over coordinate blocks."""
    if p < 0 or p > cx.pmax:
        return 0, 0
    a = b = 0
    for c in cx.coordinates():
        block = cx.coordinate_block(p, c)
        if block.size == 0:
            continue
        rows = block.tolist()
        a += rank_fraction_free(rows)
        b += column_space_dim(rows)
    return a, b


def cohomology_dims(cx: CochainComplex) -> CohomologyReport:
    ranks = {p: _ranks(cx, p) for p in range(-1, cx.pmax + 1)}
    agrees = all(x == y for x, y in ranks.values())
    rows = []
    for p in range(cx.pmax + 1):
        rk, rk2 = ranks[p]
        z = cx.dim(p) - rk
        bnd = ranks[p - 1][0]
        if z - bnd < 0:
            raise CohomologyError(f"negative cohomology dimension in degree {p}")
        rows.append(DegreeRow(p, cx.dim(p), z, bnd, z - bnd, rk, rk2))
    rep = CohomologyReport(cx.covering, rows, agrees, cx.covering.covers_top())
    return rep


# contracting homotopy -------------------------------------------------------


@dataclass
class Homotopy:
    point: BlockExponent
    h: dict[int, np.ndarray]  # h[p] : C^p -> C^(p-1)
    verified: bool


def contracting_homotopy(cx: CochainComplex) -> Homotopy:
    """Cone construction ``(hA)_s = A_(t,s)`` for a cone point ``t`` of the covering.

    Verifies ``D h + h D = id`` exactly in degrees ``1..pmax``.
    """
    t = cx.covering.cone_point()
    if t is None:
        raise HomotopyUnavailableError("covering has no member absorbing all others")
    ti = cx.covering.members.index(t)
    h = {}
    for p in range(1, cx.pmax + 2):
        m = np.zeros((cx.dim(p - 1), cx.dim(p)), dtype=np.int64)
        for k, (sigma, c) in enumerate(cx.basis[p - 1]):
            if ti in sigma:
                continue
            tau = tuple(sorted(sigma + (ti,)))
            sign = -1 if tau.index(ti) % 2 else 1
            m[k, cx.index[p][(tau, c)]] = sign
        h[p] = m
    ok = True
    for p in range(1, cx.pmax + 1):
        lhs = cx.D[p - 1] @ h[p] + h[p + 1] @ cx.D[p]
        ok &= np.array_equal(lhs, np.eye(cx.dim(p), dtype=np.int64))
    return Homotopy(t, h, ok)


def full_report(cx: CochainComplex) -> CohomologyReport:
    rep = cohomology_dims(cx)
    try:
        hom = contracting_homotopy(cx)
    except HomotopyUnavailableError:
        rep.notes.append("homotopy unavailable: no cone point in the covering")
        return rep
    rep.homotopy_verified = hom.verified
    rep.homotopy_point = hom.point
    return rep


# refinements ------------------------------------------------------------------


def _sort_sign(seq: list[int]) -> tuple[tuple[int, ...], int]:
    sign = 1
    arr = list(seq)
    for i in range(len(arr)):
        for j in range(len(arr) - 1 - i):
            if arr[j] > arr[j + 1]:
                arr[j], arr[j + 1] = arr[j + 1], arr[j]
                sign = -sign
    return tuple(arr), sign


@dataclass
class RefinementMap:
    fine: CochainComplex
    coarse: CochainComplex
    assignment: dict[BlockExponent, BlockExponent]
    T: list[np.ndarray]  # T[p] : C^p(coarse) -> C^p(fine)
    commutes: bool


def refinement_map(fine: CochainComplex, coarse: CochainComplex,
                   assignment: Mapping[BlockExponent, BlockExponent]) -> RefinementMap:
    """Cochain map ``(t*A)_(j0..jp) = sign * A_(sorted t(j0)..t(jp))`` (zero on repeats)."""
    if fine.covering.mode != "sheaf" or coarse.covering.mode != "sheaf":
        raise RefinementError("refinement maps are built for sheaf coverings")
    if fine.model is not coarse.model and (fine.model.lattice != coarse.model.lattice
                                           or fine.model.symbols.exponents != coarse.model.symbols.exponents
                                           or fine.model.symbols.matrix_size != coarse.model.symbols.matrix_size):
        raise RefinementError("fine and coarse complexes use different sheaves")
    L = fine.covering.lattice
    assignment = dict(assignment)
    for j in fine.covering.members:
        if j not in assignment:
            raise RefinementError(f"refinement map undefined at {j}")
        tj = assignment[j]
        if tj not in coarse.covering.members:
            raise RefinementError(f"{tj} is not a member of the coarse covering")
        if not L.leq(j, tj):
            raise RefinementError(f"inclusion violated: V_{j} is not inside V_{tj}")
    pos = [coarse.covering.members.index(assignment[j]) for j in fine.covering.members]
    pmax = min(fine.pmax, coarse.pmax)
    T = []
    for p in range(pmax + 2):
        m = np.zeros((fine.dim(p), coarse.dim(p)), dtype=np.int64)
        for tau in fine.tuples[p] if p < len(fine.tuples) else []:
            image = [pos[k] for k in tau]
            if len(set(image)) < len(image):
                continue
            sigma, sign = _sort_sign(image)
            for c in coarse.space(sigma):
                m[fine.index[p][(tau, c)], coarse.index[p][(sigma, c)]] = sign
        T.append(m)
    commutes = all(
        np.array_equal(fine.D[p] @ T[p], T[p + 1] @ coarse.D[p]) for p in range(pmax + 1)
    )
    return RefinementMap(fine, coarse, assignment, T, commutes)


def _cocycle_basis(cx: CochainComplex, p: int) -> list[list]:
    """Columns spanning ``Z^p``."""
    return nullspace(cx.D[p].tolist(), cx.dim(p))


def _boundaries(cx: CochainComplex, p: int) -> list[list]:
    """Rows-as-columns matrix whose columns span ``B^p``."""
    if p == 0:
        return [[] for _ in range(cx.dim(0))]
    return cx.D[p - 1].tolist()


def induced_rank(target: CochainComplex, source: CochainComplex, M, p: int) -> int:
    """Rank of the map ``H^p(source) -> H^p(target)`` induced by the cochain matrix ``M``."""
    Z = _cocycle_basis(source, p)
    if not Z:
        return 0
    images = matmul(np.asarray(M).tolist(), [list(col) for col in zip(*Z)])
    B = _boundaries(target, p)
    return rank(hstack(B, images, nrows=target.dim(p))) - rank(B)


def agree_on_cohomology(target: CochainComplex, source: CochainComplex, M1, M2, p: int) -> bool:
    """Whether two cochain maps induce the same map ``H^p(source) -> H^p(target)``."""
    diff = (np.asarray(M1) - np.asarray(M2)).tolist()
    return induced_rank(target, source, diff, p) == 0
