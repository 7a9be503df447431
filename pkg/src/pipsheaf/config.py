"""Experiment configuration files (TOML with rational strings)."""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .exact import ComplexRational, ParseError, parse_rational
from .lattice import BlockExponent, IndexLattice, LatticeError, close_lattice
from .operators import OperatorSymbol, SymbolExponent
from .sheaf import SymbolSpace
from .vectors import PipVector


class ConfigError(ValueError):
    pass


@dataclass
class CoveringSpec:
    name: str
    members: list[BlockExponent]
    mode: str = "sheaf"
    variant: str | None = None
    pmax: int | None = None


@dataclass
class RefinementSpec:
    name: str
    fine: str
    coarse: str
    maps: list[dict[BlockExponent, BlockExponent]]


@dataclass
class GlueSpec:
    name: str
    sections: list[tuple[BlockExponent, dict[int, Fraction]]]


@dataclass
class ExperimentConfig:
    lattice: IndexLattice
    generators: list[BlockExponent]
    lhs_mode: bool
    symbols: SymbolSpace
    vectors: dict[str, PipVector] = field(default_factory=dict)
    operators: dict[str, OperatorSymbol] = field(default_factory=dict)
    coverings: dict[str, CoveringSpec] = field(default_factory=dict)
    refinements: list[RefinementSpec] = field(default_factory=list)
    glue: list[GlueSpec] = field(default_factory=list)
    cosheaf_variants: list[str] = field(default_factory=lambda: ["universal_L", "final_set", "partial_additive"])
    cosheaf_family: list[BlockExponent] | None = None
    cosheaf_probes: list[tuple[BlockExponent, BlockExponent]] = field(default_factory=list)
    pmax: int | None = None
    nmax: int = 4
    tol: Fraction = Fraction(1, 10 ** 6)
    seed: int = 0


def _fail(where: str, msg: str):
    raise ConfigError(f"{where}: {msg}")


def _rational(value, where: str) -> Fraction:
    try:
        return parse_rational(value)
    except (ParseError, TypeError, ValueError) as exc:
        _fail(where, str(exc))


def _exponent(value, k: int, where: str) -> BlockExponent:
    if not isinstance(value, list):
        _fail(where, "expected an exponent vector (list of rational strings)")
    if len(value) != k:
        _fail(where, f"exponent {value} has length {len(value)}, expected {k}")
    return BlockExponent(_rational(x, f"{where}[{i}]") for i, x in enumerate(value))


def _symbol_exponent(value, k: int, where: str) -> SymbolExponent:
    if not isinstance(value, list) or len(value) != k:
        _fail(where, f"expected an exponent vector of length {k}")
    out = []
    for i, x in enumerate(value):
        if isinstance(x, str) and x.strip().lower() == "-inf":
            out.append(None)
        else:
            out.append(_rational(x, f"{where}[{i}]"))
    try:
        return SymbolExponent(out)
    except ValueError as exc:
        _fail(where, str(exc))


def _complex(value, where: str) -> ComplexRational:
    """A rational string, or ``[re, im]``."""
    if isinstance(value, list):
        if len(value) != 2:
            _fail(where, "complex entries are [re, im]")
        return ComplexRational(_rational(value[0], where), _rational(value[1], where))
    return ComplexRational(_rational(value, where))


def _int(value, where: str, minimum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        _fail(where, "expected an integer")
    if minimum is not None and value < minimum:
        _fail(where, f"must be at least {minimum}")
    return value


def _member(value, L: IndexLattice, where: str) -> BlockExponent:
    e = _exponent(value, L.blocks, where)
    if e not in L:
        _fail(where, f"unresolved reference: {e} is not a lattice element")
    return e


def parse_config(text: str, source: str = "<config>") -> ExperimentConfig:
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{source}: parse error: {exc}") from None

    lat = raw.get("lattice")
    if not isinstance(lat, dict):
        _fail(source, "missing [lattice] section")
    k = _int(lat.get("blocks"), "[lattice].blocks", 1)
    gens_raw = lat.get("generators")
    if not isinstance(gens_raw, list) or not gens_raw:
        _fail("[lattice].generators", "expected a nonempty list of exponent vectors")
    gens = [_exponent(g, k, f"[lattice].generators[{i}]") for i, g in enumerate(gens_raw)]
    lhs = lat.get("lhs_mode", False)
    if not isinstance(lhs, bool):
        _fail("[lattice].lhs_mode", "expected true or false")
    try:
        L = close_lattice(gens, lhs)
    except LatticeError as exc:
        _fail("[lattice]", str(exc))

    sym = raw.get("symbols", {})
    exps = [_symbol_exponent(g, k, f"[symbols].exponents[{i}]") for i, g in enumerate(sym.get("exponents", []))]
    m0 = _int(sym.get("matrix_size", 0), "[symbols].matrix_size", 0)
    try:
        symbols = SymbolSpace(k, exps, m0)
    except ValueError as exc:
        _fail("[symbols]", str(exc))
    cfg = ExperimentConfig(L, gens, lhs, symbols)

    run = raw.get("run", {})
    if "pmax" in run:
        cfg.pmax = _int(run["pmax"], "[run].pmax", 1)
    if "nmax" in run:
        cfg.nmax = _int(run["nmax"], "[run].nmax", 0)
    if "seed" in run:
        cfg.seed = _int(run["seed"], "[run].seed")
    if "tol" in run:
        cfg.tol = check_tol(_rational(run["tol"], "[run].tol"), "[run].tol")

    for name, spec in raw.get("vectors", {}).items():
        where = f"[vectors.{name}]"
        N = _int(spec.get("tail_start", 0), f"{where}.tail_start", 0)
        finite = {}
        for i, entry in enumerate(spec.get("finite", [])):
            if not isinstance(entry, list) or len(entry) not in (2, 3):
                _fail(f"{where}.finite[{i}]", "expected [index, re] or [index, re, im]")
            n = _int(entry[0], f"{where}.finite[{i}][0]", 1)
            im = entry[2] if len(entry) == 3 else "0"
            finite[n] = ComplexRational(_rational(entry[1], where), _rational(im, where))
        tails: dict[int, list] = {}
        for i, entry in enumerate(spec.get("tails", [])):
            if not isinstance(entry, list) or len(entry) not in (3, 4):
                _fail(f"{where}.tails[{i}]", "expected [block, c, sigma] or [block, re, im, sigma]")
            j = _int(entry[0], f"{where}.tails[{i}][0]", 0)
            if j >= k:
                _fail(f"{where}.tails[{i}]", f"block {j} outside 0..{k - 1}")
            if len(entry) == 3:
                c = ComplexRational(_rational(entry[1], where))
            else:
                c = ComplexRational(_rational(entry[1], where), _rational(entry[2], where))
            tails.setdefault(j, []).append((c, _rational(entry[-1], where)))
        try:
            cfg.vectors[name] = PipVector(k, finite, N, tails)
        except ValueError as exc:
            _fail(where, str(exc))

    for name, spec in raw.get("operators", {}).items():
        where = f"[operators.{name}]"
        diag = []
        for i, term in enumerate(spec.get("diag", [])):
            if not isinstance(term, list) or len(term) not in (2, 3):
                _fail(f"{where}.diag[{i}]", "expected [exponent, re] or [exponent, re, im]")
            g = _symbol_exponent(term[0], k, f"{where}.diag[{i}][0]")
            im = term[2] if len(term) == 3 else "0"
            diag.append((g, ComplexRational(_rational(term[1], where), _rational(im, where))))
        matrix = []
        for i, row in enumerate(spec.get("matrix", [])):
            if not isinstance(row, list):
                _fail(f"{where}.matrix[{i}]", "expected a row list")
            matrix.append([_complex(x, f"{where}.matrix[{i}]") for x in row])
        try:
            cfg.operators[name] = OperatorSymbol(L, diag, matrix)
        except ValueError as exc:
            _fail(where, str(exc))

    for name, spec in raw.get("coverings", {}).items():
        where = f"[coverings.{name}]"
        members = spec.get("members")
        if members == "all":
            items = list(L)
        elif isinstance(members, list) and members:
            items = [_member(m, L, f"{where}.members[{i}]") for i, m in enumerate(members)]
        else:
            _fail(f"{where}.members", 'expected "all" or a nonempty list of exponents')
        mode = spec.get("mode", "sheaf")
        if mode not in ("sheaf", "cosheaf"):
            _fail(f"{where}.mode", 'expected "sheaf" or "cosheaf"')
        variant = spec.get("variant")
        if mode == "cosheaf" and variant not in ("universal_L", "final_set", "partial_additive"):
            _fail(f"{where}.variant", "cosheaf coverings need a variant")
        pmax = _int(spec["pmax"], f"{where}.pmax", 1) if "pmax" in spec else None
        if len(set(items)) != len(items):
            _fail(f"{where}.members", "members must be distinct")
        cfg.coverings[name] = CoveringSpec(name, items, mode, variant, pmax)

    for i, spec in enumerate(raw.get("refinements", [])):
        where = f"[[refinements]] #{i + 1}"
        fine, coarse = spec.get("fine"), spec.get("coarse")
        for ref in (fine, coarse):
            if ref not in cfg.coverings:
                _fail(where, f"unresolved reference: covering {ref!r}")
        maps = []
        for a, m in enumerate(spec.get("maps", [])):
            mapping = {}
            for b, pair in enumerate(m):
                if not isinstance(pair, list) or len(pair) != 2:
                    _fail(f"{where}.maps[{a}][{b}]", "expected [member, image]")
                mapping[_member(pair[0], L, where)] = _member(pair[1], L, where)
            fine_members = set(cfg.coverings[fine].members)
            coarse_members = set(cfg.coverings[coarse].members)
            if set(mapping) != fine_members:
                _fail(f"{where}.maps[{a}]", f"must assign every member of covering {fine!r} exactly")
            for j, tj in mapping.items():
                if tj not in coarse_members:
                    _fail(f"{where}.maps[{a}]", f"unresolved reference: {tj} is not in covering {coarse!r}")
                if not L.leq(j, tj):
                    _fail(f"{where}.maps[{a}]", f"V_{j} is not contained in V_{tj}")
            maps.append(mapping)
        if not maps:
            _fail(where, "needs at least one map")
        cfg.refinements.append(RefinementSpec(spec.get("name", f"refinement-{i + 1}"), fine, coarse, maps))

    for i, spec in enumerate(raw.get("glue", [])):
        where = f"[[glue]] #{i + 1}"
        sections = []
        for a, sec in enumerate(spec.get("sections", [])):
            idx = _member(sec.get("index"), L, f"{where}.sections[{a}].index")
            vec = {}
            for b, g in enumerate(sec.get("coords", [])):
                e = _symbol_exponent(g, k, f"{where}.sections[{a}].coords[{b}]")
                try:
                    vec[symbols.coordinate_of(e)] = Fraction(1)
                except KeyError:
                    _fail(where, f"unresolved reference: {e} is not in [symbols].exponents")
            for b, unit in enumerate(sec.get("units", [])):
                try:
                    vec[symbols.unit_coordinate(*unit)] = Fraction(1)
                except (KeyError, TypeError):
                    _fail(f"{where}.sections[{a}].units[{b}]", "matrix unit outside the symbol block")
            sections.append((idx, vec))
        if not sections:
            _fail(where, "needs at least one section")
        cfg.glue.append(GlueSpec(spec.get("name", f"glue-{i + 1}"), sections))

    cos = raw.get("cosheaf", {})
    if "variants" in cos:
        for v in cos["variants"]:
            if v not in ("universal_L", "final_set", "partial_additive"):
                _fail("[cosheaf].variants", f"unknown variant {v!r}")
        cfg.cosheaf_variants = list(cos["variants"])
    if "family" in cos:
        cfg.cosheaf_family = [_member(m, L, "[cosheaf].family") for m in cos["family"]]
    for i, pair in enumerate(cos.get("probes", [])):
        if not isinstance(pair, list) or len(pair) != 2:
            _fail(f"[cosheaf].probes[{i}]", "expected [from, to]")
        cfg.cosheaf_probes.append((_member(pair[0], L, "[cosheaf].probes"), _member(pair[1], L, "[cosheaf].probes")))
    return cfg


def check_tol(tol: Fraction, where: str = "tol") -> Fraction:
    if tol <= 0:
        _fail(where, "tolerance must be positive")
    return tol


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from None
    return parse_config(text, str(path))
