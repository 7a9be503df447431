"""Command line front end: run a config, print reports, exit nonzero on any law violation."""

from __future__ import annotations

import argparse
import json
import random
import sys
from itertools import combinations
from pathlib import Path

from .categories import (
    NotTotallyRegularError,
    check_AVI_category,
    check_VI_category,
    check_pip_composition,
    parallel_homomorphisms,
)
from .cohomology import (
    CohomologyBuildError,
    Covering,
    agree_on_cohomology,
    build_complex,
    contracting_homotopy,
    cohomology_dims,
    HomotopyUnavailableError,
    RefinementError,
    refinement_map,
)
from .config import ConfigError, ExperimentConfig, check_tol, load_config
from .cosheaf import CosheafModel, ExtensionUndefinedError, check_cosheaf, check_extension_laws, check_sheaf_and_cosheaf
from .exact import ParseError, parse_rational
from .lattice import check_lattice_laws
from .operators import check_operator_laws, classify, is_homomorphism
from .reporting import Report
from .sheaf import MalformedSectionError, S2ViolationError, SheafModel, check_sheaf
from .vectors import UndefinedInnerProductError, compatible, membership, partial_inner_product

COMMANDS = (
    "close-lattice", "classify-op", "category-check", "sheaf-check",
    "cosheaf-check", "cohomology", "glue", "report-all",
)


def cmd_close_lattice(cfg: ExperimentConfig) -> list[Report]:
    L = cfg.lattice
    rep = check_lattice_laws(L, cfg.generators, cfg.lhs_mode)
    rep.title = f"lattice closure: {len(L)} elements"
    rep.tables.append("\n".join(f"  {e}" for e in L))
    rep.data = {"elements": [str(e) for e in L], "count": len(L), "lhs_mode": cfg.lhs_mode}
    return [rep]


def cmd_classify_op(cfg: ExperimentConfig) -> list[Report]:
    out = []
    for name, A in sorted(cfg.operators.items()):
        cl = classify(A)
        rep = check_operator_laws(A)
        rep.title = f"operator {name} = {A}"
        rep.info("classify", cl.summary())
        if cl.inverse is not None:
            rep.info("classify.certified_inverse", f"inverse = {cl.inverse}")
        if not cl.domain:
            rep.info("domain_set", "d(A) is empty: not an operator on this lattice")
        rep.data = {
            "operator": name,
            "summary": cl.summary(),
            "domain": [str(r) for r in cl.domain],
            "image": [str(u) for u in cl.image],
            "homomorphism": cl.is_homomorphism,
            "totally_regular": cl.is_totally_regular,
            "isomorphism_certified": cl.is_isomorphism_certified,
            "projection": cl.is_projection,
            "zero": cl.is_zero,
        }
        out.append(rep)
    return out


def cmd_category_check(cfg: ExperimentConfig) -> list[Report]:
    L = cfg.lattice
    out = [check_VI_category(L)]
    for name, A in sorted(cfg.operators.items()):
        try:
            rep = check_AVI_category(L, A, cfg.nmax)
        except NotTotallyRegularError:
            rep = Report(f"category generated by {name}")
            rep.info("build_AVI_category", f"{name} rejected: not totally regular")
            out.append(rep)
            continue
        rep.title = f"category generated by {name} up to degree {cfg.nmax}"
        out.append(rep)
    homs = [(n, A) for n, A in sorted(cfg.operators.items()) if is_homomorphism(A)]
    for (na, A), (nb, B) in combinations(homs, 2):
        rep = check_pip_composition(A, B)
        rep.title = f"composition {nb}∘{na}"
        out.append(rep)
    one, two = parallel_homomorphisms(L)
    rep = Report("no initial or terminal object among PIP-spaces")
    rep.add("parallel_homomorphisms", one != two,
            f"two distinct homomorphisms V -> V: {one} and {two}")
    out.append(rep)
    return out


def cmd_sheaf_check(cfg: ExperimentConfig) -> list[Report]:
    S = SheafModel(cfg.lattice, cfg.symbols)
    rep = check_sheaf(S, random.Random(cfg.seed))
    rep.tables.append("\n".join(
        f"  Op at {r}: {{{', '.join(cfg.symbols.label(c) for c in sorted(S.sections_at(r)))}}}"
        for r in cfg.lattice
    ))
    rep.data = {"sections": {str(r): [cfg.symbols.label(c) for c in sorted(S.sections_at(r))] for r in cfg.lattice}}
    return [rep]


def _cosheaf_covers(cfg: ExperimentConfig) -> list[list]:
    covers = [spec.members for _, spec in sorted(cfg.coverings.items())]
    return covers or [list(cfg.lattice)]


def cmd_cosheaf_check(cfg: ExperimentConfig) -> list[Report]:
    L = cfg.lattice
    out = []
    for variant in cfg.cosheaf_variants:
        family = cfg.cosheaf_family if variant == "partial_additive" else None
        C = CosheafModel(L, cfg.symbols, variant, family)
        rep = check_extension_laws(C)
        rep.title = f"cosheaf {variant}"
        for J in _cosheaf_covers(cfg):
            rep.extend(check_cosheaf(C, J, random.Random(cfg.seed)))
        rep.tables.append("\n".join(
            f"  cosections at {r}: {{{', '.join(cfg.symbols.label(c) for c in sorted(C.cosections_at(r)))}}}"
            for r in L
        ))
        if variant == "partial_additive":
            for q, p in cfg.cosheaf_probes:
                try:
                    C.extend({c: 1 for c in C.cosections_at(q) & C.cosections_at(p)}, q, p)
                    rep.info("CosheafModel.extend", f"extension {q} -> {p} defined")
                except ExtensionUndefinedError as exc:
                    rep.info("CosheafModel.extend", f"extension-undefined: {exc}")
            leq_pairs = [(q, p) for q in L for p in L if L.leq(q, p)]
            same = all(C.precedes(q, p) for q, p in leq_pairs)
            rep.info("CosheafModel.precedes",
                     "coarsened relation contains the index order" if same
                     else "coarsened relation is strictly smaller than the index order on this family")
        out.append(rep)
    both = check_sheaf_and_cosheaf(L, cfg.symbols, _cosheaf_covers(cfg))
    out.append(both)
    return out


def _model_for(cfg: ExperimentConfig, spec):
    if spec.mode == "sheaf":
        return SheafModel(cfg.lattice, cfg.symbols)
    family = cfg.cosheaf_family if spec.variant == "partial_additive" else None
    return CosheafModel(cfg.lattice, cfg.symbols, spec.variant, family)


def cmd_cohomology(cfg: ExperimentConfig) -> list[Report]:
    out = []
    complexes = {}
    for name, spec in sorted(cfg.coverings.items()):
        rep = Report(f"cohomology of covering {name} ({spec.mode}{'' if spec.variant is None else ', ' + spec.variant})")
        covering = Covering(cfg.lattice, spec.members, spec.mode)
        pmax = spec.pmax or cfg.pmax
        try:
            cx = build_complex(_model_for(cfg, spec), covering, pmax)
        except CohomologyBuildError as exc:
            rep.info("build_complex", f"build aborted: {exc}")
            rep.data = {"name": name, "aborted": str(exc)}
            out.append(rep)
            continue
        complexes[name] = cx
        dims = cohomology_dims(cx)
        rep.tables.append(dims.table())
        rep.add("CochainComplex.check_dd_zero", cx.check_dd_zero(), f"DD = 0 exactly in degrees <= {cx.pmax}")
        rep.add("CochainComplex.check_dd_random", cx.check_dd_random(random.Random(cfg.seed), 100),
                "DD = 0 on 100 random cochains per degree")
        rep.add("cohomology_dims.rank_oracle", dims.oracle_agrees,
                "fraction-free elimination and column-space reduction give equal ranks")
        try:
            hom = contracting_homotopy(cx)
            rep.add("contracting_homotopy", hom.verified and dims.acyclic,
                    f"D h + h D = id in degrees 1..{cx.pmax} with cone point {hom.point}; H^p = 0 there")
            dims.homotopy_verified = hom.verified
        except HomotopyUnavailableError:
            rep.info("contracting_homotopy", "homotopy unavailable: no cone point in the covering")
        rep.data = {"name": name, **dims.as_dict()}
        out.append(rep)
    for ref in cfg.refinements:
        rep = Report(f"refinement {ref.name}: {ref.fine} -> {ref.coarse}")
        if ref.fine not in complexes or ref.coarse not in complexes:
            rep.info("refinement_map", "skipped: a complex was not built")
            out.append(rep)
            continue
        fine, coarse = complexes[ref.fine], complexes[ref.coarse]
        try:
            maps = [refinement_map(fine, coarse, m) for m in ref.maps]
        except RefinementError as exc:
            rep.add("refinement_map", False, f"invalid refinement: {exc}")
            out.append(rep)
            continue
        for i, R in enumerate(maps):
            rep.add("refinement_map.commutes", R.commutes, f"map #{i + 1} commutes with D")
        top = min(fine.pmax, coarse.pmax)
        for i, R in enumerate(maps[1:], start=2):
            same = all(agree_on_cohomology(fine, coarse, maps[0].T[p], R.T[p], p) for p in range(top + 1))
            rep.add("agree_on_cohomology", same, f"maps #1 and #{i} induce equal maps on H^p, p <= {top}")
        out.append(rep)
    return out


def cmd_glue(cfg: ExperimentConfig) -> list[Report]:
    S = SheafModel(cfg.lattice, cfg.symbols)
    out = []
    for g in cfg.glue:
        rep = Report(f"glue {g.name}")
        try:
            top, vec = S.glue(g.sections)
            rep.info("SheafModel.glue", f"glued at {top}: {{{', '.join(cfg.symbols.label(c) for c in vec)}}}")
            rep.data = {"glue": g.name, "status": "glued", "index": str(top),
                        "coords": [cfg.symbols.label(c) for c in vec]}
        except S2ViolationError as exc:
            rep.info("SheafModel.glue", f"S2 violation: {exc}")
            rep.data = {"glue": g.name, "status": "S2-violation", "pair": [str(x) for x in exc.pair]}
        except MalformedSectionError as exc:
            rep.info("SheafModel.glue", f"malformed input: {exc}")
            rep.data = {"glue": g.name, "status": "malformed"}
        out.append(rep)
    return out


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def cmd_vectors(cfg: ExperimentConfig) -> list[Report]:
    L = cfg.lattice
    rep = Report(f"vectors (tol = {cfg.tol})")
    data = {}
    names = sorted(cfg.vectors)
    for n in names:
        f = cfg.vectors[n]
        inside = [str(r) for r in L if membership(f, r)]
        rep.info("membership", f"{n} lies in V_r for r in {{{', '.join(inside)}}}")
        data[n] = {"member_of": inside}
    pairs = {}
    for a in names:
        for b in names:
            if a > b:
                continue
            f, g = cfg.vectors[a], cfg.vectors[b]
            w = compatible(f, g, L)
            entry = {"compatibility": str(w)}
            try:
                ip = partial_inner_product(f, g, L, cfg.tol)
                back = partial_inner_product(g, f, L, cfg.tol)
                z = ip.value
                entry["value"] = [_fmt(z.real), _fmt(z.imag)]
                entry["error"] = _fmt(ip.error)
                herm = ip.contains(back.value.conjugate()) or back.contains(z.conjugate())
                rep.add("partial_inner_product.hermitian", herm,
                        f"<{a},{b}> = {_fmt(z.real)} + {_fmt(z.imag)}i (error <= {_fmt(ip.error)}), Hermitian")
            except UndefinedInnerProductError:
                entry["value"] = None
                rep.info("partial_inner_product", f"<{a},{b}> undefined: {w}")
            pairs[f"{a},{b}"] = entry
    rep.data = {"vectors": data, "pairs": pairs}
    return [rep]


HANDLERS = {
    "close-lattice": cmd_close_lattice,
    "classify-op": cmd_classify_op,
    "category-check": cmd_category_check,
    "sheaf-check": cmd_sheaf_check,
    "cosheaf-check": cmd_cosheaf_check,
    "cohomology": cmd_cohomology,
    "glue": cmd_glue,
}


def run(cfg: ExperimentConfig, command: str) -> list[Report]:
    if command == "report-all":
        reports = []
        for name in COMMANDS[:-1]:
            reports.extend(HANDLERS[name](cfg))
        reports.extend(cmd_vectors(cfg))
        return reports
    if command not in HANDLERS:
        raise ValueError(f"unknown command {command!r}")
    return HANDLERS[command](cfg)


def render(command: str, reports: list[Report]) -> str:
    ok = all(r.ok for r in reports)
    parts = [f"command: {command}", f"status: {'PASS' if ok else 'FAIL'}", ""]
    for r in reports:
        parts.append(r.text())
        parts.append("")
    machine = {
        "command": command,
        "status": "PASS" if ok else "FAIL",
        "reports": [
            {
                "title": r.title,
                "ok": r.ok,
                "checks": [
                    {"check": c.check, "status": "INFO" if c.informational else ("PASS" if c.passed else "FAIL"),
                     "detail": c.detail}
                    for c in r.results
                ],
                "data": r.data,
            }
            for r in reports
        ],
    }
    parts.append("--- machine-readable ---")
    parts.append(json.dumps(machine, indent=2, sort_keys=True, ensure_ascii=False))
    return "\n".join(parts) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pipsheaf", description=__doc__)
    p.add_argument("--config", required=True, help="experiment config (TOML)")
    p.add_argument("--command", required=True, choices=COMMANDS)
    p.add_argument("--out", default=None, help="directory for the report file")
    p.add_argument("--pmax", type=int, default=None)
    p.add_argument("--nmax", type=int, default=None)
    p.add_argument("--tol", default=None, help='positive rational, e.g. "1/1000000"')
    p.add_argument("--seed", type=int, default=None)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.pmax is not None:
            if args.pmax < 1:
                raise ConfigError("--pmax must be at least 1")
            cfg.pmax = args.pmax
        if args.nmax is not None:
            if args.nmax < 0:
                raise ConfigError("--nmax must be nonnegative")
            cfg.nmax = args.nmax
        if args.tol is not None:
            try:
                cfg.tol = check_tol(parse_rational(args.tol), "--tol")
            except ParseError as exc:
                raise ConfigError(f"--tol: {exc}") from None
        if args.seed is not None:
            cfg.seed = args.seed
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    reports = run(cfg, args.command)
    text = render(args.command, reports)
    sys.stdout.write(text)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / f"{args.command}.txt", "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return 0 if all(r.ok for r in reports) else 1
