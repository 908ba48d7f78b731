"""Command line entry point: ``forcelab <verb> [arguments] [flags]``."""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from typing import Callable, Optional

from . import __version__
from .algebra import verify_algebra_laws
from .corpus import exhaustive_preorders, random_preorders, standard_posets
from .errors import ForcelabError
from .forcing import (ForcingContext, verify_forcing_facts, verify_forcing_theorem, verify_name_facts)
from .formulas import formula_text
from .hf import hf_str
from .names import element_text, enumerate_names, subalgebra_pool
from .order import enumerate_generics
from .report import Report, emit
from .semantics import verify_bvm_laws, verify_delta0_satisfaction
from .sexpr import parse_one
from .twostep import (check_poset_name, iterate, star, transport_formulas, verify_forcing_transport,
                      verify_iteration, verify_product, verify_star_product, verify_twostep)
from .workspace import Workspace, load_workspace

VERBS = ("validate", "complete", "generics", "bval", "forces", "valuate", "star", "product", "iterate", "check")
SUITES = ("algebra-laws", "bvm-laws", "delta0", "forcing-theorem", "forcing-facts", "names", "twostep",
          "product", "iteration", "claims")
DEFAULT_SEED = 20240101

EXIT_OK, EXIT_FAILED, EXIT_ERROR = 0, 1, 2


@dataclass
class SuiteConfig:
    """Bounds shared by every verification suite."""

    max_rank: int = 2
    max_depth: int = 3
    max_poset: int = 7
    seed: int = DEFAULT_SEED
    exhaustive: int = 0
    random: int = 0
    posets: list = field(default_factory=list)
    pool_above: int = 8  # BVM laws restrict values to a 4-element pool above this carrier size
    first_stage_max: int = 3
    suite: Optional[str] = None
    generic: Optional[str] = None  # comma separated members, for valuate
    poset_arg: Optional[str] = None  # poset for inline expressions


class UsageError(ForcelabError):
    pass


def _need(args, n, usage):
    if len(args) != n:
        raise UsageError(f"usage: {usage}")


# verb handlers; each returns a list of result dicts

def cmd_validate(ws: Workspace, args, cfg) -> list:
    ids = args or sorted(ws.posets)
    out = []
    for pid in ids:
        P = ws.poset(pid)
        out.append({"title": f"poset {pid}", "elements": list(P.elements), "top": P.top,
                    "relation_pairs": len(P.relation()), "separative_classes": len(P.minimal_classes()),
                    "maximal_antichains": len(P.maximal_antichains())})
    if not args:
        for ident, (pid, n) in sorted(ws.names.items()):
            out.append({"title": f"name {ident}", "poset": pid, "rank": n.brank, "text": n.text})
        for ident, (pid, f) in sorted(ws.formulas.items()):
            out.append({"title": f"formula {ident}", "poset": pid, "text": formula_text(f, _labels(ws, pid))})
        for ident, spec in sorted(ws.twosteps.items()):
            qn = ws.stage_name(spec.stage, ws.context(spec.poset))
            out.append({"title": f"twostep {ident}", "poset": spec.poset, "certified": True,
                        "second_stage_elements": list(qn.labels)})
    return out


def cmd_complete(ws, args, cfg) -> list:
    _need(args, 1, "complete POSET")
    ctx = ws.context(args[0])
    B = ctx.algebra
    laws = verify_algebra_laws(B, seed=cfg.seed)
    return [{"title": f"completion of {args[0]}", "ok": all(laws.values()), "carrier_size": len(B),
             "atoms": len(B.atoms), "elements": [list(u.sorted_conditions()) for u in B.carrier],
             "embedding": {p: list(B.e(p).sorted_conditions()) for p in ctx.poset.elements},
             "dense_embedding": ctx.embedding.kind, "laws": laws}]


def cmd_generics(ws, args, cfg) -> list:
    _need(args, 1, "generics POSET")
    gens = sorted(G.sorted() for G in enumerate_generics(ws.poset(args[0])))
    return [{"title": f"generics of {args[0]}", "count": len(gens), "generics": [list(g) for g in gens]}]


def _labels(ws: Workspace, pid: str) -> dict:
    """Declared identifiers for the names over one poset, used to shorten formula text."""
    return {n: ident for ident, (owner, n) in sorted(ws.names.items(), reverse=True) if owner == pid}


def _formula(ws: Workspace, text: str, poset: Optional[str]):
    if text in ws.formulas:
        return ws.formulas[text]
    if poset is None:
        raise UsageError(f"{text} is not a defined formula; pass --poset to parse it inline")
    return poset, ws.formula_expr(poset, parse_one(text, "<argument>"), "<argument>")


def _name(ws: Workspace, text: str, poset: Optional[str]):
    if text in ws.names:
        return ws.names[text]
    if poset is None:
        raise UsageError(f"{text} is not a defined name; pass --poset to parse it inline")
    return poset, ws.name_expr(poset, parse_one(text, "<argument>"), "<argument>")


def cmd_bval(ws, args, cfg) -> list:
    _need(args, 1, "bval FORMULA")
    pid, f = _formula(ws, args[0], cfg.poset_arg)
    u = ws.context(pid).valuer.formula(f)
    return [{"title": f"Boolean value over {pid}", "formula": formula_text(f, _labels(ws, pid)), "value": element_text(u),
             "conditions": list(u.sorted_conditions())}]


def cmd_forces(ws, args, cfg) -> list:
    if len(args) not in (1, 2):
        raise UsageError("usage: forces [CONDITION] FORMULA")
    pid, f = _formula(ws, args[-1], cfg.poset_arg)
    ctx = ws.context(pid)
    P = ctx.poset
    rec = ctx.forcing_set(f)
    via_completion = [p for p in P.elements if ctx.forces(p, f)]
    via_recursion = P.members(rec)
    res = {"title": f"forcing over {pid}", "formula": formula_text(f, _labels(ws, pid)), "forcing_set": sorted(via_completion),
           "routes_agree": sorted(via_recursion) == via_completion}
    res["ok"] = res["routes_agree"]
    if len(args) == 2:
        p = args[0]
        if p not in P.index:
            raise UsageError(f"{p} is not a condition of {pid}")
        res["condition"] = p
        res["forced"] = p in via_completion
    return [res]


def cmd_valuate(ws, args, cfg) -> list:
    _need(args, 1, "valuate NAME")
    pid, n = _name(ws, args[0], cfg.poset_arg)
    ctx = ws.context(pid)
    gens = ctx.generics
    if cfg.generic:
        gens = [ctx.generic(cfg.generic.split(","))]
    rows = [{"generic": list(G.sorted()), "value": hf_str(ctx.valuate(n, G))} for G in gens]
    return [{"title": f"valuations over {pid}", "name": n.text, "valuations": rows}]


def _twostep_from_args(ws, args):
    if len(args) == 1 and args[0] in ws.twosteps:
        spec = ws.twosteps[args[0]]
        ctx = ws.context(spec.poset)
        return ctx, ws.stage_name(spec.stage, ctx)
    if len(args) == 2:
        ctx = ws.context(args[0])
        return ctx, check_poset_name(ctx, ws.poset(args[1]))
    raise UsageError("usage: star TWOSTEP | star POSET POSET")


def cmd_star(ws, args, cfg) -> list:
    ctx, qn = _twostep_from_args(ws, args)
    ts = star(ctx, qn)
    P = ts.poset
    rep = verify_twostep(ts, cfg.max_rank, pool=_pool(ts.ctx.algebra, cfg))
    rep.update({"title": f"{ctx.poset.name} * {'/'.join(qn.labels)}", "elements": list(P.elements),
                "top": P.top, "order": [list(x) for x in sorted(P.relation())]})
    return [rep]


def cmd_product(ws, args, cfg) -> list:
    _need(args, 2, "product POSET POSET")
    rep = verify_product(ws.poset(args[0]), ws.poset(args[1]))
    rep["title"] = f"{args[0]} x {args[1]}"
    return [rep]


def _iteration_stages(ws, args):
    if len(args) == 1 and args[0] in ws.iterations:
        return [(lambda ctx, s=s: ws.stage_name(s, ctx)) for s in ws.iterations[args[0]].stages]
    return [ws.poset(a) for a in args]


def cmd_iterate(ws, args, cfg) -> list:
    if not args:
        raise UsageError("usage: iterate ITERATION | iterate POSET...")
    it = iterate(_iteration_stages(ws, args))
    rep = verify_iteration(it)
    rep["title"] = f"iteration of length {it.length}"
    return [rep]


# suites

def _pool(B, cfg: SuiteConfig):
    return subalgebra_pool(B) if len(B) > cfg.pool_above else None


def suite_corpus(ws: Workspace, cfg: SuiteConfig) -> list:
    if cfg.posets:
        return [ws.poset(p) for p in cfg.posets]
    out = [P for _, P in sorted(ws.posets.items()) if len(P) <= cfg.max_poset]
    if cfg.exhaustive:
        out += exhaustive_preorders(min(cfg.exhaustive, cfg.max_poset))
    if cfg.random:
        out += random_preorders(cfg.random, cfg.max_poset, seed=cfg.seed)
    return out


def _titled(rep: dict, title: str) -> dict:
    rep = dict(rep)
    rep["title"] = title
    return rep


def run_suite(name: str, ws: Workspace, cfg: SuiteConfig) -> list:
    corpus = suite_corpus(ws, cfg)
    out = []
    if name == "algebra-laws":
        for P in corpus:
            laws = verify_algebra_laws(ForcingContext(P).algebra, seed=cfg.seed)
            out.append({"title": f"algebra-laws {P.name}", "ok": all(laws.values()), "laws": laws,
                        "counterexamples": sorted(k for k, v in laws.items() if not v)})
    elif name == "bvm-laws":
        for P in corpus:
            B = ForcingContext(P).algebra
            names = enumerate_names(B, cfg.max_rank, _pool(B, cfg))
            out.append(_titled(verify_bvm_laws(names, seed=cfg.seed), f"bvm-laws {P.name}"))
    elif name == "delta0":
        for P in corpus:
            rep = verify_delta0_satisfaction(ForcingContext(P).algebra, cfg.max_rank, min(cfg.max_depth, 2))
            out.append(_titled(rep, f"delta0 {P.name}"))
    elif name == "forcing-theorem":
        for P in corpus:
            rep = verify_forcing_theorem(ForcingContext(P), cfg.max_rank, cfg.max_depth)
            out.append(_titled(rep, f"forcing-theorem {P.name}"))
    elif name == "forcing-facts":
        for P in corpus:
            rep = verify_forcing_facts(ForcingContext(P), cfg.max_rank, min(cfg.max_depth, 2))
            out.append(_titled(rep, f"forcing-facts {P.name}"))
    elif name == "names":
        for P in corpus:
            rep = verify_name_facts(ForcingContext(P), cfg.max_rank)
            out.append(_titled(rep, f"names {P.name}"))
    elif name == "twostep":
        out += _twostep_suite(ws, corpus, cfg)
    elif name == "product":
        small = [P for P in corpus if len(P) <= 4]
        for P in small:
            for Q in small:
                out.append(_titled(verify_product(P, Q), f"product {P.name} x {Q.name}"))
    elif name == "iteration":
        specs = {"cohen1^3": [standard_posets()["cohen1"]] * 3,
                 "chain2,fan2": [standard_posets()["chain2"], standard_posets()["fan2"]]}
        for ident in sorted(ws.iterations):
            specs[ident] = _iteration_stages(ws, [ident])
        for ident, stages in specs.items():
            out.append(_titled(verify_iteration(iterate(stages)), f"iteration {ident}"))
    elif name == "claims":
        for ident, (pid, p, f) in sorted(ws.claims.items()):
            ctx = ws.context(pid)
            forced = ctx.forces(p, f)
            agree = forced == ctx.forces_recursive(p, f)
            text = formula_text(f, _labels(ws, pid))
            rep = {"title": f"claim {ident}", "ok": forced and agree, "poset": pid, "condition": p,
                   "formula": text, "forced": forced, "routes_agree": agree}
            if not rep["ok"]:
                rep["counterexamples"] = [{"poset": pid, "condition": p, "formula": text}]
            out.append(rep)
    else:
        raise UsageError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    return out


def _twostep_suite(ws, corpus, cfg) -> list:
    out = []
    std = standard_posets()
    seconds = [std["chain2"], std["cohen1"], std["fan2"]]
    firsts = [P for P in corpus if P.top is not None and len(P) <= cfg.first_stage_max]
    for P in firsts:
        ctx = ForcingContext(P)
        for Q in seconds:
            ts = star(ctx, check_poset_name(ctx, Q))
            rep = verify_twostep(ts, cfg.max_rank)
            names = enumerate_names(ts.ctx.algebra, cfg.max_rank, subalgebra_pool(ts.ctx.algebra))
            rep["forcing_transport"] = verify_forcing_transport(ts, transport_formulas(ts, names))
            rep["star_vs_product"] = verify_star_product(ctx, Q)
            rep["ok"] = rep["ok"] and rep["forcing_transport"]["ok"] and rep["star_vs_product"]["ok"]
            out.append(_titled(rep, f"twostep {P.name} * {Q.name}"))
    for ident, spec in sorted(ws.twosteps.items()):
        ctx = ws.context(spec.poset)
        ts = star(ctx, ws.stage_name(spec.stage, ctx))
        out.append(_titled(verify_twostep(ts, cfg.max_rank, pool=_pool(ts.ctx.algebra, cfg)), f"twostep {ident}"))
    return out


def cmd_check(ws, args, cfg) -> list:
    names = list(args)
    if cfg.suite:
        names.append(cfg.suite)
    if not names:
        raise UsageError(f"usage: check SUITE (one of {', '.join(SUITES)})")
    out = []
    for s in names:
        out += run_suite(s, ws, cfg)
    return out


HANDLERS: dict[str, Callable] = {
    "validate": cmd_validate, "complete": cmd_complete, "generics": cmd_generics, "bval": cmd_bval,
    "forces": cmd_forces, "valuate": cmd_valuate, "star": cmd_star, "product": cmd_product,
    "iterate": cmd_iterate, "check": cmd_check,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="forcelab", description="Finite forcing laboratory.")
    ap.add_argument("--version", action="version", version=f"forcelab {__version__}")
    ap.add_argument("verb", choices=VERBS)
    ap.add_argument("arguments", nargs="*")
    ap.add_argument("-i", "--input", action="append", default=[], help="poset (.poset) or definition (.sexp) file")
    ap.add_argument("--out", choices=("text", "json"), default="text")
    ap.add_argument("--max-rank", type=int, default=2)
    ap.add_argument("--max-depth", type=int, default=3)
    ap.add_argument("--max-poset", type=int, default=7)
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ap.add_argument("--suite", default=None)
    ap.add_argument("--poset", action="append", default=[], help="restrict suites or parse inline expressions")
    ap.add_argument("--generic", default=None, help="comma separated members of one generic filter")
    ap.add_argument("--exhaustive", type=int, default=0, help="add all preorders up to this size to suites")
    ap.add_argument("--random", type=int, default=0, help="add this many seeded random preorders to suites")
    ap.add_argument("--no-builtins", action="store_true")
    return ap


def run(argv=None) -> tuple[int, str]:
    ns = build_parser().parse_intermixed_args(argv)
    cfg = SuiteConfig(max_rank=ns.max_rank, max_depth=ns.max_depth, max_poset=ns.max_poset, seed=ns.seed,
                      exhaustive=ns.exhaustive, random=ns.random, posets=list(ns.poset), suite=ns.suite,
                      generic=ns.generic, poset_arg=ns.poset[0] if ns.poset else None)
    report = Report(ns.verb, list(ns.arguments))
    try:
        ws = load_workspace(ns.input, builtins=not ns.no_builtins)
        report.results = HANDLERS[ns.verb](ws, ns.arguments, cfg)
    except (ForcelabError, OSError) as exc:
        report.error = f"{type(exc).__name__}: {exc}"
    code = EXIT_ERROR if report.error else (EXIT_OK if report.ok else EXIT_FAILED)
    return code, emit(report, ns.out)


def main(argv=None) -> int:
    code, text = run(argv)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
