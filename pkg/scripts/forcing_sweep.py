"""Sweep the forcing theorem and forcing facts over the exhaustive preorder corpus.

Writes one JSON line per poset (name, size, profiles, formulas covered, failures, seconds).
"""
import argparse
import json
import sys
import time
from dataclasses import dataclass

from forcelab.corpus import exhaustive_preorders, random_preorders
from forcelab.forcing import ForcingContext, verify_forcing_facts, verify_forcing_theorem
from forcelab.names import subalgebra_pool


@dataclass
class SweepConfig:
    max_n: int = 5
    max_rank: int = 2
    max_depth: int = 3
    random: int = 0
    random_max_n: int = 6
    seed: int = 20240101
    pool_above: int = 0  # use the 4-element pool when the completion is larger; 0 disables


def sweep(cfg: SweepConfig, out=sys.stdout) -> int:
    posets = exhaustive_preorders(cfg.max_n)
    if cfg.random:
        posets += random_preorders(cfg.random, cfg.random_max_n, seed=cfg.seed)
    failures = 0
    for P in posets:
        start = time.perf_counter()
        ctx = ForcingContext(P)
        pool = subalgebra_pool(ctx.algebra) if cfg.pool_above and len(ctx.algebra) > cfg.pool_above else None
        thm = verify_forcing_theorem(ctx, cfg.max_rank, cfg.max_depth, pool=pool)
        facts = verify_forcing_facts(ctx, cfg.max_rank, cfg.max_depth, pool=pool)
        bad = len(thm["counterexamples"]) + len(facts["counterexamples"])
        failures += bad
        out.write(json.dumps({"poset": P.name, "size": len(P), "completion": len(ctx.algebra),
                              "names": thm["names"], "profiles": thm["profiles"],
                              "formulas_covered": thm["formulas_covered"], "failures": bad,
                              "seconds": round(time.perf_counter() - start, 3)}) + "\n")
    return failures


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    for field, default in vars(SweepConfig()).items():
        ap.add_argument("--" + field.replace("_", "-"), type=int, default=default)
    cfg = SweepConfig(**vars(ap.parse_args()))
    failures = sweep(cfg)
    print(f"failures: {failures}", file=sys.stderr)
    sys.exit(1 if failures else 0)


if __name__ == "__main__":
    main()
