"""Census of small preorders: iso classes, completion sizes and generic counts per size."""
import argparse
import json
from collections import Counter
from dataclasses import asdict, dataclass

from forcelab.algebra import RegularOpenAlgebra
from forcelab.corpus import exhaustive_preorders
from forcelab.order import enumerate_generics


@dataclass
class CensusConfig:
    max_n: int = 5


def census(cfg: CensusConfig) -> dict:
    rows = {}
    for P in exhaustive_preorders(cfg.max_n):
        n = len(P)
        row = rows.setdefault(n, {"classes": 0, "with_top": 0, "completion_sizes": Counter(), "generics": Counter()})
        row["classes"] += 1
        row["with_top"] += P.top is not None
        row["completion_sizes"][len(RegularOpenAlgebra(P))] += 1
        row["generics"][len(enumerate_generics(P))] += 1
    return {"config": asdict(cfg),
            "sizes": {n: {k: dict(sorted(v.items())) if isinstance(v, Counter) else v for k, v in row.items()}
                      for n, row in sorted(rows.items())}}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=CensusConfig.max_n)
    ns = ap.parse_args()
    print(json.dumps(census(CensusConfig(ns.max_n)), indent=2))


if __name__ == "__main__":
    main()
