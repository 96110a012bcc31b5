"""Cross-check the automaton compiler against the enumeration oracle.

    python scripts/oracle_crosscheck.py --exprs 2000 --bound 8 --seed 7

For each random expression, every accepted word up to the bound is compared
with the oracle's set, and a sample of random traces is checked for
membership. Prints a one-line summary per depth and exits non-zero on any
disagreement.
"""

import argparse
import random
import time
from dataclasses import dataclass

from eetc import automaton as fa
from eetc.model import message_count
from eetc.oracle import denote
from eetc.randexpr import POOL, SMALL_DOC, random_expr, random_trace
from eetc.semantics import compile


@dataclass
class CrosscheckConfig:
    exprs: int = 1000
    bound: int = 8
    depths: tuple = (2, 3, 4)
    max_messages: int = 5
    samples: int = 200
    seed: int = 0


def crosscheck(cfg: CrosscheckConfig, depth: int) -> dict:
    rng = random.Random(f"{cfg.seed}/{depth}")
    stats = {"exprs": 0, "words": 0, "samples": 0, "disagreements": 0, "states": 0}
    while stats["exprs"] < cfg.exprs:
        e = random_expr(rng, depth)
        if message_count(e) > cfg.max_messages:
            continue
        stats["exprs"] += 1
        aut = compile(e, SMALL_DOC)
        stats["states"] += aut.n_states
        oracle = {t.events for t in denote(e, SMALL_DOC, cfg.bound).traces}
        engine = fa.words(aut, cfg.bound)
        stats["words"] += len(oracle)
        stats["disagreements"] += len(oracle ^ engine)
        for _ in range(cfg.samples):
            w = random_trace(rng, POOL, cfg.bound)
            stats["samples"] += 1
            stats["disagreements"] += aut.accepts(w) != (w in oracle)
    return stats


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--exprs", type=int, default=CrosscheckConfig.exprs)
    ap.add_argument("--bound", type=int, default=CrosscheckConfig.bound)
    ap.add_argument("--samples", type=int, default=CrosscheckConfig.samples)
    ap.add_argument("--seed", type=int, default=CrosscheckConfig.seed)
    args = ap.parse_args()
    cfg = CrosscheckConfig(exprs=args.exprs, bound=args.bound, samples=args.samples, seed=args.seed)
    total = 0
    for depth in cfg.depths:
        t0 = time.perf_counter()
        s = crosscheck(cfg, depth)
        total += s["disagreements"]
        print(f"depth {depth}: {s['exprs']} exprs, {s['words']} oracle words, {s['samples']} sampled traces, "
              f"mean {s['states'] / s['exprs']:.1f} states, {s['disagreements']} disagreements, "
              f"{time.perf_counter() - t0:.1f}s")
    raise SystemExit(1 if total else 0)


if __name__ == "__main__":
    main()
