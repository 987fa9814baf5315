#!/usr/bin/env python3
"""Census of the bounded tight spectrum of a fixture graph.

Enumerates idempotents, semifinite paths, and ultrafilters within bounds,
reports how traces separate paths, and spot-checks the trace/reconstruction
round trip.
"""

import argparse
import sys
from dataclasses import dataclass

from sepgroid import filters as fl, lattice as lt, semigroup as sg
from sepgroid import load_fixture
from sepgroid.filters import INF, FreeTail, PerTail, RegTail
from sepgroid.lattice import Bounds


@dataclass
class Config:
    fixture: str = "g3"
    max_depth: int = 2
    max_exp: int = 3
    max_len: int = 4
    path_exp: int = 2
    path_len: int = 2


def describe(mu) -> str:
    if isinstance(mu.tail, FreeTail):
        inner = ",".join("inf" if x == INF else str(x) for x in mu.tail.k)
        tail = f"free({inner})"
    elif isinstance(mu.tail, RegTail):
        tail = f"reg({','.join(mu.tail.path)} ; )"
    else:
        tail = f"reg({','.join(mu.tail.prefix)} ; {','.join(mu.tail.cycle)})"
    return f"[{len(mu.gamma.steps)} steps -> {mu.p}] {tail}"


def census(cfg: Config) -> None:
    g = load_fixture(f"{cfg.fixture}.sg")
    idems = list(
        lt.enumerate_idempotents(g, Bounds(cfg.max_depth, cfg.max_exp, cfg.max_len))
    )
    paths = []
    for v in sorted(g.vertex_prime):
        paths.extend(
            fl.enumerate_semifinite(
                g, v, Bounds(cfg.max_depth, cfg.path_exp, cfg.path_len)
            )
        )
    ultra = [mu for mu in paths if fl.is_ultrafilter(g, mu)]
    print(f"{cfg.fixture}: {len(idems)} idempotents within bounds")
    print(f"{cfg.fixture}: {len(paths)} semifinite paths, {len(ultra)} ultrafilters")

    traces = {}
    collisions = 0
    for mu in paths:
        tr = frozenset(
            i for i, e in enumerate(idems) if fl.filter_contains(g, mu, e)
        )
        if tr in traces:
            collisions += 1
            print(f"  trace collision: {describe(mu)} vs {describe(traces[tr])}")
        traces[tr] = mu
    print(f"trace collisions: {collisions}")

    reconstructed = failures = 0
    for tr, mu in traces.items():
        finite = isinstance(mu.tail, RegTail) or (
            isinstance(mu.tail, FreeTail) and INF not in mu.tail.k
        )
        if not finite:
            continue
        got = fl.reconstruct_path(g, [idems[i] for i in tr])
        reconstructed += 1
        if got != mu:
            failures += 1
            print(f"  reconstruction failure: {describe(mu)} -> {describe(got)}")
    print(f"reconstructions: {reconstructed}, failures: {failures}")

    print("sample ultrafilters:")
    for mu in ultra[:8]:
        print(f"  {describe(mu)}")


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("fixture", nargs="?", default="g3")
    ap.add_argument("--max-depth", type=int, default=2)
    ap.add_argument("--max-exp", type=int, default=3)
    ap.add_argument("--max-len", type=int, default=4)
    args = ap.parse_args()
    census(
        Config(
            fixture=args.fixture,
            max_depth=args.max_depth,
            max_exp=args.max_exp,
            max_len=args.max_len,
        )
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
