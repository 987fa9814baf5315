#!/usr/bin/env python3
"""Fuzz the normal-form engine against the independent rewriting oracle.

Samples random generator words on the bundled fixtures and checks that
parse_word agrees with the undirected pair-rewriting oracle, including
Zero outcomes.  Exits nonzero on the first mismatch.
"""

import argparse
import random
import sys
from dataclasses import dataclass
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from conftest import alphabet, random_word  # noqa: E402
from oracle import ZERO, oracle_nf  # noqa: E402
from sepgroid import load_fixture, semigroup as sg  # noqa: E402


@dataclass
class Config:
    fixtures: tuple[str, ...] = ("g1", "g2", "g3")
    words: int = 20_000
    max_len: int = 8
    seed: int = 0


def fuzz(cfg: Config) -> int:
    mismatches = 0
    for name in cfg.fixtures:
        g = load_fixture(f"{name}.sg")
        toks = alphabet(g)
        rng = random.Random(cfg.seed)
        zeros = 0
        for i in range(cfg.words):
            w = random_word(rng, toks, cfg.max_len)
            e = sg.parse_word(g, w)
            nf = oracle_nf(g, w)
            if sg.is_zero(e):
                zeros += 1
                ok = nf == ZERO
            else:
                ok = nf == oracle_nf(g, sg.element_to_word(g, e))
            if not ok:
                mismatches += 1
                print(f"MISMATCH {name}: {w!r}")
                print(f"  library: {sg.element_to_word(g, e)!r}")
                print(f"  oracle:  {nf!r}")
        print(
            f"{name}: {cfg.words} words, {zeros} zero "
            f"({100 * zeros / cfg.words:.1f}%), {mismatches} mismatches"
        )
    return mismatches


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--words", type=int, default=20_000)
    ap.add_argument("--max-len", type=int, default=8)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--fixtures", nargs="*", default=["g1", "g2", "g3"])
    args = ap.parse_args()
    cfg = Config(
        fixtures=tuple(args.fixtures),
        words=args.words,
        max_len=args.max_len,
        seed=args.seed,
    )
    return 1 if fuzz(cfg) else 0


if __name__ == "__main__":
    sys.exit(main())
