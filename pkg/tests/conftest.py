import random

import pytest

from sepgroid import load_fixture
from sepgroid.graph import FreePrime


@pytest.fixture(scope="session")
def g0():
    return load_fixture("g0.sg")


@pytest.fixture(scope="session")
def g1():
    return load_fixture("g1.sg")


@pytest.fixture(scope="session")
def g2():
    return load_fixture("g2.sg")


@pytest.fixture(scope="session")
def g3():
    return load_fixture("g3.sg")


@pytest.fixture(scope="session")
def graphs(g0, g1, g2, g3):
    return {"g0": g0, "g1": g1, "g2": g2, "g3": g3}


@pytest.fixture
def rng():
    return random.Random(0)


def alphabet(g):
    """Every generator token of the graph, plus t-generators."""
    toks = []
    for p in g.primes:
        if isinstance(p, FreePrime):
            toks.append(f"v:{p.name}")
            for i in range(1, p.k + 1):
                toks += [f"a:{p.name}.{i}", f"a:{p.name}.{i}*"]
                for t in range(1, len(p.targets[i - 1]) + 1):
                    toks += [f"b:{p.name}.{i}.{t}", f"b:{p.name}.{i}.{t}*"]
            for i in range(1, max(p.k, 2) + 1):
                toks += [f"t:{p.name}.{i}", f"t:{p.name}.{i}^-1"]
        else:
            for v in sorted(p.vertices):
                toks.append(f"v:{v}")
            for e in list(p.edges) + list(p.connectors):
                toks += [f"e:{e.name}", f"e:{e.name}*"]
    return toks


def random_word(rng, toks, max_len):
    return " ".join(rng.choice(toks) for _ in range(rng.randint(1, max_len)))
