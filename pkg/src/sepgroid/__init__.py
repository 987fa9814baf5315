"""Symbolic computation for adaptable separated graphs: the inverse
semigroup of normal forms, its idempotent lattice and cylinder algebra,
the tight groupoid of germs, and the graph monoid with equidecomposition
certificates."""

from importlib import resources


def fixture_path(name: str) -> str:
    """Absolute path of a bundled fixture graph file, e.g. 'g3.sg'."""
    return str(resources.files(__name__).joinpath("fixtures", name))


def load_fixture(name: str):
    from .graph import parse_graph

    with open(fixture_path(name), encoding="utf-8") as fh:
        return parse_graph(fh.read())
