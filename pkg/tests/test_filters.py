import pytest

from sepgroid import filters as fl, lattice as lt, semigroup as sg
from sepgroid.filters import (
    INF,
    FilterError,
    FreeTail,
    PerTail,
    RegTail,
    SemifinitePath,
    canonical_periodic,
)
from sepgroid.lattice import Bounds


def w(g, text):
    return sg.parse_word(g, text)


def path(g, word, tail):
    e = sg.parse_word(g, word)
    v = sg.cpath_range(g, e.gamma)
    return SemifinitePath(e.gamma, g.prime_of_vertex(v), tail)


# -- validation and infiniteness -----------------------------------------


def test_validate_paths(g2, g3):
    fl.validate_path(g2, path(g2, "v:w", RegTail(("f1", "f2"))))
    fl.validate_path(g2, path(g2, "v:w", PerTail(("f1",), ("f2",))))
    fl.validate_path(g3, path(g3, "v:p", FreeTail((2,))))
    fl.validate_path(g3, path(g3, "b:p.1.1", PerTail((), ("f1",))))
    with pytest.raises(FilterError):
        fl.validate_path(g3, path(g3, "v:p", RegTail(())))
    from sepgroid.graph import GraphError

    with pytest.raises((FilterError, GraphError)):
        fl.validate_path(g2, path(g2, "v:w", RegTail(("nope",))))


def test_is_infinite(g0, g2, g3):
    assert fl.is_infinite(path(g3, "v:p", FreeTail((INF,))))
    assert not fl.is_infinite(path(g3, "v:p", FreeTail((3,))))
    assert fl.is_infinite(path(g2, "v:w", PerTail((), ("f1",))))
    assert not fl.is_infinite(path(g2, "v:w", RegTail(("f1",))))
    # a point prime has no loops, so the empty tail is vacuously all-infinite
    assert fl.is_infinite(path(g0, "v:p", FreeTail(())))


# -- filter membership ---------------------------------------------------


def test_filter_contains_free(g3):
    x = path(g3, "v:p", FreeTail((INF,)))
    assert fl.filter_contains(g3, x, w(g3, "v:p"))
    assert fl.filter_contains(g3, x, w(g3, "a:p.1 a:p.1 a:p.1* a:p.1*"))
    assert not fl.filter_contains(g3, x, w(g3, "b:p.1.1 b:p.1.1*"))


def test_filter_contains_descended(g3):
    x = path(g3, "b:p.1.1", PerTail((), ("f1",)))
    assert fl.filter_contains(g3, x, w(g3, "v:p"))
    assert fl.filter_contains(g3, x, w(g3, "b:p.1.1 b:p.1.1*"))
    assert fl.filter_contains(g3, x, w(g3, "b:p.1.1 e:f1 e:f1* b:p.1.1*"))
    assert not fl.filter_contains(g3, x, w(g3, "a:p.1 a:p.1*"))
    assert not fl.filter_contains(g3, x, w(g3, "b:p.1.1 e:f2 e:f2* b:p.1.1*"))


def test_filter_axioms(graphs, rng):
    bounds = Bounds(2, 3, 4)
    for name in ("g2", "g3"):
        g = graphs[name]
        idems = list(lt.enumerate_idempotents(g, bounds))
        starts = sorted(g.vertex_prime)
        for v in starts:
            for mu in fl.enumerate_semifinite(g, v, Bounds(1, 2, 2)):
                inside = [e for e in idems if fl.filter_contains(g, mu, e)]
                assert inside  # contains at least the top of its vertex
                for e in inside:
                    for f in inside:
                        m = sg.mul(g, e, f)
                        assert not sg.is_zero(m)
                        assert fl.filter_contains(g, mu, m)
                    for f in idems:
                        if lt.nat_leq(g, e, f):
                            assert fl.filter_contains(g, mu, f)


def test_traces_distinguish_paths(graphs):
    # with the idempotent bound above the path description size, distinct
    # semifinite paths have distinct traces
    for name in ("g2", "g3"):
        g = graphs[name]
        idems = list(lt.enumerate_idempotents(g, Bounds(2, 4, 7)))
        seen = {}
        for v in sorted(g.vertex_prime):
            for mu in fl.enumerate_semifinite(g, v, Bounds(1, 2, 2)):
                tr = frozenset(
                    i for i, e in enumerate(idems) if fl.filter_contains(g, mu, e)
                )
                assert tr not in seen, (mu, seen[tr])
                seen[tr] = mu


def test_reconstruct_inverts_trace(graphs):
    for name in ("g2", "g3"):
        g = graphs[name]
        idems = list(lt.enumerate_idempotents(g, Bounds(2, 4, 7)))
        for v in sorted(g.vertex_prime):
            for mu in fl.enumerate_semifinite(g, v, Bounds(1, 2, 2)):
                if isinstance(mu.tail, FreeTail) and any(
                    x == INF for x in mu.tail.k
                ):
                    continue  # not finitely generated within bounds
                if isinstance(mu.tail, PerTail):
                    continue
                fam = [e for e in idems if fl.filter_contains(g, mu, e)]
                assert fl.reconstruct_path(g, fam) == mu


def test_reconstruct_rejects_bad_families(g2):
    with pytest.raises(FilterError):
        fl.reconstruct_path(g2, [])
    e1 = w(g2, "e:f1 e:f1*")
    e2 = w(g2, "e:f2 e:f2*")
    with pytest.raises(FilterError):
        fl.reconstruct_path(g2, [e1, e2])  # not directed


# -- ultrafilters --------------------------------------------------------


def test_ultrafilter_iff_infinite(graphs):
    for name in ("g2", "g3"):
        g = graphs[name]
        for v in sorted(g.vertex_prime):
            for mu in fl.enumerate_semifinite(g, v, Bounds(1, 2, 2)):
                assert fl.is_ultrafilter(g, mu) == fl.is_infinite(mu)


def test_separation_witness(g3):
    mu = path(g3, "v:p", FreeTail((2,)))
    X, Y = fl.separation_witness(g3, mu)
    for x in X:
        assert fl.filter_contains(g3, mu, x)
    # no infinite path contains all of X while meeting no member of Y
    for nu in fl.enumerate_infinite(g3, "p", Bounds(2, 3, 3)):
        if all(fl.filter_contains(g3, nu, x) for x in X):
            assert any(fl.filter_contains(g3, nu, y) for y in Y)


def test_separation_witness_rejects_infinite(g0, g3):
    with pytest.raises(FilterError):
        fl.separation_witness(g3, path(g3, "v:p", FreeTail((INF,))))
    # the point prime's trivial path is already an ultrafilter
    with pytest.raises(FilterError):
        fl.separation_witness(g0, path(g0, "v:p", FreeTail(())))


def test_extend_to_infinite(graphs):
    for name in ("g2", "g3"):
        g = graphs[name]
        for v in sorted(g.vertex_prime):
            for mu in fl.enumerate_semifinite(g, v, Bounds(1, 2, 2)):
                if fl.is_infinite(mu):
                    continue
                nu = fl.extend_to_infinite(g, mu)
                assert fl.is_infinite(nu)
                assert fl.is_initial_segment(
                    g, lt.EPath(mu.gamma, mu.p, _tail_tuple(mu)), nu
                ) or isinstance(mu.tail, FreeTail)


def _tail_tuple(mu):
    if isinstance(mu.tail, FreeTail):
        return tuple(0 for _ in mu.tail.k)
    return tuple(mu.tail.path)


# -- canonical periodic form ---------------------------------------------


def test_canonical_periodic():
    assert canonical_periodic((), ("f1", "f1")) == ((), ("f1",))
    assert canonical_periodic(("f1",), ("f2", "f1")) == ((), ("f1", "f2"))
    assert canonical_periodic(("f1", "f1"), ("f1",)) == ((), ("f1",))
    assert canonical_periodic(("f2",), ("f1",)) == (("f2",), ("f1",))


def test_enumerate_canonical_only(g2):
    for mu in fl.enumerate_semifinite(g2, "w", Bounds(1, 2, 3)):
        if isinstance(mu.tail, PerTail):
            assert canonical_periodic(mu.tail.prefix, mu.tail.cycle) == (
                mu.tail.prefix,
                mu.tail.cycle,
            )
