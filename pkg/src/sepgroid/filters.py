"""Semifinite and infinite paths and the filter correspondence.

A semifinite path is a descending c-path prefix plus a tail in the terminal
component: a vector of loop counts (possibly infinite) at a free prime, or a
finite / eventually-periodic path at a regular prime.  Filters of
idempotents correspond to semifinite paths via initial segments;
ultrafilters (equivalently tight filters) correspond to the infinite ones.
Infinite regular tails are restricted to eventually-periodic paths so that
membership stays decidable.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .graph import SeparatedGraph
from .lattice import Bounds, EPath, enumerate_cpaths, epath_of, simple_expand, idem_of
from .semigroup import (
    CPath,
    Element,
    FreeStep,
    RegularStep,
    cpath_is_prefix,
    cpath_range,
    is_idempotent,
    is_zero,
    mul,
)

INF = float("inf")


class FilterError(Exception):
    """Raised on malformed paths or filter bases."""


@dataclass(frozen=True)
class FreeTail:
    """Loop counts at the terminal free prime; entries in Z>=0 or INF."""

    k: tuple

    def __post_init__(self):
        if not all(x == INF or (isinstance(x, int) and x >= 0) for x in self.k):
            raise FilterError(f"bad free tail {self.k}")


@dataclass(frozen=True)
class RegTail:
    """A finite internal path at the terminal regular prime."""

    path: tuple[str, ...]


@dataclass(frozen=True)
class PerTail:
    """prefix . cycle . cycle . ... with s(cycle) = r(cycle) = r(prefix)."""

    prefix: tuple[str, ...]
    cycle: tuple[str, ...]

    def __post_init__(self):
        if not self.cycle:
            raise FilterError("periodic tail needs a nonempty cycle")


Tail = FreeTail | RegTail | PerTail


@dataclass(frozen=True)
class SemifinitePath:
    gamma: CPath
    p: str
    tail: Tail


def validate_path(g: SeparatedGraph, mu: SemifinitePath) -> None:
    v = cpath_range(g, mu.gamma)
    if g.prime_of_vertex(v) != mu.p:
        raise FilterError(f"prefix ends at {v}, not in {mu.p}")
    if g.is_free(mu.p):
        if not isinstance(mu.tail, FreeTail) or len(mu.tail.k) != g.k(mu.p):
            raise FilterError("free prime needs a loop-count tail")
        return
    if isinstance(mu.tail, FreeTail):
        raise FilterError("regular prime needs a path tail")
    pieces = (
        (mu.tail.path,)
        if isinstance(mu.tail, RegTail)
        else (mu.tail.prefix, mu.tail.cycle)
    )
    at = v
    for piece in pieces:
        for name in piece:
            e = g.edge(name)
            if g.prime_of_vertex(e.src) != mu.p or e.src != at:
                raise FilterError(f"tail edge {name} does not continue at {at}")
            at = e.rng
        if isinstance(mu.tail, PerTail) and piece is mu.tail.cycle and at != _reg_end(
            g, v, mu.tail.prefix
        ):
            raise FilterError("cycle does not return to its start")


def _reg_end(g: SeparatedGraph, start: str, path) -> str:
    at = start
    for name in path:
        at = g.edge(name).rng
    return at


def is_infinite(mu: SemifinitePath) -> bool:
    if isinstance(mu.tail, FreeTail):
        return all(x == INF for x in mu.tail.k)
    return isinstance(mu.tail, PerTail)


# -- initial segments and filters ----------------------------------------


def is_initial_segment(g: SeparatedGraph, mu_p: EPath, mu: SemifinitePath) -> bool:
    if not cpath_is_prefix(mu_p.gamma, mu.gamma):
        return False
    n = len(mu_p.gamma.steps)
    if n < len(mu.gamma.steps):
        step = mu.gamma.steps[n]
        if isinstance(step, FreeStep):
            return mu_p.tail[step.i - 1] <= step.m
        return step.path[: len(mu_p.tail)] == tuple(mu_p.tail)
    if g.is_free(mu.p):
        return all(a <= b for a, b in zip(mu_p.tail, mu.tail.k))
    lam = tuple(mu_p.tail)
    if isinstance(mu.tail, RegTail):
        return mu.tail.path[: len(lam)] == lam
    reps = 1 + max(0, -(-(len(lam) - len(mu.tail.prefix)) // len(mu.tail.cycle)))
    unrolled = mu.tail.prefix + mu.tail.cycle * reps
    return unrolled[: len(lam)] == lam


def filter_contains(g: SeparatedGraph, mu: SemifinitePath, e: Element) -> bool:
    if not is_idempotent(e):
        raise FilterError("filter membership is defined for nonzero idempotents")
    return is_initial_segment(g, epath_of(g, e), mu)


def reconstruct_path(g: SeparatedGraph, fam, bounds: Bounds | None = None):
    """The minimal semifinite path whose filter contains the given finite
    directed family of idempotents."""
    fam = list(fam)
    if not fam:
        raise FilterError("empty family")
    for e in fam:
        if is_zero(e) or not is_idempotent(e):
            raise FilterError("family must consist of nonzero idempotents")
    for i in range(len(fam)):
        for j in range(i + 1, len(fam)):
            if is_zero(mul(g, fam[i], fam[j])):
                raise FilterError("family is not directed")
    deepest = max(fam, key=lambda e: len(e.gamma.steps))
    mu0 = epath_of(g, deepest)
    same = [epath_of(g, e) for e in fam if e.gamma == deepest.gamma]
    if g.is_free(mu0.p):
        sup = tuple(max(m.tail[j] for m in same) for j in range(g.k(mu0.p)))
        return SemifinitePath(mu0.gamma, mu0.p, FreeTail(sup))
    longest = max((tuple(m.tail) for m in same), key=len)
    return SemifinitePath(mu0.gamma, mu0.p, RegTail(longest))


# -- ultrafilters and separation -----------------------------------------


def is_ultrafilter(g: SeparatedGraph, mu: SemifinitePath) -> bool:
    """True iff the filter of mu is an ultrafilter (equivalently tight),
    which happens exactly when mu is infinite."""
    return is_infinite(mu)


def separation_witness(g: SeparatedGraph, mu: SemifinitePath):
    """(X, Y) with X inside the filter of mu such that no infinite path's
    filter contains all of X while avoiding all of Y."""
    if is_infinite(mu):
        raise FilterError("separation witness exists only for non-infinite paths")
    if isinstance(mu.tail, FreeTail):
        i0 = next(i for i, x in enumerate(mu.tail.k, start=1) if x != INF)
        tail0 = tuple(
            mu.tail.k[j - 1] if j == i0 else 0 for j in range(1, g.k(mu.p) + 1)
        )
        x = idem_of(g, EPath(mu.gamma, mu.p, tail0))
        return [x], simple_expand(g, x, i0)
    x = idem_of(g, EPath(mu.gamma, mu.p, tuple(mu.tail.path)))
    return [x], simple_expand(g, x)


def extend_to_infinite(g: SeparatedGraph, mu: SemifinitePath) -> SemifinitePath:
    """An infinite path whose filter strictly contains that of mu."""
    if is_infinite(mu):
        raise FilterError("path is already infinite")
    if isinstance(mu.tail, FreeTail):
        return SemifinitePath(mu.gamma, mu.p, FreeTail((INF,) * g.k(mu.p)))
    v = _reg_end(g, cpath_range(g, mu.gamma), mu.tail.path)
    cycle = _cycle_at(g, v)
    prefix, cycle = canonical_periodic(tuple(mu.tail.path), cycle)
    return SemifinitePath(mu.gamma, mu.p, PerTail(prefix, cycle))


def _cycle_at(g: SeparatedGraph, v: str) -> tuple[str, ...]:
    """A shortest internal cycle through v (exists: the component is
    strongly connected with at least one vertex having out-degree >= 2)."""
    frontier = [(v, ())]
    seen = set()
    while frontier:
        nxt = []
        for at, path in frontier:
            for e in g.out_edges(at):
                if e.rng == v:
                    return path + (e.name,)
                if e.rng not in seen:
                    seen.add(e.rng)
                    nxt.append((e.rng, path + (e.name,)))
        frontier = nxt
    raise FilterError(f"no internal cycle through {v}")


def canonical_periodic(prefix, cycle):
    """Primitive cycle, shortest prefix: the canonical form of an
    eventually-periodic tail."""
    prefix, cycle = tuple(prefix), tuple(cycle)
    for d in range(1, len(cycle)):
        if len(cycle) % d == 0 and cycle == cycle[:d] * (len(cycle) // d):
            cycle = cycle[:d]
            break
    while prefix and prefix[-1] == cycle[-1]:
        prefix = prefix[:-1]
        cycle = cycle[-1:] + cycle[:-1]
    return prefix, cycle


# -- bounded enumerations ------------------------------------------------


def _internal_paths_from(g: SeparatedGraph, start: str, max_len: int):
    yield ()
    if max_len == 0:
        return
    for edge in g.out_edges(start):
        for rest in _internal_paths_from(g, edge.rng, max_len - 1):
            yield (edge.name,) + rest


def enumerate_semifinite(g: SeparatedGraph, start: str, bounds: Bounds):
    """All semifinite paths from a vertex within the bounds; eventually
    periodic tails appear in canonical form only."""
    for gamma in enumerate_cpaths(g, start, bounds):
        v = cpath_range(g, gamma)
        p = g.prime_of_vertex(v)
        if g.is_free(p):
            choices = list(range(bounds.max_exp + 1)) + [INF]
            for k in product(choices, repeat=g.k(p)):
                yield SemifinitePath(gamma, p, FreeTail(k))
        else:
            for path in _internal_paths_from(g, v, bounds.max_len):
                yield SemifinitePath(gamma, p, RegTail(path))
                end = _reg_end(g, v, path)
                for cyc in _internal_paths_from(g, end, bounds.max_len):
                    if cyc and _reg_end(g, end, cyc) == end:
                        if canonical_periodic(path, cyc) == (path, cyc):
                            yield SemifinitePath(gamma, p, PerTail(path, cyc))


def enumerate_infinite(g: SeparatedGraph, start: str, bounds: Bounds):
    for mu in enumerate_semifinite(g, start, bounds):
        if is_infinite(mu):
            yield mu
