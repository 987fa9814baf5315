"""The idempotent semilattice and its cylinder-set Boolean algebra.

Nonzero idempotents correspond bijectively to E-paths (a descending c-path
prefix plus a finite tail in the terminal component).  Compact-open subsets
of the path space are finite disjoint unions of cylinders Z(mu), kept in a
canonical sorted form so that equality is decidable.  Subtraction descends
by simple expansions directed at the subtrahend, which reproduces the
explicit cylinder decompositions.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .graph import SeparatedGraph
from .semigroup import (
    CPath,
    Element,
    FreeBody,
    FreeStep,
    Monomial,
    RegBody,
    RegularStep,
    Triple,
    WordError,
    cpath_edge_len,
    cpath_range,
    is_idempotent,
    is_zero,
    mul,
    trivial_cpath,
    validate_element,
)


class LatticeError(Exception):
    """Raised on precondition violations in lattice operations."""


# -- E-paths -------------------------------------------------------------


@dataclass(frozen=True)
class EPath:
    """gamma descends into the component of prime p; tail is a vector of
    loop exponents (free p) or an internal path (regular p)."""

    gamma: CPath
    p: str
    tail: tuple


@dataclass(frozen=True)
class Bounds:
    """Size limits for finite enumerations of paths and idempotents."""

    max_depth: int = 2
    max_exp: int = 6
    max_len: int = 8


def epath_of(g: SeparatedGraph, e: Element) -> EPath:
    if not is_idempotent(e):
        raise LatticeError("epath_of needs a nonzero idempotent")
    b = e.m.body
    tail = b.k if isinstance(b, FreeBody) else b.gamma
    return EPath(e.gamma, e.m.p, tail)


def idem_of(g: SeparatedGraph, mu: EPath) -> Element:
    v = cpath_range(g, mu.gamma)
    if g.prime_of_vertex(v) != mu.p:
        raise LatticeError(f"E-path prefix ends at {v}, not in {mu.p}")
    if g.is_free(mu.p):
        if len(mu.tail) != g.k(mu.p):
            raise LatticeError("free tail length does not match prime")
        m = Monomial(mu.p, (), FreeBody(tuple(mu.tail), tuple(mu.tail)))
    else:
        m = Monomial(mu.p, (), RegBody(tuple(mu.tail), tuple(mu.tail), v, v))
    e = Triple(mu.gamma, m, mu.gamma)
    validate_element(g, e)
    return e


def epath_depth(mu: EPath) -> int:
    return len(mu.gamma.steps)


def _step_key(s):
    if isinstance(s, FreeStep):
        return (0, s.p, s.i, s.m, s.t)
    return (1, s.p, s.path, s.connector)


def epath_key(g: SeparatedGraph, mu: EPath):
    return (
        cpath_edge_len(mu.gamma) + (sum(mu.tail) if g.is_free(mu.p) else len(mu.tail)),
        mu.gamma.start,
        tuple(_step_key(s) for s in mu.gamma.steps),
        mu.p,
        tuple(mu.tail),
    )


# -- order, meet, join ---------------------------------------------------


def _require_idem(e: Element, name: str) -> None:
    if not is_idempotent(e):
        raise LatticeError(f"{name} is not a nonzero idempotent")


def meet(g: SeparatedGraph, e: Element, f: Element) -> Element:
    _require_idem(e, "e")
    _require_idem(f, "f")
    return mul(g, e, f)


def nat_leq(g: SeparatedGraph, e: Element, f: Element) -> bool:
    return meet(g, e, f) == e


def join_free(g: SeparatedGraph, e: Element, f: Element) -> Element:
    _require_idem(e, "e")
    _require_idem(f, "f")
    if e.gamma != f.gamma or e.m.p != f.m.p:
        raise LatticeError("join_free needs identical prefixes at one prime")
    if not isinstance(e.m.body, FreeBody):
        raise LatticeError("join_free is defined at free primes only")
    k = tuple(min(a, b) for a, b in zip(e.m.body.k, f.m.body.k))
    return Triple(e.gamma, Monomial(e.m.p, (), FreeBody(k, k)), e.gamma)


# -- expansions ----------------------------------------------------------


def simple_expand(
    g: SeparatedGraph, e: Element, choice: int | None = None
) -> list[Element]:
    """Split an idempotent into its orthogonal children one level down."""
    _require_idem(e, "e")
    mu = epath_of(g, e)
    out: list[Element] = []
    if g.is_free(mu.p):
        kp = g.k(mu.p)
        if choice is None or not 1 <= choice <= kp:
            raise LatticeError(f"simple_expand at free {mu.p} needs a loop index")
        j0 = choice
        bumped = tuple(
            x + 1 if j == j0 else x for j, x in enumerate(mu.tail, start=1)
        )
        out.append(idem_of(g, EPath(mu.gamma, mu.p, bumped)))
        for t in range(1, g.g(mu.p, j0) + 1):
            step = FreeStep(mu.p, j0, mu.tail[j0 - 1], t)
            gamma = CPath(mu.gamma.start, mu.gamma.steps + (step,))
            out.append(_trivial_idem_at(g, gamma))
    else:
        if choice is not None:
            raise LatticeError("simple_expand at a regular prime takes no choice")
        v = _reg_tail_end(g, mu)
        for edge in g.out_edges(v):
            out.append(idem_of(g, EPath(mu.gamma, mu.p, mu.tail + (edge.name,))))
        for conn in g.out_connectors(v):
            step = RegularStep(mu.p, tuple(mu.tail), conn.name)
            gamma = CPath(mu.gamma.start, mu.gamma.steps + (step,))
            out.append(_trivial_idem_at(g, gamma))
    return out


def _trivial_idem_at(g: SeparatedGraph, gamma: CPath) -> Element:
    v = cpath_range(g, gamma)
    p = g.prime_of_vertex(v)
    tail = (0,) * g.k(p) if g.is_free(p) else ()
    return idem_of(g, EPath(gamma, p, tail))


def _reg_tail_end(g: SeparatedGraph, mu: EPath) -> str:
    v = cpath_range(g, mu.gamma)
    for name in mu.tail:
        v = g.edge(name).rng
    return v


Script = list[tuple[int, int | None]]


def expand(g: SeparatedGraph, e: Element, script: Script) -> list[Element]:
    """Replay a script of (position, choice) simple expansions."""
    out = [e]
    for pos, choice in script:
        if not 0 <= pos < len(out):
            raise LatticeError(f"script position {pos} out of range")
        out[pos : pos + 1] = simple_expand(g, out[pos], choice)
    return out


# -- compact opens -------------------------------------------------------


@dataclass(frozen=True)
class CompactOpen:
    """A finite disjoint union of cylinders, canonically sorted."""

    cyls: tuple[EPath, ...]


def co_of(g: SeparatedGraph, *elements: Element) -> CompactOpen:
    """The union of the cylinders of the given idempotents."""
    out = CompactOpen(())
    for e in elements:
        out = co_union(g, out, CompactOpen((epath_of(g, e),)))
    return out


def _normalize(g: SeparatedGraph, cyls) -> CompactOpen:
    return CompactOpen(tuple(sorted(cyls, key=lambda mu: epath_key(g, mu))))


def _cyl_meet(g: SeparatedGraph, mu: EPath, rho: EPath) -> EPath | None:
    m = mul(g, idem_of(g, mu), idem_of(g, rho))
    return None if is_zero(m) else epath_of(g, m)


def _cyl_subtract(g: SeparatedGraph, mu: EPath, rho: EPath) -> list[EPath]:
    """Z(mu) minus Z(rho) as disjoint cylinders, by directed expansion."""
    e = idem_of(g, mu)
    f = idem_of(g, rho)
    mt = mul(g, e, f)
    if is_zero(mt):
        return [mu]
    if mt == e:
        return []
    target = epath_of(g, mt)
    choice = _direction(g, mu, target) if g.is_free(mu.p) else None
    out: list[EPath] = []
    for child in simple_expand(g, e, choice):
        out.extend(_cyl_subtract(g, epath_of(g, child), rho))
    return out


def _direction(g: SeparatedGraph, mu: EPath, target: EPath) -> int:
    """The loop index along which target properly extends mu."""
    n = len(mu.gamma.steps)
    if len(target.gamma.steps) > n:
        step = target.gamma.steps[n]
        assert isinstance(step, FreeStep)
        return step.i
    for j, (a, b) in enumerate(zip(mu.tail, target.tail), start=1):
        if b > a:
            return j
    raise LatticeError("no expansion direction: target does not extend mu")


def co_intersect(g: SeparatedGraph, a: CompactOpen, b: CompactOpen) -> CompactOpen:
    out = []
    for mu in a.cyls:
        for rho in b.cyls:
            m = _cyl_meet(g, mu, rho)
            if m is not None:
                out.append(m)
    return _normalize(g, out)


def co_subtract(g: SeparatedGraph, a: CompactOpen, b: CompactOpen) -> CompactOpen:
    out = []
    for mu in a.cyls:
        pieces = [mu]
        for rho in b.cyls:
            pieces = [q for piece in pieces for q in _cyl_subtract(g, piece, rho)]
        out.extend(pieces)
    return _normalize(g, out)


def co_union(g: SeparatedGraph, a: CompactOpen, b: CompactOpen) -> CompactOpen:
    extra = co_subtract(g, b, a)
    return _normalize(g, a.cyls + extra.cyls)


def co_is_empty(a: CompactOpen) -> bool:
    return not a.cyls


def co_eq(g: SeparatedGraph, a: CompactOpen, b: CompactOpen) -> bool:
    return co_is_empty(co_subtract(g, a, b)) and co_is_empty(co_subtract(g, b, a))


# -- covers --------------------------------------------------------------


def is_orthogonal_cover(g: SeparatedGraph, e: Element, sigma) -> bool:
    _require_idem(e, "e")
    sigma = list(sigma)
    for f in sigma:
        if not is_idempotent(f) or not nat_leq(g, f, e):
            return False
    for i in range(len(sigma)):
        for j in range(i + 1, len(sigma)):
            if not is_zero(mul(g, sigma[i], sigma[j])):
                return False
    covered = _normalize(g, [epath_of(g, f) for f in sigma])
    return co_is_empty(co_subtract(g, co_of(g, e), covered))


def orthogonalize_cover(g: SeparatedGraph, e: Element, sigma) -> list[Element]:
    """Turn a finite cover into an orthogonal one: drop the smaller of a
    comparable overlapping pair, join a non-comparable free pair."""
    _require_idem(e, "e")
    sigma = list(sigma)
    for f in sigma:
        _require_idem(f, "cover member")
        if not nat_leq(g, f, e):
            raise LatticeError("cover member not below e")
    union = _normalize(g, ())
    for f in sigma:
        union = co_union(g, union, co_of(g, f))
    if not co_eq(g, union, co_of(g, e)):
        raise LatticeError("input is not a cover of e")
    while True:
        pair = None
        for i in range(len(sigma)):
            for j in range(i + 1, len(sigma)):
                if not is_zero(mul(g, sigma[i], sigma[j])):
                    pair = (i, j)
                    break
            if pair:
                break
        if pair is None:
            return sigma
        i, j = pair
        f, h = sigma[i], sigma[j]
        if nat_leq(g, f, h):
            del sigma[i]
        elif nat_leq(g, h, f):
            del sigma[j]
        else:
            joined = join_free(g, f, h)
            del sigma[j]
            sigma[i] = joined


def cover_to_expansion(g: SeparatedGraph, e: Element, sigma) -> Script:
    """Find a script with expand(e, script) == sigma as a set."""
    sigma = list(sigma)
    if not is_orthogonal_cover(g, e, sigma):
        raise LatticeError("not an orthogonal cover")
    entries: list[Element] = [e]
    targets: list[list[Element]] = [sigma]
    script: Script = []
    while True:
        pos = next(
            (i for i, x in enumerate(entries) if targets[i] != [x]),
            None,
        )
        if pos is None:
            return script
        x = entries[pos]
        goal = targets[pos]
        choice = _cover_direction(g, x, goal)
        children = simple_expand(g, x, choice)
        parts: list[list[Element]] = [[] for _ in children]
        for s in goal:
            owner = next(
                (ci for ci, c in enumerate(children) if nat_leq(g, s, c)), None
            )
            if owner is None:
                raise LatticeError("cover member crosses expansion children")
            parts[owner].append(s)
        script.append((pos, choice))
        entries[pos : pos + 1] = children
        targets[pos : pos + 1] = parts


def _cover_direction(g: SeparatedGraph, x: Element, goal) -> int | None:
    mu = epath_of(g, x)
    if not g.is_free(mu.p):
        return None
    same = [s for s in goal if epath_of(g, s).gamma == mu.gamma]
    if len(same) != 1:
        raise LatticeError("expected a unique member over the free prefix")
    return _direction(g, mu, epath_of(g, same[0]))


# -- bounded enumeration -------------------------------------------------


def enumerate_cpaths(g: SeparatedGraph, start: str, bounds: Bounds):
    """All descending c-paths from a vertex, within the bounds."""

    def rec(at: str, depth: int):
        yield ()
        if depth >= bounds.max_depth:
            return
        p = g.prime_of_vertex(at)
        if g.is_free(p):
            for i in range(1, g.k(p) + 1):
                for m in range(bounds.max_exp + 1):
                    for t in range(1, g.g(p, i) + 1):
                        step = FreeStep(p, i, m, t)
                        for rest in rec(g.beta_target(p, i, t), depth + 1):
                            yield (step,) + rest
        else:
            for path in _internal_paths(g, at, bounds.max_len):
                end = at
                for name in path:
                    end = g.edge(name).rng
                for conn in g.out_connectors(end):
                    step = RegularStep(p, path, conn.name)
                    for rest in rec(conn.rng, depth + 1):
                        yield (step,) + rest

    for steps in rec(start, 0):
        yield CPath(start, steps)


def _internal_paths(g: SeparatedGraph, start: str, max_len: int):
    yield ()
    if max_len == 0:
        return
    for edge in g.out_edges(start):
        for rest in _internal_paths(g, edge.rng, max_len - 1):
            yield (edge.name,) + rest


def enumerate_epaths(g: SeparatedGraph, start: str, bounds: Bounds):
    """All E-paths (nonzero idempotents) from a vertex, within the bounds."""
    for gamma in enumerate_cpaths(g, start, bounds):
        v = cpath_range(g, gamma)
        p = g.prime_of_vertex(v)
        if g.is_free(p):
            for tail in product(range(bounds.max_exp + 1), repeat=g.k(p)):
                yield EPath(gamma, p, tail)
        else:
            for tail in _internal_paths(g, v, bounds.max_len):
                yield EPath(gamma, p, tail)


def enumerate_idempotents(g: SeparatedGraph, bounds: Bounds):
    for v in sorted(g.vertex_prime):
        for mu in enumerate_epaths(g, v, bounds):
            yield idem_of(g, mu)
