"""The tight groupoid, concretely: germs between infinite paths.

A germ is a triple (x, n, y) of infinite paths ending at the same prime
with a weight n = (n1, n2): n1 collects t-variable exponents and n2 the
difference of lengths of the initial segments in a common-tail
decomposition x = gamma.lam, y = nu.lam.  germ_of reduces a pair (s, x) to
this form by absorbing the c-path part of x into s; in_bisection checks
membership in the basic open set Z(s) structurally, by stripping prefixes
and transporting the t-part, independently of germ_of's reduction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph import SeparatedGraph
from .filters import (
    FilterError,
    FreeTail,
    PerTail,
    SemifinitePath,
    canonical_periodic,
    filter_contains,
    is_infinite,
)
from .lattice import CompactOpen, EPath, co_of, idem_of
from .semigroup import (
    CPath,
    Element,
    FreeBody,
    cpath_edge_len,
    cpath_is_prefix,
    cpath_range,
    is_zero,
    mono_range,
    mul,
    star,
    translate,
    ttuple,
)


class GroupoidError(Exception):
    """Raised on non-composable germs or precondition violations."""


@dataclass(frozen=True)
class GermWeight:
    """(n1, n2): sparse t-exponents and a trimmed length-difference vector."""

    n1: tuple[tuple[int, int], ...] = ()
    n2: tuple[int, ...] = ()


ZERO_WEIGHT = GermWeight()


def _trim(seq) -> tuple[int, ...]:
    out = list(seq)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def weight_add(a: GermWeight, b: GermWeight) -> GermWeight:
    n1 = dict(a.n1)
    for i, d in b.n1:
        n1[i] = n1.get(i, 0) + d
    la, lb = list(a.n2), list(b.n2)
    la += [0] * (len(lb) - len(la))
    lb += [0] * (len(la) - len(lb))
    return GermWeight(ttuple(n1), _trim(x + y for x, y in zip(la, lb)))


def weight_neg(a: GermWeight) -> GermWeight:
    return GermWeight(ttuple({i: -d for i, d in a.n1}), tuple(-x for x in a.n2))


@dataclass(frozen=True)
class Germ:
    x: SemifinitePath
    weight: GermWeight
    y: SemifinitePath
    witness: tuple[EPath, EPath] | None = field(default=None, compare=False)


# -- infinite-path canonical form ----------------------------------------


def canonical_path(g: SeparatedGraph, mu: SemifinitePath) -> SemifinitePath:
    if isinstance(mu.tail, PerTail):
        prefix, cycle = canonical_periodic(mu.tail.prefix, mu.tail.cycle)
        return SemifinitePath(mu.gamma, mu.p, PerTail(prefix, cycle))
    return mu


def _unroll(tail: PerTail, n: int) -> tuple[str, ...]:
    reps = max(1, -(-max(0, n - len(tail.prefix)) // len(tail.cycle)))
    return tail.prefix + tail.cycle * reps


def _strip_tail(tail: PerTail, lam) -> PerTail | None:
    """The remainder of the tail after an initial finite path, or None."""
    lam = tuple(lam)
    u = _unroll(tail, len(lam))
    if u[: len(lam)] != lam:
        return None
    return PerTail(u[len(lam) :], tail.cycle)


def _prepend_tail(lam, tail: PerTail) -> PerTail:
    return PerTail(tuple(lam) + tail.prefix, tail.cycle)


# -- weights from witnesses ----------------------------------------------


def norm_length(g: SeparatedGraph, mu: EPath) -> tuple[int, ...]:
    """|mu|_infinity: per-loop lengths at a free terminal prime, total
    length at a regular one (trailing zeros dropped)."""
    base = cpath_edge_len(mu.gamma)
    if g.is_free(mu.p):
        return tuple(base + t for t in mu.tail)
    return (base + len(mu.tail),)


def _n2_of(g: SeparatedGraph, gpart: EPath, npart: EPath) -> tuple[int, ...]:
    a = list(norm_length(g, gpart))
    b = list(norm_length(g, npart))
    a += [0] * (len(b) - len(a))
    b += [0] * (len(a) - len(b))
    return _trim(x - y for x, y in zip(a, b))


# -- groupoid structure --------------------------------------------------


def source(germ: Germ) -> SemifinitePath:
    return germ.y


def range_(germ: Germ) -> SemifinitePath:
    return germ.x


def unit(g: SeparatedGraph, x: SemifinitePath) -> Germ:
    x = canonical_path(g, x)
    return Germ(x, ZERO_WEIGHT, x, None)


def inverse(germ: Germ) -> Germ:
    w = None
    if germ.witness is not None:
        w = (germ.witness[1], germ.witness[0])
    return Germ(germ.y, weight_neg(germ.weight), germ.x, w)


def compose(g: SeparatedGraph, g1: Germ, g2: Germ) -> Germ:
    if g1.y != g2.x:
        raise GroupoidError("germs are not composable")
    return Germ(g1.x, weight_add(g1.weight, g2.weight), g2.y, None)


# -- germ_of -------------------------------------------------------------


def germ_of(g: SeparatedGraph, s: Element, x: SemifinitePath) -> Germ:
    """The germ of s at the infinite path x in its source cylinder."""
    if is_zero(s):
        raise GroupoidError("Zero acts nowhere")
    x = canonical_path(g, x)
    if not is_infinite(x):
        raise GroupoidError("germs live over infinite paths")
    if not filter_contains(g, x, mul(g, star(g, s), s)):
        raise GroupoidError("x is not in the source cylinder of s")
    absorber = idem_of(g, _trivial_epath(g, x))
    sp = mul(g, s, absorber)
    if is_zero(sp) or sp.eta != x.gamma:
        raise GroupoidError("absorption failed; x not in the source cylinder")
    m = sp.m
    n1 = m.tpart
    if isinstance(m.body, FreeBody):
        gpart = EPath(sp.gamma, m.p, m.body.k)
        npart = EPath(x.gamma, m.p, m.body.l)
        rx = SemifinitePath(sp.gamma, m.p, x.tail)
    else:
        x0 = _strip_tail(x.tail, m.body.nu)
        if x0 is None:
            raise GroupoidError("x does not extend the body of s")
        gpart = EPath(sp.gamma, m.p, m.body.gamma)
        npart = EPath(x.gamma, m.p, m.body.nu)
        rx = SemifinitePath(sp.gamma, m.p, _prepend_tail(m.body.gamma, x0))
    weight = GermWeight(n1, _n2_of(g, gpart, npart))
    return Germ(canonical_path(g, rx), weight, x, (gpart, npart))


def _trivial_epath(g: SeparatedGraph, x: SemifinitePath) -> EPath:
    tail = (0,) * g.k(x.p) if g.is_free(x.p) else ()
    return EPath(x.gamma, x.p, tail)


# -- membership in basic opens -------------------------------------------


def in_bisection(g: SeparatedGraph, germ: Germ, s: Element) -> bool:
    """Whether the germ lies in Z(s), checked against the structural
    description of Z(s) (prefix stripping plus t-part transport)."""
    if is_zero(s):
        return False
    x = canonical_path(g, germ.x)
    y = canonical_path(g, germ.y)
    if not cpath_is_prefix(s.gamma, x.gamma) or not cpath_is_prefix(s.eta, y.gamma):
        return False
    xs = x.gamma.steps[len(s.gamma.steps) :]
    ys = y.gamma.steps[len(s.eta.steps) :]
    m = s.m
    if not xs and not ys:
        if x.p != m.p or y.p != m.p:
            return False
        if isinstance(m.body, FreeBody):
            gpart = EPath(x.gamma, m.p, m.body.k)
            npart = EPath(y.gamma, m.p, m.body.l)
        else:
            x0 = _strip_tail(y.tail, m.body.nu)
            if x0 is None:
                return False
            expected = canonical_path(
                g, SemifinitePath(x.gamma, m.p, _prepend_tail(m.body.gamma, x0))
            )
            if x != expected:
                return False
            gpart = EPath(x.gamma, m.p, m.body.gamma)
            npart = EPath(y.gamma, m.p, m.body.nu)
        return germ.weight == GermWeight(m.tpart, _n2_of(g, gpart, npart))
    if not ys:
        return False
    tr = translate(g, m, CPath(mono_range(g, m), ys))
    if tr is None:
        return False
    eta_tilde, phi = tr
    if xs != eta_tilde.steps:
        return False
    if x.p != y.p or x.tail != y.tail:
        return False
    gpart = _trivial_epath(g, x)
    npart = _trivial_epath(g, y)
    return germ.weight == GermWeight(ttuple(phi), _n2_of(g, gpart, npart))


# -- bisections ----------------------------------------------------------


def bisection_endpoints(
    g: SeparatedGraph, s: Element
) -> tuple[CompactOpen, CompactOpen]:
    if is_zero(s):
        raise GroupoidError("Zero has no bisection")
    return (co_of(g, mul(g, star(g, s), s)), co_of(g, mul(g, s, star(g, s))))


def is_bisection_family(g: SeparatedGraph, fam) -> bool:
    fam = [s for s in fam if not is_zero(s)]
    srcs = [mul(g, star(g, s), s) for s in fam]
    rngs = [mul(g, s, star(g, s)) for s in fam]
    for group in (srcs, rngs):
        for i in range(len(group)):
            for j in range(i + 1, len(group)):
                if not is_zero(mul(g, group[i], group[j])):
                    return False
    return True
