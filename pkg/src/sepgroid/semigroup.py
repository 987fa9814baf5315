"""Normal forms and exact multiplication in the inverse semigroup of an
adaptable separated graph.

Elements are stored as triples gamma * m * eta-star where gamma and eta are
c-paths descending into the component of the monomial m.  Multiplication is
implemented through the translation operation m * eta = eta-tilde * phi,
which pushes a monomial through a c-path and leaves behind a pure-t
monomial phi.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import (
    FreePrime,
    GraphError,
    InternalEdge,
    RegularConnector,
    SeparatedGraph,
)


class WordError(Exception):
    """Raised on malformed words or generator references."""


# -- c-paths -------------------------------------------------------------


@dataclass(frozen=True)
class FreeStep:
    """alpha(p,i)^m beta(p,i,t): m loops then a connector, at free prime p."""

    p: str
    i: int
    m: int
    t: int


@dataclass(frozen=True)
class RegularStep:
    """An internal path (possibly empty) followed by a connector, at regular p."""

    p: str
    path: tuple[str, ...]
    connector: str


Step = FreeStep | RegularStep


@dataclass(frozen=True)
class CPath:
    start: str
    steps: tuple[Step, ...] = ()


def trivial_cpath(v: str) -> CPath:
    return CPath(v, ())


def step_source(g: SeparatedGraph, s: Step) -> str:
    if isinstance(s, FreeStep):
        return s.p
    if s.path:
        return g.edge(s.path[0]).src
    return g.edge(s.connector).src


def step_range(g: SeparatedGraph, s: Step) -> str:
    if isinstance(s, FreeStep):
        return g.beta_target(s.p, s.i, s.t)
    return g.edge(s.connector).rng


def step_edge_len(s: Step) -> int:
    if isinstance(s, FreeStep):
        return s.m + 1
    return len(s.path) + 1


def cpath_range(g: SeparatedGraph, c: CPath) -> str:
    if not c.steps:
        return c.start
    return step_range(g, c.steps[-1])


def cpath_edge_len(c: CPath) -> int:
    return sum(step_edge_len(s) for s in c.steps)


def cpath_concat(g: SeparatedGraph, a: CPath, b: CPath) -> CPath:
    if cpath_range(g, a) != b.start:
        raise WordError(f"cannot concatenate c-paths at {cpath_range(g, a)}/{b.start}")
    return CPath(a.start, a.steps + b.steps)


def cpath_is_prefix(pre: CPath, full: CPath) -> bool:
    return (
        pre.start == full.start
        and len(pre.steps) <= len(full.steps)
        and full.steps[: len(pre.steps)] == pre.steps
    )


def cpath_remainder(g: SeparatedGraph, pre: CPath, full: CPath) -> CPath:
    """full = pre . remainder; pre must be a prefix."""
    return CPath(cpath_range(g, pre), full.steps[len(pre.steps) :])


def validate_cpath(g: SeparatedGraph, c: CPath) -> None:
    at = c.start
    g.prime_of_vertex(at)
    for s in c.steps:
        if isinstance(s, FreeStep):
            if g.vertex_prime[at] != s.p or not g.is_free(s.p):
                raise WordError(f"free step at {s.p} does not start at {at}")
            if not (1 <= s.i <= g.k(s.p) and 0 <= s.m and 1 <= s.t <= g.g(s.p, s.i)):
                raise WordError(f"bad free step {s}")
        else:
            if g.is_free(g.vertex_prime[at]):
                raise WordError(f"regular step starting at free vertex {at}")
            if step_source(g, s) != at:
                raise WordError(f"step source mismatch at {at}")
            pos = at
            for name in s.path:
                e = g.edge(name)
                if not isinstance(e, InternalEdge) or e.src != pos:
                    raise WordError(f"bad internal path at {name}")
                pos = e.rng
            conn = g.edge(s.connector)
            if not isinstance(conn, RegularConnector) or conn.src != pos:
                raise WordError(f"bad connector {s.connector}")
        at = step_range(g, s)


# -- monomials -----------------------------------------------------------


@dataclass(frozen=True)
class FreeBody:
    k: tuple[int, ...]
    l: tuple[int, ...]


@dataclass(frozen=True)
class RegBody:
    gamma: tuple[str, ...]
    nu: tuple[str, ...]
    src: str  # s(gamma)
    rng: str  # s(nu)


@dataclass(frozen=True)
class Monomial:
    p: str
    tpart: tuple[tuple[int, int], ...]  # sorted (index, nonzero exponent)
    body: FreeBody | RegBody


def tdict(tpart) -> dict[int, int]:
    return dict(tpart)


def ttuple(d: dict[int, int]) -> tuple[tuple[int, int], ...]:
    return tuple(sorted((i, e) for i, e in d.items() if e != 0))


def trivial_monomial(g: SeparatedGraph, v: str) -> Monomial:
    p = g.prime_of_vertex(v)
    if g.is_free(p):
        z = (0,) * g.k(p)
        return Monomial(p, (), FreeBody(z, z))
    return Monomial(p, (), RegBody((), (), v, v))


def t_monomial(g: SeparatedGraph, tmap: dict[int, int], base: str) -> Monomial:
    p = g.prime_of_vertex(base)
    if g.is_free(p):
        z = (0,) * g.k(p)
        return Monomial(p, ttuple(tmap), FreeBody(z, z))
    return Monomial(p, ttuple(tmap), RegBody((), (), base, base))


def mono_source(g: SeparatedGraph, m: Monomial) -> str:
    return m.p if isinstance(m.body, FreeBody) else m.body.src


def mono_range(g: SeparatedGraph, m: Monomial) -> str:
    return m.p if isinstance(m.body, FreeBody) else m.body.rng


def star_monomial(g: SeparatedGraph, m: Monomial) -> Monomial:
    neg = ttuple({i: -d for i, d in m.tpart})
    if isinstance(m.body, FreeBody):
        return Monomial(m.p, neg, FreeBody(m.body.l, m.body.k))
    b = m.body
    return Monomial(m.p, neg, RegBody(b.nu, b.gamma, b.rng, b.src))


def mul_monomials(g: SeparatedGraph, m1: Monomial, m2: Monomial):
    """Product of two monomials at the same prime; None encodes zero."""
    if m1.p != m2.p:
        raise WordError(f"monomial primes differ: {m1.p} vs {m2.p}")
    if mono_range(g, m1) != mono_source(g, m2):
        raise WordError("monomial endpoints do not match")
    t = tdict(m1.tpart)
    for i, d in m2.tpart:
        t[i] = t.get(i, 0) + d
    if isinstance(m1.body, FreeBody):
        k1, l1 = m1.body.k, m1.body.l
        k2, l2 = m2.body.k, m2.body.l
        k3 = tuple(max(a, a + c - b) for a, b, c in zip(k1, l1, k2))
        l3 = tuple(max(d, d + b - c) for b, c, d in zip(l1, k2, l2))
        return Monomial(m1.p, ttuple(t), FreeBody(k3, l3))
    b1, b2 = m1.body, m2.body
    if b2.gamma[: len(b1.nu)] == b1.nu:
        gamma = b1.gamma + b2.gamma[len(b1.nu) :]
        nu = b2.nu
    elif b1.nu[: len(b2.gamma)] == b2.gamma:
        gamma = b1.gamma
        nu = b2.nu + b1.nu[len(b2.gamma) :]
    else:
        return None
    return Monomial(m1.p, ttuple(t), RegBody(gamma, nu, b1.src, b2.rng))


# -- elements ------------------------------------------------------------


@dataclass(frozen=True)
class Zero:
    pass


ZERO = Zero()


@dataclass(frozen=True)
class Triple:
    gamma: CPath
    m: Monomial
    eta: CPath


Element = Zero | Triple


def is_zero(e: Element) -> bool:
    return isinstance(e, Zero)


def star(g: SeparatedGraph, e: Element) -> Element:
    if is_zero(e):
        return ZERO
    return Triple(e.eta, star_monomial(g, e.m), e.gamma)


def is_idempotent(e: Element) -> bool:
    if is_zero(e):
        return False
    if e.gamma != e.eta or e.m.tpart:
        return False
    b = e.m.body
    if isinstance(b, FreeBody):
        return b.k == b.l
    return b.gamma == b.nu


def endpoints(g: SeparatedGraph, e: Element) -> tuple[str, str]:
    """(source vertex of e e*, source vertex of e* e)."""
    if is_zero(e):
        raise WordError("endpoints of Zero")
    return (e.gamma.start, e.eta.start)


# -- translation ---------------------------------------------------------


def _shift_of_steps(g: SeparatedGraph, steps) -> int:
    """Total index shift a t-variable picks up crossing these steps."""
    return sum(g.k(s.p) - 1 for s in steps if isinstance(s, FreeStep))


def translate(g: SeparatedGraph, m: Monomial, eta: CPath):
    """Rewrite m . eta as eta-tilde . phi; returns (eta_tilde, phi-dict) or
    None for zero.  phi is based at the range of eta."""
    if eta.start != mono_range(g, m):
        raise WordError("translate: eta does not start at range(m)")
    if not eta.steps:
        b = m.body
        pure = b.k == b.l == (0,) * len(b.k) if isinstance(b, FreeBody) else (
            b.gamma == b.nu == ()
        )
        if not pure:
            raise WordError("translate with trivial path needs a pure-t monomial")
        return eta, tdict(m.tpart)
    first = eta.steps[0]
    if isinstance(m.body, FreeBody):
        assert isinstance(first, FreeStep) and first.p == m.p
        i, kp = first.i, g.k(m.p)
        k, l = m.body.k, m.body.l
        if l[i - 1] > first.m:
            return None
        new_first = FreeStep(m.p, i, k[i - 1] + first.m - l[i - 1], first.t)
        phi: dict[int, int] = {}
        for i0, d in m.tpart:
            phi[i0 + kp - 1] = phi.get(i0 + kp - 1, 0) + d
        for j in range(1, kp + 1):
            if j == i:
                continue
            diff = k[j - 1] - l[j - 1]
            if diff:
                idx = g.sigma_drop(m.p, i, j)
                phi[idx] = phi.get(idx, 0) + diff
        shift = _shift_of_steps(g, eta.steps[1:])
        phi = {idx + shift: d for idx, d in phi.items() if d != 0}
        eta_tilde = CPath(m.p, (new_first,) + eta.steps[1:])
        return eta_tilde, phi
    assert isinstance(first, RegularStep) and first.p == m.p
    b = m.body
    if first.path[: len(b.nu)] != b.nu:
        return None
    new_first = RegularStep(m.p, b.gamma + first.path[len(b.nu) :], first.connector)
    shift = _shift_of_steps(g, eta.steps[1:])
    phi = {i + shift: d for i, d in m.tpart}
    eta_tilde = CPath(b.src, (new_first,) + eta.steps[1:])
    return eta_tilde, phi


# -- the product ---------------------------------------------------------


def mul(g: SeparatedGraph, e1: Element, e2: Element) -> Element:
    if is_zero(e1) or is_zero(e2):
        return ZERO
    eta1, gamma2 = e1.eta, e2.gamma
    if cpath_is_prefix(gamma2, eta1):
        rem = cpath_remainder(g, gamma2, eta1)
        if not rem.steps:
            mm = mul_monomials(g, e1.m, e2.m)
            if mm is None:
                return ZERO
            return Triple(e1.gamma, mm, e2.eta)
        tr = translate(g, star_monomial(g, e2.m), rem)
        if tr is None:
            return ZERO
        eta_tilde, phi_star = tr
        phi = {i: -d for i, d in phi_star.items()}
        mm = mul_monomials(g, e1.m, t_monomial(g, phi, cpath_range(g, rem)))
        if mm is None:
            return ZERO
        return Triple(e1.gamma, mm, cpath_concat(g, e2.eta, eta_tilde))
    if cpath_is_prefix(eta1, gamma2):
        rem = cpath_remainder(g, eta1, gamma2)
        tr = translate(g, e1.m, rem)
        if tr is None:
            return ZERO
        gamma_tilde, phi = tr
        mm = mul_monomials(g, t_monomial(g, phi, cpath_range(g, rem)), e2.m)
        if mm is None:
            return ZERO
        return Triple(cpath_concat(g, e1.gamma, gamma_tilde), mm, e2.eta)
    return ZERO


# -- word grammar --------------------------------------------------------


def _split_star(body: str) -> tuple[str, bool]:
    if body.endswith("*"):
        return body[:-1], True
    return body, False


def generator_element(g: SeparatedGraph, token: str) -> Element:
    """The canonical Element of a single generator token."""
    if token == "0":
        return ZERO
    if ":" not in token:
        raise WordError(f"bad token {token!r}")
    kind, body = token.split(":", 1)
    if kind == "v":
        v = body
        if v not in g.vertex_prime:
            raise WordError(f"unknown vertex {v!r}")
        return Triple(trivial_cpath(v), trivial_monomial(g, v), trivial_cpath(v))
    if kind == "e":
        name, starred = _split_star(body)
        e = g.edge(name)
        p = g.prime_of_vertex(e.src)
        if isinstance(e, InternalEdge):
            m = Monomial(p, (), RegBody((name,), (), e.src, e.rng))
            el = Triple(trivial_cpath(e.src), m, trivial_cpath(e.rng))
        else:
            cp = CPath(e.src, (RegularStep(p, (), name),))
            el = Triple(cp, trivial_monomial(g, e.rng), trivial_cpath(e.rng))
        return star(g, el) if starred else el
    if kind == "a":
        spec, starred = _split_star(body)
        try:
            p, j = spec.rsplit(".", 1)
            j = int(j)
        except ValueError:
            raise WordError(f"bad loop token {token!r}") from None
        kp = g.k(p)
        if not 1 <= j <= kp:
            raise WordError(f"loop index {j} out of range at {p!r}")
        k = tuple(1 if x == j else 0 for x in range(1, kp + 1))
        m = Monomial(p, (), FreeBody(k, (0,) * kp))
        el = Triple(trivial_cpath(p), m, trivial_cpath(p))
        return star(g, el) if starred else el
    if kind == "b":
        spec, starred = _split_star(body)
        try:
            p, i, t = spec.rsplit(".", 2)
            i, t = int(i), int(t)
        except ValueError:
            raise WordError(f"bad connector token {token!r}") from None
        u = g.beta_target(p, i, t)
        cp = CPath(p, (FreeStep(p, i, 0, t),))
        el = Triple(cp, trivial_monomial(g, u), trivial_cpath(u))
        return star(g, el) if starred else el
    if kind == "t":
        exp = 1
        if body.endswith("^-1"):
            body, exp = body[:-3], -1
        try:
            v, i = body.rsplit(".", 1)
            i = int(i)
        except ValueError:
            raise WordError(f"bad t token {token!r}") from None
        if v not in g.vertex_prime or i < 1:
            raise WordError(f"bad t token {token!r}")
        m = t_monomial(g, {i: exp}, v)
        return Triple(trivial_cpath(v), m, trivial_cpath(v))
    raise WordError(f"bad token {token!r}")


def parse_word(g: SeparatedGraph, text: str) -> Element:
    """Parse a whitespace-separated generator word and normalize it."""
    tokens = text.split()
    if not tokens:
        raise WordError("empty word")
    out = generator_element(g, tokens[0])
    for tok in tokens[1:]:
        out = mul(g, out, generator_element(g, tok))
    return out


# -- serialization -------------------------------------------------------


def _step_tokens(g: SeparatedGraph, s: Step, starred: bool) -> list[str]:
    if isinstance(s, FreeStep):
        a = [f"a:{s.p}.{s.i}"] * s.m
        b = [f"b:{s.p}.{s.i}.{s.t}"]
        toks = a + b
    else:
        toks = [f"e:{name}" for name in s.path] + [f"e:{s.connector}"]
    if starred:
        return [t + "*" for t in reversed(toks)]
    return toks


def _tpart_tokens(m: Monomial, base: str) -> list[str]:
    out = []
    for i, d in m.tpart:
        tok = f"t:{base}.{i}" if d > 0 else f"t:{base}.{i}^-1"
        out.extend([tok] * abs(d))
    return out


def _body_tokens(g: SeparatedGraph, m: Monomial) -> list[str]:
    b = m.body
    if isinstance(b, FreeBody):
        out = []
        for j, kj in enumerate(b.k, start=1):
            out.extend([f"a:{m.p}.{j}"] * kj)
        for j, lj in enumerate(b.l, start=1):
            out.extend([f"a:{m.p}.{j}*"] * lj)
        return out
    toks = [f"e:{name}" for name in b.gamma]
    toks.extend(f"e:{name}*" for name in reversed(b.nu))
    return toks


def element_fields(g: SeparatedGraph, e: Element) -> tuple[str, str, str, str]:
    """The four canonical fields (gamma, t-part, body, eta-star) as words."""
    if is_zero(e):
        raise WordError("Zero has no fields")
    gam = [t for s in e.gamma.steps for t in _step_tokens(g, s, False)]
    tp = _tpart_tokens(e.m, mono_source(g, e.m))
    body = _body_tokens(g, e.m)
    eta = [t for s in reversed(e.eta.steps) for t in _step_tokens(g, s, True)]
    return (" ".join(gam), " ".join(tp), " ".join(body), " ".join(eta))


def element_to_word(g: SeparatedGraph, e: Element) -> str:
    """Flat word form; parse_word of the result reproduces e."""
    if is_zero(e):
        return "0"
    toks = [t for f in element_fields(g, e) for t in f.split()]
    if not toks:
        return f"v:{e.gamma.start}"
    return " ".join(toks)


def format_element(g: SeparatedGraph, e: Element) -> str:
    if is_zero(e):
        return "0"
    f = element_fields(g, e)
    if not any(f):
        return f"v:{e.gamma.start}"
    return " | ".join(f)


def validate_element(g: SeparatedGraph, e: Element) -> None:
    """Structural invariants of a triple; raises WordError on violation."""
    if is_zero(e):
        return
    validate_cpath(g, e.gamma)
    validate_cpath(g, e.eta)
    if cpath_range(g, e.gamma) != mono_source(g, e.m):
        raise WordError("r(gamma) != source(m)")
    if cpath_range(g, e.eta) != mono_range(g, e.m):
        raise WordError("r(eta) != range(m)")
    b = e.m.body
    if isinstance(b, FreeBody):
        if not g.is_free(e.m.p) or len(b.k) != g.k(e.m.p) or len(b.l) != g.k(e.m.p):
            raise WordError("free body does not match prime")
        if any(x < 0 for x in b.k + b.l):
            raise WordError("negative exponent")
    else:
        if g.is_free(e.m.p):
            raise WordError("regular body at free prime")
        for path, src in ((b.gamma, b.src), (b.nu, b.rng)):
            pos = src
            for name in path:
                edge = g.edge(name)
                if not isinstance(edge, InternalEdge) or edge.src != pos:
                    raise WordError(f"bad body path at {name}")
                pos = edge.rng
        mid1 = b.src if not b.gamma else g.edge(b.gamma[-1]).rng
        mid2 = b.rng if not b.nu else g.edge(b.nu[-1]).rng
        if mid1 != mid2:
            raise WordError("r(gamma_m) != r(nu_m)")
    for i, d in e.m.tpart:
        if i < 1 or d == 0:
            raise WordError("bad t-part entry")
