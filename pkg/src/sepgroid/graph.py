"""Adaptable separated graphs: parsing, validation, and the component poset.

A separated graph here is given by its transitive components ("primes"),
each either free (a single vertex carrying k loops and, per loop index,
a list of connectors into strictly lower components) or regular (a
strongly connected graph with trivial separation, out-degree at least 2,
plus connectors downward).  The order on primes is derived from
reachability and validated against the declared structure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations


class GraphError(Exception):
    """Raised on malformed graph files or references to unknown items."""


@dataclass(frozen=True)
class FreePrime:
    name: str
    k: int
    # targets[i-1] is the tuple of connector target vertices for class i,
    # so g(p, i) = len(targets[i-1]).
    targets: tuple[tuple[str, ...], ...]


@dataclass(frozen=True)
class InternalEdge:
    name: str
    src: str
    rng: str


@dataclass(frozen=True)
class RegularConnector:
    name: str
    src: str
    rng: str


@dataclass(frozen=True)
class RegularPrime:
    name: str
    vertices: tuple[str, ...]
    edges: tuple[InternalEdge, ...]
    connectors: tuple[RegularConnector, ...]


@dataclass(frozen=True)
class Violation:
    condition: str
    item: str

    def __str__(self):
        return f"{self.condition}: {self.item}"


@dataclass
class SeparatedGraph:
    name: str
    primes: list[FreePrime | RegularPrime]

    # Derived lookups, filled in __post_init__.
    prime_by_name: dict = field(default_factory=dict, repr=False)
    vertex_prime: dict = field(default_factory=dict, repr=False)
    edge_by_name: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        for p in self.primes:
            if p.name in self.prime_by_name:
                raise GraphError(f"duplicate prime name {p.name!r}")
            self.prime_by_name[p.name] = p
        for p in self.primes:
            if isinstance(p, FreePrime):
                self._add_vertex(p.name, p.name)
            else:
                for v in p.vertices:
                    self._add_vertex(v, p.name)
        for p in self.primes:
            if isinstance(p, RegularPrime):
                for e in list(p.edges) + list(p.connectors):
                    if e.name in self.edge_by_name or e.name in self.vertex_prime:
                        raise GraphError(f"duplicate name {e.name!r}")
                    self.edge_by_name[e.name] = e

    def _add_vertex(self, v, prime_name):
        if v in self.vertex_prime or v in self.prime_by_name and v != prime_name:
            raise GraphError(f"duplicate vertex name {v!r}")
        self.vertex_prime[v] = prime_name

    # -- basic accessors -------------------------------------------------

    def vertices(self) -> list[str]:
        return list(self.vertex_prime)

    def prime_of_vertex(self, v: str) -> str:
        try:
            return self.vertex_prime[v]
        except KeyError:
            raise GraphError(f"unknown vertex {v!r}") from None

    def prime(self, name: str) -> FreePrime | RegularPrime:
        try:
            return self.prime_by_name[name]
        except KeyError:
            raise GraphError(f"unknown prime {name!r}") from None

    def is_free(self, prime_name: str) -> bool:
        return isinstance(self.prime(prime_name), FreePrime)

    def k(self, prime_name: str) -> int:
        p = self.prime(prime_name)
        if not isinstance(p, FreePrime):
            raise GraphError(f"{prime_name!r} is not a free prime")
        return p.k

    def g(self, prime_name: str, i: int) -> int:
        p = self.prime(prime_name)
        if not isinstance(p, FreePrime) or not 1 <= i <= p.k:
            raise GraphError(f"no loop class {i} at {prime_name!r}")
        return len(p.targets[i - 1])

    def beta_target(self, prime_name: str, i: int, t: int) -> str:
        p = self.prime(prime_name)
        if not isinstance(p, FreePrime) or not 1 <= i <= p.k:
            raise GraphError(f"no loop class {i} at {prime_name!r}")
        if not 1 <= t <= len(p.targets[i - 1]):
            raise GraphError(f"no connector ({prime_name},{i},{t})")
        return p.targets[i - 1][t - 1]

    def edge(self, name: str) -> InternalEdge | RegularConnector:
        try:
            return self.edge_by_name[name]
        except KeyError:
            raise GraphError(f"unknown edge {name!r}") from None

    def out_edges(self, v: str) -> list[InternalEdge]:
        """Internal edges of the regular component of v with source v."""
        p = self.prime(self.prime_of_vertex(v))
        if isinstance(p, FreePrime):
            return []
        return [e for e in p.edges if e.src == v]

    def out_connectors(self, v: str) -> list[RegularConnector]:
        p = self.prime(self.prime_of_vertex(v))
        if isinstance(p, FreePrime):
            return []
        return [c for c in p.connectors if c.src == v]

    def sigma(self, prime_name: str, i: int) -> int:
        """The shift i -> i + k(p) - 1 applied when a t crosses a connector."""
        return i + self.k(prime_name) - 1

    def sigma_drop(self, prime_name: str, dropped: int, j: int) -> int:
        """The order-preserving bijection {1..k}\\{dropped} -> {1..k-1}."""
        if j == dropped:
            raise GraphError("sigma_drop applied to the dropped index")
        return j if j < dropped else j - 1

    # -- reachability ----------------------------------------------------

    def _component_successors(self, prime_name: str) -> set[str]:
        """Primes directly reachable from prime_name by a connector."""
        p = self.prime(prime_name)
        if isinstance(p, FreePrime):
            return {
                self.prime_of_vertex(v) for targets in p.targets for v in targets
            }
        return {self.prime_of_vertex(c.rng) for c in p.connectors}

    def downset(self, prime_name: str) -> set[str]:
        """All primes q with q <= prime_name, including prime_name."""
        seen = {prime_name}
        stack = [prime_name]
        while stack:
            for q in self._component_successors(stack.pop()):
                if q not in seen:
                    seen.add(q)
                    stack.append(q)
        return seen


# -- parsing -------------------------------------------------------------


def parse_graph(text: str) -> SeparatedGraph:
    """Parse the line-oriented graph file format.  No validation beyond syntax."""
    name = None
    primes: list[FreePrime | RegularPrime] = []
    # Mutable builders for the prime currently being read.
    cur = None  # dict for either kind

    def flush():
        nonlocal cur
        if cur is None:
            return
        if cur["kind"] == "free":
            got = [i for i, _ in cur["targets"]]
            want = list(range(1, cur["k"] + 1))
            if sorted(got) != want:
                raise GraphError(
                    f"free prime {cur['name']!r}: expected X lines for classes "
                    f"{want}, got {sorted(got)}"
                )
            by_index = dict(cur["targets"])
            primes.append(
                FreePrime(
                    cur["name"],
                    cur["k"],
                    tuple(tuple(by_index[i]) for i in want),
                )
            )
        else:
            primes.append(
                RegularPrime(
                    cur["name"],
                    tuple(cur["vertices"]),
                    tuple(cur["edges"]),
                    tuple(cur["connectors"]),
                )
            )
        cur = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            head = parts[0]
            if head == "graph":
                (name,) = parts[1:]
            elif head == "free":
                flush()
                pname, kspec = parts[1:]
                if not kspec.startswith("k="):
                    raise GraphError("expected k=<int>")
                cur = {"kind": "free", "name": pname, "k": int(kspec[2:]), "targets": []}
            elif head == "regular":
                flush()
                (pname,) = parts[1:]
                cur = {
                    "kind": "regular",
                    "name": pname,
                    "vertices": [],
                    "edges": [],
                    "connectors": [],
                }
            elif head == "X":
                if cur is None or cur["kind"] != "free":
                    raise GraphError("X line outside a free prime")
                if parts[2] != "->" or len(parts) < 4:
                    raise GraphError("expected: X I -> V1 [V2 ...]")
                i = int(parts[1])
                if not 1 <= i <= cur["k"]:
                    raise GraphError(f"class index {i} out of range 1..{cur['k']}")
                cur["targets"].append((i, parts[3:]))
            elif head == "vertex":
                if cur is None or cur["kind"] != "regular":
                    raise GraphError("vertex line outside a regular prime")
                cur["vertices"].extend(parts[1:])
            elif head in ("edge", "connector"):
                if cur is None or cur["kind"] != "regular":
                    raise GraphError(f"{head} line outside a regular prime")
                if len(parts) != 5 or not parts[1].endswith(":") or parts[3] != "->":
                    raise GraphError(f"expected: {head} NAME: V -> W")
                ename = parts[1][:-1]
                if head == "edge":
                    cur["edges"].append(InternalEdge(ename, parts[2], parts[4]))
                else:
                    cur["connectors"].append(RegularConnector(ename, parts[2], parts[4]))
            else:
                raise GraphError(f"unknown directive {head!r}")
        except (ValueError, GraphError) as exc:
            raise GraphError(f"line {lineno}: {exc}") from None
    flush()
    if name is None:
        raise GraphError("missing 'graph NAME' line")
    g = SeparatedGraph(name, primes)
    _check_references(g)
    return g


def _check_references(g: SeparatedGraph):
    for p in g.primes:
        if isinstance(p, FreePrime):
            for targets in p.targets:
                for v in targets:
                    if v not in g.vertex_prime:
                        raise GraphError(f"dangling connector target {v!r} at {p.name!r}")
        else:
            vs = set(p.vertices)
            for e in p.edges:
                if e.src not in vs or e.rng not in vs:
                    raise GraphError(f"edge {e.name!r} endpoint outside {p.name!r}")
            for c in p.connectors:
                if c.src not in vs:
                    raise GraphError(f"connector {c.name!r} source outside {p.name!r}")
                if c.rng not in g.vertex_prime:
                    raise GraphError(f"dangling connector target {c.rng!r}")


# -- validation ----------------------------------------------------------


def validate_adaptable(g: SeparatedGraph) -> list[Violation]:
    """Check the adaptability axioms.  Empty list means the graph is adaptable."""
    out: list[Violation] = []

    for p in g.primes:
        if isinstance(p, FreePrime):
            for i, targets in enumerate(p.targets, start=1):
                if not targets:
                    out.append(Violation("g(p,i) >= 1", f"{p.name} class {i}"))
                for v in targets:
                    q = g.prime_of_vertex(v)
                    if q == p.name:
                        out.append(
                            Violation("connector target strictly lower", f"{p.name} -> {v}")
                        )
            if p.k > 0 and not any(p.targets):
                out.append(Violation("free prime with k>=1 must reach lower", p.name))
        else:
            if not p.vertices:
                out.append(Violation("regular prime has a vertex", p.name))
                continue
            for w in p.vertices:
                deg = len([e for e in p.edges if e.src == w])
                if deg < 2:
                    out.append(Violation("|s_Ep^-1(w)| >= 2", f"{p.name}:{w}"))
            if not _strongly_connected(p):
                out.append(Violation("regular component transitive", p.name))
            for c in p.connectors:
                if g.prime_of_vertex(c.rng) == p.name:
                    out.append(
                        Violation("connector target strictly lower", f"{p.name} -> {c.rng}")
                    )

    # Reachability must induce a partial order with the declared components
    # as classes: no connector cycle back into a component, and the SCCs of
    # the full graph must be exactly the declared components.
    for p in g.primes:
        down = g.downset(p.name)
        for q in down - {p.name}:
            if p.name in g.downset(q):
                out.append(Violation("(I, <=) antisymmetric", f"{p.name} ~ {q}"))
    sccs = {frozenset(c) for c in _full_graph_sccs(g)}
    declared = set()
    for p in g.primes:
        if isinstance(p, FreePrime):
            declared.add(frozenset([p.name]))
        else:
            declared.add(frozenset(p.vertices))
    if sccs != declared:
        out.append(Violation("SCCs equal declared components", g.name))

    # Minimality clause: a free prime has k=0 iff it is minimal in (I, <=).
    for p in g.primes:
        if isinstance(p, FreePrime):
            minimal = g.downset(p.name) == {p.name}
            if (p.k == 0) != minimal:
                out.append(Violation("k(p)=0 iff p minimal", p.name))
    return out


def _strongly_connected(p: RegularPrime) -> bool:
    if len(p.vertices) == 1:
        return True
    adj = {v: [] for v in p.vertices}
    radj = {v: [] for v in p.vertices}
    for e in p.edges:
        adj[e.src].append(e.rng)
        radj[e.rng].append(e.src)

    def reach(start, nbrs):
        seen = {start}
        stack = [start]
        while stack:
            for w in nbrs[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return seen

    v0 = p.vertices[0]
    return len(reach(v0, adj)) == len(p.vertices) == len(reach(v0, radj))


def _full_graph_sccs(g: SeparatedGraph) -> list[set[str]]:
    """SCCs of the full vertex/edge graph (loops, connectors, internal edges)."""
    adj: dict[str, set[str]] = {v: set() for v in g.vertex_prime}
    for p in g.primes:
        if isinstance(p, FreePrime):
            if p.k > 0:
                adj[p.name].add(p.name)
            for targets in p.targets:
                for v in targets:
                    adj[p.name].add(v)
        else:
            for e in p.edges:
                adj[e.src].add(e.rng)
            for c in p.connectors:
                adj[c.src].add(c.rng)
    # Iterative Tarjan.
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on: set[str] = set()
    stack: list[str] = []
    out: list[set[str]] = []
    counter = [0]

    def strongconnect(root):
        work = [(root, iter(sorted(adj[root])))]
        index[root] = low[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        on.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    on.add(w)
                    work.append((w, iter(sorted(adj[w]))))
                    advanced = True
                    break
                elif w in on:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = set()
                while True:
                    w = stack.pop()
                    on.discard(w)
                    comp.add(w)
                    if w == v:
                        break
                out.append(comp)

    for v in sorted(adj):
        if v not in index:
            strongconnect(v)
    return out


# -- derived structure ---------------------------------------------------


def component_leq(g: SeparatedGraph, p: str, q: str) -> bool:
    """True iff q <= p in (I, <=), i.e. E_q is reachable from E_p."""
    g.prime(p), g.prime(q)
    return q in g.downset(p)


def hereditary_subsets(g: SeparatedGraph) -> list[frozenset[str]]:
    """All downward closed subsets of I, sorted by cardinality then name."""
    names = [p.name for p in g.primes]
    out = []
    for r in range(len(names) + 1):
        for combo in combinations(names, r):
            s = set(combo)
            if all(g.downset(p) <= s for p in combo):
                out.append(frozenset(s))
    return sorted(out, key=lambda s: (len(s), tuple(sorted(s))))


def monoid_presentation(g: SeparatedGraph) -> list[tuple[str, dict[str, int]]]:
    """One relation a_v = sum a_{r(e)} per (v, X in C_v), as (v, rhs-counts)."""
    rels: list[tuple[str, dict[str, int]]] = []
    for p in g.primes:
        if isinstance(p, FreePrime):
            for targets in p.targets:
                rhs: dict[str, int] = {p.name: 1}
                for v in targets:
                    rhs[v] = rhs.get(v, 0) + 1
                rels.append((p.name, rhs))
        else:
            for v in p.vertices:
                rhs = {}
                for e in g.out_edges(v):
                    rhs[e.rng] = rhs.get(e.rng, 0) + 1
                for c in g.out_connectors(v):
                    rhs[c.rng] = rhs.get(c.rng, 0) + 1
                rels.append((v, rhs))
    return rels
