"""Command-line interface: graph validation, word normalization, cylinder
algebra, filters, germs, and monoid computations.

Exit codes: 0 success/Yes/true, 1 No/false, 2 Unknown, 64 usage error,
65 parse/validation error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import filters as fl
from . import groupoid as gp
from . import lattice as lt
from . import monoid as mn
from . import semigroup as sg
from .graph import GraphError, SeparatedGraph, parse_graph, validate_adaptable


class UsageError(Exception):
    pass


# -- literals ------------------------------------------------------------


def parse_compact_open(g: SeparatedGraph, text: str) -> lt.CompactOpen:
    """`Z(<word>)` combined with `&` (intersect), `-` (subtract), `+`
    (union) and parentheses; `&` binds tighter."""
    tokens = _co_tokens(text)
    pos = [0]

    def peek():
        return tokens[pos[0]] if pos[0] < len(tokens) else None

    def eat(tok=None):
        t = peek()
        if t is None or (tok is not None and t != tok):
            raise UsageError(f"compact-open syntax error near token {t!r}")
        pos[0] += 1
        return t

    def atom():
        t = peek()
        if t == "(":
            eat("(")
            out = expr()
            eat(")")
            return out
        if isinstance(t, tuple) and t[0] == "Z":
            eat()
            e = sg.parse_word(g, t[1])
            if sg.is_zero(e):
                return lt.CompactOpen(())
            return lt.CompactOpen((lt.epath_of(g, e),))
        raise UsageError(f"expected Z(...) or parenthesis, got {t!r}")

    def factor():
        out = atom()
        while peek() == "&":
            eat("&")
            out = lt.co_intersect(g, out, atom())
        return out

    def expr():
        out = factor()
        while peek() in ("+", "-"):
            op = eat()
            rhs = factor()
            out = (lt.co_union if op == "+" else lt.co_subtract)(g, out, rhs)
        return out

    out = expr()
    if pos[0] != len(tokens):
        raise UsageError(f"trailing tokens in compact-open expression {text!r}")
    return out


def _co_tokens(text: str):
    out = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "()&+-":
            out.append(c)
            i += 1
        elif text.startswith("Z(", i):
            depth = 1
            j = i + 2
            while j < len(text) and depth:
                depth += {"(": 1, ")": -1}.get(text[j], 0)
                j += 1
            if depth:
                raise UsageError("unbalanced Z(...)")
            out.append(("Z", text[i + 2 : j - 1].strip()))
            i = j
        else:
            raise UsageError(f"bad character {c!r} in compact-open expression")
    return out


def format_compact_open(g: SeparatedGraph, a: lt.CompactOpen) -> str:
    if lt.co_is_empty(a):
        return "(empty)"
    return " + ".join(
        f"Z({sg.element_to_word(g, lt.idem_of(g, mu))})" for mu in a.cyls
    )


def parse_path(g: SeparatedGraph, text: str) -> fl.SemifinitePath:
    """`[<word>] ; free(k1,...|inf entries)` or `[<word>] ; reg(rho ; c)`."""
    text = text.strip()
    if not text.startswith("["):
        raise UsageError("path literal must start with [<word>]")
    close = text.index("]")
    word = text[1:close].strip()
    rest = text[close + 1 :].strip()
    if not rest.startswith(";"):
        raise UsageError("path literal needs `; <tail>`")
    tail_spec = rest[1:].strip()
    e = sg.parse_word(g, word)
    if sg.is_zero(e) or e.eta.steps or e.m.tpart or not _body_trivial(e.m.body):
        raise UsageError("path prefix word must denote a descending path")
    gamma = e.gamma
    v = sg.cpath_range(g, gamma)
    p = g.prime_of_vertex(v)
    if tail_spec.startswith("free(") and tail_spec.endswith(")"):
        inner = tail_spec[5:-1].strip()
        entries = [] if not inner else [x.strip() for x in inner.split(",")]
        k = tuple(fl.INF if x == "inf" else int(x) for x in entries)
        tail = fl.FreeTail(k)
    elif tail_spec.startswith("reg(") and tail_spec.endswith(")"):
        inner = tail_spec[4:-1]
        if ";" in inner:
            rho_s, cyc_s = inner.split(";", 1)
        else:
            rho_s, cyc_s = inner, ""
        rho = tuple(x.strip() for x in rho_s.split(",") if x.strip())
        cyc = tuple(x.strip() for x in cyc_s.split(",") if x.strip())
        tail = fl.PerTail(rho, cyc) if cyc else fl.RegTail(rho)
    else:
        raise UsageError("path tail must be free(...) or reg(...)")
    mu = fl.SemifinitePath(gamma, p, tail)
    fl.validate_path(g, mu)
    return mu


def format_path(g: SeparatedGraph, mu: fl.SemifinitePath) -> str:
    toks = [t for s in mu.gamma.steps for t in sg._step_tokens(g, s, False)]
    prefix = " ".join(toks) if toks else f"v:{mu.gamma.start}"
    if isinstance(mu.tail, fl.FreeTail):
        inner = ",".join("inf" if x == fl.INF else str(x) for x in mu.tail.k)
        return f"[{prefix}] ; free({inner})"
    if isinstance(mu.tail, fl.RegTail):
        return f"[{prefix}] ; reg({','.join(mu.tail.path)} ; )"
    return f"[{prefix}] ; reg({','.join(mu.tail.prefix)} ; {','.join(mu.tail.cycle)})"


def _trivial_tail(g: SeparatedGraph, p: str):
    return (0,) * g.k(p) if g.is_free(p) else ()


def _body_trivial(body) -> bool:
    if isinstance(body, sg.FreeBody):
        return not any(body.k) and not any(body.l)
    return not body.gamma and not body.nu


def format_germ(g: SeparatedGraph, germ: gp.Germ) -> str:
    n1 = ",".join(f"{i}:{d}" for i, d in germ.weight.n1) or "0"
    n2 = ",".join(str(x) for x in germ.weight.n2) or "0"
    return (
        f"({format_path(g, germ.x)} ; {n1} ; {n2} ; {format_path(g, germ.y)})"
    )


def parse_script(text: str) -> lt.Script:
    """Expansion scripts: whitespace-separated `pos` or `pos:choice` items."""
    out: lt.Script = []
    for item in text.split():
        if ":" in item:
            p, c = item.split(":", 1)
            out.append((int(p), int(c)))
        else:
            out.append((int(item), None))
    return out


def format_script(script: lt.Script) -> str:
    return " ".join(f"{p}:{c}" if c is not None else str(p) for p, c in script)


# -- dispatch ------------------------------------------------------------


def _load(path: str) -> SeparatedGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


def _budget(args) -> mn.Budget:
    return mn.Budget(max_states=args.max_steps, max_weight=args.max_weight)


def _bounds(args) -> lt.Bounds:
    return lt.Bounds(max_depth=args.max_depth, max_exp=args.max_exp)


def _emit(args, doc: dict, text_lines: list[str]) -> None:
    if args.json:
        print(json.dumps(doc, indent=2, default=str))
    else:
        for line in text_lines:
            print(line)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="sepgroid",
        description="Symbolic computation for adaptable separated graphs.",
    )
    parser.add_argument("command", help="subcommand")
    parser.add_argument("args", nargs="*", help="subcommand arguments")
    parser.add_argument("--json", action="store_true")
    parser.add_argument("--max-steps", type=int, default=100_000)
    parser.add_argument("--max-weight", type=int, default=40)
    parser.add_argument("--max-depth", type=int, default=2)
    parser.add_argument("--max-exp", type=int, default=6)
    parser.add_argument("--seed", type=int, default=0)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 64 if exc.code else 0
    try:
        return _dispatch(args)
    except BrokenPipeError:
        return 0
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 64
    except (GraphError, sg.WordError, fl.FilterError, lt.LatticeError,
            gp.GroupoidError, mn.MonoidError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 65


def _need(args, n: int):
    if len(args.args) != n:
        raise UsageError(f"{args.command} expects {n} argument(s)")
    return args.args


def _dispatch(args) -> int:
    cmd = args.command
    doc: dict = {"command": cmd, "inputs": args.args}

    if cmd == "selftest":
        return _selftest(args)

    if cmd == "validate":
        (path,) = _need(args, 1)
        g = _load(path)
        violations = validate_adaptable(g)
        doc["result"] = [str(v) for v in violations]
        _emit(args, doc, doc["result"] or ["ok"])
        return 0 if not violations else 1

    graph_path = args.args[0] if args.args else None
    if graph_path is None:
        raise UsageError(f"{cmd} needs a graph file argument")
    g = _load(graph_path)
    rest = args.args[1:]

    if cmd == "normalize":
        (word,) = rest or [""]
        out = sg.element_to_word(g, sg.parse_word(g, word))
        doc["result"] = out
        _emit(args, doc, [out])
        return 0

    if cmd == "mul":
        if len(rest) != 2:
            raise UsageError("mul GRAPH WORD1 WORD2")
        out = sg.element_to_word(
            g, sg.mul(g, sg.parse_word(g, rest[0]), sg.parse_word(g, rest[1]))
        )
        doc["result"] = out
        _emit(args, doc, [out])
        return 0

    if cmd == "idempotents":
        words = [
            sg.element_to_word(g, e)
            for e in lt.enumerate_idempotents(g, _bounds(args))
        ]
        doc["result"] = words
        _emit(args, doc, words)
        return 0

    if cmd == "expand":
        if len(rest) != 2:
            raise UsageError("expand GRAPH WORD SCRIPT")
        e = sg.parse_word(g, rest[0])
        out = lt.expand(g, e, parse_script(rest[1]))
        words = [sg.element_to_word(g, x) for x in out]
        doc["result"] = words
        _emit(args, doc, words)
        return 0

    if cmd == "cover-check":
        if len(rest) < 1:
            raise UsageError("cover-check GRAPH WORD MEMBER...")
        e = sg.parse_word(g, rest[0])
        members = [sg.parse_word(g, w) for w in rest[1:]]
        ok = lt.is_orthogonal_cover(g, e, members)
        doc["result"] = ok
        _emit(args, doc, ["orthogonal cover" if ok else "not an orthogonal cover"])
        return 0 if ok else 1

    if cmd == "cover-to-expansion":
        e = sg.parse_word(g, rest[0])
        members = [sg.parse_word(g, w) for w in rest[1:]]
        script = lt.cover_to_expansion(g, e, members)
        out = format_script(script)
        doc["result"] = out
        _emit(args, doc, [out if out else "(empty script)"])
        return 0

    if cmd == "cylinders":
        (expr,) = _need_rest(rest, 1, "cylinders GRAPH EXPR")
        a = parse_compact_open(g, expr)
        out = format_compact_open(g, a)
        doc["result"] = out
        _emit(args, doc, [out])
        return 0 if not lt.co_is_empty(a) else 1

    if cmd == "filter-contains":
        path_lit, word = _need_rest(rest, 2, "filter-contains GRAPH PATH WORD")
        mu = parse_path(g, path_lit)
        e = sg.parse_word(g, word)
        ok = fl.filter_contains(g, mu, e)
        doc["result"] = ok
        _emit(args, doc, ["yes" if ok else "no"])
        return 0 if ok else 1

    if cmd == "ultrafilter":
        (path_lit,) = _need_rest(rest, 1, "ultrafilter GRAPH PATH")
        ok = fl.is_ultrafilter(g, parse_path(g, path_lit))
        doc["result"] = ok
        _emit(args, doc, ["ultrafilter" if ok else "not an ultrafilter"])
        return 0 if ok else 1

    if cmd == "germ":
        word, path_lit = _need_rest(rest, 2, "germ GRAPH WORD PATH")
        germ = gp.germ_of(g, sg.parse_word(g, word), parse_path(g, path_lit))
        out = format_germ(g, germ)
        doc["result"] = out
        _emit(args, doc, [out])
        return 0

    if cmd == "bisection-check":
        fam = [sg.parse_word(g, w) for w in rest]
        ok = gp.is_bisection_family(g, fam)
        doc["result"] = ok
        _emit(args, doc, ["bisection family" if ok else "not a bisection family"])
        return 0 if ok else 1

    if cmd in ("monoid-eq", "monoid-leq"):
        x_s, y_s = _need_rest(rest, 2, f"{cmd} GRAPH X Y")
        pres = mn.presentation(g)
        x, y = mn.parse_monelem(g, x_s), mn.parse_monelem(g, y_s)
        if cmd == "monoid-eq":
            res = mn.mon_eq(pres, x, y, _budget(args))
            if isinstance(res, mn.Yes):
                lines = ["Yes"] + [mn.format_monelem(m) for m in res.path]
                doc["result"] = {"status": "Yes", "path": lines[1:]}
                _emit(args, doc, lines)
                return 0
            status = "No" if isinstance(res, mn.No) else "Unknown"
            doc["result"] = {"status": status}
            _emit(args, doc, [status])
            return 1 if status == "No" else 2
        res = mn.mon_leq(pres, x, y, _budget(args))
        if isinstance(res, mn.Yes):
            doc["result"] = {"status": "Yes", "z": mn.format_monelem(res.path[0])}
            _emit(args, doc, ["Yes", mn.format_monelem(res.path[0])])
            return 0
        doc["result"] = {"status": "Unknown"}
        _emit(args, doc, ["Unknown"])
        return 2

    if cmd == "refine":
        specs = _need_rest(rest, 4, "refine GRAPH A B C D")
        pres = mn.presentation(g)
        a, b, c, d = (mn.parse_monelem(g, s) for s in specs)
        res = mn.refinement_witness(pres, a, b, c, d, _budget(args))
        if isinstance(res, mn.Unknown):
            doc["result"] = {"status": "Unknown"}
            _emit(args, doc, ["Unknown"])
            return 2
        doc["result"] = {"status": "Yes", "witness": [mn.format_monelem(m) for m in res]}
        _emit(args, doc, ["Yes"] + [mn.format_monelem(m) for m in res])
        return 0

    if cmd == "typ":
        (expr,) = _need_rest(rest, 1, "typ GRAPH EXPR")
        out = mn.format_monelem(mn.typ_of(g, parse_compact_open(g, expr)))
        doc["result"] = out
        _emit(args, doc, [out])
        return 0

    if cmd == "equidecompose":
        a_s, b_s = _need_rest(rest, 2, "equidecompose GRAPH EXPR EXPR")
        a = parse_compact_open(g, a_s)
        b = parse_compact_open(g, b_s)
        pres = mn.presentation(g)
        eq = mn.mon_eq(pres, mn.typ_of(g, a), mn.typ_of(g, b), _budget(args))
        if isinstance(eq, mn.No):
            doc["result"] = {"status": "No"}
            _emit(args, doc, ["No"])
            return 1
        cert = mn.equidecompose(g, a, b, _budget(args))
        if isinstance(cert, mn.Unknown):
            doc["result"] = {"status": "Unknown"}
            _emit(args, doc, ["Unknown"])
            return 2
        lines = ["Yes"]
        payload = []
        for s, src, rng in zip(cert.elements, cert.sources, cert.ranges):
            entry = {
                "element": sg.element_to_word(g, s),
                "source": sg.element_to_word(g, src),
                "range": sg.element_to_word(g, rng),
            }
            payload.append(entry)
            lines.append(
                f"{entry['element']}  [{entry['source']} -> {entry['range']}]"
            )
        doc["result"] = {"status": "Yes", "certificate": payload}
        _emit(args, doc, lines)
        return 0

    raise UsageError(f"unknown command {cmd!r}")


def _need_rest(rest, n, usage):
    if len(rest) != n:
        raise UsageError(usage)
    return rest


# -- selftest ------------------------------------------------------------


def _selftest(args) -> int:
    from . import fixture_path

    rng = random.Random(args.seed)
    passed = failed = 0

    def check(name, fn):
        nonlocal passed, failed
        try:
            fn()
            passed += 1
            print(f"pass: {name}")
        except Exception as exc:  # noqa: BLE001 - report and continue
            failed += 1
            print(f"FAIL: {name}: {exc}")

    graphs = {n: _load(fixture_path(f"{n}.sg")) for n in ("g0", "g1", "g2", "g3")}

    def laws():
        for name, g in graphs.items():
            toks = _fixture_alphabet(g)
            for _ in range(200):
                ws = [
                    " ".join(rng.choice(toks) for _ in range(rng.randint(1, 5)))
                    for _ in range(3)
                ]
                e1, e2, e3 = (sg.parse_word(g, w) for w in ws)
                assert sg.mul(g, sg.mul(g, e1, e2), e3) == sg.mul(
                    g, e1, sg.mul(g, e2, e3)
                )
                assert sg.mul(g, e1, sg.mul(g, sg.star(g, e1), e1)) == e1
                assert sg.star(g, sg.mul(g, e1, e2)) == sg.mul(
                    g, sg.star(g, e2), sg.star(g, e1)
                )

    def covers():
        for name in ("g1", "g2", "g3"):
            g = graphs[name]
            base = sg.parse_word(g, f"v:{_top_vertex(g)}")
            for _ in range(40):
                pieces = [base]
                for _ in range(rng.randint(0, 3)):
                    cand = [
                        i
                        for i, x in enumerate(pieces)
                        if not (
                            g.is_free(lt.epath_of(g, x).p)
                            and g.k(lt.epath_of(g, x).p) == 0
                        )
                    ]
                    if not cand:
                        break
                    pos = rng.choice(cand)
                    mu = lt.epath_of(g, pieces[pos])
                    ch = rng.randint(1, g.k(mu.p)) if g.is_free(mu.p) else None
                    pieces[pos : pos + 1] = lt.simple_expand(g, pieces[pos], ch)
                assert lt.is_orthogonal_cover(g, base, pieces)
                script = lt.cover_to_expansion(g, base, pieces)
                assert sorted(map(repr, lt.expand(g, base, script))) == sorted(
                    map(repr, pieces)
                )

    def filters_suite():
        for name in ("g2", "g3"):
            g = graphs[name]
            v = _top_vertex(g)
            idems = list(lt.enumerate_idempotents(g, lt.Bounds(2, 3, 4)))
            for mu in fl.enumerate_semifinite(g, v, lt.Bounds(1, 2, 2)):
                inside = [e for e in idems if fl.filter_contains(g, mu, e)]
                for e in inside:
                    for f in inside:
                        m = sg.mul(g, e, f)
                        assert not sg.is_zero(m)

    def germs():
        for name in ("g2", "g3"):
            g = graphs[name]
            toks = _fixture_alphabet(g)
            paths = [
                mu
                for v in sorted(g.vertex_prime)
                for mu in fl.enumerate_infinite(g, v, lt.Bounds(1, 2, 2))
            ]
            done = 0
            while done < 60:
                w = " ".join(rng.choice(toks) for _ in range(rng.randint(1, 5)))
                s = sg.parse_word(g, w)
                if sg.is_zero(s):
                    continue
                ss = sg.mul(g, sg.star(g, s), s)
                xs = [x for x in paths if fl.filter_contains(g, x, ss)]
                if not xs:
                    continue
                x = rng.choice(xs)
                germ = gp.germ_of(g, s, x)
                assert gp.in_bisection(g, germ, s)
                assert gp.compose(g, germ, gp.inverse(germ)) == gp.unit(g, germ.x)
                done += 1

    def monoid_suite():
        pres1 = mn.presentation(graphs["g1"])
        assert isinstance(
            mn.mon_eq(pres1, mn.mon_unit("p"), mn.mon_of({"p": 1, "q1": 1})), mn.Yes
        )
        assert isinstance(mn.mon_eq(pres1, mn.mon_unit("q1"), mn.mon_unit("q2")), mn.No)
        pres2 = mn.presentation(graphs["g2"])
        for n in range(1, 7):
            assert isinstance(
                mn.mon_eq(pres2, mn.mon_unit("w"), mn.mon_of({"w": n})), mn.Yes
            )

    check("semigroup laws", laws)
    check("cover/expansion duality", covers)
    check("filter axioms", filters_suite)
    check("groupoid germs", germs)
    check("monoid identities", monoid_suite)
    print(f"{passed} passed, {failed} failed")
    return 0 if failed == 0 else 1


def _top_vertex(g: SeparatedGraph) -> str:
    from .graph import FreePrime

    for p in g.primes:
        if isinstance(p, FreePrime) and p.k > 0:
            return p.name
    for p in g.primes:
        if not isinstance(p, FreePrime):
            return sorted(p.vertices)[0]
    return g.primes[0].name


def _fixture_alphabet(g: SeparatedGraph) -> list[str]:
    from .graph import FreePrime

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


if __name__ == "__main__":
    sys.exit(main())
