"""Command-line front end.

Every subcommand reads a graph either from a ``dimergraph v1`` file
(``--graph``) or from the built-in corpus (``--builtin``), prints JSON by
default and accepts ``--selftest`` to run its module checks on the corpus.

Exit codes: 0 success, 2 validation errors, 64 usage errors, 66 file errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from typing import Callable

import numpy as np

from .errors import DimerLabError, GraphFormatError, TorusGraph
from .formats import format_graph, format_rational, parse_rational, rational_json, read_graph, read_matrix_connection, read_weights

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_USAGE = 64
EXIT_FILE = 66


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# input / output helpers


def _load_graph(args, allow_missing: bool = False):
    from .corpus import builtin_corpus

    if args.graph and args.builtin:
        raise UsageError("give either --graph or --builtin, not both")
    if args.graph:
        g = read_graph(args.graph)
    elif args.builtin:
        corpus = builtin_corpus()
        if args.builtin not in corpus:
            raise UsageError(f"unknown built-in graph {args.builtin!r}; choose from {', '.join(corpus)}")
        g = corpus[args.builtin]
    elif allow_missing:
        return None
    else:
        raise UsageError("a graph is required (--graph PATH or --builtin NAME)")
    return g


def _load_weights(args, g):
    return read_weights(args.weights, g) if getattr(args, "weights", None) else None


def _holes(args, g) -> tuple[int, ...]:
    from .corpus import corpus_holes

    if args.holes:
        try:
            holes = tuple(int(x) for x in args.holes.split(","))
        except ValueError:
            raise UsageError("--holes takes comma-separated face indices") from None
        return holes
    if args.builtin:
        return corpus_holes(args.builtin, g)
    return ()


def _jsonable(x):
    if isinstance(x, Fraction):
        return rational_json(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    return x


def _text(x) -> str:
    if isinstance(x, Fraction):
        return format_rational(x)
    return str(x)


def _emit(args, result: dict, table: list[dict] | None = None, text: str | None = None) -> None:
    """Write ``result`` as JSON, ``table`` as CSV, or ``text`` (falls back to the table)."""
    fmt = args.format
    out = sys.stdout
    if fmt == "json":
        out.write(json.dumps(_jsonable(result), indent=2) + "\n")
        return
    if fmt == "csv":
        if table is None:
            raise UsageError("this command has no CSV output")
        keys = list(table[0]) if table else []
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(keys)
        for row in table:
            writer.writerow([_text(row[k]) for k in keys])
        return
    if text is not None:
        out.write(text if text.endswith("\n") else text + "\n")
    elif table is not None:
        for row in table:
            out.write("  ".join(_text(v) for v in row.values()) + "\n")
    else:
        for k, v in result.items():
            out.write(f"{k}: {_text(v)}\n")


def _parse_web(g, text: str) -> tuple[int, ...]:
    """Multiplicities as a JSON object ``{edge-id: k}`` or a comma-separated list."""
    text = text.strip()
    if text.startswith("{"):
        data = json.loads(text)
        m = [0] * g.n_edges
        for name, k in data.items():
            try:
                m[g.edge_index(name)] = int(k)
            except KeyError:
                raise GraphFormatError(f"web names unknown edge {name!r}") from None
        return tuple(m)
    m = tuple(int(x) for x in text.split(","))
    if len(m) != g.n_edges:
        raise GraphFormatError(f"web needs {g.n_edges} multiplicities, got {len(m)}")
    return m


def _cover_names(g, cover) -> list[str]:
    return [g.edges[e].name for e in cover]


# ---------------------------------------------------------------------------
# self-tests


def _selftest(name: str, checks: list[tuple[str, Callable[[], bool]]]) -> tuple[dict, bool]:
    rows = []
    ok = True
    for label, fn in checks:
        try:
            passed = bool(fn())
            detail = ""
        except DimerLabError as exc:
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        ok &= passed
        row = {"check": label, "passed": passed}
        if detail:
            row["error"] = detail
        rows.append(row)
    return {"selftest": name, "passed": ok, "checks": rows}, ok


def _small_corpus():
    from .corpus import builtin_corpus

    c = builtin_corpus()
    return {k: c[k] for k in ("K2", "C4", "P4", "grid2x3", "grid2x4", "grid3x4", "cube", "theta")}


def _selftest_checks(cmd: str) -> list[tuple[str, Callable[[], bool]]]:
    from . import kasteleyn as ka
    from .corpus import builtin_corpus
    from .oracle import enumerate_dimer_covers

    corpus = builtin_corpus()
    small = _small_corpus()
    if cmd == "graph":
        return [
            (f"sign rule on {k}", lambda g=g: ka.check_sign_rule(g, ka.kasteleyn_signs(g)))
            for k, g in corpus.items()
        ] + [(f"euler on {k}", lambda g=g: g.n_vertices - g.n_edges + len(g.faces) == 2) for k, g in corpus.items()]
    if cmd in ("count", "oracle"):
        return [
            (f"|det K| = #covers on {k}", lambda g=g: ka.partition_function(g) == len(enumerate_dimer_covers(g)))
            for k, g in corpus.items()
        ]
    if cmd == "probs":

        def probs_ok(g):
            covers = enumerate_dimer_covers(g)
            p = ka.edge_probabilities(g)
            return all(p[e] == Fraction(sum(e in m for m in covers), len(covers)) for e in range(g.n_edges))

        return [(f"probabilities = oracle frequencies on {k}", lambda g=g: probs_ok(g)) for k, g in small.items()]
    if cmd == "sample":

        def sample_ok(g):
            a = ka.sample_dimer_covers(g, n=20, seed=1, method="naive")
            b = ka.sample_dimer_covers(g, n=20, seed=1, method="rank1")
            covers = set(enumerate_dimer_covers(g))
            return a == b and all(m in covers for m in a)

        return [(f"naive = rank-one samples on {k}", lambda g=g: sample_ok(g)) for k, g in small.items()]
    if cmd == "psi":
        from .psi import invert_psi, psi

        def psi_ok(g):
            rng = np.random.default_rng(0)
            covers = enumerate_dimer_covers(g)
            lam = rng.dirichlet(np.ones(len(covers)))
            f = np.zeros(g.n_edges)
            for w, m in zip(lam, covers):
                f[list(m)] += w
            X = invert_psi(g, f)
            return np.max(np.abs(np.array(psi(g, X), dtype=float) - f)) <= 1e-10

        return [(f"Psi(Psi^-1(f)) = f on {k}", lambda g=corpus[k]: psi_ok(g)) for k in ("C4", "grid2x4", "grid3x4", "grid4x4")]
    if cmd == "ddimer":
        from .double_dimer import CLOSED_FORMS, verify_magnetic_identity, z2_loop_density

        return [
            (f"magnetic identity on {k}", lambda g=corpus[k]: bool(verify_magnetic_identity(g)))
            for k in ("C4", "grid2x3", "grid2x4")
        ] + [
            ("area-1 density", lambda: abs(z2_loop_density(1) - CLOSED_FORMS[1]["printed"][1]) <= 1e-8),
            ("area-2 density", lambda: abs(z2_loop_density(2) - CLOSED_FORMS[2]["printed"][1]) <= 1e-6),
        ]
    if cmd == "web":
        from .multiweb import MatrixLocalSystem, annulus_coefficients, annulus_oracle, verify_sln_sums

        def sln_ok(g, n):
            rng = np.random.default_rng(0)
            phis = [MatrixLocalSystem.random(g, n, rng) for _ in range(3)]
            return all(c.holds for c in verify_sln_sums(g, phis))

        ann = corpus["annular_C4"]
        hole = ann.bounded_faces[0].index
        return [
            (f"SL{n} sum on {k}", lambda g=g, n=n: sln_ok(g, n))
            for k, g in small.items()
            for n in (2, 3)
        ] + [("annular C4 coefficients", lambda: annulus_coefficients(ann, hole) == annulus_oracle(ann, hole) == (2, 1))]
    if cmd == "walk":
        from .corpus import make_grid
        from .walk import coordinate_quotient, group_algebra_operator, k4_model, operator_spectrum, walk_model

        def quotient_ok():
            g = make_grid(2, 3)
            op = group_algebra_operator(walk_model(g), coordinate_quotient(g))
            F = Fraction
            return sorted(operator_spectrum(op)) == sorted([F(1), F(2, 3), F(2, 3), F(-1, 3), F(0), F(0)])

        def k4_ok():
            T = group_algebra_operator(k4_model()).transition_matrix()
            return all(T[i][j] == (0 if i == j else Fraction(1, 3)) for i in range(4) for j in range(4))

        return [("3x2 quotient spectrum", quotient_ok), ("K4 transition matrix", k4_ok)]
    raise AssertionError(cmd)


# ---------------------------------------------------------------------------
# subcommands


def cmd_graph(args):
    from .corpus import builtin_corpus
    from .graph import check_nondegenerate, cycle_dimension
    from .kasteleyn import check_sign_rule, kasteleyn_signs

    if args.list:
        names = list(builtin_corpus())
        _emit(args, {"builtin": names}, [{"name": n} for n in names])
        return
    g = _load_graph(args)
    if args.export:
        sys.stdout.write(format_graph(g))
        return
    report = check_nondegenerate(g)
    result = {
        "vertices": g.n_vertices,
        "edges": g.n_edges,
        "faces": len(g.faces),
        "outer_face": g.outer,
        "euler_characteristic": g.n_vertices - g.n_edges + len(g.faces),
        "sign_rule": check_sign_rule(g, kasteleyn_signs(g)),
        "cycle_dimension": cycle_dimension(g),
        "polytope_dimension": report.rank,
        "nondegenerate": bool(report),
        "face_list": [
            {"index": f.index, "outer": f.outer, "vertices": [g.vertices[v].name for v in g.face_vertices(f.index)]}
            for f in g.faces
        ],
    }
    _emit(args, result)


def cmd_count(args):
    from .kasteleyn import partition_function

    g = _load_graph(args)
    z = partition_function(g, _load_weights(args, g))
    _emit(args, {"partition_function": z}, [{"partition_function": z}], _text(z))


def cmd_probs(args):
    from .kasteleyn import edge_probabilities

    g = _load_graph(args)
    p = edge_probabilities(g, _load_weights(args, g))
    table = [
        {"edge": e.name, "black": g.vertices[e.black].name, "white": g.vertices[e.white].name, "probability": x}
        for e, x in zip(g.edges, p)
    ]
    _emit(args, {"probabilities": {row["edge"]: row["probability"] for row in table}}, table)


def cmd_sample(args):
    from .kasteleyn import sample_dimer_covers

    g = _load_graph(args)
    covers = sample_dimer_covers(g, _load_weights(args, g), n=args.n, seed=args.seed, method=args.method)
    names = [_cover_names(g, m) for m in covers]
    _emit(args, {"seed": args.seed, "samples": names}, [{"sample": i, "edges": " ".join(c)} for i, c in enumerate(names)])


def cmd_psi(args):
    from .psi import face_weights, invert_psi, psi

    g = _load_graph(args)
    if args.target:
        data = json.loads(open(args.target).read())
        target = [0.0] * g.n_edges
        for name, v in data.items():
            try:
                target[g.edge_index(name)] = float(parse_rational(v))
            except KeyError:
                raise GraphFormatError(f"target names unknown edge {name!r}") from None
        tol = args.tol if args.tol is not None else 1e-10
        X = invert_psi(g, target, tol=tol)
        back = np.array(psi(g, X), dtype=float)
        resid = float(np.max(np.abs(back - np.array(target)))) if g.n_edges else 0.0
        table = [{"face": f, "weight": x} for f, x in X.items()]
        _emit(args, {"face_weights": {str(f): x for f, x in X.items()}, "residual": resid}, table)
        return
    w = _load_weights(args, g)
    X = face_weights(g, w)
    f = psi(g, X)
    table = [{"edge": e.name, "expected": x} for e, x in zip(g.edges, f)]
    _emit(args, {"face_weights": {str(k): v for k, v in X.items()}, "expected_matching": {r["edge"]: r["expected"] for r in table}}, table)


def cmd_ddimer(args):
    from .double_dimer import CLOSED_FORMS, magnetic_partition, verify_magnetic_identity, z2_loop_density, z2_pair_probability

    if args.action == "density":
        if args.area is None:
            raise UsageError("density needs --area")
        d = z2_loop_density(args.area)
        forms = {k: {"expression": s, "value": v} for k, (s, v) in CLOSED_FORMS.get(args.area, {}).items()}
        result = {"area": args.area, "density": d, "closed_forms": forms}
        text = f"{d!r}" + "".join(f"  {s}" for s, _ in CLOSED_FORMS.get(args.area, {}).values())
        _emit(args, result, [{"area": args.area, "density": d}], text)
    elif args.action == "magnetic":
        g = _load_graph(args)
        w = _load_weights(args, g)
        zq = magnetic_partition(g, w)
        check = verify_magnetic_identity(g, w)
        _emit(args, {"det_product": zq.to_json(), "identity_holds": bool(check)}, None, zq.to_json())
    elif args.action == "pair":
        if not args.edges:
            raise UsageError("pair needs --edges 'x,y:x,y;...'")
        edges = [tuple(tuple(int(c) for c in p.split(",")) for p in item.split(":")) for item in args.edges.split(";")]
        p = z2_pair_probability(edges)
        _emit(args, {"edges": edges, "probability": p}, [{"probability": p}], repr(p))


def cmd_web(args):
    from . import multiweb as mw
    from .skein import is_reduced, skein_reduce

    g = _load_graph(args)
    if g.torus:
        raise TorusGraph("matrix connections need a planar graph")
    if args.action == "trace":
        if not args.web:
            raise UsageError("trace needs --web")
        m = _parse_web(g, args.web)
        n = args.n
        phi = read_matrix_connection(args.connection, g, n) if args.connection else mw.MatrixLocalSystem.identity(g, n)
        t = mw.multiweb_trace(g, m, phi, n)
        _emit(args, {"web": list(m), "trace": t}, [{"trace": t}], _text(t))
    elif args.action == "verify":
        rng = np.random.default_rng(args.seed)
        phis = [mw.MatrixLocalSystem.random(g, args.n, rng) for _ in range(args.samples)]
        checks = mw.verify_sln_sums(g, phis)
        rows = [{"sample": i, "holds": c.holds, "det": c.det, "trace_sum": c.trace_sum} for i, c in enumerate(checks)]
        _emit(args, {"n": args.n, "all_hold": all(c.holds for c in checks), "checks": rows}, rows)
        if not all(c.holds for c in checks):
            raise SystemExit(EXIT_VALIDATION)
    elif args.action == "coefficients":
        holes = _holes(args, g)
        if len(holes) == 1:
            C = mw.annulus_coefficients(g, holes[0])
            rows = [{"j": j, "C": c} for j, c in enumerate(C)]
            _emit(args, {"holes": list(holes), "coefficients": list(C)}, rows)
        elif len(holes) == 2:
            C = mw.pants_coefficients(g, *holes)
            rows = [{"i": i, "j": j, "k": k, "C": c} for (i, j, k), c in sorted(C.items())]
            _emit(args, {"holes": list(holes), "coefficients": rows}, rows)
        else:
            raise UsageError("coefficients need one hole (annulus) or two holes (pants)")
    elif args.action == "reduce":
        if not args.web:
            raise UsageError("reduce needs --web")
        m = _parse_web(g, args.web)
        holes = _holes(args, g)
        out = skein_reduce(g, m, holes)
        rows = [{"web": list(w), "coefficient": c, "reduced": is_reduced(g, w, holes)} for w, c in out]
        _emit(args, {"web": list(m), "terms": rows}, [{"web": " ".join(map(str, r["web"])), "coefficient": r["coefficient"]} for r in rows])


def _walk_model(args):
    from .walk import k4_model, walk_model

    if args.builtin == "K4":
        return None, k4_model()
    g = _load_graph(args)
    return g, walk_model(g, _load_weights(args, g))


def _quotient(args, g):
    from .walk import coordinate_quotient

    if not args.quotient:
        return None
    if g is None:
        raise UsageError("--quotient needs a graph with positions")
    return coordinate_quotient(g, {"x": 0, "y": 1}[args.quotient])


def cmd_walk(args):
    from . import walk as wk

    if args.action == "winding":
        r = wk.torus_walk_experiment(args.torus, args.steps, args.trials, args.seed)
        ci = r.confidence_interval()
        result = {
            "n": r.n,
            "steps": r.steps,
            "trials": r.trials,
            "mean": r.mean(),
            "ci95": ci,
            "histogram": [{"wx": wx, "wy": wy, "count": c} for (wx, wy), c in r.histogram().items()],
        }
        _emit(args, result, result["histogram"])
        return
    g, model = _walk_model(args)
    q = _quotient(args, g)
    labels = model.labels if q is None else [str(i) for i in range(max(q) + 1)]
    if args.action == "simulate":
        traj = wk.simulate_walk(model, args.steps, seed=args.seed, quotient=q)
        rows = [{"t": t, "permutation": wk.cycle_string(p, labels)} for t, p in enumerate(traj)]
        _emit(args, {"seed": args.seed, "trajectory": [r["permutation"] for r in rows]}, rows)
    elif args.action == "spectrum":
        op = wk.group_algebra_operator(model, q, args.cap)
        spec = wk.operator_spectrum(op)
        result = {
            "group_size": op.size,
            "elements": [wk.cycle_string(p, labels) for p in op.elements],
            "eigenvalues": spec,
            "transition_matrix": op.transition_matrix() if args.matrix else None,
        }
        _emit(args, result, [{"eigenvalue": v} for v in spec])
    elif args.action == "mixing":
        prof = wk.mixing_profile(model, args.horizon, q, args.cap, samples=args.samples, seed=args.seed)
        rows = [{"t": t, "tv": v} for t, v in enumerate(prof.tv, start=1)]
        if prof.stderr is not None:
            for r, s in zip(rows, prof.stderr):
                r["stderr"] = s
        result = {"exact": prof.exact, "group_size": prof.group_size, "period": prof.period, "profile": rows}
        _emit(args, result, rows)


def cmd_oracle(args):
    from . import oracle

    g = _load_graph(args)
    if args.action == "covers":
        covers = oracle.enumerate_dimer_covers(g)
        names = [_cover_names(g, m) for m in covers]
        _emit(args, {"count": len(covers), "covers": names}, [{"cover": " ".join(c)} for c in names])
    elif args.action == "multiwebs":
        webs = oracle.enumerate_multiwebs(g, args.n)
        _emit(args, {"n": args.n, "count": len(webs), "multiwebs": [list(m) for m in webs]}, [{"web": " ".join(map(str, m))} for m in webs])
    elif args.action == "tait":
        if not args.web:
            raise UsageError("tait needs --web")
        m = _parse_web(g, args.web)
        c = oracle.tait_colorings(g, m)
        _emit(args, {"web": list(m), "tait_colorings": c}, [{"tait_colorings": c}], str(c))


COMMANDS = {
    "graph": (cmd_graph, "inspect a graph: faces, Euler check, sign rule, nondegeneracy"),
    "count": (cmd_count, "weighted number of dimer covers"),
    "probs": (cmd_probs, "exact edge probabilities"),
    "sample": (cmd_sample, "exact random dimer covers"),
    "psi": (cmd_psi, "face weights and expected matchings; --target inverts Psi"),
    "ddimer": (cmd_ddimer, "double-dimer quantities"),
    "web": (cmd_web, "multiweb traces, trace sums, lamination coefficients, skein reduction"),
    "walk": (cmd_walk, "dimer walks on permutations"),
    "oracle": (cmd_oracle, "brute-force enumeration"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dimerlab", description="Exact and numerical tools for the bipartite dimer model.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def common(p, graph=True):
        if graph:
            p.add_argument("--graph", metavar="PATH", help="graph file in dimergraph v1 format")
            p.add_argument("--builtin", metavar="NAME", help="built-in corpus graph (see 'graph --list')")
            p.add_argument("--weights", metavar="PATH", help="JSON object of edge weights")
        p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
        p.add_argument("--tol", type=float, default=None, help="numerical tolerance override")
        p.add_argument("--format", choices=("json", "csv", "text"), default="json")
        p.add_argument("--selftest", action="store_true", help="run the module checks on the built-in corpus")

    p = sub.add_parser("graph", help=COMMANDS["graph"][1])
    common(p)
    p.add_argument("--list", action="store_true", help="list the built-in graphs")
    p.add_argument("--export", action="store_true", help="print the graph in dimergraph v1 format")

    for name in ("count", "probs"):
        common(sub.add_parser(name, help=COMMANDS[name][1]))

    p = sub.add_parser("sample", help=COMMANDS["sample"][1])
    common(p)
    p.add_argument("-n", type=int, default=1, help="number of samples")
    p.add_argument("--method", choices=("auto", "naive", "rank1"), default="auto")

    p = sub.add_parser("psi", help=COMMANDS["psi"][1])
    common(p)
    p.add_argument("--target", metavar="PATH", help="JSON object {edge-id: value} to invert")

    p = sub.add_parser("ddimer", help=COMMANDS["ddimer"][1])
    p.add_argument("action", nargs="?", choices=("density", "magnetic", "pair"))
    common(p)
    p.add_argument("--area", type=int, help="loop area for 'density'")
    p.add_argument("--edges", help="Z^2 edges for 'pair' as 'x,y:x,y;x,y:x,y' (black:white)")

    p = sub.add_parser("web", help=COMMANDS["web"][1])
    p.add_argument("action", nargs="?", choices=("trace", "verify", "coefficients", "reduce"))
    common(p)
    p.add_argument("-n", type=int, default=2, choices=(2, 3), help="order of the special linear group")
    p.add_argument("--web", help="multiplicities: comma list or JSON {edge-id: k}")
    p.add_argument("--connection", metavar="PATH", help="JSON {edge-id: matrix}; default identity")
    p.add_argument("--samples", type=int, default=10, help="random connections for 'verify'")
    p.add_argument("--holes", help="comma-separated hole face indices")

    p = sub.add_parser("walk", help=COMMANDS["walk"][1])
    p.add_argument("action", nargs="?", choices=("simulate", "spectrum", "mixing", "winding"))
    common(p)
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--horizon", type=int, default=10)
    p.add_argument("--samples", type=int, default=20_000, help="walkers for the Monte Carlo fallback")
    p.add_argument("--cap", type=int, default=10080, help="maximal size of the generated group")
    p.add_argument("--quotient", choices=("x", "y"), help="project onto permutations of a coordinate")
    p.add_argument("--matrix", action="store_true", help="include the transition matrix")
    p.add_argument("--torus", type=int, default=2, help="torus side for 'winding'")
    p.add_argument("--trials", type=int, default=100)

    p = sub.add_parser("oracle", help=COMMANDS["oracle"][1])
    p.add_argument("action", nargs="?", choices=("covers", "multiwebs", "tait"))
    common(p)
    p.add_argument("-n", type=int, default=2)
    p.add_argument("--web", help="trivalent web for 'tait'")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command is None:
        parser.print_help(sys.stderr)
        return EXIT_USAGE
    fn = COMMANDS[args.command][0]
    try:
        if args.selftest:
            result, ok = _selftest(args.command, _selftest_checks(args.command))
            rows = result["checks"]
            _emit(args, result, rows)
            return EXIT_OK if ok else EXIT_VALIDATION
        if hasattr(args, "action") and args.action is None:
            raise UsageError(f"'{args.command}' needs an action")
        fn(args)
    except UsageError as exc:
        print(f"dimerlab: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"dimerlab: file error: {exc}", file=sys.stderr)
        return EXIT_FILE
    except json.JSONDecodeError as exc:
        print(f"dimerlab: GraphFormatError: invalid JSON: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (DimerLabError, ValueError) as exc:
        print(f"dimerlab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except SystemExit as exc:
        return int(exc.code or 0)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
