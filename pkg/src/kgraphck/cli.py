"""Command-line frontend: batch runs over graph files with JSON reports.

Exit codes: 0 all checks passed, 1 at least one check failed, 2 parse or
precondition error, 3 budget exhausted.  Reports are deterministic for a
fixed config and seed.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import __version__
from .degree import Degree
from .errors import BUDGET_ERRORS, KGraphError, ParseError, PreconditionFailed
from .kgraph import KGraph, validate
from .alignment import PathFamily, ext, family, mce, pi_closure
from .exhaustive import Status, fe_enumerate, is_exhaustive, minimal_exhaustive
from .satiation import FamilyCollection, is_satiated, member, satiate
from .boundary import (
    boundary_paths,
    condition_c,
    construct_boundary,
    is_aperiodic_path,
)
from .formal import FormalElement, gauge_expectation
from .graphio import parse_families, parse_graph, parse_path
from .matrices import SparseMatrix
from .repn import (
    CKFamily,
    boundary_rep,
    check_uniqueness_hypotheses,
    evaluate,
    expectation_contraction_check,
    faithful_on_core_check,
    gap_product,
    gauge_grid,
    gauge_unitary_check,
    matrix_unit_check,
    sampled_gauge_average,
    shift_gaps_check,
    verify_family,
)


def _parse_degree(text: str, rank: int) -> Degree:
    parts = [int(p) for p in text.split(",")]
    if len(parts) != rank:
        raise ParseError(f"degree {text!r} has {len(parts)} coordinates, rank is {rank}")
    return Degree(*parts)


def _load_graph(path: str) -> KGraph:
    return validate(parse_graph(path))


def _load_collection(graph: KGraph, args) -> FamilyCollection:
    depth = None
    if getattr(args, "depth", None):
        depth = _parse_degree(args.depth, graph.rank)
    members = []
    if getattr(args, "generators", None):
        with open(args.generators) as fh:
            members = parse_families(graph, json.load(fh))
    base = FamilyCollection(
        graph,
        (),
        depth=depth,
        max_family_size=getattr(args, "max_size", None),
        budget=args.budget,
    )
    return base.with_members(members)


class Report:
    def __init__(self, command: str, config: dict, seed: int | None = None):
        self.command = command
        self.config = config
        self.seed = seed
        self.results: list[dict] = []

    def add(self, name: str, ok: bool | None, **extra) -> None:
        status = "info" if ok is None else ("pass" if ok else "fail")
        entry = {"name": name, "status": status}
        entry.update({k: v for k, v in extra.items() if v is not None})
        self.results.append(entry)

    @property
    def failed(self) -> bool:
        return any(r["status"] == "fail" for r in self.results)

    def emit(self, as_json: bool) -> None:
        if as_json:
            doc = {
                "command": self.command,
                "config": self.config,
                "results": self.results,
                "seed": self.seed,
            }
            print(json.dumps(doc, indent=2, sort_keys=True))
        else:
            for r in self.results:
                extras = " ".join(
                    f"{k}={v}" for k, v in sorted(r.items()) if k not in ("name", "status")
                )
                print(f"[{r['status']}] {r['name']}" + (f" {extras}" if extras else ""))


def _family_tokens(fam: PathFamily) -> list[str]:
    return [p.token() for p in fam]


# -- subcommand handlers ------------------------------------------------------------


def cmd_validate(args) -> int:
    graph = _load_graph(args.graph)
    report = Report("validate", {"graph": args.graph}, seed=args.seed)
    report.add(
        "validate",
        True,
        vertices=len(graph.vertices),
        edges=len(graph.edges),
        acyclic=graph.is_acyclic,
    )
    report.emit(args.json)
    return 0


def cmd_paths(args) -> int:
    graph = _load_graph(args.graph)
    if (args.degree is None) == (args.depth is None):
        raise PreconditionFailed("give exactly one of --degree or --depth")
    if args.degree:
        out = graph.paths(args.vertex, _parse_degree(args.degree, graph.rank))
    else:
        out = graph.paths_up_to(args.vertex, _parse_degree(args.depth, graph.rank))
    report = Report("paths", {"graph": args.graph, "vertex": args.vertex}, seed=args.seed)
    report.add("paths", None, count=len(out), paths=[p.token() for p in out])
    if args.json:
        report.emit(True)
    else:
        for p in out:
            print(p.token())
    return 0


def cmd_mce(args) -> int:
    graph = _load_graph(args.graph)
    mu = parse_path(graph, args.mu)
    nu = parse_path(graph, args.nu)
    out = mce(mu, nu)
    report = Report("mce", {"graph": args.graph, "mu": args.mu, "nu": args.nu}, seed=args.seed)
    report.add("mce", None, count=len(out), paths=[p.token() for p in out])
    report.emit(args.json)
    return 0


def cmd_ext(args) -> int:
    graph = _load_graph(args.graph)
    mu = parse_path(graph, args.mu)
    members = [parse_path(graph, tok) for tok in args.family]
    out = ext(mu, family(graph, members, vertex=mu.range))
    report = Report("ext", {"graph": args.graph, "mu": args.mu, "family": args.family}, seed=args.seed)
    report.add("ext", None, count=len(out), paths=[p.token() for p in out])
    report.emit(args.json)
    return 0


def cmd_pi_closure(args) -> int:
    graph = _load_graph(args.graph)
    members = [parse_path(graph, tok) for tok in args.family]
    out = pi_closure(members, budget=args.budget)
    report = Report("pi-closure", {"graph": args.graph, "family": args.family}, seed=args.seed)
    report.add("pi-closure", None, count=len(out), paths=[p.token() for p in out])
    report.emit(args.json)
    return 0


def cmd_exhaustive_check(args) -> int:
    graph = _load_graph(args.graph)
    members = [parse_path(graph, tok) for tok in args.family]
    vertex = args.vertex or (members[0].range if members else None)
    if vertex is None:
        raise PreconditionFailed("empty family needs --vertex")
    fam = PathFamily(graph, vertex, members)
    depth = _parse_degree(args.depth, graph.rank) if args.depth else None
    verdict = is_exhaustive(fam, depth)
    report = Report("exhaustive-check", {"graph": args.graph, "family": args.family}, seed=args.seed)
    report.add(
        "exhaustive",
        verdict.status is not Status.NOT_EXHAUSTIVE,
        verdict=verdict.status.value,
        witness=verdict.witness.token() if verdict.witness else None,
    )
    report.emit(args.json)
    return 0 if verdict.status is Status.EXHAUSTIVE else 1


def cmd_exhaustive_enumerate(args) -> int:
    graph = _load_graph(args.graph)
    depth = _parse_degree(args.depth, graph.rank)
    fn = minimal_exhaustive if args.minimal else fe_enumerate
    fams = fn(graph, args.vertex, depth, args.max_size, budget=args.budget)
    report = Report(
        "exhaustive-enumerate",
        {"graph": args.graph, "vertex": args.vertex, "max_size": args.max_size},
        seed=args.seed,
    )
    report.add(
        "enumerate", None, count=len(fams), families=[_family_tokens(f) for f in fams]
    )
    report.emit(args.json)
    return 0


def cmd_satiate(args) -> int:
    graph = _load_graph(args.graph)
    C = _load_collection(graph, args)
    S = satiate(C)
    ok, violations = is_satiated(S)
    report = Report("satiate", {"graph": args.graph, "generators": args.generators}, seed=args.seed)
    report.add("satiate", ok, count=len(S), exact=S.exact)
    for fam in S:
        report.add(f"family@{fam.vertex}", None, members=_family_tokens(fam))
    report.emit(args.json)
    return 0 if ok else 1


def cmd_boundary_list(args) -> int:
    graph = _load_graph(args.graph)
    S = satiate(_load_collection(graph, args))
    vertices = [args.vertex] if args.vertex else list(graph.vertices)
    report = Report("boundary-list", {"graph": args.graph, "vertex": args.vertex}, seed=args.seed)
    for v in vertices:
        bps = boundary_paths(v, S)
        report.add(f"boundary@{v}", None, paths=[bp.path.token() for bp in bps])
    report.emit(args.json)
    return 0


def cmd_boundary_construct(args) -> int:
    graph = _load_graph(args.graph)
    S = satiate(_load_collection(graph, args))
    avoid = None
    if args.avoid:
        members = [parse_path(graph, tok) for tok in args.avoid]
        avoid = PathFamily(graph, members[0].range, members)
    bp = construct_boundary(args.vertex, S, avoid=avoid)
    report = Report("boundary-construct", {"graph": args.graph, "vertex": args.vertex}, seed=args.seed)
    report.add("construct", True, path=bp.path.token())
    report.emit(args.json)
    return 0


def cmd_boundary_aperiodic(args) -> int:
    graph = _load_graph(args.graph)
    x = parse_path(graph, args.path)
    ok = is_aperiodic_path(x)
    report = Report("boundary-aperiodic", {"graph": args.graph, "path": args.path}, seed=args.seed)
    report.add("aperiodic", ok)
    report.emit(args.json)
    return 0 if ok else 1


def cmd_boundary_condition_c(args) -> int:
    graph = _load_graph(args.graph)
    S = satiate(_load_collection(graph, args))
    rep = condition_c(S)
    report = Report("boundary-condition-c", {"graph": args.graph}, seed=args.seed)
    report.add("condition-c", rep.ok)
    for v, x in sorted(rep.vertex_witnesses.items()):
        report.add(f"witness@{v}", None, path=x.token())
    for v, fam in rep.failures:
        report.add(
            "failure",
            False,
            vertex=v,
            family=_family_tokens(fam) if fam is not None else None,
        )
    report.emit(args.json)
    return 0 if rep.ok else 1


def _bundle_of(T: CKFamily) -> dict:
    ops = {}
    for lam, mat in T.ops.items():
        ops[lam.token()] = sorted(
            [int(i), int(j), str(Fraction(v))] for (i, j), v in mat.data.items()
        )
    return {
        "dimension": T.dim,
        "basis": [x.token() for x in T.basis] if T.basis else None,
        "operators": {k: ops[k] for k in sorted(ops)},
    }


def _bundle_load(graph: KGraph, doc: dict) -> CKFamily:
    dim = doc["dimension"]
    ops = {}
    for token, triplets in doc["operators"].items():
        lam = parse_path(graph, token)
        data = {(int(i), int(j)): Fraction(v) for i, j, v in triplets}
        ops[lam] = SparseMatrix(dim, dim, data)
    basis = tuple(parse_path(graph, t) for t in doc["basis"]) if doc.get("basis") else None
    return CKFamily(graph, dim, ops, basis=basis)


def cmd_represent(args) -> int:
    graph = _load_graph(args.graph)
    S = satiate(_load_collection(graph, args))
    T = boundary_rep(graph, S)
    doc = _bundle_of(T)
    text = json.dumps(doc, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def cmd_verify(args) -> int:
    graph = _load_graph(args.graph)
    C = _load_collection(graph, args)
    S = satiate(C)

    def rng_for(tag: str) -> random.Random:
        # per-stage generators keep reports identical for any --jobs value
        return random.Random(f"{args.seed}:{tag}")
    if args.bundle:
        with open(args.bundle) as fh:
            T = _bundle_load(graph, json.load(fh))
    else:
        T = boundary_rep(graph, S, verify=False)
    if args.backend == "float":
        T = T.to_complex()
    tol = 0.0 if args.backend == "exact" else 1e-12

    report = Report(
        "verify",
        {
            "graph": args.graph,
            "generators": args.generators,
            "backend": args.backend,
            "windows": args.windows,
            "jobs": args.jobs,
        },
        seed=args.seed,
    )

    all_paths = graph.all_paths()

    def relations():
        rep = verify_family(T, S)
        return [
            (r.name, r.deviation <= tol, {"deviation": r.deviation, "detail": r.detail or None})
            for r in rep.results
        ]

    def matrix_units():
        out = []
        rng = rng_for("matrix-units")
        for i in range(args.windows):
            size = rng.randint(1, 3)
            window = tuple(rng.sample(all_paths, min(size, len(all_paths))))
            PiE = pi_closure(window)
            mu_rep = matrix_unit_check(T, PiE)
            out.append(
                (
                    f"matrix-units[{i}]",
                    mu_rep.max_deviation() <= tol,
                    {"grid": mu_rep.pairs, "deviation": mu_rep.max_deviation()},
                )
            )
        return out

    def gaps():
        out = []
        ok = True
        for F in S.universe_all():
            vanishes = gap_product(T, F.members, F.vertex).is_zero()
            expected = F in S.members
            ok = ok and (vanishes == expected)
        out.append(("gap-products-iff-membership", ok, {}))
        return out

    def faithful():
        verdict = faithful_on_core_check(T, S)
        return [
            (
                "faithful-on-core",
                verdict.faithful and verdict.routes_agree,
                {
                    "route_a": verdict.route_a_ok,
                    "route_b": verdict.route_b_ok,
                },
            )
        ]

    def shift_gaps():
        worst = 0.0
        rng = rng_for("shift-gaps")
        for _ in range(50):
            mu = rng.choice(all_paths)
            pool = [p for p in all_paths if p.range == mu.range and not p.is_vertex()]
            E = rng.sample(pool, min(len(pool), rng.randint(0, 3)))
            worst = max(worst, shift_gaps_check(T, E, mu))
        return [("shift-gaps", worst <= tol, {"deviation": worst})]

    def gauge():
        if T.basis is None:
            return [("gauge", None, {"detail": "bundle has no basis labels"})]
        zs = gauge_grid(graph)
        dev = gauge_unitary_check(T, zs)
        worst = 0.0
        rng = rng_for("gauge")
        for _ in range(5):
            terms = {}
            for _ in range(4):
                lam = rng.choice(all_paths)
                mates = [p for p in all_paths if p.source == lam.source]
                mu = rng.choice(mates)
                terms[(lam, mu)] = terms.get((lam, mu), 0) + Fraction(rng.randint(-2, 2))
            a = FormalElement(terms)
            import numpy as np

            avg = sampled_gauge_average(T, a, zs)
            exact = evaluate(gauge_expectation(a), T).to_dense()
            worst = max(worst, float(np.abs(avg - exact).max()))
        return [
            ("gauge-unitaries", dev <= 1e-12, {"deviation": dev}),
            ("gauge-expectation-vs-average", worst <= 1e-9, {"deviation": worst}),
        ]

    def contraction():
        hyp = check_uniqueness_hypotheses(T, S)
        if not hyp.all_ok:
            return [("expectation-contraction", None, {"detail": "hypotheses not met"})]
        ok = True
        rng = rng_for("contraction")
        for _ in range(10):
            terms = {}
            for _ in range(5):
                lam = rng.choice(all_paths)
                mates = [p for p in all_paths if p.source == lam.source]
                mu = rng.choice(mates)
                terms[(lam, mu)] = terms.get((lam, mu), 0) + Fraction(rng.randint(-3, 3))
            lhs, rhs = expectation_contraction_check(T, FormalElement(terms), hyp)
            ok = ok and lhs <= rhs + 1e-9
        return [("expectation-contraction", ok, {})]

    def boundary_existence():
        ok = True
        for v in graph.vertices:
            ok = ok and len(boundary_paths(v, S)) > 0
        return [("boundary-existence", ok, {})]

    stages = [relations, matrix_units, gaps, faithful, shift_gaps, gauge, contraction, boundary_existence]
    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            chunks = list(pool.map(lambda f: f(), stages))
    else:
        chunks = [f() for f in stages]
    for chunk in chunks:
        for name, ok, extra in chunk:
            report.add(name, ok, **extra)

    report.emit(args.json)
    return 1 if report.failed else 0


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kgraphck",
        description="Path combinatorics and Cuntz-Krieger family checks on k-graph files",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("graph", help="graph JSON file")
        p.add_argument("--json", action="store_true", help="emit a JSON report")
        p.add_argument("--budget", type=int, default=200_000)
        p.add_argument("--seed", type=int, default=0)
        return p

    common(sub.add_parser("validate")).set_defaults(fn=cmd_validate)

    p = common(sub.add_parser("paths"))
    p.add_argument("vertex")
    p.add_argument("--degree")
    p.add_argument("--depth")
    p.set_defaults(fn=cmd_paths)

    p = common(sub.add_parser("mce"))
    p.add_argument("mu")
    p.add_argument("nu")
    p.set_defaults(fn=cmd_mce)

    p = common(sub.add_parser("ext"))
    p.add_argument("mu")
    p.add_argument("family", nargs="+")
    p.set_defaults(fn=cmd_ext)

    p = common(sub.add_parser("pi-closure"))
    p.add_argument("family", nargs="+")
    p.set_defaults(fn=cmd_pi_closure)

    p = sub.add_parser("exhaustive")
    esub = p.add_subparsers(dest="subcommand", required=True)
    pc = common(esub.add_parser("check"))
    pc.add_argument("family", nargs="*")
    pc.add_argument("--vertex")
    pc.add_argument("--depth")
    pc.set_defaults(fn=cmd_exhaustive_check)
    pe = common(esub.add_parser("enumerate"))
    pe.add_argument("vertex")
    pe.add_argument("--depth", required=True)
    pe.add_argument("--max-size", type=int, default=4)
    pe.add_argument("--minimal", action="store_true")
    pe.set_defaults(fn=cmd_exhaustive_enumerate)

    p = common(sub.add_parser("satiate"))
    p.add_argument("--generators")
    p.add_argument("--depth")
    p.add_argument("--max-size", type=int, default=None)
    p.set_defaults(fn=cmd_satiate)

    p = sub.add_parser("boundary")
    bsub = p.add_subparsers(dest="subcommand", required=True)
    pl = common(bsub.add_parser("list"))
    pl.add_argument("--vertex")
    pl.add_argument("--generators")
    pl.add_argument("--depth")
    pl.add_argument("--max-size", type=int, default=None)
    pl.set_defaults(fn=cmd_boundary_list)
    pb = common(bsub.add_parser("construct"))
    pb.add_argument("vertex")
    pb.add_argument("--generators")
    pb.add_argument("--depth")
    pb.add_argument("--max-size", type=int, default=None)
    pb.add_argument("--avoid", nargs="+")
    pb.set_defaults(fn=cmd_boundary_construct)
    pa = common(bsub.add_parser("aperiodic"))
    pa.add_argument("path")
    pa.set_defaults(fn=cmd_boundary_aperiodic)
    pcc = common(bsub.add_parser("condition-c"))
    pcc.add_argument("--generators")
    pcc.add_argument("--depth")
    pcc.add_argument("--max-size", type=int, default=None)
    pcc.set_defaults(fn=cmd_boundary_condition_c)

    p = common(sub.add_parser("represent"))
    p.add_argument("--generators")
    p.add_argument("--depth")
    p.add_argument("--max-size", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_represent)

    p = common(sub.add_parser("verify"))
    p.add_argument("--all", action="store_true", help="run every check (the default)")
    p.add_argument("--generators")
    p.add_argument("--depth")
    p.add_argument("--max-size", type=int, default=None)
    p.add_argument("--backend", choices=("exact", "float"), default="exact")
    p.add_argument("--windows", type=int, default=5)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--bundle")
    p.set_defaults(fn=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except BUDGET_ERRORS as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3
    except KGraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
