"""Command-line front end.

Subcommands: gen | decompose | colour | shrink | vc | sensor | verify |
oracle.  Every decompose/colour run re-verifies its result through the
verification functions before reporting success, and reports are plain
``key=value`` lines so golden tests can diff them.  Wall-clock timings go
to stderr so that identical argv and seed produce byte-identical stdout.

Exit codes: 0 verified success, 1 verification failure, 2 usage or input
format error, 3 algorithm error (caps exceeded, infeasible LP, violated
structural guarantees).
"""

from __future__ import annotations

import argparse
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import generators, hypergraph, lll, sensor, split, treepaths, vc
from .errors import (
    ClaimViolation,
    FlowInfeasible,
    FormatError,
    InfeasibleLP,
    ResampleCapExceeded,
    SearchCapExceeded,
    StructureTheoremViolation,
)

ALGORITHM_ERRORS = (
    SearchCapExceeded,
    ResampleCapExceeded,
    InfeasibleLP,
    StructureTheoremViolation,
    FlowInfeasible,
    ClaimViolation,
    ValueError,
)


@dataclass
class RunReport:
    """One key=value record per run; the verdict is always recomputed."""

    file: str
    n: int
    m: int
    r: int
    R: int
    delta: int
    Delta: int
    strategy: str
    achieved: int | str
    achieved_key: str
    floor: int | str
    verified: bool
    seed: int

    def line(self) -> str:
        return (
            f"file={self.file} n={self.n} m={self.m} r={self.r} R={self.R} "
            f"delta={self.delta} Delta={self.Delta} strategy={self.strategy} "
            f"{self.achieved_key}={self.achieved} floor={self.floor} "
            f"verified={str(self.verified).lower()} seed={self.seed}"
        )


def _stats(h: hypergraph.Hypergraph):
    return (
        h.n_vertices,
        h.n_edges,
        h.min_edge_size(),
        h.max_edge_size(),
        h.min_degree(),
        h.max_degree(),
    )


def _load_hypergraph(path: str) -> hypergraph.Hypergraph:
    return hypergraph.parse_hypergraph(Path(path).read_text())


def _load_tree_paths(path: str) -> treepaths.TreePathInstance:
    return treepaths.parse_tree_paths(Path(path).read_text())


def _format_parts(dec: hypergraph.CoverDecomposition) -> str:
    return "".join(f"{i} {p}\n" for i, p in enumerate(dec.part_of))


def _parse_parts(text: str, n_edges: int) -> hypergraph.CoverDecomposition:
    part_of = [None] * n_edges
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            i, p = (int(x) for x in line.split())
        except ValueError:
            raise FormatError(f"bad decomposition line {line!r}") from None
        if not 0 <= i < n_edges:
            raise FormatError(f"edge id {i} out of range")
        if part_of[i] is not None:
            raise FormatError(f"edge id {i} assigned twice")
        part_of[i] = p
    if any(p is None for p in part_of):
        raise FormatError("decomposition does not assign every edge")
    return hypergraph.CoverDecomposition(part_of, max(part_of) + 1 if part_of else 1)


def _format_colours(colours) -> str:
    return "".join(f"{i} {c}\n" for i, c in enumerate(colours))


# ---------------------------------------------------------------------------
# per-file workers (top level so --jobs can pickle them)


def _decompose_file(path: str, opt: dict) -> tuple[int, list[str], str | None]:
    strategy = opt["strategy"]
    seed = opt["seed"]
    if strategy == "treepaths":
        inst = _load_tree_paths(path)
        view = treepaths.path_hypergraph(inst)
        dec = treepaths.tree_cover_decompose(inst)
        verified = treepaths.verify_tree_cover(inst, dec)
        n, m, r, R, d, D = _stats(view)
        floor = 1 + (d - 1) // 5
    else:
        h = _load_hypergraph(path)
        n, m, r, R, d, D = _stats(h)
        if strategy == "lll":
            t = opt.get("colours") or lll.lll_target_colours(max(R, 1), max(d, 1))
            cfg = lll.LllConfig(t=t, seed=seed, max_resamples=opt.get("cap"))
            dec = lll.moser_tardos_decompose(h, cfg)
            floor = lll.lll_target_colours(max(R, 1), max(d, 1))
        elif strategy == "split":
            plan = split.SplitPlan(
                strategy=opt.get("split_with", "beck_fiala"),
                stop_rule="polylog_T" if opt.get("stop") == "polylog" else "range_R_4R",
            )
            cfg = lll.LllConfig(t=None, seed=seed, max_resamples=opt.get("cap"))
            dec = split.recursive_decompose(h, plan, cfg)
            floor = lll.lll_target_colours(max(R, 1), max(d, 1))
        elif strategy == "crossfree":
            dec = vc.crossfree_decompose(h)
            floor = (d + 1) // 2
        elif strategy == "laminar":
            dec = vc.laminar_decompose(h)
            floor = d
        else:
            raise ValueError(f"unknown strategy {strategy!r}")
        verified = hypergraph.verify_cover_decomposition(h, dec)
    report = RunReport(
        file=path, n=n, m=m, r=r, R=R, delta=d, Delta=D,
        strategy=strategy, achieved=dec.k, achieved_key="parts",
        floor=floor, verified=verified, seed=seed,
    )
    return (0 if verified else 1), [report.line()], _format_parts(dec)


def _colour_file(path: str, opt: dict) -> tuple[int, list[str], str | None]:
    strategy = opt["strategy"]
    k = opt["colours"]
    seed = opt["seed"]
    if strategy == "level":
        inst = _load_tree_paths(path)
        view = treepaths.path_hypergraph(inst)
        colours = treepaths.level_colouring(inst, k)
        verified = treepaths.verify_tree_polychromatic(inst, colours, k)
        n, m, r, R, d, D = _stats(view)
        floor = (r + 1) // 2
        artifact = _format_colours(colours)
    elif strategy == "crossfree":
        h = _load_hypergraph(path)
        n, m, r, R, d, D = _stats(h)
        colouring = vc.crossfree_polychromatic(h, k)
        colours = colouring.colour_of
        verified = hypergraph.verify_polychromatic(h, colouring)
        floor = (r + 1) // 2
        artifact = _format_colours(colours)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    report = RunReport(
        file=path, n=n, m=m, r=r, R=R, delta=d, Delta=D,
        strategy=strategy, achieved=k, achieved_key="colours",
        floor=floor, verified=verified, seed=seed,
    )
    return (0 if verified else 1), [report.line()], artifact


def _shrink_file(path: str, opt: dict) -> tuple[int, list[str], str | None]:
    h = _load_hypergraph(path)
    shrunk = split.flow_shrink(h, opt["alpha"], opt["beta"])
    n, m, r, R, d, D = _stats(shrunk)
    line = (
        f"file={path} n={n} m={m} r={r} R={R} delta={d} Delta={D} "
        f"strategy=flow-shrink alpha={opt['alpha']} beta={opt['beta']}"
    )
    return 0, [line], hypergraph.format_hypergraph(shrunk)


def _vc_file(path: str, opt: dict) -> tuple[int, list[str], str | None]:
    h = _load_hypergraph(path)
    report = vc.vc_dimension(h, cap=opt.get("cap") or vc.DEFAULT_VC_CAP)
    line = (
        f"file={path} vc_dim={report.vc_dim} witness={list(report.witness)} "
        f"dual_vc_dim={report.dual_vc_dim} dual_witness={list(report.dual_witness)} "
        f"cross_free={str(vc.is_cross_free(h)).lower()} "
        f"laminar={str(vc.is_laminar(h)).lower()}"
    )
    return 0, [line], None


def _sensor_file(path: str, opt: dict) -> tuple[int, list[str], str | None]:
    g = sensor.parse_sensor_instance(Path(path).read_text())
    schedule = sensor.sensor_schedule(g)
    db = sensor.weighted_min_degree(g)
    target = Fraction(db, 8)
    verified = sensor.verify_coverage(g, schedule.start) >= target
    lines = [
        f"file={path} n={g.n_vertices} m={len(g.edges)} delta_bar={db} "
        f"coverage={schedule.coverage} floor={target} "
        f"verified={str(verified).lower()}"
    ]
    lines += [f"edge={i} start={s}" for i, s in enumerate(schedule.start)]
    return (0 if verified else 1), lines, None


def _oracle_file(path: str, opt: dict) -> tuple[int, list[str], str | None]:
    h = _load_hypergraph(path)
    which = opt["which"]
    cap = opt.get("cap")
    if which == "p":
        value = hypergraph.oracle_p(h, cap or hypergraph.DEFAULT_ORACLE_VERTEX_CAP)
        return 0, [f"p={value}"], None
    if which == "pprime":
        value = hypergraph.oracle_pprime(h, cap or hypergraph.DEFAULT_ORACLE_EDGE_CAP)
        return 0, [f"pprime={value}"], None
    value = hypergraph.min_set_cover_size(
        h, exact=not opt.get("approx"), cap=cap or hypergraph.DEFAULT_COVER_EDGE_CAP
    )
    key = "mincover_upper" if opt.get("approx") else "mincover"
    return 0, [f"{key}={value}"], None


_WORKERS = {
    "decompose": _decompose_file,
    "colour": _colour_file,
    "shrink": _shrink_file,
    "vc": _vc_file,
    "sensor": _sensor_file,
    "oracle": _oracle_file,
}


def _run_task(task):
    command, path, opt = task
    try:
        return _WORKERS[command](path, opt)
    except FormatError as exc:
        return 2, [f"error: {path}: {exc}"], None
    except ALGORITHM_ERRORS as exc:
        return 3, [f"error: {path}: {exc}"], None


# ---------------------------------------------------------------------------
# argument parsing


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="coverdecomp",
        description="cover decomposition, polychromatic colouring and "
        "sensor scheduling for hypergraphs",
    )
    top.add_argument("--seed", type=int, default=0, help="seed for randomized strategies")
    top.add_argument("--jobs", type=int, default=1, help="parallel workers across input files")
    # accepted both before and after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS)
    sub = top.add_subparsers(dest="command", required=True)

    def add_parser(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    g = add_parser("gen", help="emit a generated instance")
    g.add_argument(
        "kind",
        choices=[
            "kneser-dual", "fano", "ptt", "random", "tary",
            "complement-singletons", "random-tree-paths", "replicate",
        ],
    )
    g.add_argument("base", nargs="?", help="input .hg file (replicate only)")
    g.add_argument("--k", type=int)
    g.add_argument("--n", type=int)
    g.add_argument("--mu", type=int)
    g.add_argument("--paths", type=int)
    g.add_argument("--min-len", type=int, default=1)
    g.add_argument("--edge-size", type=int, help="target max edge size (random kind)")
    g.add_argument("--degree", type=int, help="target min degree (random kind)")
    g.add_argument("-o", "--output")

    d = add_parser("decompose", help="decompose the edges into covers")
    d.add_argument("--strategy", required=True,
                   choices=["lll", "split", "crossfree", "laminar", "treepaths"])
    d.add_argument("--colours", type=int, help="colour target (lll strategy)")
    d.add_argument("--stop", choices=["range", "polylog"], default="range")
    d.add_argument("--split-with", choices=["beck_fiala", "chernoff"],
                   default="beck_fiala")
    d.add_argument("--cap", type=int, help="resample cap override")
    d.add_argument("-o", "--output", help="write `edgeId partLabel` lines here")
    d.add_argument("files", nargs="+")

    c = add_parser("colour", help="polychromatic vertex/tree-edge colouring")
    c.add_argument("--strategy", required=True, choices=["crossfree", "level"])
    c.add_argument("-k", "--colours", type=int, required=True)
    c.add_argument("-o", "--output")
    c.add_argument("files", nargs="+")

    s = add_parser("shrink", help="flow-based degree/size shrinking")
    s.add_argument("--alpha", type=int, required=True)
    s.add_argument("--beta", type=int, required=True)
    s.add_argument("-o", "--output")
    s.add_argument("files", nargs="+")

    v = add_parser("vc", help="VC dimension and set-system structure")
    v.add_argument("--cap", type=int)
    v.add_argument("files", nargs="+")

    sn = add_parser("sensor", help="sensor-cover scheduling")
    sn.add_argument("action", choices=["schedule"])
    sn.add_argument("files", nargs="+")

    ver = add_parser("verify", help="re-check a decomposition file")
    ver.add_argument("instance")
    ver.add_argument("parts")

    o = add_parser("oracle", help="exact p / p' / minimum cover size")
    o.add_argument("which", choices=["p", "pprime", "mincover"])
    o.add_argument("--cap", type=int)
    o.add_argument("--approx", action="store_true",
                   help="greedy upper bound instead of the exact minimum (mincover)")
    o.add_argument("files", nargs="+")
    return top


def _cmd_gen(args) -> int:
    kind_map = {
        "kneser-dual": ("kneser_dual", lambda a: {"k": a.k}),
        "fano": ("fano", lambda a: {}),
        "ptt": ("ptt", lambda a: {"k": a.k}),
        "random": ("random", lambda a: {
            "R_target": a.edge_size, "delta_target": a.degree, "seed": a.seed}),
        "tary": ("tary_counterexample", lambda a: {"k": a.k}),
        "complement-singletons": ("complement_singletons", lambda a: {"n": a.n}),
        "random-tree-paths": ("random_tree_paths", lambda a: {
            "n": a.n, "n_paths": a.paths, "min_len": a.min_len, "seed": a.seed}),
        "replicate": ("replicate", lambda a: {"mu": a.mu}),
    }
    kind, param_fn = kind_map[args.kind]
    params = param_fn(args)
    if any(v is None for v in params.values()):
        missing = [k for k, v in params.items() if v is None]
        print(f"error: gen {args.kind} is missing parameters: {missing}", file=sys.stderr)
        return 2
    base = None
    if kind == "replicate":
        if not args.base:
            print("error: replicate needs an input .hg file", file=sys.stderr)
            return 2
        base = _load_hypergraph(args.base)
    out = generators.generate(generators.GenSpec(kind=kind, params=params, base=base))
    if isinstance(out, treepaths.TreePathInstance):
        text = treepaths.format_tree_paths(out)
        summary = f"kind={args.kind} n={out.n_vertices} paths={out.n_paths}"
    else:
        text = hypergraph.format_hypergraph(out)
        summary = f"kind={args.kind} n={out.n_vertices} m={out.n_edges}"
    if args.output:
        Path(args.output).write_text(text)
        print(f"wrote={args.output} {summary}")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_verify(args) -> int:
    if args.instance.endswith(".tp"):
        inst = _load_tree_paths(args.instance)
        view = treepaths.path_hypergraph(inst)
    else:
        view = _load_hypergraph(args.instance)
    dec = _parse_parts(Path(args.parts).read_text(), view.n_edges)
    ok = hypergraph.verify_cover_decomposition(view, dec)
    print(f"file={args.instance} parts={dec.k} verified={str(ok).lower()}")
    return 0 if ok else 1


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2

    t0 = time.perf_counter()
    try:
        if args.command == "gen":
            code = _cmd_gen(args)
        elif args.command == "verify":
            code = _cmd_verify(args)
        else:
            code = _cmd_files(args)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = 2
    except ALGORITHM_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = 3
    print(f"wall_ms={int(1000 * (time.perf_counter() - t0))}", file=sys.stderr)
    return code


def _cmd_files(args) -> int:
    opt = {k: v for k, v in vars(args).items() if k not in ("command", "files", "jobs")}
    opt.setdefault("seed", 0)
    if args.command == "sensor":
        pass  # action already validated by argparse
    if args.command == "oracle":
        opt["which"] = args.which
    if getattr(args, "output", None) and len(args.files) > 1:
        print("error: -o/--output needs exactly one input file", file=sys.stderr)
        return 2
    tasks = [(args.command, path, opt) for path in args.files]
    if args.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_run_task, tasks))
    else:
        results = [_run_task(t) for t in tasks]
    worst = 0
    for (code, lines, artifact), (_cmd, path, _o) in zip(results, tasks):
        for line in lines:
            print(line, file=sys.stderr if code >= 2 else sys.stdout)
        if artifact is not None and getattr(args, "output", None):
            Path(args.output).write_text(artifact)
        worst = max(worst, code)
    return worst


if __name__ == "__main__":
    sys.exit(main())
