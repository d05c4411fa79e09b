"""Command line entry point ``salbp``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from salbp import domlab
from salbp.bounds import ProblemSpec, Type1, Type2, make_bounds_context, window_table
from salbp.errors import SalbpError
from salbp.exact import salbp1_opt, salbp2_opt
from salbp.formulations import all_configs, build_model, model_stats, parse_config
from salbp.instances import alb_metadata, dumps, format_alb, read_instance
from salbp.lp import (
    MipStatus,
    decode_optimum,
    export_lp_text,
    export_mps,
    solve_bnb,
    solve_lp,
    triangular,
)

CONFIG_HELP = """\
Formulation labels: FAMILY-LEVEL with FAMILY in PA, BW, TS, RC1, RC2 (impulse
variables) or SC (step variables) and LEVEL 1-4.  The compact names
PA1 .. RC'4 are accepted too: RC means RC1 and RC' means RC2.  'all' expands
to every label.
"""

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunRecord:
    instance: str
    spec: str
    config: str
    lp_bound: float | None
    mip_status: str
    mip_objective: float | None
    optimum: int | None
    nodes: int
    wall_time: float
    deviation: float | None

    FIELDS = (
        "instance", "spec", "config", "lp_bound", "mip_status",
        "mip_objective", "optimum", "nodes", "wall_time", "deviation",
    )  # fmt: skip

    def row(self) -> list[str]:
        def fmt(v):
            if v is None:
                return ""
            if isinstance(v, float):
                return f"{v:.6f}"
            return str(v)

        return [fmt(getattr(self, f)) for f in self.FIELDS]


# -- argument helpers ------------------------------------------------------------


def _spec_args(p: argparse.ArgumentParser, auto: bool = False) -> None:
    g = p.add_mutually_exclusive_group(required=not auto)
    extra = {"nargs": "?", "const": -1} if auto else {}
    g.add_argument("--type1", metavar="C", type=int, help="minimize stations for cycle time C", **extra)
    g.add_argument("--type2", metavar="M", type=int, help="minimize cycle time for M stations", **extra)


def _spec(args) -> ProblemSpec:
    if args.type1 is not None:
        return Type1(args.type1)
    return Type2(args.type2)


def _configs(text: str):
    if text.strip().lower() == "all":
        return all_configs()
    try:
        return [parse_config(tok.strip()) for tok in text.split(",") if tok.strip()]
    except SalbpError as exc:
        raise UsageError(str(exc)) from None


def _config(text: str):
    cfgs = _configs(text)
    if len(cfgs) != 1:
        raise UsageError("exactly one formulation label expected")
    return cfgs[0]


def _model(args):
    inst = read_instance(args.instance)
    spec = _spec(args)
    cfg = _config(args.config)
    return inst, spec, cfg, build_model(inst, spec, cfg)


def _optimum(inst, spec) -> int:
    if isinstance(spec, Type1):
        return salbp1_opt(inst, spec.c)[0]
    return salbp2_opt(inst, spec.m)[0]


def _deviation(spec, lp_value, optimum) -> float:
    ref = triangular(optimum) if isinstance(spec, Type1) else optimum
    return 100.0 * (ref - lp_value) / ref


# -- subcommands ---------------------------------------------------------------------


def cmd_parse(args) -> int:
    inst = read_instance(args.instance)
    print(format_alb(inst) if args.format == "alb" else dumps(inst), end="")
    return EXIT_OK


def cmd_bounds(args) -> int:
    inst = read_instance(args.instance)
    ctx = make_bounds_context(inst, _spec(args))
    print(f"# stations {ctx.m_lower}..{ctx.m_upper}  cycle time {ctx.c_lower}..{ctx.c_upper}")
    print(window_table(ctx), end="")
    return EXIT_OK


def cmd_build(args) -> int:
    _, _, _, model = _model(args)
    print(model_stats(model))
    return EXIT_OK


def cmd_export(args) -> int:
    _, _, _, model = _model(args)
    text = export_lp_text(model) if args.format == "lp" else export_mps(model)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        print(text, end="")
    return EXIT_OK


def cmd_solve_lp(args) -> int:
    _, _, _, model = _model(args)
    sol = solve_lp(model)
    print(f"status={sol.status.value}")
    if sol.optimal:
        print(f"objective={sol.objective:.6f}")
    print(f"iterations={sol.iterations}")
    return EXIT_OK if sol.optimal else EXIT_FAIL


def cmd_solve_mip(args) -> int:
    _, spec, _, model = _model(args)
    res = solve_bnb(model, node_limit=args.node_limit, gap=args.tol, time_limit=args.time_limit)
    print(f"status={res.status.value}")
    if res.values is not None:
        print(f"objective={res.objective:.6f}")
        name = "m" if isinstance(spec, Type1) else "c"
        print(f"{name}={decode_optimum(model, res.values)}")
    print(f"nodes={res.nodes}")
    return EXIT_FAIL if res.status == MipStatus.INFEASIBLE else EXIT_OK


def cmd_solve_exact(args) -> int:
    inst = read_instance(args.instance)
    spec = _spec(args)
    if isinstance(spec, Type1):
        value, assignment = salbp1_opt(inst, spec.c)
        print(f"m*={value}")
    else:
        value, assignment = salbp2_opt(inst, spec.m)
        print(f"c*={value}")
    print(assignment.pairs())
    return EXIT_OK


def cmd_deviation(args) -> int:
    inst, spec, cfg, model = _model(args)
    sol = solve_lp(model)
    if not sol.optimal:
        print(f"status={sol.status.value}")
        return EXIT_FAIL
    opt = args.reference if args.reference is not None else _optimum(inst, spec)
    print(f"lp_bound={sol.objective:.6f}")
    print(f"optimum={opt}")
    print(f"deviation={_deviation(spec, sol.objective, opt):.3f}%")
    return EXIT_OK


def cmd_domlab(args) -> int:
    fidelity = domlab.registry_fidelity()
    rm = domlab.relation_matrix(seed=args.seed, trials=args.trials)
    print(rm.table())
    devs = rm.deviations()
    for a, b, got, want in devs:
        print(f"deviation: ({a},{b}) is {got.value}, reference {want.value}", file=sys.stderr)
    for label, bad in fidelity.items():
        print(f"registry point {label} disagrees on {sorted(bad)}", file=sys.stderr)
    return EXIT_FAIL if devs or fidelity else EXIT_OK


def _auto_spec(path: Path, kind: str) -> ProblemSpec:
    side = path.with_name(path.stem + ".meta.json")
    meta: dict = {}
    if side.exists():
        meta = json.loads(side.read_text(encoding="utf-8"))
    elif path.suffix.lower() != ".json":
        meta = alb_metadata(path.read_text(encoding="utf-8"))
    key = "c" if kind == "type1" else "m"
    if key not in meta:
        raise UsageError(f"{path.name}: no {'cycle time' if key == 'c' else 'station count'} in metadata")
    return Type1(int(meta[key])) if kind == "type1" else Type2(int(meta[key]))


def run_one(path: str, spec: ProblemSpec, label: str, node_limit: int, time_limit, tol: float) -> RunRecord:
    inst = read_instance(path)
    cfg = parse_config(label)
    start = time.perf_counter()
    model = build_model(inst, spec, cfg)
    lp = solve_lp(model)
    res = solve_bnb(model, node_limit=node_limit, gap=tol, time_limit=time_limit)
    wall = time.perf_counter() - start
    optimum = decode_optimum(model, res.values) if res.values is not None else None
    lp_value = lp.objective if lp.optimal else None
    deviation = None
    if res.status == MipStatus.OPTIMAL and lp_value is not None:
        deviation = _deviation(spec, lp_value, optimum)
    return RunRecord(
        inst.name, str(spec), cfg.label, lp_value, res.status.value,
        res.objective, optimum, res.nodes, wall, deviation,
    )  # fmt: skip


def cmd_batch(args) -> int:
    root = Path(args.directory)
    if not root.is_dir():
        raise UsageError(f"{root} is not a directory")
    files = sorted(
        p for p in root.iterdir()
        if p.is_file() and (p.suffix.lower() in (".alb", ".in2", ".txt") or
                            (p.suffix.lower() == ".json" and not p.name.endswith(".meta.json")))
    )  # fmt: skip
    configs = _configs(args.configs)
    if args.type1 is None and args.type2 is None:
        raise UsageError("one of --type1 or --type2 is required")
    kind = "type1" if args.type1 is not None else "type2"
    value = args.type1 if kind == "type1" else args.type2
    jobs = []
    for path in files:
        if args.auto or value == -1:
            spec = _auto_spec(path, kind)
        else:
            spec = Type1(value) if kind == "type1" else Type2(value)
        for cfg in configs:
            jobs.append((str(path), spec, cfg.label, args.node_limit, args.time_limit, args.tol))

    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            records = list(pool.map(run_one, *zip(*jobs))) if jobs else []
    else:
        records = [run_one(*job) for job in jobs]

    buf = io.StringIO()
    if args.format == "csv":
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(RunRecord.FIELDS)
        for rec in records:
            w.writerow(rec.row())
    else:
        rows = [list(RunRecord.FIELDS)] + [rec.row() for rec in records]
        widths = [max(len(r[k]) for r in rows) for k in range(len(rows[0]))]
        for r in rows:
            buf.write("  ".join(cell.ljust(wd) for cell, wd in zip(r, widths)).rstrip() + "\n")
    if args.out:
        Path(args.out).write_text(buf.getvalue(), encoding="utf-8")
    else:
        sys.stdout.write(buf.getvalue())
    failed = any(rec.mip_status == MipStatus.INFEASIBLE.value for rec in records)
    return EXIT_FAIL if failed else EXIT_OK


# -- parser ----------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="salbp",
        description="Assembly line balancing models: build, relax, solve and compare.",
        epilog=CONFIG_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_instance(name, help_text, spec=True, config=False):
        q = sub.add_parser(name, help=help_text, epilog=CONFIG_HELP,
                           formatter_class=argparse.RawDescriptionHelpFormatter)  # fmt: skip
        if spec:
            _spec_args(q)
        if config:
            q.add_argument("--config", required=True, help="formulation label, e.g. RC2-4")
        q.add_argument("instance", help="instance file (.alb or .json)")
        return q

    q = with_instance("parse", "read an instance and print it in canonical form", spec=False)
    q.add_argument("--format", choices=("json", "alb"), default="json")
    q.set_defaults(func=cmd_parse)

    with_instance("bounds", "print station windows").set_defaults(func=cmd_bounds)
    with_instance("build", "print model statistics", config=True).set_defaults(func=cmd_build)

    q = with_instance("export", "write the model as MPS or LP text", config=True)
    q.add_argument("--format", choices=("mps", "lp"), default="mps")
    q.add_argument("--out")
    q.set_defaults(func=cmd_export)

    with_instance("solve-lp", "solve the LP relaxation", config=True).set_defaults(func=cmd_solve_lp)

    q = with_instance("solve-mip", "solve the model by branch and bound", config=True)
    _solver_args(q)
    q.set_defaults(func=cmd_solve_mip)

    with_instance("solve-exact", "combinatorial optimum").set_defaults(func=cmd_solve_exact)

    q = with_instance("deviation", "LP bound gap to the optimum", config=True)
    q.add_argument("--reference", type=int, help="known optimum (stations or cycle time)")
    q.set_defaults(func=cmd_deviation)

    q = sub.add_parser("domlab", help="check the relations between precedence families")
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--trials", type=int, default=2000, help="samples per shape")
    q.set_defaults(func=cmd_domlab)

    q = sub.add_parser("batch", help="run configs over a directory, one CSV row per run",
                       epilog=CONFIG_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)  # fmt: skip
    _spec_args(q, auto=True)
    q.add_argument("--auto", action="store_true",
                   help="take c or m from <stem>.meta.json or the instance file")  # fmt: skip
    q.add_argument("--configs", default="all", help="comma-separated labels")
    _solver_args(q)
    q.add_argument("--jobs", type=int, default=1)
    q.add_argument("--seed", type=int, default=0, help="unused by the deterministic pipeline")
    q.add_argument("--format", choices=("csv", "table"), default="csv")
    q.add_argument("--out")
    q.add_argument("directory")
    q.set_defaults(func=cmd_batch)
    return p


def _solver_args(q) -> None:
    q.add_argument("--node-limit", type=int, default=1_000_000)
    q.add_argument("--time-limit", type=float, default=None, help="wall clock seconds (soft)")
    q.add_argument("--tol", type=float, default=1e-6, help="pruning gap")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"salbp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SalbpError as exc:
        print(f"salbp: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as exc:
        print(f"salbp: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
