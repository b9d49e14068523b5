"""Command line interface: gen, solve, compare, render, bench.

Exit codes are part of the contract so scripts can gate on them:
0 success, 2 usage error, 3 generation failure, 4 unreadable or invalid
input, 5 bound-check failure in compare.

Every command is deterministic given its flags and inputs (timing fields
excepted).  solve and compare append one JSON line per run to a results
log unless --no-log is passed.
"""

import argparse
import json
import math
import statistics
import sys
import time
from pathlib import Path

from . import __version__
from .decompose import PartSolution, solve_full, solve_two_sided
from .errors import (
    CapExceeded,
    GenerationFailed,
    InfeasibleInput,
    ModeMismatch,
    ParseError,
    PlyCoverError,
    PointOutsideSlab,
    SquareMissesLine,
    SquareMissesSlab,
    UncoveredPoint,
    ValidationError,
)
from .geometry import CLIP_NONE, ClipRegion
from .greedy import solve_one_side
from .instances import (
    GenParams,
    Instance,
    Solution,
    gen_general_instance,
    gen_line_instance,
    gen_slab_instance,
    read_instance,
    read_solution,
    write_instance,
    write_solution,
)
from .slab import SlabContext, solve_slab, validate_structure
from .verify import DEFAULT_ORACLE_CAP, brute_force_opt, check_bounds, prune_redundant

SOLVE_MODES = ("line1", "line2", "slab", "full")

_INPUT_ERRORS = (
    ParseError,
    ValidationError,
    UncoveredPoint,
    SquareMissesLine,
    SquareMissesSlab,
    PointOutsideSlab,
    ModeMismatch,
    InfeasibleInput,
    CapExceeded,
    OSError,
)


def _append_log(args, record: dict) -> None:
    if getattr(args, "no_log", False):
        return
    record["version"] = __version__
    line = json.dumps(record, sort_keys=True) + "\n"
    with open(args.log, "a", encoding="utf-8") as fh:
        fh.write(line)
        fh.flush()


def _witness_doc(region) -> dict | None:
    if region is None:
        return None
    return {
        "rect": list(region.rect),
        "depth": region.depth,
        "clique": sorted(region.clique),
        "anchor": region.anchor,
    }


def _gen_params(args) -> GenParams:
    return GenParams(
        n=args.n,
        m=args.m,
        x_span=args.x_span,
        y_span=args.y_span,
        jitter=args.jitter,
        allow_degenerate=args.allow_degenerate,
    )


def _generate(mode: str, params: GenParams, seed, side="below", name=None) -> Instance:
    if mode == "line":
        return gen_line_instance(params, seed, side=side, name=name)
    if mode == "slab":
        return gen_slab_instance(params, seed, name=name)
    return gen_general_instance(params, seed, name=name)


def cmd_gen(args) -> int:
    inst = _generate(args.mode, _gen_params(args), args.seed, side=args.side, name=args.name)
    write_instance(inst, args.out)
    print(f"wrote {args.out} (n={inst.n} m={inst.m} mode={inst.mode})")
    return 0


def _line_side(inst: Instance) -> str:
    ys = [p.y for p in inst.points]
    if all(y <= inst.line_y for y in ys):
        return "below"
    if all(y > inst.line_y for y in ys):
        return "above"
    raise ModeMismatch("points lie on both sides of the line; use mode line2")


def _solve_instance(inst: Instance, mode: str):
    """Dispatch one solve; returns (square_ids, ply, witness_region, parts)."""
    if mode == "line1":
        if inst.mode != "line":
            raise ModeMismatch(f"mode line1 needs a line instance, got {inst.mode}")
        entry = solve_one_side(inst.line_y, inst.squares, inst.points, _line_side(inst))
        return entry.squares, entry.ply, entry.region, ()
    if mode == "line2":
        if inst.mode != "line":
            raise ModeMismatch(f"mode line2 needs a line instance, got {inst.mode}")
        merged = solve_two_sided(inst.line_y, inst.squares, inst.points)
        parts = tuple((str(p.key), tuple(sorted(p.square_ids)), p.ply) for p in merged.parts)
        return merged.square_ids, merged.ply, merged.witness, parts
    if mode == "slab":
        if inst.mode != "slab":
            raise ModeMismatch(f"mode slab needs a slab instance, got {inst.mode}")
        ctx = SlabContext(*inst.slab_y)
        entry = solve_slab(ctx, inst.squares, inst.points)
        return entry.squares, entry.ply, entry.region, ()
    if mode == "full":
        if inst.mode != "general":
            raise ModeMismatch(f"mode full needs a general instance, got {inst.mode}")
        merged = solve_full(inst.points, inst.squares)
        parts = tuple((str(p.key), tuple(sorted(p.square_ids)), p.ply) for p in merged.parts)
        return merged.square_ids, merged.ply, merged.witness, parts
    raise ModeMismatch(f"unknown solve mode {mode!r}")


def cmd_solve(args) -> int:
    inst = read_instance(args.input)
    t0 = time.perf_counter()
    ids, ply, witness, parts = _solve_instance(inst, args.mode)
    ms = int(round((time.perf_counter() - t0) * 1000))
    out = args.out or str(args.input) + ".sol"
    sol = Solution(
        inst.name,
        inst.sha256,
        args.mode,
        tuple(sorted(ids)),
        ply,
        _witness_doc(witness),
        parts,
    )
    write_solution(sol, out)
    print(f"ply={ply} squares={len(ids)} time={ms}ms")
    _append_log(
        args,
        {"cmd": "solve", "instance": inst.name, "mode": args.mode, "ply": ply,
         "squares": len(ids), "wall_ms": ms, "out": str(out)},
    )
    return 0


def _oracle_for(inst: Instance, mode: str, cap: int):
    if mode == "line1":
        side = _line_side(inst)
        clip = (
            ClipRegion.below(inst.line_y)
            if side == "below"
            else ClipRegion.above(inst.line_y)
        )
    elif mode == "slab":
        clip = ClipRegion.slab(*inst.slab_y)
    else:
        clip = CLIP_NONE
    return brute_force_opt(inst.points, inst.squares, clip, cap)


def run_compare_one(inst: Instance, mode: str, cap: int = DEFAULT_ORACLE_CAP, solver=None):
    """Solve one instance, compare against the oracle, return the report."""
    solver = solver or _solve_instance
    ids, ply, witness, parts = solver(inst, mode)
    oracle = _oracle_for(inst, mode, cap)
    if mode == "line1":
        entry_like = _EntryShim(frozenset(ids), ply)
        report = check_bounds(entry_like, oracle, "line1", inst.name)
    elif mode == "line2":
        merged = _MergedShim(frozenset(ids), ply, parts)
        report = check_bounds(merged, oracle, "line2", inst.name)
    elif mode == "slab":
        ctx = SlabContext(*inst.slab_y)
        entry_like = _EntryShim(frozenset(ids), ply)
        report = check_bounds(
            entry_like, oracle, "slab", inst.name,
            points=inst.points, squares=inst.squares, ctx=ctx,
        )
        pruned = prune_redundant(ids, inst.points, inst.squares)
        structure = validate_structure(pruned, ctx, inst.points, inst.squares)
        report.checks["structure"] = structure.ok
        if not structure.ok:
            report.details["structure"] = str(structure)
    else:
        merged = _MergedShim(frozenset(ids), ply, parts)
        report = check_bounds(merged, oracle, "full", inst.name)
    return report


class _EntryShim:
    """Single-table cover stand-in for results not kept as CoverEntry."""

    def __init__(self, squares, ply):
        self.squares = squares
        self.ply = ply
        self.feasible = True


class _MergedShim:
    """Merged cover stand-in; parts keyed by slab index or side label."""

    def __init__(self, squares, ply, parts):
        self.square_ids = squares
        self.ply = ply
        self.parts = tuple(
            PartSolution(int(k) if str(k).lstrip("-").isdigit() else k, frozenset(ids), p)
            for k, ids, p in parts
        )


TSV_COLUMNS = (
    "instance", "mode", "n", "m", "sol_ply", "opt_ply", "ratio",
    "bound", "k3", "k9", "triple_sum", "row_bounds", "structure", "passed",
)


def _tsv_row(inst: Instance, report) -> str:
    def cell(v):
        if v is None:
            return "-"
        if isinstance(v, bool):
            return "ok" if v else "FAIL"
        if isinstance(v, float):
            return f"{v:.3f}"
        return str(v)

    vals = [
        inst.name, report.mode, inst.n, inst.m, report.sol_ply, report.opt_ply,
        report.ratio,
        report.checks.get("bound"), report.checks.get("k3"), report.checks.get("k9"),
        report.checks.get("triple_sum"), report.checks.get("row_bounds"),
        report.checks.get("structure"), report.passed,
    ]
    return "\t".join(cell(v) for v in vals)


def _compare_instances(args):
    """Yield the instances to compare: explicit files, else generated."""
    if args.input:
        for path in args.input:
            yield read_instance(path)
        return
    import random

    mode_map = {"line1": "line", "line2": "line", "slab": "slab", "full": "general"}
    gen_mode = mode_map[args.mode]
    meta = random.Random(args.seed)
    for i in range(args.count):
        n = meta.randint(1, args.n)
        m = meta.randint(1, args.m)
        params = GenParams(
            n=n, m=m, x_span=args.x_span, y_span=args.y_span, jitter=args.jitter
        )
        side = "both" if args.mode == "line2" else "below"
        seed = args.seed + i + 1
        yield _generate(gen_mode, params, seed, side=side, name=f"{args.mode}-{i:04d}-s{seed}")


def cmd_compare(args) -> int:
    if not args.input and args.m > args.oracle_cap:
        raise CapExceeded(args.m, args.oracle_cap)
    fixtures_dir = Path(args.fixtures_dir)
    report_dir = Path(args.report_dir) if args.report_dir else None
    rows = [("\t".join(TSV_COLUMNS))]
    print(rows[0])
    failures = []
    ratios = []
    count = 0
    t0 = time.perf_counter()
    for inst in _compare_instances(args):
        t_one = time.perf_counter()
        report = run_compare_one(inst, args.mode, cap=args.oracle_cap)
        one_ms = int(round((time.perf_counter() - t_one) * 1000))
        count += 1
        if report.ratio is not None:
            ratios.append(report.ratio)
        row = _tsv_row(inst, report)
        rows.append(row)
        print(row)
        _append_log(
            args,
            {"cmd": "compare", "instance": inst.name, "mode": args.mode,
             "ply": report.sol_ply, "oracle_ply": report.opt_ply,
             "passed": report.passed, "wall_ms": one_ms},
        )
        if not report.passed:
            fixtures_dir.mkdir(parents=True, exist_ok=True)
            fixture = fixtures_dir / f"fail-{args.mode}-{inst.name}.json"
            write_instance(inst, fixture)
            failures.append((inst, report, fixture))
            detail = "; ".join(report.details.values()) or "bound check failed"
            print(f"# FAIL {inst.name}: {detail} -> fixture {fixture}", file=sys.stderr)
    ms = int(round((time.perf_counter() - t0) * 1000))
    max_ratio = max(ratios) if ratios else None
    summary = (
        f"# checked={count} failures={len(failures)} "
        f"max_ratio={max_ratio if max_ratio is not None else '-'} time={ms}ms"
    )
    print(summary)

    if report_dir is not None:
        from .render import render_instance, render_ratio_histogram

        report_dir.mkdir(parents=True, exist_ok=True)
        (report_dir / "report.tsv").write_text("\n".join(rows) + "\n" + summary + "\n")
        render_ratio_histogram(ratios, report_dir / "ratios.svg",
                               title=f"{args.mode}: solver / optimum ply")
        for inst, report, _ in failures:
            render_instance(inst, None, report_dir / f"fail-{inst.name}.svg")

    _append_log(
        args,
        {"cmd": "compare-summary", "mode": args.mode, "checked": count,
         "failures": len(failures), "max_ratio": max_ratio, "wall_ms": ms},
    )
    return 5 if failures else 0


def cmd_render(args) -> int:
    from .render import render_instance

    inst = read_instance(args.input)
    sol = read_solution(args.solution) if args.solution else None
    render_instance(inst, sol, args.out)
    print(f"wrote {args.out}")
    return 0


def measure_solve_ms(inst: Instance, mode: str = "line1", reps: int = 3) -> float:
    """Median wall time in ms over reps solves of the same instance."""
    times = []
    for _ in range(reps):
        t0 = time.perf_counter()
        _solve_instance(inst, mode)
        times.append((time.perf_counter() - t0) * 1000.0)
    return statistics.median(times)


def run_bench(n_list, m_list, reps=3, seed=7, x_span=4.0, mode="line1"):
    """Time the solver over the (n, m) grid; returns rows (n, m, ms)."""
    rows = []
    for n in n_list:
        for m in m_list:
            params = GenParams(n=n, m=m, x_span=x_span)
            inst = gen_line_instance(params, seed, name=f"bench-n{n}-m{m}")
            rows.append((n, m, measure_solve_ms(inst, mode, reps)))
    return rows


def _fit_exponent(pairs) -> float | None:
    """Least-squares slope of log(time) vs log(size)."""
    pts = [(math.log(x), math.log(t)) for x, t in pairs if t > 0]
    if len(pts) < 2:
        return None
    mean_x = sum(x for x, _ in pts) / len(pts)
    mean_y = sum(y for _, y in pts) / len(pts)
    num = sum((x - mean_x) * (y - mean_y) for x, y in pts)
    den = sum((x - mean_x) ** 2 for x, _ in pts)
    return num / den if den else None


def cmd_bench(args) -> int:
    n_list = [int(v) for v in args.n_list.split(",")]
    m_list = [int(v) for v in args.m_list.split(",")]
    rows = run_bench(n_list, m_list, reps=args.reps, seed=args.seed, x_span=args.x_span)
    print("n\tm\treps\tmedian_ms")
    for n, m, ms in rows:
        print(f"{n}\t{m}\t{args.reps}\t{ms:.2f}")
    for n in n_list:
        exp = _fit_exponent([(m, ms) for rn, m, ms in rows if rn == n])
        if exp is not None:
            print(f"# m-exponent at n={n}: {exp:.2f}")
    for m in m_list:
        exp = _fit_exponent([(n, ms) for n, rm, ms in rows if rm == m])
        if exp is not None:
            print(f"# n-exponent at m={m}: {exp:.2f}")
    joint = _fit_exponent([(n * m, ms) for n, m, ms in rows])
    if joint is not None:
        print(f"# nm joint exponent: {joint:.2f}")
    if args.report_dir:
        from .render import render_scaling

        report_dir = Path(args.report_dir)
        report_dir.mkdir(parents=True, exist_ok=True)
        lines = ["n\tm\treps\tmedian_ms"] + [
            f"{n}\t{m}\t{args.reps}\t{ms:.2f}" for n, m, ms in rows
        ]
        (report_dir / "bench.tsv").write_text("\n".join(lines) + "\n")
        render_scaling(rows, report_dir / "scaling.svg")
    return 0


def _add_gen_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--x-span", type=float, default=4.0, help="width of the anchor window")
    p.add_argument("--y-span", type=float, default=2.0,
                   help="height of the anchor window (general mode)")
    p.add_argument("--jitter", type=float, default=1e-3,
                   help="margin between points and square edges")
    p.add_argument("--allow-degenerate", action="store_true",
                   help="skip boundary-degeneracy avoidance while sampling")


def _add_log_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--log", default="runs.jsonl", help="results log (JSON lines, appended)")
    p.add_argument("--no-log", action="store_true", help="do not append to the results log")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plycover",
        description="Minimum ply cover solvers for points under axis-parallel unit squares.",
    )
    parser.add_argument("--version", action="version", version=f"plycover {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random instance file")
    p.add_argument("--mode", choices=("line", "slab", "general"), required=True)
    p.add_argument("--n", type=int, required=True, help="number of points")
    p.add_argument("--m", type=int, required=True, help="number of squares")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--side", choices=("below", "above", "both"), default="below",
                   help="point side for line mode")
    p.add_argument("--name", default=None)
    p.add_argument("--out", required=True)
    _add_gen_flags(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="solve an instance file")
    p.add_argument("--mode", choices=SOLVE_MODES, required=True)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", default=None, help="solution path (default: <in>.sol)")
    _add_log_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("compare", help="solver vs brute-force oracle with bound checks")
    p.add_argument("--mode", choices=SOLVE_MODES, required=True)
    p.add_argument("--in", dest="input", nargs="*", default=[],
                   help="instance files (omit to generate --count instances)")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--n", type=int, default=8, help="max points per generated instance")
    p.add_argument("--m", type=int, default=8, help="max squares per generated instance")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--oracle-cap", type=int, default=DEFAULT_ORACLE_CAP)
    p.add_argument("--fixtures-dir", default="fixtures")
    p.add_argument("--report-dir", default=None,
                   help="write report.tsv plus figures to this directory")
    _add_gen_flags(p)
    _add_log_flags(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("render", help="render an instance (and solution) to a vector file")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--solution", default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("bench", help="timing table over an (n, m) grid")
    p.add_argument("--n-list", default="50,100,200")
    p.add_argument("--m-list", default="50,100,200")
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--x-span", type=float, default=4.0)
    p.add_argument("--report-dir", default=None)
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "n", None) is not None and args.n < 0:
        parser.error("--n must be non-negative")
    if getattr(args, "m", None) is not None and args.m < 1:
        parser.error("--m must be at least 1")
    try:
        return args.func(args)
    except GenerationFailed as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except PlyCoverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
