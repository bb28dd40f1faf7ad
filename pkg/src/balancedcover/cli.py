"""Command-line front end.

Subcommands: build-matrix (FASTA -> matrix file), solve (LP + rounding),
oracle (exhaustive optimum), gen (instance generators), bench (sweep to
CSV).  Exit codes: 0 success, 1 usage, 2 bad input data, 3 enumeration
budget refusal, 4 solver failure.

Every random action takes --seed; without it a seed is drawn from
system entropy and printed so the run can be reproduced.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from pathlib import Path

from .core import ObjectiveKind
from .errors import BudgetExceededError, InputError, SolverError
from .formats import (
    BENCH_COLUMNS,
    dump_result,
    names_path_for,
    read_matrix,
    result_record,
    write_matrix,
)
from .generators import (
    GeneratorKind,
    GeneratorSpec,
    gen_random,
    gen_set_cover,
    gen_x3c,
    replicate_probes,
)
from .ingest import AmbiguityPolicy, build_instance, parse_sequences
from .lp import Formulation, solve_formulation
from .oracle import DEFAULT_BUDGET, exact_optimum
from .rounding import (
    ALGORITHM_FORMULATION,
    ALGORITHM_OBJECTIVE,
    Algorithm,
    PadPolicy,
    RepairPolicy,
    RoundingConfig,
    derive_trial_seed,
    solve_end_to_end,
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as err:
        raise InputError(f"cannot read {path}: {err}") from err


def _resolve_seed(seed: int | None) -> int:
    if seed is not None:
        return seed
    drawn = int.from_bytes(os.urandom(8), "big")
    print(f"seed: {drawn}")
    return drawn


# ----------------------------------------------------------------------


def cmd_build_matrix(args) -> int:
    clones = parse_sequences(_read_text(args.clones), prefix="c", label=args.clones)
    probes = parse_sequences(_read_text(args.probes), prefix="p", label=args.probes)
    policy = AmbiguityPolicy(args.ambiguity)
    inst = build_instance(clones, probes, ambiguity=policy, matcher=args.matcher)
    write_matrix(
        args.out,
        inst,
        comments=(f"built from clones {args.clones} and probes {args.probes}",),
    )
    edges = int(inst.adjacency.sum())
    print(f"m={inst.num_clones} n={inst.num_probes} edges={edges}")
    print(f"wrote {args.out} and {names_path_for(args.out)}")
    return 0


def cmd_solve(args) -> int:
    inst = read_matrix(args.matrix)
    objective = ObjectiveKind(args.objective)
    algorithm = Algorithm(args.alg)
    if objective is ObjectiveKind.DAVG:
        raise _UsageError(
            "no algorithm rounds davg directly; use --objective cavg with rca/rca2 "
            "(davg = s/2 - cavg)"
        )
    if ALGORITHM_OBJECTIVE[algorithm] is not objective:
        raise _UsageError(
            f"--alg {algorithm.value} targets objective "
            f"{ALGORITHM_OBJECTIVE[algorithm].value}, not {objective.value}"
        )
    seed = _resolve_seed(args.seed)
    config = RoundingConfig(
        algorithm=algorithm,
        seed=seed,
        restarts=args.restarts,
        pad_policy=PadPolicy(args.pad),
        repair_policy=RepairPolicy(args.repair),
    )
    t0 = time.perf_counter()
    report = solve_end_to_end(inst, args.s, objective, config)
    wall_ms = (time.perf_counter() - t0) * 1000.0
    exact = report.best.exact_value(objective)
    record = result_record(
        algorithm=algorithm.value,
        objective=objective.value,
        m=inst.num_clones,
        n=inst.num_probes,
        s=args.s,
        seed=seed,
        restarts=args.restarts,
        lp_value=float(report.lp.z_star),
        best_value=report.best.value(objective),
        best_value_exact_num=exact.numerator,
        best_value_exact_den=exact.denominator,
        selected_indices=list(report.best.selected),
        degrees=list(report.best.degrees),
        epsilon_or_lambda=report.epsilon_or_lambda,
        violations_repaired=list(report.violations_repaired),
        wall_time_ms=round(wall_ms, 3),
    )
    text = dump_result(record)
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_oracle(args) -> int:
    inst = read_matrix(args.matrix)
    objective = ObjectiveKind(args.objective)
    res = exact_optimum(inst, args.s, objective, budget=args.budget)
    payload = {
        "objective": objective.value,
        "s": args.s,
        "optimum": float(res.optimum),
        "optimumExactNum": res.optimum_num,
        "optimumExactDen": res.optimum_den,
        "witness": list(res.witness),
        "witnessNames": [inst.clone_names[i] for i in res.witness],
        "enumerated": res.enumerated,
    }
    if res.optimum_num_at_most is not None:
        payload["optimumAtMostS"] = float(res.optimum_at_most)
        payload["optimumAtMostSExactNum"] = res.optimum_num_at_most
        payload["witnessAtMostS"] = list(res.witness_at_most)
        payload["enumeratedAtMostS"] = res.enumerated_at_most
    print(json.dumps(payload, indent=2))
    return 0


def _ground_truth_comment(kind: GeneratorKind, truth: bool | None) -> str:
    if truth is None:
        return "ground-truth: unknown"
    if kind is GeneratorKind.X3C:
        return "ground-truth: balanced-cover-exists" if truth else "ground-truth: no-balanced-cover"
    return "ground-truth: size-s-cover-exists" if truth else "ground-truth: no-size-s-cover"


def cmd_gen(args) -> int:
    kind = GeneratorKind(args.kind)
    comments: list[str] = []
    if kind is GeneratorKind.RANDOM:
        missing = [f for f in ("m", "n", "density") if getattr(args, f) is None]
        if missing:
            raise _UsageError("--kind random requires --" + " --".join(missing))
        seed = _resolve_seed(args.seed)
        inst = gen_random(args.m, args.n, args.density, seed)
        spec = GeneratorSpec(
            kind, seed, (("m", args.m), ("n", args.n), ("density", args.density))
        )
        comments.append(f"generator: {spec.describe()}")
    elif kind is GeneratorKind.X3C:
        if args.universe is None:
            raise _UsageError("--universe is required for --kind x3c")
        seed = _resolve_seed(args.seed)
        num_triples = args.triples if args.triples is not None else 2 * (args.universe // 3)
        red = gen_x3c(
            args.universe,
            num_triples,
            plant_cover=args.plant_cover,
            seed=seed,
            solve_ground_truth=args.universe <= 12,
        )
        inst = red.instance
        spec = GeneratorSpec(
            kind,
            seed,
            (
                ("universe", args.universe),
                ("triples", num_triples),
                ("plant-cover", json.dumps(args.plant_cover)),
                ("s", red.s),
            ),
        )
        comments.append(f"generator: {spec.describe()}")
        comments.append(_ground_truth_comment(kind, red.ground_truth))
    elif kind is GeneratorKind.SETCOVER:
        if args.universe is None:
            raise _UsageError("--universe is required for --kind setcover")
        if args.target_b is None:
            raise _UsageError("--target-b is required for --kind setcover")
        seed = _resolve_seed(args.seed)
        family_size = args.sets if args.sets is not None else args.universe
        red = gen_set_cover(
            args.universe,
            family_size,
            args.max_set_size,
            args.target_b,
            seed=seed,
            solve_ground_truth=family_size <= 12,
        )
        inst = red.instance
        spec = GeneratorSpec(
            kind,
            seed,
            (
                ("universe", args.universe),
                ("sets", family_size),
                ("max-set-size", args.max_set_size),
                ("target-b", args.target_b),
                ("s", red.s),
            ),
        )
        comments.append(f"generator: {spec.describe()}")
        comments.append(_ground_truth_comment(kind, red.ground_truth))
    else:
        if args.input is None:
            raise _UsageError("--input is required for --kind replicate")
        if args.r is None:
            raise _UsageError("--r is required for --kind replicate")
        src = read_matrix(args.input)
        inst = replicate_probes(src, args.r)
        spec = GeneratorSpec(kind, None, (("input", args.input), ("r", args.r)))
        comments.append(f"generator: {spec.describe()}")
    write_matrix(args.out, inst, comments=tuple(comments))
    print(f"wrote {args.out}: m={inst.num_clones} n={inst.num_probes}")
    return 0


# ----------------------------------------------------------------------


def _parse_size(text: str) -> tuple[int, int]:
    parts = text.lower().split("x")
    if len(parts) != 2:
        raise _UsageError(f"--size must look like MxN, got {text!r}")
    try:
        m, n = int(parts[0]), int(parts[1])
    except ValueError:
        raise _UsageError(f"--size must look like MxN, got {text!r}") from None
    if m < 1 or n < 1:
        raise _UsageError(f"--size dimensions must be positive, got {text!r}")
    return m, n


def _parse_s_range(text: str) -> list[int]:
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise _UsageError(f"--s-range must look like start:stop[:step], got {text!r}")
    try:
        start, stop = int(parts[0]), int(parts[1])
        step = int(parts[2]) if len(parts) == 3 else 1
    except ValueError:
        raise _UsageError(f"--s-range must hold integers, got {text!r}") from None
    if step < 1 or stop < start:
        raise _UsageError(f"--s-range must be nondecreasing with positive step, got {text!r}")
    return list(range(start, stop + 1, step))


def _mix_seed(*parts: int) -> int:
    acc = 0
    for p in parts:
        acc = derive_trial_seed(acc, p)
    return acc


def _ratio(lp_value: float, rounded: float, maximize: bool) -> float:
    if maximize:
        if lp_value <= 0:
            return 1.0 if rounded <= 0 else 0.0
        return rounded / lp_value
    if rounded <= 0:
        return 1.0
    return lp_value / rounded


def cmd_bench(args) -> int:
    sizes = [_parse_size(t) for t in args.size]
    densities = list(args.density)
    for d in densities:
        if not 0.0 <= d <= 1.0:
            raise _UsageError(f"--density {d} must lie in [0, 1]")
    s_values = _parse_s_range(args.s_range)
    algorithms = [Algorithm(a) for a in (args.alg or ["rcm"])]
    if args.trials < 1:
        raise _UsageError(f"--trials must be >= 1, got {args.trials}")
    seed = _resolve_seed(args.seed)
    for m, n in sizes:
        bad = [s for s in s_values if s > m]
        if bad:
            raise InputError(f"s={bad[0]} exceeds m={m} for size {m}x{n}")

    rows = []
    matrix_counter = 0
    for m, n in sizes:
        for dens in densities:
            matrix_seed = _mix_seed(seed, matrix_counter)
            inst = gen_random(m, n, dens, matrix_seed)
            matrix_id = f"m{m}n{n}d{dens}i{matrix_counter}"
            for s in s_values:
                lp_cache: dict[Formulation, object] = {}
                for alg_index, alg in enumerate(algorithms):
                    formulation = ALGORITHM_FORMULATION[alg]
                    if formulation not in lp_cache:
                        lp_cache[formulation] = solve_formulation(inst, s, formulation)
                    lp_sol = lp_cache[formulation]
                    kind = ALGORITHM_OBJECTIVE[alg]
                    lp_value = float(lp_sol.z_star)
                    for trial in range(args.trials):
                        run_seed = _mix_seed(seed, matrix_counter, s, alg_index, trial)
                        config = RoundingConfig(algorithm=alg, seed=run_seed, restarts=1)
                        t0 = time.perf_counter()
                        report = solve_end_to_end(inst, s, kind, config, lp_solution=lp_sol)
                        wall_ms = (time.perf_counter() - t0) * 1000.0
                        value = report.best.value(kind)
                        rows.append(
                            {
                                "matrixId": matrix_id,
                                "m": m,
                                "n": n,
                                "density": dens,
                                "s": s,
                                "objective": kind.value,
                                "algorithm": alg.value,
                                "trial": trial,
                                "seed": run_seed,
                                "lpValue": f"{lp_value:.10g}",
                                "roundedValue": f"{value:.10g}",
                                "ratio": f"{_ratio(lp_value, value, kind.maximize):.10g}",
                                "wallTimeMs": f"{wall_ms:.3f}",
                            }
                        )
            matrix_counter += 1

    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(BENCH_COLUMNS), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    Path(args.out).write_text(buf.getvalue())

    # aggregate: mean over trials per (matrix, s, algorithm) cell
    groups: dict[tuple, list[dict]] = {}
    for row in rows:
        groups.setdefault(
            (row["matrixId"], row["m"], row["n"], row["density"], row["s"], row["objective"], row["algorithm"]),
            [],
        ).append(row)
    sbuf = io.StringIO()
    swriter = csv.writer(sbuf, lineterminator="\n")
    swriter.writerow(
        [
            "matrixId",
            "m",
            "n",
            "density",
            "s",
            "objective",
            "algorithm",
            "trials",
            "lpValue",
            "meanRoundedValue",
            "meanRatio",
            "bestRoundedValue",
        ]
    )
    for key, bucket in groups.items():
        values = [float(r["roundedValue"]) for r in bucket]
        ratios = [float(r["ratio"]) for r in bucket]
        maximize = ObjectiveKind(key[5]).maximize
        best = max(values) if maximize else min(values)
        swriter.writerow(
            list(key[:7])
            + [
                len(bucket),
                bucket[0]["lpValue"],
                f"{sum(values) / len(values):.10g}",
                f"{sum(ratios) / len(ratios):.10g}",
                f"{best:.10g}",
            ]
        )
    summary_path = Path(str(args.out) + ".summary")
    summary_path.write_text(sbuf.getvalue())
    print(f"wrote {args.out} ({len(rows)} rows) and {summary_path}")
    return 0


# ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="balancedcover", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-matrix", help="build an adjacency matrix from sequence files")
    p.add_argument("clones", help="FASTA (or one-per-line) clone sequences")
    p.add_argument("probes", help="FASTA (or one-per-line) probe sequences")
    p.add_argument("out", help="output matrix file (names sidecar written alongside)")
    p.add_argument("--ambiguity", choices=[a.value for a in AmbiguityPolicy], default="reject")
    p.add_argument("--matcher", choices=["naive", "automaton"], default="naive")
    p.set_defaults(func=cmd_build_matrix)

    p = sub.add_parser("solve", help="LP relaxation plus randomized rounding")
    p.add_argument("matrix", help="matrix file")
    p.add_argument("--s", type=int, required=True, help="selection budget")
    p.add_argument("--objective", choices=[k.value for k in ObjectiveKind], required=True)
    p.add_argument("--alg", choices=[a.value for a in Algorithm], required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--restarts", type=int, default=1)
    p.add_argument("--pad", choices=[p_.value for p_ in PadPolicy], default="random")
    p.add_argument("--repair", choices=[r.value for r in RepairPolicy], default="random")
    p.add_argument("--out", default=None, help="result file (default: stdout)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="exhaustive exact optimum (budget-limited)")
    p.add_argument("matrix", help="matrix file")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--objective", choices=[k.value for k in ObjectiveKind], required=True)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gen", help="generate instances")
    p.add_argument("--kind", choices=[k.value for k in GeneratorKind], required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--m", type=int, default=None, help="clones (random kind)")
    p.add_argument("--n", type=int, default=None, help="probes (random kind)")
    p.add_argument("--density", type=float, default=None, help="ones fraction (random kind)")
    p.add_argument("--universe", type=int, default=None, help="universe size (x3c/setcover)")
    p.add_argument("--triples", type=int, default=None, help="triple count (x3c)")
    p.add_argument("--plant-cover", action="store_true", help="plant an exact cover (x3c)")
    p.add_argument("--sets", type=int, default=None, help="family size (setcover)")
    p.add_argument("--max-set-size", type=int, default=3, help="largest set size (setcover)")
    p.add_argument("--target-b", type=int, default=None, help="cover size target b (setcover)")
    p.add_argument("--input", default=None, help="source matrix (replicate)")
    p.add_argument("--r", type=int, default=None, help="replication factor (replicate)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="sweep algorithms over generated matrices into CSV")
    p.add_argument("--size", action="append", required=True, help="matrix size MxN (repeatable)")
    p.add_argument("--density", action="append", type=float, required=True, help="repeatable")
    p.add_argument("--s-range", required=True, help="start:stop[:step], inclusive")
    p.add_argument("--alg", action="append", default=None, help="repeatable (default rcm)")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True, help="CSV path (summary written to <out>.summary)")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return 1
    except SystemExit as err:
        # argparse exits directly for --help
        return int(err.code or 0)
    try:
        return args.func(args)
    except _UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return 1
    except InputError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except BudgetExceededError as err:
        print(f"refused: {err}", file=sys.stderr)
        return 3
    except SolverError as err:
        print(f"solver failure: {err}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
