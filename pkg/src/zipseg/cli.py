"""Command line: ``zipseg-bench --benchmark move --doublings 8 ...``.

Exit codes: 0 ok, 1 verification failure, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import sys

from .bench import BENCHMARKS, VARIANTS, BenchConfig, emit_results, run_benchmark
from .ranks import RankPolicy
from .workload import check_workload, minimize
from .ziptree import REPAIR_STEPS

EXIT_OK, EXIT_VERIFY_FAILED, EXIT_USAGE = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zipseg-bench", description="Zipping segment tree benchmarks.")
    p.add_argument("--benchmark", choices=BENCHMARKS + ("verify",), default="move")
    p.add_argument("--variant", action="append", choices=VARIANTS + ("all",),
                   help="rank variant; repeatable (default: all)")
    p.add_argument("--backend", choices=("numeric", "set"), default="numeric")
    p.add_argument("--dimensions", type=int, default=1, help="weight vector length for the numeric backend")
    p.add_argument("--seed_start", type=int, default=42)
    p.add_argument("--seed_count", type=int, default=3)
    p.add_argument("--benchmark_repetitions", type=int, default=3)
    p.add_argument("--doublings", type=int, default=8)
    p.add_argument("--base_size", type=int, default=1024, help="smallest base tree size (segments)")
    p.add_argument("--experiment_size", type=int, default=100_000)
    p.add_argument("--relative_experiment_size", type=float, default=0.05)
    p.add_argument("--random_kinds", action="store_true", help="draw open/closed border kinds at random")
    p.add_argument("--benchmark_out", default=None, help="output file (default: stdout)")
    p.add_argument("--benchmark_out_format", choices=("json", "csv"), default="json")
    p.add_argument("--verify_workloads", type=int, default=200, help="workloads per seed in verify mode")
    p.add_argument("--verify_ops", type=int, default=60, help="operations per verify workload")
    p.add_argument("--disable_repair", action="append", default=[], choices=REPAIR_STEPS,
                   help=argparse.SUPPRESS)
    p.add_argument("--quiet", action="store_true")
    return p


def config_from_args(args) -> BenchConfig:
    variants = args.variant or ["all"]
    if "all" in variants:
        variants = list(VARIANTS)
    return BenchConfig(
        benchmark=args.benchmark,
        variants=list(dict.fromkeys(variants)),
        backend=args.backend,
        k=args.dimensions,
        seed_start=args.seed_start,
        seed_count=args.seed_count,
        repetitions=args.benchmark_repetitions,
        doublings=args.doublings,
        base_size=args.base_size,
        experiment_size=args.experiment_size,
        relative_experiment_size=args.relative_experiment_size,
        random_kinds=args.random_kinds,
        disabled_repairs=list(args.disable_repair),
    )


def verify_mode(config: BenchConfig, workloads: int = 200, n_ops: int = 60, out=None) -> int:
    """Oracle-equivalence check for every configured variant; 0 iff all pass."""
    out = sys.stdout if out is None else out
    failed = False
    for variant in config.variants:
        policy = RankPolicy(variant)
        for seed in config.seeds:
            kwargs = dict(backend=config.backend, policy=policy, k=config.k,
                          disabled_repairs=tuple(config.disabled_repairs))
            bad = None
            for w in range(workloads):
                bad = check_workload(seed=seed * 100_003 + w, n_ops=n_ops, **kwargs)
                if bad is not None:
                    break
            label = f"{variant}/{config.backend} seed {seed}"
            if bad is None:
                print(f"PASS {label}: {workloads} workloads x {n_ops} ops", file=out)
                continue
            failed = True
            small = minimize(bad, **kwargs)
            print(f"FAIL {label}: minimized reproduction ({len(small.ops)} ops)", file=out)
            print(small.describe(), file=out)
    return EXIT_VERIFY_FAILED if failed else EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        config = config_from_args(args)
    except ValueError as e:
        print(f"zipseg-bench: {e}", file=sys.stderr)
        return EXIT_USAGE

    if config.benchmark == "verify":
        return verify_mode(config, args.verify_workloads, args.verify_ops)

    progress = None if args.quiet else (lambda msg: print(msg, file=sys.stderr))
    records = run_benchmark(config, progress)
    try:
        emit_results(records, args.benchmark_out_format, args.benchmark_out, config)
    except OSError as e:
        print(f"zipseg-bench: cannot write results: {e}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
