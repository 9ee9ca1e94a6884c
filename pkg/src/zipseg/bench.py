"""Insert / delete / move / depth benchmarks over doubling tree sizes.

Protocol: for every variant, size and seed, build a base tree of ``size``
random segments (borders are two uniform draws from [0, 1)), then time a
batch of ``min(experiment_size, relative_experiment_size * size)``
operations.  Each repetition reuses the base tree and restores its segment
set afterwards (inserted segments are removed again, deleted ones put back),
outside the timed region.  The depth benchmark moves every segment once per
repetition and records the resulting node depths.
"""

from __future__ import annotations

import csv
import dataclasses
import gc
import json
import random
import sys
import time
from dataclasses import dataclass, field

from .dst import DynamicSegmentTree
from .interval import Border, BorderKind, Segment
from .ranks import RankPolicy

BENCHMARKS = ("insert", "delete", "move", "depth")
VARIANTS = tuple(p.value for p in RankPolicy)

RANK_HASH_NOTE = (
    "hash ranks are computed from the border's key bits, kind and segment id, "
    "not from node memory addresses, so runs are reproducible"
)


@dataclass
class BenchConfig:
    benchmark: str = "move"
    variants: list = field(default_factory=lambda: list(VARIANTS))
    backend: str = "numeric"
    k: int = 1
    seed_start: int = 42
    seed_count: int = 3
    repetitions: int = 3
    doublings: int = 8
    base_size: int = 1024
    experiment_size: int = 100_000
    relative_experiment_size: float = 0.05
    random_kinds: bool = False
    disabled_repairs: list = field(default_factory=list)

    def __post_init__(self):
        if self.benchmark not in BENCHMARKS + ("verify",):
            raise ValueError(f"unknown benchmark {self.benchmark!r}")
        for v in self.variants:
            RankPolicy(v)
        if self.backend not in ("numeric", "set"):
            raise ValueError(f"unknown backend {self.backend!r}")
        for name in ("seed_count", "repetitions", "doublings", "base_size", "experiment_size", "k"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if not 0 < self.relative_experiment_size <= 1:
            raise ValueError("relative_experiment_size must be in (0, 1]")

    @property
    def seeds(self) -> list[int]:
        return list(range(self.seed_start, self.seed_start + self.seed_count))

    @property
    def sizes(self) -> list[int]:
        return [self.base_size << i for i in range(self.doublings)]

    def ops_for(self, size: int) -> int:
        if self.benchmark == "depth":
            return size
        return max(1, min(self.experiment_size, int(self.relative_experiment_size * size)))


@dataclass
class BenchRecord:
    benchmark: str
    variant: str
    backend: str
    base_size: int
    seed: int
    repetition: int
    ns_per_op: float
    ops: int
    depth_mean: float
    depth_max: int
    zip_nodes: int
    unzip_nodes: int
    zips: int
    unzips: int
    ann_union: int
    ann_copy: int
    ann_create: int
    ann_delete: int


RECORD_FIELDS = [f.name for f in dataclasses.fields(BenchRecord)]


class Workload:
    """Segments for one (benchmark, seed, size); a pure function of those."""

    def __init__(self, benchmark: str, seed: int, size: int, n_ops: int, *, k: int = 1, random_kinds=False):
        self.rng = random.Random(f"{benchmark}:{seed}:{size}")
        self.k = k
        self.random_kinds = random_kinds
        self.base = [self.segment(i) for i in range(size)]
        rng = self.rng
        if benchmark == "insert":
            self.batch = [self.segment(size + i) for i in range(n_ops)]
        elif benchmark == "delete":
            self.batch = rng.sample(range(size), n_ops)
        elif benchmark == "move":
            self.batch = [self.segment(i) for i in rng.sample(range(size), n_ops)]
        else:
            order = list(range(size))
            rng.shuffle(order)
            self.batch = [self.segment(i) for i in order]

    def segment(self, seg_id: int) -> Segment:
        rng = self.rng
        while True:
            a, b = rng.random(), rng.random()
            if a > b:
                a, b = b, a
            if self.random_kinds:
                lk = rng.choice((BorderKind.CLOSED_LOWER, BorderKind.OPEN_LOWER))
                hk = rng.choice((BorderKind.CLOSED_UPPER, BorderKind.OPEN_UPPER))
            else:
                lk, hk = BorderKind.CLOSED_LOWER, BorderKind.CLOSED_UPPER
            weight = tuple(rng.random() for _ in range(self.k))
            try:
                return Segment(seg_id, Border(a, lk, seg_id), Border(b, hk, seg_id), weight)
            except ValueError:
                continue


def build_tree(backend: str, variant, seed: int, segments, *, k: int = 1, disabled_repairs=()) -> DynamicSegmentTree:
    tree = DynamicSegmentTree(backend, k=k, policy=variant, seed=seed, disabled_repairs=disabled_repairs)
    for seg in segments:
        tree.insert(seg)
    return tree


def _timed(fn) -> int:
    gc_was_enabled = gc.isenabled()
    gc.disable()
    try:
        t0 = time.perf_counter_ns()
        fn()
        return max(1, time.perf_counter_ns() - t0)
    finally:
        if gc_was_enabled:
            gc.enable()


def _move_all(tree: DynamicSegmentTree, segments) -> None:
    for seg in segments:
        tree.delete(seg.id)
        tree.insert(seg)


def run_one(config: BenchConfig, variant: str, size: int, seed: int) -> list[BenchRecord]:
    n_ops = config.ops_for(size)
    wl = Workload(config.benchmark, seed, size, n_ops, k=config.k, random_kinds=config.random_kinds)
    tree = build_tree(
        config.backend, variant, seed, wl.base, k=config.k, disabled_repairs=config.disabled_repairs
    )
    records = []
    for rep in range(config.repetitions):
        tree.tree.reset_counters()
        if config.benchmark == "insert":
            elapsed = _timed(lambda: [tree.insert(s) for s in wl.batch])
        elif config.benchmark == "delete":
            deleted = []
            elapsed = _timed(lambda: deleted.extend(tree.delete(i) for i in wl.batch))
        else:
            elapsed = _timed(lambda: _move_all(tree, wl.batch))
        counters = tree.path_length_counters()
        depth = tree.depth_stats()
        if config.benchmark == "insert":
            for s in wl.batch:
                tree.delete(s.id)
        elif config.benchmark == "delete":
            for s in deleted:
                tree.insert(s)
        calls = counters["annotation_calls"]
        records.append(
            BenchRecord(
                benchmark=config.benchmark,
                variant=variant,
                backend=config.backend,
                base_size=size,
                seed=seed,
                repetition=rep,
                ns_per_op=elapsed / n_ops,
                ops=n_ops,
                depth_mean=depth.mean,
                depth_max=depth.max,
                zip_nodes=counters["zip_nodes_total"],
                unzip_nodes=counters["unzip_nodes_total"],
                zips=counters["op_counts"]["zips"],
                unzips=counters["op_counts"]["unzips"],
                ann_union=calls["union"],
                ann_copy=calls["copy"],
                ann_create=calls["create"],
                ann_delete=calls["delete"],
            )
        )
    return records


def run_benchmark(config: BenchConfig, progress=None) -> list[BenchRecord]:
    """All records for ``config``; runs strictly one experiment at a time."""
    records = []
    for variant in config.variants:
        for size in config.sizes:
            for seed in config.seeds:
                recs = run_one(config, variant, size, seed)
                records.extend(recs)
                if progress is not None:
                    best = min(r.ns_per_op for r in recs)
                    progress(f"{config.benchmark} {variant} n={size} seed={seed}: {best / 1000:.1f} us/op")
    return records


def measure_depth(policy, n_segments: int, seed: int, *, backend: str = "numeric") -> float:
    """Mean node depth after inserting ``n_segments`` and moving each once."""
    wl = Workload("depth", seed, n_segments, n_segments)
    tree = build_tree(backend, policy, seed, wl.base)
    _move_all(tree, wl.batch)
    return tree.depth_stats().mean


def emit_results(records, fmt: str, path, config: BenchConfig | None = None) -> None:
    if not records:
        raise ValueError("no records to write")
    rows = [dataclasses.asdict(r) for r in records]
    out = open(path, "w", newline="") if path not in (None, "-") else sys.stdout
    try:
        if fmt == "json":
            doc = {
                "config": dataclasses.asdict(config) if config is not None else {},
                "notes": [RANK_HASH_NOTE],
                "records": rows,
            }
            json.dump(doc, out, indent=2)
            out.write("\n")
        elif fmt == "csv":
            writer = csv.DictWriter(out, fieldnames=RECORD_FIELDS)
            writer.writeheader()
            writer.writerows(rows)
        else:
            raise ValueError(f"unknown output format {fmt!r}")
    finally:
        if out is not sys.stdout:
            out.close()


def read_csv_records(path) -> list[BenchRecord]:
    types = {f.name: f.type for f in dataclasses.fields(BenchRecord)}
    conv = {"int": int, "float": float, "str": str}
    with open(path, newline="") as fh:
        return [BenchRecord(**{k: conv[types[k]](v) for k, v in row.items()}) for row in csv.DictReader(fh)]
