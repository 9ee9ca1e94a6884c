"""Random workloads and the oracle-equivalence check used by ``verify``."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .dst import DynamicSegmentTree
from .interval import Border, BorderKind, Segment
from .oracle import OracleStore

LOWER_KINDS = (BorderKind.CLOSED_LOWER, BorderKind.OPEN_LOWER)
UPPER_KINDS = (BorderKind.CLOSED_UPPER, BorderKind.OPEN_UPPER)


def random_segment(rng: random.Random, seg_id, *, key_span: int = 16, k: int = 1) -> Segment:
    """Segment on a small integer grid (so keys collide) with random kinds.

    Integer weights keep numeric sums exact.  One key in eight is a
    non-integer to keep gaps between grid points populated.
    """
    while True:
        a, b = (
            rng.randint(0, key_span) if rng.random() < 0.875 else rng.randint(0, 4 * key_span) / 4
            for _ in range(2)
        )
        if a > b:
            a, b = b, a
        low = Border(a, rng.choice(LOWER_KINDS), seg_id)
        high = Border(b, rng.choice(UPPER_KINDS), seg_id)
        weight = tuple(rng.randint(-3, 9) for _ in range(k))
        try:
            return Segment(seg_id, low, high, weight)
        except ValueError:
            continue


def random_ops(rng: random.Random, n_ops: int, *, key_span: int = 16, target_live: int = 12, k: int = 1):
    """Mixed insert/delete/move operations; live set hovers near ``target_live``."""
    ops = []
    live = []
    next_id = 0
    for _ in range(n_ops):
        r = rng.random()
        p_insert = 0.7 if len(live) < target_live else 0.3
        if not live or r < p_insert:
            seg = random_segment(rng, next_id, key_span=key_span, k=k)
            next_id += 1
            live.append(seg.id)
            ops.append(("insert", seg))
        elif r < p_insert + (1 - p_insert) / 2:
            sid = live.pop(rng.randrange(len(live)))
            ops.append(("delete", sid))
        else:
            sid = rng.choice(live)
            ops.append(("move", random_segment(rng, sid, key_span=key_span, k=k)))
    return ops


def apply_op(tree, op) -> None:
    kind, arg = op
    if kind == "insert":
        tree.insert(arg)
    elif kind == "delete":
        tree.delete(arg)
    else:
        tree.delete(arg.id)
        tree.insert(arg)


def apply_to_oracle(store: OracleStore, op) -> None:
    kind, arg = op
    if kind == "insert":
        store.insert(arg)
    elif kind == "delete":
        store.delete(arg)
    else:
        store.replace(arg)


def query_points(store: OracleStore, rng: random.Random, n_random: int = 32, key_span: int = 16) -> list:
    """Every stored key plus ``n_random`` random points (grid, half-grid, uniform)."""
    points = store.keys()
    for _ in range(n_random):
        r = rng.random()
        if r < 0.4:
            points.append(float(rng.randint(-1, key_span + 1)))
        elif r < 0.8:
            points.append(rng.randint(-2, 2 * key_span + 2) / 2)
        else:
            points.append(rng.uniform(-1, key_span + 1))
    return points


@dataclass
class Mismatch:
    seed: int
    step: int
    op: tuple
    q: float | None
    got: object
    expected: object
    ops: list = field(default_factory=list)

    def describe(self) -> str:
        lines = [f"seed {self.seed}: mismatch after op #{self.step} {_fmt_op(self.op)}"]
        if self.q is not None:
            lines.append(f"  query {self.q}: tree returned {self.got}, oracle {self.expected}")
        else:
            lines.append(f"  {self.got}")
        lines.append("  operation log:")
        lines.extend(f"    {_fmt_op(op)}" for op in self.ops)
        return "\n".join(lines)


def _fmt_op(op) -> str:
    kind, arg = op
    return f"{kind} {arg}"


def check_ops(
    ops,
    *,
    backend: str,
    policy,
    seed: int,
    k: int = 1,
    disabled_repairs=(),
    n_random: int = 32,
    key_span: int = 16,
    validate: bool = False,
) -> Mismatch | None:
    """Replay ``ops`` on a tree and the oracle; compare stabs after each op."""
    tree = DynamicSegmentTree(backend, k=k, policy=policy, seed=seed, disabled_repairs=disabled_repairs)
    store = OracleStore()
    qrng = random.Random(f"queries:{seed}")
    is_set = backend == "set"
    for step, op in enumerate(ops):
        apply_op(tree, op)
        apply_to_oracle(store, op)
        for q in query_points(store, qrng, n_random, key_span):
            got = tree.stab(q)
            expected = store.stab_ids(q) if is_set else store.stab_weight(q, k)
            if got != expected:
                return Mismatch(seed, step, op, q, got, expected, list(ops[: step + 1]))
        if validate:
            problems = tree.validate()
            if problems:
                return Mismatch(seed, step, op, None, problems[0], [], list(ops[: step + 1]))
    return None


def check_workload(backend: str, policy, seed: int, n_ops: int, **kwargs) -> Mismatch | None:
    key_span = kwargs.pop("key_span", 16)
    target_live = kwargs.pop("target_live", 12)
    k = kwargs.get("k", 1)
    ops = random_ops(random.Random(seed), n_ops, key_span=key_span, target_live=target_live, k=k)
    return check_ops(ops, backend=backend, policy=policy, seed=seed, key_span=key_span, **kwargs)


def minimize(mismatch: Mismatch, **check_kwargs) -> Mismatch:
    """Greedily drop operations while the replay still fails.

    Dropping an insert also drops the later ops on that segment.  Ids are
    never reused, so dropping a delete or move is always valid.
    """
    best = mismatch
    i = len(best.ops) - 2
    while i >= 0:
        op = best.ops[i]
        candidate = list(best.ops[:i]) + list(best.ops[i + 1 :])
        if op[0] == "insert":
            sid = op[1].id
            candidate = [o for o in candidate if _op_id(o) != sid]
        result = check_ops(candidate, seed=best.seed, **check_kwargs) if candidate else None
        if result is not None:
            best = result
            i = min(i, len(best.ops) - 1) - 1
        else:
            i -= 1
    return best


def _op_id(op):
    kind, arg = op
    return arg if kind == "delete" else arg.id

