"""Brute-force stabbing queries over a flat list of segments."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .interval import BorderKind, Segment, stabbing_contains


class OracleStore:
    def __init__(self, segments=()):
        self.segments = list(segments)

    def insert(self, seg: Segment) -> None:
        self.segments.append(seg)

    def delete(self, seg_id) -> Segment:
        for i, s in enumerate(self.segments):
            if s.id == seg_id:
                return self.segments.pop(i)
        raise KeyError(seg_id)

    def replace(self, seg: Segment) -> None:
        for i, s in enumerate(self.segments):
            if s.id == seg.id:
                self.segments[i] = seg
                return
        raise KeyError(seg.id)

    def __len__(self) -> int:
        return len(self.segments)

    def keys(self) -> list[float]:
        return sorted({b.key for s in self.segments for b in (s.low, s.high)})

    def stab_ids(self, q: float) -> set:
        return {s.id for s in self.segments if stabbing_contains(s, q)}

    def stab_weight(self, q: float, k: int = 1) -> tuple:
        total = [0] * k
        for s in self.segments:
            if stabbing_contains(s, q):
                for i, w in enumerate(s.weight):
                    total[i] += w
        return tuple(total)


def oracle_stab(store: OracleStore, q: float, k: int = 1) -> tuple[set, tuple]:
    """Ids of the segments containing ``q`` and their summed weight."""
    return store.stab_ids(q), store.stab_weight(q, k)


def stab_by_border_order(store: OracleStore, q: float) -> set:
    """Second, independent answer: compare ``q`` against borders as positions.

    A query at key ``k`` sits after ``k)`` and ``[k`` and before ``k]`` and
    ``(k``; a segment contains it iff its low border is before that position
    and its high border after.
    """
    found = set()
    for s in store.segments:
        lo, hi = s.low, s.high
        after_low = lo.key < q or (lo.key == q and lo.kind <= BorderKind.CLOSED_LOWER)
        before_high = q < hi.key or (q == hi.key and hi.kind >= BorderKind.CLOSED_UPPER)
        if after_low and before_high:
            found.add(s.id)
    return found


@dataclass(frozen=True)
class ElementaryInterval:
    low: float
    high: float
    point: bool  # [x, x] if True, else the open gap (low, high)

    @property
    def sample(self) -> float:
        """A query point inside the interval."""
        if self.point:
            return self.low
        if math.isinf(self.low) and math.isinf(self.high):
            return 0.0
        if math.isinf(self.low):
            return self.high - 1.0
        if math.isinf(self.high):
            return self.low + 1.0
        mid = (self.low + self.high) / 2
        if not self.low < mid < self.high:
            raise ValueError(f"no float strictly between {self.low} and {self.high}")
        return mid

    def __str__(self) -> str:
        if self.point:
            return f"[{self.low}, {self.low}]"
        return f"({self.low}, {self.high})"


def elementary_intervals(keys) -> list[ElementaryInterval]:
    keys = sorted(set(keys))
    out = []
    prev = -math.inf
    for x in keys:
        out.append(ElementaryInterval(prev, x, False))
        out.append(ElementaryInterval(x, x, True))
        prev = x
    out.append(ElementaryInterval(prev, math.inf, False))
    return out


def elementary_sweep(store: OracleStore) -> list[tuple[ElementaryInterval, frozenset]]:
    """Partition of the line by all border keys, each piece with its stabbing ids.

    Every point of an elementary interval is contained in the same segments,
    so one sample point per piece decides the whole piece.
    """
    return [(ei, frozenset(store.stab_ids(ei.sample))) for ei in elementary_intervals(store.keys())]
