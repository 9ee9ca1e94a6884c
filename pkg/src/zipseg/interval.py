"""Segments, their borders, and the order in which borders sit in the tree.

Borders that share a numeric key are ordered by kind::

    k)  <  [k  <  (query point k)  <  k]  <  (k

A query for ``k`` therefore behaves like a virtual border sitting between the
closed lower and the closed upper borders at ``k``.  Borders that agree on key
and kind are ordered by segment id, which keeps the order total.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Hashable, NamedTuple


class BorderKind(IntEnum):
    # Values are the tiebreak order for equal keys.
    OPEN_UPPER = 0  # "k)"
    CLOSED_LOWER = 1  # "[k"
    CLOSED_UPPER = 2  # "k]"
    OPEN_LOWER = 3  # "(k"

    @property
    def is_lower(self) -> bool:
        return self in (BorderKind.CLOSED_LOWER, BorderKind.OPEN_LOWER)

    @property
    def is_closed(self) -> bool:
        return self in (BorderKind.CLOSED_LOWER, BorderKind.CLOSED_UPPER)


class Direction(IntEnum):
    LEFT = 0
    RIGHT = 1


LEFT = Direction.LEFT
RIGHT = Direction.RIGHT


class Border(NamedTuple):
    """One endpoint of a segment.

    Tuple comparison gives exactly the border order (key, then kind, then
    segment id), so borders can be compared with ``<`` directly.  Segment ids
    within one tree must be mutually orderable.
    """

    key: float
    kind: BorderKind
    segment_id: Hashable

    def __str__(self) -> str:
        k = _fmt(self.key)
        return {
            BorderKind.OPEN_UPPER: f"{k})",
            BorderKind.CLOSED_LOWER: f"[{k}",
            BorderKind.CLOSED_UPPER: f"{k}]",
            BorderKind.OPEN_LOWER: f"({k}",
        }[self.kind] + f"#{self.segment_id}"


def _fmt(x: float) -> str:
    return repr(x) if not float(x).is_integer() else str(int(x))


def compare_borders(a: Border, b: Border) -> int:
    """Three-way comparison: -1, 0 or 1."""
    if a < b:
        return -1
    if b < a:
        return 1
    return 0


# Position of a query point among borders with the same key.
_QUERY_SLOT = 1.5


def query_descend(q: float, border: Border) -> Direction:
    """Direction a stabbing query for ``q`` takes at a node holding ``border``."""
    if q < border.key:
        return LEFT
    if q > border.key:
        return RIGHT
    return LEFT if border.kind >= BorderKind.CLOSED_UPPER else RIGHT


def query_position(q: float) -> tuple[float, float]:
    """Sort key placing ``q`` between ``[q`` and ``q]`` when compared to borders.

    ``query_position(q) < border`` is true exactly when the query descends
    left at ``border``.
    """
    return (q, _QUERY_SLOT)


@dataclass(frozen=True)
class Segment:
    id: Hashable
    low: Border
    high: Border
    weight: tuple = field(default=(1,))

    def __post_init__(self):
        for b in (self.low, self.high):
            if not isinstance(b.key, (int, float)) or not math.isfinite(b.key):
                raise ValueError(f"segment {self.id!r}: border key must be finite, got {b.key!r}")
            if b.segment_id != self.id:
                raise ValueError(f"segment {self.id!r}: border carries id {b.segment_id!r}")
        if not self.low.kind.is_lower:
            raise ValueError(f"segment {self.id!r}: low border has upper kind {self.low.kind.name}")
        if self.high.kind.is_lower:
            raise ValueError(f"segment {self.id!r}: high border has lower kind {self.high.kind.name}")
        if not self.low < self.high:
            raise ValueError(f"segment {self.id!r}: empty interval {self.low}..{self.high}")
        if len(self.weight) == 0:
            raise ValueError(f"segment {self.id!r}: weight vector is empty")

    @classmethod
    def closed(cls, seg_id, low: float, high: float, weight=(1,)) -> Segment:
        return make_segment(seg_id, low, high, weight=weight)

    def __str__(self) -> str:
        lo = "[" if self.low.kind is BorderKind.CLOSED_LOWER else "("
        hi = "]" if self.high.kind is BorderKind.CLOSED_UPPER else ")"
        return f"{self.id}:{lo}{_fmt(self.low.key)}, {_fmt(self.high.key)}{hi}"


def make_segment(
    seg_id,
    low: float,
    high: float,
    *,
    low_closed: bool = True,
    high_closed: bool = True,
    weight=(1,),
) -> Segment:
    """Build a segment from plain numbers; raises ValueError if it is empty."""
    lk = BorderKind.CLOSED_LOWER if low_closed else BorderKind.OPEN_LOWER
    hk = BorderKind.CLOSED_UPPER if high_closed else BorderKind.OPEN_UPPER
    return Segment(seg_id, Border(low, lk, seg_id), Border(high, hk, seg_id), tuple(weight))


def stabbing_contains(seg: Segment, q: float) -> bool:
    lo, hi = seg.low, seg.high
    if q < lo.key or q > hi.key:
        return False
    if q == lo.key and lo.kind is not BorderKind.CLOSED_LOWER:
        return False
    if q == hi.key and hi.kind is not BorderKind.CLOSED_UPPER:
        return False
    return True
