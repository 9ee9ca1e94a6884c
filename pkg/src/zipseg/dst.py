"""Dynamic segment tree on top of the annotated zip tree.

A segment's annotation goes on the edges hanging off the two paths that lead
from the lowest common ancestor of its border nodes down to those nodes:

* on the way down to the low border, the right edge of every node where the
  path turns left, plus the low node's own right edge;
* on the way down to the high border, the left edge of every node where the
  path turns right, plus the high node's own left edge.

When one border node is the ancestor of the other, only the path below it is
used.  Every query point inside the segment then crosses exactly one
annotated edge and every point outside crosses none.
"""

from __future__ import annotations

from .annotations import NumericBackend, SetBackend, make_backend, negate_weight
from .interval import LEFT, RIGHT, BorderKind, Segment, query_descend
from .ranks import RankPolicy, RankSource
from .ziptree import ZipTree


class DynamicSegmentTree:
    """Stabbing queries over a dynamic set of weighted segments.

    ``backend`` is ``"set"`` (queries report segment ids) or ``"numeric"``
    (queries report the summed weight vector of dimension ``k``).
    """

    def __init__(
        self,
        backend: str = "numeric",
        *,
        k: int = 1,
        policy: RankPolicy | str = RankPolicy.RANDOM_STORE,
        seed: int = 0,
        disabled_repairs=(),
        count_paths: bool = True,
    ):
        self.backend = make_backend(backend, k)
        self.k = k
        self.ranks = RankSource(policy, seed)
        self.tree = ZipTree(
            self.backend, self.ranks, disabled_repairs=disabled_repairs, count_paths=count_paths
        )
        self.segments = {}  # id -> (Segment, low node, high node)

    @property
    def policy(self) -> RankPolicy:
        return self.ranks.policy

    @property
    def is_set(self) -> bool:
        return isinstance(self.backend, SetBackend)

    def __len__(self) -> int:
        return len(self.segments)

    def __contains__(self, seg_id) -> bool:
        return seg_id in self.segments

    def __iter__(self):
        return (entry[0] for entry in self.segments.values())

    def get(self, seg_id) -> Segment:
        return self.segments[seg_id][0]

    # -- mutation -----------------------------------------------------------

    def insert(self, seg: Segment) -> None:
        if seg.id in self.segments:
            raise KeyError(f"segment {seg.id!r} already stored")
        if isinstance(self.backend, NumericBackend) and len(seg.weight) != self.k:
            raise ValueError(f"segment {seg.id!r} has weight dimension {len(seg.weight)}, expected {self.k}")
        tree = self.tree
        low = tree.insert(seg.low)
        high = tree.insert(seg.high)
        self.segments[seg.id] = (seg, low, high)
        self._annotate(low, high, seg.id if self.is_set else seg.weight)

    def delete(self, seg_id) -> Segment:
        try:
            seg, low, high = self.segments.pop(seg_id)
        except KeyError:
            raise KeyError(f"segment {seg_id!r} not stored") from None
        if self.is_set:
            self.backend.erase_item_everywhere(seg_id)
        else:
            # Placement is recomputed on the current shape; the repairs keep
            # every query path's total unchanged, so this cancels exactly.
            self._annotate(low, high, negate_weight(seg.weight))
        self.tree.zip_delete(low)
        self.tree.zip_delete(high)
        return seg

    def move(self, seg_id, low: float, high: float, *, low_kind=None, high_kind=None) -> Segment:
        """Remove a segment, change its borders and insert it again.

        Kinds default to the segment's current ones.  The new segment is
        validated before anything is touched.
        """
        old = self.segments[seg_id][0]
        new = Segment(
            seg_id,
            old.low._replace(key=low, kind=BorderKind(low_kind) if low_kind is not None else old.low.kind),
            old.high._replace(key=high, kind=BorderKind(high_kind) if high_kind is not None else old.high.kind),
            old.weight,
        )
        self.delete(seg_id)
        self.insert(new)
        return new

    def _annotate(self, low, high, item) -> None:
        backend = self.backend
        add = backend.add
        lo_b, hi_b = low.border, high.border

        c = self.tree.root
        while True:
            b = c.border
            if hi_b < b:
                c = c.child[LEFT]
            elif lo_b > b:
                c = c.child[RIGHT]
            else:
                break

        if c is not low:
            v = c.child[LEFT]
            while v is not low:
                if lo_b < v.border:
                    v.ann[RIGHT] = add(v.ann[RIGHT], item)
                    v = v.child[LEFT]
                else:
                    v = v.child[RIGHT]
            low.ann[RIGHT] = add(low.ann[RIGHT], item)
        if c is not high:
            v = c.child[RIGHT]
            while v is not high:
                if hi_b > v.border:
                    v.ann[LEFT] = add(v.ann[LEFT], item)
                    v = v.child[RIGHT]
                else:
                    v = v.child[LEFT]
            high.ann[LEFT] = add(high.ann[LEFT], item)

    # -- queries ------------------------------------------------------------

    def path_annotations(self, q: float) -> list:
        """Contents of every edge the query for ``q`` crosses, top to bottom."""
        content = self.backend.content
        node, d = self.tree.head, LEFT
        out = []
        while True:
            out.append(content(node.ann[d]))
            node = node.child[d]
            if node is None:
                return out
            d = query_descend(q, node.border)

    def stab(self, q: float):
        """Segment ids containing ``q`` (set backend) or their summed weight."""
        node, d = self.tree.head, LEFT
        # Inlined query_descend: kinds >= CLOSED_UPPER send an equal key left.
        if self.is_set:
            found = set()
            while True:
                found |= node.ann[d].items
                node = node.child[d]
                if node is None:
                    return found
                b = node.border
                d = LEFT if q < b[0] or (q == b[0] and b[1] >= 2) else RIGHT
        anns = []
        while True:
            anns.append(node.ann[d])
            node = node.child[d]
            if node is None:
                return self.backend.total(anns)
            b = node.border
            d = LEFT if q < b[0] or (q == b[0] and b[1] >= 2) else RIGHT

    # -- inspection ---------------------------------------------------------

    def validate(self) -> list[str]:
        problems = self.tree.validate()
        if len(self.tree) != 2 * len(self.segments):
            problems.append(f"{len(self.tree)} nodes for {len(self.segments)} segments")
        return problems

    def all_annotations_neutral(self) -> bool:
        backend = self.backend
        return all(backend.is_neutral(node.ann[d]) for node, d in self.tree.slots())

    def depth_stats(self):
        return self.tree.depth_stats()

    def path_length_counters(self) -> dict:
        return self.tree.path_length_counters()

    def dump(self) -> str:
        return self.tree.dump()
