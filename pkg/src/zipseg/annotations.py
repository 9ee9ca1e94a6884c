"""Edge annotation backends.

Both backends follow the same contract, modelled on in-place accumulation
(``a += b``): every mutating call returns the resulting annotation and the
caller stores it back into its slot.  The set backend mutates and returns the
same handle; the numeric backend works on immutable values.

``SetBackend`` is a naive union-copy store.  Sets are hash sets of segment
ids and every item keeps back-references to the sets holding it, so an item
can be erased from all sets at once.  ``NumericBackend`` annotates weight
vectors and unions by addition.
"""

from __future__ import annotations

import operator
from collections import Counter


class SetAnnotation:
    __slots__ = ("items", "alive")

    def __init__(self):
        self.items = set()
        self.alive = True

    def __repr__(self) -> str:
        return "{" + ", ".join(sorted(map(str, self.items))) + "}"


class SetBackend:
    kind = "set"

    def __init__(self):
        self._holders = {}  # segment id -> set of SetAnnotation
        self.calls = Counter()

    def create_empty(self) -> SetAnnotation:
        self.calls["create"] += 1
        return SetAnnotation()

    def delete_annotation(self, ann: SetAnnotation) -> None:
        self.calls["delete"] += 1
        assert ann.alive, "annotation deleted twice"
        holders = self._holders
        for item in ann.items:
            holders[item].discard(ann)
        ann.items = set()
        ann.alive = False

    def copy(self, ann: SetAnnotation) -> SetAnnotation:
        self.calls["copy"] += 1
        new = SetAnnotation()
        new.items = set(ann.items)
        holders = self._holders
        for item in new.items:
            holders[item].add(new)
        return new

    def union_into(self, target: SetAnnotation, source: SetAnnotation) -> SetAnnotation:
        self.calls["union"] += 1
        assert isinstance(source, SetAnnotation) and target.alive and source.alive
        if source is target:
            return target
        titems = target.items
        holders = self._holders
        for item in source.items:
            if item not in titems:
                titems.add(item)
                holders[item].add(target)
        return target

    def add(self, ann: SetAnnotation, segment_id) -> SetAnnotation:
        """createItem + union: put ``segment_id`` into ``ann``."""
        self.calls["add"] += 1
        if segment_id not in ann.items:
            ann.items.add(segment_id)
            self._holders.setdefault(segment_id, set()).add(ann)
        return ann

    add_item = add

    def erase_item_everywhere(self, segment_id) -> None:
        self.calls["erase"] += 1
        for ann in self._holders.pop(segment_id, ()):
            ann.items.discard(segment_id)

    def is_neutral(self, ann: SetAnnotation) -> bool:
        return not ann.items

    def content(self, ann: SetAnnotation) -> frozenset:
        return frozenset(ann.items)

    def holders_of(self, segment_id) -> int:
        return len(self._holders.get(segment_id, ()))

    def neutral_content(self):
        return frozenset()


def negate_weight(d):
    return tuple(-x for x in d)


class NumericBackend:
    """Weight vectors of fixed dimension ``k``.

    With ``k == 1`` annotations are plain numbers, otherwise tuples.  Use
    integer weights where exact cancellation matters.
    """

    kind = "numeric"

    def __init__(self, k: int = 1):
        if k < 1:
            raise ValueError("dimension must be at least 1")
        self.k = k
        self.calls = Counter()
        self._zero = 0 if k == 1 else (0,) * k

    def create_empty(self):
        self.calls["create"] += 1
        return self._zero

    def delete_annotation(self, ann) -> None:
        self.calls["delete"] += 1

    def copy(self, ann):
        self.calls["copy"] += 1
        return ann

    def union_into(self, target, source):
        self.calls["union"] += 1
        if self.k == 1:
            return target + source
        return tuple(map(operator.add, target, source))

    def add(self, ann, weight):
        self.calls["add"] += 1
        if self.k == 1:
            return ann + weight[0]
        assert len(weight) == self.k, "weight dimension mismatch"
        return tuple(map(operator.add, ann, weight))

    add_weight = add

    def total(self, anns) -> tuple:
        """Content of the sum of ``anns`` (uncounted; used by queries)."""
        if self.k == 1:
            return (sum(anns),)
        return tuple(map(sum, zip(*anns)))

    def is_neutral(self, ann) -> bool:
        if self.k == 1:
            return ann == 0
        return not any(ann)

    def content(self, ann) -> tuple:
        return (ann,) if self.k == 1 else tuple(ann)

    def neutral_content(self):
        return (0,) * self.k


def make_backend(name: str, k: int = 1):
    if name == "set":
        return SetBackend()
    if name == "numeric":
        return NumericBackend(k)
    raise ValueError(f"unknown annotation backend {name!r}")
