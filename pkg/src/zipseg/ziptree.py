"""Zip tree with edge annotations that survive unzipping and zipping.

Every node owns two annotation slots, one per child edge.  A slot exists even
when the child is missing: a query that falls off the tree there has still
crossed that edge.  A sentinel head node sits above the root; its left slot
is the edge into the root.

Heap order on ranks is strict on the left and non-strict on the right, so on
equal ranks the node with the smaller border is the ancestor.

The repair steps are named so tests can switch single steps off (see
``REPAIR_STEPS``) and check that each of them is needed.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field

from .interval import LEFT, RIGHT, Border

REPAIR_STEPS = (
    # unzipping
    "unzip_push_off_path",  # add what was collected above to the edge leaving the path
    "unzip_collect",  # collect the annotation of the path edge being cut
    "unzip_reset_new_edges",  # new spine edges start empty
    "unzip_terminal",  # both loose ends of the new spines get everything collected
    # zipping
    "zip_keep_entry",  # the edge into the removed node keeps its annotation
    "zip_reset_attached",  # overwritten edges of the zipped path start empty
    "zip_push_off_spine",  # add what was collected on a spine to the edge leaving it
    "zip_collect",  # collect the spine edge being cut
    "zip_terminal",  # the loose end of the zipped path gets everything collected
)


class Node:
    __slots__ = ("border", "rank", "parent", "child", "ann")

    def __init__(self, border: Border, rank: int | None, ann_left, ann_right):
        self.border = border
        self.rank = rank
        self.parent = None
        self.child = [None, None]
        self.ann = [ann_left, ann_right]

    def __repr__(self) -> str:
        return f"Node({self.border}, rank={self.rank})"


@dataclass
class DepthStats:
    mean: float
    max: int
    histogram: list = field(default_factory=list)  # histogram[d] = nodes at depth d


class ZipTree:
    def __init__(self, backend, ranks, *, disabled_repairs=(), count_paths: bool = True):
        unknown = set(disabled_repairs) - set(REPAIR_STEPS)
        if unknown:
            raise ValueError(f"unknown repair steps: {sorted(unknown)}")
        self.backend = backend
        self.ranks = ranks
        self.disabled_repairs = frozenset(disabled_repairs)
        self.count_paths = count_paths
        self.head = Node(None, None, backend.create_empty(), None)
        self.size = 0
        self.stats = Counter()
        self._rank = ranks.rank_function()

    def _on(self, step: str) -> bool:
        return step not in self.disabled_repairs

    # -- queries ------------------------------------------------------------

    @property
    def root(self) -> Node | None:
        return self.head.child[LEFT]

    def __len__(self) -> int:
        return self.size

    def find(self, border: Border) -> Node | None:
        cur = self.head.child[LEFT]
        while cur is not None:
            b = cur.border
            if border == b:
                return cur
            cur = cur.child[LEFT] if border < b else cur.child[RIGHT]
        return None

    def rank_of(self, node: Node) -> int:
        return self._rank(node)

    def nodes(self):
        """In-order iteration."""
        stack = []
        cur = self.root
        while stack or cur is not None:
            while cur is not None:
                stack.append(cur)
                cur = cur.child[LEFT]
            cur = stack.pop()
            yield cur
            cur = cur.child[RIGHT]

    def slots(self):
        """Every edge slot as ``(node, direction)``, head slot first."""
        yield self.head, LEFT
        for n in self.nodes():
            yield n, LEFT
            yield n, RIGHT

    # -- insertion ----------------------------------------------------------

    def insert(self, border: Border) -> Node:
        if self.find(border) is not None:
            raise KeyError(f"duplicate border {border}")
        rank = self.ranks.initial_rank(border)
        node = Node(border, rank, self.backend.create_empty(), self.backend.create_empty())
        r = rank if rank is not None else self._rank(node)
        parent, side = self.search_insert_position(border, r)
        self.unzip_insert(node, parent, side)
        return node

    def search_insert_position(self, border: Border, rank: int):
        """Slot ``(parent, side)`` the new node takes over.

        The slot's current occupant (``parent.child[side]``) is the highest
        node on the search path that the new node must sit above, or None
        when the new node becomes a leaf.
        """
        parent, side = self.head, LEFT
        cur = self.head.child[LEFT]
        rank_of = self._rank
        while cur is not None:
            b = cur.border
            r = rank_of(cur)
            if r < rank or (r == rank and b > border):
                break
            side = LEFT if border < b else RIGHT
            parent, cur = cur, cur.child[side]
        return parent, side

    def unzip_insert(self, new: Node, parent: Node, side: int) -> None:
        """Put ``new`` into slot ``(parent, side)``, unzipping the path below.

        Runs the four steps separately: cut the search path into nodes
        smaller and larger than ``new``, splice ``new`` in, and string the
        two groups up as its left and right spines.  The annotation of the
        edge into the slot stays where it is.
        """
        backend = self.backend
        push = self._on("unzip_push_off_path")
        collect = self._on("unzip_collect")
        key = new.border
        smaller, larger = [], []
        collected = backend.create_empty()

        cur = parent.child[side]
        while cur is not None:
            if key < cur.border:
                larger.append(cur)
                d, o = LEFT, RIGHT
            else:
                smaller.append(cur)
                d, o = RIGHT, LEFT
            if push:
                cur.ann[o] = backend.union_into(cur.ann[o], collected)
            if collect:
                collected = backend.union_into(collected, cur.ann[d])
            nxt = cur.child[d]
            cur.child[d] = None
            cur = nxt

        parent.child[side] = new
        new.parent = parent

        reset = self._on("unzip_reset_new_edges")
        ends = []
        for group, first_dir, chain_dir in ((smaller, LEFT, RIGHT), (larger, RIGHT, LEFT)):
            p, d = new, first_dir
            for n in group:
                p.child[d] = n
                n.parent = p
                if reset:
                    backend.delete_annotation(p.ann[d])
                    p.ann[d] = backend.create_empty()
                p, d = n, chain_dir
            ends.append((p, d))

        if self._on("unzip_terminal"):
            (lp, ld), (rp, rd) = ends
            backend.delete_annotation(lp.ann[ld])
            lp.ann[ld] = backend.copy(collected)
            backend.delete_annotation(rp.ann[rd])
            rp.ann[rd] = collected
        else:
            backend.delete_annotation(collected)

        self.size += 1
        if self.count_paths:
            st = self.stats
            st["unzips"] += 1
            st["unzip_nodes"] += len(smaller) + len(larger)

    # -- deletion -----------------------------------------------------------

    def zip_delete(self, n: Node) -> None:
        """Remove ``n`` by zipping its left and right spines into one path.

        The removed node's own slots become the two running collections, so
        whatever they held is pushed down into the zipped path.
        """
        backend = self.backend
        rank_of = self._rank
        push = self._on("zip_push_off_spine")
        collect = self._on("zip_collect")
        reset = self._on("zip_reset_attached")
        keep_entry = self._on("zip_keep_entry")

        l, r = n.child
        p = n.parent
        side = LEFT if p.child[LEFT] is n else RIGHT
        collected_l, collected_r = n.ann
        first = True
        steps = 0
        while l is not None or r is not None:
            take_left = l is not None and (r is None or rank_of(l) >= rank_of(r))
            c = l if take_left else r
            p.child[side] = c
            c.parent = p
            if reset and (not first or not keep_entry):
                backend.delete_annotation(p.ann[side])
                p.ann[side] = backend.create_empty()
            first = False
            if take_left:
                if push:
                    c.ann[LEFT] = backend.union_into(c.ann[LEFT], collected_l)
                if collect:
                    collected_l = backend.union_into(collected_l, c.ann[RIGHT])
                l = c.child[RIGHT]
                side = RIGHT
            else:
                if push:
                    c.ann[RIGHT] = backend.union_into(c.ann[RIGHT], collected_r)
                if collect:
                    collected_r = backend.union_into(collected_r, c.ann[LEFT])
                r = c.child[LEFT]
                side = LEFT
            p = c
            steps += 1

        if first:
            p.child[side] = None
        if self._on("zip_terminal"):
            if first:
                p.ann[side] = backend.union_into(p.ann[side], collected_l)
            else:
                backend.delete_annotation(p.ann[side])
                if side == RIGHT:
                    p.ann[side], collected_l = collected_l, None
                else:
                    p.ann[side], collected_r = collected_r, None
        # Discard the removed node's slots (now the collections).
        for ann in (collected_l, collected_r):
            if ann is not None:
                backend.delete_annotation(ann)
        n.ann = [None, None]
        n.child = [None, None]
        n.parent = None

        self.size -= 1
        if self.count_paths:
            st = self.stats
            st["zips"] += 1
            st["zip_nodes"] += steps

    def remove(self, border: Border) -> None:
        node = self.find(border)
        if node is None:
            raise KeyError(f"no node with border {border}")
        self.zip_delete(node)

    # -- inspection ---------------------------------------------------------

    def validate(self) -> list[str]:
        """Structural violations; an empty list means the tree is sound."""
        problems = []
        rank_of = self._rank
        head = self.head
        root = head.child[LEFT]
        if head.child[RIGHT] is not None:
            problems.append("head has a right child")
        if root is not None and root.parent is not head:
            problems.append(f"root {root.border} does not point back to the head")
        count = 0
        prev = None
        for n in self.nodes():
            count += 1
            if prev is not None and not prev.border < n.border:
                problems.append(f"BST order: {prev.border} before {n.border}")
            prev = n
            r = rank_of(n)
            if r < 0:
                problems.append(f"negative rank at {n.border}")
            for d in (LEFT, RIGHT):
                c = n.child[d]
                if c is None:
                    continue
                if c.parent is not n:
                    problems.append(f"parent link of {c.border} does not point to {n.border}")
                rc = rank_of(c)
                if d == LEFT and not rc < r:
                    problems.append(f"rank order: left child {c.border} rank {rc} >= {r} at {n.border}")
                if d == RIGHT and not rc <= r:
                    problems.append(f"rank order: right child {c.border} rank {rc} > {r} at {n.border}")
        if count != self.size:
            problems.append(f"node count {self.size} but {count} nodes reachable")
        return problems

    def depth_stats(self) -> DepthStats:
        hist = []
        root = self.root
        if root is None:
            return DepthStats(0.0, 0, [])
        queue = deque([(root, 0)])
        total = 0
        while queue:
            n, depth = queue.popleft()
            if depth == len(hist):
                hist.append(0)
            hist[depth] += 1
            total += depth
            for c in n.child:
                if c is not None:
                    queue.append((c, depth + 1))
        count = sum(hist)
        return DepthStats(total / count, len(hist) - 1, hist)

    def path_length_counters(self) -> dict:
        st = self.stats
        calls = self.backend.calls
        return {
            "zip_nodes_total": st["zip_nodes"],
            "unzip_nodes_total": st["unzip_nodes"],
            "op_counts": {"zips": st["zips"], "unzips": st["unzips"]},
            "annotation_calls": {k: calls[k] for k in ("union", "copy", "create", "delete", "add", "erase")},
        }

    def reset_counters(self) -> None:
        self.stats.clear()
        self.backend.calls.clear()

    def dump(self) -> str:
        """Indented shape with ranks and edge annotations, for golden tests."""
        backend = self.backend
        lines = [f"* in={_fmt_ann(backend, self.head.ann[LEFT])}"]

        def walk(node, depth, tag):
            if node is None:
                return
            pad = "  " * depth
            lines.append(
                f"{pad}{tag}{node.border} r={self._rank(node)}"
                f" L={_fmt_ann(backend, node.ann[LEFT])} R={_fmt_ann(backend, node.ann[RIGHT])}"
            )
            walk(node.child[LEFT], depth + 1, "L ")
            walk(node.child[RIGHT], depth + 1, "R ")

        walk(self.root, 1, "")
        return "\n".join(lines)

    def shape(self):
        """Nested tuples of (border, rank, left, right); structural fingerprint."""

        def walk(node):
            if node is None:
                return None
            return (node.border, self._rank(node), walk(node.child[LEFT]), walk(node.child[RIGHT]))

        return walk(self.root)


def _fmt_ann(backend, ann) -> str:
    content = backend.content(ann)
    if backend.kind == "set":
        return "{" + ",".join(sorted(map(str, content))) + "}"
    return "(" + ",".join(str(x) for x in content) + ")"
