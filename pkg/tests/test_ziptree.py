import random
from operator import attrgetter

import pytest

from zipseg.annotations import NumericBackend, SetBackend
from zipseg.interval import LEFT, RIGHT, Border, BorderKind, query_descend
from zipseg.ranks import RankSource
from zipseg.ziptree import REPAIR_STEPS, ZipTree


class TableRanks:
    """Ranks looked up by border key; stored on the node like random_store."""

    def __init__(self, table):
        self.table = table

    def initial_rank(self, border):
        return self.table[border.key]

    def rank_function(self):
        return attrgetter("rank")


def border(key) -> Border:
    return Border(float(key), BorderKind.CLOSED_LOWER, key)


def build(ranks: dict, backend=None, order=None) -> ZipTree:
    tree = ZipTree(backend or NumericBackend(), TableRanks({float(k): r for k, r in ranks.items()}))
    for key in order or ranks:
        tree.insert(border(key))
    return tree


def keys_of(shape):
    if shape is None:
        return None
    b, r, left, right = shape
    return (int(b.key), keys_of(left), keys_of(right))


# Named nodes 1..5 with rank equal to their name; leaves A..E hang below them.
NAMED = {20: 1, 30: 2, 10: 3, 40: 4, 50: 5}
LEAVES = {60: 0, 45: 0, 5: 0, 35: 0, 15: 0}


def test_worked_unzip_example():
    tree = build({**NAMED, **LEAVES})
    before = keys_of(tree.shape())
    assert before == (
        50,
        (40, (10, (5, None, None), (30, (20, (15, None, None), None), (35, None, None))), (45, None, None)),
        (60, None, None),
    )
    tree.ranks.table[25.0] = 6
    tree.reset_counters()
    tree.insert(border(25))
    assert keys_of(tree.shape()) == (
        25,
        (10, (5, None, None), (20, (15, None, None), None)),
        (50, (40, (30, None, (35, None, None)), (45, None, None)), (60, None, None)),
    )
    assert tree.stats["unzip_nodes"] == 5
    tree.remove(border(25))
    assert keys_of(tree.shape()) == before
    assert tree.stats["zip_nodes"] == 5
    assert tree.validate() == []


@pytest.mark.parametrize("seed", range(20))
def test_shape_is_independent_of_history(seed):
    rng = random.Random(seed)
    ranks = {k: rng.randrange(4) for k in rng.sample(range(100), 30)}
    first = build(ranks).shape()
    order = list(ranks)
    rng.shuffle(order)
    tree = build(ranks, order=order)
    assert tree.shape() == first
    extra = [k for k in range(100, 110)]
    for k in extra:
        tree.ranks.table[float(k)] = rng.randrange(4)
        tree.insert(border(k))
    for k in reversed(extra):
        tree.remove(border(k))
    assert tree.shape() == first


def path_value(tree: ZipTree, q: float):
    """Sum of the slot annotations crossed by a query descending to ``q``."""
    node, side = tree.head, LEFT
    total = 0
    while True:
        total += node.ann[side]
        nxt = node.child[side]
        if nxt is None:
            return total
        node, side = nxt, query_descend(q, nxt.border)


def random_annotated_tree(rng, n_nodes):
    keys = rng.sample(range(0, 4 * n_nodes + 4, 2), n_nodes)
    tree = build({k: min(rng.randrange(64), 5) // 2 for k in keys})
    for node, d in tree.slots():
        node.ann[d] = rng.randrange(-5, 6)
    return tree


def probe_points(limit):
    return [x / 2 for x in range(-2, 2 * limit + 4)]


def test_unzip_preserves_every_query_path():
    rng = random.Random(1)
    for _ in range(1000):
        tree = random_annotated_tree(rng, rng.randrange(0, 25))
        points = probe_points(4 * len(tree) + 8)
        before = [path_value(tree, q) for q in points]
        new_key = rng.randrange(-1, 4 * len(tree) + 6, 2)
        tree.ranks.table[float(new_key)] = rng.randrange(4)
        tree.insert(border(new_key))
        assert [path_value(tree, q) for q in points] == before
        assert tree.validate() == []


def _pick_removal(rng, tree):
    keys = [n.border.key for n in tree.nodes()]
    i = rng.randrange(len(keys))
    pred = keys[i - 1] if i else -float("inf")
    succ = keys[i + 1] if i + 1 < len(keys) else float("inf")
    return tree.find(border(int(keys[i]))), pred, succ


def test_zip_preserves_paths_outside_the_merged_gap():
    rng = random.Random(2)
    for _ in range(1000):
        tree = random_annotated_tree(rng, rng.randrange(1, 25))
        points = probe_points(4 * len(tree) + 8)
        n, pred, succ = _pick_removal(rng, tree)
        x = n.border.key
        before = {q: path_value(tree, q) for q in points}
        sides = {before[x - 0.5], before[x]}
        tree.zip_delete(n)
        merged = set()
        for q in points:
            after = path_value(tree, q)
            if pred <= q < succ:
                merged.add(after)
            else:
                assert after == before[q]
        # the two gaps beside the removed border become one
        assert len(merged) == 1 and merged <= sides
        assert tree.validate() == []


def test_zip_preserves_every_path_when_the_gaps_agree():
    rng = random.Random(5)
    for _ in range(1000):
        tree = random_annotated_tree(rng, rng.randrange(1, 25))
        points = probe_points(4 * len(tree) + 8)
        n, _, _ = _pick_removal(rng, tree)
        x = n.border.key
        # shift n's right subtree so the gaps left and right of x carry the same sum
        n.ann[RIGHT] += path_value(tree, x - 0.5) - path_value(tree, x)
        before = [path_value(tree, q) for q in points]
        tree.zip_delete(n)
        assert [path_value(tree, q) for q in points] == before


def test_rank_zero_insert_touches_at_most_one_node():
    rng = random.Random(3)
    for _ in range(300):
        tree = random_annotated_tree(rng, rng.randrange(0, 30))
        tree.reset_counters()
        key = rng.randrange(-1, 4 * len(tree) + 6, 2)
        tree.ranks.table[float(key)] = 0
        node = tree.insert(border(key))
        assert tree.stats["unzip_nodes"] <= 1
        below = [c for c in node.child if c is not None]
        if below:
            (c,) = below
            assert c is node.child[RIGHT]
            assert c.rank == 0 and c.child[LEFT] is None


def test_validate_reports_violations():
    tree = build({1: 2, 2: 1, 3: 0})
    assert tree.validate() == []
    root = tree.root
    root.child[LEFT], root.child[RIGHT] = root.child[RIGHT], root.child[LEFT]
    assert any(p.startswith("BST order") for p in tree.validate())

    tree = build({1: 0, 2: 1})
    tree.root.child[LEFT].rank = 1  # equal rank on the left is not allowed
    assert any(p.startswith("rank order") for p in tree.validate())

    tree = build({1: 1, 2: 0})
    tree.root.child[RIGHT].parent = None
    assert any(p.startswith("parent link") for p in tree.validate())

    tree = build({1: 1, 2: 0})
    tree.size = 5
    assert any(p.startswith("node count") for p in tree.validate())


def test_equal_ranks_chain_to_the_right():
    tree = build({1: 2, 2: 2, 3: 2})
    assert keys_of(tree.shape()) == (1, None, (2, None, (3, None, None)))
    assert tree.validate() == []


def test_depth_stats():
    assert build({}).depth_stats().mean == 0.0
    single = build({7: 0}).depth_stats()
    assert (single.mean, single.max, single.histogram) == (0.0, 0, [1])
    perfect = build({1: 0, 2: 1, 3: 0}).depth_stats()
    assert perfect.mean == pytest.approx(2 / 3)
    assert perfect.max == 1 and perfect.histogram == [1, 2]


def test_annotation_calls_per_zip_are_linear_in_path_length():
    rng = random.Random(4)
    for _ in range(300):
        tree = random_annotated_tree(rng, rng.randrange(1, 40))
        n, _, _ = _pick_removal(rng, tree)
        backend = SetBackend()
        for node, d in tree.slots():
            node.ann[d] = backend.create_empty()
        tree.backend = backend
        own = [id(a) for a in n.ann]
        discarded = []
        real_delete = backend.delete_annotation

        def delete(ann):
            if id(ann) in own:
                discarded.append(ann)
            real_delete(ann)

        backend.delete_annotation = delete
        tree.reset_counters()
        tree.zip_delete(n)
        m = tree.stats["zip_nodes"]
        calls = sum(backend.calls[k] for k in ("union", "copy", "create", "delete"))
        # throwing away the removed node's own two slots is not part of the repair
        assert calls - len(discarded) <= 2 + 4 * m


def test_duplicate_and_missing_borders():
    tree = build({1: 0})
    with pytest.raises(KeyError):
        tree.insert(border(1))
    with pytest.raises(KeyError):
        tree.remove(border(2))


def test_unknown_repair_step_rejected():
    with pytest.raises(ValueError):
        ZipTree(NumericBackend(), RankSource("random_store", 0), disabled_repairs=["zip_everything"])
    assert len(REPAIR_STEPS) == len(set(REPAIR_STEPS))


def test_shape_is_deterministic_for_a_seed():
    def run():
        tree = ZipTree(NumericBackend(), RankSource("random_store", 11))
        rng = random.Random(0)
        for k in rng.sample(range(1000), 200):
            tree.insert(border(k))
        return tree.shape()

    assert run() == run()


GOLDEN = """\
* in={}
  [1#1 r=2 L={a} R={}
    R [2#2 r=1 L={} R={b}
      R [3#3 r=0 L={} R={}"""


def test_golden_dump():
    tree = build({1: 2, 2: 1, 3: 0}, backend=SetBackend())
    b = tree.backend
    tree.root.ann[LEFT] = b.add(tree.root.ann[LEFT], "a")
    two = tree.find(border(2))
    two.ann[RIGHT] = b.add(two.ann[RIGHT], "b")
    assert tree.dump() == GOLDEN
