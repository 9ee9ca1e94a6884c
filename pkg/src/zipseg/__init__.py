"""Dynamic segment trees balanced as zip trees."""

from .annotations import NumericBackend, SetBackend, negate_weight
from .dst import DynamicSegmentTree
from .interval import Border, BorderKind, Direction, Segment, compare_borders, make_segment, query_descend, stabbing_contains
from .oracle import OracleStore, elementary_sweep, oracle_stab
from .ranks import RankPolicy, RankSource, hash_rank, random_rank
from .ziptree import REPAIR_STEPS, ZipTree

__all__ = [
    "Border",
    "BorderKind",
    "Direction",
    "DynamicSegmentTree",
    "NumericBackend",
    "OracleStore",
    "REPAIR_STEPS",
    "RankPolicy",
    "RankSource",
    "Segment",
    "SetBackend",
    "ZipTree",
    "compare_borders",
    "elementary_sweep",
    "hash_rank",
    "make_segment",
    "negate_weight",
    "oracle_stab",
    "query_descend",
    "random_rank",
    "stabbing_contains",
]
