"""Node ranks: geometric(1/2) values from randomness or from hashing.

A rank is the index of the lowest set bit of a 64-bit word.  For a uniform
word this is ``k`` with probability ``2**-(k+1)``.
"""

from __future__ import annotations

import hashlib
import random
import struct
from enum import Enum
from operator import attrgetter

WORD_BITS = 64
WORD_MASK = (1 << WORD_BITS) - 1


class RankPolicy(str, Enum):
    RANDOM_STORE = "random_store"
    HASH_STORE = "hash_store"
    HASH_RECOMPUTE = "hash_recompute"

    @property
    def hashed(self) -> bool:
        return self is not RankPolicy.RANDOM_STORE

    @property
    def stored(self) -> bool:
        return self is not RankPolicy.HASH_RECOMPUTE


def trailing_zeros(word: int) -> int:
    """Index of the lowest set bit; ``word`` must be nonzero."""
    return (word & -word).bit_length() - 1


def random_rank(rng: random.Random) -> int:
    word = rng.getrandbits(WORD_BITS)
    while word == 0:
        word = rng.getrandbits(WORD_BITS)
    return trailing_zeros(word)


def hash_rank(key_bits: int, multiplier: int) -> int:
    """Multiply-shift with the shift dropped: rank of ``key_bits * multiplier``.

    Zero keys map to rank 0.  The product of a nonzero key and an odd
    multiplier is never zero modulo ``2**64``.
    """
    if not multiplier & 1:
        raise ValueError("multiplier must be odd")
    product = (key_bits * multiplier) & WORD_MASK
    if product == 0:
        return 0
    return trailing_zeros(product)


def mix64(x: int) -> int:
    # splitmix64 finalizer
    x &= WORD_MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & WORD_MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & WORD_MASK
    return x ^ (x >> 31)


def _id_bits(segment_id) -> int:
    if isinstance(segment_id, int):
        return segment_id & WORD_MASK
    digest = hashlib.blake2b(repr(segment_id).encode(), digest_size=8).digest()
    return int.from_bytes(digest, "little")


_DOUBLE = struct.Struct("<d")
_GOLDEN = 0x9E3779B97F4A7C15


def border_key_bits(border, salt: int = 0) -> int:
    """Reproducible 64-bit fingerprint of a border.

    Built from the bit pattern of the float key, the border kind and the
    segment id.  The raw float pattern has structured low bits (values in
    ``[0, 0.5)`` carry trailing zero mantissa bits), so it is avalanched
    before the rank is read off its low end.
    """
    key, kind, segment_id = border
    sid = segment_id if type(segment_id) is int else _id_bits(segment_id)
    word = int.from_bytes(_DOUBLE.pack(key), "little") ^ (((sid << 2) + kind) * _GOLDEN) ^ salt
    return mix64(word)


class RankSource:
    """Hands out ranks for new nodes according to a policy.

    Under ``HASH_RECOMPUTE`` nothing is stored at the node: ``initial_rank``
    returns None and ``rank_of`` recomputes the hash every time.
    """

    def __init__(self, policy: RankPolicy | str = RankPolicy.RANDOM_STORE, seed: int = 0):
        self.policy = RankPolicy(policy)
        self.seed = seed
        self.rng = random.Random(seed)
        # Drawn once per tree; also salts the fingerprint so the hash ranks
        # depend on the seed.
        self.multiplier = random.Random(f"multiplier:{seed}").getrandbits(WORD_BITS) | 1

    def hashed_rank(self, border) -> int:
        return hash_rank(border_key_bits(border, self.multiplier), self.multiplier)

    def rank_function(self):
        """Fast equivalent of ``rank_of`` for hot loops."""
        if self.policy.stored:
            return attrgetter("rank")
        multiplier = self.multiplier
        pack = _DOUBLE.pack

        def recompute(node, int_from_bytes=int.from_bytes):
            key, kind, sid = node.border
            if type(sid) is not int:
                sid = _id_bits(sid)
            x = int_from_bytes(pack(key), "little") ^ (((sid << 2) + kind) * _GOLDEN) ^ multiplier
            # mix64 and hash_rank, inlined
            x &= WORD_MASK
            x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & WORD_MASK
            x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & WORD_MASK
            x = ((x ^ (x >> 31)) * multiplier) & WORD_MASK
            return (x & -x).bit_length() - 1 if x else 0

        return recompute

    def initial_rank(self, border) -> int | None:
        if self.policy is RankPolicy.RANDOM_STORE:
            return random_rank(self.rng)
        if self.policy is RankPolicy.HASH_STORE:
            return self.hashed_rank(border)
        return None

    def rank_of(self, node) -> int:
        if node.rank is not None:
            return node.rank
        return self.hashed_rank(node.border)

    def __repr__(self) -> str:
        return f"RankSource({self.policy.value}, seed={self.seed})"
