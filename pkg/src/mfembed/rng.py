"""Deterministic seed derivation for independent random streams.

Every randomized routine takes either a seed or a `random.Random`; nested
work derives child seeds with `derive_seed`, so results are reproducible
and independent of scheduling.
"""

import hashlib


def derive_seed(master: int, *parts) -> int:
    """Derive a 63-bit child seed from a master seed and a stream id.

    The stream id may mix ints and short strings, e.g.
    ``derive_seed(seed, "split", 2, 0, 1)``.
    """
    key = repr((int(master),) + tuple(parts)).encode("utf-8")
    digest = hashlib.blake2b(key, digest_size=8).digest()
    return int.from_bytes(digest, "big") >> 1
