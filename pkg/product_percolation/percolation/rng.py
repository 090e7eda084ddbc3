"""Counter-based random streams keyed by (seed, labels).

Every stream is a Philox generator whose 128-bit key is a BLAKE2b digest of
the master seed and a tuple of labels, so any replica (or any edge, via its
position in the stream) can be regenerated independently of execution order.
"""

import hashlib

import numpy as np

SEED_BITS = 64


def stream_key(seed: int, *labels: object) -> int:
    """128-bit Philox key derived from the master seed and labels."""
    h = hashlib.blake2b(digest_size=16)
    h.update(str(int(seed) & ((1 << SEED_BITS) - 1)).encode("ascii"))
    for label in labels:
        h.update(b"\x1f")
        h.update(str(label).encode("utf-8"))
    return int.from_bytes(h.digest(), "little")


def stream(seed: int, *labels: object) -> np.random.Generator:
    """Independent generator for the stream named by `labels`."""
    return np.random.Generator(np.random.Philox(key=stream_key(seed, *labels)))


def uniforms(seed: int, count: int, *labels: object) -> np.ndarray:
    """The first `count` uniforms of a stream; element i depends only on (seed, labels, i)."""
    return stream(seed, *labels).random(count)


def child_seed(seed: int, *labels: object) -> int:
    """64-bit seed for an independent sub-run named by `labels`."""
    return stream_key(seed, *labels) & ((1 << SEED_BITS) - 1)
