"""Seeded random streams.

All randomness in the package comes from numpy's counter-based Philox
(4x64, 10 rounds) bit generator. Child seeds are derived by hashing the
parent seed together with a path of labels, so a grid cell's stream does not
depend on the order in which cells are scheduled.
"""

import hashlib
import struct

import numpy as np

GENERATOR_NAME = "philox4x64-10"
RNG_VERSION = 1


def _encode(part):
    if isinstance(part, (bool, np.bool_)):
        return b"b" + bytes([int(part)])
    if isinstance(part, (int, np.integer)):
        return b"i" + int(part).to_bytes(16, "little", signed=True)
    if isinstance(part, float):
        return b"f" + struct.pack("<d", part)
    if isinstance(part, (tuple, list)):
        return b"t" + b"".join(_encode(p) for p in part) + b"."
    return b"s" + str(part).encode("utf-8") + b"\0"


def derive_seed(seed, *path):
    """A 63-bit seed deterministically derived from ``seed`` and ``path``."""
    h = hashlib.blake2b(digest_size=8, person=b"mvfuse-v1")
    h.update(_encode(int(seed)))
    for part in path:
        h.update(_encode(part))
    return int.from_bytes(h.digest(), "little") >> 1


def make_rng(seed, *path):
    """A Philox generator for ``seed`` (optionally split along ``path``)."""
    if isinstance(seed, np.random.Generator):
        if path:
            raise TypeError("cannot split an existing Generator by path")
        return seed
    if path:
        seed = derive_seed(seed, *path)
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed))))
