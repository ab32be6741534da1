# -*- coding: utf-8 -*-
from zlib import crc32

import numpy as np


def tag_hash(tag):
    """Stable 32-bit hash of a purpose tag (str, bytes or int)."""
    if isinstance(tag, (int, np.integer)):
        return int(tag) & 0xffffffff
    if not isinstance(tag, bytes):
        tag = str(tag).encode('utf-8', 'ignore')
    return crc32(tag) & 0xffffffff


def seed_sequence(seed, *tags):
    seed = int(seed)
    entropy = [seed & 0xffffffff, (seed >> 32) & 0xffffffff]
    return np.random.SeedSequence(entropy + [tag_hash(t) for t in tags])


def derive_rng(seed, *tags):
    """Independent random stream for (seed, purpose tags).

    Streams never depend on the order in which they are requested, so
    results are identical between serial and parallel runs.
    """
    return np.random.default_rng(seed_sequence(seed, *tags))


def derive_seed(seed, *tags):
    """64-bit integer seed derived from (seed, tags)."""
    state = seed_sequence(seed, *tags).generate_state(2, dtype=np.uint32)
    return (int(state[0]) << 32) | int(state[1])


def chunks(l, n):
    for i in range(0, len(l), n):
        yield l[i:i+n]
