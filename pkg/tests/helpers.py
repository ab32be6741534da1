# -*- coding: utf-8 -*-
import numpy as np

from manifold_filter_combine.graph import SparseGraph


def complete_graph(n):
    rows, cols = np.triu_indices(n, k=1)
    return SparseGraph.from_edges(n, rows, cols)


def cycle_plus_matching(n, rng):
    """A cycle on n vertices plus a random matching; always connected."""
    rows = list(range(n))
    cols = [(i + 1) % n for i in range(n)]
    perm = rng.permutation(n)
    rows.extend(perm[0::2][:n // 2])
    cols.extend(perm[1::2][:n // 2])
    return SparseGraph.from_edges(n, rows, cols)
