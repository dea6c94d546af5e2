"""Inversion counting for permutations of a history's operations.

Position ``a`` and a later position ``b`` form an inversion when the operation
at ``b`` precedes the operation at ``a`` in the history. ``i_max`` is the
largest number of inversions any single operation takes part in, ``i_sum``
the total number of inverted pairs.

The :class:`InversionTables` hold, for every operation and every cluster, how
many members of the cluster the operation precedes and how many precede it.
The checker uses them to score a cluster the moment it is appended.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .history import Cluster, History


@dataclass(frozen=True)
class Permutation:
    order: tuple[str, ...]

    def __init__(self, order: Iterable[str]):
        object.__setattr__(self, "order", tuple(order))

    @cached_property
    def position(self) -> dict[str, int]:
        """1-based position of each op id."""
        return {op_id: k for k, op_id in enumerate(self.order, start=1)}

    def __len__(self) -> int:
        return len(self.order)

    def __getitem__(self, pos: int) -> str:
        """1-based lookup, ``pi[1]`` is the first operation."""
        if not 1 <= pos <= len(self.order):
            raise IndexError(f"position {pos} outside 1..{len(self.order)}")
        return self.order[pos - 1]


def cluster_order_to_permutation(order: Sequence[int], clusters: Sequence[Cluster]) -> Permutation:
    """Emit each cluster (1-based index) as its write followed by its reads."""
    ops: list[str] = []
    for c in order:
        cl = clusters[c - 1]
        ops.extend(o.op_id for o in cl.operations)
    return Permutation(ops)


def _positions(pi: Permutation, h: History) -> np.ndarray:
    if len(pi) != h.n or set(pi.order) != set(h.index_of):
        raise ValueError("permutation is not a bijection onto the history's operations")
    return np.fromiter((h.index_of[o] for o in pi.order), dtype=np.intp, count=h.n)


def _inversion_matrix(pi: Permutation, h: History) -> np.ndarray:
    # B[a, b] = 1 iff a < b and the op at b precedes the op at a
    idx = _positions(pi, h)
    prec = h.precedence_matrix[np.ix_(idx, idx)]
    return np.triu(prec.T, k=1)


def indicator(pi: Permutation, i: int, j: int, h: History) -> int:
    n = len(pi)
    if not (1 <= i <= n and 1 <= j <= n):
        raise IndexError(f"positions must lie in 1..{n}, got ({i}, {j})")
    if i >= j:
        return 0
    a = h.by_id[pi[i]]
    b = h.by_id[pi[j]]
    return int(b.response_ts < a.invoke_ts)


def inversion_degrees(pi: Permutation, h: History) -> np.ndarray:
    """Per-position inversion counts (position order)."""
    B = _inversion_matrix(pi, h)
    return B.sum(axis=0) + B.sum(axis=1)


def i_max(pi: Permutation, h: History) -> int:
    if h.n <= 1:
        _positions(pi, h)
        return 0
    return int(inversion_degrees(pi, h).max())


def i_sum(pi: Permutation, h: History) -> int:
    if h.n <= 1:
        _positions(pi, h)
        return 0
    return int(_inversion_matrix(pi, h).sum())


def is_legal(pi: Permutation, h: History) -> bool:
    """Every read returns the value of the latest write placed before it."""
    _positions(pi, h)
    current = None
    for op_id in pi.order:
        o = h.by_id[op_id]
        if o.is_write:
            current = o.value
        elif o.value != current:
            return False
    return True


@dataclass(frozen=True)
class InversionTables:
    """Dense per-(operation, cluster) precedence counts.

    Rows follow ``h.operations``; column ``c - 1`` is cluster ``c``.
    ``after[o, c]`` counts members of ``c`` that ``o`` precedes and
    ``before[o, c]`` counts members of ``c`` that precede ``o``.
    """

    history: History
    clusters: tuple[Cluster, ...]
    after: np.ndarray
    before: np.ndarray
    total_before: np.ndarray
    own_cluster: np.ndarray

    def after_count(self, op_id: str, c: int) -> int:
        return int(self.after[self.history.index_of[op_id], c - 1])

    def before_count(self, op_id: str, c: int) -> int:
        return int(self.before[self.history.index_of[op_id], c - 1])

    def total_before_count(self, op_id: str) -> int:
        return int(self.total_before[self.history.index_of[op_id]])

    def cluster_of(self, op_id: str) -> int:
        return int(self.own_cluster[self.history.index_of[op_id]])

    @cached_property
    def members(self) -> tuple[np.ndarray, ...]:
        """Row indices of each cluster's operations, write first."""
        ix = self.history.index_of
        return tuple(
            np.array([ix[o.op_id] for o in cl.operations], dtype=np.intp) for cl in self.clusters
        )


def build_tables(clusters: Sequence[Cluster], h: History) -> InversionTables:
    """Fill the tables in O(n * n_w * log n) with one sorted pass per cluster."""
    n, n_w = h.n, len(clusters)
    inv = np.array([o.invoke_ts for o in h.operations], dtype=np.int64)
    res = np.array([o.response_ts for o in h.operations], dtype=np.int64)
    after = np.zeros((n, n_w), dtype=np.int32)
    before = np.zeros((n, n_w), dtype=np.int32)
    own = np.zeros(n, dtype=np.int32)
    ix = h.index_of
    for k, cl in enumerate(clusters):
        rows = [ix[o.op_id] for o in cl.operations]
        own[rows] = cl.index
        starts = np.sort(inv[rows])
        ends = np.sort(res[rows])
        # o -> p  <=>  o.f < p.s
        after[:, k] = len(rows) - np.searchsorted(starts, res, side="right")
        # p -> o  <=>  p.f < o.s
        before[:, k] = np.searchsorted(ends, inv, side="left")
    return InversionTables(
        history=h,
        clusters=tuple(clusters),
        after=after,
        before=before,
        total_before=before.sum(axis=1),
        own_cluster=own,
    )


def degree_at_placement(op_id: str, placed: Iterable[int], t: InversionTables) -> int:
    """Final inversion degree of ``op_id`` when its cluster is appended now.

    ``placed`` are the clusters already appended. Everything placed sits
    before the operation, everything else after it, and the operation's own
    cluster contributes nothing when emitted write-first.
    """
    placed = set(placed)
    own = t.cluster_of(op_id)
    if own in placed:
        raise ValueError(f"cluster {own} of {op_id} is already placed")
    row = t.history.index_of[op_id]
    cols = [c - 1 for c in placed]
    ahead = int(t.after[row, cols].sum()) if cols else 0
    behind = int(t.total_before[row]) - (int(t.before[row, cols].sum()) if cols else 0)
    return ahead + behind - int(t.before[row, own - 1])
