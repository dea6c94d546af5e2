"""Brute-force ground truth for small histories.

Nothing here is clever on purpose: every cluster order is enumerated and
scored with the direct pairwise inversion functions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

from .history import Cluster, History, build_clusters
from .inversion import Permutation, cluster_order_to_permutation, i_max, i_sum, is_legal

DEFAULT_CLUSTER_LIMIT = 8
DEFAULT_OP_LIMIT = 8


class OracleLimitError(ValueError):
    pass


@dataclass(frozen=True)
class OracleResult:
    min_imax: int
    min_isum: int
    witness_imax: tuple[int, ...]
    witness_isum: tuple[int, ...]
    orders_enumerated: int


def enumerate_legal_permutations(
    clusters: Sequence[Cluster], limit: int = DEFAULT_CLUSTER_LIMIT
) -> Iterator[tuple[tuple[int, ...], Permutation]]:
    """Yield ``(cluster_order, permutation)`` for all ``n_w!`` cluster orders."""
    if len(clusters) > limit:
        raise OracleLimitError(f"n_w={len(clusters)} exceeds the oracle limit of {limit}")
    for order in itertools.permutations(range(1, len(clusters) + 1)):
        yield order, cluster_order_to_permutation(order, clusters)


def oracle_min(h: History, limit: int = DEFAULT_CLUSTER_LIMIT) -> OracleResult:
    clusters = build_clusters(h)
    best_max = best_sum = None
    wit_max = wit_sum = ()
    count = 0
    for order, pi in enumerate_legal_permutations(clusters, limit):
        count += 1
        assert is_legal(pi, h)
        m, s = i_max(pi, h), i_sum(pi, h)
        if best_max is None or m < best_max:
            best_max, wit_max = m, order
        if best_sum is None or s < best_sum:
            best_sum, wit_sum = s, order
    return OracleResult(best_max, best_sum, wit_max, wit_sum, count)


def oracle_check_imax(h: History, i: int, limit: int = DEFAULT_CLUSTER_LIMIT) -> bool:
    return oracle_min(h, limit).min_imax <= i


def enumerate_legal_operation_orders(h: History, limit: int = DEFAULT_OP_LIMIT) -> Iterator[Permutation]:
    """All legal permutations at operation level, not just cluster blocks.

    Backtracking only rejects a read whose value is not the current register
    value, so exactly the legal subset of the ``n!`` orders is produced.
    """
    if h.n > limit:
        raise OracleLimitError(f"n={h.n} exceeds the operation-level limit of {limit}")
    ops = list(h.operations)
    used = [False] * len(ops)
    prefix: list[str] = []

    def rec(current):
        if len(prefix) == len(ops):
            yield Permutation(prefix)
            return
        for k, o in enumerate(ops):
            if used[k] or (o.is_read and o.value != current):
                continue
            used[k] = True
            prefix.append(o.op_id)
            yield from rec(o.value if o.is_write else current)
            prefix.pop()
            used[k] = False

    yield from rec(None)


def oracle_min_imax_operations(h: History, limit: int = DEFAULT_OP_LIMIT) -> int:
    """Minimum ``i_max`` over every legal operation-level permutation."""
    build_clusters(h)  # validation
    best = None
    for pi in enumerate_legal_operation_orders(h, limit):
        m = i_max(pi, h)
        if best is None or m < best:
            best = m
    return 0 if best is None else best
