"""Decide i-atomicity by depth-first search over the configuration graph.

Clusters are scanned in write-start order. At node ``(idx, buf)`` the search
may append the current cluster (left edge), buffer it (right edge), or append
one already-buffered cluster (horizontal edge). Reaching
``(n_w + 1, ())`` with every append costing at most ``i`` inversions per
operation yields a certificate.

Pruning:

* cost: an append that gives some operation more than ``i`` inversions.
* buffer size: a right edge from a buffer already holding ``i + w`` clusters.
* buffer window: a buffered cluster older than ``idx - 2i - 2w + 1``.
* memo: a node reached again with no better ``inv`` than before. Sound
  because the set of placed clusters is a function of the node alone, so the
  future cost of any continuation is path independent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .history import History, build_clusters, require_valid
from .inversion import InversionTables, Permutation, build_tables, cluster_order_to_permutation


@dataclass(frozen=True)
class Configuration:
    idx: int
    c_buf: tuple[int, ...]
    pi_pre: tuple[int, ...]
    inv: int

    @property
    def key(self) -> "CGNodeKey":
        return CGNodeKey(self.idx, self.c_buf)


@dataclass(frozen=True)
class CGNodeKey:
    idx: int
    c_buf: tuple[int, ...] = ()

    @staticmethod
    def initial() -> "CGNodeKey":
        return CGNodeKey(1, ())

    @staticmethod
    def final(n_w: int) -> "CGNodeKey":
        return CGNodeKey(n_w + 1, ())


@dataclass
class SearchStats:
    nodes_expanded: int = 0
    expansions: int = 0
    edges_traversed: int = 0
    max_out_degree: int = 0
    nodes_pruned_cost: int = 0
    nodes_pruned_lemma1: int = 0
    nodes_pruned_lemma2: int = 0
    nodes_pruned_memo: int = 0

    def as_dict(self) -> dict[str, int]:
        return dict(self.__dict__)


@dataclass(frozen=True)
class Verdict:
    """Outcome of one i-atomicity query.

    ``stats.nodes_expanded`` counts distinct graph nodes expanded;
    ``stats.expansions`` also counts re-expansions after a cheaper arrival.
    """

    i: int
    satisfied: bool
    achieved_inv: Optional[int]
    certificate: Optional[Permutation]
    cluster_order: Optional[tuple[int, ...]]
    n_w: int
    w: int
    stats: SearchStats = field(default_factory=SearchStats)

    @property
    def nodes_expanded(self) -> int:
        return self.stats.nodes_expanded


def cg_size_bounds(n_w: int, i: int, w: int) -> tuple[float, float]:
    """Upper bounds on (nodes, edges) of the pruned configuration graph.

    The exponent ``2i + 2w - 1`` is -1 only when ``i = w = 0``, where the
    node bound is fractional; that case only arises for write-free input.
    """
    if min(n_w, i, w) < 0:
        raise ValueError("n_w, i and w must be non-negative")
    e = 2 * i + 2 * w - 1
    nodes = (n_w + 1) * (2**e if e >= 0 else 0.5)
    return nodes, (i + w + 1) * nodes


class _Scorer:
    """Cost of appending a cluster given the current node.

    With ``G = after - before`` and prefix sums over cluster columns, an
    operation's degree is ``base + prefG[idx - 1] - sum(G[:, buf])``, where
    ``base = total_before - before[own]``.
    """

    def __init__(self, t: InversionTables):
        g = t.after.astype(np.int64) - t.before
        pref = np.zeros((g.shape[0], g.shape[1] + 1), dtype=np.int64)
        np.cumsum(g, axis=1, out=pref[:, 1:])
        rows = np.arange(g.shape[0])
        base = t.total_before - t.before[rows, t.own_cluster - 1] if g.shape[1] else t.total_before
        self._g = [g[m] for m in t.members]
        self._pref = [pref[m] for m in t.members]
        self._base = [base[m] for m in t.members]

    def degree(self, c: int, idx: int, buf: tuple[int, ...]) -> int:
        k = c - 1
        vals = self._base[k] + self._pref[k][:, idx - 1]
        if buf:
            vals = vals - self._g[k][:, [b - 1 for b in buf]].sum(axis=1)
        return int(vals.max())


def expand(
    v: Configuration,
    i: int,
    w: int,
    t: InversionTables,
    *,
    prune_lemma1: bool = True,
    prune_lemma2: bool = True,
    stats: SearchStats | None = None,
    _scorer: _Scorer | None = None,
) -> list[Configuration]:
    """Successors of ``v`` in exploration order: left, horizontal by ascending
    cluster, right. Successors failing the cost or buffer rules are dropped.
    """
    scorer = _scorer if _scorer is not None else _Scorer(t)
    stats = stats if stats is not None else SearchStats()
    n_w = len(t.clusters)
    idx, buf = v.idx, v.c_buf
    lo = idx + 1 - 2 * i - 2 * w + 1  # window start for successors at idx + 1
    out: list[Configuration] = []

    if idx <= n_w:
        inv = max(v.inv, scorer.degree(idx, idx, buf))
        if inv > i:
            stats.nodes_pruned_cost += 1
        elif prune_lemma2 and buf and buf[0] < lo:
            stats.nodes_pruned_lemma2 += 1
        else:
            out.append(Configuration(idx + 1, buf, v.pi_pre + (idx,), inv))

    for c in buf:
        inv = max(v.inv, scorer.degree(c, idx, buf))
        if inv > i:
            stats.nodes_pruned_cost += 1
            continue
        rest = tuple(b for b in buf if b != c)
        out.append(Configuration(idx, rest, v.pi_pre + (c,), inv))

    if idx <= n_w:
        if prune_lemma1 and len(buf) >= i + w:
            stats.nodes_pruned_lemma1 += 1
        else:
            nbuf = buf + (idx,)
            if prune_lemma2 and nbuf[0] < lo:
                stats.nodes_pruned_lemma2 += 1
            else:
                out.append(Configuration(idx + 1, nbuf, v.pi_pre, v.inv))
    return out


def check_i_atomicity(
    h: History,
    i: int,
    *,
    prune_lemma1: bool = True,
    prune_lemma2: bool = True,
    memoize: bool = True,
) -> Verdict:
    """Is ``h`` i-atomic? Returns a :class:`Verdict` with a certificate if so.

    The pruning switches exist for cross-checking; they change the amount of
    work, never the answer.
    """
    if i < 0:
        raise ValueError("i must be non-negative")
    require_valid(h)
    clusters = build_clusters(h)
    t = build_tables(clusters, h)
    return _search(h, t, i, prune_lemma1, prune_lemma2, memoize)


def _search(h, t, i, prune_lemma1, prune_lemma2, memoize) -> Verdict:
    n_w = len(t.clusters)
    w = h.w
    stats = SearchStats()
    scorer = _Scorer(t)
    final = (n_w + 1, ())

    start = Configuration(1, (), (), 0)
    stack = [start]
    best: dict[tuple[int, tuple[int, ...]], int] = {(1, ()): 0}
    seen: set[tuple[int, tuple[int, ...]]] = set()

    while stack:
        v = stack.pop()
        key = (v.idx, v.c_buf)
        if key == final:
            cert = cluster_order_to_permutation(v.pi_pre, t.clusters)
            return Verdict(i, True, v.inv, cert, v.pi_pre, n_w, w, stats)
        if memoize and best.get(key, v.inv) < v.inv:
            # a cheaper arrival was queued after this one was pushed
            stats.nodes_pruned_memo += 1
            continue
        stats.expansions += 1
        if key not in seen:
            seen.add(key)
            stats.nodes_expanded += 1
        succ = expand(
            v, i, w, t,
            prune_lemma1=prune_lemma1, prune_lemma2=prune_lemma2,
            stats=stats, _scorer=scorer,
        )
        stats.edges_traversed += len(succ)
        stats.max_out_degree = max(stats.max_out_degree, len(succ))
        for s in reversed(succ):
            skey = (s.idx, s.c_buf)
            if memoize:
                prev = best.get(skey)
                if prev is not None and prev <= s.inv:
                    stats.nodes_pruned_memo += 1
                    continue
                best[skey] = s.inv
            stack.append(s)

    return Verdict(i, False, None, None, None, n_w, w, stats)


def find_min_i(h: History, cap: int, **switches) -> Optional[int]:
    """Smallest ``i <= cap`` for which ``h`` is i-atomic, or None if it exceeds ``cap``."""
    if cap < 0:
        raise ValueError("cap must be non-negative")
    require_valid(h)
    clusters = build_clusters(h)
    t = build_tables(clusters, h)
    for i in range(cap + 1):
        verdict = _search(
            h, t, i,
            switches.get("prune_lemma1", True),
            switches.get("prune_lemma2", True),
            switches.get("memoize", True),
        )
        if verdict.satisfied:
            return i
    return None
