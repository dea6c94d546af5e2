import itertools
import math

import pytest
from hypothesis import given, settings

from conftest import histories
from iatomic.history import build_clusters, make_history
from iatomic.inversion import i_max, i_sum, is_legal
from iatomic.oracle import (
    OracleLimitError,
    enumerate_legal_operation_orders,
    enumerate_legal_permutations,
    oracle_check_imax,
    oracle_min,
    oracle_min_imax_operations,
)


def writes(k):
    return make_history([("W", v, 2 * v, 2 * v + 1) for v in range(k)])


class TestEnumerate:
    @pytest.mark.parametrize("k", [1, 3])
    def test_counts(self, k):
        perms = list(enumerate_legal_permutations(build_clusters(writes(k))))
        assert len(perms) == math.factorial(k)

    def test_all_legal(self, h3):
        for _, pi in enumerate_legal_permutations(build_clusters(h3)):
            assert is_legal(pi, h3)

    def test_limit(self):
        with pytest.raises(OracleLimitError):
            list(enumerate_legal_permutations(build_clusters(writes(9))))

    def test_operation_level_is_exactly_the_legal_subset(self, h3):
        ops = [o.op_id for o in h3]
        from iatomic.inversion import Permutation

        brute = {p for p in itertools.permutations(ops) if is_legal(Permutation(p), h3)}
        got = {pi.order for pi in enumerate_legal_operation_orders(h3)}
        assert got == brute


class TestOracleMin:
    def test_h2(self, h2):
        r = oracle_min(h2)
        assert r.min_imax == 1 and r.orders_enumerated == 2

    def test_h3(self, h3):
        r = oracle_min(h3)
        assert (r.min_imax, r.min_isum) == (1, 1)
        assert r.witness_imax == (2, 1)

    def test_sequential(self, sequential):
        r = oracle_min(sequential)
        assert (r.min_imax, r.min_isum) == (0, 0)
        assert r.witness_imax == (1, 2, 3, 4)

    def test_check(self, h2):
        assert not oracle_check_imax(h2, 0)
        assert oracle_check_imax(h2, 1)
        assert oracle_check_imax(h2, h2.n * (h2.n - 1) // 2)

    @settings(max_examples=60, deadline=None)
    @given(histories(max_writes=4))
    def test_minima_are_minima(self, h):
        r = oracle_min(h)
        clusters = build_clusters(h)
        for _, pi in enumerate_legal_permutations(clusters):
            assert r.min_imax <= i_max(pi, h)
            assert r.min_isum <= i_sum(pi, h)

    @settings(max_examples=60, deadline=None)
    @given(histories(max_writes=3, max_reads=2))
    def test_cluster_blocks_lose_nothing(self, h):
        if h.n <= 8:
            assert oracle_min_imax_operations(h) == oracle_min(h).min_imax
