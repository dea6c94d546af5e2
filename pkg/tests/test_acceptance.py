"""Exit criteria. Each test is tagged with its criterion number; a PASS/FAIL
line per criterion is printed in the terminal summary."""

import hashlib
import random
import statistics
import time

import pytest

from corpus import generated_corpus, grid_family
from iatomic.checker import cg_size_bounds, check_i_atomicity, find_min_i
from iatomic.generator import GenConfig, generate
from iatomic.history import make_history, validate
from iatomic.inversion import i_max, is_legal
from iatomic.oracle import oracle_min, oracle_min_imax_operations

acceptance = pytest.mark.acceptance


def checked(h, i, **switches):
    """Run the checker; on default settings also enforce the graph-size bound."""
    v = check_i_atomicity(h, i, **switches)
    if not switches:
        nodes, _ = cg_size_bounds(h.n_w, i, h.w)
        assert v.stats.nodes_expanded <= nodes, (v.stats, nodes)
        assert v.stats.max_out_degree <= i + h.w + 1
    return v


@pytest.fixture(scope="module")
def family():
    return list(grid_family(max_writes=4, max_reads_per_cluster=2, grid=3, max_ops=7))


@pytest.fixture(scope="module")
def generated():
    return generated_corpus(500, max_writes=6, seed=2024)


@pytest.fixture(scope="module")
def oracle_cache():
    return {}


def oracle_of(h, cache):
    key = h.to_text()
    if key not in cache:
        cache[key] = oracle_min(h)
    return cache[key]


@acceptance(1, "oracle equivalence on exhaustive grid family and 500 generated histories, < 60 s")
def test_oracle_equivalence(family, generated, oracle_cache):
    assert len(family) > 10_000
    assert len(generated) >= 500 and all(h.n_w <= 6 for h in generated)
    t0 = time.perf_counter()
    disagreements = []
    runs = 0
    for h in family + generated:
        best = oracle_of(h, oracle_cache).min_imax
        for i in range(best + 2):
            runs += 1
            if checked(h, i).satisfied != (best <= i):
                disagreements.append((h.to_text(), i))
    elapsed = time.perf_counter() - t0
    print(f"\n  {len(family)} grid + {len(generated)} generated histories, {runs} queries, {elapsed:.1f} s")
    assert disagreements == []
    assert elapsed < 60.0


@acceptance(2, "fixtures H2 and H3 have minimal i = 1, confirmed by the oracle")
def test_fixtures():
    h2 = make_history([("W", "a", 0, 1), ("W", "b", 2, 3), ("R", "a", 4, 5)])
    h3 = make_history([("W", "a", 0, 5), ("W", "b", 1, 6), ("R", "b", 7, 8), ("R", "a", 9, 10)])
    for h in (h2, h3):
        assert oracle_min(h).min_imax == 1
        assert oracle_min_imax_operations(h) == 1
        assert find_min_i(h, 5) == 1
        assert not checked(h, 0).satisfied
        assert checked(h, 1).achieved_inv == 1


@acceptance(3, "i = 0 verdict equals the oracle's atomicity decision")
def test_atomicity_reduction(family, generated, oracle_cache):
    for h in family + generated:
        atomic = oracle_of(h, oracle_cache).min_imax == 0
        assert checked(h, 0).satisfied == atomic


@acceptance(4, "verdicts unchanged with each pruning disabled; pruned work <= unpruned work")
def test_pruning_soundness(generated):
    instances = 0
    for h in generated[:300]:
        for i in range(3):
            base = checked(h, i)
            for sw in ({"prune_lemma1": False}, {"prune_lemma2": False}, {"memoize": False}):
                other = check_i_atomicity(h, i, **sw)
                assert other.satisfied == base.satisfied, (h.to_text(), i, sw)
                assert base.stats.expansions <= other.stats.expansions, (h.to_text(), i, sw)
            instances += 1
    assert instances >= 200


@acceptance(5, "nodes expanded never exceed (n_w + 1) * 2^(2i + 2w - 1)")
def test_graph_size_bound(family, generated):
    for h in family + generated:
        for i in range(4):
            checked(h, i)


def _scaling_history(n_ops, seed0):
    # first seed giving w <= 3 and a history that is 2-atomic
    for seed in range(seed0, seed0 + 50):
        h = generate(GenConfig(
            seed=seed, n_ops=n_ops, write_ratio=0.25, n_clients=2,
            op_interval=10, op_duration=3, propagation_delay=3, replicas=3,
        ))
        if h.w <= 3 and check_i_atomicity(h, 2).satisfied:
            return h
    raise AssertionError(f"no suitable seed for n={n_ops}")


def _timed(h, i, repeats=5):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        v = checked(h, i)
        times.append(time.perf_counter() - t0)
    return statistics.median(times), v


@pytest.mark.slow
@acceptance(6, "n = 2000 / n_w ~ 500 checks in < 10 s; doubling n_w costs <= ~8x")
def test_scalability():
    sizes = [1000, 2000, 4000]
    timings = []
    for n in sizes:
        h = _scaling_history(n, seed0=n)
        t, v = _timed(h, 2)
        assert v.satisfied and h.w <= 3
        timings.append(t)
        print(f"\n  n={h.n} n_w={h.n_w} w={h.w} min-run={t:.3f}s nodes={v.stats.nodes_expanded}")
        if n == 2000:
            assert 450 <= h.n_w <= 550
            assert t < 10.0
    for a, b in zip(timings, timings[1:]):
        assert b / a <= 8.0, timings


@acceptance(7, "cluster-block search loses nothing against all legal operation orders (n <= 8)")
def test_cluster_block_losslessness(generated):
    small = list(grid_family(max_writes=4, max_reads_per_cluster=2, grid=3, max_ops=8))
    small += [h for h in generated if h.n <= 8]
    assert len(small) > 20_000
    for h in small:
        assert oracle_min_imax_operations(h) == oracle_min(h).min_imax, h.to_text()


@acceptance(8, "monotone in i; every certificate is legal and re-scores to achieved_inv")
def test_monotonicity_and_certificates(family, generated):
    rng = random.Random(8)
    sample = rng.sample(family, 3000) + generated
    for h in sample:
        prev = False
        for i in range(5):
            v = checked(h, i)
            assert not (prev and not v.satisfied)
            prev = v.satisfied
            if v.satisfied:
                assert is_legal(v.certificate, h)
                assert i_max(v.certificate, h) == v.achieved_inv <= i


@acceptance(9, "1000 seeded generator configs validate; output is deterministic")
def test_generator_fuzz():
    rng = random.Random(9)
    for _ in range(1000):
        cfg = GenConfig(
            seed=rng.randrange(1 << 31),
            n_ops=rng.randint(1, 120),
            write_ratio=rng.choice([0.05, 0.2, 0.5, 0.9, 1.0]),
            n_clients=rng.randint(1, 10),
            op_interval=rng.choice([0.0, 1.0, 10.0, 100.0]),
            op_duration=rng.choice([0.0, 1.0, 10.0, 100.0]),
            propagation_delay=rng.choice([0.0, 1.0, 50.0, 500.0]),
            replicas=rng.randint(1, 7),
        )
        h = generate(cfg)
        report = validate(h)
        assert report.valid, (cfg, report.violations)
        assert h.n == cfg.n_ops
    cfg = GenConfig(seed=123, n_ops=500)
    digests = {hashlib.sha256(generate(cfg).to_text().encode()).hexdigest() for _ in range(3)}
    assert len(digests) == 1
