# %% [markdown]
# # Deciding i-atomicity
#
# The checker walks the configuration graph: append the current cluster,
# buffer it, or append a buffered cluster. Each append is scored with the
# precomputed tables, so one node costs O(cluster size * buffer size).

# %%
from iatomic import Configuration, build_clusters, build_tables, check_i_atomicity, expand, make_history

h = make_history([("W", "a", 0, 5), ("W", "b", 1, 6), ("R", "b", 7, 8), ("R", "a", 9, 10)])
for i in range(3):
    v = check_i_atomicity(h, i)
    print(f"i={i} satisfied={v.satisfied} achieved={v.achieved_inv} "
          f"certificate={v.certificate.order if v.certificate else None}")

# %% Two paths reaching the node (3, {}) carry different prefixes.
t = build_tables(build_clusters(h), h)
start = Configuration(1, (), (), 0)


def follow(v, idx, buf, i=2):
    return next(s for s in expand(v, i, h.w, t) if (s.idx, s.c_buf) == (idx, buf))


p1 = follow(follow(start, 2, ()), 3, ())
p2 = follow(follow(follow(start, 2, (1,)), 3, (1,)), 3, ())
print("p1 prefix", p1.pi_pre, "inv", p1.inv)
print("p2 prefix", p2.pi_pre, "inv", p2.inv)

# %% Pruning changes the work, never the answer.
from iatomic import GenConfig, generate

g = generate(GenConfig(seed=4, n_ops=40, n_clients=3, propagation_delay=20))
for switches in ({}, {"prune_lemma1": False}, {"prune_lemma2": False}, {"memoize": False}):
    v = check_i_atomicity(g, 4, **switches)
    print(switches or "all pruning", v.satisfied, "expansions:", v.stats.expansions)
