# %% [markdown]
# # Counting inversions
#
# Two positions form an inversion when the later operation precedes the
# earlier one in real time. `i_max` takes the worst single operation,
# `i_sum` the total.

# %%
import itertools

from iatomic import Permutation, build_clusters, i_max, i_sum, is_legal, make_history
from iatomic.inversion import cluster_order_to_permutation, inversion_degrees

h = make_history([("W", "a", 0, 5), ("W", "b", 1, 6), ("R", "b", 7, 8), ("R", "a", 9, 10)])
clusters = build_clusters(h)

# %% Both cluster orders, emitted write-first.
for order in itertools.permutations([1, 2]):
    pi = cluster_order_to_permutation(order, clusters)
    print(order, pi.order, "degrees", inversion_degrees(pi, h).tolist(),
          "i_max", i_max(pi, h), "i_sum", i_sum(pi, h))

# %% Any order of operations can be scored, but only legal ones count.
pi = Permutation(["w1", "w2", "r1", "r2"])
print(pi.order, "legal:", is_legal(pi, h), "i_max:", i_max(pi, h))
