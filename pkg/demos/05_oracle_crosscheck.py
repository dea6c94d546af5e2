# %% [markdown]
# # Cross-checking against brute force
#
# For small histories the oracle enumerates every cluster order. Its minimum
# must match the smallest i the checker accepts.

# %%
import random

from iatomic import GenConfig, find_min_i, generate, oracle_min

rng = random.Random(0)
checked = 0
while checked < 200:
    h = generate(GenConfig(seed=rng.randrange(10**9), n_ops=rng.randint(3, 14),
                           write_ratio=0.4, n_clients=3, propagation_delay=30))
    if h.n_w > 6:
        continue
    r = oracle_min(h)
    assert find_min_i(h, cap=r.min_imax + 1) == r.min_imax
    checked += 1
print(f"{checked} histories: checker minimum equals oracle minimum")

# %% I_sum is only available by enumeration.
print("last history: min I_max", r.min_imax, "min I_sum", r.min_isum,
      "over", r.orders_enumerated, "orders")
