# %% [markdown]
# # Measuring disorder in a simulated store
#
# Histories come from clients talking to a register replicated with a
# propagation delay. Longer delays let reads see older values, which shows up
# as a larger minimal i.

# %%
from iatomic import GenConfig, find_min_i, generate, stats

for delay in (0, 2, 5, 10, 20, 40):
    row = []
    for seed in range(5):
        h = generate(GenConfig(seed=seed, n_ops=400, write_ratio=0.2, n_clients=4,
                               op_interval=10, op_duration=3, propagation_delay=delay))
        row.append(find_min_i(h, cap=8))
    s = stats(h)
    shown = ["> 8" if m is None else str(m) for m in row]
    print(f"delay={delay:>3}  w={s.w}  min i per seed: {', '.join(shown)}")
