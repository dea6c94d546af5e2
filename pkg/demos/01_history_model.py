# %% [markdown]
# # Histories, clusters and write concurrency
#
# A history file holds one operation per line:
# `op_id,kind,key,value,invoke_ts,response_ts`.

# %%
from iatomic import build_clusters, parse_history, precedes, stats_w, validate

text = """\
# two overlapping writes, each read once
w1,W,x,a,0,5
w2,W,x,b,1,6
r1,R,x,b,7,8
r2,R,x,a,9,10
"""
h = parse_history(text)
print(f"n={h.n} n_w={h.n_w} w={stats_w(h)}")

# %% The writes overlap, so neither precedes the other.
w1, w2, r1, r2 = h.operations
print("w1 -> w2:", precedes(w1, w2), "| w2 -> w1:", precedes(w2, w1))
print("w2 -> r2:", precedes(w2, r2))

# %% Clusters are numbered by write start time; reads follow their write.
for c in build_clusters(h):
    print(c.index, c.write.op_id, [r.op_id for r in c.reads])

# %% A read that finishes before its write starts makes the history buggy.
buggy = parse_history("r1,R,x,a,0,1\nw1,W,x,a,2,3\n")
for v in validate(buggy).violations:
    print(v.rule, v.op_ids, v.message)

# %% Mixed keys are rejected; measure one key at a time instead.
mixed = parse_history("w1,W,x,a,0,1\nw2,W,y,b,2,3\n")
print([v.rule for v in validate(mixed).violations])
print(validate(mixed.restrict_to_key("x")).valid)
