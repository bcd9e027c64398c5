"""
Mining partitions separately and merging the results
=====================================================

Patterns found on each group of variables are joined back together. The
merged set matches what mining every variable at once would give.
"""

import vpart

d = vpart.parse_csv(
    "colour,shape,size\n"
    "red,round,big\n"
    "red,round,big\n"
    "red,square,small\n"
    "blue,round,NaN\n"
    "blue,square,small\n"
)
min_sup = 0.4

plan = [["colour"], ["shape", "size"]]
per_part = [vpart.apriori(d, cols, min_sup) for cols in plan]
for cols, ps in zip(plan, per_part):
    print(cols)
    print(ps.to_text())

merged = vpart.pattern_merge(vpart.MergeInput(per_part, d.n_obs, min_sup))
print("merged")
print(merged.to_text())

direct = vpart.mine_closed_oracle(d, min_sup=min_sup)
print("same as mining everything at once:", merged.keys() == direct.keys())

st = vpart.merge_stats(per_part, merged)
print(f"{st.n_premerge} patterns in, {st.n_final} out; "
      f"{st.mean_obs:.2f} observations and {st.mean_vars:.2f} variables per input pattern")
