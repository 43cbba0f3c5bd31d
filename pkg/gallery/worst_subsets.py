# Every k points of P_j should span at least k^log2(3) differences.  Here we
# look for the subsets that come closest.

from localdiff import (
    SubsetMask,
    build_baseline,
    build_pn,
    check_decomposition,
    min_subset_bnb,
    trace_decomposition,
    verify_all_k,
    verify_exhaustive,
)

# All 2^16 subsets of P_4 in one sweep.  bound is k^log2(3) as an enclosure;
# at powers of two it collapses to a single integer and the minimum hits it.
for r in verify_all_k(build_pn(4)):
    lo, hi = r.bound_text
    tight = " <- equality" if r.min_diff == int(float(lo)) and r.bound.is_point() else ""
    print(f"k={r.k:2d} min={r.min_diff:3d} bound=[{lo[:8]}, {hi[:8]}] witness={r.witness}{tight}")

# The witnesses at k = 2, 4, 8, 16 are sub-cubes: P_1, P_2, P_3 sitting inside P_4.

# An arithmetic progression has few differences overall, but that is
# exactly what makes its 4-subsets fail.
ap = verify_exhaustive(build_baseline("arithmetic_progression", 16), 4)
print("AP, k=4:", ap.min_diff, "differences, holds =", ap.holds)

# P_6 has too many 4-subsets to list comfortably; branch and bound prunes on
# the difference count of the partial subset, which can only grow.
r = min_subset_bnb(build_pn(6), 4)
print(f"P_6, k=4: min {r.min_diff} after {r.nodes} nodes, complete={r.complete}")

# The proof splits a subset by the coefficient of the top generator into four
# classes and bounds each one.  trace_decomposition replays that split and
# checks every inequality along the way.
P3 = build_pn(3)
Q = verify_exhaustive(P3, 5).witness
for node in trace_decomposition(P3, Q)[:4]:
    print(f"level {node.level}: a,b,c,d = {node.a},{node.b},{node.c},{node.d}  "
          f"|Q1 - Q2| = {node.cross_count}  >= {node.three_term_bound[0]:.3f}")

print("nodes checked for the full P_6:", check_decomposition(build_pn(6), SubsetMask((1 << 64) - 1, 64)))
