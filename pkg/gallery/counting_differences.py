# How many distinct differences does P_j have, and how does that compare
# with the usual suspects?  Run with:  python gallery/counting_differences.py

import math

from localdiff import build_baseline, build_pn, diff_count, distance_count

# P_j is every 0/1 combination of 1, 3, 9, ..., 3^(j-1).  Each difference is a
# -1/0/1 combination of the same weights, and base-3 digit strings are unique,
# so all 3^j of them show up and none repeat.
print(" j   |P_j|   |P_j - P_j|   3^j   distances")
for j in range(0, 13, 2):
    P = build_pn(j)
    d = diff_count(P)
    print(f"{j:2d} {len(P):6d} {d:12d} {3**j:7d} {distance_count(P):10d}")

# |P_j|^log2(3) = 3^j, so the global count is exactly n^1.585 for n = 2^j.
# An arithmetic progression does much better globally (2n - 1 differences)
# and a Sidon set much worse (n^2 - n + 1).  The interesting question is
# what happens locally, see worst_subsets.py.
n = 64
for kind in ("arithmetic_progression", "sidon", "random_integers"):
    S = build_baseline(kind, n, seed=0)
    print(f"{kind:>24s}: |A - A| = {diff_count(S):5d}")
print(f"{'P_6':>24s}: |A - A| = {diff_count(build_pn(6)):5d}   (64^log2(3) = {64 ** math.log2(3):.1f})")

# the engine handles the 4096-point case (16.7M ordered pairs) in well under a second
print("P_12:", diff_count(build_pn(12)))
