"""Counting planar structures three ways.

The decomposition grammar, Tutte's closed formula and exhaustive brute-force
enumeration must produce the same numbers; this script prints them side by
side for rooted planar maps and labelled planar graphs.
"""

import math

from planarlab import cache, grammar, oracles

print("Rooted planar maps with n edges")
print("n    grammar      Tutte        exhaustive")
table = grammar.build_map_chain(1, 12, with_v_order=20)
m = grammar.map_count_series(1, 8, table=table)
catalog = cache.cached_map_catalog(4)
for n in range(9):
    exhaustive = len(catalog[n]) if n <= 4 else "-"
    print(f"{n}    {int(m.coeff(0, 2 * n)):<12d}{oracles.tutte_count(n):<13d}"
          f"{exhaustive}")

print()
print("Labelled planar graphs on n vertices (all / connected / 2-connected)")
gt = grammar.build_graph_chain(7, bivariate_cg=True)
data = oracles.enumerate_labelled_planar_graphs(6)
for n in range(1, 7):
    fact = math.factorial(n)
    row_g = int(sum(gt["G"].coeff(n, mm) for mm in range(0, 3 * n)) * fact)
    row_c = int(sum(gt["C"].coeff(n, mm) for mm in range(0, 3 * n)) * fact)
    row_b = int(sum(gt["B"].coeff(n, mm) for mm in range(0, 3 * n)) * fact)
    oracle = (sum(data[n]["all"].values()), sum(data[n]["connected"].values()),
              sum(data[n]["two_connected"].values()))
    print(f"n={n}: grammar {row_g}/{row_c}/{row_b}   brute force "
          f"{oracle[0]}/{oracle[1]}/{oracle[2]}")

print()
print("Three-connected networks start at the K4 term:")
f = grammar.build_f01_bar(1, 10)
print("F01bar(1, y) coefficients:", [int(f.coeff(0, b)) for b in range(11)])
