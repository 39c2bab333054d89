"""The asymptotic constants, from closed forms and from the series.

Everything on the map side is a rational function of the root u0 of
t = (1+u0)(3u0-1)^3/(16u0); the graph side runs the Gimenez-Noy pipeline
from the quoted rho_B, c_B.  Truncated-series estimates with fitted power
tails cross-check the closed forms.
"""

import mpmath

from planarlab import cache, constants, grammar

rep = constants.map_constants(1)
print("Map side at t = 1 (exact rational values in parentheses)")
for name, nice in (("u0", "1"), ("rho_F", "1/4"), ("E0", "16/27"),
                   ("nu_Kbar", "7/12"), ("rho_R", "1/5"),
                   ("rho_Kbar", "4/27"), ("nu_M", "2/3"),
                   ("rho_M", "1/sqrt(12)")):
    print(f"  {name:10s} = {mpmath.nstr(rep[name], 12):<16s} ({nice})")
print(f"  nu_K       = {mpmath.nstr(rep['nu_K'], 12)}")

print()
print("Cross-check against the truncated series (order 400):")
table = cache.cached_map_chain(1, 400)
rb = [table["Rbar"].coeff(0, k) for k in range(401)]
est, err = constants.series_nu_estimate(rb, rep["rho_R"])
print(f"  nu_Kbar series estimate {mpmath.nstr(est, 12)}  "
      f"(delta {float(abs(est - rep['nu_Kbar'])):.1e})")

print()
print("Graph side (Gimenez-Noy pipeline)")
gtable = grammar.build_graph_chain(40)
g = constants.graph_constants(gtable)
constants.alpha0_report(report=g)
for name in ("rho_B", "c_B", "nu_C_bound", "nu_C", "phi_C_at_rhoB", "rho_C",
             "c_C", "c_G", "D0_series", "D2_series", "q1_at_rhoB",
             "alpha0_derived"):
    tag = g.provenance[name]
    print(f"  {name:14s} = {mpmath.nstr(g[name], 10):<16s} [{tag}]")
print(f"  growth constant 1/rho_C = {mpmath.nstr(1 / g['rho_C'], 10)}")
