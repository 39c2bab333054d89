"""Local statistics: neighbourhood censuses of random planar maps.

The distribution of the radius-1 neighbourhood of a uniform corner is
computed exactly for all rooted maps with 3, 4, 5 edges; the successive
total-variation distances shrink as the local limit takes over, and a
Monte Carlo census through the tree-decoration sampler agrees with the
exact law.
"""

from gmpy2 import mpq

from planarlab import cache, grammar, sampler

catalog = cache.cached_map_catalog(5)
exact = {n: sampler.exact_census(catalog[n], 1) for n in (3, 4, 5)}
print("Exact U_1 censuses over all rooted maps:")
for n in (3, 4, 5):
    print(f"  n={n}: {len(catalog[n])} maps, {len(exact[n])} neighbourhood types")
for a, b in ((3, 4), (4, 5)):
    tv = sampler.total_variation(exact[a], exact[b])
    print(f"  TV(U1 at n={a}, n={b}) = {tv:.4f}")

print()
print("Monte Carlo census at n = 3 through the sampler:")
dec_cat = sampler.nonseparable_catalog(1, map_catalog=catalog)
ws = grammar.weight_sequence("M", 1, 6)
law = grammar.offspring_law(ws, mpq(1, 4))
maps = sampler.sample_maps(1, 3, 20000, seed=3, catalog=dec_cat, law_m=law)
mc = sampler.sampled_census(maps, 1)
print(f"  TV(MC with 20000 samples, exact) = "
      f"{sampler.total_variation(mc, exact[3]):.4f}")

top = sorted(exact[3].items(), key=lambda kv: -kv[1])[:3]
print("  three most common neighbourhood types (exact frequency):")
for key, freq in top:
    print(f"    {freq:.4f}  darts={len(key[0])}")
