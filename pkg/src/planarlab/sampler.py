"""Samplers for the random structures of the decomposition chains.

Simply generated trees are sampled through their conditioned offspring
sequence: the iid sequence (xi_1, ..., xi_n) given xi_1 + ... + xi_n = n - 1
is drawn by recursive binary splitting of the sum with precomputed partial
convolutions, then rotated into a valid depth-first walk by the cycle lemma.
The split probabilities are exact law values evaluated in floating point
(direct convolutions of nonnegative terms, no cancellation), so the sampled
law matches the exact conditional law to ~1e-13 relative accuracy.

Structural decorations come from a finite catalog built out of the
exhaustive oracle enumeration; requesting a decoration beyond the catalog's
corner cap raises, which bounds structural sampling.  Tree-level core-size
statistics have no such cap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from gmpy2 import mpq

from .grammar import GrammarError, OffspringLaw
from .oracles import OracleCapError, PlanarMap


class DecorationCapError(ValueError):
    """An out-degree exceeded the structural decoration catalog."""


def rng_for(seed, *stream) -> np.random.Generator:
    """Named, splittable generator: one stream per (seed, stream key)."""
    import hashlib
    key = []
    for part in stream:
        if isinstance(part, str):
            digest = hashlib.sha256(part.encode()).digest()[:4]
            key.append(int.from_bytes(digest, "big"))
        else:
            key.append(int(part) & 0xFFFFFFFF)
    return np.random.Generator(np.random.PCG64(
        np.random.SeedSequence(entropy=seed, spawn_key=tuple(key))))


# ---------------------------------------------------------------------------
# conditioned offspring sequences
# ---------------------------------------------------------------------------

class LawTables:
    """Partial-sum distributions of a law, shared across conditioned draws.

    For each block size a appearing in some binary splitting, keeps the
    (normalised) distribution of S_a truncated at ``cap``.  Tables are built
    once and reused by every conditioned sample, also across different tree
    sizes of the same law (the nested core pipeline needs that).
    """

    def __init__(self, law: OffspringLaw, cap: int):
        if law.lattice == 0:
            raise GrammarError("law has no positive support")
        self.law = law
        self.cap = cap
        p = law.prob_float()
        self.p = p[:cap + 1]
        self._dist: Dict[int, np.ndarray] = {}

    def dist(self, a: int) -> np.ndarray:
        d = self._dist.get(a)
        if d is not None:
            return d
        if a == 1:
            d = np.zeros(self.cap + 1)
            d[:len(self.p)] = self.p
        else:
            a1 = a // 2
            d = np.convolve(self.dist(a1), self.dist(a - a1))[:self.cap + 1]
            s = d.sum()
            if s > 0:
                d = d / s
        self._dist[a] = d
        return d

    def sample_conditioned(self, n: int, total: int,
                           rng: np.random.Generator) -> np.ndarray:
        """(xi_1..xi_n) iid under the law conditioned on the sum = total."""
        if total > self.cap:
            raise GrammarError(f"total {total} beyond table cap {self.cap}")
        if total % self.law.lattice != 0:
            raise GrammarError(
                f"total {total} infeasible on the support lattice "
                f"{self.law.lattice}")
        if self.dist(n)[total] <= 0:
            raise GrammarError(f"P(S_{n} = {total}) = 0 under the truncated law")
        out = np.zeros(n, dtype=np.int64)
        p = self.p
        p0 = p[0]
        p1 = p[1] if len(p) > 1 else 0.0
        p2 = p[2] if len(p) > 2 else 0.0
        stack = [(n, total, 0)]
        while stack:
            a, m, off = stack.pop()
            if m == 0:
                continue            # all-zero block (out is pre-zeroed)
            if a == 1:
                out[off] = m
                continue
            if m == 1:
                # exactly one xi = 1, uniform position by exchangeability
                out[off + int(rng.integers(a))] = 1
                continue
            if m == 2 and p0 > 0:
                # either one xi = 2 or two xi = 1
                w2 = a * p2 * p0
                w11 = 0.5 * a * (a - 1) * p1 * p1
                if rng.random() * (w2 + w11) < w2:
                    out[off + int(rng.integers(a))] = 2
                else:
                    i = int(rng.integers(a))
                    j = int(rng.integers(a - 1))
                    j += j >= i
                    out[off + i] = out[off + j] = 1
                continue
            a1 = a // 2
            w = self.dist(a1)[:m + 1] * self.dist(a - a1)[m::-1]
            cw = np.cumsum(w)
            tot = cw[-1]
            if tot <= 0:
                raise GrammarError("conditional split has zero mass")
            i = int(np.searchsorted(cw, rng.random() * tot, side="right"))
            stack.append((a1, i, off))
            stack.append((a - a1, m - i, off + a1))
        return out


class ConditionedSampler:
    """Offspring sequences of an n-vertex tree: sum conditioned to n - 1."""

    def __init__(self, law: OffspringLaw, n: int, total: Optional[int] = None):
        self.n = n
        self.total = n - 1 if total is None else total
        if self.total % law.lattice != 0:
            raise GrammarError(
                f"tree size {n} infeasible: total {self.total} is off the "
                f"support lattice {law.lattice}")
        self.tables = LawTables(law, self.total)
        if self.tables.dist(n)[self.total] <= 0:
            raise GrammarError(f"P(S_{n} = {self.total}) = 0 under this law")

    def sample_sequence(self, rng: np.random.Generator) -> np.ndarray:
        return self.tables.sample_conditioned(self.n, self.total, rng)


def cycle_lemma_rotation(degrees: np.ndarray) -> np.ndarray:
    """Rotate an offspring sequence with sum n-1 into a valid preorder walk.

    Exactly one rotation of the Lukasiewicz walk stays nonnegative before
    the final step; it starts right after the first position at which the
    prefix minimum is attained.
    """
    steps = degrees.astype(np.int64) - 1
    prefix = np.cumsum(steps)
    pos = int(np.argmin(prefix))
    return np.concatenate([degrees[pos + 1:], degrees[:pos + 1]])


@dataclass
class PlaneTree:
    """Plane tree as its preorder out-degree sequence."""
    degrees: np.ndarray

    @property
    def size(self):
        return len(self.degrees)

    def max_outdegree(self):
        return int(self.degrees.max())

    def children_index(self):
        """children[i] = list of preorder indices of the children of node i."""
        children: List[List[int]] = [[] for _ in range(self.size)]
        stack = [0]
        for i in range(1, self.size):
            while len(children[stack[-1]]) == self.degrees[stack[-1]]:
                stack.pop()
            children[stack[-1]].append(i)
            stack.append(i)
        return children

    def key(self):
        return tuple(int(d) for d in self.degrees)


def sample_sgt(law: OffspringLaw, n: int, seed, stream=("sgt",),
               sampler: Optional[ConditionedSampler] = None) -> PlaneTree:
    """A simply generated tree with n vertices under the tilted law.

    The offspring sequence is drawn from the exact conditional law and
    rotated by the cycle lemma; the result is the conditioned Galton--Watson
    tree read in preorder.
    """
    if sampler is None:
        sampler = ConditionedSampler(law, n)
    rng = rng_for(seed, *stream)
    seq = sampler.sample_sequence(rng)
    return PlaneTree(cycle_lemma_rotation(seq))


def sample_degree_sequences(law: OffspringLaw, n: int, count: int, seed,
                            stream=("sgt",)):
    """Yield ``count`` conditioned offspring sequences (cheaper than trees
    when only degree statistics are needed)."""
    sampler = ConditionedSampler(law, n)
    for i in range(count):
        rng = rng_for(seed, *stream, i)
        yield sampler.sample_sequence(rng)


# ---------------------------------------------------------------------------
# decoration catalogs
# ---------------------------------------------------------------------------

@dataclass
class DecorationCatalog:
    """Finite table of structures per decoration size with exact weights."""
    class_id: str
    t: mpq
    by_size: Dict[int, List[Tuple[PlanarMap, mpq]]]

    @property
    def cap(self):
        return max(self.by_size)

    def total_weight(self, k) -> mpq:
        return sum((w for _, w in self.by_size.get(k, [])), mpq(0))

    def distribution(self, k):
        entries = self.by_size.get(k)
        if entries is None:
            raise DecorationCapError(
                f"decoration size {k} beyond catalog cap {self.cap} "
                f"for class {self.class_id}; lower n or raise the cap")
        tot = self.total_weight(k)
        return entries, np.array([float(w / tot) for _, w in entries])


def nonseparable_catalog(t, max_edges=4, map_catalog=None) -> DecorationCatalog:
    """Catalog of rooted non-separable maps keyed by corner count.

    Size k = 2m corners for m >= 1 plus the single-vertex map at k = 0;
    weight t^(v-1) per map (non-root vertices).
    """
    from .oracles import enumerate_rooted_planar_maps
    t = mpq(t)
    if map_catalog is None:
        map_catalog = enumerate_rooted_planar_maps(max_edges)
    by_size: Dict[int, List[Tuple[PlanarMap, mpq]]] = {}
    by_size[0] = [(PlanarMap((), (), None), mpq(1))]
    for m, maps in map_catalog.items():
        if m == 0:
            continue
        entries = [(mp, t ** (mp.n_vertices - 1)) for mp in maps
                   if mp.is_nonseparable()]
        if entries:
            by_size[2 * m] = entries
    return DecorationCatalog("V", t, by_size)


def decorate(tree: PlaneTree, catalog: DecorationCatalog, seed,
             stream=("decorate",)):
    """Independent decorations, one per vertex, exact conditional laws.

    Returns a list of structures indexed by preorder vertex; each vertex
    gets its own random stream derived from (seed, vertex index).
    """
    out = []
    for i, d in enumerate(tree.degrees):
        entries, probs = catalog.distribution(int(d))
        if len(entries) == 1:
            out.append(entries[0][0])
            continue
        rng = rng_for(seed, *stream, i)
        out.append(entries[rng.choice(len(entries), p=probs)][0])
    return out


@dataclass
class EnrichedTree:
    """Plane tree plus one decoration per vertex (sizes match out-degrees)."""
    tree: PlaneTree
    decorations: List[PlanarMap]

    def __post_init__(self):
        for d, dec in zip(self.tree.degrees, self.decorations):
            size = 0 if dec.root is None else dec.n_darts
            if size != int(d):
                raise ValueError("decoration size does not match out-degree")


# ---------------------------------------------------------------------------
# map assembly
# ---------------------------------------------------------------------------

def _corner_order(m: PlanarMap) -> List[int]:
    """Canonical corner order of a rooted map: BFS discovery over darts.

    Corners are identified with darts (the corner following each dart in the
    rotation at its vertex); discovery order starts at the root dart and
    expands by sigma, then alpha, matching the canonical relabelling.
    """
    if m.root is None:
        return []
    order = [m.root]
    seen = {m.root}
    i = 0
    while i < len(order):
        d = order[i]
        i += 1
        for nd in (m.sigma[d], m.alpha[d]):
            if nd not in seen:
                seen.add(nd)
                order.append(nd)
    return order


def assemble_map(et: EnrichedTree) -> PlanarMap:
    """Fold a V-decorated tree into the corner-rooted planar map it encodes.

    The decoration of each vertex is a non-separable map whose corners (in
    canonical order) receive the maps encoded by the ordered subtrees; the
    inserted map's rotation is spliced into the corner after the host dart.
    """
    children = et.tree.children_index()

    def build(v) -> PlanarMap:
        base = et.decorations[v]
        kids = children[v]
        if base.root is None:
            if kids:
                raise ValueError("vertex map cannot host insertions")
            return base
        parts = [build(c) for c in kids]
        corners = _corner_order(base)
        # merged dart space: base darts keep ids, part darts get offsets
        sigma = list(base.sigma)
        alpha = list(base.alpha)
        offsets = []
        for part in parts:
            off = len(sigma)
            offsets.append(off)
            if part.root is not None:
                sigma.extend(off + s for s in part.sigma)
                alpha.extend(off + a for a in part.alpha)
        for host, part, off in zip(corners, parts, offsets):
            if part.root is None:
                continue
            r = off + part.root
            last = r
            while sigma[last] != r:
                last = sigma[last]
            # splice the inserted root rotation into the corner after host
            sigma[last] = sigma[host]
            sigma[host] = r
        return PlanarMap(sigma, alpha, base.root)

    return build(0)


# ---------------------------------------------------------------------------
# core extraction
# ---------------------------------------------------------------------------

@dataclass
class CoreDecomposition:
    """Core size plus the sizes of the remaining fragments at one level."""
    level: str
    core_size: int
    fragments: List[int]
    unique_max: bool

    @property
    def total(self):
        return self.core_size + sum(self.fragments)


def extract_core_structural(m: PlanarMap) -> CoreDecomposition:
    """Largest non-separable block of an assembled map (edge counts)."""
    counts = m.block_edge_counts()
    if not counts:
        return CoreDecomposition("V", 0, [], True)
    unique = len(counts) == 1 or counts[0] > counts[1]
    return CoreDecomposition("V", counts[0], counts[1:], unique)


def tree_core_size(degrees: np.ndarray, chain: str = "M") -> int:
    """Core size read off the tree alone: e(V-core) = max outdegree / 2 for
    the map chain, max outdegree for the edge-indexed network chains."""
    delta = int(degrees.max())
    return delta // 2 if chain == "M" else delta


def _log_of_rational(q) -> float:
    q = mpq(q)
    if q == 0:
        return -math.inf
    return _log_of_int(q.numerator) - _log_of_int(q.denominator)


def _log_of_int(n) -> float:
    n = int(n)
    bits = n.bit_length()
    if bits <= 900:
        return math.log(n)
    top = n >> (bits - 64)
    return math.log(top) + (bits - 64) * math.log(2)


class SeqSplitter:
    """Exact sequential splitting of SEQ-type compositions, in log space.

    For part weights w_j (j >= 1) the series S = SEQ(w) satisfies
    S_m = sum_j w_j S_{m-j}; conditioned on total m, the first part equals j
    with probability w_j S_{m-j} / S_m.  Weights may be astronomically large,
    so everything is kept as logarithms.
    """

    def __init__(self, part_coeffs, cap: int):
        self.cap = cap
        self.logw = np.full(cap + 1, -np.inf)
        for j, q in enumerate(part_coeffs[:cap + 1]):
            self.logw[j] = _log_of_rational(q)
        self.logw[0] = -np.inf
        logS = np.full(cap + 1, -np.inf)
        logS[0] = 0.0
        for m in range(1, cap + 1):
            terms = self.logw[1:m + 1] + logS[m - 1::-1]
            top = terms.max()
            if top == -np.inf:
                continue
            logS[m] = top + math.log(np.exp(terms - top).sum())
        self.logS = logS

    def split(self, m: int, rng: np.random.Generator) -> List[int]:
        parts = []
        while m > 0:
            terms = self.logw[1:m + 1] + self.logS[m - 1::-1]
            top = terms.max()
            w = np.exp(terms - top)
            j = 1 + int(rng.choice(m, p=w / w.sum()))
            parts.append(j)
            m -= j
        return parts

    def product_split(self, first_logw: np.ndarray, m: int,
                      rng: np.random.Generator):
        """Split an (F . SEQ(w))-structure of total size m: returns the
        F-part size and the ordered list of SEQ parts."""
        terms = first_logw[:m + 1] + self.logS[m::-1]
        top = terms.max()
        w = np.exp(terms - top)
        j = int(rng.choice(m + 1, p=w / w.sum()))
        return j, self.split(m - j, rng)


class MapCoreSampler:
    """Nested exact core-size sampling along M -> V -> Kbar -> Rbar -> Obar.

    Each level re-samples the finite-size conditional law of the next core
    given the current one, using exact grammar coefficients: the V-core is
    the largest decoration of the map tree, the Kbar-core the largest part
    of the D-level series split, the Rbar-core the largest decoration of the
    nested Kbar tree, and the Obar-core the largest three-connected part of
    the Rbar-level split.
    """

    def __init__(self, t, n_edges: int, table, law_m: OffspringLaw,
                 law_kbar: OffspringLaw):
        self.t = mpq(t)
        self.n_edges = n_edges
        self.law_m = law_m
        self.law_kbar = law_kbar
        self.tables_m = LawTables(law_m, 2 * n_edges)
        kcap = min(table["Kbar"].max_y, 2 * n_edges)
        self.tables_k = LawTables(law_kbar, kcap)
        kb = [table["Kbar"].coeff(0, k) for k in range(kcap + 1)]
        tkb = [self.t * c for c in kb]
        self.kb_logw = np.array([_log_of_rational(c) for c in kb])
        self.d_split = SeqSplitter(tkb, kcap)
        jb = [table["Jbar"].coeff(0, k) for k in range(kcap + 1)]
        ist = [table["Istar_bar"].coeff(0, k) for k in range(kcap + 1)]
        ob = [table["Obar"].coeff(0, k) for k in range(kcap + 1)]
        self.jb_logw = np.array([_log_of_rational(c) for c in jb])
        self.r_split = SeqSplitter(ist, kcap)
        self.ob_logw = np.array([_log_of_rational(c) for c in ob])
        self.ist_logw = self.r_split.logw
        self.logt = _log_of_rational(self.t) if self.t != 1 else 0.0

    def sample(self, seed, index) -> Dict[str, CoreDecomposition]:
        rng = rng_for(seed, "cores", index)
        out: Dict[str, CoreDecomposition] = {}
        n_tree = 2 * self.n_edges + 1
        seq = self.tables_m.sample_conditioned(n_tree, n_tree - 1, rng)
        delta = int(seq.max())
        unique = int((seq == delta).sum()) == 1
        e_v = delta // 2
        frag_v = sorted((int(d) // 2 for d in seq if d > 0), reverse=True)
        frag_v.remove(e_v)
        out["V"] = CoreDecomposition("V", e_v, frag_v, unique)
        # D-network of the V-core has e_v - 1 regular edges
        m_d = e_v - 1
        if m_d <= 0:
            return out
        first, rest = self.d_split.product_split(self.kb_logw, m_d, rng)
        parts = ([first] if first else []) + rest
        parts.sort(reverse=True)
        e_k = parts[0]
        out["Kbar"] = CoreDecomposition("Kbar", e_k, parts[1:],
                                        len(parts) == 1 or parts[0] > parts[1])
        if e_k < 2:
            return out
        kseq = self.tables_k.sample_conditioned(e_k, e_k - 1, rng)
        delta_k = int(kseq.max())
        unique_k = int((kseq == delta_k).sum()) == 1
        frag_r = sorted((int(d) for d in kseq if d > 0), reverse=True)
        frag_r.remove(delta_k)
        out["Rbar"] = CoreDecomposition("Rbar", delta_k, frag_r, unique_k)
        # Rbar-object of size delta_k = Jbar-part + SEQ(Istar_bar) parts
        j_part, i_parts = self.r_split.product_split(self.jb_logw, delta_k, rng)
        best, others = 0, []
        for mi in i_parts:
            s = self._obar_inside_istar(mi, rng)
            if s > best:
                if best:
                    others.append(best)
                best = s
            elif s:
                others.append(s)
        out["Obar"] = CoreDecomposition("Obar", best, sorted(others, reverse=True),
                                        True)
        return out

    def _obar_inside_istar(self, m: int, rng) -> int:
        """Regular edges of the Obar-component inside an Istar_bar-object.

        Istar_bar = y SEQ_{>=1}(ty) SEQ(ty)  +  (Obar/y)(1 + y SEQ(ty)):
        the object is a pure double path (no Obar part) or an Obar-object of
        size s with a parallel path accounting for m + 1 - s.  The component
        is reported by its s - 1 regular edges inside the host (the slot
        edge is not counted), which keeps core sizes nested across levels.
        """
        if m < 1:
            return 0
        log_pure = (_log_of_int(m - 1) if m > 1 else -math.inf) + \
            (m - 1) * self.logt
        cands = []
        logs = []
        for s in range(5, m + 2):
            lw = self.ob_logw[s] if s <= len(self.ob_logw) - 1 else -math.inf
            if lw == -math.inf:
                continue
            k = m + 1 - s
            extra = 0.0 if k == 0 else (k - 1) * self.logt
            cands.append(s - 1)
            logs.append(lw + extra)
        if not cands:
            return 0
        logs = np.array(logs)
        top = max(logs.max(), log_pure)
        w = np.exp(logs - top)
        w_pure = math.exp(log_pure - top) if log_pure > -math.inf else 0.0
        tot = w.sum() + w_pure
        u = rng.random() * tot
        if u < w_pure:
            return 0
        u -= w_pure
        c = np.cumsum(w)
        return cands[int(np.searchsorted(c, u))]


def sample_maps(t, n_edges: int, count: int, seed,
                catalog: DecorationCatalog, law_m: OffspringLaw):
    """Sample uniform(t-weighted) rooted planar maps with n_edges edges."""
    sampler = ConditionedSampler(law_m, 2 * n_edges + 1)
    out = []
    for i in range(count):
        rng = rng_for(seed, "map", i)
        seq = sampler.tables.sample_conditioned(2 * n_edges + 1,
                                                2 * n_edges, rng)
        tree = PlaneTree(cycle_lemma_rotation(seq))
        decs = decorate(tree, catalog, seed, stream=("map-dec", i))
        out.append(assemble_map(EnrichedTree(tree, decs)))
    return out


# ---------------------------------------------------------------------------
# neighbourhoods and census
# ---------------------------------------------------------------------------

def neighborhood_key(m: PlanarMap, dart: Optional[int], r: int):
    """Canonical key of the radius-r neighbourhood of a corner.

    The neighbourhood is the submap induced by the vertices at graph
    distance <= r from the corner's vertex, rooted at the same corner.
    """
    if r == 0 or m.root is None or not m.sigma:
        return ((), ())
    root = m.root if dart is None else dart
    nv = m.n_vertices
    adj = [set() for _ in range(nv)]
    for u, v in m.edges():
        adj[u].add(v)
        adj[v].add(u)
    center = m.vertex_of(root)
    dist = {center: 0}
    frontier = [center]
    d = 0
    while frontier and d < r:
        d += 1
        nxt = []
        for u in frontier:
            for w in adj[u]:
                if w not in dist:
                    dist[w] = d
                    nxt.append(w)
        frontier = nxt
    keep = [d_ for d_ in range(m.n_darts)
            if m.vertex_of(d_) in dist and m.vertex_of(m.alpha[d_]) in dist]
    if not keep:
        return ((), ())
    keep_set = set(keep)
    relabel = {d_: i for i, d_ in enumerate(keep)}
    sigma = [0] * len(keep)
    alpha = [0] * len(keep)
    for d_ in keep:
        nxt = m.sigma[d_]
        while nxt not in keep_set:
            nxt = m.sigma[nxt]
        sigma[relabel[d_]] = relabel[nxt]
        alpha[relabel[d_]] = relabel[m.alpha[d_]]
    sub = PlanarMap(sigma, alpha, relabel[root])
    return sub.canonical_key()


def census_over_corners(m: PlanarMap, r: int) -> Dict:
    """Frequency of U_r isomorphism types over all corners of one map."""
    from collections import Counter
    if m.root is None:
        return Counter({((), ()): 1})
    return Counter(neighborhood_key(m, d, r) for d in range(m.n_darts))


def exact_census(maps: Sequence[PlanarMap], r: int) -> Dict:
    """U_r distribution of a uniform corner of a uniform rooted map."""
    from collections import Counter
    tot = Counter()
    n = 0
    for m in maps:
        c = census_over_corners(m, r)
        tot.update(c)
        n += sum(c.values())
    return {k: v / n for k, v in tot.items()}


def sampled_census(samples: Sequence[PlanarMap], r: int) -> Dict:
    """U_r distribution of the root corner over sampled maps."""
    from collections import Counter
    tot = Counter(neighborhood_key(m, None, r) for m in samples)
    n = len(samples)
    return {k: v / n for k, v in tot.items()}


def total_variation(p: Dict, q: Dict) -> float:
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)


def extract_cores(obj, chain: str = "M") -> CoreDecomposition:
    """Core decomposition of an assembled map or a tree-level proxy.

    A PlanarMap is decomposed structurally into its non-separable blocks;
    a PlaneTree (or degree sequence) yields the tree-level core size, where
    e(V-core) = max outdegree / 2 on the map chain.
    """
    if isinstance(obj, PlanarMap):
        return extract_core_structural(obj)
    degrees = obj.degrees if isinstance(obj, PlaneTree) else np.asarray(obj)
    delta = int(degrees.max())
    scale = 2 if chain == "M" else 1
    frags = sorted((int(d) // scale for d in degrees if d > 0), reverse=True)
    frags.remove(delta // scale)
    unique = int((degrees == delta).sum()) == 1
    return CoreDecomposition(chain, delta // scale, frags, unique)


def neighborhood_census(m: PlanarMap, radius: int) -> Dict:
    """Normalised frequency of U_r isomorphism types over the corners."""
    counts = census_over_corners(m, radius)
    total = sum(counts.values())
    return {k: v / total for k, v in counts.items()}
