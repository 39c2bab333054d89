"""Independent brute-force ground truth.

Exhaustive enumeration of rooted planar maps (rotation systems) and labelled
planar graphs at small size, Tutte's closed counting formula, and an exact
random-walk point-probability DP.  Everything in this module is deliberately
naive so that its correctness is auditable by hand; the grammar and sampler
modules are validated against it.
"""

from __future__ import annotations

import itertools
from typing import Dict, List, Optional, Tuple

from gmpy2 import mpq, mpz

from .series import Q

MAP_ENUM_CAP = 5          # full rotation-system scan is (2n)! -- keep small
GRAPH_ENUM_CAP = 6        # Kuratowski subdivision search is only valid to 6


class OracleCapError(ValueError):
    """Requested size is beyond the audited brute-force range."""


# ---------------------------------------------------------------------------
# rooted planar maps as rotation systems
# ---------------------------------------------------------------------------

class PlanarMap:
    """Rooted planar map as a rotation system on darts 0..2E-1.

    alpha is the fixed-point-free edge involution, sigma the counterclockwise
    rotation around vertices.  The root is a dart id; the single-vertex map
    with no edges is represented with empty permutations and root None.
    """

    __slots__ = ("sigma", "alpha", "root", "_vertex_of")

    def __init__(self, sigma, alpha, root):
        self.sigma = tuple(sigma)
        self.alpha = tuple(alpha)
        self.root = root
        n = len(self.sigma)
        if len(self.alpha) != n:
            raise ValueError("sigma and alpha must have equal length")
        if n == 0:
            self._vertex_of = ()
            return
        if any(self.alpha[self.alpha[d]] != d or self.alpha[d] == d
               for d in range(n)):
            raise ValueError("alpha must be a fixed-point-free involution")
        vertex_of = [-1] * n
        vid = 0
        for d in range(n):
            if vertex_of[d] < 0:
                e = d
                while vertex_of[e] < 0:
                    vertex_of[e] = vid
                    e = self.sigma[e]
                vid += 1
        self._vertex_of = tuple(vertex_of)

    # -- basic counts -------------------------------------------------------

    @property
    def n_darts(self):
        return len(self.sigma)

    @property
    def n_edges(self):
        return len(self.sigma) // 2

    @property
    def n_vertices(self):
        return 1 if not self.sigma else max(self._vertex_of) + 1

    def vertex_of(self, d):
        return self._vertex_of[d]

    def n_faces(self):
        n = len(self.sigma)
        if n == 0:
            return 1
        seen = [False] * n
        count = 0
        for d in range(n):
            if not seen[d]:
                count += 1
                e = d
                while not seen[e]:
                    seen[e] = True
                    e = self.sigma[self.alpha[e]]
        return count

    def is_connected(self):
        n = len(self.sigma)
        if n == 0:
            return True
        seen = [False] * n
        stack = [0]
        seen[0] = True
        reached = 1
        while stack:
            d = stack.pop()
            for e in (self.sigma[d], self.alpha[d]):
                if not seen[e]:
                    seen[e] = True
                    reached += 1
                    stack.append(e)
        return reached == n

    def is_planar(self):
        # Euler formula with genus 0: v - e + f = 2
        return self.is_connected() and \
            self.n_vertices - self.n_edges + self.n_faces() == 2

    def edges(self):
        """List of (u, v) vertex pairs, one per edge (loops as (u, u))."""
        out = []
        for d in range(0, len(self.sigma)):
            if d < self.alpha[d]:
                out.append((self._vertex_of[d], self._vertex_of[self.alpha[d]]))
        return out

    # -- canonical form -----------------------------------------------------

    def canonical_key(self):
        """BFS relabelling from the root dart; a complete rooted invariant."""
        n = len(self.sigma)
        if n == 0:
            return ((), ())
        new = {self.root: 0}
        order = [self.root]
        i = 0
        while i < len(order):
            d = order[i]
            i += 1
            for nd in (self.sigma[d], self.alpha[d]):
                if nd not in new:
                    new[nd] = len(order)
                    order.append(nd)
        sig = [0] * n
        alf = [0] * n
        for d in order:
            sig[new[d]] = new[self.sigma[d]]
            alf[new[d]] = new[self.alpha[d]]
        return (tuple(sig), tuple(alf))

    def rerooted(self, dart):
        return PlanarMap(self.sigma, self.alpha, dart)

    # -- structure flags ----------------------------------------------------

    def has_loop(self):
        return any(self._vertex_of[d] == self._vertex_of[self.alpha[d]]
                   for d in range(len(self.sigma)))

    def is_simple(self):
        if self.has_loop():
            return False
        seen = set()
        for u, v in self.edges():
            key = (min(u, v), max(u, v))
            if key in seen:
                return False
            seen.add(key)
        return True

    def is_nonseparable(self):
        """No articulation vertex splitting the edge set; loops only alone."""
        e = self.n_edges
        if e <= 1:
            return True
        if self.has_loop():
            return False
        return not self._has_cut_vertex()

    def _adjacency(self):
        adj = [set() for _ in range(self.n_vertices)]
        for u, v in self.edges():
            if u != v:
                adj[u].add(v)
                adj[v].add(u)
        return adj

    def _has_cut_vertex(self):
        nv = self.n_vertices
        if nv <= 2:
            return False
        adj = self._adjacency()
        for cut in range(nv):
            rest = [v for v in range(nv) if v != cut]
            seen = {rest[0]}
            stack = [rest[0]]
            while stack:
                u = stack.pop()
                for w in adj[u]:
                    if w != cut and w not in seen:
                        seen.add(w)
                        stack.append(w)
            if len(seen) != nv - 1:
                return True
        return False

    def is_three_connected(self):
        """Simple, >= 4 vertices, no vertex cut of size <= 2."""
        nv = self.n_vertices
        if nv < 4 or not self.is_simple():
            return False
        adj = self._adjacency()
        for cut in itertools.chain(itertools.combinations(range(nv), 1),
                                   itertools.combinations(range(nv), 2)):
            rest = [v for v in range(nv) if v not in cut]
            seen = {rest[0]}
            stack = [rest[0]]
            while stack:
                u = stack.pop()
                for w in adj[u]:
                    if w not in cut and w not in seen:
                        seen.add(w)
                        stack.append(w)
            if len(seen) != len(rest):
                return False
        return True

    # -- blocks ------------------------------------------------------------

    def block_edge_counts(self):
        """Edge counts of the nonseparable blocks (loops/bridges are blocks)."""
        e = self.n_edges
        if e == 0:
            return []
        edges = self.edges()
        loops = [i for i, (u, v) in enumerate(edges) if u == v]
        rest = [i for i, (u, v) in enumerate(edges) if u != v]
        counts = [1] * len(loops)
        if rest:
            counts.extend(_biconnected_edge_counts(self.n_vertices,
                                                   [edges[i] for i in rest]))
        return sorted(counts, reverse=True)

    def largest_block_edges(self):
        counts = self.block_edge_counts()
        return counts[0] if counts else 0


def _biconnected_edge_counts(nv, edge_list):
    """Tarjan biconnected components on a loopless multigraph.

    Parallel edges are distinct edges: only the tree edge itself is skipped
    when revisiting the parent, so a double edge forms a 2-edge block.
    """
    adj = [[] for _ in range(nv)]
    for i, (u, v) in enumerate(edge_list):
        adj[u].append((v, i))
        adj[v].append((u, i))
    num = [0] * nv
    low = [0] * nv
    counter = [0]
    stack: List[int] = []
    out = []

    def dfs(u, parent_edge):
        counter[0] += 1
        num[u] = low[u] = counter[0]
        for (w, ei) in adj[u]:
            if ei == parent_edge:
                continue
            if num[w] == 0:
                stack.append(ei)
                dfs(w, ei)
                low[u] = min(low[u], low[w])
                if low[w] >= num[u]:
                    comp = []
                    while True:
                        e2 = stack.pop()
                        comp.append(e2)
                        if e2 == ei:
                            break
                    out.append(len(set(comp)))
            elif num[w] < num[u]:
                stack.append(ei)
                low[u] = min(low[u], num[w])

    for s in range(nv):
        if num[s] == 0:
            dfs(s, -1)
    return out


# ---------------------------------------------------------------------------
# exhaustive map enumeration
# ---------------------------------------------------------------------------

def enumerate_rooted_planar_maps(max_edges: int) -> Dict[int, List[PlanarMap]]:
    """All rooted planar maps with up to max_edges edges.

    Scans every rotation system on 2n darts against the fixed pairing
    alpha(d) = d XOR 1 with the root at dart 0, and deduplicates through the
    canonical BFS relabelling (rooted maps have no root-fixing symmetries,
    so the relabelling is a complete invariant).
    """
    if max_edges > MAP_ENUM_CAP:
        raise OracleCapError(f"exhaustive map scan capped at {MAP_ENUM_CAP} edges")
    catalog: Dict[int, List[PlanarMap]] = {0: [PlanarMap((), (), None)]}
    for n in range(1, max_edges + 1):
        nd = 2 * n
        alpha = tuple(d ^ 1 for d in range(nd))
        seen = set()
        reps = []
        darts = range(nd)
        for sigma in itertools.permutations(darts):
            if not _fast_map_checks(sigma, alpha, nd, n):
                continue
            m = PlanarMap(sigma, alpha, 0)
            key = m.canonical_key()
            if key not in seen:
                seen.add(key)
                reps.append(PlanarMap(key[0], key[1], 0))
        catalog[n] = reps
    return catalog


def _fast_map_checks(sigma, alpha, nd, n_edges):
    # connectivity
    seen = [False] * nd
    seen[0] = True
    stack = [0]
    reached = 1
    while stack:
        d = stack.pop()
        for e in (sigma[d], alpha[d]):
            if not seen[e]:
                seen[e] = True
                reached += 1
                stack.append(e)
    if reached != nd:
        return False
    # Euler with genus zero
    visited = [False] * nd
    v = 0
    for d in range(nd):
        if not visited[d]:
            v += 1
            e = d
            while not visited[e]:
                visited[e] = True
                e = sigma[e]
    visited = [False] * nd
    f = 0
    for d in range(nd):
        if not visited[d]:
            f += 1
            e = d
            while not visited[e]:
                visited[e] = True
                e = sigma[alpha[e]]
    return v - n_edges + f == 2


def enumerate_rooted_3connected_maps_6edges() -> List[PlanarMap]:
    """Rooted 3-connected planar maps with exactly 6 edges.

    By Euler's formula a 3-connected map with 6 edges has v + f = 8 with
    v, f >= 4, hence v = 4 and minimum degree 3 forces the underlying graph
    to be K4.  It suffices to scan the rotation systems over K4's darts.
    """
    # darts: 2*i and 2*i+1 are the ends of edge i; K4 edge list:
    edge_vertices = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    nd = 12
    alpha = tuple(d ^ 1 for d in range(nd))
    dart_vertex = [0] * nd
    for i, (u, v) in enumerate(edge_vertices):
        dart_vertex[2 * i] = u
        dart_vertex[2 * i + 1] = v
    darts_at = [[d for d in range(nd) if dart_vertex[d] == u] for u in range(4)]
    seen = set()
    reps = []
    # each vertex has 3 darts: 2 distinct cyclic orders per vertex
    for perms in itertools.product(*[itertools.permutations(ds[1:])
                                     for ds in darts_at]):
        sigma = [0] * nd
        for u in range(4):
            cyc = (darts_at[u][0],) + perms[u]
            for i, d in enumerate(cyc):
                sigma[d] = cyc[(i + 1) % 3]
        for root in range(nd):
            m = PlanarMap(sigma, alpha, root)
            if not m.is_planar():
                continue
            key = m.canonical_key()
            if key not in seen:
                seen.add(key)
                reps.append(PlanarMap(key[0], key[1], 0))
    assert all(r.is_three_connected() for r in reps)
    return reps


def tutte_count(n_edges: int):
    """Tutte's formula for rooted planar maps: 2 * 3^n * (2n)! / (n! (n+2)!)."""
    if n_edges < 0:
        raise ValueError("n_edges must be >= 0")
    num = 2 * mpz(3) ** n_edges * _fact(2 * n_edges)
    den = _fact(n_edges) * _fact(n_edges + 2)
    q = mpq(num, den)
    assert q.denominator == 1
    return int(q)


def _fact(n):
    out = mpz(1)
    for k in range(2, n + 1):
        out *= k
    return out


# ---------------------------------------------------------------------------
# labelled simple planar graphs
# ---------------------------------------------------------------------------

def _edge_index(n):
    pairs = list(itertools.combinations(range(n), 2))
    return pairs


def _mask_degrees(n, pairs, mask):
    deg = [0] * n
    for i, (u, v) in enumerate(pairs):
        if mask >> i & 1:
            deg[u] += 1
            deg[v] += 1
    return deg


def _mask_connected(n, pairs, mask):
    adj = [0] * n
    for i, (u, v) in enumerate(pairs):
        if mask >> i & 1:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
    seen = 1
    stack = [0]
    while stack:
        u = stack.pop()
        rest = adj[u] & ~seen
        while rest:
            w = (rest & -rest).bit_length() - 1
            seen |= 1 << w
            stack.append(w)
            rest &= rest - 1
    return seen == (1 << n) - 1


def _mask_two_connected(n, pairs, mask):
    if n < 2 or not _mask_connected(n, pairs, mask):
        return False
    if n == 2:
        return bool(mask)
    adj = [0] * n
    for i, (u, v) in enumerate(pairs):
        if mask >> i & 1:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
    full = (1 << n) - 1
    for cut in range(n):
        rest = full & ~(1 << cut)
        start = (rest & -rest).bit_length() - 1
        seen = 1 << start
        stack = [start]
        while stack:
            u = stack.pop()
            r = adj[u] & rest & ~seen
            while r:
                w = (r & -r).bit_length() - 1
                seen |= 1 << w
                stack.append(w)
                r &= r - 1
        if seen != rest:
            return False
    return True


def _has_k5_subdivision(n, pairs, adj_sets, mask):
    # with n <= 6: either a K5 subgraph, or 5 branch vertices plus the sixth
    # vertex subdividing exactly one missing branch edge
    for branch in itertools.combinations(range(n), 5):
        missing = [(u, v) for u, v in itertools.combinations(branch, 2)
                   if v not in adj_sets[u]]
        if not missing:
            return True
        if len(missing) == 1 and n == 6:
            (u, v) = missing[0]
            w = next(x for x in range(n) if x not in branch)
            if u in adj_sets[w] and v in adj_sets[w]:
                return True
    return False


def _has_k33_subgraph(n, adj_sets):
    if n < 6:
        return False
    for left in itertools.combinations(range(n), 3):
        right = [x for x in range(n) if x not in left]
        if all(r in adj_sets[l] for l in left for r in right):
            return True
    return False


def is_planar_graph(n, pairs, mask):
    """Kuratowski test by exhaustive subdivision search; valid for n <= 6."""
    if n > GRAPH_ENUM_CAP:
        raise OracleCapError(f"planarity oracle capped at {GRAPH_ENUM_CAP} vertices")
    adj_sets = [set() for _ in range(n)]
    for i, (u, v) in enumerate(pairs):
        if mask >> i & 1:
            adj_sets[u].add(v)
            adj_sets[v].add(u)
    if n >= 5 and _has_k5_subdivision(n, pairs, adj_sets, mask):
        return False
    if n >= 6 and _has_k33_subgraph(n, adj_sets):
        return False
    return True


def enumerate_labelled_planar_graphs(max_n: int):
    """Counts of labelled simple planar graphs by vertex count and edges.

    Returns {n: {"all": {m: count}, "connected": {...}, "two_connected": {...}}}.
    """
    if max_n > GRAPH_ENUM_CAP:
        raise OracleCapError(f"graph enumeration capped at {GRAPH_ENUM_CAP}")
    result = {}
    for n in range(1, max_n + 1):
        pairs = _edge_index(n)
        tally = {"all": {}, "connected": {}, "two_connected": {}}
        for mask in range(1 << len(pairs)):
            if not is_planar_graph(n, pairs, mask):
                continue
            m = bin(mask).count("1")
            tally["all"][m] = tally["all"].get(m, 0) + 1
            if _mask_connected(n, pairs, mask):
                tally["connected"][m] = tally["connected"].get(m, 0) + 1
                if n >= 2 and _mask_two_connected(n, pairs, mask):
                    tally["two_connected"][m] = tally["two_connected"].get(m, 0) + 1
        result[n] = tally
    return result


# ---------------------------------------------------------------------------
# exact random-walk DP
# ---------------------------------------------------------------------------

def poly_pow_trunc(coeffs, n, m):
    """Coefficients of (sum_k c_k y^k)^n modulo y^(m+1), exact."""
    base = list(coeffs[:m + 1]) + [Q(0)] * max(0, m + 1 - len(coeffs))
    result = [Q(0)] * (m + 1)
    result[0] = Q(1)
    e = n
    while e:
        if e & 1:
            result = _conv_trunc(result, base, m)
        e >>= 1
        if e:
            base = _conv_trunc(base, base, m)
    return result


def _conv_trunc(a, b, m):
    out = [Q(0)] * (m + 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j in range(min(len(b), m + 1 - i)):
            bj = b[j]
            if bj != 0:
                out[i + j] += ai * bj
    return out


def walk_dp(law, n: int, m: int):
    """Exact P(xi_1 + ... + xi_n = m) for a truncated offspring law.

    ``law`` provides weights omega_k, the tilt tau and phi(tau); the point
    probability is tau^m phi(tau)^(-n) [y^m] phi(y)^n, computed by truncated
    convolution squaring.  Exact for the truncated law itself; the truncation
    tail mass is reported by the law object.
    """
    if m < 0:
        return Q(0)
    coeff = poly_pow_trunc(law.weights, n, m)[m]
    return coeff * (Q(law.tau) ** m) / (Q(law.phi_tau) ** n)


def walk_distribution(law, n: int, m_max: int):
    """Exact [P(S_n = m)]_{m=0..m_max} as a list of rationals."""
    coeffs = poly_pow_trunc(law.weights, n, m_max)
    phi_n = Q(law.phi_tau) ** n
    tau = Q(law.tau)
    out = []
    power = Q(1)
    for m in range(m_max + 1):
        out.append(coeffs[m] * power / phi_n)
        power *= tau
    return out
