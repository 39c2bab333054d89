"""Decomposition grammar for planar maps and labelled planar graphs.

Builds every generating series of the summary grammar, on the map side

    zM = zV(x, zM),   V = 1 + (1+x)z^2 + x z^2 D(x, z^2),
    D  = Kbar SEQ(x Kbar),   Kbar = y Rbar(x, Kbar),
    Rbar = Jbar SEQ(Istar_bar),

and on the graph side

    G = SET(C),  x dC/dx = x SET(dB/dx(x dC/dx, y)),
    N = (1+y)(2/x^2) dB/dy - 1,  N = K SEQ(xK),  K = y R(x, K),
    R = J SEQ(I*),

with the three-connected input series (Mullin--Schellenberg)

    F01bar(x,y) = y (1/(1+xy) + 1/(1+y) - 1 - (1+u)^2 (1+v)^2 / (1+u+v)^3),
    u = xy(1+v)^2,  v = y(1+u)^2,      F01 = F01bar / 2  (Whitney).

All series are exact; high-order univariate runs (x evaluated at a rational
vertex weight t) are produced by order-by-order solvers that replace the
generic fixed-point iteration with rational recurrences of the same system.

Note on V: the class of non-separable maps contains the link map (one edge,
two vertices), which contributes the (1+x) factor of the z^2 term.  Writing
V = 1 + z^2 + x z^2 D drops it and breaks the rooted-map counts against
Tutte's formula; the corrected form above reproduces them exactly.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from gmpy2 import mpq

from ._rings import PolyRing, ScalarRing, solve_uv_kernel
from .series import (Convention, Q, Series, SeriesError, WeightSequence,
                     from_y_coeffs)

GRAPH_CLASSES = ("N", "K", "R", "O", "Istar", "J", "S", "P", "H", "L",
                 "B", "C", "G", "F01")
MAP_CLASSES = ("M", "V", "D", "Kbar", "Rbar", "Obar", "Istar_bar", "Jbar",
               "Sbar", "Pbar", "Hbar", "F01bar")
CLASS_IDS = set(GRAPH_CLASSES) | set(MAP_CLASSES) | {"u", "v", "W"}


class GrammarError(ValueError):
    """Raised for unknown classes and violated grammar preconditions."""


# ---------------------------------------------------------------------------
# order-by-order engines
# ---------------------------------------------------------------------------

def _new(ring, n):
    return [ring.zero() for _ in range(n + 1)]


def _f01bar_lists(ring, x, n_y):
    """F01bar as a coefficient list over the ring, plus the u, v lists."""
    u, v = solve_uv_kernel(ring, x, n_y)
    one = ring.one()
    # squares and the cube of T = 1 + u + v, all with constant term 1
    su = _new(ring, n_y); su[0] = one
    sv = _new(ring, n_y); sv[0] = one
    t = _new(ring, n_y); t[0] = one
    t2 = _new(ring, n_y); t2[0] = one
    t3 = _new(ring, n_y); t3[0] = one
    q = _new(ring, n_y); q[0] = one
    g = _new(ring, n_y); g[0] = one
    for n in range(1, n_y + 1):
        s = ring.scale(u[n], 2)
        for i in range(1, n):
            s = ring.add(s, ring.mul(u[i], u[n - i]))
        su[n] = s
        s = ring.scale(v[n], 2)
        for i in range(1, n):
            s = ring.add(s, ring.mul(v[i], v[n - i]))
        sv[n] = s
        t[n] = ring.add(u[n], v[n])
        s = ring.scale(t[n], 2)
        for i in range(1, n):
            s = ring.add(s, ring.mul(t[i], t[n - i]))
        t2[n] = s
        s = ring.add(t2[n], t[n])
        for i in range(1, n):
            s = ring.add(s, ring.mul(t2[i], t[n - i]))
        t3[n] = s
        s = ring.add(su[n], sv[n])
        for i in range(1, n):
            s = ring.add(s, ring.mul(su[i], sv[n - i]))
        q[n] = s
        s = q[n]
        for i in range(n):
            s = ring.sub(s, ring.mul(g[i], t3[n - i]))
        g[n] = s
    # 1/(1+xy) and 1/(1+y)
    p1 = _new(ring, n_y); p1[0] = one
    p2 = _new(ring, n_y); p2[0] = one
    for n in range(1, n_y + 1):
        p1[n] = ring.scale(ring.mul(x, p1[n - 1]), -1)
        p2[n] = ring.scale(p2[n - 1], -1)
    inner = [ring.sub(ring.add(p1[n], p2[n]), g[n]) for n in range(n_y + 1)]
    inner[0] = ring.sub(inner[0], one)
    f01 = [ring.zero()] + inner[:n_y]      # multiply by y
    return f01, u, v


def _map_network_lists(ring, x, n_y):
    """Solve the map-side network system up to y-order n_y.

    Returns D, Hbar, Sbar and the internal u, v of the composed
    three-connected series, all as ring coefficient lists.
    """
    one = ring.one()
    D = _new(ring, n_y)
    U = _new(ring, n_y)
    V = _new(ring, n_y)
    su = _new(ring, n_y); su[0] = one
    sv = _new(ring, n_y); sv[0] = one
    t = _new(ring, n_y); t[0] = one
    t2 = _new(ring, n_y); t2[0] = one
    t3 = _new(ring, n_y); t3[0] = one
    q = _new(ring, n_y); q[0] = one
    g = _new(ring, n_y); g[0] = one
    a1 = _new(ring, n_y); a1[0] = one   # 1/(1+xD)
    a2 = _new(ring, n_y); a2[0] = one   # 1/(1+D)
    z = _new(ring, n_y)                 # a1 + a2 - 1 - g
    hb = _new(ring, n_y)
    dd = _new(ring, n_y)
    sb = _new(ring, n_y)
    w = _new(ring, n_y)
    for n in range(1, n_y + 1):
        s = ring.zero()
        for i in range(1, n):
            s = ring.add(s, ring.mul(D[i], z[n - i]))
        hb[n] = s
        s = ring.zero()
        for i in range(1, n):
            s = ring.add(s, ring.mul(D[i], D[n - i]))
        dd[n] = s
        s = ring.zero()
        for j in range(2, n + 1):
            s = ring.add(s, ring.mul(dd[j], a1[n - j]))
        sb[n] = ring.mul(x, s)
        w[n] = ring.add(hb[n], sb[n])
        if n == 1:
            w[n] = ring.add(w[n], one)
        s = w[n]
        for i in range(1, n):
            s = ring.add(s, ring.mul(w[i], D[n - i]))
        D[n] = s
        # downstream states now that D_n is fixed
        s = ring.zero()
        for i in range(1, n + 1):
            s = ring.add(s, ring.mul(D[i], sv[n - i]))
        U[n] = ring.mul(x, s)
        s = ring.zero()
        for i in range(1, n + 1):
            s = ring.add(s, ring.mul(D[i], su[n - i]))
        V[n] = s
        s = ring.scale(U[n], 2)
        for i in range(1, n):
            s = ring.add(s, ring.mul(U[i], U[n - i]))
        su[n] = s
        s = ring.scale(V[n], 2)
        for i in range(1, n):
            s = ring.add(s, ring.mul(V[i], V[n - i]))
        sv[n] = s
        t[n] = ring.add(U[n], V[n])
        s = ring.scale(t[n], 2)
        for i in range(1, n):
            s = ring.add(s, ring.mul(t[i], t[n - i]))
        t2[n] = s
        s = ring.add(t2[n], t[n])
        for i in range(1, n):
            s = ring.add(s, ring.mul(t2[i], t[n - i]))
        t3[n] = s
        s = ring.add(su[n], sv[n])
        for i in range(1, n):
            s = ring.add(s, ring.mul(su[i], sv[n - i]))
        q[n] = s
        s = q[n]
        for i in range(n):
            s = ring.sub(s, ring.mul(g[i], t3[n - i]))
        g[n] = s
        s = ring.zero()
        for i in range(n):
            s = ring.add(s, ring.mul(a1[i], D[n - i]))
        a1[n] = ring.scale(ring.mul(x, s), -1)
        s = ring.zero()
        for i in range(n):
            s = ring.add(s, ring.mul(a2[i], D[n - i]))
        a2[n] = ring.scale(s, -1)
        z[n] = ring.sub(ring.add(a1[n], a2[n]), g[n])
    return {"D": D, "Hbar": hb, "Sbar": sb, "u": U, "v": V}


def _graph_network_lists(ring, x, n_y):
    """Solve the graph-side network system up to y-order n_y.

    Same shape as the map system, with SET in place of the ordered parallel
    composition:  N = (1+y) exp(H + S) - 1,  H = F01(x, N),
    S = xN^2/(1+xN).  Returns N, H, S, exp(H+S) and the composed u, v.
    """
    one = ring.one()
    N = _new(ring, n_y)
    U = _new(ring, n_y)
    V = _new(ring, n_y)
    su = _new(ring, n_y); su[0] = one
    sv = _new(ring, n_y); sv[0] = one
    t = _new(ring, n_y); t[0] = one
    t2 = _new(ring, n_y); t2[0] = one
    t3 = _new(ring, n_y); t3[0] = one
    q = _new(ring, n_y); q[0] = one
    g = _new(ring, n_y); g[0] = one
    a1 = _new(ring, n_y); a1[0] = one   # 1/(1+xN)
    a2 = _new(ring, n_y); a2[0] = one   # 1/(1+N)
    z = _new(ring, n_y)
    h = _new(ring, n_y)
    nn = _new(ring, n_y)
    s_ser = _new(ring, n_y)
    a_ser = _new(ring, n_y)
    e = _new(ring, n_y); e[0] = one
    half = mpq(1, 2)
    for n in range(1, n_y + 1):
        s = ring.zero()
        for i in range(1, n):
            s = ring.add(s, ring.mul(N[i], z[n - i]))
        h[n] = ring.scale(s, half)
        s = ring.zero()
        for i in range(1, n):
            s = ring.add(s, ring.mul(N[i], N[n - i]))
        nn[n] = s
        s = ring.zero()
        for j in range(2, n + 1):
            s = ring.add(s, ring.mul(nn[j], a1[n - j]))
        s_ser[n] = ring.mul(x, s)
        a_ser[n] = ring.add(h[n], s_ser[n])
        acc = ring.zero()
        for k in range(1, n + 1):
            acc = ring.add(acc, ring.scale(ring.mul(a_ser[k], e[n - k]), k))
        e[n] = ring.scale(acc, mpq(1, n))
        N[n] = ring.add(e[n], e[n - 1])
        s = ring.zero()
        for i in range(1, n + 1):
            s = ring.add(s, ring.mul(N[i], sv[n - i]))
        U[n] = ring.mul(x, s)
        s = ring.zero()
        for i in range(1, n + 1):
            s = ring.add(s, ring.mul(N[i], su[n - i]))
        V[n] = s
        s = ring.scale(U[n], 2)
        for i in range(1, n):
            s = ring.add(s, ring.mul(U[i], U[n - i]))
        su[n] = s
        s = ring.scale(V[n], 2)
        for i in range(1, n):
            s = ring.add(s, ring.mul(V[i], V[n - i]))
        sv[n] = s
        t[n] = ring.add(U[n], V[n])
        s = ring.scale(t[n], 2)
        for i in range(1, n):
            s = ring.add(s, ring.mul(t[i], t[n - i]))
        t2[n] = s
        s = ring.add(t2[n], t[n])
        for i in range(1, n):
            s = ring.add(s, ring.mul(t2[i], t[n - i]))
        t3[n] = s
        s = ring.add(su[n], sv[n])
        for i in range(1, n):
            s = ring.add(s, ring.mul(su[i], sv[n - i]))
        q[n] = s
        s = q[n]
        for i in range(n):
            s = ring.sub(s, ring.mul(g[i], t3[n - i]))
        g[n] = s
        s = ring.zero()
        for i in range(n):
            s = ring.add(s, ring.mul(a1[i], N[n - i]))
        a1[n] = ring.scale(ring.mul(x, s), -1)
        s = ring.zero()
        for i in range(n):
            s = ring.add(s, ring.mul(a2[i], N[n - i]))
        a2[n] = ring.scale(s, -1)
        z[n] = ring.sub(ring.add(a1[n], a2[n]), g[n])
    return {"N": N, "H": h, "S": s_ser, "expHS": e, "u": U, "v": V}


def _series_over_ratio(ring, num, den, n_y):
    """Coefficients of num/den for den with invertible constant term 1."""
    out = _new(ring, n_y)
    for n in range(n_y + 1):
        s = num[n]
        for i in range(n):
            s = ring.sub(s, ring.mul(out[i], den[n - i]))
        out[n] = s
    return out


def _rbar_list(t, n_y):
    """Rbar(t, y) = (1 - ty)(1+u~+v~)^3 / ((1+u~)^2 (1+v~)^2), exact.

    u~, v~ are u, v composed with the open-path substitution y/(1-ty);
    they satisfy u~ = t w (1+v~)^2 and v~ = w (1+u~)^2 with w = y/(1-ty),
    solved order-by-order like the plain u, v system.
    """
    ring = ScalarRing()
    t = mpq(t)
    w = [mpq(0)] * (n_y + 1)
    p = mpq(1)
    for n in range(1, n_y + 1):
        w[n] = p
        p *= t
    u = _new(ring, n_y)
    v = _new(ring, n_y)
    su = _new(ring, n_y); su[0] = mpq(1)
    sv = _new(ring, n_y); sv[0] = mpq(1)
    for n in range(1, n_y + 1):
        s = ring.zero()
        for i in range(1, n + 1):
            s += w[i] * sv[n - i]
        u[n] = t * s
        s = ring.zero()
        for i in range(1, n + 1):
            s += w[i] * su[n - i]
        v[n] = s
        s = 2 * u[n]
        for i in range(1, n):
            s += u[i] * u[n - i]
        su[n] = s
        s = 2 * v[n]
        for i in range(1, n):
            s += v[i] * v[n - i]
        sv[n] = s
    tt = [u[n] + v[n] for n in range(n_y + 1)]
    tt[0] = mpq(1)
    t2 = _series_product(tt, tt, n_y)
    t3 = _series_product(t2, tt, n_y)
    rhs = [t3[n] - t * t3[n - 1] if n >= 1 else t3[0] for n in range(n_y + 1)]
    q = _series_product(su, sv, n_y)
    return _series_over_ratio(ring, rhs, q, n_y)


def _series_product(a, b, n_y):
    out = [mpq(0)] * (n_y + 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j in range(n_y + 1 - i):
            bj = b[j]
            if bj != 0:
                out[i + j] += ai * bj
    return out


def _r_graph_list(t, n_y):
    """Graph-side R(t, y) = J SEQ(I*) with J = SET(O + L),
    y I* = O + SET_{>=2}(O + L), O = F01(t, y/(1-ty)), L = ty^2/(1-ty)."""
    ring = ScalarRing()
    t = mpq(t)
    pad = n_y + 1  # I* needs one extra order of J
    w = [mpq(0)] * (pad + 1)
    p = mpq(1)
    for n in range(1, pad + 1):
        w[n] = p
        p *= t
    u = _new(ring, pad)
    v = _new(ring, pad)
    su = _new(ring, pad); su[0] = mpq(1)
    sv = _new(ring, pad); sv[0] = mpq(1)
    for n in range(1, pad + 1):
        s = mpq(0)
        for i in range(1, n + 1):
            s += w[i] * sv[n - i]
        u[n] = t * s
        s = mpq(0)
        for i in range(1, n + 1):
            s += w[i] * su[n - i]
        v[n] = s
        s = 2 * u[n]
        for i in range(1, n):
            s += u[i] * u[n - i]
        su[n] = s
        s = 2 * v[n]
        for i in range(1, n):
            s += v[i] * v[n - i]
        sv[n] = s
    tt = [u[n] + v[n] for n in range(pad + 1)]
    tt[0] = mpq(1)
    t2 = _series_product(tt, tt, pad)
    t3 = _series_product(t2, tt, pad)
    q = _series_product(su, sv, pad)
    g = _series_over_ratio(ring, q, t3, pad)        # (1+u)^2(1+v)^2/(1+u+v)^3
    # A2' = 1/(1+w)
    a2 = _new(ring, pad); a2[0] = mpq(1)
    for n in range(1, pad + 1):
        s = mpq(0)
        for i in range(n):
            s += a2[i] * w[n - i]
        a2[n] = -s
    # O = (1/2) w (1/(1+tw) + A2' - 1 - G) with 1/(1+tw) = 1 - ty
    inner = [mpq(0)] * (pad + 1)
    for n in range(pad + 1):
        one_plus_tw_inv = mpq(1) if n == 0 else (-t if n == 1 else mpq(0))
        inner[n] = one_plus_tw_inv + a2[n] - g[n]
    inner[0] -= 1
    o = _series_product(w, inner, pad)
    o = [c / 2 for c in o]
    ell = [mpq(0)] * (pad + 1)
    p = t
    for n in range(2, pad + 1):
        ell[n] = p
        p *= t
    wexp = [o[n] + ell[n] for n in range(pad + 1)]
    # J = exp(O + L)
    j = _new(ring, pad); j[0] = mpq(1)
    for n in range(1, pad + 1):
        acc = mpq(0)
        for k in range(1, n + 1):
            acc += k * wexp[k] * j[n - k]
        j[n] = acc / n
    istar = [j[n + 1] - ell[n + 1] for n in range(n_y + 1)]
    # R (1 - I*) = J
    r = [mpq(0)] * (n_y + 1)
    for n in range(n_y + 1):
        s = j[n]
        for i in range(n):
            s += r[i] * istar[n - i]
        r[n] = s
    return {"R": r, "J": j[:n_y + 1], "Istar": istar, "O": o[:n_y + 1],
            "L": ell[:n_y + 1]}


# ---------------------------------------------------------------------------
# public builders
# ---------------------------------------------------------------------------

@dataclass
class GrammarTable:
    """Named series of one chain build, plus the build log."""
    t: Optional[mpq]
    max_x: int
    max_y: int
    series: Dict[str, Series] = field(default_factory=dict)
    log: List[str] = field(default_factory=list)

    def __getitem__(self, key):
        if key not in self.series:
            raise GrammarError(f"series {key!r} not built "
                               f"(available: {sorted(self.series)})")
        return self.series[key]

    def note(self, msg):
        self.log.append(msg)


def build_f01_bar(t, max_y) -> Series:
    """Univariate F01bar(t, y): three-connected planar networks at weight t."""
    t = mpq(t)
    if t <= 0:
        raise GrammarError("t must be a positive rational")
    f01, _, _ = _f01bar_lists(ScalarRing(), t, max_y)
    if all(c == 0 for c in f01):
        warnings.warn("truncation too small: F01bar has no nonzero term below y^5")
    s = from_y_coeffs(f01, max_y, Convention.PLAIN, x_value=t)
    return s


def build_f01_bar_xy(max_x, max_y) -> Series:
    """Bivariate F01bar(x, y) with x marking non-pole vertices, y edges."""
    ring = PolyRing(max_x)
    f01, _, _ = _f01bar_lists(ring, ring.monomial(1), max_y)
    coeffs = {(a, b): c for b, sl in enumerate(f01)
              for a, c in enumerate(sl) if c != 0}
    return Series(max_x, max_y, coeffs, Convention.PLAIN)


def build_map_chain(t, max_y, with_v_order=None) -> GrammarTable:
    """All map-side series at vertex weight t, up to y-order max_y in edges.

    The table contains D, Kbar, Rbar, Sbar, Hbar, Pbar, Jbar, Istar_bar,
    Obar, F01bar (univariate in y at x = t) and V (in the corner variable z,
    truncated at z-order ``with_v_order`` or 2*max_y + 2).
    """
    t = mpq(t)
    if t <= 0:
        raise GrammarError("t must be a positive rational")
    ring = ScalarRing()
    table = GrammarTable(t, 0, max_y)
    sol = _map_network_lists(ring, t, max_y)
    D = sol["D"]
    mk = lambda lst: from_y_coeffs(lst[:max_y + 1], max_y, Convention.PLAIN, t)
    table.series["D"] = mk(D)
    table.series["Hbar"] = mk(sol["Hbar"])
    table.series["Sbar"] = mk(sol["Sbar"])
    # Kbar = D/(1+tD)
    kb = [mpq(0)] * (max_y + 1)
    for n in range(1, max_y + 1):
        s = D[n]
        for i in range(1, n):
            s -= t * kb[i] * D[n - i]
        kb[n] = s
    table.series["Kbar"] = mk(kb)
    # Pbar = y + (y + Hbar + Sbar) D
    hs = [sol["Hbar"][n] + sol["Sbar"][n] for n in range(max_y + 1)]
    hs[1] += 1
    pb = _series_product(hs, D, max_y)
    pb[1] += 1
    table.series["Pbar"] = mk(pb)
    table.series["Rbar"] = mk(_rbar_list(t, max_y))
    table.series["F01bar"] = build_f01_bar(t, max_y)
    # Jbar = 1 + y SEQ(ty), Istar_bar, Obar = F01bar(t, y/(1-ty))
    jb = [mpq(0)] * (max_y + 1)
    jb[0] = mpq(1)
    p = mpq(1)
    for n in range(1, max_y + 1):
        jb[n] = p
        p *= t
    table.series["Jbar"] = mk(jb)
    # Istar_bar needs Obar one order past the truncation
    f01_pad, _, _ = _f01bar_lists(ring, t, max_y + 1)
    obar_pad = _compose_open_paths_list(f01_pad, t, max_y + 1)
    table.series["Obar"] = mk(obar_pad)
    # Istar_bar = y SEQ_{>=1}(ty) SEQ(ty) + (Obar/y)(1 + y SEQ(ty))
    ist = _istar_bar_list(obar_pad, t, max_y)
    table.series["Istar_bar"] = mk(ist)
    v_order = 2 * max_y + 2 if with_v_order is None else with_v_order
    vc = {(0, 0): mpq(1)}
    if v_order >= 2:
        vc[(0, 2)] = 1 + t
    for m in range(2, v_order // 2 + 1):
        c = t * D[m - 1] if m - 1 <= max_y else None
        if c is not None and c != 0:
            vc[(0, 2 * m)] = c
    table.series["V"] = Series(0, v_order, vc, Convention.PLAIN, x_value=t)
    table.note(f"map chain built at t={t}, max_y={max_y}")
    return table


def _compose_open_paths_list(coeffs, t, max_y):
    """f(t, y/(1-ty)) for f given by coefficients, O(N^2) Horner.

    Multiplying an accumulator A by w = y/(1-ty) is the O(N) recurrence
    (Aw)_n = A_{n-1} + t (Aw)_{n-1}, so the full Horner costs O(N^2).
    """
    t = mpq(t)
    acc = [mpq(0)] * (max_y + 1)
    for b in range(min(len(coeffs) - 1, max_y), -1, -1):
        nxt = [mpq(0)] * (max_y + 1)
        for n in range(1, max_y + 1):
            nxt[n] = acc[n - 1] + t * nxt[n - 1]
        nxt[0] = mpq(coeffs[b])
        acc = nxt
    return acc


def _compose_open_paths(f: Series, t, max_y) -> Series:
    """f(t, y/(1-ty)): substitute each edge by an open path."""
    coeffs = [f.coeff(0, b) for b in range(min(f.max_y, max_y) + 1)]
    out = _compose_open_paths_list(coeffs, mpq(t), max_y)
    return from_y_coeffs(out, max_y, Convention.PLAIN, x_value=mpq(t))


def _istar_bar_list(obar_pad, t, max_y):
    t = mpq(t)
    # y SEQ_{>=1}(ty) SEQ(ty) = t y^2/(1-ty)^2
    out = [mpq(0)] * (max_y + 1)
    for n in range(2, max_y + 1):
        out[n] = (n - 1) * t ** (n - 1)
    # (Obar/y)(1 + y/(1-ty)); obar_pad reaches order max_y + 1
    shift = [obar_pad[n + 1] for n in range(max_y + 1)]
    extra = [mpq(0)] * (max_y + 1)
    p = mpq(1)
    for n in range(1, max_y + 1):
        extra[n] = p
        p *= t
    prod = _series_product(shift, extra, max_y)
    for n in range(max_y + 1):
        out[n] += shift[n] + prod[n]
    return out


def map_count_series(t, max_edges, table=None) -> Series:
    """M(t, z): corner-rooted planar maps, z marking corners.

    Solved as the enriched-tree fixed point zM = zV(t, zM) with the generic
    contraction iteration; intended for modest orders.
    """
    from .series import fixed_point_y, monomial
    t = mpq(t)
    if table is None or table["V"].max_y < 2 * max_edges:
        table = build_map_chain(t, max_edges + 1, with_v_order=2 * max_edges + 2)
    v = table["V"]
    n_z = 2 * max_edges + 1
    vv = Series(0, n_z, {k: c for k, c in v.items()}, Convention.PLAIN, t)
    z = monomial(0, n_z, 0, 1, convention=Convention.PLAIN, x_value=t)

    def rhs(wser):
        return vv.substitute_y(wser).mul(z)

    w = fixed_point_y(rhs, 0, n_z, Convention.PLAIN, x_value=t)
    m = Series(0, n_z - 1, {(0, b - 1): c for (_, b), c in w.items()},
               Convention.PLAIN, t)
    return m


def build_graph_chain(max_x, max_y=None, bivariate_cg=False) -> GrammarTable:
    """Graph-side chain with symbolic x (vertices) up to max_x.

    max_y defaults to 3*max_x + 2, which is exact for planar classes.  The
    table holds bivariate N, K, H, S, P, F01, F01bar, B and the univariate
    slices B1 = B(x,1), Bp = dB/dx(x,1), W = SET(Bp), Cdot = x dC/dx(x,1),
    C1 = C(x,1), G1 = G(x,1).  With ``bivariate_cg`` (small truncations
    only) it also builds bivariate C and G through the block fixed point.
    """
    if max_y is None:
        max_y = 3 * max_x + 2
    ring = PolyRing(max_x)
    table = GrammarTable(None, max_x, max_y)
    sol = _graph_network_lists(ring, ring.monomial(1), max_y)
    N = sol["N"]

    def mk(lists):
        coeffs = {(a, b): c for b, sl in enumerate(lists)
                  for a, c in enumerate(sl) if c != 0}
        return Series(max_x, max_y, coeffs, Convention.LABELLED_X)

    table.series["N"] = mk(N)
    table.series["H"] = mk(sol["H"])
    table.series["S"] = mk(sol["S"])
    # P = N - S - H
    table.series["P"] = table["N"].sub(table["S"]).sub(table["H"])
    # K = N/(1+xN)
    x1 = ring.monomial(1)
    K = _new(ring, max_y)
    for n in range(1, max_y + 1):
        s = N[n]
        for i in range(1, n):
            s = ring.sub(s, ring.mul(x1, ring.mul(K[i], N[n - i])))
        K[n] = s
    table.series["K"] = mk(K)
    # B: dB/dy = (x^2/2) (N+1)/(1+y), no y^0 slice
    c_over = _new(ring, max_y)
    c_over[0] = ring.one()
    for n in range(1, max_y + 1):
        c_over[n] = ring.sub(N[n], c_over[n - 1])
    x2half = ring.scale(ring.monomial(2), mpq(1, 2))
    B = _new(ring, max_y)
    for n in range(1, max_y + 1):
        B[n] = ring.scale(ring.mul(x2half, c_over[n - 1]), mpq(1, n))
    table.series["B"] = mk(B)
    # Whitney pair; the graph-side EGF coefficients coincide numerically with
    # the map-side plain ones (labelled networks have all a! labellings)
    f01bar = build_f01_bar_xy(max_x, max_y)
    table.series["F01bar"] = Series(max_x, max_y,
                                    dict(f01bar.items()),
                                    Convention.LABELLED_X)
    table.series["F01"] = table.series["F01bar"].scale(mpq(1, 2))
    # univariate block chain at y = 1
    b1 = [sum((B[n][a] for n in range(max_y + 1)), mpq(0))
          for a in range(max_x + 1)]
    B1 = Series(max_x, 0, {(a, 0): c for a, c in enumerate(b1) if c != 0},
                Convention.LABELLED_X)
    table.series["B1"] = B1
    Bp = B1.derive_x()
    table.series["Bp"] = Bp
    table.series["W"] = Bp.set()
    cdot = _block_fixed_point(Bp, max_x)
    table.series["Cdot"] = cdot
    C1 = Series(max_x, 0,
                {(a, 0): cdot.coeff(a, 0) / a for a in range(1, max_x + 1)
                 if cdot.coeff(a, 0) != 0},
                Convention.LABELLED_X)
    table.series["C1"] = C1
    table.series["G1"] = C1.set()
    if bivariate_cg:
        table.series["C"], table.series["G"] = _block_chain_xy(
            table["B"], max_x, max_y)
    table.note(f"graph chain built at max_x={max_x}, max_y={max_y}")
    return table


def _block_fixed_point(bp: Series, max_x) -> Series:
    """Cdot = x SET(Bp(Cdot)) order-by-order in x (univariate, y = 1)."""
    from .series import fixed_point_y, x_atom
    x = x_atom(max_x, 0, Convention.LABELLED_X)

    def rhs(c):
        return x.mul(bp.substitute_x(c).set())

    return fixed_point_y(rhs, max_x, 0, Convention.LABELLED_X)


def _block_chain_xy(b_xy: Series, max_x, max_y):
    """Bivariate block decomposition: x dC/dx = x SET(dB/dx(x dC/dx, y))."""
    from .series import fixed_point_y, x_atom
    bp = b_xy.derive_x()
    x = x_atom(max_x, max_y, Convention.LABELLED_X)

    def rhs(c):
        return x.mul(bp.substitute_x(c).set())

    cdot = fixed_point_y(rhs, max_x, max_y, Convention.LABELLED_X)
    c = Series(max_x, max_y,
               {(a, b): v / a for (a, b), v in cdot.items() if a >= 1},
               Convention.LABELLED_X)
    return c, c.set()


def build_graph_networks_at(t, max_y) -> GrammarTable:
    """Univariate graph-side network series at vertex weight t: R, J, I*, O, L,
    plus N and K, all series in the edge variable y."""
    t = mpq(t)
    ring = ScalarRing()
    table = GrammarTable(t, 0, max_y)
    parts = _r_graph_list(t, max_y)
    mk = lambda lst: from_y_coeffs(lst[:max_y + 1], max_y,
                                   Convention.PLAIN, t)
    for key in ("R", "J", "Istar", "O", "L"):
        table.series[key] = mk(parts[key])
    sol = _graph_network_lists(ring, t, max_y)
    table.series["N"] = mk(sol["N"])
    K = _new(ring, max_y)
    for n in range(1, max_y + 1):
        s = sol["N"][n]
        for i in range(1, n):
            s -= t * K[i] * sol["N"][n - i]
        K[n] = s
    table.series["K"] = mk(K)
    table.note(f"graph networks built at t={t}, max_y={max_y}")
    return table


# ---------------------------------------------------------------------------
# weight sequences and offspring laws
# ---------------------------------------------------------------------------

def weight_sequence(class_id: str, t, max_k: int, table=None) -> WeightSequence:
    """omega_k for the simply generated tree of a decomposition level.

    M:    omega_k = [z^k] V(t, z)          (corners of non-separable maps)
    Kbar: omega_k = [y^k] Rbar(t, y)
    K:    omega_k = [y^k] R(t, y)
    P:    omega_k = [x^k] SET(dB/dx(x,1))  (bundles of 2-connected graphs)
    """
    t = mpq(t)
    if class_id == "M":
        if table is None:
            table = build_map_chain(t, max(1, (max_k - 2) // 2 + 1),
                                    with_v_order=max_k)
        v = table["V"]
        w = [v.coeff(0, k) for k in range(max_k + 1)]
        return WeightSequence(w, source="M", t=t)
    if class_id == "Kbar":
        if table is None:
            rb = _rbar_list(t, max_k)
        else:
            rb = [table["Rbar"].coeff(0, k) for k in range(max_k + 1)]
        return WeightSequence(rb[:max_k + 1], source="Kbar", t=t)
    if class_id == "K":
        parts = _r_graph_list(t, max_k) if table is None else None
        r = parts["R"] if table is None else \
            [table["R"].coeff(0, k) for k in range(max_k + 1)]
        return WeightSequence(r[:max_k + 1], source="K", t=t)
    if class_id == "P":
        if table is None:
            raise GrammarError("P weights need a built graph chain table")
        w = table["W"]
        if max_k > w.max_x - 1:
            raise GrammarError(
                f"P weights available only to k={w.max_x - 1} at this "
                f"truncation (dB/dx loses one order)")
        return WeightSequence([w.coeff(k, 0) for k in range(max_k + 1)],
                              source="P", t=t)
    raise GrammarError(f"unknown weight-sequence class {class_id!r}")


class OffspringLaw:
    """Tilted offspring distribution p_k = omega_k tau^k / phi(tau).

    Exact on the stored support; the mass lost to truncation is reported in
    ``tail_mass`` (a fitted power-tail bound for the heavy-tailed planar
    laws, zero for genuinely finite toy laws).
    """

    def __init__(self, weights, tau, source="", tail_exponent=None):
        self.weights = [mpq(w) for w in weights]
        self.tau = mpq(tau)
        self.source = source
        powers = []
        p = mpq(1)
        for w in self.weights:
            powers.append(w * p)
            p *= self.tau
        self.phi_tau = sum(powers, mpq(0))
        if self.phi_tau <= 0:
            raise GrammarError("phi(tau) must be positive")
        self.probs = [x / self.phi_tau for x in powers]
        self.mean = sum((k * p for k, p in enumerate(self.probs)), mpq(0))
        self.tail_mass = 0.0
        if tail_exponent is not None:
            self.tail_mass = _fitted_tail_mass(powers, self.phi_tau,
                                               tail_exponent)
        support = [k for k, w in enumerate(self.weights) if w > 0 and k > 0]
        from math import gcd
        self.lattice = 0
        for k in support:
            self.lattice = gcd(self.lattice, k)

    @property
    def support_max(self):
        return len(self.weights) - 1

    def prob_float(self):
        import numpy as np
        return np.array([float(p) for p in self.probs])

    def __repr__(self):
        return (f"OffspringLaw({self.source}, support<={self.support_max}, "
                f"mean={float(self.mean):.6f}, tail<={self.tail_mass:.2e})")


def _fitted_tail_mass(powers, phi, exponent):
    """Bound sum_{k>K} p_k by fitting c k^-exponent to the last terms."""
    import mpmath
    kk = len(powers) - 1
    tail_window = [float(powers[k]) * k ** exponent
                   for k in range(max(2, kk - 20), kk + 1) if powers[k] > 0]
    if not tail_window:
        return 0.0
    c = 2.0 * max(tail_window)  # safety factor over the fitted amplitude
    zeta_tail = mpmath.zeta(exponent, kk + 1)
    return float(c * zeta_tail / float(phi))


def offspring_law(ws: WeightSequence, tau, tail_exponent=None,
                  tail_tol=None) -> OffspringLaw:
    """Build the tilted law xi with E[z^xi] = phi(tau z)/phi(tau)."""
    law = OffspringLaw(ws.weights, tau, source=ws.source,
                       tail_exponent=tail_exponent)
    if tail_tol is not None and law.tail_mass > tail_tol:
        need = int(len(ws.weights) * (law.tail_mass / tail_tol) ** (2 / 3)) + 1
        raise GrammarError(
            f"truncation tail mass {law.tail_mass:.2e} above tolerance "
            f"{tail_tol:.2e}; extend the weight sequence to ~{need} terms")
    return law


def power_tail_extension(ws: WeightSequence, new_len: int,
                         exponent=2.5) -> WeightSequence:
    """Extend a weight sequence by its fitted power asymptotic.

    The head stays exact; entries beyond the stored support are filled with
    c rho^-k k^-exponent, where rho and c are fitted to the last exact
    coefficients.  Provenance of everything downstream is 'fitted'.
    """
    import math
    rho = fitted_radius(ws)
    k = len(ws.weights) - 1
    while ws.weights[k] == 0:
        k -= 1
    # work in logs; the raw values overflow floats quickly
    log_c = _log_of_rational(ws.weights[k]) + k * math.log(rho) \
        + exponent * math.log(k)
    ext = list(ws.weights)
    log2 = math.log(2)
    for j in range(len(ws.weights), new_len + 1):
        logval = log_c - j * math.log(rho) - exponent * math.log(j)
        e2 = logval / log2
        hi = int(math.floor(e2))
        ext.append(mpq(2.0 ** (e2 - hi)) * mpq(2) ** hi)
    return WeightSequence(ext, source=ws.source + "+fitted-tail", t=ws.t)


def fitted_radius(ws: WeightSequence) -> float:
    """Radius of convergence fitted from the last coefficient ratios
    (one Richardson step removes the 1/k bias of the ratio sequence)."""
    k = len(ws.weights) - 1
    while ws.weights[k] == 0:
        k -= 1
    r1 = ws.weights[k - 1] / ws.weights[k]
    r2 = ws.weights[k - 2] / ws.weights[k - 1]
    rho = float(k * r1 - (k - 1) * r2)
    if not 0 < rho < 1:
        raise GrammarError(f"tail fit failed: implausible radius {rho}")
    return rho


def _log_of_rational(q) -> float:
    import math
    q = mpq(q)
    num, den = int(q.numerator), int(q.denominator)

    def logint(n):
        bits = n.bit_length()
        if bits <= 900:
            return math.log(n)
        top = n >> (bits - 64)
        return math.log(top) + (bits - 64) * math.log(2)

    return logint(num) - logint(den)
