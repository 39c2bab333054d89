"""Disk cache for grammar builds and run manifests.

Layout: <root>/<class>/<t>/<profile>.json with a content checksum; the root
comes from $PLANARLAB_CACHE (default ~/.cache/planarlab).  Grammar builds
dominate cold-start cost, so the univariate map chain and the one-dimensional
extracts of the bivariate graph chain are cached here.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from pathlib import Path

from gmpy2 import mpq

from . import grammar
from .series import Convention, Series, from_y_coeffs


def cache_root() -> Path:
    root = os.environ.get("PLANARLAB_CACHE")
    if root:
        return Path(root)
    return Path.home() / ".cache" / "planarlab"


def _q_str(q):
    q = mpq(q)
    return f"{q.numerator}/{q.denominator}"


def _q_list(lst):
    return [_q_str(c) for c in lst]


def _entry_path(class_id: str, t, profile: str) -> Path:
    tpart = _q_str(t).replace("/", "_") if t is not None else "sym"
    return cache_root() / class_id / tpart / f"{profile}.json"


def _checksum(payload: dict) -> str:
    blob = json.dumps(payload, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()


def store(class_id, t, profile, payload: dict):
    path = _entry_path(class_id, t, profile)
    path.parent.mkdir(parents=True, exist_ok=True)
    obj = {"payload": payload, "checksum": _checksum(payload)}
    with open(path, "w") as fh:
        json.dump(obj, fh)
    return path


def load(class_id, t, profile):
    path = _entry_path(class_id, t, profile)
    if not path.exists():
        return None
    with open(path) as fh:
        obj = json.load(fh)
    if _checksum(obj["payload"]) != obj.get("checksum"):
        raise IOError(f"cache corruption detected at {path}")
    return obj["payload"]


_MEM = {}


def cached_map_chain(t, max_y) -> grammar.GrammarTable:
    """Map chain at weight t via the disk cache (D, Kbar, Rbar lists)."""
    t = mpq(t)
    key = ("map", t, max_y)
    if key in _MEM:
        return _MEM[key]
    payload = load("map_chain", t, f"y{max_y}")
    if payload is None:
        table = grammar.build_map_chain(t, max_y)
        payload = {
            "max_y": max_y,
            "D": _q_list([table["D"].coeff(0, k) for k in range(max_y + 1)]),
            "Kbar": _q_list([table["Kbar"].coeff(0, k) for k in range(max_y + 1)]),
            "Rbar": _q_list([table["Rbar"].coeff(0, k) for k in range(max_y + 1)]),
            "Jbar": _q_list([table["Jbar"].coeff(0, k) for k in range(max_y + 1)]),
            "Istar_bar": _q_list([table["Istar_bar"].coeff(0, k)
                                  for k in range(max_y + 1)]),
            "Obar": _q_list([table["Obar"].coeff(0, k) for k in range(max_y + 1)]),
        }
        store("map_chain", t, f"y{max_y}", payload)
        _MEM[key] = table
        return table
    table = grammar.GrammarTable(t, 0, max_y)
    for name in ("D", "Kbar", "Rbar", "Jbar", "Istar_bar", "Obar"):
        coeffs = [mpq(s) for s in payload[name]]
        table.series[name] = from_y_coeffs(coeffs, max_y, Convention.PLAIN, t)
    d = table["D"]
    v_order = 2 * max_y + 2
    vc = {(0, 0): mpq(1), (0, 2): 1 + t}
    for m in range(2, max_y + 2):
        if m - 1 <= max_y:
            c = t * d.coeff(0, m - 1)
            if c != 0:
                vc[(0, 2 * m)] = c
    table.series["V"] = Series(0, v_order, vc, Convention.PLAIN, x_value=t)
    table.note("loaded from cache")
    _MEM[key] = table
    return table


def cached_graph_summaries(max_x) -> dict:
    """Univariate extracts of the bivariate graph chain at truncation max_x.

    Returns exact coefficient lists: B1 (B(x,1)), Bp (dB/dx(x,1)),
    W (SET(Bp)), C1, G1 and N1 (N(x,1)).
    """
    key = ("graphsum", max_x)
    if key in _MEM:
        return _MEM[key]
    payload = load("graph_summaries", None, f"x{max_x}")
    if payload is None:
        table = grammar.build_graph_chain(max_x)
        # dB/dx and everything built on it are only valid one order short
        lists = {
            "B1": [table["B1"].coeff(a, 0) for a in range(max_x + 1)],
            "Bp": [table["Bp"].coeff(a, 0) for a in range(max_x)],
            "W": [table["W"].coeff(a, 0) for a in range(max_x)],
            "C1": [table["C1"].coeff(a, 0) for a in range(max_x)],
            "G1": [table["G1"].coeff(a, 0) for a in range(max_x)],
            "N1": [table["N"].x_slice_sum(a) for a in range(max_x + 1)],
        }
        payload = {k: _q_list(v) for k, v in lists.items()}
        payload["max_x"] = max_x
        store("graph_summaries", None, f"x{max_x}", payload)
        _MEM[key] = lists
        return lists
    lists = {k: [mpq(s) for s in payload[k]]
             for k in ("B1", "Bp", "W", "C1", "G1", "N1")}
    _MEM[key] = lists
    return lists


class RunManifest:
    """Reproducibility sidecar for CLI results."""

    def __init__(self, argv, seed=None, profile=None, cache_keys=()):
        self.argv = list(argv)
        self.seed = seed
        self.profile = profile
        self.cache_keys = list(cache_keys)
        self.t0 = time.time()

    def finish(self):
        from . import __version__
        return {
            "command": self.argv,
            "seed": self.seed,
            "profile": self.profile,
            "cache_keys": self.cache_keys,
            "version": __version__,
            "wall_time_s": round(time.time() - self.t0, 3),
        }

    def write(self, result_path):
        path = Path(str(result_path) + ".manifest.json")
        with open(path, "w") as fh:
            json.dump(self.finish(), fh, indent=1)
        return path


def cached_map_catalog(max_edges: int):
    """Exhaustive rooted-map catalog via the disk cache (canonical forms)."""
    from .oracles import PlanarMap, enumerate_rooted_planar_maps
    key = ("mapcat", max_edges)
    if key in _MEM:
        return _MEM[key]
    payload = load("map_catalog", None, f"e{max_edges}")
    if payload is None:
        catalog = enumerate_rooted_planar_maps(max_edges)
        payload = {str(n): [[list(m.sigma), list(m.alpha)] for m in maps]
                   for n, maps in catalog.items()}
        store("map_catalog", None, f"e{max_edges}", payload)
    catalog = {}
    for n_str, entries in payload.items():
        n = int(n_str)
        catalog[n] = [PlanarMap(sig, alf, None if n == 0 else 0)
                      for sig, alf in entries]
    _MEM[key] = catalog
    return catalog


def cached_f01bar_xy(max_x: int, max_y: int):
    """Bivariate three-connected network series via the disk cache."""
    key = ("f01xy", max_x, max_y)
    if key in _MEM:
        return _MEM[key]
    payload = load("f01bar_xy", None, f"x{max_x}y{max_y}")
    if payload is None:
        ser = grammar.build_f01_bar_xy(max_x, max_y)
        payload = ser.to_cache_obj("F01bar")
        store("f01bar_xy", None, f"x{max_x}y{max_y}", payload)
        _MEM[key] = ser
        return ser
    ser = Series.from_cache_obj(payload)
    _MEM[key] = ser
    return ser
