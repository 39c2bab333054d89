"""Command-line entry point.

Subcommands: count, constants, oracle, grammar-dump, sample, experiment and
verify.  Results go to stdout or JSON files with a reproducibility manifest
sidecar; exit codes are 0 (success), 2 (a validation check failed) and
3 (infeasible parameters).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from gmpy2 import mpq


EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_INFEASIBLE = 3


def _rat(s):
    try:
        return mpq(s)
    except Exception as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {s!r}") from exc


def _emit(obj, out=None, manifest=None):
    text = json.dumps(obj, indent=1, default=str)
    if out:
        Path(out).write_text(text)
        if manifest is not None:
            manifest.write(out)
        print(f"wrote {out}")
    else:
        print(text)


def cmd_count(args):
    from . import cache, grammar
    cls, t = args.cls, args.t
    rows = []
    if cls == "M":
        table = cache.cached_map_chain(t, args.max + 2)
        m = grammar.map_count_series(t, args.max, table=table)
        rows = [(n, str(m.coeff(0, 2 * n))) for n in range(args.max + 1)]
    elif cls in ("V", "D", "Kbar", "Rbar", "Obar", "Jbar", "Istar_bar"):
        table = cache.cached_map_chain(t, args.max)
        ser = table[cls]
        if cls == "V":
            rows = [(n, str(ser.coeff(0, 2 * n))) for n in range(args.max // 2 + 1)]
        else:
            rows = [(n, str(ser.coeff(0, n))) for n in range(args.max + 1)]
    elif cls in ("B", "C", "G"):
        if t != 1:
            print("graph-side counts are reported at t = 1", file=sys.stderr)
        lists = cache.cached_graph_summaries(max(args.max + 2, 10))
        key = {"B": "B1", "C": "C1", "G": "G1"}[cls]
        import math
        top = min(args.max, len(lists[key]) - 1)
        rows = [(n, str(mpq(lists[key][n]) * math.factorial(n)))
                for n in range(top + 1)]
    elif cls in ("N", "K", "R", "O", "Istar", "J"):
        from . import grammar as g2
        table = g2.build_graph_networks_at(t, args.max)
        ser = table[cls]
        rows = [(n, str(ser.coeff(0, n))) for n in range(args.max + 1)]
    else:
        print(f"unknown class {args.cls!r}", file=sys.stderr)
        return EXIT_INFEASIBLE
    if args.n is not None:
        rows = [r for r in rows if r[0] == args.n]
        if not rows:
            print(f"order {args.n} beyond the computed table", file=sys.stderr)
            return EXIT_INFEASIBLE
    if args.json:
        _emit({"class": cls, "t": str(t), "counts": rows}, args.out)
    else:
        for n, c in rows:
            print(f"{n}\t{c}")
    return EXIT_OK


def cmd_constants(args):
    from . import cache, constants
    if args.grid:
        out = {}
        for t in ("1/10", "1/2", "1", "2", "10"):
            r = constants.map_constants(mpq(t))
            out[t] = r.to_json_obj(digits=30)
        _emit(out, args.out)
        return EXIT_OK
    rep = constants.map_constants(args.t)
    if args.gn:
        from . import grammar
        table = grammar.build_graph_chain(args.gn_order)
        constants.graph_constants(table, report=rep)
    else:
        constants.graph_constants(None, report=rep)
    constants.alpha0_report(report=rep)
    ok = True
    if args.check_series:
        ok = _check_series(rep, args.t)
    _emit(rep.to_json_obj(), args.out)
    return EXIT_OK if ok else EXIT_VALIDATION


def _check_series(rep, t, order=400, tol=1e-3):
    import mpmath
    from . import cache, constants
    table = cache.cached_map_chain(t, order)
    rb = [table["Rbar"].coeff(0, k) for k in range(order + 1)]
    est, _ = constants.series_nu_estimate(rb, rep["rho_R"])
    ok = abs(float(est - rep["nu_Kbar"])) < tol
    w = [table["V"].coeff(0, 2 * m) for m in range(order)]
    est2, _ = constants.series_nu_estimate(w, rep["rho_Kbar"])
    ok = ok and abs(float(2 * est2 - rep["nu_M"])) < tol
    print(f"series cross-check: nu_Kbar delta "
          f"{abs(float(est - rep['nu_Kbar'])):.2e}, nu_M delta "
          f"{abs(float(2 * est2 - rep['nu_M'])):.2e} (tol {tol})",
          file=sys.stderr)
    return ok


def cmd_oracle(args):
    from . import cache, oracles
    if args.what == "maps":
        catalog = cache.cached_map_catalog(args.edges)
        out = {str(n): {"count": len(maps),
                        "tutte": oracles.tutte_count(n),
                        "nonseparable": sum(m.is_nonseparable() for m in maps),
                        "simple": sum(m.is_simple() for m in maps)}
               for n, maps in catalog.items()}
        _emit(out, args.out)
        return EXIT_OK
    if args.what == "graphs":
        data = oracles.enumerate_labelled_planar_graphs(args.n)
        _emit({str(n): {cls: {str(m): c for m, c in v.items()}
                        for cls, v in d.items()} for n, d in data.items()},
              args.out)
        return EXIT_OK
    if args.what == "walk":
        from . import grammar, cache as c2
        table = c2.cached_map_chain(args.t, args.n + 10)
        ws = grammar.weight_sequence(args.law, args.t, args.n + 10, table=table)
        tau = mpq(1, 5) if args.law == "Kbar" else mpq(1, 4)
        law = grammar.offspring_law(ws, tau)
        p = oracles.walk_dp(law, args.n, args.m)
        _emit({"law": args.law, "n": args.n, "m": args.m,
               "P": str(p), "P_float": float(p)}, args.out)
        return EXIT_OK
    return EXIT_INFEASIBLE


def cmd_grammar_dump(args):
    from . import cache, grammar
    if args.cls in ("u", "v"):
        from .series import solve_uv_system
        u, v = solve_uv_system(args.max_x, args.max_y,
                               x_value=None if args.max_x else args.t)
        ser = u if args.cls == "u" else v
    elif args.cls in ("D", "Kbar", "Rbar", "Obar", "Jbar", "Istar_bar", "V"):
        table = cache.cached_map_chain(args.t, args.max_y)
        ser = table[args.cls]
    elif args.cls == "F01bar":
        ser = grammar.build_f01_bar_xy(args.max_x, args.max_y) if args.max_x \
            else grammar.build_f01_bar(args.t, args.max_y)
    elif args.cls in ("N", "K", "R", "O", "Istar", "J", "L"):
        ser = grammar.build_graph_networks_at(args.t, args.max_y)[args.cls]
    else:
        print(f"cannot dump class {args.cls!r}", file=sys.stderr)
        return EXIT_INFEASIBLE
    ser.dump_json(args.out, args.cls, t=args.t)
    print(f"wrote {args.out}")
    return EXIT_OK


def cmd_sample(args):
    from . import cache, grammar, sampler
    from .cache import RunManifest
    manifest = RunManifest(sys.argv, seed=args.seed)
    table = cache.cached_map_chain(args.t, max(40, args.edges + 20))
    ws = grammar.weight_sequence("M", args.t, 2 * args.edges, table=table)
    law = grammar.offspring_law(ws, mpq(1, 4))
    catalog = sampler.nonseparable_catalog(
        args.t, map_catalog=cache.cached_map_catalog(min(4, max(1, args.edges))))
    try:
        maps = sampler.sample_maps(args.t, args.edges, args.count, args.seed,
                                   catalog, law)
    except sampler.DecorationCapError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    if args.emit == "structures":
        out = [{"darts": m.n_darts, "sigma": list(m.sigma),
                "alpha": list(m.alpha), "root": m.root} for m in maps]
    elif args.emit == "census":
        out = {"census": {str(k): v for k, v in
                          sampler.sampled_census(maps, args.radius).items()}}
    else:
        out = [{"core_edges": sampler.extract_core_structural(m).core_size,
                "edges": m.n_edges} for m in maps]
    _emit(out, args.out, manifest)
    return EXIT_OK


def cmd_experiment(args):
    from . import experiments
    from .cache import RunManifest
    manifest = RunManifest(sys.argv, seed=args.seed)
    name = args.name
    ok = True
    if name == "llt-vcore":
        res = experiments.llt_vcore_experiment(args.t, args.edges, args.count,
                                               args.seed)
        ok = res["ks"] < args.tol if args.tol else True
    elif name == "census":
        res = experiments.census_experiment(mc_samples=args.count,
                                            seed=args.seed)
        ok = res["strictly_decreasing"]
    elif name == "identity":
        res = experiments.identity_experiment(args.law, t=args.t)
        ok = res["all_equal"]
    elif name == "bigjump":
        res = experiments.bigjump_experiment(args.t)
        ok = res["shrinking"] and all(d < 0.1 for d in res["deviations"][-1:])
    elif name == "gibbs":
        res = experiments.gibbs_experiment(args.t)
        ok = res["decreasing"] and res["reports"][-1]["tv"] < 0.05
    elif name == "alpha0":
        res = experiments.alpha0_experiment(count=args.count, seed=args.seed)
        ok = abs(res["alpha0_estimate"] - res["alpha0_paper"]["value"]) < 0.15
    elif name == "nested-cores":
        res = experiments.nested_core_experiment(args.t, args.edges,
                                                 args.count, args.seed)
        ok = res["monotone_ok"]
    else:
        print(f"unknown experiment {name!r}", file=sys.stderr)
        return EXIT_INFEASIBLE
    res["passed"] = bool(ok)
    _emit(res, args.out, manifest)
    return EXIT_OK if ok else EXIT_VALIDATION


def main(argv=None):
    ap = argparse.ArgumentParser(
        prog="planarlab",
        description="exact grammar, constants, samplers and statistical "
                    "checks for random planar maps and graphs")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("count", help="coefficient tables of a counting series")
    p.add_argument("--class", dest="cls", required=True)
    p.add_argument("--t", type=_rat, default=mpq(1))
    p.add_argument("--max", type=int, default=8)
    p.add_argument("--n", type=int, default=None,
                   help="print a single order instead of the whole table")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("constants", help="closed-form constants report")
    p.add_argument("--t", type=_rat, default=mpq(1))
    p.add_argument("--gn", action="store_true",
                   help="include the series-based Gimenez-Noy pipeline")
    p.add_argument("--gn-order", type=int, default=40)
    p.add_argument("--check-series", action="store_true")
    p.add_argument("--grid", "--all-t-grid", dest="grid", action="store_true")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("oracle", help="brute-force enumeration and walk DP")
    p.add_argument("what", choices=["maps", "graphs", "walk"])
    p.add_argument("--edges", type=int, default=4)
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--m", type=int, default=4)
    p.add_argument("--law", default="Kbar")
    p.add_argument("--t", type=_rat, default=mpq(1))
    p.add_argument("--out")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("grammar-dump", help="write a series coefficient cache")
    p.add_argument("--class", dest="cls", required=True)
    p.add_argument("--t", type=_rat, default=mpq(1))
    p.add_argument("--max-x", type=int, default=0)
    p.add_argument("--max-y", type=int, default=40)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_grammar_dump)

    p = sub.add_parser("sample", help="sample rooted planar maps")
    p.add_argument("what", choices=["map"])
    p.add_argument("--t", type=_rat, default=mpq(1))
    p.add_argument("--edges", type=int, default=3)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--radius", type=int, default=1)
    p.add_argument("--emit", choices=["cores", "census", "structures"],
                   default="cores")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("experiment", help="run a verification experiment")
    p.add_argument("name", choices=["llt-vcore", "census", "identity",
                                    "bigjump", "gibbs", "alpha0",
                                    "nested-cores"])
    p.add_argument("--t", type=_rat, default=mpq(1))
    p.add_argument("--edges", type=int, default=500)
    p.add_argument("--count", type=int, default=500)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--law", default="toy")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("verify", help="alias of experiment with pass/fail exit")
    p.add_argument("name", choices=["identity", "bigjump", "llt", "gibbs"])
    p.add_argument("--t", type=_rat, default=mpq(1))
    p.add_argument("--edges", type=int, default=500)
    p.add_argument("--count", type=int, default=500)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--law", default="toy")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_experiment,
                   name_map={"llt": "llt-vcore"})

    args = ap.parse_args(argv)
    if getattr(args, "name_map", None):
        args.name = args.name_map.get(args.name, args.name)
    try:
        return args.func(args)
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
