import mpmath
import pytest
from gmpy2 import mpq
from mpmath import mpf

from planarlab.constants import (ConstantsError, alpha0_report, f01bar_value,
                                 graph_constants, map_constants,
                                 q1_vertices_per_edge, r_graph_value,
                                 series_nu_estimate, series_value_estimate,
                                 solve_u0)


def test_u0_examples():
    u1 = solve_u0(1)
    assert abs(u1 - 1) < mpf("1e-40")
    f = lambda u: (1 + u) * (3 * u - 1) ** 3 / (16 * u)
    assert abs(f(solve_u0(mpq(7, 3))) - mpf(7) / 3) < mpf("1e-30")
    assert solve_u0(2) > u1
    # t -> 0+ pushes u0 to 1/3
    assert abs(solve_u0(mpq(1, 10 ** 9)) - mpf(1) / 3) < mpf("1e-3")


def test_map_constants_exact_values_at_t1():
    rep = map_constants(1)
    expect = {
        "rho_F": mpf(1) / 4, "E0": mpf(16) / 27, "nu_Kbar": mpf(7) / 12,
        "rho_R": mpf(1) / 5, "Rbar_at_rhoR": mpf(27) / 20,
        "rho_Kbar": mpf(4) / 27, "nu_M": mpf(2) / 3,
        "V_at_rhoV": mpf(4) / 3,
    }
    for name, val in expect.items():
        assert abs(rep[name] - val) < mpf("1e-40"), name
    assert abs(rep["rho_M"] - 1 / mpmath.sqrt(12)) < mpf("1e-40")


def test_subcriticality_on_grid():
    for t in ("1/10", "1/2", "1", "2", "10"):
        rep = map_constants(mpq(t))
        for name in ("nu_Kbar", "nu_M", "nu_K"):
            assert 0 < rep[name] < 1, (t, name)
        assert rep["u0"] > mpf(1) / 3


def test_u0_monotone_on_grid():
    vals = [solve_u0(mpq(t)) for t in ("1/10", "1/2", "1", "2", "10")]
    assert all(a < b for a, b in zip(vals, vals[1:]))


def test_nu_limits_at_one_third():
    rep = map_constants(mpq(1, 10 ** 9))
    assert rep["nu_Kbar"] > mpf("0.99")
    assert rep["nu_M"] > mpf("0.99")


def test_closed_forms_vs_series(map_chain_300):
    rep = map_constants(1)
    rb = [map_chain_300["Rbar"].coeff(0, k) for k in range(241)]
    est, err = series_nu_estimate(rb, rep["rho_R"])
    assert abs(float(est - rep["nu_Kbar"])) < 1e-3
    w = [map_chain_300["V"].coeff(0, 2 * m) for m in range(240)]
    est2, _ = series_nu_estimate(w, rep["rho_Kbar"])
    assert abs(float(2 * est2 - rep["nu_M"])) < 1e-3


def test_gap_shrinks_with_truncation(map_chain_300):
    rep = map_constants(1)
    rb = [map_chain_300["Rbar"].coeff(0, k) for k in range(301)]
    e1, _ = series_nu_estimate(rb[:121], rep["rho_R"])
    e2, _ = series_nu_estimate(rb[:241], rep["rho_R"])
    assert abs(float(e2 - rep["nu_Kbar"])) < abs(float(e1 - rep["nu_Kbar"]))


def test_radius_ratio_tests(map_chain_300):
    rep = map_constants(1)
    kb = map_chain_300["Kbar"]
    r = kb.coeff(0, 299) / kb.coeff(0, 300)
    assert abs(float(r) - float(rep["rho_Kbar"])) / float(rep["rho_Kbar"]) < 1e-2
    from planarlab.oracles import tutte_count
    # coefficient ratios of M carry a 5/(2n) bias; one Richardson step
    r19 = tutte_count(18) / tutte_count(19)
    r20 = tutte_count(19) / tutte_count(20)
    rich = 20 * r20 - 19 * r19
    assert abs(rich - float(rep["rho_M"]) ** 2) / float(rep["rho_M"]) ** 2 < 1e-2


def test_nu_c_bound_value():
    rep = graph_constants()
    assert abs(rep["nu_C_bound"] - mpf("0.041302")) < 1e-4
    assert rep["nu_C_bound"] < 1


def test_graph_pipeline_small_chain():
    from planarlab.grammar import build_graph_chain
    table = build_graph_chain(24)
    rep = graph_constants(table)
    # D0/D2 consistency at the documented 1e-2 tolerance
    assert abs(rep["D0_series"] - rep["D0"]) < 1e-2
    assert abs(rep["D2_series"] - rep["D2"]) < 2e-2
    assert rep["nu_C"] < rep["nu_C_bound"]
    assert rep["rho_C"] < rep["rho_B"]
    assert float(rep["c_G"]) > 0


def test_closed_form_network_series_value():
    from planarlab.grammar import build_graph_networks_at
    gn = build_graph_networks_at(1, 60)
    y = mpf("0.1")
    ser = mpmath.fsum(
        mpf(int(gn["R"].coeff(0, k).numerator))
        / int(gn["R"].coeff(0, k).denominator) * y ** k for k in range(61))
    assert abs(ser - r_graph_value(1, y)) < mpf("1e-6")
    # first-order Taylor: slope of log R at 0 equals [y^1]R/[y^0]R, which is
    # zero at t = 1 (one-edge graph networks are series, not in R)
    eps = mpf("1e-8")
    slope = mpmath.log(r_graph_value(1, eps)) / eps
    assert abs(slope - float(gn["R"].coeff(0, 1))) < 1e-6


def test_alpha0_report():
    rep = graph_constants()
    alpha0_report(report=rep)
    assert rep.provenance["alpha0"] == "paper"
    assert abs(rep["alpha0_derived"] - mpf("2.17")) < 0.02
    assert abs(rep["q1_at_rhoB"] - mpf("0.442")) < 2e-3


def test_report_json_provenance():
    rep = map_constants(1)
    obj = rep.to_json_obj()
    assert obj["u0"]["provenance"] == "derived"
    assert "error" in obj["nu_M"]
