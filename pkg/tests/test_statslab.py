import math

import numpy as np
import pytest
from gmpy2 import mpq

from planarlab.grammar import offspring_law
from planarlab.series import WeightSequence
from planarlab.statslab import (EmpiricalHistogram, bigjump_ratio,
                                check_tree_identity, exact_fragment_law,
                                gibbs_fragment_check, ks_distance,
                                limit_fragment_law, llt_compare,
                                stability_check, tree_series)


def test_airy_normalization(airy):
    assert abs(airy.normalization() - 1) < 1e-3


def test_airy_laplace_roundtrip(airy):
    assert airy.mean_abs_error_laplace((0.25, 0.5, 1.0, 2.0, 4.0)) < 1e-4


def test_airy_mean_zero_and_median(airy):
    mean = np.trapezoid(airy.x * airy.h_grid, airy.x) \
        + 2 * airy.TAIL_C * airy.x[-1] ** -0.5
    assert abs(mean) < 2e-3
    assert airy.median() < 0


def test_airy_tail_monotone(airy):
    i0 = int(np.argmax(airy.h_grid))
    # on a coarse grid the density decreases monotonically past the mode
    coarse = airy.h(np.arange(airy.x[i0], 45.0, 1.0))
    assert np.all(np.diff(coarse) < 0)
    assert airy.h(60.0) < 1e-4


def test_airy_inverse_cdf(airy):
    u = np.linspace(0.01, 0.99, 50)
    x = airy.inverse_cdf(u)
    back = airy.cdf(x) / airy.normalization()
    assert np.max(np.abs(back - u)) < 1e-3


def test_tree_series_catalan():
    z = tree_series(WeightSequence([1, 0, 1]), 11)
    # binary trees: Catalan numbers at odd sizes
    assert [int(z.coeff(0, n)) for n in (1, 3, 5, 7, 9, 11)] == \
        [1, 1, 2, 5, 14, 42]


def test_identity_exact_toy():
    ws = WeightSequence([1, 0, 1])
    for n in (1, 3, 5, 25):
        eq, lhs, rhs = check_tree_identity(ws, mpq(1), n)
        assert eq and lhs == rhs
    eq, lhs, _ = check_tree_identity(ws, mpq(1), 1)
    assert lhs == 1          # [z^1] Z = omega_0


def test_identity_exact_random_tau():
    ws = WeightSequence([2, 1, 0, 3])
    for tau in (mpq(1, 7), mpq(3, 2)):
        eq, _, _ = check_tree_identity(ws, tau, 9)
        assert eq


def test_bigjump_degenerate():
    law = offspring_law(WeightSequence([1, 10 ** 9, 0, 1]), mpq(1, 10 ** 6))
    rep = bigjump_ratio(law, 50)
    # mean is essentially 1; close to critical the regime is inapplicable
    assert rep.applicable is False or rep.ratio is not None


def test_bigjump_trend_kbar(map_chain_300):
    from planarlab.experiments import kbar_law
    devs = []
    for n in (40, 100):
        law = kbar_law(1, n + 200, table=map_chain_300)
        rep = bigjump_ratio(law, n, mean=7 / 12)
        assert rep.applicable
        devs.append(abs(rep.ratio - 1))
    assert devs[1] < devs[0]


def test_llt_compare_degenerate_raises(airy):
    with pytest.raises(ValueError):
        llt_compare([100] * 50, 1.0, 100, airy)


def test_llt_stability(airy):
    assert stability_check(airy, 1.0, 1.0, 4000, seed=4) < 0.05
    assert stability_check(airy, 2.0, 0.7, 4000, seed=5) < 0.05


def test_stable_samples_self_ks(airy):
    from planarlab.sampler import rng_for
    rng = rng_for(8, "self")
    x = airy.sample(3000, rng)
    assert ks_distance(x, airy) < 0.04


def test_gibbs_exact_law_sums_to_one(map_chain_300):
    kb = [map_chain_300["Kbar"].coeff(0, k) for k in range(81)]
    law = exact_fragment_law(kb, 1, 80, 79)
    assert sum(law) == 1
    assert all(p >= 0 for p in law)


def test_gibbs_tv_decreasing(map_chain_300):
    from planarlab.constants import map_constants
    rep = map_constants(1)
    kb = [map_chain_300["Kbar"].coeff(0, k) for k in range(161)]
    r1 = gibbs_fragment_check(kb, 1, rep["rho_Kbar"], rep["rho_R"], 60, 25)
    r2 = gibbs_fragment_check(kb, 1, rep["rho_Kbar"], rep["rho_R"], 160, 25)
    assert r2.tv < r1.tv
    assert r2.tv < 0.05
    assert r1.gibbsbound_ok and r2.gibbsbound_ok


def test_gibbs_degenerate_single_size():
    # parts can only have size one: the fragment law is deterministic and
    # both the exact and the limit laws put all mass at the same point
    kb = [mpq(0), mpq(1)]
    law = exact_fragment_law(kb, 1, 6, 5)
    assert law[5] == 1 and sum(law) == 1
    lim = limit_fragment_law(kb, 1, 0.5, 0.5, 5)
    assert all(v >= 0 for v in lim) and sum(lim) <= 1 + 1e-12


def test_histogram():
    h = EmpiricalHistogram.from_samples([1.0, 2.0, 2.5, 9.0], bins=4)
    assert h.counts.sum() == h.sample_size == 4
    assert len(list(h.rows())) == 4
