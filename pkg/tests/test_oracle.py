"""Independent verification paths: series reversion, exact reference
quantiles, and the simulation oracle."""

import math

import pytest
import scipy.stats

from cfx import cumulants, engine, oracle


def test_reversion_order1():
    fs, gs = oracle.reversion_fg(1)
    assert fs[0] == gs[0] == engine.h_formal(1)


def test_reversion_equals_ladder_tables():
    # the strongest correctness check in the package: two disjoint
    # derivations of every f_r and g_r must agree exactly
    fs, gs = oracle.reversion_fg(6)
    for r in range(1, 7):
        assert fs[r - 1] == engine.fg_formal("f", r), f"f_{r}"
        assert gs[r - 1] == engine.fg_formal("g", r), f"g_{r}"


def test_reversion_g3_spot():
    from cfx import hbasis
    from cfx.partitions import Partition
    H = hbasis.H
    _, gs = oracle.reversion_fg(3)
    table = dict(gs[2].bracket_items())
    assert table[Partition.of(2, 3)] == (H(4) - H(1) * H(3) - H(2) ** 2
                                         + H(1) ** 2 * H(2))


def test_exact_lnF_quantile():
    q = oracle.exact_lnF_quantile(24, 60, 0.95)
    assert abs(q - 0.26534844) < 1e-7
    assert abs(oracle.lnF_cdf(24, 60, q) - 0.95) < 1e-10
    ref = 0.5 * math.log(scipy.stats.f.ppf(0.95, 24, 60))
    assert abs(q - ref) < 1e-10
    # symmetric degrees: the median of the half log ratio is zero
    assert abs(oracle.exact_lnF_quantile(9, 9, 0.5)) < 1e-12
    for p in (0.05, 0.5, 0.99):
        z = oracle.exact_lnF_quantile(5, 5, p)
        assert abs(oracle.lnF_cdf(5, 5, z) - p) < 1e-10


def test_mc_determinism_and_guards():
    spec = {"model": "lnF", "n1": 6, "n2": 8}
    a = oracle.mc_cdf(spec, None, 0.5, 20_000, seed=11)
    b = oracle.mc_cdf(spec, None, 0.5, 20_000, seed=11)
    assert a == b
    c = oracle.mc_cdf(spec, None, 0.5, 20_000, seed=12)
    assert c != a
    with pytest.raises(ValueError):
        oracle.mc_cdf(spec, None, 0.5, 500, seed=1)


def test_mc_tail_sanity():
    spec = {"model": "studentized_mean", "population": "standardized_exponential"}
    est, se = oracle.mc_cdf(spec, 50, 25.0, 2000, seed=3)
    assert est > 0.999


def test_mc_matches_lnF_cdf_expansion():
    spec = {"model": "lnF", "n1": 24, "n2": 60}
    from fractions import Fraction as F
    t = cumulants.model_lnF(24, 60)
    ctx = engine.ExpansionContext.raw(t, F(2 * 24 * 60, 84))
    x = 0.0  # near the median
    est, se = oracle.mc_cdf(spec, None, x, 150_000, seed=99)
    approx = engine.cdf_expand(ctx, x, 3)["value"]
    assert abs(approx - est) <= 3 * se, (approx, est, se)


def test_validation_record():
    rec = oracle.check("demo", 1.0, 1.0 + 1e-9, 1e-6)
    assert rec["pass"] and rec["tolerance"] == 1e-6
    rec2 = oracle.check("demo2", 2, 3)
    assert not rec2["pass"]
    import json
    json.dumps([rec, rec2])
