import math
import os
from dataclasses import replace

import numpy as np
import pytest

from hetsim import coverage as cov
from hetsim import mcsim
from hetsim.netmodel import NetworkParams, ParameterError, fig1_params, table1_params
from hetsim.xform import c_alpha


def _ul_params(**kw) -> NetworkParams:
    p = replace(fig1_params(1e-4, 0.5, n_antennas=8), n_mues=4)
    return replace(p, **kw) if kw else p


# ---------------------------------------------------------------------------
# point process sampling
# ---------------------------------------------------------------------------


def test_ppp_zero_density_is_empty():
    pts = mcsim.sample_ppp_disk(0.0, 2500.0, np.random.default_rng(0))
    assert pts.shape == (0, 2)


def test_ppp_count_matches_intensity():
    rng = np.random.default_rng(123)
    lam, r = 1e-4, 2500.0
    n_rep = 2000
    counts = [len(mcsim.sample_ppp_disk(lam, r, rng)) for _ in range(n_rep)]
    mean = lam * math.pi * r * r
    tol = 3.0 * math.sqrt(mean / n_rep)
    assert np.mean(counts) == pytest.approx(mean, abs=tol)
    assert np.all(np.hypot(*(np.concatenate([mcsim.sample_ppp_disk(lam, r, rng) for _ in range(5)]).T)) <= r)


def test_ppp_points_fill_the_disk_uniformly():
    rng = np.random.default_rng(5)
    pts = np.concatenate([mcsim.sample_ppp_disk(1e-4, 2500.0, rng) for _ in range(30)])
    radii = np.hypot(pts[:, 0], pts[:, 1])
    # mean radius of a uniform disk point is 2R/3
    se = 2500.0 * 0.236 / math.sqrt(len(radii))
    assert np.mean(radii) == pytest.approx(2.0 * 2500.0 / 3.0, abs=3.0 * se)


def test_thinning_fraction():
    rng = np.random.default_rng(7)
    pts = np.zeros((100000, 2))
    q = 0.3
    dl, ul = mcsim.thin_by_mode(pts, q, rng)
    n = len(pts)
    assert len(dl) + len(ul) == n
    assert len(dl) / n == pytest.approx(q, abs=3.0 * math.sqrt(q * (1 - q) / n))


# ---------------------------------------------------------------------------
# reproducibility
# ---------------------------------------------------------------------------


def test_same_seed_bit_identical():
    cfg = mcsim.DropConfig(_ul_params(), n_drops=3000, seed=42)
    assert mcsim.estimate_uplink_mue_coverage(cfg) == mcsim.estimate_uplink_mue_coverage(cfg)


def test_worker_count_does_not_change_results():
    cfg = mcsim.DropConfig(_ul_params(), n_drops=6000, seed=42)
    baseline = mcsim.estimate_uplink_mue_coverage(cfg)
    old = os.environ.get("HETSIM_THREADS")
    try:
        os.environ["HETSIM_THREADS"] = "4"
        threaded = mcsim.estimate_uplink_mue_coverage(cfg)
    finally:
        if old is None:
            os.environ.pop("HETSIM_THREADS", None)
        else:
            os.environ["HETSIM_THREADS"] = old
    assert baseline == threaded


def test_different_seeds_differ():
    p = _ul_params()
    means = {
        mcsim.estimate_uplink_mue_coverage(mcsim.DropConfig(p, n_drops=4000, seed=s)).mean
        for s in (1, 2, 3)
    }
    assert len(means) > 1


def test_realization_reproduces_estimator_drop():
    cfg = mcsim.DropConfig(_ul_params(), n_drops=16, seed=7)
    area = math.pi * cfg.r_sim ** 2
    for i in range(16):
        real = mcsim.sample_drop(cfg, i)
        direct = mcsim._ul_mue_indicator(
            cfg.params, cfg.r_sim,
            mcsim._ul_mue_draw(mcsim._gen(7, 1, i), cfg.params, area, False),
        )
        assert mcsim.realization_indicator(cfg, real) == direct


def test_drop_config_validation():
    with pytest.raises(ParameterError):
        mcsim.DropConfig(_ul_params(), n_drops=0, seed=1)
    with pytest.raises(ParameterError):
        mcsim.DropConfig(_ul_params(), n_drops=10, seed=1, sim_radius=100.0)
    with pytest.raises(ParameterError):
        mcsim.DropConfig(_ul_params(), n_drops=10, seed=1, fidelity="magic")


# ---------------------------------------------------------------------------
# distributional self-tests
# ---------------------------------------------------------------------------


def test_mrc_gain_moments_match_gamma():
    p = replace(_ul_params(), sc_density=0.0, n_mues=1, n_antennas=16)
    gains = []
    for i in range(4000):
        parts = mcsim._ul_mue_draw(mcsim._gen(3, 1, i), p, 0.0, True)
        gains.append(parts[4])
    n = p.n_antennas
    gains = np.asarray(gains)
    assert np.mean(gains) == pytest.approx(n, abs=3.0 * math.sqrt(n / len(gains)))
    assert np.var(gains) == pytest.approx(n, rel=0.15)


def test_zf_gain_moments_match_gamma():
    # N=12, K=4, M=2: effective gain Gamma(N-K-M+1, 1) = Gamma(7, 1)
    g = mcsim._gen(11, 90, 0)
    gains = np.array([mcsim._zf_gain_and_beams(g, 12, 4, 2, False)[0] for _ in range(4000)])
    shape = 12 - 4 - 2 + 1
    assert np.mean(gains) == pytest.approx(shape, abs=3.0 * math.sqrt(shape / len(gains)))
    assert np.var(gains) == pytest.approx(shape, rel=0.15)


def test_zf_gain_full_nulling_is_exponential():
    g = mcsim._gen(12, 91, 0)
    gains = np.array([mcsim._zf_gain_and_beams(g, 12, 4, 8, False)[0] for _ in range(4000)])
    assert np.mean(gains) == pytest.approx(1.0, abs=3.0 / math.sqrt(len(gains)))


def test_channel_and_distribution_fidelities_agree():
    p = replace(fig1_params(1e-5, 0.5, n_antennas=8), n_mues=4)
    kw = dict(n_drops=6000, seed=11, sim_radius=1000.0)
    dist = mcsim.estimate_uplink_mue_coverage(mcsim.DropConfig(p, **kw))
    chan = mcsim.estimate_uplink_mue_coverage(
        mcsim.DropConfig(p, fidelity="channel", **kw)
    )
    assert max(dist.ci_low, chan.ci_low) <= min(dist.ci_high, chan.ci_high)


def test_channel_level_downlink_requires_enough_antennas():
    p = table1_params(10, 100, 1.0)  # K + M = 100 = N is fine
    mcsim.DropConfig(p, n_drops=1, seed=0, fidelity="channel")
    bad = replace(p, n_antennas=50, n_mues=40)  # M = ceil(1.0 * 10) = 10, K+M = 50 ok
    cfg = mcsim.DropConfig(bad, n_drops=1, seed=0, fidelity="channel", nulled_count=20)
    with pytest.raises(ParameterError, match="K \\+ M"):
        mcsim.estimate_dl_mue_coverage(cfg)


# ---------------------------------------------------------------------------
# estimator brackets
# ---------------------------------------------------------------------------


def test_ul_estimate_no_interference_is_exactly_one():
    p = replace(_ul_params(), sc_density=0.0, n_mues=1)
    est = mcsim.estimate_uplink_mue_coverage(mcsim.DropConfig(p, n_drops=500, seed=1))
    assert est.mean == 1.0


def test_ul_estimate_brackets_analytic():
    p = _ul_params()
    est = mcsim.estimate_uplink_mue_coverage(mcsim.DropConfig(p, n_drops=30000, seed=7))
    assert est.contains(cov.uplink_mue_coverage(p).value)


def test_dl_full_nulling_brackets_closed_form():
    p = table1_params(10, 100, 1.0)
    est = mcsim.estimate_dl_mue_coverage(mcsim.DropConfig(p, n_drops=50000, seed=7))
    assert est.contains(cov.dl_mue_coverage_closed_form(p).value)
    assert est.contains(0.01823)


def test_dl_sbs_no_nulling_brackets_unprotected_branch():
    p = table1_params(10, 100, 0.0)
    est = mcsim.estimate_dl_sbs_coverage(mcsim.DropConfig(p, n_drops=30000, seed=7))
    assert est.contains(cov.dl_sbs_coverage(p).value)


def test_ul_sc_estimates_bracket_analytic():
    p = replace(fig1_params(1e-4, 0.5), n_mues=10)
    cfg = mcsim.DropConfig(p, n_drops=30000, seed=7)
    assert mcsim.estimate_ul_sc_coverage(cfg, "sue").contains(cov.sue_coverage_ul(p).value)
    assert mcsim.estimate_ul_sc_coverage(cfg, "sbs").contains(cov.sbs_coverage_ul(p).value)


def test_sc_ase_estimate_brackets_analytic():
    p = replace(fig1_params(1e-4, 0.5), n_mues=10)
    est = mcsim.estimate_sc_ase_ul(mcsim.DropConfig(p, n_drops=30000, seed=7))
    assert est.contains(cov.sc_ase_ul(p).value)
    assert est.half_width > 0.0


def test_independent_distance_mode_also_brackets():
    p = replace(fig1_params(1e-4, 0.5), n_mues=10)
    cfg = mcsim.DropConfig(p, n_drops=30000, seed=7, independent_mue_distances=True)
    assert mcsim.estimate_ul_sc_coverage(cfg, "sue").contains(cov.sue_coverage_ul(p).value)


def test_nulled_count_override_changes_selection():
    p = table1_params(10, 100, 0.2)  # M = 18 by default
    base = mcsim.estimate_dl_sbs_coverage(mcsim.DropConfig(p, n_drops=8000, seed=3))
    more = mcsim.estimate_dl_sbs_coverage(
        mcsim.DropConfig(p, n_drops=8000, seed=3, nulled_count=60)
    )
    assert more.mean > base.mean


def test_ase_scaling_helpers():
    p = _ul_params()
    cfg = mcsim.DropConfig(p, n_drops=4000, seed=9)
    c = mcsim.estimate_uplink_mue_coverage(cfg)
    a = mcsim.estimate_macro_ase_ul(cfg)
    scale = p.n_mues * math.log2(1.0 + p.sir_threshold)
    assert a.mean == pytest.approx(c.mean * scale, rel=1e-12)
    assert a.half_width == pytest.approx(c.half_width * scale, rel=1e-12)


# ---------------------------------------------------------------------------
# interval behaviour
# ---------------------------------------------------------------------------


def test_wilson_interval_shrinks_like_sqrt_n():
    p = _ul_params()
    e1 = mcsim.estimate_uplink_mue_coverage(mcsim.DropConfig(p, n_drops=2000, seed=5))
    e2 = mcsim.estimate_uplink_mue_coverage(mcsim.DropConfig(p, n_drops=32000, seed=5))
    ratio = e1.half_width / e2.half_width
    assert 2.0 < ratio < 8.0  # sqrt(16) = 4 up to estimate noise


def test_wilson_interval_positive_width_at_extremes():
    est = mcsim._wilson(0, 1000, 0)
    assert est.mean == 0.0 and est.ci_high > 0.0
    est = mcsim._wilson(1000, 1000, 0)
    assert est.mean == 1.0 and est.ci_low < 1.0


# ---------------------------------------------------------------------------
# shot-noise transform and truncation control
# ---------------------------------------------------------------------------


def test_empirical_laplace_trivial_points():
    assert mcsim.empirical_laplace(0.0, 0.1, 1.0, 50, seed=1) == 1.0
    assert mcsim.empirical_laplace(1e-4, 0.1, 0.0, 50, seed=1) == 1.0


def test_empirical_laplace_matches_transform():
    got = mcsim.empirical_laplace(1e-4, 0.1, 1.0, 20000, seed=3)
    expect = math.exp(-1e-4 * math.sqrt(0.1) * c_alpha(4.0))
    assert got == pytest.approx(expect, rel=1e-2)


def test_truncation_doubling_within_interval():
    for direction, p in (
        ("ul", _ul_params()),
        ("dl", table1_params(4, 32, 0.5)),
    ):
        base_cfg = mcsim.DropConfig(p, n_drops=20000, seed=7)
        wide_cfg = mcsim.DropConfig(p, n_drops=20000, seed=7, sim_radius=2.0 * base_cfg.r_sim)
        if direction == "ul":
            base = mcsim.estimate_uplink_mue_coverage(base_cfg)
            wide = mcsim.estimate_uplink_mue_coverage(wide_cfg)
        else:
            base = mcsim.estimate_dl_mue_coverage(base_cfg)
            wide = mcsim.estimate_dl_mue_coverage(wide_cfg)
        assert abs(base.mean - wide.mean) < base.half_width


def test_bound_exact_and_mc_three_way_consistency():
    p = fig1_params(1e-4, 0.5, n_antennas=8)  # K = 10
    exact = cov.uplink_mue_coverage(p).value
    bound = cov.uplink_mue_coverage_bound(p)
    est = mcsim.estimate_uplink_mue_coverage(mcsim.DropConfig(p, n_drops=20000, seed=7))
    assert est.contains(exact)
    assert bound >= exact
    assert bound >= est.ci_high
