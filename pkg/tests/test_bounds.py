import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from lrsylv import (
    BoundCurve,
    BoundParams,
    bound_c3,
    bound_disk,
    bound_interval,
    bound_split_intervals,
    eps_rank_bound,
)
from lrsylv.bounds import cross_ratio, horn_bound
from lrsylv.spectra import Disk, Interval, disk_mu, interval_mu


class TestParams:
    def test_constant_validation(self):
        with pytest.raises(ValueError):
            BoundParams(Disk(5.0, 1.0), 16, K=0.5)
        with pytest.raises(ValueError):
            BoundParams(Disk(5.0, 1.0), 16, mu_F=1.0)
        with pytest.raises(ValueError):
            BoundParams(Disk(5.0, 1.0), 1)

    def test_geometry_validation(self):
        with pytest.raises(ValueError):
            BoundParams(Disk(1.0, 2.0), 16)
        with pytest.raises(ValueError):
            BoundParams(Interval(-1.0, 2.0), 16)
        with pytest.raises(ValueError):
            BoundParams((Interval(1.0, 2.0), Interval(-4.0, -3.0)), 16)
        with pytest.raises(ValueError):
            BoundParams("not a geometry", 16)

    def test_level_default_is_one(self):
        mu, ell = BoundParams(Disk(30.0, 10.0), 64).level()
        assert mu == pytest.approx(disk_mu(Disk(30.0, 10.0)))
        assert ell == 1

    def test_level_two_when_rhs_decays_squared(self):
        mu_set = disk_mu(Disk(30.0, 10.0))
        mu, ell = BoundParams(Disk(30.0, 10.0), 64, mu_F=mu_set**2).level()
        assert mu == pytest.approx(mu_set)
        assert ell == 2

    def test_level_degenerate_base(self):
        mu, ell = BoundParams(Disk(1.0, 1e-200), 16).level()
        assert math.isinf(mu)
        assert ell == 1


class TestCurveContainer:
    def test_strictly_increasing_indices(self):
        with pytest.raises(ValueError):
            BoundCurve(((1, 0.5), (1, 0.4)), "x")

    def test_negative_values_rejected(self):
        with pytest.raises(ValueError):
            BoundCurve(((1, -0.5),), "x")
        with pytest.raises(ValueError):
            BoundCurve(((1, float("nan")),), "x")

    def test_zero_allowed_for_degenerate_geometry(self):
        curve = bound_disk(BoundParams(Disk(1.0, 1e-200), 16), [1, 2])
        assert curve.values() == [0.0, 0.0]


class TestDiskBound:
    def test_frozen_t1(self):
        curve = bound_disk(BoundParams(Disk(30.0, 10.0), 64), [1])
        mu1 = disk_mu(Disk(30.0, 10.0))
        assert curve.values()[0] == pytest.approx(2.0 * 2.5 / mu1, rel=1e-14)
        assert curve.values()[0] == pytest.approx(0.147186257614297, rel=1e-13)

    def test_level_two_frozen_t2(self):
        mu = disk_mu(Disk(30.0, 10.0))
        curve = bound_disk(BoundParams(Disk(30.0, 10.0), 64, mu_F=mu**2), [2])
        expected = 2.0 * (1.5 * math.sqrt(2.0) + 1.0) * mu ** (-2.0)
        assert curve.values()[0] == pytest.approx(expected, rel=1e-14)

    def test_negated_center_same_curve(self):
        a = bound_disk(BoundParams(Disk(30.0, 10.0), 64), [1, 3, 6])
        b = bound_disk(BoundParams(Disk(-30.0, 10.0), 64), [1, 3, 6])
        assert a.values() == b.values()

    def test_held_between_admissible(self):
        curve = bound_disk(BoundParams(Disk(30.0, 10.0), 64), [1, 2, 3])
        vals = curve.values()
        assert vals[0] == vals[1]  # t=2 holds the t=1 value
        assert vals[2] < vals[1]
        assert "held-at-admissible" in curve.method

    def test_rejects_other_geometry(self):
        with pytest.raises(ValueError):
            bound_disk(BoundParams(Interval(1.0, 2.0), 16), [1])

    def test_index_range_validation(self):
        params = BoundParams(Disk(30.0, 10.0), 16)
        with pytest.raises(ValueError):
            bound_disk(params, [0])
        with pytest.raises(ValueError):
            bound_disk(params, [16])


class TestIntervalBound:
    def test_frozen_t1(self):
        curve = bound_interval(BoundParams(Interval(1.0, 100.0), 64), [1])
        expected = 100.0 * 7.0 / interval_mu(1.0, 100.0)
        assert curve.values()[0] == pytest.approx(expected, rel=1e-14)
        assert curve.values()[0] == pytest.approx(134.80144145295458, rel=1e-13)

    def test_rejects_other_geometry(self):
        with pytest.raises(ValueError):
            bound_interval(BoundParams(Disk(5.0, 1.0), 16), [1])


class TestSplitIntervals:
    def test_frozen_symmetric_pair(self):
        params = BoundParams((Interval(-2.0, -1.0), Interval(1.0, 2.0)), 64)
        curve = bound_split_intervals(params, [1])
        assert curve.values()[0] == oracles.SPLIT_BOUND_T1

    def test_fast_rhs_decay_falls_back_to_level_one(self):
        # a huge mu_F must not empty the admissible grid below t=1
        params = BoundParams((Interval(-2.0, -1.0), Interval(1.0, 2.0)), 64, mu_F=1e12)
        curve = bound_split_intervals(params, [1])
        assert curve.values()[0] == oracles.SPLIT_BOUND_T1

    def test_cross_ratio_value(self):
        assert cross_ratio(-2.0, -1.0, 1.0, 2.0) == pytest.approx(
            oracles.CROSS_RATIO_SYM
        )
        with pytest.raises(ValueError):
            cross_ratio(0.0, 2.0, 1.0, 3.0)

    def test_rejects_other_geometry(self):
        with pytest.raises(ValueError):
            bound_split_intervals(BoundParams(Disk(5.0, 1.0), 16), [1])


class TestHornBound:
    def test_frozen(self):
        assert horn_bound(2.0, 2.0, 1.0) == 1.0

    def test_validation(self):
        with pytest.raises(ValueError):
            horn_bound(1.0, 1.0, 2.0)
        with pytest.raises(ValueError):
            horn_bound(-1.0, 2.0, 1.0)


class TestEpsRankBound:
    def test_frozen(self):
        assert eps_rank_bound(1e-10, 100, 30.0, 10.0) == oracles.EPS_RANK_BOUND_30_10

    def test_monotone_in_epsilon(self):
        ranks = [eps_rank_bound(e, 200, 30.0, 10.0) for e in (1e-4, 1e-8, 1e-12)]
        assert ranks[0] <= ranks[1] <= ranks[2]

    def test_degenerate_disk(self):
        assert eps_rank_bound(1e-10, 100, 1.0, 1e-200) == 1

    def test_validation(self):
        with pytest.raises(ValueError):
            eps_rank_bound(0.0, 100, 30.0, 10.0)
        with pytest.raises(ValueError):
            eps_rank_bound(1e-8, 100, 10.0, 30.0)
        with pytest.raises(ValueError):
            eps_rank_bound(1e-8, 0, 30.0, 10.0)


class TestCauchyCube:
    def test_quartic_grid_rates(self):
        mu1 = disk_mu(Disk(30.0, 10.0))
        curve = bound_c3([1, 5], 30.0, 10.0, 64)
        assert curve.values()[0] == pytest.approx(mu1 ** (-1.0), rel=1e-14)
        assert curve.values()[1] == pytest.approx(mu1 ** (-2.0), rel=1e-14)

    def test_held_inside_quartic_gaps(self):
        curve = bound_c3([2, 3, 4], 30.0, 10.0, 64)
        assert len(set(curve.values())) == 1
        assert "held-at-admissible" in curve.method

    def test_prefactor_multiplier(self):
        base = bound_c3([1], 30.0, 10.0, 64).values()[0]
        scaled = bound_c3([1], 30.0, 10.0, 64, K1=8.0).values()[0]
        assert scaled == pytest.approx(8.0 * base, rel=1e-14)

    def test_validation(self):
        with pytest.raises(ValueError):
            bound_c3([1], 10.0, 30.0, 64)
        with pytest.raises(ValueError):
            bound_c3([64], 30.0, 10.0, 64)


def _reference_disk_value(E, n, K, mu_F, t):
    """Independent re-derivation of the disk bound at index t."""
    mu_set = disk_mu(E)
    mu = mu_set if mu_F is None else min(mu_F, mu_set)
    big = mu_set if mu_F is None else max(mu_F, mu_set)
    ell = max(1, math.floor(math.log(big) / math.log(mu)))
    k = 0
    while ell * (k + 1) * (k + 2) // 2 <= t:
        k += 1
    lev = ell
    if k == 0:
        lev = 1
        while (k + 1) * (k + 2) // 2 <= t:
            k += 1
    t_adm = lev * k * (k + 1) // 2
    pref = (abs(E.center) + E.radius) / (abs(E.center) - E.radius)
    return K * pref * (1.5 * math.sqrt(t_adm) + 1.0) * mu ** (-float(lev * k))


@given(
    st.floats(min_value=2.0, max_value=80.0),
    st.floats(min_value=0.05, max_value=0.9),
    st.floats(min_value=1.0, max_value=20.0),
    st.integers(min_value=1, max_value=60),
)
@settings(max_examples=60, deadline=None)
def test_disk_bound_matches_reference_form(center, radius_frac, K, t):
    E = Disk(center, center * radius_frac)
    params = BoundParams(E, 64, K=K)
    got = bound_disk(params, [t]).values()[0]
    assert got == pytest.approx(
        _reference_disk_value(E, 64, K, None, t), rel=1e-12
    )


@pytest.mark.parametrize(
    "make",
    [
        lambda ts: bound_disk(BoundParams(Disk(30.0, 10.0), 128), ts),
        lambda ts: bound_interval(BoundParams(Interval(1.0, 100.0), 128), ts),
        lambda ts: bound_split_intervals(
            BoundParams((Interval(-9.0, -2.0), Interval(1.0, 7.0)), 128), ts
        ),
        lambda ts: bound_c3(ts, 30.0, 10.0, 128),
    ],
)
def test_curves_nonincreasing(make):
    ts = list(range(1, 128))
    vals = make(ts).values()
    assert all(a >= b for a, b in zip(vals, vals[1:]))


def test_disk_bound_dominates_measured_spectrum():
    # sanity anchor on an actual solution: diagonal problem on (E, -E)
    rng = np.random.default_rng(5)
    E = Disk(30.0, 10.0)
    n = 48
    a = E.center + 0.98 * E.radius * (2.0 * rng.random(n) - 1.0)
    b = -E.center + 0.98 * E.radius * (2.0 * rng.random(n) - 1.0)
    u = rng.standard_normal(n)
    v = rng.standard_normal(n)
    X = np.outer(u, v) / (a[:, None] - b[None, :])
    s = np.linalg.svd(X, compute_uv=False)
    ts = list(range(1, 20))
    curve = bound_disk(BoundParams(E, n), ts)
    for t, val in curve.entries:
        assert s[t] / s[0] <= val * (1.0 + 1e-12)
