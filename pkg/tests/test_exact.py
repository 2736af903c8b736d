import numpy as np
import pytest
from scipy import optimize, stats

from sskit.errors import DomainError
from sskit.estimators import mle_known_mu
from sskit.exact import (
    exact_ci_mu,
    exact_ci_r_known_mu,
    exact_joint_region,
    f_quantile,
    invert_pivot,
    joint_region_contains,
    joint_region_rectangle,
    pivot_stats,
    pivot_tx,
    r_slice,
)
from sskit.interval import Interval
from sskit.rayleigh import ProgressiveSample

from conftest import R1, R2, R3, draw_pair


@pytest.mark.parametrize("p", [1e-6, 0.025, 0.5, 0.975, 1 - 1e-9])
@pytest.mark.parametrize("dfn,dfd", [(18, 2), (2, 2), (20, 20), (7.5, 40)])
def test_f_quantile_matches_scipy(p, dfn, dfd):
    assert f_quantile(p, dfn, dfd) == pytest.approx(stats.f.ppf(p, dfn, dfd), rel=1e-9)


def test_f_quantile_domain():
    with pytest.raises(DomainError):
        f_quantile(0.0, 2, 2)


def test_pivot_matches_spacing_route(pair):
    xs, ys = pair
    mu = 0.7
    ps = pivot_stats(xs, ys, mu, 1.3, 0.4)
    assert pivot_tx(xs, mu) == pytest.approx(ps.t_x, rel=1e-12)
    assert pivot_tx(ys, mu) == pytest.approx(ps.t_y, rel=1e-12)


def test_pivot_is_increasing(pair):
    xs, _ = pair
    grid = np.linspace(xs.first - 5, xs.first - 1e-6, 200)
    vals = [pivot_tx(xs, mu) for mu in grid]
    assert np.all(np.diff(vals) > 0)
    with pytest.raises(DomainError):
        pivot_tx(xs, xs.first)


@pytest.mark.parametrize("target", [1e-3, 0.3, 1.0, 7.0, 400.0])
def test_invert_pivot_matches_root_finding(pair, target):
    xs, _ = pair
    mu = invert_pivot(xs, target)
    oracle = optimize.brentq(lambda m: pivot_tx(xs, m) - target, xs.first - 1e6,
                             xs.first - 1e-14, xtol=1e-14, rtol=1e-15, maxiter=500)
    assert mu == pytest.approx(oracle, abs=1e-9 * (1 + abs(oracle)))


def test_pivot_law():
    # pivot at the true mu ~ F(2n-2, 2)
    vals = []
    for k in range(3000):
        xs, _ = draw_pair(1000 + k, R3, R3, lam=2.0, mu=-1.0)
        vals.append(pivot_tx(xs, -1.0))
    assert stats.kstest(vals, stats.f(18, 2).cdf).pvalue > 0.01


def test_exact_ci_mu_contains_and_empty():
    xs, ys = draw_pair(3, R1, R2)
    iv = exact_ci_mu(xs, ys, 0.05)
    assert iv.lo < iv.hi < min(xs.first, ys.first)
    # two samples far apart in location make the intersection empty
    shifted = ProgressiveSample(ys.scheme, ys.values + 50.0)
    empty = exact_ci_mu(xs, shifted, 0.05)
    assert empty.empty and empty.length == 0 and not empty.contains(1.0)


def test_known_mu_interval_matches_beta_oracle(pair):
    xs, ys = pair
    iv = exact_ci_r_known_mu(xs, ys, 1.0, 0.1)
    _, _, r_hat = mle_known_mu(xs, ys, 1.0)
    # P(R <= r) through the F(2m, 2n) pivot at the endpoints
    def tail(r):
        q = (r / (1 - r)) * ((1 - r_hat) / r_hat)
        return stats.f.cdf(q, 2 * ys.n, 2 * xs.n)
    assert tail(iv.lo) == pytest.approx(0.05, abs=1e-9)
    assert tail(iv.hi) == pytest.approx(0.95, abs=1e-9)


def test_joint_region_shapes(pair, tmp_path):
    xs, ys = pair
    region = exact_joint_region(xs, ys, 0.05, grid_size=11)
    assert len(region.slices) == 11
    assert region.slices[0][0] == region.mu_interval.lo
    assert region.slices[-1][0] == region.mu_interval.hi
    for mu, lo, hi in region.slices:
        assert 0 < lo < hi < 1
        assert (lo, hi) == pytest.approx(r_slice(xs, ys, mu, 0.05))
    mu_mid = region.slices[5][0]
    lo, hi = region.slices[5][1:]
    assert joint_region_contains(xs, ys, 0.05, mu_mid, 0.5 * (lo + hi))
    assert not joint_region_contains(xs, ys, 0.05, region.mu_interval.hi + 1e-3, 0.5)
    text = region.write_csv(tmp_path / "r.csv").read_text().splitlines()
    assert text[0] == "mu,r_lo,r_hi" and len(text) == 12
    mu_iv, r_iv = joint_region_rectangle(xs, ys, 0.05)
    assert mu_iv == region.mu_interval and r_iv.lo < r_iv.hi


def test_interval_type():
    iv = Interval(-0.2, 1.4, 0.95).clamp()
    assert (iv.lo, iv.hi) == (0.0, 1.0)
    with pytest.raises(DomainError):
        Interval(1.0, 0.0, 0.95)
    with pytest.raises(DomainError):
        Interval(0.0, 1.0, 1.0)
    assert Interval.make_empty(0.9).to_dict() == {"lo": None, "hi": None, "level": 0.9,
                                                   "empty": True}
