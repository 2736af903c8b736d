"""
One progressively censored pair, every estimator
================================================

Draw X and Y from two-parameter Rayleigh laws with a common location and
compare the point and interval estimates of R = alpha / (alpha + lambda).
"""

from sskit import bayes
from sskit.asymptotic import asymptotic_ci
from sskit.bootstrap import BootConfig, boot_p_from, boot_t_from, bootstrap_replicates
from sskit.estimators import mle_joint, mle_known_mu, sufficient_stats, umvue_r
from sskit.exact import exact_ci_mu, exact_ci_r_known_mu, exact_joint_region
from sskit.rayleigh import CensoringScheme, RayleighParams, RngStream, r_true, sample_progressive

lam, alpha, mu = 1.0, 2.0, 1.0
print("true R", r_true(lam, alpha))

# 30 units on test, 10 failures observed, the survivors removed at the end
scheme = CensoringScheme.from_removals([0] * 9 + [20])
root = RngStream(2024)
xs = sample_progressive(RayleighParams(mu, lam), scheme, root.substream(0))
ys = sample_progressive(RayleighParams(mu, alpha), scheme, root.substream(1))

# location unknown
fit = mle_joint(xs, ys)
print("joint MLE", fit.to_dict())
print("asymptotic", asymptotic_ci(xs, ys, 0.05, fit))
rep = bootstrap_replicates(xs, ys, BootConfig(250, 0.05, root.substream(2)), fit=fit)
print("Boot-p", boot_p_from(rep, 0.05))
print("Boot-t", boot_t_from(rep, 0.05))
print("exact mu interval", exact_ci_mu(xs, ys, 0.05))
region = exact_joint_region(xs, ys, 0.05, grid_size=5)
for m, lo, hi in region.slices:
    print(f"  joint region at mu={m:.4f}: R in ({lo:.4f}, {hi:.4f})")

draws = bayes.gibbs_chain(xs, ys, bayes.PRIORS[3], 1000, rng=root.substream(3))
print("posterior mean, var", bayes.posterior_summary(draws))
print("credible", bayes.credible_interval(draws, 0.05))

# location known
stats = sufficient_stats(xs, ys, mu)
print("known-mu MLE", mle_known_mu(xs, ys, mu)[2])
print("UMVUE", umvue_r(stats, xs.n, ys.n))
print("Lindley", bayes.lindley_estimate(stats, xs.n, ys.n, bayes.PRIORS[2]))
print("exact", exact_ci_r_known_mu(xs, ys, mu, 0.05))
print("Bayes", bayes.bayes_interval_known_mu(stats, xs.n, ys.n, bayes.PRIORS[2], 0.05))
