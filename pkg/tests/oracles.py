"""Independent oracles shared by the module tests and the acceptance suite."""

import numpy as np
from scipy import integrate

from sskit.estimators import loglik


def umvue_quadrature(u, v, n, m, big_n=7, big_m=11):
    """E[1{M Y*_1 < N X*_1} | U=u, V=v] from the conditional densities of X*_1, Y*_1."""
    fx = lambda x: big_n * (n - 1) * (u - big_n * x) ** (n - 2) / u ** (n - 1)  # noqa: E731
    fy = lambda y: big_m * (m - 1) * (v - big_m * y) ** (m - 2) / v ** (m - 1)  # noqa: E731
    val, _ = integrate.dblquad(
        lambda y, x: fx(x) * fy(y), 0.0, u / big_n,
        lambda x: 0.0, lambda x: min(big_n * x / big_m, v / big_m),
        epsabs=1e-13, epsrel=1e-12)
    return val


def fd_hessian(xs, ys, at, rel=1e-4):
    """Central-difference Hessian of the joint log-likelihood in (lam, alpha, mu)."""
    theta = np.array(at, dtype=float)
    f = lambda t: loglik(xs, ys, *t)  # noqa: E731
    h = rel * np.maximum(np.abs(theta), 1e-2)
    hess = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            ei = np.zeros(3)
            ei[i] = h[i]
            ej = np.zeros(3)
            ej[j] = h[j]
            hess[i, j] = (f(theta + ei + ej) - f(theta + ei - ej) - f(theta - ei + ej)
                          + f(theta - ei - ej)) / (4 * h[i] * h[j])
    return hess
