#!/usr/bin/env python3
# tools/oracles/lognormal_radial_check.py

# Copyright 2026   hierarchylab authors

# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#  http://www.apache.org/licenses/LICENSE-2.0
#
# THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
# KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
# WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
# MERCHANTABLITY OR NON-INFRINGEMENT.
# See the Apache 2 License for the specific language governing permissions and
# limitations under the License.

"""Radial log-statistic distribution check for 1-homogeneous networks.

For a ReLU-critical network the per-layer radial factor collapses to
rho^2 = (2/n) chi^2_M with M ~ Binomial(n, 1/2). The summed log statistic
T = (1/2) sum_l log rho_l^2 should be close to N(-mu, mu) with
mu = (xi/4) * bracket. Measures the actual KS distance at the acceptance
operating point and the lognormal moments used by the sampler cross-check.
"""

import math
import numpy as np
from scipy.stats import kstest, norm


def radial_T(rng, n, L, draws):
    T = np.zeros(draws)
    for _ in range(L):
        M = rng.binomial(n, 0.5, size=draws)
        chi2 = rng.standard_gamma(M / 2.0, size=draws) * 2.0
        T += 0.5 * np.log(chi2 * (2.0 / n))
    return T


def main():
    rng = np.random.default_rng(7)
    n, L, draws = 256, 64, 100000
    bracket = 5.0
    xi = L / n
    mu = xi / 4.0 * bracket
    T = radial_T(rng, n, L, draws)
    ks = kstest(T, norm(loc=-mu, scale=math.sqrt(mu)).cdf)
    print("n=%d L=%d draws=%d  mu=%.6f" % (n, L, draws, mu))
    print("sample mean(T)=%.6f  var(T)=%.6f" % (T.mean(), T.var()))
    print("KS distance = %.6f  (criterion bound 0.02)" % ks.statistic)

    # second operating point for the mc cross-check invariant
    n2, L2, d2 = 64, 8, 200000
    T2 = radial_T(rng, n2, L2, d2)
    z = np.exp(T2) * rng.standard_normal(d2)
    m2 = np.mean(z ** 2)
    m4 = np.mean(z ** 4)
    k4hat = (m4 - 3 * m2 ** 2) / 3.0
    xi2 = sum(1.0 / n2 for _ in range(L2))
    pred_k4 = m2 ** 2 * bracket * xi2
    print("\nn=%d L=%d draws=%d" % (n2, L2, d2))
    print("kappa2=%.6f  kappa4hat=%.6f  predicted %.6f (K^2*bracket*sum 1/n)"
          % (m2, k4hat, pred_k4))


if __name__ == "__main__":
    main()
