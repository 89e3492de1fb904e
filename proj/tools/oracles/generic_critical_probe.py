#!/usr/bin/env python3
# tools/oracles/generic_critical_probe.py

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

"""Finds the critical point of a non-odd smooth activation for test data.

sigma(z) = tanh(z) + beta z^2 is neither odd nor 1-homogeneous, so tuning
must solve the generic two-equation system chi_par = chi_perp = 1 for
(K*, C_W) with C_b = K* - C_W <sigma^2>_{K*} >= 0. Probes a few beta and
freezes one (beta, K*, C_W, C_b) tuple for the tuning unit test.
"""

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.optimize import fsolve


def make_gh(nodes):
    off = np.sqrt(np.arange(1, nodes, dtype=np.float64))
    vals, vecs = eigh_tridiagonal(np.zeros(nodes), off)
    return vals, vecs[0, :] ** 2


GH_X, GH_W = make_gh(401)


def brackets(beta, K):
    z = np.sqrt(K) * GH_X
    t = np.tanh(z)
    s = t + beta * z * z
    sp = (1 - t * t) + 2 * beta * z
    s2 = s * s
    he2 = GH_X ** 2 - 1
    mean_s2 = float(GH_W @ s2)
    d2_s2 = float(GH_W @ (he2 * s2)) / K
    mean_sp2 = float(GH_W @ (sp * sp))
    return mean_s2, d2_s2, mean_sp2


def tune(beta):
    def eqs(v):
        K, cw = v
        mean_s2, d2_s2, mean_sp2 = brackets(beta, K)
        return [0.5 * cw * d2_s2 - 1.0, cw * mean_sp2 - 1.0]

    sol, info, ok, msg = fsolve(eqs, [1.0, 1.0], full_output=True)
    K, cw = sol
    mean_s2, d2_s2, mean_sp2 = brackets(beta, K)
    cb = K - cw * mean_s2
    res = max(abs(0.5 * cw * d2_s2 - 1), abs(cw * mean_sp2 - 1))
    return K, cw, cb, res, ok == 1


def main():
    for beta in (0.3, 0.5, 0.7, 0.9, 1.1):
        K, cw, cb, res, ok = tune(beta)
        print("beta=%.2f  converged=%s  K*=%.17g  C_W=%.17g  C_b=%.17g  "
              "resid=%.2e" % (beta, ok, K, cw, cb, res))


if __name__ == "__main__":
    main()
