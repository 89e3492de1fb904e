#!/usr/bin/env python3
# tools/oracles/moment_cumulant_identities.py

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

"""Symbolic verification of the central-moment -> cumulant formulas used by
the Monte Carlo estimators (orders 4, 6, 8, mean subtracted beforehand)."""

import sympy as sp


def cumulants_from_moments(order):
    # kappa_n = m_n - sum_{k<n} C(n-1, k-1) kappa_k m_{n-k}
    m = {i: sp.Symbol("m%d" % i) for i in range(1, order + 1)}
    m[1] = sp.Integer(0)  # centered
    kappa = {}
    for nn in range(1, order + 1):
        acc = m[nn]
        for k in range(1, nn):
            acc -= sp.binomial(nn - 1, k - 1) * kappa[k] * m[nn - k]
        kappa[nn] = sp.expand(acc)
    return m, kappa


def main():
    m, kappa = cumulants_from_moments(8)
    m2, m3, m4, m5, m6, m8 = (m[2], m[3], m[4], m[5], m[6], m[8])
    claimed4 = m4 - 3 * m2 ** 2
    claimed6 = m6 - 15 * m4 * m2 - 10 * m3 ** 2 + 30 * m2 ** 3
    claimed8 = (m8 - 28 * m6 * m2 - 56 * m5 * m3 - 35 * m4 ** 2
                + 420 * m4 * m2 ** 2 + 560 * m3 ** 2 * m2 - 630 * m2 ** 4)
    print("kappa4 matches:", sp.simplify(kappa[4] - claimed4) == 0)
    print("kappa6 matches:", sp.simplify(kappa[6] - claimed6) == 0)
    print("kappa8 matches:", sp.simplify(kappa[8] - claimed8) == 0)
    print("kappa6 =", kappa[6])
    print("kappa8 =", kappa[8])


if __name__ == "__main__":
    main()
