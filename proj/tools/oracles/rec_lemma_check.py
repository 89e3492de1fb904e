#!/usr/bin/env python3
# tools/oracles/rec_lemma_check.py

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

"""One-dimensional linear recursion a' = xi_l + (1 - zeta_l) a asymptotics.

Source-dominated case (psi < 1 + C2): a_l ~ C1 l^(1-psi) / (1 - psi + C2).
Homogeneous case (no source): a_l decays like l^(-C2) with a
trajectory-dependent prefactor; only the rate is universal. Freezes the
values asserted by the acceptance property suite.
"""

import math


def iterate(a0, xi, zeta, L):
    a = a0
    for ell in range(1, L):
        a = xi(ell) + (1.0 - zeta(ell)) * a
    return a


def main():
    # case A: C1=1, psi=2, C2=2 -> a_l * l -> 1/(1-2+2) = 1
    L = 10 ** 4
    a = iterate(0.0, lambda l: l ** -2.0, lambda l: min(1.0, 2.0 / l), L)
    print("case A: a(1e4)*1e4 = %.17g (target 1, criterion band 2%%)"
          % (a * L))
    for mark in (10 ** 2, 10 ** 3):
        am = iterate(0.0, lambda l: l ** -2.0,
                     lambda l: min(1.0, 2.0 / l), mark)
        print("        a(%d)*%d = %.17g" % (mark, mark, am * mark))

    # case B: pure homogeneous zeta = 2/(l+2), a0 = 1 -> a_l * l^2 -> const
    for L in (10 ** 2, 10 ** 3, 10 ** 4):
        a = iterate(1.0, lambda l: 0.0, lambda l: 2.0 / (l + 2.0), L)
        print("case B: a(%d)*l^2 = %.17g" % (L, a * L * L))

    # case C: slope reading for zeta = 2/l from l0 = 3 (factors stay positive)
    a, hist = 1.0, {}
    for ell in range(3, 10 ** 4):
        a *= 1.0 - 2.0 / ell
        if ell + 1 in (10 ** 2, 10 ** 3, 10 ** 4 - 1):
            hist[ell + 1] = a
    ks = sorted(hist)
    for i in range(len(ks) - 1):
        s = (math.log(hist[ks[i + 1]]) - math.log(hist[ks[i]])) / \
            (math.log(ks[i + 1]) - math.log(ks[i]))
        print("case C: log-log slope (%d..%d) = %.6f (target -2)"
              % (ks[i], ks[i + 1], s))


if __name__ == "__main__":
    main()
