#!/usr/bin/env python3
# tools/oracles/relu_correlation_map.py

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

"""Iterates the 1-homogeneous correlation map and freezes its decay constants.

The map for equal-norm inputs, parameterized by eps with correlation
rho = 1 - 2*eps, reads

  1 - 2*eps' = (2*C_W*(a+ - a-)^2/pi) * (sqrt(eps(1-eps))/2
               + (1/2 - eps)*arccos(sqrt(eps))) + C_W*a+*a-*(1 - 2*eps).

Near eps = 0 the ReLU map is eps' = eps - (4/(3pi)) eps^{3/2} + ..., so
1/(ell*sqrt(eps)) -> 2/(3pi) and ell^2*eps -> (3pi/2)^2. Both readings are
printed; the small-eps expansion constant 2/(3pi) is what the rate check
asserts.
"""

import math


def correlation_step(eps, a_plus, a_minus):
    c_w = 2.0 / (a_plus ** 2 + a_minus ** 2)
    s = math.sqrt(min(max(eps, 0.0), 1.0))
    val = (2.0 * c_w * (a_plus - a_minus) ** 2 / math.pi) * (
        0.5 * math.sqrt(eps * (1.0 - eps)) + (0.5 - eps) * math.acos(s))
    val += c_w * a_plus * a_minus * (1.0 - 2.0 * eps)
    return 0.5 * (1.0 - val)


def main():
    print("# single-step values (ReLU)")
    print("eps=0so   -> %.17g" % correlation_step(0.0, 1.0, 0.0))
    print("eps=0.5  -> %.17g  (expect (1-1/pi)/2 = %.17g)"
          % (correlation_step(0.5, 1.0, 0.0), 0.5 * (1 - 1 / math.pi)))
    print("eps=1.0  -> %.17g  (expect 0.5 for ReLU)"
          % correlation_step(1.0, 1.0, 0.0))

    eps = 0.3
    marks = {10, 100, 1000, 10000}
    print("\n# ReLU iteration from eps0 = 0.3")
    for ell in range(1, 10001):
        eps = correlation_step(eps, 1.0, 0.0)
        if ell in marks:
            print("ell=%5d eps=%.17g  ell^2*eps=%.17g  1/(ell*sqrt(eps))=%.17g"
                  % (ell, eps, ell * ell * eps, 1.0 / (ell * math.sqrt(eps))))
    print("2/(3pi) = %.17g" % (2.0 / (3.0 * math.pi)))
    print("(3pi/2)^2 = %.17g" % ((3.0 * math.pi / 2.0) ** 2))

    # monotone-decrease property over the whole run
    eps = 0.3
    prev = eps
    mono_from = None
    for ell in range(1, 10001):
        eps = correlation_step(eps, 1.0, 0.0)
        if eps < prev and mono_from is None:
            mono_from = ell
        if eps > prev and mono_from is not None:
            mono_from = None
        prev = eps
    print("monotone decreasing from step %s on" % mono_from)

    print("\n# leaky a-=0.5 iteration from eps0 = 0.3 (decay rate reading)")
    ap, am = 1.0, 0.5
    full_coeff = 2.0 * (ap - am) ** 2 / (3.0 * math.pi * (ap ** 2 + am ** 2))
    eps = 0.3
    for ell in range(1, 10001):
        eps = correlation_step(eps, ap, am)
    print("ell=10000 eps=%.17g  1/(ell*sqrt(eps))=%.17g" %
          (eps, 1.0 / (10000 * math.sqrt(eps))))
    print("full-map small-eps coefficient 2(a+-a-)^2/(3pi(a+^2+a-^2)) = %.17g"
          % full_coeff)


if __name__ == "__main__":
    main()
