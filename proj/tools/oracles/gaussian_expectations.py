#!/usr/bin/env python3
# tools/oracles/gaussian_expectations.py

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

"""High-precision Gaussian expectation reference values.

Uses mpmath adaptive quadrature at 40 digits (independent of the
Gauss-Hermite machinery in the C++ library) to freeze expectations,
weak derivatives, susceptibilities and T-functionals used in unit tests.
"""

import mpmath as mp

mp.mp.dps = 40


def gauss_expect(f, K):
    if K == 0:
        return f(mp.mpf(0))
    s = mp.sqrt(K)
    return mp.quad(lambda u: f(s * u) * mp.npdf(u), [-mp.inf, 0, mp.inf])


def hermite_he(i, u):
    # probabilists' Hermite polynomials via recurrence
    h0, h1 = mp.mpf(1), u
    if i == 0:
        return h0
    for k in range(1, i):
        h0, h1 = h1, u * h1 - k * h0
    return h1


def weak_deriv(f, K, i):
    # <d^i f>_K = K^{-i/2} <He_i(z/sqrt(K)) f(z)>_K
    s = mp.sqrt(K)
    val = mp.quad(lambda u: hermite_he(i, u) * f(s * u) * mp.npdf(u),
                  [-mp.inf, 0, mp.inf])
    return val / K ** (mp.mpf(i) / 2)


def t_functional(f_sq, K, i, j, c_w):
    c = gauss_expect(f_sq, K)
    g = lambda z: (f_sq(z) - c) ** j
    if i == 0:
        val = gauss_expect(g, K)
    else:
        val = weak_deriv(g, K, i)
    return c_w ** j * val


def tanh_sq(z):
    return mp.tanh(z) ** 2


def tanh_ssp(z):
    t = mp.tanh(z)
    return t * (1 - t ** 2)


def tanh_spsq(z):
    return (1 - mp.tanh(z) ** 2) ** 2


def p(label, value):
    print("%-44s %.17g" % (label, float(value)))


def main():
    print("# tanh kernel map values")
    p("tanh <s^2> K=0.04", gauss_expect(tanh_sq, mp.mpf("0.04")))
    p("tanh <s^2> K=0.25", gauss_expect(tanh_sq, mp.mpf("0.25")))
    p("tanh <s^2> K=1", gauss_expect(tanh_sq, mp.mpf(1)))

    print("\n# tanh susceptibilities (C_W = 1)")
    for K in ("0.04", "0.25", "0.5"):
        Kv = mp.mpf(K)
        p("tanh chi_par K=%s" % K, weak_deriv(tanh_sq, Kv, 2) / 2)
        p("tanh chi_perp K=%s" % K, gauss_expect(tanh_spsq, Kv))

    print("\n# tanh T-functionals at K=0.25, C_W=1")
    for (i, j) in [(0, 2), (2, 2), (4, 1), (0, 3), (0, 4), (2, 3), (4, 2)]:
        p("tanh T(%d,%d) K=0.25" % (i, j),
          t_functional(tanh_sq, mp.mpf("0.25"), i, j, 1))
    print("\n# tanh T-functionals at K=1, C_W=1")
    for (i, j) in [(0, 2), (2, 2), (4, 1), (0, 3), (0, 4), (2, 3), (4, 2)]:
        p("tanh T(%d,%d) K=1" % (i, j),
          t_functional(tanh_sq, mp.mpf(1), i, j, 1))

    print("\n# tanh small-K limits of high-order brackets (C_W = 1)")
    for K in ("0.01", "0.001"):
        Kv = mp.mpf(K)
        p("tanh <d4 s^2> K=%s" % K, weak_deriv(tanh_sq, Kv, 4))
        p("tanh <d3 s*s'> K=%s" % K, weak_deriv(tanh_ssp, Kv, 3))
        p("tanh <d2 s'^2> K=%s" % K, weak_deriv(tanh_spsq, Kv, 2))
        p("tanh <d4 s'^2> K=%s" % K, weak_deriv(tanh_spsq, Kv, 4))
        p("tanh <d6 s'^2> K=%s" % K, weak_deriv(tanh_spsq, Kv, 6))

    print("\n# ReLU family (half-Gaussian closed forms)")
    relu_sq = lambda z: z ** 2 if z > 0 else mp.mpf(0)
    p("relu <s^2> K=2 (expect 1)", gauss_expect(relu_sq, mp.mpf(2)))
    p("relu <d2 s^2> K=2 (expect 1)", weak_deriv(relu_sq, mp.mpf(2), 2))
    # T(0,2) at K=1, C_W=2: 4*(3/2 - 1/4) = 5
    p("relu T(0,2) K=1 C_W=2 (expect 5)",
      t_functional(relu_sq, mp.mpf(1), 0, 2, 2))
    p("relu T(2,1) K=1 C_W=2 (expect 2)",
      t_functional(relu_sq, mp.mpf(1), 2, 1, 2))
    # independent pair: E[relu(z1)relu(z2)] = (E relu)^2 = 1/(2pi)
    e_relu = gauss_expect(lambda z: z if z > 0 else mp.mpf(0), mp.mpf(1))
    p("relu expect2 K2=(1,0,1) (expect 1/(2pi))", e_relu ** 2)
    p("1/(2pi)", 1 / (2 * mp.pi))

    print("\n# leaky ReLU a+=1, a-=0.5")
    ap, am = mp.mpf(1), mp.mpf("0.5")
    c_w = 2 / (ap ** 2 + am ** 2)
    p("leaky C_W crit (expect 1.6)", c_w)
    bracket = 6 * (ap ** 4 + am ** 4) / (ap ** 2 + am ** 2) ** 2 - 1
    p("leaky bracket (expect 3.08)", bracket)
    leaky_spsq = lambda z: ap ** 2 if z > 0 else am ** 2
    p("leaky chi_perp any K (expect 1)",
      c_w * gauss_expect(leaky_spsq, mp.mpf("0.7")))
    p("leaky a-=0.1 C_W crit", 2 / (1 + mp.mpf("0.01")))

    print("\n# tanh Taylor data")
    # sigma3 is the z^3 Taylor coefficient, so tanh has -1/3 and a = 2
    h = mp.mpf("1e-6")
    d3 = (mp.tanh(2 * h) - 2 * mp.tanh(h) + 2 * mp.tanh(-h)
          - mp.tanh(-2 * h)) / (2 * h ** 3)
    p("tanh sigma3*6 via FD (expect -2)", d3)
    p("a = -6*sigma3/sigma1 (expect 2)", -6 * (d3 / 6))

    print("\n# Stein identity check: f=z, K=4, i=1 -> 1")
    p("weak_deriv(z,4,1)", weak_deriv(lambda z: z, mp.mpf(4), 1))


if __name__ == "__main__":
    main()
