#!/usr/bin/env python3
# tools/oracles/tanh_hierarchy_constants.py

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

"""Independent transcription of the k4/k6/k8 cumulant recursions.

Runs the hierarchy for critical tanh and freezes the normalized cumulants
k_hat_{2k} = k_{2k}/K^k at the output layer, together with their ratios to
the universal depth-scaling constants C4*xi, C6*xi^2, C8*xi^3 with
C4 = 2/3, C6 = 28/15, C8 = 8756/315. Also prints the exact ReLU slope data
for the k4_hat-linear-in-L property.
"""

import numpy as np
from scipy.linalg import eigh_tridiagonal

C4 = 2.0 / 3.0
C6 = 28.0 / 15.0
C8 = 8756.0 / 315.0


def make_gh(nodes):
    off = np.sqrt(np.arange(1, nodes, dtype=np.float64))
    vals, vecs = eigh_tridiagonal(np.zeros(nodes), off)
    return vals, vecs[0, :] ** 2


X, W = make_gh(301)


def expect(f, K):
    return float(np.dot(W, f(np.sqrt(K) * X)))


def he(i, u):
    h0, h1 = np.ones_like(u), u.copy()
    if i == 0:
        return h0
    for k in range(1, i):
        h0, h1 = h1, u * h1 - k * h0
    return h1


def weak_deriv(f, K, i):
    val = float(np.dot(W, he(i, X) * f(np.sqrt(K) * X)))
    return val / K ** (0.5 * i)


def t_functionals(K, c_w):
    s2 = lambda z: np.tanh(z) ** 2
    c = expect(s2, K)
    T = {}
    for (i, j) in [(0, 2), (2, 2), (4, 1), (0, 3), (0, 4), (2, 3), (4, 2)]:
        g = lambda z, j=j: (np.tanh(z) ** 2 - c) ** j
        T[(i, j)] = c_w ** j * (expect(g, K) if i == 0 else weak_deriv(g, K, i))
    chi_par = 0.5 * c_w * weak_deriv(s2, K, 2)
    return T, chi_par, c


def hierarchy(k1, widths, c_b, c_w):
    K, k4, k6, k8 = k1, 0.0, 0.0, 0.0
    states = [(1, K, k4, k6, k8)]
    for n in widths:
        T, chi, mean_s2 = t_functionals(K, c_w)
        k4n = T[(0, 2)] / n + chi ** 2 * k4
        k6n = (T[(0, 3)] / n ** 2 + (3 * T[(2, 2)] / (2 * n)) * chi * k4
               - (3 * T[(4, 1)] / 8) * (chi * k4) ** 2 + chi ** 3 * k6)
        k8n = ((T[(0, 4)] - 3 * T[(0, 2)] ** 2) / n ** 3
               + (2 * T[(2, 3)] * chi - 12 * T[(0, 2)] * chi ** 2
                  + 1.5 * T[(2, 2)] ** 2 - 1.5 * T[(4, 1)] * T[(0, 2)])
               * k4 / n ** 2
               - (2 * T[(2, 2)] * T[(4, 1)] * chi
                  - 0.5 * T[(4, 2)] * chi ** 2 + chi ** 4) * k4 ** 2 / n
               + (5 * T[(0, 2)] * T[(4, 1)] * chi
                  + 12 * T[(2, 2)] * chi ** 2) * k6 / n
               + (3.0 / 32.0) * T[(4, 1)] ** 2 * chi ** 2 * k4 ** 3
               - 0.5 * chi ** 3 * T[(4, 1)] * k4 * k6
               + chi ** 4 * k8)
        K = c_b + c_w * mean_s2
        k4, k6, k8 = k4n, k6n, k8n
        states.append((states[-1][0] + 1, K, k4, k6, k8))
    return states


def report(tag, st, n):
    ell, K, k4, k6, k8 = st
    xi = (ell - 1) / n
    h4, h6, h8 = k4 / K ** 2, k6 / K ** 3, k8 / K ** 4
    print("%s ell=%d K=%.17g" % (tag, ell, K))
    print("  k4_hat=%.17g  ratio to C4*xi   = %.6f" % (h4, h4 / (C4 * xi)))
    print("  k6_hat=%.17g  ratio to C6*xi^2 = %.6f" % (h6, h6 / (C6 * xi ** 2)))
    print("  k8_hat=%.17g  ratio to C8*xi^3 = %.6f" % (h8, h8 / (C8 * xi ** 3)))


def main():
    print("# tanh critical, K1 = 1")
    for L, n in [(16, 64), (32, 128), (64, 256)]:
        st = hierarchy(1.0, [n] * L, 0.0, 1.0)
        report("L=%d n=%d (xi=0.25)" % (L, n), st[-1], n)

    print("\n# early states for unit tests (n=256, K1=1)")
    st = hierarchy(1.0, [256] * 64, 0.0, 1.0)
    for idx in (1, 2, 3):
        ell, K, k4, k6, k8 = st[idx]
        print("ell=%d K=%.17g k4=%.17g k6=%.17g k8=%.17g" % (ell, K, k4, k6, k8))

    print("\n# tanh xi=0.25 with L=64 at n=256: absolute cumulants at output")
    ell, K, k4, k6, k8 = st[-1]
    print("ell=%d K=%.17g k4=%.17g k6=%.17g k8=%.17g" % (ell, K, k4, k6, k8))

    print("\n# ReLU exact: k4_hat(L) = 5L/n at K=1 (slope property, n=64)")
    for L in (2, 4, 8, 16):
        print("L=%2d  k4_hat=%.17g" % (L, 5.0 * L / 64.0))

    print("\n# tanh n=64 L=16 k4_hat (MC power planning)")
    st = hierarchy(1.0, [64] * 16, 0.0, 1.0)
    report("L=16 n=64 (xi=0.25)", st[-1], 64)


if __name__ == "__main__":
    main()
