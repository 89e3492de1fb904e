#!/usr/bin/env python3
# tools/oracles/tanh_kernel_decay.py

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

"""Iterates the critical tanh kernel map K' = <tanh^2>_K to depth 10^4.

Freezes 2*ell*K at checkpoints (the decay-law check) and the deviation
bound |2*ell*K - 1| <= C*ell^{-0.9} scan used by the property tests.
"""

import numpy as np
from scipy.linalg import eigh_tridiagonal


def make_gh(nodes):
    # Golub-Welsch for the probabilists' Hermite weight: Jacobi matrix has
    # zero diagonal and off-diagonal sqrt(k); weights are the squared first
    # eigenvector components (they sum to 1 for the normalized weight).
    off = np.sqrt(np.arange(1, nodes, dtype=np.float64))
    vals, vecs = eigh_tridiagonal(np.zeros(nodes), off)
    return vals, vecs[0, :] ** 2


def main():
    x, w = make_gh(401)

    for k1 in (1.0, 0.5):
        print("# tanh kernel iteration from K1 = %g" % k1)
        K = k1
        marks = {10, 100, 1000, 10000}
        worst = 0.0
        for ell in range(1, 10001):
            if ell in marks:
                print("ell=%5d K=%.17g  2*ell*K=%.17g" % (ell, K, 2 * ell * K))
            if ell >= 10:
                dev = abs(2 * ell * K - 1) * ell ** 0.9
                worst = max(worst, dev)
            K = float(np.dot(w, np.tanh(np.sqrt(K) * x) ** 2))
        print("max over ell in [10,1e4] of |2*ell*K-1|*ell^0.9 = %.6f" % worst)
        print()


if __name__ == "__main__":
    main()
