#!/usr/bin/env python3
# tools/oracles/evgp_constants.py

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

"""Gradient-variance prediction constants and a Monte Carlo preview.

Freezes the quadrature constants entering the gradient-fluctuation ratio
prediction, the closed-form single-layer (linear surrogate) value, and runs
a vectorized finite-width simulation of the full prediction at the
acceptance-test operating point to measure the actual margin.
"""

import math
import numpy as np
from mpmath import mp, mpf, quad, exp, sqrt, tanh

mp.dps = 30


def gauss_expect(f, K):
    s = sqrt(mpf(K))
    return quad(lambda u: f(s * u) * exp(-u * u / 2), [-12, 12]) / sqrt(2 * mp.pi)


def c_sigma(K, x, n0):
    fp2 = gauss_expect(lambda z: (1 - tanh(z) ** 2) ** 2, K)
    fp4 = gauss_expect(lambda z: (1 - tanh(z) ** 2) ** 4, K)
    xs2 = sum(v * v for v in x) / n0
    xs4 = sum(v ** 4 for v in x) / n0
    return 3 * (fp4 / fp2 ** 2) * (xs4 / xs2 ** 2) - 1


def main():
    print("=== quadrature constants (tanh) ===")
    for K in (1e-6, 0.01, 0.25):
        fp2 = gauss_expect(lambda z: (1 - tanh(z) ** 2) ** 2, K)
        fp4 = gauss_expect(lambda z: (1 - tanh(z) ** 2) ** 4, K)
        print("K=%g  <f^2>=%s  <f^4>=%s  3r-1=%s"
              % (K, mp.nstr(fp2, 17), mp.nstr(fp4, 17),
                 mp.nstr(3 * fp4 / fp2 ** 2 - 1, 17)))

    x16 = [0.1] * 16
    c = c_sigma(0.01, x16, 16)
    print("\nC_sigma(K=0.01, equal-magnitude R^16) = %s" % mp.nstr(c, 17))
    xi = 0.25
    pred = c * (1 + mpf(8) / 3 * xi)
    print("prediction at xi=0.25: %s" % mp.nstr(pred, 17))
    print("K->0 limit check: C_sigma(1e-6) = %s (-> 2)"
          % mp.nstr(c_sigma(1e-6, x16, 16), 17))

    print("\n=== L=0 linear surrogate closed form ===")
    for x, n0, n1 in (((1.0, 2.0), 2, 3), ((0.8, -0.5, 0.3), 3, 4)):
        xs4 = sum(v ** 4 for v in x)
        xs2 = sum(v * v for v in x)
        print("x=%s n0=%d n1=%d  ratio=%.17g" %
              (x, n0, n1, n0 * n1 * xs4 / xs2 ** 2 - 1))

    print("\n=== MC preview: tanh critical, x=(0.1)*16, n=64, L=16 ===")
    rng = np.random.default_rng(20260814)
    n0, n, L, nd = 16, 64, 16, 200000
    x = np.full(n0, 0.1)
    batches = 20
    per = nd // batches
    gm_b, gv_b = [], []
    for b in range(batches):
        z = np.broadcast_to(x, (per, n0))
        w = rng.standard_normal((per, n, n0)) / math.sqrt(n0)
        zs = [np.matmul(w, z[..., None])[..., 0]]
        ws = [w]
        for _ in range(L - 1):
            s = np.tanh(zs[-1])
            w = rng.standard_normal((per, n, n)) / math.sqrt(n)
            zs.append(np.matmul(w, s[..., None])[..., 0])
            ws.append(w)
        w_out = rng.standard_normal((per, 1, n)) / math.sqrt(n)
        # backprop d z_out / d z^(k)
        j = w_out[:, 0, :] * (1 - np.tanh(zs[-1]) ** 2)
        for k in range(L - 2, -1, -1):
            j = np.matmul(ws[k + 1].transpose(0, 2, 1), j[..., None])[..., 0]
            j *= 1 - np.tanh(zs[k]) ** 2
        delta = j  # (per, n): includes sigma'(z^(1))
        xs2 = float(np.dot(x, x))
        xs4 = float(np.sum(x ** 4))
        gm = (xs2 / n0) * np.sum(delta ** 2, axis=1) / n
        gv = (xs4 / n0) * np.sum(delta ** 4, axis=1) / n - gm ** 2
        gm_b.append(gm.mean())
        gv_b.append(gv.mean())
    gm_b, gv_b = np.array(gm_b), np.array(gv_b)
    GM, GV = gm_b.mean(), gv_b.mean()
    ratio = GV / GM ** 2
    # delta method over batch means
    dgm, dgv = gm_b - GM, gv_b - GV
    grad = np.array([1.0 / GM ** 2, -2.0 * GV / GM ** 3])
    cov = np.cov(np.vstack([gv_b, gm_b]))
    se = math.sqrt(grad @ cov @ grad / batches)
    print("E[GradMean]=%.8g  E[GradVar]=%.8g" % (GM, GV))
    print("MC ratio = %.6f +- %.6f" % (ratio, se))
    print("prediction = %.6f   rel dev = %.2f%%"
          % (float(pred), 100 * (ratio / float(pred) - 1)))


if __name__ == "__main__":
    main()
