#!/usr/bin/env python3
# tools/oracles/deriv_cumulant_recursions.py

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

"""Derivative-kernel and derivative-fourth-cumulant recursion oracle.

Implements the layer recursions for the joint law of (z, d1 z, d2 z) twice:

  1. an explicit transcription of the per-entry update formulas (with the
     handful of obvious misprints corrected: a 26 that should be 16, three
     single-vs-double derivative slips, one dropped square and one dropped
     sigma' power in a source bracket), and
  2. a generating-rule form: every update is
        kap'[P][Q] = (C_W^2/n) Cov(O_P, O_Q)
                     + C_W^2 sum_{A,B} kap[A][B] * Br[P][A] * Br[Q][B]
     with O_00 = s^2, O_j0 = s*s' d_j z, O_jj = (s')^2 (d_j z)^2,
     O_12 = (s')^2 d_1z d_2z and Br[P][(ab)] = w_ab <d_a d_b O_P>,
     w_aa = 1/2, w_ab = 1 for a != b.

The two paths agreeing to machine precision on an asymmetric trajectory
validates both; the frozen trajectory values feed the C++ unit tests.
All Gaussian brackets reduce to univariate weak derivatives through the
conditional law of (d1 z, d2 z) given z.
"""

import math
import numpy as np
from scipy.linalg import eigh_tridiagonal

EULER_GAMMA = 0.57721566490153286


def make_gh(nodes):
    off = np.sqrt(np.arange(1, nodes, dtype=np.float64))
    vals, vecs = eigh_tridiagonal(np.zeros(nodes), off)
    return vals, vecs[0, :] ** 2


GH_X, GH_W = make_gh(301)

# base z-functions: products of s = sigma(z) and f = sigma'(z)
def tanh_fns():
    t = np.tanh(GH_X[None, :] * 1.0)  # placeholder, rebuilt per K below
    return None


FN_NAMES = ["s2", "ss", "ff", "s4", "s3s", "s2f", "sf3", "f4"]


def eval_fns_tanh(zs):
    t = np.tanh(zs)
    f = 1.0 - t * t
    return {"s2": t * t, "ss": t * f, "ff": f * f, "s4": t ** 4,
            "s3s": t ** 3 * f, "s2f": t * t * f * f, "sf3": t * f ** 3,
            "f4": f ** 4}


def eval_fns_homog(zs, ap, am):
    # every power of sigma' takes its two-sided average at the z = 0 node so
    # that symmetric quadrature rules integrate the jump exactly
    pos = zs > 1e-14
    neg = zs < -1e-14
    mid = ~(pos | neg)

    def fpow(k):
        return np.where(pos, ap ** k,
                        np.where(neg, am ** k, 0.5 * (ap ** k + am ** k)))

    s = np.where(pos, ap * zs, np.where(neg, am * zs, 0.0))
    return {"s2": s * s, "ss": s * fpow(1), "ff": fpow(2), "s4": s ** 4,
            "s3s": s ** 3 * fpow(1), "s2f": s * s * fpow(2),
            "sf3": s * fpow(3), "f4": fpow(4)}


PROD = {("s2", "s2"): "s4", ("s2", "ss"): "s3s", ("s2", "ff"): "s2f",
        ("ss", "ss"): "s2f", ("ss", "ff"): "sf3", ("ff", "ff"): "f4"}


def prod_name(a, b):
    return PROD.get((a, b)) or PROD[(b, a)]


HE_DECOMP = {0: {0: 1.0}, 1: {1: 1.0}, 2: {2: 1.0, 0: 1.0},
             3: {3: 1.0, 1: 3.0}, 4: {4: 1.0, 2: 6.0, 0: 3.0}}


def dfact(n):
    # (n)!! with (-1)!! = 1
    r = 1
    while n > 1:
        r *= n
        n -= 2
    return r


def central2(a, b, v1, v2, c):
    # E[e1^a e2^b] for centered bivariate normal
    total = 0.0
    for k in range(0, min(a, b) + 1):
        if (a - k) % 2 or (b - k) % 2:
            continue
        total += (math.comb(a, k) * math.comb(b, k) * math.factorial(k)
                  * c ** k * dfact(a - k - 1) * v1 ** ((a - k) // 2)
                  * dfact(b - k - 1) * v2 ** ((b - k) // 2))
    return total


class BracketTable:
    """Per-layer cache of <d^i f>_{K00} and the (d1,d2)|z reduction."""

    def __init__(self, kernels, eval_fns):
        self.K00 = kernels["K00"]
        self.K10, self.K20 = kernels["K10"], kernels["K20"]
        self.K11, self.K22 = kernels["K11"], kernels["K22"]
        self.K12 = kernels["K12"]
        zs = np.sqrt(self.K00) * GH_X
        self.fn_vals = eval_fns(zs)
        self._he = {}
        self._d = {}
        self.b1 = self.K10 / self.K00
        self.b2 = self.K20 / self.K00
        self.v1 = self.K11 - self.K10 ** 2 / self.K00
        self.v2 = self.K22 - self.K20 ** 2 / self.K00
        self.c12 = self.K12 - self.K10 * self.K20 / self.K00

    def he(self, i):
        if i not in self._he:
            if i == 0:
                self._he[i] = np.ones_like(GH_X)
            elif i == 1:
                self._he[i] = GH_X.copy()
            else:
                self._he[i] = GH_X * self.he(i - 1) - (i - 1) * self.he(i - 2)
        return self._he[i]

    def d(self, name, i):
        # <d^i f>_K via the Hermite identity
        key = (name, i)
        if key not in self._d:
            raw = float(np.dot(GH_W, self.he(i) * self.fn_vals[name]))
            self._d[key] = raw / self.K00 ** (0.5 * i)
        return self._d[key]

    def zded(self, name, m, k):
        # <z^k d^m f>_K
        total = 0.0
        for j, coef in HE_DECOMP[k].items():
            total += coef * self.K00 ** (0.5 * (k + j)) * self.d(name, m + j)
        return total

    def reduce(self, name, m, p, q):
        # <d^m f(z) (d1 z)^p (d2 z)^q> under the joint Gaussian
        total = 0.0
        for i in range(p + 1):
            for j in range(q + 1):
                cm = central2(p - i, q - j, self.v1, self.v2, self.c12)
                if cm == 0.0:
                    continue
                coef = (math.comb(p, i) * math.comb(q, j)
                        * self.b1 ** i * self.b2 ** j * cm)
                total += coef * self.zded(name, m, i + j)
        return total


# ---------------------------------------------------------------------------
# kernel recursion

def kernel_step(st, c_b, c_w, eval_fns):
    br = BracketTable(st, eval_fns)
    chi_par = 0.5 * c_w * br.d("s2", 2)
    chi_perp = c_w * br.d("ff", 0)
    amp = c_w * br.d("ff", 2)
    return {
        "K00": c_b + c_w * br.d("s2", 0),
        "K10": chi_par * st["K10"],
        "K20": chi_par * st["K20"],
        "K11": amp * st["K10"] ** 2 + chi_perp * st["K11"],
        "K22": amp * st["K20"] ** 2 + chi_perp * st["K22"],
        "K12": amp * st["K10"] * st["K20"] + chi_perp * st["K12"],
    }


# ---------------------------------------------------------------------------
# transcription path: canonical entries written out, mirrors by the swap map

CANON = ["0000", "1000", "1010", "1020", "1100", "1200",
         "1110", "1210", "1120", "1111", "1122", "1212"]
MIRROR = {"1000": "2000", "1010": "2020", "1100": "2200",
          "1110": "2220", "1210": "1220", "1120": "2210", "1111": "2222"}
ALL_KEYS = CANON + sorted(MIRROR.values())

SWAP = {"0000": "0000", "1020": "1020", "1200": "1200",
        "1122": "1122", "1212": "1212"}
for c, m in MIRROR.items():
    SWAP[c] = m
    SWAP[m] = c


def swap_kernels(st):
    return {"K00": st["K00"], "K10": st["K20"], "K20": st["K10"],
            "K11": st["K22"], "K22": st["K11"], "K12": st["K12"]}


def swap_kappas(kap):
    return {k: kap[SWAP[k]] for k in kap}


def canonical_updates(kap, br, n, c_w):
    """The twelve written-out update formulas (misprints corrected)."""
    r = br.reduce
    d = br.d
    # recurring brackets
    d2s2 = d("s2", 2)
    dss = d("ss", 1)
    ff0 = d("ff", 0)
    d2ss_1 = r("ss", 2, 1, 0)
    d2ss_2 = r("ss", 2, 0, 1)
    dff_1 = r("ff", 1, 1, 0)
    dff_2 = r("ff", 1, 0, 1)
    d2ff_11 = r("ff", 2, 2, 0)
    d2ff_22 = r("ff", 2, 0, 2)
    d2ff_12 = r("ff", 2, 1, 1)
    pre = c_w ** 2 / 8.0
    src = c_w ** 2 / n

    out = {}
    out["0000"] = (src * (d("s4", 0) - d("s2", 0) ** 2)
                   + pre * 8.0 * kap["0000"] * (0.5 * d2s2) ** 2)
    # for readability the remaining homogeneous parts keep the displayed
    # integer coefficients over a common /8
    out["1000"] = (src * (r("s3s", 0, 1, 0) - d("s2", 0) * r("ss", 0, 1, 0))
                   + pre * (2 * kap["0000"] * d2s2 * d2ss_1
                            + 4 * kap["1000"] * d2s2 * dss))
    out["1010"] = (src * (r("s2f", 0, 2, 0) - r("ss", 0, 1, 0) ** 2)
                   + pre * (2 * kap["0000"] * d2ss_1 ** 2
                            + 8 * kap["1000"] * dss * d2ss_1
                            + 8 * kap["1010"] * dss ** 2))
    out["1020"] = (src * (r("s2f", 0, 1, 1)
                          - r("ss", 0, 1, 0) * r("ss", 0, 0, 1))
                   + pre * (2 * kap["0000"] * d2ss_1 * d2ss_2
                            + 4 * kap["1000"] * dss * d2ss_2
                            + 4 * kap["2000"] * dss * d2ss_1
                            + 8 * kap["1020"] * dss ** 2))
    out["1100"] = (src * (r("s2f", 0, 2, 0) - d("s2", 0) * r("ff", 0, 2, 0))
                   + pre * (2 * kap["0000"] * d2s2 * d2ff_11
                            + 8 * kap["1000"] * dff_1 * d2s2
                            + 4 * kap["1100"] * ff0 * d2s2))
    out["1200"] = (src * (r("s2f", 0, 1, 1) - r("ff", 0, 1, 1) * d("s2", 0))
                   + pre * (2 * kap["0000"] * d2ff_12 * d2s2
                            + 4 * kap["1000"] * dff_2 * d2s2
                            + 4 * kap["2000"] * dff_1 * d2s2
                            + 4 * kap["1200"] * ff0 * d2s2))
    out["1110"] = (src * (r("sf3", 0, 3, 0)
                          - r("ss", 0, 1, 0) * r("ff", 0, 2, 0))
                   + pre * (2 * kap["0000"] * d2ss_1 * d2ff_11
                            + 4 * kap["1000"] * (dss * d2ff_11
                                                 + 2 * d2ss_1 * dff_1)
                            + 16 * kap["1010"] * dss * dff_1
                            + 4 * kap["1100"] * d2ss_1 * ff0
                            + 8 * kap["1110"] * ff0 * dss))
    out["1210"] = (src * (r("sf3", 0, 2, 1)
                          - r("ff", 0, 1, 1) * r("ss", 0, 1, 0))
                   + pre * (2 * kap["0000"] * d2ff_12 * d2ss_1
                            + 4 * kap["1000"] * (dff_2 * d2ss_1
                                                 + d2ff_12 * dss)
                            + 4 * kap["2000"] * dff_1 * d2ss_1
                            + 4 * kap["1200"] * ff0 * d2ss_1
                            + 8 * kap["1010"] * dff_2 * dss
                            + 8 * kap["1020"] * dff_1 * dss
                            + 8 * kap["1210"] * ff0 * dss))
    out["1120"] = (src * (r("sf3", 0, 2, 1)
                          - r("ff", 0, 2, 0) * r("ss", 0, 0, 1))
                   + pre * (2 * kap["0000"] * d2ff_11 * d2ss_2
                            + 8 * kap["1000"] * dff_1 * d2ss_2
                            + 4 * kap["2000"] * d2ff_11 * dss
                            + 4 * kap["1100"] * ff0 * d2ss_2
                            + 16 * kap["1020"] * dff_1 * dss
                            + 8 * kap["1120"] * dss * ff0))
    out["1111"] = (src * (r("f4", 0, 4, 0) - r("ff", 0, 2, 0) ** 2)
                   + pre * (2 * kap["0000"] * d2ff_11 ** 2
                            + 16 * kap["1000"] * dff_1 * d2ff_11
                            + 8 * kap["1100"] * ff0 * d2ff_11
                            + 32 * kap["1010"] * dff_1 ** 2
                            + 32 * kap["1110"] * ff0 * dff_1
                            + 8 * kap["1111"] * ff0 ** 2))
    out["1122"] = (src * (r("f4", 0, 2, 2)
                          - r("ff", 0, 2, 0) * r("ff", 0, 0, 2))
                   + pre * (2 * kap["0000"] * d2ff_11 * d2ff_22
                            + 8 * kap["1000"] * dff_1 * d2ff_22
                            + 8 * kap["2000"] * dff_2 * d2ff_11
                            + 4 * kap["1100"] * ff0 * d2ff_22
                            + 4 * kap["2200"] * ff0 * d2ff_11
                            + 32 * kap["1020"] * dff_1 * dff_2
                            + 16 * kap["1120"] * ff0 * dff_2
                            + 16 * kap["2210"] * ff0 * dff_1
                            + 8 * kap["1122"] * ff0 ** 2))
    out["1212"] = (src * (r("f4", 0, 2, 2) - r("ff", 0, 1, 1) ** 2)
                   + pre * (2 * kap["0000"] * d2ff_12 ** 2
                            + 8 * kap["1000"] * dff_2 * d2ff_12
                            + 8 * kap["2000"] * dff_1 * d2ff_12
                            + 8 * kap["1200"] * ff0 * d2ff_12
                            + 16 * kap["1020"] * dff_2 * dff_1
                            + 8 * kap["1010"] * dff_2 ** 2
                            + 8 * kap["2020"] * dff_1 ** 2
                            + 16 * kap["1210"] * ff0 * dff_2
                            + 16 * kap["1220"] * ff0 * dff_1
                            + 8 * kap["1212"] * ff0 ** 2))
    return out


def fourth_step_transcribed(kap, st, n, c_w, eval_fns):
    br = BracketTable(st, eval_fns)
    out = canonical_updates(kap, br, n, c_w)
    br_sw = BracketTable(swap_kernels(st), eval_fns)
    out_sw = canonical_updates(swap_kappas(kap), br_sw, n, c_w)
    for canon, mirror in MIRROR.items():
        out[mirror] = out_sw[canon]
    return out


# ---------------------------------------------------------------------------
# generating-rule path (full symmetric matrix over the six observables)

IDX = ["00", "10", "20", "11", "22", "12"]
OBS = {"00": ("s2", 0, 0), "10": ("ss", 1, 0), "20": ("ss", 0, 1),
       "11": ("ff", 2, 0), "22": ("ff", 0, 2), "12": ("ff", 1, 1)}
RANK = {"12": 5, "11": 4, "22": 3, "10": 2, "20": 1, "00": 0}


def pair_key(a, b):
    return a + b if RANK[a] >= RANK[b] else b + a


def rule_brackets(br):
    # Br[P][A]: A iterates the derivative pair hitting observable P
    out = {}
    out["00"] = {"00": 0.5 * br.d("s2", 2)}
    out["10"] = {"00": 0.5 * br.reduce("ss", 2, 1, 0), "10": br.d("ss", 1)}
    out["20"] = {"00": 0.5 * br.reduce("ss", 2, 0, 1), "20": br.d("ss", 1)}
    out["11"] = {"00": 0.5 * br.reduce("ff", 2, 2, 0),
                 "10": 2.0 * br.reduce("ff", 1, 1, 0), "11": br.d("ff", 0)}
    out["22"] = {"00": 0.5 * br.reduce("ff", 2, 0, 2),
                 "20": 2.0 * br.reduce("ff", 1, 0, 1), "22": br.d("ff", 0)}
    out["12"] = {"00": 0.5 * br.reduce("ff", 2, 1, 1),
                 "10": br.reduce("ff", 1, 0, 1),
                 "20": br.reduce("ff", 1, 1, 0), "12": br.d("ff", 0)}
    return out


def fourth_step_rule(kap, st, n, c_w, eval_fns):
    br = BracketTable(st, eval_fns)
    B = rule_brackets(br)
    means = {a: br.reduce(OBS[a][0], 0, OBS[a][1], OBS[a][2]) for a in IDX}
    out = {}
    for i, P in enumerate(IDX):
        for Q in IDX[i:]:
            fp, pp, qp = OBS[P]
            fq, pq, qq = OBS[Q]
            srcv = (br.reduce(prod_name(fp, fq), 0, pp + pq, qp + qq)
                    - means[P] * means[Q])
            homog = 0.0
            for A, bpa in B[P].items():
                for Bb, bqb in B[Q].items():
                    homog += kap[pair_key(A, Bb)] * bpa * bqb
            out[pair_key(P, Q)] = c_w ** 2 * (srcv / n + homog)
    return out


# ---------------------------------------------------------------------------
# finite-width kernel corrections S_(ij)

def s_step(S, kap, st, n, c_w, eval_fns):
    br = BracketTable(st, eval_fns)
    d = br.d
    chi_par = 0.5 * c_w * d("s2", 2)
    chi_perp = c_w * d("ff", 0)
    K10, K20 = st["K10"], st["K20"]
    K11, K22, K12 = st["K11"], st["K22"], st["K12"]
    out = {}
    out["S00"] = c_w / 8.0 * kap["0000"] * d("s2", 4) + chi_par * S["S00"]

    def s_j0(Kj0, kj000, dssj):
        return (chi_par * S["S10" if Kj0 is K10 else "S20"]
                + Kj0 * 0.5 * c_w * S["S00"] * d("ss", 3)
                + c_w / 8.0 * (kap["0000"] * dssj + 4 * kj000 * d("ss", 3)))

    out["S10"] = s_j0(K10, kap["1000"], br.reduce("ss", 4, 1, 0))
    out["S20"] = s_j0(K20, kap["2000"], br.reduce("ss", 4, 0, 1))

    def s_jj(Kjj, Kj0, Sjj, Sj0, kj000, kj0j0, kjj00):
        return (chi_perp * Sjj
                + 0.5 * c_w * Kjj * S["S00"] * d("ff", 2)
                + 0.5 * c_w * Kj0 ** 2 * S["S00"] * d("ff", 4)
                + 2.0 * c_w * Kj0 * Sj0 * d("ff", 2)
                + c_w / 8.0 * (kap["0000"] * (Kjj * d("ff", 4)
                                              + Kj0 ** 2 * d("ff", 6))
                               + 8 * kj000 * Kj0 * d("ff", 4)
                               + 4 * (2 * kj0j0 + kjj00) * d("ff", 2)))

    out["S11"] = s_jj(K11, K10, S["S11"], S["S10"],
                      kap["1000"], kap["1010"], kap["1100"])
    out["S22"] = s_jj(K22, K20, S["S22"], S["S20"],
                      kap["2000"], kap["2020"], kap["2200"])
    out["S12"] = (chi_perp * S["S12"]
                  + 0.5 * c_w * S["S00"] * (K12 * d("ff", 2)
                                            + K10 * K20 * d("ff", 4))
                  + c_w * (K10 * S["S20"] + K20 * S["S10"]) * d("ff", 2)
                  + c_w / 8.0 * (kap["0000"] * (K12 * d("ff", 4)
                                                + K10 * K20 * d("ff", 6))
                                 + 4 * (kap["1000"] * K20
                                        + kap["2000"] * K10) * d("ff", 4)
                                 + 4 * (kap["1200"]
                                        + 2 * kap["1020"]) * d("ff", 2)))
    return out


# ---------------------------------------------------------------------------
# trajectories

def seed_state(x, n0, c_b, c_w):
    norm_sq = sum(v * v for v in x)
    return {"K00": c_b + c_w * norm_sq / n0,
            "K10": c_w * x[0] / n0, "K20": c_w * x[1] / n0,
            "K11": c_w / n0, "K22": c_w / n0, "K12": 0.0}


def zero_kappas(full=False):
    keys = list(ALL_KEYS)
    if full:
        keys += ["1211", "1222"]
    return {k: 0.0 for k in keys}


def run(x, n0, widths, c_b, c_w, eval_fns, with_s=True, compare=False):
    st = seed_state(x, n0, c_b, c_w)
    kap_t = zero_kappas()
    kap_r = zero_kappas(full=True)
    S = {k: 0.0 for k in ["S00", "S10", "S20", "S11", "S22", "S12"]}
    states = [(1, dict(st), dict(kap_t), dict(S))]
    max_dev = 0.0
    for n in widths:
        kap_t_new = fourth_step_transcribed(kap_t, st, n, c_w, eval_fns)
        kap_r_new = fourth_step_rule(kap_r, st, n, c_w, eval_fns)
        if compare:
            for k in ALL_KEYS:
                a, b = kap_t_new[k], kap_r_new[k]
                scale = max(abs(a), abs(b), 1e-300)
                if abs(a - b) > 1e-30:
                    max_dev = max(max_dev, abs(a - b) / scale)
        if with_s:
            S = s_step(S, kap_t, st, n, c_w, eval_fns)
        st = kernel_step(st, c_b, c_w, eval_fns)
        kap_t, kap_r = kap_t_new, kap_r_new
        states.append((states[-1][0] + 1, dict(st), dict(kap_t), dict(S)))
    return states, max_dev


def print_state(tag, rec):
    ell, st, kap, S = rec
    print("%s ell=%d" % (tag, ell))
    print("  K: " + " ".join("%s=%.17g" % (k, st[k])
                             for k in ["K00", "K10", "K20", "K11", "K22", "K12"]))
    for k in CANON:
        print("  kap%s=%.17g" % (k, kap[k]))
    for c, m in sorted(MIRROR.items()):
        print("  kap%s=%.17g (mirror)" % (m, kap[m]))
    print("  S: " + " ".join("%s=%.17g" % (k, S[k]) for k in
                             ["S00", "S10", "S20", "S11", "S22", "S12"]))


def main():
    tanh = eval_fns_tanh

    print("=== A: tanh critical, n0=4, x=(1,1,1,1), n=64, to ell=65 ===")
    states, dev = run([1.0, 1.0, 1.0, 1.0], 4, [64] * 64, 0.0, 1.0, tanh,
                      compare=True)
    print("max rel deviation transcription vs rule: %.3e" % dev)
    for idx in (1, 2):
        print_state("A", states[idx])
    for ell in (64, 65):
        print_state("A", states[ell - 1])
        _, st, kap, S = states[ell - 1]
        xi = ell / 64.0
        print("  ratios at ell=%d: k1100/(K11*K00)=%.8f  (-xi/3=%.8f)"
              % (ell, kap["1100"] / (st["K11"] * st["K00"]), -xi / 3))
        print("                   k1122/(K11*K22)=%.8f  (2xi/3=%.8f)"
              % (kap["1122"] / (st["K11"] * st["K22"]), 2 * xi / 3))
        print("                   k1111/K11^2=%.8f  (8xi/3=%.8f)"
              % (kap["1111"] / st["K11"] ** 2, 8 * xi / 3))

    print("\n=== A2: tanh critical decoupled, n0=4, x=(0,0,1,1), n=64, "
          "to ell=65 ===")
    states, dev = run([0.0, 0.0, 1.0, 1.0], 4, [64] * 64, 0.0, 1.0, tanh,
                      compare=True)
    print("max rel deviation transcription vs rule: %.3e" % dev)
    for idx in (1, 2):
        print_state("A2", states[idx])
    for ell in (64, 65):
        print_state("A2", states[ell - 1])
        _, st, kap, S = states[ell - 1]
        xi = ell / 64.0
        print("  ratios at ell=%d: k1100/(K11*K00)=%.8f  (-xi/3=%.8f)"
              % (ell, kap["1100"] / (st["K11"] * st["K00"]), -xi / 3))
        print("                   k1122/(K11*K22)=%.8f  (2xi/3=%.8f)"
              % (kap["1122"] / (st["K11"] * st["K22"]), 2 * xi / 3))
        print("                   k1111/K11^2=%.8f  (8xi/3=%.8f)"
              % (kap["1111"] / st["K11"] ** 2, 8 * xi / 3))
        print("                   k1212/(K11*K22)=%.8f  (xi=%.8f)"
              % (kap["1212"] / (st["K11"] * st["K22"]), xi))
    neg00 = all(states[i][3]["S00"] < 0 for i in range(2, 65))
    pos11 = all(states[i][3]["S11"] > 0 for i in range(2, 65))
    print("decoupled: S00 < 0 for all ell in [3,65]: %s" % neg00)
    print("decoupled: S11 > 0 for all ell in [3,65]: %s" % pos11)
    odd_zero = max(abs(states[64][2][k]) for k in
                   ["1000", "2000", "1110", "2220", "1210", "1220",
                    "1020", "1120", "2210"])
    print("decoupled: max |odd-sector kappa| at ell=65: %.3e" % odd_zero)

    print("\n=== C2: decoupled long run, n=1, to ell=2000 ===")
    states, _ = run([0.0, 0.0, 1.0, 1.0], 4, [1] * 1999, 0.0, 1.0, tanh,
                    with_s=False)
    for ell in (250, 500, 1000, 2000):
        _, st, kap, _ = states[ell - 1]
        print("ell=%4d  3k0000/(2l*K00^2)=%.6f  -3k1100/(l*K11*K00)=%.6f  "
              "3k1111/(8l*K11^2)=%.6f" %
              (ell, 3 * kap["0000"] / (2 * ell * st["K00"] ** 2),
               -3 * kap["1100"] / (ell * st["K11"] * st["K00"]),
               3 * kap["1111"] / (8 * ell * st["K11"] ** 2)))
        print("          3k1122/(2l*K11*K22)=%.6f  k1212/(l*K11*K22)=%.6f  "
              "3k1010/(l*K00*K11)=%.6f" %
              (3 * kap["1122"] / (2 * ell * st["K11"] * st["K22"]),
               kap["1212"] / (ell * st["K11"] * st["K22"]),
               3 * kap["1010"] / (ell * st["K00"] * st["K11"])))

    print("\n=== B: tanh critical asymmetric, n0=3, x=(0.8,-0.5,0.3), "
          "n=32, to ell=10 ===")
    states, dev = run([0.8, -0.5, 0.3], 3, [32] * 9, 0.0, 1.0, tanh,
                      compare=True)
    print("max rel deviation transcription vs rule: %.3e" % dev)
    for idx in (1, 2, 9):
        print_state("B", states[idx])

    print("\n=== C: long run, n=1 (normalized constants), to ell=2000 ===")
    states, _ = run([1.0, 1.0, 1.0, 1.0], 4, [1] * 1999, 0.0, 1.0, tanh,
                    with_s=False)
    for ell in (250, 500, 1000, 2000):
        _, st, kap, _ = states[ell - 1]
        n = 1.0
        print("ell=%4d" % ell)
        print("  3n*k0000/(2l*K00^2) = %.6f" %
              (3 * n * kap["0000"] / (2 * ell * st["K00"] ** 2)))
        print("  3n*k1000/(l*K10*K00) = %.6f" %
              (3 * n * kap["1000"] / (ell * st["K10"] * st["K00"])))
        print("  3n*k1010/(l*K00*K11) = %.6f" %
              (3 * n * kap["1010"] / (ell * st["K00"] * st["K11"])))
        print("  -3n*k1100/(l*K11*K00) = %.6f" %
              (-3 * n * kap["1100"] / (ell * st["K11"] * st["K00"])))
        print("  3n*k1111/(8l*K11^2) = %.6f" %
              (3 * n * kap["1111"] / (8 * ell * st["K11"] ** 2)))
        print("  3n*k1122/(2l*K11*K22) = %.6f" %
              (3 * n * kap["1122"] / (2 * ell * st["K11"] * st["K22"])))
        print("  n*k1212/(l*K11*K22) = %.6f" %
              (n * kap["1212"] / (ell * st["K11"] * st["K22"])))
        print("  l*n*k0000*3a^2/2 (a=2) = %.6f" %
              (ell * n * kap["0000"] * 6))

    print("\n=== D: S-corrections on trajectory A (n=64) ===")
    states, _ = run([1.0, 1.0, 1.0, 1.0], 4, [64] * 64, 0.0, 1.0, tanh)
    neg00 = all(states[i][3]["S00"] < 0 for i in range(2, 65))
    pos11 = all(states[i][3]["S11"] > 0 for i in range(2, 65))
    print("S00 < 0 for all ell in [3,65]: %s" % neg00)
    print("S11 > 0 for all ell in [3,65]: %s" % pos11)
    for ell in (8, 16, 32, 64, 65):
        _, st, _, S = states[ell - 1]
        print("ell=%2d  -3n*S00/(l*K00)=%.6f  3n*S11/(l*K11)=%.6f  "
              "3n*S10/(l*K10)=%.6f" %
              (ell, -3 * 64 * S["S00"] / (ell * st["K00"]),
               3 * 64 * S["S11"] / (ell * st["K11"]),
               3 * 64 * S["S10"] / (ell * st["K10"])))

    print("\n=== E: K11 decay, n0=10, K00(1)=0.5, to ell=100 ===")
    x = [math.sqrt(0.5)] * 10
    states, _ = run(x, 10, [16] * 99, 0.0, 1.0, tanh, with_s=False)
    _, st, _, _ = states[99]
    pred = math.exp(-EULER_GAMMA) / 1000.0
    print("K11(100)=%.17g  e^-gamma/1000=%.17g  ratio=%.6f"
          % (st["K11"], pred, st["K11"] / pred))
    print("K00(100)=%.17g  1/(2*100)=%.17g" % (st["K00"], 0.005))
    print("K10(100)=%.17g  pred e^-2gamma*x1/(n0*l^2)=%.17g"
          % (st["K10"], math.exp(-2 * EULER_GAMMA) * x[0] / 10.0 / 100.0 ** 2))

    print("\n=== F: ReLU value sector, n0=4, x=(0,0,1,1), C_W=2, n=64 ===")
    relu = lambda zs: eval_fns_homog(zs, 1.0, 0.0)
    states, dev = run([0.0, 0.0, 1.0, 1.0], 4, [64] * 8, 0.0, 2.0, relu,
                      with_s=False, compare=True)
    print("max rel deviation transcription vs rule: %.3e" % dev)
    for ell in (2, 3, 9):
        _, st, kap, _ = states[ell - 1]
        print("ell=%d K00=%.17g kap0000=%.17g (expect %.17g) kap1111=%.17g"
              % (ell, st["K00"], kap["0000"], 5.0 * (ell - 1) / 64.0,
                 kap["1111"]))

    print("\n=== G: single-step kap1111 source at small K (tanh) ===")
    st = {"K00": 0.001, "K10": 0.0, "K20": 0.0,
          "K11": 0.05, "K22": 0.05, "K12": 0.0}
    br = BracketTable(st, tanh)
    srcv = br.reduce("f4", 0, 4, 0) - br.reduce("ff", 0, 2, 0) ** 2
    print("Cov(O11,O11)=%.17g  2*K11^2=%.17g  ratio=%.6f"
          % (srcv, 2 * 0.05 ** 2, srcv / (2 * 0.05 ** 2)))


if __name__ == "__main__":
    main()
