// core/src/derivs.cpp

// Copyright 2026   hierarchylab authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "hierarchylab/derivs.hpp"

#include <cmath>
#include <cstdint>

#include "hierarchylab/gauss.hpp"

namespace hierarchylab {

namespace {

constexpr double kEulerGamma = 0.57721566490153286;

// Base univariate functions: products of s = sigma(z) and f = sigma'(z).
enum Fn : int { kS2 = 0, kSS, kFF, kS4, kS3S, kS2F, kSF3, kF4, kFnCount };

double fn_val(const Nonlinearity& nl, int f, double z) {
  const double s = nl.eval(z, 0);
  const double d = nl.eval(z, 1);
  switch (f) {
    case kS2:
      return s * s;
    case kSS:
      return s * d;
    case kFF:
      return d * d;
    case kS4:
      return s * s * s * s;
    case kS3S:
      return s * s * s * d;
    case kS2F:
      return s * s * d * d;
    case kSF3:
      return s * d * d * d;
    case kF4:
      return d * d * d * d;
  }
  throw Error("unreachable base function");
}

int prod_fn(int a, int b) {
  if (a > b) std::swap(a, b);
  if (a == kS2 && b == kS2) return kS4;
  if (a == kS2 && b == kSS) return kS3S;
  if (a == kS2 && b == kFF) return kS2F;
  if (a == kSS && b == kSS) return kS2F;
  if (a == kSS && b == kFF) return kSF3;
  if (a == kFF && b == kFF) return kF4;
  throw Error("unreachable base function product");
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) {
    r = r * (n - i) / (i + 1);
  }
  return r;
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

double dfact(int n) {
  // n!! with (-1)!! = 1
  double r = 1.0;
  while (n > 1) {
    r *= n;
    n -= 2;
  }
  return r;
}

// E[e1^a e2^b] for a centered bivariate normal with variances v1, v2 and
// covariance c.
double central2(int a, int b, double v1, double v2, double c) {
  double total = 0.0;
  for (int k = 0; k <= std::min(a, b); ++k) {
    if ((a - k) % 2 != 0 || (b - k) % 2 != 0) continue;
    total += binom(a, k) * binom(b, k) * factorial(k) * std::pow(c, k) *
             dfact(a - k - 1) * std::pow(v1, (a - k) / 2) * dfact(b - k - 1) *
             std::pow(v2, (b - k) / 2);
  }
  return total;
}

// Monomial powers of u in the probabilists' Hermite basis, u^k =
// sum_j coef He_j(u), for k <= 4.
struct HeTerm {
  int j;
  double coef;
};
constexpr HeTerm kHeDecomp[5][3] = {
    {{0, 1.0}, {0, 0.0}, {0, 0.0}},
    {{1, 1.0}, {0, 0.0}, {0, 0.0}},
    {{2, 1.0}, {0, 1.0}, {0, 0.0}},
    {{3, 1.0}, {1, 3.0}, {0, 0.0}},
    {{4, 1.0}, {2, 6.0}, {0, 3.0}},
};
constexpr int kHeCount[5] = {1, 1, 2, 2, 3};

// Per-layer cache of weak derivative brackets <d^i f>_{K00} and the
// reduction of (d1 z, d2 z) insertions through their conditional law
// given z.
class BracketTable {
 public:
  BracketTable(const DerivKernelState& st, const Nonlinearity& nl)
      : nl_(nl),
        K00_(st.K00),
        b1_(0.0),
        b2_(0.0),
        v1_(st.K11),
        v2_(st.K22),
        c12_(st.K12) {
    if (!(st.K00 > 0.0)) {
      throw SingularKernel("derivative brackets need K00 > 0");
    }
    b1_ = st.K10 / st.K00;
    b2_ = st.K20 / st.K00;
    v1_ = st.K11 - st.K10 * st.K10 / st.K00;
    v2_ = st.K22 - st.K20 * st.K20 / st.K00;
    c12_ = st.K12 - st.K10 * st.K20 / st.K00;
  }

  // <d^i f>_{K00} in the weak sense.
  double d(int f, int i) const {
    const std::uint64_t bit = 1ull << (f * 8 + i);
    if (!(have_ & bit)) {
      const Nonlinearity& nl = nl_;
      const int fn = f;
      d_[f][i] = weak_deriv_expect(
          [&nl, fn](double z) { return fn_val(nl, fn, z); }, Kernel1{K00_},
          i);
      have_ |= bit;
    }
    return d_[f][i];
  }

  // <z^k d^m f>_{K00}
  double zded(int f, int m, int k) const {
    double total = 0.0;
    for (int t = 0; t < kHeCount[k]; ++t) {
      const HeTerm& term = kHeDecomp[k][t];
      total += term.coef * std::pow(K00_, 0.5 * (k + term.j)) *
               d(f, m + term.j);
    }
    return total;
  }

  // <d^m f(z) (d1 z)^p (d2 z)^q> under the joint Gaussian.
  double reduce(int f, int m, int p, int q) const {
    double total = 0.0;
    for (int i = 0; i <= p; ++i) {
      for (int j = 0; j <= q; ++j) {
        const double cm = central2(p - i, q - j, v1_, v2_, c12_);
        if (cm == 0.0) continue;
        total += binom(p, i) * binom(q, j) * std::pow(b1_, i) *
                 std::pow(b2_, j) * cm * zded(f, m, i + j);
      }
    }
    return total;
  }

 private:
  const Nonlinearity& nl_;
  double K00_;
  double b1_, b2_, v1_, v2_, c12_;
  mutable double d_[kFnCount][8] = {};
  mutable std::uint64_t have_ = 0;
};

// Observable channels: O_00 = s^2, O_j0 = s s' d_j z, O_jj = (s')^2
// (d_j z)^2, O_12 = (s')^2 d_1 z d_2 z.
struct Obs {
  int fn;
  int p;
  int q;
};
constexpr Obs kObs[6] = {{kS2, 0, 0}, {kSS, 1, 0}, {kSS, 0, 1},
                         {kFF, 2, 0}, {kFF, 0, 2}, {kFF, 1, 1}};

struct BrTerm {
  int dir;  // DerivIndex of the Gaussian direction pair hit by d_a d_b
  double val;
};

// Br[P][(ab)] = w_ab <d_a d_b O_P> with w_aa = 1/2 and w_ab = 1 otherwise,
// a, b ranging over the Gaussian coordinates (z, d1 z, d2 z).
int rule_brackets(const BracketTable& br, int P, BrTerm out[4]) {
  switch (P) {
    case kD00:
      out[0] = {kD00, 0.5 * br.reduce(kS2, 2, 0, 0)};
      return 1;
    case kD10:
      out[0] = {kD00, 0.5 * br.reduce(kSS, 2, 1, 0)};
      out[1] = {kD10, br.d(kSS, 1)};
      return 2;
    case kD20:
      out[0] = {kD00, 0.5 * br.reduce(kSS, 2, 0, 1)};
      out[1] = {kD20, br.d(kSS, 1)};
      return 2;
    case kD11:
      out[0] = {kD00, 0.5 * br.reduce(kFF, 2, 2, 0)};
      out[1] = {kD10, 2.0 * br.reduce(kFF, 1, 1, 0)};
      out[2] = {kD11, br.d(kFF, 0)};
      return 3;
    case kD22:
      out[0] = {kD00, 0.5 * br.reduce(kFF, 2, 0, 2)};
      out[1] = {kD20, 2.0 * br.reduce(kFF, 1, 0, 1)};
      out[2] = {kD22, br.d(kFF, 0)};
      return 3;
    case kD12:
      out[0] = {kD00, 0.5 * br.reduce(kFF, 2, 1, 1)};
      out[1] = {kD10, br.reduce(kFF, 1, 0, 1)};
      out[2] = {kD20, br.reduce(kFF, 1, 1, 0)};
      out[3] = {kD12, br.d(kFF, 0)};
      return 4;
  }
  throw Error("unreachable observable index");
}

void check_kernel_psd(const DerivKernelState& st) {
  const double scale =
      std::max({st.K00, st.K11, st.K22, std::abs(st.K10), std::abs(st.K20),
                std::abs(st.K12), 1e-300});
  const double tol = 1e-12 * scale;
  if (st.K00 < -tol || st.K11 < -tol || st.K22 < -tol) {
    throw NotPSD("derivative kernel has a negative diagonal");
  }
  const double m2a = st.K00 * st.K11 - st.K10 * st.K10;
  const double m2b = st.K00 * st.K22 - st.K20 * st.K20;
  const double m2c = st.K11 * st.K22 - st.K12 * st.K12;
  const double det3 = st.K00 * m2c - st.K10 * (st.K10 * st.K22 -
                                               st.K12 * st.K20) +
                      st.K20 * (st.K10 * st.K12 - st.K11 * st.K20);
  const double tol2 = 1e-12 * scale * scale;
  if (m2a < -tol2 || m2b < -tol2 || m2c < -tol2 ||
      det3 < -1e-12 * scale * scale * scale) {
    throw NotPSD("derivative kernel matrix is indefinite");
  }
}

}  // namespace

int deriv_pair_slot(int a, int b) {
  if (a < 0 || a > 5 || b < 0 || b > 5) {
    throw OutOfRange("derivative pair indices must lie in 0..5");
  }
  if (a > b) std::swap(a, b);
  return a * 6 - a * (a + 1) / 2 + b;
}

DerivKernelState deriv_kernel_seed(const NetworkSpec& spec) {
  validate_spec(spec);
  if (spec.n0 < 2) {
    throw OutOfRange(
        "derivative recursions differentiate along the first two input "
        "coordinates and need n0 >= 2");
  }
  DerivKernelState st;
  st.ell = 1;
  st.K00 = kernel_seed(spec);
  st.K10 = spec.C_W * spec.input_x[0] / spec.n0;
  st.K20 = spec.C_W * spec.input_x[1] / spec.n0;
  st.K11 = spec.C_W / spec.n0;
  st.K22 = spec.C_W / spec.n0;
  st.K12 = 0.0;
  return st;
}

DerivKernelState deriv_kernel_step(const DerivKernelState& st, double c_b,
                                   double c_w, const Nonlinearity& nl) {
  check_kernel_psd(st);
  BracketTable br(st, nl);
  const double chi_par = 0.5 * c_w * br.d(kS2, 2);
  const double chi_perp = c_w * br.d(kFF, 0);
  const double amp = c_w * br.d(kFF, 2);
  DerivKernelState out;
  out.ell = st.ell + 1;
  out.K00 = c_b + c_w * br.d(kS2, 0);
  out.K10 = chi_par * st.K10;
  out.K20 = chi_par * st.K20;
  out.K11 = amp * st.K10 * st.K10 + chi_perp * st.K11;
  out.K22 = amp * st.K20 * st.K20 + chi_perp * st.K22;
  out.K12 = amp * st.K10 * st.K20 + chi_perp * st.K12;
  return out;
}

DerivFourthFull deriv_fourth_step_full(const DerivFourthFull& f4,
                                       const DerivKernelState& st, int n_ell,
                                       double c_w, const Nonlinearity& nl) {
  if (n_ell != kInfiniteWidth && n_ell < 1) {
    throw OutOfRange("layer width must be >= 1 or kInfiniteWidth");
  }
  BracketTable br(st, nl);

  BrTerm terms[6][4];
  int term_count[6];
  double means[6];
  for (int p = 0; p < 6; ++p) {
    term_count[p] = rule_brackets(br, p, terms[p]);
    means[p] = br.reduce(kObs[p].fn, 0, kObs[p].p, kObs[p].q);
  }

  const double cw2 = c_w * c_w;
  DerivFourthFull out{};
  for (int p = 0; p < 6; ++p) {
    for (int q = p; q < 6; ++q) {
      double homog = 0.0;
      for (int a = 0; a < term_count[p]; ++a) {
        for (int b = 0; b < term_count[q]; ++b) {
          homog += f4[deriv_pair_slot(terms[p][a].dir, terms[q][b].dir)] *
                   terms[p][a].val * terms[q][b].val;
        }
      }
      double value = cw2 * homog;
      if (n_ell != kInfiniteWidth) {
        const double joint =
            br.reduce(prod_fn(kObs[p].fn, kObs[q].fn), 0,
                      kObs[p].p + kObs[q].p, kObs[p].q + kObs[q].q);
        value += cw2 * (joint - means[p] * means[q]) / n_ell;
      }
      out[deriv_pair_slot(p, q)] = value;
    }
  }
  return out;
}

namespace {

DerivFourthFull embed_canonical(const DerivFourthState& f4) {
  DerivFourthFull full{};
  full[deriv_pair_slot(kD00, kD00)] = f4.k0000;
  full[deriv_pair_slot(kD00, kD10)] = f4.k1000;
  full[deriv_pair_slot(kD10, kD10)] = f4.k1010;
  full[deriv_pair_slot(kD10, kD20)] = f4.k1020;
  full[deriv_pair_slot(kD00, kD11)] = f4.k1100;
  full[deriv_pair_slot(kD00, kD12)] = f4.k1200;
  full[deriv_pair_slot(kD10, kD11)] = f4.k1110;
  full[deriv_pair_slot(kD10, kD12)] = f4.k1210;
  full[deriv_pair_slot(kD20, kD11)] = f4.k1120;
  full[deriv_pair_slot(kD11, kD11)] = f4.k1111;
  full[deriv_pair_slot(kD11, kD22)] = f4.k1122;
  full[deriv_pair_slot(kD12, kD12)] = f4.k1212;
  // swap-map completion of the mirrored entries
  full[deriv_pair_slot(kD00, kD20)] = f4.k1000;
  full[deriv_pair_slot(kD20, kD20)] = f4.k1010;
  full[deriv_pair_slot(kD00, kD22)] = f4.k1100;
  full[deriv_pair_slot(kD20, kD22)] = f4.k1110;
  full[deriv_pair_slot(kD20, kD12)] = f4.k1210;
  full[deriv_pair_slot(kD10, kD22)] = f4.k1120;
  full[deriv_pair_slot(kD22, kD22)] = f4.k1111;
  // the (11)(12) and (22)(12) entries never feed the canonical set
  full[deriv_pair_slot(kD11, kD12)] = 0.0;
  full[deriv_pair_slot(kD22, kD12)] = 0.0;
  return full;
}

}  // namespace

DerivFourthState deriv_fourth_canonical(const DerivFourthFull& full) {
  DerivFourthState f4;
  f4.k0000 = full[deriv_pair_slot(kD00, kD00)];
  f4.k1000 = full[deriv_pair_slot(kD00, kD10)];
  f4.k1010 = full[deriv_pair_slot(kD10, kD10)];
  f4.k1020 = full[deriv_pair_slot(kD10, kD20)];
  f4.k1100 = full[deriv_pair_slot(kD00, kD11)];
  f4.k1200 = full[deriv_pair_slot(kD00, kD12)];
  f4.k1110 = full[deriv_pair_slot(kD10, kD11)];
  f4.k1210 = full[deriv_pair_slot(kD10, kD12)];
  f4.k1120 = full[deriv_pair_slot(kD20, kD11)];
  f4.k1111 = full[deriv_pair_slot(kD11, kD11)];
  f4.k1122 = full[deriv_pair_slot(kD11, kD22)];
  f4.k1212 = full[deriv_pair_slot(kD12, kD12)];
  return f4;
}

DerivFourthState deriv_fourth_step(const DerivFourthState& f4,
                                   const DerivKernelState& st, int n_ell,
                                   double c_w, const Nonlinearity& nl) {
  return deriv_fourth_canonical(
      deriv_fourth_step_full(embed_canonical(f4), st, n_ell, c_w, nl));
}

SCorrectionState s_correction_step_full(const SCorrectionState& s,
                                        const DerivKernelState& st,
                                        const DerivFourthFull& f4, int n_ell,
                                        double c_w, const Nonlinearity& nl) {
  (void)n_ell;  // width enters only through the fourth cumulants
  BracketTable br(st, nl);
  const double chi_par = 0.5 * c_w * br.d(kS2, 2);
  const double chi_perp = c_w * br.d(kFF, 0);
  const double k0000 = f4[deriv_pair_slot(kD00, kD00)];
  const double k1000 = f4[deriv_pair_slot(kD00, kD10)];
  const double k2000 = f4[deriv_pair_slot(kD00, kD20)];
  const double k1010 = f4[deriv_pair_slot(kD10, kD10)];
  const double k2020 = f4[deriv_pair_slot(kD20, kD20)];
  const double k1100 = f4[deriv_pair_slot(kD00, kD11)];
  const double k2200 = f4[deriv_pair_slot(kD00, kD22)];
  const double k1200 = f4[deriv_pair_slot(kD00, kD12)];
  const double k1020 = f4[deriv_pair_slot(kD10, kD20)];

  SCorrectionState out;
  out.S00 = c_w / 8.0 * k0000 * br.d(kS2, 4) + chi_par * s.S00;

  const double dss3 = br.d(kSS, 3);
  out.S10 = chi_par * s.S10 + st.K10 * 0.5 * c_w * s.S00 * dss3 +
            c_w / 8.0 *
                (k0000 * br.reduce(kSS, 4, 1, 0) + 4.0 * k1000 * dss3);
  out.S20 = chi_par * s.S20 + st.K20 * 0.5 * c_w * s.S00 * dss3 +
            c_w / 8.0 *
                (k0000 * br.reduce(kSS, 4, 0, 1) + 4.0 * k2000 * dss3);

  const double dff2 = br.d(kFF, 2);
  const double dff4 = br.d(kFF, 4);
  const double dff6 = br.d(kFF, 6);
  const auto s_jj = [&](double Kjj, double Kj0, double Sjj, double Sj0,
                        double kj000, double kj0j0, double kjj00) {
    return chi_perp * Sjj + 0.5 * c_w * Kjj * s.S00 * dff2 +
           0.5 * c_w * Kj0 * Kj0 * s.S00 * dff4 +
           2.0 * c_w * Kj0 * Sj0 * dff2 +
           c_w / 8.0 *
               (k0000 * (Kjj * dff4 + Kj0 * Kj0 * dff6) +
                8.0 * kj000 * Kj0 * dff4 +
                4.0 * (2.0 * kj0j0 + kjj00) * dff2);
  };
  out.S11 = s_jj(st.K11, st.K10, s.S11, s.S10, k1000, k1010, k1100);
  out.S22 = s_jj(st.K22, st.K20, s.S22, s.S20, k2000, k2020, k2200);

  out.S12 = chi_perp * s.S12 +
            0.5 * c_w * s.S00 * (st.K12 * dff2 + st.K10 * st.K20 * dff4) +
            c_w * (st.K10 * s.S20 + st.K20 * s.S10) * dff2 +
            c_w / 8.0 *
                (k0000 * (st.K12 * dff4 + st.K10 * st.K20 * dff6) +
                 4.0 * (k1000 * st.K20 + k2000 * st.K10) * dff4 +
                 4.0 * (k1200 + 2.0 * k1020) * dff2);
  return out;
}

SCorrectionState s_correction_step(const SCorrectionState& s,
                                   const DerivKernelState& st,
                                   const DerivFourthState& f4, int n_ell,
                                   double c_w, const Nonlinearity& nl) {
  return s_correction_step_full(s, st, embed_canonical(f4), n_ell, c_w, nl);
}

DerivTrajectory run_derivs(const NetworkSpec& spec) {
  DerivTrajectory traj;
  DerivTrajectoryPoint point;
  point.kernels = deriv_kernel_seed(spec);
  point.fourth_full.fill(0.0);
  point.fourth = deriv_fourth_canonical(point.fourth_full);
  traj.points.push_back(point);
  for (int n_ell : spec.widths) {
    DerivTrajectoryPoint next;
    next.s = s_correction_step_full(point.s, point.kernels, point.fourth_full,
                                    n_ell, spec.C_W, spec.nl);
    next.fourth_full = deriv_fourth_step_full(
        point.fourth_full, point.kernels, n_ell, spec.C_W, spec.nl);
    next.fourth = deriv_fourth_canonical(next.fourth_full);
    next.kernels =
        deriv_kernel_step(point.kernels, spec.C_b, spec.C_W, spec.nl);
    traj.points.push_back(next);
    point = traj.points.back();
  }
  return traj;
}

DerivAsymptotics deriv_asymptotics(int ell, int n, int n0,
                                   const std::vector<double>& x,
                                   const Nonlinearity& nl,
                                   const CriticalTuning& tuning) {
  if (tuning.cls != UniversalityClass::kKStarZero) {
    throw NotKStarZeroClass(
        "derivative asymptotics hold only for the K* = 0 class");
  }
  if (ell < 1 || n < 1 || n0 < 1 || x.empty()) {
    throw OutOfRange("deriv_asymptotics needs ell, n, n0 >= 1 and an input");
  }
  const double a = nl.taylor_a();
  const double xi = static_cast<double>(ell) / n;
  const double l = static_cast<double>(ell);
  DerivAsymptotics out;
  out.K00 = 1.0 / (a * l);
  out.K10 = tuning.C_W * std::exp(-2.0 * kEulerGamma) * x[0] / (n0 * l * l);
  out.K11 = tuning.C_W * std::exp(-kEulerGamma) / (n0 * l);
  out.ratio_k1100 = -xi / 3.0;
  out.ratio_k1111 = 8.0 * xi / 3.0;
  out.ratio_k1122 = 2.0 * xi / 3.0;
  out.kappa00 = (1.0 - xi / 3.0) * out.K00;
  out.kappa11 = (1.0 + xi / 3.0) * out.K11;
  return out;
}

double evgp_predict(const NetworkSpec& spec) {
  validate_spec(spec);
  if (classify(spec.nl) != UniversalityClass::kKStarZero) {
    throw NotKStarZeroClass(
        "the gradient variance prediction holds only for the K* = 0 class");
  }
  double norm2 = 0.0;
  double norm4 = 0.0;
  for (double v : spec.input_x) {
    norm2 += v * v;
    norm4 += v * v * v * v;
  }
  if (norm2 == 0.0) {
    throw ZeroInput("evgp_predict needs a nonzero input");
  }
  const double n0 = static_cast<double>(spec.n0);
  const double k1 = spec.C_W * norm2 / n0;
  const Nonlinearity& nl = spec.nl;
  const double f2 = expect1(
      [&nl](double z) {
        const double d = nl.eval(z, 1);
        return d * d;
      },
      Kernel1{k1});
  const double f4 = expect1(
      [&nl](double z) {
        const double d = nl.eval(z, 1);
        return d * d * d * d;
      },
      Kernel1{k1});
  const double input_ratio = (norm4 / n0) / ((norm2 / n0) * (norm2 / n0));
  const double c_sigma = 3.0 * (f4 / (f2 * f2)) * input_ratio - 1.0;
  double xi = 0.0;
  for (int w : spec.widths) {
    xi += 1.0 / static_cast<double>(w);
  }
  return c_sigma * (1.0 + 8.0 * xi / 3.0);
}

}  // namespace hierarchylab
