// core/src/crit.cpp

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

#include "hierarchylab/crit.hpp"

#include <array>
#include <cmath>

#include "hierarchylab/gauss.hpp"

namespace hierarchylab {

namespace {

constexpr int kMaxNewtonIters = 200;
constexpr double kNewtonTol = 1e-10;
constexpr double kParamFloor = 1e-12;

double mean_sigma_sq(const Nonlinearity& nl, double K) {
  return expect1(
      [&nl](double z) {
        const double s = nl.eval(z);
        return s * s;
      },
      Kernel1{K});
}

double homog1_chi_factor(const Nonlinearity& nl) {
  const double ap = nl.a_plus();
  const double am = nl.a_minus();
  return 0.5 * (ap * ap + am * am);
}

}  // namespace

double chi_parallel(const Nonlinearity& nl, double c_w, double K) {
  if (nl.kind() == NonlinKind::kHomog1) {
    return c_w * homog1_chi_factor(nl);
  }
  if (K == 0.0) {
    const double s1 = nl.sigma1();
    return c_w * s1 * s1;
  }
  const double d2 = weak_deriv_expect(
      [&nl](double z) {
        const double s = nl.eval(z);
        return s * s;
      },
      Kernel1{K}, 2);
  return 0.5 * c_w * d2;
}

double chi_perp(const Nonlinearity& nl, double c_w, double K) {
  if (nl.kind() == NonlinKind::kHomog1) {
    return c_w * homog1_chi_factor(nl);
  }
  if (K == 0.0) {
    const double d1 = nl.eval(0.0, 1);
    return c_w * d1 * d1;
  }
  return c_w * expect1(
                   [&nl](double z) {
                     const double d = nl.eval(z, 1);
                     return d * d;
                   },
                   Kernel1{K});
}

UniversalityClass classify(const Nonlinearity& nl) {
  if (nl.kind() == NonlinKind::kHomog1) {
    return UniversalityClass::kHomog1;
  }
  return odd_activation(nl) ? UniversalityClass::kKStarZero
                            : UniversalityClass::kGenericCritical;
}

namespace {

std::array<double, 2> residual(const Nonlinearity& nl, double k_star,
                               double c_w) {
  return {chi_parallel(nl, c_w, k_star) - 1.0,
          chi_perp(nl, c_w, k_star) - 1.0};
}

double norm_inf(const std::array<double, 2>& r) {
  return std::max(std::abs(r[0]), std::abs(r[1]));
}

CriticalTuning tune_generic(const Nonlinearity& nl) {
  const double s1 = nl.sigma1();
  double k_star = 1.0;
  double c_w = (std::isfinite(s1) && s1 != 0.0) ? 1.0 / (s1 * s1) : 1.0;

  auto r = residual(nl, k_star, c_w);
  for (int iter = 0; iter < kMaxNewtonIters; ++iter) {
    if (norm_inf(r) <= kNewtonTol) {
      break;
    }
    if (iter == kMaxNewtonIters - 1) {
      throw NoCriticalPoint("critical tuning did not converge in 200 steps");
    }
    const double hk = 1e-6 * std::max(1.0, std::abs(k_star));
    const double hw = 1e-6 * std::max(1.0, std::abs(c_w));
    const double k_lo = std::max(k_star - hk, kParamFloor);
    const auto rkp = residual(nl, k_star + hk, c_w);
    const auto rkm = residual(nl, k_lo, c_w);
    const auto rwp = residual(nl, k_star, c_w + hw);
    const auto rwm = residual(nl, k_star, std::max(c_w - hw, kParamFloor));
    const double dk = (k_star + hk) - k_lo;
    const double dw = (c_w + hw) - std::max(c_w - hw, kParamFloor);
    const double j00 = (rkp[0] - rkm[0]) / dk;
    const double j01 = (rwp[0] - rwm[0]) / dw;
    const double j10 = (rkp[1] - rkm[1]) / dk;
    const double j11 = (rwp[1] - rwm[1]) / dw;
    const double det = j00 * j11 - j01 * j10;
    if (det == 0.0 || !std::isfinite(det)) {
      throw NoCriticalPoint("singular Jacobian in critical tuning");
    }
    const double step_k = (-r[0] * j11 + r[1] * j01) / det;
    const double step_w = (-r[1] * j00 + r[0] * j10) / det;

    double lambda = 1.0;
    bool moved = false;
    for (int half = 0; half < 12; ++half) {
      const double k_try = std::max(k_star + lambda * step_k, kParamFloor);
      const double w_try = std::max(c_w + lambda * step_w, kParamFloor);
      const auto r_try = residual(nl, k_try, w_try);
      if (norm_inf(r_try) < norm_inf(r)) {
        k_star = k_try;
        c_w = w_try;
        r = r_try;
        moved = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!moved) {
      throw NoCriticalPoint("critical tuning stalled without progress");
    }
  }

  double c_b = k_star - c_w * mean_sigma_sq(nl, k_star);
  if (c_b < 0.0) {
    if (c_b < -1e-12 * std::max(1.0, k_star)) {
      throw NoCriticalPoint("critical point requires a negative C_b");
    }
    c_b = 0.0;
  }
  // Both susceptibilities were solved together; re-check the parallel one
  // so a bad line search cannot slip through.
  if (std::abs(chi_parallel(nl, c_w, k_star) - 1.0) > 1e-8) {
    throw NoCriticalPoint("parallel susceptibility check failed");
  }
  return CriticalTuning{c_b, c_w, k_star, UniversalityClass::kGenericCritical};
}

}  // namespace

CriticalTuning tune_critical(const Nonlinearity& nl) {
  switch (classify(nl)) {
    case UniversalityClass::kHomog1: {
      const double ap = nl.a_plus();
      const double am = nl.a_minus();
      const double denom = ap * ap + am * am;
      if (denom <= 0.0) {
        throw NoCriticalPoint("Homog1 activation with zero slopes");
      }
      // Scale invariance makes every kernel a fixed point; K* = 1 is the
      // conventional representative.
      return CriticalTuning{0.0, 2.0 / denom, 1.0, UniversalityClass::kHomog1};
    }
    case UniversalityClass::kKStarZero: {
      const double s1 = nl.sigma1();
      if (!std::isfinite(s1) || s1 == 0.0) {
        throw NoCriticalPoint("activation has no linear response at zero");
      }
      return CriticalTuning{0.0, 1.0 / (s1 * s1), 0.0,
                            UniversalityClass::kKStarZero};
    }
    case UniversalityClass::kGenericCritical:
      return tune_generic(nl);
  }
  throw Error("unreachable universality class");
}

std::string universality_to_string(UniversalityClass cls) {
  switch (cls) {
    case UniversalityClass::kHomog1:
      return "Homog1";
    case UniversalityClass::kKStarZero:
      return "KStarZero";
    case UniversalityClass::kGenericCritical:
      return "GenericCritical";
  }
  throw Error("unreachable universality class");
}

UniversalityClass universality_from_string(const std::string& name) {
  if (name == "Homog1") return UniversalityClass::kHomog1;
  if (name == "KStarZero") return UniversalityClass::kKStarZero;
  if (name == "GenericCritical") return UniversalityClass::kGenericCritical;
  throw OutOfRange("unknown universality class: " + name);
}

}  // namespace hierarchylab
