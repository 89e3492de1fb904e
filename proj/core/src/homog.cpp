// core/src/homog.cpp

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

#include "hierarchylab/homog.hpp"

#include <cmath>

#include "hierarchylab/rng.hpp"

namespace hierarchylab {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Stream tag for the per-sample lane space (disjoint from the mc module's
// layer-indexed streams).
constexpr std::uint32_t kHomogStream = 0x80000000u;

double clamp01(double v) {
  if (v < 0.0) return 0.0;
  if (v > 1.0) return 1.0;
  return v;
}

// Gamma(alpha, 1) via Marsaglia-Tsang squeeze, boosted for alpha < 1.
double gamma_sample(SequentialRng& rng, double alpha) {
  if (alpha <= 0.0) return 0.0;
  if (alpha < 1.0) {
    const double g = gamma_sample(rng, alpha + 1.0);
    return g * std::pow(rng.uniform(), 1.0 / alpha);
  }
  const double d = alpha - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = rng.normal();
    const double t = 1.0 + c * x;
    if (t <= 0.0) continue;
    const double v = t * t * t;
    const double u = rng.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double chi_square_sample(SequentialRng& rng, int dof) {
  if (dof == 0) return 0.0;
  return 2.0 * gamma_sample(rng, 0.5 * dof);
}

int binomial_half_sample(SequentialRng& rng, int n) {
  int count = 0;
  int left = n;
  while (left >= 64) {
    count += __builtin_popcountll(rng.next_u64());
    left -= 64;
  }
  if (left > 0) {
    const std::uint64_t bits =
        rng.next_u64() & ((~std::uint64_t{0}) >> (64 - left));
    count += __builtin_popcountll(bits);
  }
  return count;
}

void require_homog_network(const NetworkSpec& spec) {
  validate_spec(spec);
  if (spec.nl.kind() != NonlinKind::kHomog1) {
    throw OutOfRange("exact sampling needs a 1-homogeneous activation");
  }
  if (spec.C_b != 0.0) {
    throw OutOfRange("the exact product law requires bias-free layers");
  }
}

double radial_log_one(const NetworkSpec& spec, std::uint64_t seed,
                      std::uint32_t sample) {
  SequentialRng rng(seed, sample, kHomogStream);
  const double ap = spec.nl.a_plus();
  const double am = spec.nl.a_minus();
  double log_r = 0.0;
  for (int n : spec.widths) {
    const int m = binomial_half_sample(rng, n);
    const double rho2 = spec.C_W / n *
                        (ap * ap * chi_square_sample(rng, m) +
                         am * am * chi_square_sample(rng, n - m));
    log_r += 0.5 * std::log(rho2);
  }
  return log_r;
}

}  // namespace

HomogParams homog_params(double a_plus, double a_minus) {
  if (!std::isfinite(a_plus) || !std::isfinite(a_minus) ||
      a_plus * a_plus == a_minus * a_minus) {
    throw OutOfRange("1-homogeneous parameters need a+^2 != a-^2");
  }
  HomogParams p;
  p.a_plus = a_plus;
  p.a_minus = a_minus;
  const double s2 = a_plus * a_plus + a_minus * a_minus;
  const double s4 = a_plus * a_plus * a_plus * a_plus +
                    a_minus * a_minus * a_minus * a_minus;
  p.C_W = 2.0 / s2;
  p.bracket = 6.0 * s4 / (s2 * s2) - 1.0;
  return p;
}

double correlation_step(double eps, const HomogParams& p) {
  if (!(eps >= 0.0) || !(eps <= 1.0)) {
    throw OutOfRange("correlation parameter must lie in [0, 1]");
  }
  const double diff = p.a_plus - p.a_minus;
  const double root = std::sqrt(clamp01(eps * (1.0 - eps)));
  // arccos argument clamped to absorb 1e-15-scale rounding at the ends
  const double angle = std::acos(clamp01(std::sqrt(eps)));
  const double rhs =
      2.0 * p.C_W * diff * diff / kPi * (0.5 * root + (0.5 - eps) * angle) +
      p.C_W * p.a_plus * p.a_minus * (1.0 - 2.0 * eps);
  return 0.5 * (1.0 - rhs);
}

double correlation_asymptote(int ell, const HomogParams& p) {
  (void)p;
  if (ell < 1) {
    throw OutOfRange("layer index must be >= 1");
  }
  const double l = ell;
  return 2.0 / (3.0 * kPi) / (l * l);
}

double correlation_asymptote_full(int ell, const HomogParams& p) {
  if (ell < 1) {
    throw OutOfRange("layer index must be >= 1");
  }
  const double diff = p.a_plus - p.a_minus;
  const double s2 = p.a_plus * p.a_plus + p.a_minus * p.a_minus;
  const double l = ell;
  return 2.0 * diff * diff / (3.0 * kPi * s2) / (l * l);
}

double kappa4_closed_form(double norm_sq_over_n0,
                          const std::vector<int>& widths,
                          const HomogParams& p) {
  const double k = p.C_W * norm_sq_over_n0;
  double inv_sum = 0.0;
  for (int n : widths) {
    if (n < 1) {
      throw OutOfRange("layer widths must be >= 1");
    }
    inv_sum += 1.0 / n;
  }
  return k * k * p.bracket * inv_sum;
}

LognormalParams lognormal_limit_params(double xi, const HomogParams& p) {
  if (!(xi >= 0.0)) {
    throw OutOfRange("effective depth xi must be >= 0");
  }
  LognormalParams lp;
  lp.mu = 0.25 * xi * p.bracket;
  lp.sigma_sq = lp.mu;
  return lp;
}

std::vector<double> sample_exact(const NetworkSpec& spec, long long n_samples,
                                 std::uint64_t seed) {
  require_homog_network(spec);
  if (n_samples < 1) {
    throw OutOfRange("need at least one sample");
  }
  double norm_sq = 0.0;
  for (double v : spec.input_x) norm_sq += v * v;
  const double scale = std::sqrt(spec.C_W * norm_sq / spec.n0);
  std::vector<double> out(static_cast<std::size_t>(n_samples));
  for (long long s = 0; s < n_samples; ++s) {
    const auto sample = static_cast<std::uint32_t>(s);
    const double log_r = radial_log_one(spec, seed, sample);
    SequentialRng head(seed, sample, kHomogStream + 1);
    out[static_cast<std::size_t>(s)] = scale * std::exp(log_r) * head.normal();
  }
  return out;
}

std::vector<double> sample_radial_log(const NetworkSpec& spec,
                                      long long n_samples,
                                      std::uint64_t seed) {
  require_homog_network(spec);
  if (n_samples < 1) {
    throw OutOfRange("need at least one sample");
  }
  std::vector<double> out(static_cast<std::size_t>(n_samples));
  for (long long s = 0; s < n_samples; ++s) {
    out[static_cast<std::size_t>(s)] =
        radial_log_one(spec, seed, static_cast<std::uint32_t>(s));
  }
  return out;
}

}  // namespace hierarchylab
