// core/src/rng.cpp

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

#include "hierarchylab/rng.hpp"

#include <cmath>

#include "hierarchylab/errors.hpp"

namespace hierarchylab {

std::array<std::uint32_t, 4> philox4x32_10(std::uint32_t k0, std::uint32_t k1,
                                           std::uint32_t c0, std::uint32_t c1,
                                           std::uint32_t c2,
                                           std::uint32_t c3) {
  constexpr std::uint32_t kM0 = 0xD2511F53u;
  constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u;
  constexpr std::uint32_t kW1 = 0xBB67AE85u;
  for (int r = 0; r < 10; ++r) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * c0;
    const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * c2;
    const std::uint32_t h0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t l0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t h1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t l1 = static_cast<std::uint32_t>(p1);
    c0 = h1 ^ c1 ^ k0;
    c1 = l1;
    c2 = h0 ^ c3 ^ k1;
    c3 = l0;
    k0 += kW0;
    k1 += kW1;
  }
  return {c0, c1, c2, c3};
}

namespace {

// PPND16 tail branch, |q| > 0.425 with q = u - 1/2.
double ppnd16_tail(double u, double q) {
  double r = q < 0.0 ? u : 1.0 - u;
  r = std::sqrt(-std::log(r));
  double v;
  if (r <= 5.0) {
    r -= 1.6;
    v = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
              2.41780725177450611770e-1) *
                 r +
             1.27045825245236838258e0) *
                r +
            3.64784832476320460504e0) *
               r +
           5.76949722146069140550e0) *
              r +
          4.63033784615654529590e0) *
             r +
         1.42343711074968357734e0) /
        (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
              1.51986665636164571966e-2) *
                 r +
             1.48103976427480074590e-1) *
                r +
            6.89767334985100004550e-1) *
               r +
           1.67638483018380384940e0) *
              r +
          2.05319162663775882187e0) *
             r +
         1.0);
  } else {
    r -= 5.0;
    v = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
              1.24266094738807843860e-3) *
                 r +
             2.65321895265761230930e-2) *
                r +
            2.96560571828504891230e-1) *
               r +
           1.78482653991729133580e0) *
              r +
          5.46378491116411436990e0) *
             r +
         6.65790464350110377720e0) /
        (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) *
                  r +
              1.84631831751005468180e-5) *
                 r +
             7.86869131145613259100e-4) *
                r +
            1.48753612908506148525e-2) *
               r +
           1.36929880922735805310e-1) *
              r +
          5.99832206555887937690e-1) *
             r +
         1.0);
  }
  return q < 0.0 ? -v : v;
}

double ppnd16_central(double q) {
  const double r = 0.180625 - q * q;
  const double num =
      (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
            6.7265770927008700853e+4) *
               r +
           4.5921953931549871457e+4) *
              r +
          1.3731693765509461125e+4) *
             r +
         1.9715909503065514427e+3) *
            r +
        1.3314166789178437745e+2) *
           r +
       3.3871328727963666080e0);
  const double den =
      (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
            3.9307895800092710610e+4) *
               r +
           2.1213794301586595867e+4) *
              r +
          5.3941960214247511077e+3) *
             r +
         6.8718700749205790830e+2) *
            r +
        4.2313330701600911252e+1) *
           r +
       1.0);
  return q * num / den;
}

constexpr double kUnit32 = 0x1p-32;

}  // namespace

double inverse_normal_cdf(double u) {
  if (!(u > 0.0) || !(u < 1.0)) {
    throw OutOfRange("inverse_normal_cdf needs u strictly inside (0, 1)");
  }
  const double q = u - 0.5;
  if (std::fabs(q) <= 0.425) {
    return ppnd16_central(q);
  }
  return ppnd16_tail(u, q);
}

void fill_normals(std::uint64_t seed, std::uint32_t draw, std::uint32_t stream,
                  double* out, int n) {
  const std::uint32_t k0 = static_cast<std::uint32_t>(seed);
  const std::uint32_t k1 = static_cast<std::uint32_t>(seed >> 32);
  // Pass 1: uniforms shifted to q = u - 1/2.
  for (int i = 0; i < n; i += 4) {
    const auto b = philox4x32_10(k0, k1, draw, stream,
                                 static_cast<std::uint32_t>(i >> 2), 0);
    const int m = n - i < 4 ? n - i : 4;
    for (int lane = 0; lane < m; ++lane) {
      out[i + lane] = (b[lane] + 0.5) * kUnit32 - 0.5;
    }
  }
  // Pass 2: central rational approximation (valid for |q| <= 0.425; the
  // polynomial is evaluated unconditionally to keep the loop branch-free).
  // Pass 3: tail fixup.
  for (int i = 0; i < n; ++i) {
    const double q = out[i];
    out[i] = ppnd16_central(q);
    if (std::fabs(q) > 0.425) {
      out[i] = ppnd16_tail(q + 0.5, q);
    }
  }
}

SequentialRng::SequentialRng(std::uint64_t seed, std::uint32_t draw,
                             std::uint32_t stream)
    : k0_(static_cast<std::uint32_t>(seed)),
      k1_(static_cast<std::uint32_t>(seed >> 32)),
      c0_(draw),
      c1_(stream) {}

std::uint32_t SequentialRng::next_u32() {
  if (used_ == 4) {
    buf_ = philox4x32_10(k0_, k1_, c0_, c1_, block_++, 0);
    used_ = 0;
  }
  return buf_[used_++];
}

std::uint64_t SequentialRng::next_u64() {
  const std::uint64_t hi = next_u32();
  return (hi << 32) | next_u32();
}

double SequentialRng::uniform() { return (next_u32() + 0.5) * kUnit32; }

double SequentialRng::normal() { return inverse_normal_cdf(uniform()); }

}  // namespace hierarchylab
