// tests/test_mc.cpp

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

#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "doctest.h"
#include "hierarchylab/derivs.hpp"
#include "hierarchylab/errors.hpp"
#include "hierarchylab/homog.hpp"
#include "hierarchylab/mc.hpp"
#include "test_util.hpp"

using hierarchylab::CumulantEstimates;
using hierarchylab::DerivCumulantEstimates;
using hierarchylab::ForwardResult;
using hierarchylab::GradStats;
using hierarchylab::MCEstimate;
using hierarchylab::NetworkSpec;
using hierarchylab::VerifyReport;
using hierarchylab::estimate_cumulants;
using hierarchylab::estimate_deriv_cumulants;
using hierarchylab::estimate_evgp;
using hierarchylab::estimate_layer_variances;
using hierarchylab::forward_with_grads;
using hierarchylab::verify;
using testutil::make_spec;
using testutil::rel;
using testutil::relu_critical_spec;
using testutil::tanh_critical_spec;

namespace {

struct EnvGuard {
  explicit EnvGuard(const char* name) : name_(name) {
    const char* old = std::getenv(name);
    if (old != nullptr) {
      had_ = true;
      old_ = old;
    }
  }
  ~EnvGuard() {
    if (had_) {
      setenv(name_, old_.c_str(), 1);
    } else {
      unsetenv(name_);
    }
  }
  const char* name_;
  bool had_ = false;
  std::string old_;
};

struct BatchStat {
  double value = 0.0;
  double std_error = 0.0;
};

// 20-batch mean and standard error of a statistic over a sample vector.
template <typename F>
BatchStat batch_stat(const std::vector<double>& xs, F stat) {
  const int nb = 20;
  const std::size_t per = xs.size() / nb;
  std::vector<double> vals;
  for (int b = 0; b < nb; ++b) {
    std::vector<double> chunk(xs.begin() + b * per,
                              xs.begin() + (b + 1) * per);
    vals.push_back(stat(chunk));
  }
  BatchStat r;
  for (double v : vals) r.value += v;
  r.value /= nb;
  double s2 = 0.0;
  for (double v : vals) s2 += (v - r.value) * (v - r.value);
  r.std_error = std::sqrt(s2 / (nb - 1.0) / nb);
  return r;
}

double kappa2_of(const std::vector<double>& xs) {
  double m2 = 0.0;
  for (double x : xs) m2 += x * x;
  return m2 / static_cast<double>(xs.size());
}

double kappa4_hat_of(const std::vector<double>& xs) {
  double m2 = 0.0, m4 = 0.0;
  for (double x : xs) {
    m2 += x * x;
    m4 += x * x * x * x;
  }
  m2 /= static_cast<double>(xs.size());
  m4 /= static_cast<double>(xs.size());
  return m4 / (3.0 * m2 * m2) - 1.0;
}

}  // namespace

TEST_SUITE("mc") {

TEST_CASE("reverse mode gradients match finite differences") {
  NetworkSpec s = make_spec(3, {0.8, -0.5, 0.3}, {7, 5}, 2,
                            hierarchylab::Nonlinearity::tanh(), 0.3, 1.0);
  const std::uint64_t seed = 99;
  const ForwardResult r = forward_with_grads(s, seed);
  REQUIRE(static_cast<int>(r.z_out.size()) == 2);
  REQUIRE(static_cast<int>(r.dz_dx.size()) == 2);
  REQUIRE(static_cast<int>(r.dz_dx[0].size()) == 3);

  const double h = 1e-5;
  for (int j = 0; j < 3; ++j) {
    NetworkSpec plus = s;
    NetworkSpec minus = s;
    plus.input_x[j] += h;
    minus.input_x[j] -= h;
    const ForwardResult rp = forward_with_grads(plus, seed);
    const ForwardResult rm = forward_with_grads(minus, seed);
    for (int q = 0; q < 2; ++q) {
      const double fd = (rp.z_out[q] - rm.z_out[q]) / (2.0 * h);
      CHECK(std::abs(fd - r.dz_dx[q][j]) <
            1e-6 * std::max(1.0, std::abs(r.dz_dx[q][j])));
    }
  }

  // First-layer weight gradients factor as J_qi x_j.
  REQUIRE(static_cast<int>(r.dz_dW1.size()) == 2);
  REQUIRE(static_cast<int>(r.dz_dW1[0].size()) == 7);
  REQUIRE(static_cast<int>(r.dz_dW1[0][0].size()) == 3);
  for (int q = 0; q < 2; ++q) {
    for (int i = 0; i < 7; ++i) {
      const double jqi = r.dz_dW1[q][i][0] / s.input_x[0];
      for (int j = 0; j < 3; ++j) {
        CHECK(r.dz_dW1[q][i][j] == rel(jqi * s.input_x[j], 1e-10));
      }
    }
  }
}

TEST_CASE("single affine layer weight gradients are the input") {
  NetworkSpec s = make_spec(3, {0.8, -0.5, 0.3}, {}, 3,
                            hierarchylab::Nonlinearity::tanh(), 0.0, 1.0);
  const ForwardResult r = forward_with_grads(s, 5);
  for (int q = 0; q < 3; ++q) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const double want = (q == i) ? s.input_x[j] : 0.0;
        CHECK(r.dz_dW1[q][i][j] == want);
      }
    }
  }
}

TEST_CASE("gaussian output cumulants without hidden layers") {
  NetworkSpec s = make_spec(2, {std::sqrt(2.0), std::sqrt(2.0)}, {}, 2,
                            hierarchylab::Nonlinearity::tanh(), 0.0, 2.0);
  const CumulantEstimates c = estimate_cumulants(s, 20000, 17);
  CHECK(c.kappa2.n_samples == 20000);
  CHECK(c.kappa2.n_batches == 20);
  CHECK(std::abs(c.kappa2.value - 4.0) < 4.0 * c.kappa2.std_error);
  CHECK(std::abs(c.kappa3.value) < 4.0 * c.kappa3.std_error);
  CHECK(std::abs(c.kappa4_hat.value) < 4.0 * c.kappa4_hat.std_error);
  CHECK(std::abs(c.kappa5.value) < 4.0 * c.kappa5.std_error);
  CHECK(std::abs(c.kappa6_hat.value) < 4.0 * c.kappa6_hat.std_error);
  CHECK(std::abs(c.kappa8_hat.value) < 4.0 * c.kappa8_hat.std_error);
  CHECK(std::abs(c.cross00.value) < 4.0 * c.cross00.std_error);
}

TEST_CASE("verification report semantics") {
  MCEstimate e;
  e.value = 1.05;
  e.std_error = 0.05;
  const VerifyReport ok = verify(1.0, e, 3.0);
  CHECK(ok.pass);
  CHECK(ok.z == rel(1.0, 1e-12));
  CHECK(ok.underpowered);

  const VerifyReport bad = verify(2.0, e, 3.0);
  CHECK_FALSE(bad.pass);
  CHECK(bad.z == rel(19.0, 1e-12));

  MCEstimate exact;
  exact.value = 0.625;
  exact.std_error = 0.0;
  CHECK(verify(0.625, exact, 3.0).pass);
  CHECK_FALSE(verify(0.626, exact, 3.0).pass);

  MCEstimate powered;
  powered.value = 1.0;
  powered.std_error = 0.01;
  CHECK_FALSE(verify(1.0, powered, 3.0).underpowered);
}

TEST_CASE("estimates are identical for any worker count") {
  EnvGuard guard("HIERARCHYLAB_THREADS");
  NetworkSpec s = tanh_critical_spec(2, {1.0, 1.0}, {8, 8}, 2);

  setenv("HIERARCHYLAB_THREADS", "1", 1);
  CHECK(hierarchylab::worker_count() == 1);
  const CumulantEstimates a = estimate_cumulants(s, 10000, 3);

  setenv("HIERARCHYLAB_THREADS", "8", 1);
  CHECK(hierarchylab::worker_count() == 8);
  const CumulantEstimates b = estimate_cumulants(s, 10000, 3);

  CHECK(a.kappa2.value == b.kappa2.value);
  CHECK(a.kappa2.std_error == b.kappa2.std_error);
  CHECK(a.kappa3.value == b.kappa3.value);
  CHECK(a.kappa4_hat.value == b.kappa4_hat.value);
  CHECK(a.kappa6_hat.value == b.kappa6_hat.value);
  CHECK(a.kappa8_hat.value == b.kappa8_hat.value);
  CHECK(a.cross00.value == b.cross00.value);

  const CumulantEstimates c = estimate_cumulants(s, 10000, 4);
  CHECK(a.kappa2.value != c.kappa2.value);
}

TEST_CASE("sample count and dimension validation") {
  NetworkSpec s = tanh_critical_spec(2, {1.0, 1.0}, {8}, 2);
  CHECK_THROWS_AS(estimate_cumulants(s, 9999, 0),
                  hierarchylab::InsufficientSamples);
  NetworkSpec one_out = tanh_critical_spec(2, {1.0, 1.0}, {8}, 1);
  CHECK_THROWS_AS(estimate_cumulants(one_out, 10000, 0),
                  hierarchylab::OutOfRange);
  NetworkSpec univariate = make_spec(1, {1.0}, {8}, 2,
                                     hierarchylab::Nonlinearity::tanh(),
                                     0.0, 1.0);
  CHECK_THROWS_AS(estimate_deriv_cumulants(univariate, 10000, 0),
                  hierarchylab::OutOfRange);
  CHECK_THROWS_AS(estimate_evgp(s, 9999, 0),
                  hierarchylab::InsufficientSamples);
}

TEST_CASE("derivative cumulant estimates confirm the recursion engine") {
  NetworkSpec s = tanh_critical_spec(4, {0.0, 0.0, 1.0, 1.0}, {32, 32}, 32);
  const hierarchylab::DerivTrajectory t = hierarchylab::run_derivs(s);
  const auto& p = t.points[2];

  const DerivCumulantEstimates e = estimate_deriv_cumulants(s, 100000, 21);
  CHECK(verify(p.kernels.K11 + p.s.S11, e.K11, 4.0).pass);
  CHECK(verify(0.0, e.K10, 4.0).pass);
  CHECK(verify(0.0, e.K12, 4.0).pass);
  CHECK(verify(p.fourth.k1100, e.k1100, 4.0).pass);
  CHECK(verify(p.fourth.k1111, e.k1111, 4.0).pass);
  CHECK(verify(p.fourth.k1122, e.k1122, 4.0).pass);
  CHECK(verify(p.fourth.k1212, e.k1212, 4.0).pass);
}

TEST_CASE("gradient statistics reproduce the single layer closed form") {
  NetworkSpec a = make_spec(2, {1.0, 2.0}, {}, 3,
                            hierarchylab::Nonlinearity::tanh(), 0.0, 1.0);
  const GradStats ga = estimate_evgp(a, 10000, 0);
  CHECK(ga.ratio.value == rel(3.08, 1e-12));
  CHECK(ga.ratio.std_error == 0.0);

  NetworkSpec b = make_spec(3, {0.8, -0.5, 0.3}, {}, 4,
                            hierarchylab::Nonlinearity::tanh(), 0.0, 1.0);
  const GradStats gb = estimate_evgp(b, 10000, 0);
  CHECK(gb.ratio.value == rel(5.0, 1e-12));
  CHECK(gb.ratio.std_error == 0.0);
}

TEST_CASE("layer variances stay on the critical plateau") {
  NetworkSpec s = relu_critical_spec(2, {1.0, 0.0},
                                     std::vector<int>(4, 32), 2);
  const std::vector<MCEstimate> vs = estimate_layer_variances(s, 20000, 13);
  REQUIRE(static_cast<int>(vs.size()) == 5);
  for (const MCEstimate& v : vs) {
    CHECK(std::abs(v.value - 1.0) < 4.0 * v.std_error);
    CHECK(v.std_error < 0.05);
  }
}

TEST_CASE("network draws agree with the exact product law sampler") {
  NetworkSpec s = relu_critical_spec(2, {1.0, 1.0},
                                     std::vector<int>(4, 64), 2);
  const CumulantEstimates mc = estimate_cumulants(s, 50000, 8);
  const std::vector<double> zs = hierarchylab::sample_exact(s, 200000, 9);

  const BatchStat k2 = batch_stat(zs, kappa2_of);
  const BatchStat k4 = batch_stat(zs, kappa4_hat_of);

  const double z2 = std::abs(mc.kappa2.value - k2.value) /
                    std::sqrt(mc.kappa2.std_error * mc.kappa2.std_error +
                              k2.std_error * k2.std_error);
  CHECK(z2 < 4.0);
  const double z4 = std::abs(mc.kappa4_hat.value - k4.value) /
                    std::sqrt(mc.kappa4_hat.std_error * mc.kappa4_hat.std_error +
                              k4.std_error * k4.std_error);
  CHECK(z4 < 4.0);
}

}  // TEST_SUITE
