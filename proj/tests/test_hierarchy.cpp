// tests/test_hierarchy.cpp

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
#include <vector>

#include "doctest.h"
#include "hierarchylab/errors.hpp"
#include "hierarchylab/hierarchy.hpp"
#include "test_util.hpp"

using hierarchylab::CumulantState;
using hierarchylab::HierarchyRun;
using hierarchylab::NetworkSpec;
using hierarchylab::Nonlinearity;
using hierarchylab::NormalizedCumulants;
using hierarchylab::cumulant_step;
using hierarchylab::kInfiniteWidth;
using hierarchylab::kernel_seed;
using hierarchylab::kernel_step;
using hierarchylab::normalized_cumulants;
using hierarchylab::predict_normalized;
using hierarchylab::run_hierarchy;
using hierarchylab::validate_spec;
using testutil::rel;
using testutil::relu_critical_spec;
using testutil::tanh_critical_spec;

TEST_SUITE("hierarchy") {

TEST_CASE("spec validation") {
  NetworkSpec s = tanh_critical_spec(4, {1.0, 1.0, 1.0, 1.0}, {64, 64}, 2);
  CHECK_NOTHROW(validate_spec(s));

  NetworkSpec bad = s;
  bad.input_x = {1.0, 2.0};
  CHECK_THROWS_AS(validate_spec(bad), hierarchylab::OutOfRange);

  bad = s;
  bad.widths = {64, 0};
  CHECK_THROWS_AS(validate_spec(bad), hierarchylab::OutOfRange);

  bad = s;
  bad.C_W = -1.0;
  CHECK_THROWS_AS(validate_spec(bad), hierarchylab::OutOfRange);

  bad = s;
  bad.n_out = 0;
  CHECK_THROWS_AS(validate_spec(bad), hierarchylab::OutOfRange);
}

TEST_CASE("kernel seed") {
  NetworkSpec s = tanh_critical_spec(4, {1.0, 1.0, 1.0, 1.0}, {64}, 1);
  CHECK(kernel_seed(s) == rel(1.0, 1e-15));
  s.C_b = 0.3;
  s.C_W = 2.0;
  CHECK(kernel_seed(s) == rel(2.3, 1e-15));
}

TEST_CASE("single kernel steps match the frozen second moments") {
  const Nonlinearity nl = Nonlinearity::tanh();
  CHECK(kernel_step(1.0, 0.0, 1.0, nl) == rel(0.3942944903978412, 1e-12));
  CHECK(kernel_step(0.25, 0.0, 1.0, nl) == rel(0.17351614343237184, 1e-12));
  CHECK(kernel_step(0.25, 0.1, 1.0, nl) ==
        rel(0.27351614343237184, 1e-12));
  // ReLU at the critical C_W = 2 preserves the kernel exactly.
  CHECK(kernel_step(1.0, 0.0, 2.0, Nonlinearity::relu()) ==
        rel(1.0, 1e-13));
}

TEST_CASE("tanh critical kernel decay over ten thousand layers") {
  const Nonlinearity nl = Nonlinearity::tanh();
  double K = 1.0;
  int ell = 1;
  const auto advance_to = [&](int target) {
    for (; ell < target; ++ell) K = kernel_step(K, 0.0, 1.0, nl);
  };
  advance_to(10);
  CHECK(K == rel(0.058011847840216797, 1e-9));
  advance_to(100);
  CHECK(K == rel(0.0051207156659879302, 1e-8));
  advance_to(10000);
  CHECK(K == rel(5.0021420586984213e-05, 1e-7));
  CHECK(2.0 * 10000.0 * K == rel(1.0004284117396842, 1e-7));

  // Second seed: the decay constant is seed independent.
  double K2 = 0.5;
  for (int l = 1; l < 10000; ++l) K2 = kernel_step(K2, 0.0, 1.0, nl);
  CHECK(2.0 * 10000.0 * K2 == rel(1.0003616887608875, 1e-7));
}

TEST_CASE("kernel asymptote for the vanishing fixed point class") {
  const Nonlinearity nl = Nonlinearity::tanh();
  CHECK(hierarchylab::kstar_zero_kernel_asymptote(1000, nl) ==
        rel(0.0005, 1e-12));
  CHECK_THROWS_AS(
      hierarchylab::kstar_zero_kernel_asymptote(1000, Nonlinearity::relu()),
      hierarchylab::NotKStarZeroClass);
}

TEST_CASE("early cumulant states at unit seed") {
  const Nonlinearity nl = Nonlinearity::tanh();
  CumulantState st;
  st.ell = 1;
  st.K = 1.0;
  st = cumulant_step(st, 256, 1.0, nl);
  CHECK(st.ell == 2);
  CHECK(st.K == rel(0.39429449039784004, 1e-11));
  CHECK(st.k4 == rel(0.00038095210189788298, 1e-9));
  CHECK(st.k6 == rel(1.5382046801959533e-07, 1e-9));
  CHECK(st.k8 == rel(-7.0788777087542004e-10, 1e-8));
  st = cumulant_step(st, 256, 1.0, nl);
  CHECK(st.K == rel(0.23645041049929516, 1e-11));
  CHECK(st.k4 == rel(0.00026487302301600018, 1e-9));
  CHECK(st.k6 == rel(4.1147336628995335e-07, 1e-9));
  CHECK(st.k8 == rel(2.1634691545537247e-09, 1e-8));
  st = cumulant_step(st, 256, 1.0, nl);
  CHECK(st.K == rel(0.16665635380193822, 1e-11));
  CHECK(st.k4 == rel(0.00019588514245040718, 1e-9));
  CHECK(st.k6 == rel(4.435845855951504e-07, 1e-9));
  CHECK(st.k8 == rel(3.3399003114344536e-09, 1e-8));
}

TEST_CASE("early cumulant states at quarter seed") {
  const Nonlinearity nl = Nonlinearity::tanh();
  CumulantState st;
  st.ell = 1;
  st.K = 0.25;
  st = cumulant_step(st, 256, 1.0, nl);
  CHECK(st.K == rel(0.17351614343237171, 1e-11));
  CHECK(st.k4 == rel(0.00013400115795394674, 1e-9));
  CHECK(st.k6 == rel(1.2342482420323074e-07, 1e-9));
  CHECK(st.k8 == rel(6.8577305030601675e-11, 1e-7));
}

TEST_CASE("infinite width zeroes every source") {
  const Nonlinearity nl = Nonlinearity::tanh();
  CumulantState st;
  st.ell = 1;
  st.K = 1.0;
  for (int l = 0; l < 8; ++l) st = cumulant_step(st, kInfiniteWidth, 1.0, nl);
  CHECK(st.k4 == 0.0);
  CHECK(st.k6 == 0.0);
  CHECK(st.k8 == 0.0);
  CHECK(st.K == rel(0.058011847840216797, 1e-9));
}

TEST_CASE("full tanh trajectory at effective depth one quarter") {
  NetworkSpec s = tanh_critical_spec(4, {0.5, 0.5, 0.5, 0.5},
                                     std::vector<int>(64, 256), 1);
  REQUIRE(kernel_seed(s) == rel(0.25, 1e-15));
  const HierarchyRun run = run_hierarchy(s);
  REQUIRE(static_cast<int>(run.states.size()) == 65);
  CHECK_FALSE(run.k8_caveat);
  CHECK(run.states.front().ell == 1);
  CHECK(run.states.front().K == rel(0.25, 1e-15));
  CHECK(run.states.front().k4 == 0.0);

  const CumulantState& out = run.states.back();
  CHECK(out.ell == 65);
  CHECK(out.K == rel(0.0077303441968029438, 1e-9));
  CHECK(out.k4 == rel(9.9987177031618274e-06, 1e-8));
  CHECK(out.k6 == rel(5.2005842531181699e-08, 1e-8));
  CHECK(out.k8 == rel(1.3561021047831667e-09, 1e-7));

  const NormalizedCumulants nc = normalized_cumulants(out);
  CHECK(nc.k4_hat == rel(0.16731953309083905, 1e-8));
  CHECK(nc.k6_hat == rel(0.11257854779048393, 1e-8));
  CHECK(nc.k8_hat == rel(0.37974937176183438, 1e-7));

  // Ratios to the universal large depth constants at xi = 1/4.
  const double xi = 0.25;
  CHECK(nc.k4_hat / predict_normalized(xi, 2) == rel(1.003917, 1e-4));
  CHECK(nc.k6_hat / predict_normalized(xi, 3) == rel(0.964959, 1e-4));
  CHECK(nc.k8_hat / predict_normalized(xi, 4) == rel(0.874343, 1e-4));
}

TEST_CASE("unit seed trajectory endpoints") {
  NetworkSpec s = tanh_critical_spec(4, {1.0, 1.0, 1.0, 1.0},
                                     std::vector<int>(64, 256), 1);
  const HierarchyRun run = run_hierarchy(s);
  const NormalizedCumulants nc = normalized_cumulants(run.states.back());
  CHECK(run.states.back().K == rel(0.0079587038373291601, 1e-9));
  CHECK(nc.k4_hat == rel(0.1624941541722256, 1e-8));
  CHECK(nc.k6_hat == rel(0.10604856224929327, 1e-8));
  CHECK(nc.k8_hat == rel(0.34667729018540733, 1e-7));

  NetworkSpec s16 = tanh_critical_spec(4, {1.0, 1.0, 1.0, 1.0},
                                       std::vector<int>(16, 64), 1);
  const HierarchyRun run16 = run_hierarchy(s16);
  CHECK(run16.states.back().K == rel(0.03248129603435318, 1e-9));
  CHECK(normalized_cumulants(run16.states.back()).k4_hat ==
        rel(0.1565218509251598, 1e-8));
}

TEST_CASE("relu normalized fourth cumulant grows linearly in depth") {
  for (int L : {2, 4, 8, 16}) {
    NetworkSpec s = relu_critical_spec(2, {1.0, 1.0},
                                       std::vector<int>(L, 64), 1);
    REQUIRE(kernel_seed(s) == rel(2.0, 1e-15));
    // Seed K = 2; k4_hat = 5 L / n is K independent for the scale
    // invariant family.
    const HierarchyRun run = run_hierarchy(s);
    const NormalizedCumulants nc = normalized_cumulants(run.states.back());
    CHECK(nc.k4_hat == rel(5.0 * L / 64.0, 1e-10));
  }
}

TEST_CASE("eighth cumulant caveat flag") {
  NetworkSpec wide = tanh_critical_spec(2, {1.0, 1.0},
                                        std::vector<int>(8, 64), 1);
  CHECK_FALSE(run_hierarchy(wide).k8_caveat);
  NetworkSpec deep = tanh_critical_spec(2, {1.0, 1.0},
                                        std::vector<int>(64, 64), 1);
  CHECK(run_hierarchy(deep).k8_caveat);
}

TEST_CASE("normalized cumulant helpers") {
  CumulantState zero;
  zero.K = 0.0;
  zero.k4 = 0.5;
  const NormalizedCumulants nc = normalized_cumulants(zero);
  CHECK(nc.k4_hat == 0.0);
  CHECK(nc.k6_hat == 0.0);
  CHECK(nc.k8_hat == 0.0);

  CHECK(predict_normalized(0.25, 2) == rel(2.0 / 3.0 * 0.25, 1e-14));
  CHECK(predict_normalized(0.25, 3) == rel(28.0 / 15.0 * 0.0625, 1e-14));
  CHECK(predict_normalized(0.25, 4) ==
        rel(8756.0 / 315.0 * 0.015625, 1e-14));
  CHECK_THROWS_AS(predict_normalized(0.25, 5), hierarchylab::BadOrder);
  CHECK_THROWS_AS(predict_normalized(0.25, 1), hierarchylab::BadOrder);
}

TEST_CASE("driven linear recursion closed form") {
  using hierarchylab::LinearRecursionResult;
  using hierarchylab::solve_linear_recursion;

  const auto xi = [](int l) { return 1.0 / (static_cast<double>(l) * l); };
  const auto zeta = [](int l) { return std::min(1.0, 2.0 / l); };
  const LinearRecursionResult a = solve_linear_recursion(xi, zeta, 0.0, 10000);
  REQUIRE(static_cast<int>(a.values.size()) == 10000);
  CHECK(a.values[99] * 100.0 == rel(0.96704414020161167, 1e-12));
  CHECK(a.values[999] * 1000.0 == rel(0.99449703123910316, 1e-12));
  CHECK(a.values[9999] * 10000.0 == rel(0.9992209957106879, 1e-12));

  // Source dominated shape l^(1-psi) C1 / (1 - psi + C2).
  const double shape = a.asymptote(10000.0, 1.0, 2.0, 2.0);
  CHECK(a.values[9999] / shape == rel(1.0, 2e-3));

  // Pure homogeneous decay with zeta = 2/(l+2).
  const auto zeta_b = [](int l) { return 2.0 / (l + 2.0); };
  const auto zero_src = [](int) { return 0.0; };
  const LinearRecursionResult b =
      solve_linear_recursion(zero_src, zeta_b, 1.0, 100);
  CHECK(b.values[99] * 1e4 == rel(1.9801980198019824, 1e-12));

  const auto bad_zeta = [](int) { return 1.5; };
  CHECK_THROWS_AS(solve_linear_recursion(zero_src, bad_zeta, 1.0, 10),
                  hierarchylab::OutOfRange);
}

}  // TEST_SUITE
