// tests/test_util.hpp

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

#ifndef HIERARCHYLAB_TESTS_TEST_UTIL_HPP_
#define HIERARCHYLAB_TESTS_TEST_UTIL_HPP_

#include <utility>
#include <vector>

#include "doctest.h"
#include "hierarchylab/hierarchy.hpp"

namespace testutil {

// Pure relative comparison; doctest's default Approx adds an absolute
// scale term that would swallow small-magnitude targets.
inline doctest::Approx rel(double expected, double eps) {
  return doctest::Approx(expected).epsilon(eps).scale(0.0);
}

inline hierarchylab::NetworkSpec make_spec(int n0, std::vector<double> x,
                                           std::vector<int> widths, int n_out,
                                           const hierarchylab::Nonlinearity& nl,
                                           double c_b, double c_w) {
  hierarchylab::NetworkSpec s;
  s.n0 = n0;
  s.input_x = std::move(x);
  s.widths = std::move(widths);
  s.n_out = n_out;
  s.nl = nl;
  s.C_b = c_b;
  s.C_W = c_w;
  return s;
}

inline hierarchylab::NetworkSpec tanh_critical_spec(int n0,
                                                    std::vector<double> x,
                                                    std::vector<int> widths,
                                                    int n_out) {
  return make_spec(n0, std::move(x), std::move(widths), n_out,
                   hierarchylab::Nonlinearity::tanh(), 0.0, 1.0);
}

inline hierarchylab::NetworkSpec relu_critical_spec(int n0,
                                                    std::vector<double> x,
                                                    std::vector<int> widths,
                                                    int n_out) {
  return make_spec(n0, std::move(x), std::move(widths), n_out,
                   hierarchylab::Nonlinearity::relu(), 0.0, 2.0);
}

}  // namespace testutil

#endif  // HIERARCHYLAB_TESTS_TEST_UTIL_HPP_
