// core/include/hierarchylab/hierarchy.hpp

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

#ifndef HIERARCHYLAB_HIERARCHY_HPP_
#define HIERARCHYLAB_HIERARCHY_HPP_

#include <functional>
#include <vector>

#include "hierarchylab/crit.hpp"
#include "hierarchylab/gauss.hpp"
#include "hierarchylab/nonlin.hpp"

namespace hierarchylab {

// Sentinel width for the infinite-width limit: every 1/n source term is
// zeroed and only the homogeneous parts of the recursions survive.
inline constexpr int kInfiniteWidth = -1;

// Single-input cumulants of one output component at layer ell.  k4, k6, k8
// are the normalized-by-double-factorial single-neuron cumulants (the raw
// joint cumulant divided by 3, 15, 105 respectively); Monte Carlo estimates
// must apply the same division before comparing.
struct CumulantState {
  int ell = 1;
  double K = 0.0;
  double k4 = 0.0;
  double k6 = 0.0;
  double k8 = 0.0;
};

// Normalized cumulants k_{2k} / K^k of a state.
struct NormalizedCumulants {
  double k4_hat = 0.0;
  double k6_hat = 0.0;
  double k8_hat = 0.0;
};

// A fully connected network experiment: input dimension n0, hidden widths
// n_1..n_L, output width, activation, initialization variances, and the
// input the kernels are seeded from.
struct NetworkSpec {
  int n0 = 1;
  std::vector<int> widths;
  int n_out = 1;
  Nonlinearity nl = Nonlinearity::tanh();
  double C_b = 0.0;
  double C_W = 1.0;
  std::vector<double> input_x;

  int depth() const { return static_cast<int>(widths.size()); }
};

// Throws OutOfRange unless dimensions, widths and variances are admissible.
void validate_spec(const NetworkSpec& spec);

// First-layer kernel C_b + C_W ||x||^2 / n0.
double kernel_seed(const NetworkSpec& spec);

// One layer of the infinite-width kernel recursion:
// K' = C_b + C_W <sigma^2>_K.
double kernel_step(double K, double c_b, double c_w, const Nonlinearity& nl);

// Two-input version; the diagonal follows kernel_step and the off-diagonal
// integrates sigma x sigma against the joint kernel.
Kernel2 kernel_pair_step(Kernel2 k2, double c_b, double c_w,
                         const Nonlinearity& nl);

// One layer of the fourth/sixth/eighth cumulant hierarchy at width n_ell
// (kInfiniteWidth zeroes the source terms).  T-functionals are evaluated at
// the infinite-width kernel carried by the state; dropped remainders are
// exactly the ones beyond the displayed truncation orders.  The kernel
// advances alongside; pass c_b only for non-critical experiments.
CumulantState cumulant_step(const CumulantState& state, int n_ell, double c_w,
                            const Nonlinearity& nl, double c_b = 0.0);

struct HierarchyRun {
  std::vector<CumulantState> states;  // layers 1..L+1
  // Set when depth / min-width > 0.5: the dropped O(n^-4) remainders of the
  // eighth cumulant can be as large as (L/n)^4 there.
  bool k8_caveat = false;
};

// Iterate the hierarchy through every layer of the spec.
HierarchyRun run_hierarchy(const NetworkSpec& spec);

// k_{2k} / K^k for one state (zero kernel gives zeros).
NormalizedCumulants normalized_cumulants(const CumulantState& state);

// Large-depth prediction C_{2k} xi^{k-1} for the normalized cumulants of
// smooth odd activations at criticality, with C4 = 2/3, C6 = 28/15,
// C8 = 8756/315.  k indexes the pair order: 2 -> k4_hat, 3 -> k6_hat,
// 4 -> k8_hat.  Throws BadOrder outside {2, 3, 4}.
double predict_normalized(double xi, int k);

struct LinearRecursionResult {
  // a_1 = a0 through a_L under a_{l+1} = xi(l) + (1 - zeta(l)) a_l.
  std::vector<double> values;
  // Closed-form large-l shape l^{1-psi} C1 / (1 - psi + C2)
  // + e^{-C2 gamma} l^{-C2} a0 for caller-fitted (C1, psi, C2).
  std::function<double(double ell, double C1, double psi, double C2)>
      asymptote;
};

// Driven linear recursion used to read off decay rates.  zeta values must
// lie in [0, 1].
LinearRecursionResult solve_linear_recursion(
    const std::function<double(int)>& xi_seq,
    const std::function<double(int)>& zeta_seq, double a0, int L);

// Leading kernel decay 1 / (a ell) of the K* = 0 class.
double kstar_zero_kernel_asymptote(int ell, const Nonlinearity& nl);

}  // namespace hierarchylab

#endif  // HIERARCHYLAB_HIERARCHY_HPP_
