// core/include/hierarchylab/mc.hpp

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

#ifndef HIERARCHYLAB_MC_HPP_
#define HIERARCHYLAB_MC_HPP_

#include <cstdint>
#include <vector>

#include "hierarchylab/hierarchy.hpp"

namespace hierarchylab {

// Monte Carlo oracle over finite-width network draws.  Weights are
// W_ij ~ N(0, C_W/n_in) and biases N(0, C_b), addressed by
// (seed, draw, layer, position) through the counter-based generator, so
// identical (spec, seed, n_samples) give bit-identical estimates for any
// worker count.  Point estimates are plug-in statistics of pooled moments
// (bias O(1/n_samples), dominated by the quoted errors at the prescribed
// sample counts); std errors come from 20 contiguous equal batches.

struct MCEstimate {
  double value = 0.0;
  double std_error = 0.0;
  long long n_samples = 0;
  int n_batches = 0;
};

struct GradStats {
  MCEstimate grad_mean;  // E over draws of the (i,j)-average squared gradient
  MCEstimate grad_var;   // E over draws of the per-draw empirical variance
  MCEstimate ratio;      // grad_var / grad_mean^2, delta-method error
};

struct CumulantEstimates {
  MCEstimate kappa2;
  MCEstimate kappa3;      // raw odd cumulant, consistent with 0
  MCEstimate kappa4_hat;  // kappa4 / 3
  MCEstimate kappa5;      // raw odd cumulant
  MCEstimate kappa6_hat;  // kappa6 / 15
  MCEstimate kappa8_hat;  // kappa8 / 105
  MCEstimate cross00;     // Cov(z1^2, z2^2) across output neurons
};

struct DerivCumulantEstimates {
  MCEstimate K11;    // Var(d1 z1)
  MCEstimate K10;    // Cov(z1, d1 z1)
  MCEstimate K12;    // Cov(d1 z1, d2 z1)
  MCEstimate k1100;  // Cov((d1 z1)^2, z2^2)
  MCEstimate k1111;  // Cov((d1 z1)^2, (d1 z2)^2)
  MCEstimate k1122;  // Cov((d1 z1)^2, (d2 z2)^2)
  MCEstimate k1212;  // Cov(d1 z1 d2 z1, d1 z2 d2 z2)
};

struct ForwardResult {
  std::vector<double> z_out;                             // n_out
  std::vector<std::vector<double>> dz_dx;                // n_out x n0
  std::vector<std::vector<std::vector<double>>> dz_dW1;  // n_out x n1 x n0
};

// One network draw with exact reverse-mode gradients (sigma' taken a.e.
// for the piecewise-linear class).  dz_dW1[q][i][j] = J_qi x_j with J the
// Jacobian of the output with respect to the first pre-activation.
ForwardResult forward_with_grads(const NetworkSpec& spec, std::uint64_t seed);

// Cumulants of the first output component plus the cross-neuron (00)(00)
// covariance.  Requires n_samples >= 10^4 (InsufficientSamples) and
// n_out >= 2.
CumulantEstimates estimate_cumulants(const NetworkSpec& spec,
                                     long long n_samples, std::uint64_t seed);

// Derivative-kernel and fourth derivative-cumulant estimates from
// forward-mode tangents along input coordinates 1 and 2.  Requires n0 >= 2
// and n_out >= 2.
DerivCumulantEstimates estimate_deriv_cumulants(const NetworkSpec& spec,
                                                long long n_samples,
                                                std::uint64_t seed);

// First-layer squared-gradient statistics for output neuron 1: per draw
// GradMean = mean_{ij} (dz/dW1_ij)^2 and GradVar = their empirical
// variance, both factorizing through the backprop row.
GradStats estimate_evgp(const NetworkSpec& spec, long long n_samples,
                        std::uint64_t seed);

// Var[z_1^(ell)] for every layer ell = 1..L+1 from a single sweep.
std::vector<MCEstimate> estimate_layer_variances(const NetworkSpec& spec,
                                                 long long n_samples,
                                                 std::uint64_t seed);

struct VerifyReport {
  bool pass = false;
  double z = 0.0;  // |pred - value| / std_error
  // |pred| < 5 std errors: the check cannot distinguish the prediction
  // from zero (policy gate used by the kappa6/kappa8 comparisons).
  bool underpowered = false;
};

// Pass iff |pred - est.value| <= z_max * est.std_error.  A zero std error
// passes only on exact equality.
VerifyReport verify(double pred, const MCEstimate& est, double z_max);

// Worker count: HIERARCHYLAB_THREADS when set (>= 1), otherwise the
// hardware concurrency.  Results are worker-count independent.
int worker_count();

}  // namespace hierarchylab

#endif  // HIERARCHYLAB_MC_HPP_
