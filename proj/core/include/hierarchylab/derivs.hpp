// core/include/hierarchylab/derivs.hpp

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

#ifndef HIERARCHYLAB_DERIVS_HPP_
#define HIERARCHYLAB_DERIVS_HPP_

#include <array>
#include <vector>

#include "hierarchylab/crit.hpp"
#include "hierarchylab/hierarchy.hpp"
#include "hierarchylab/nonlin.hpp"

namespace hierarchylab {

// Joint second moments of (z, d1 z, d2 z) for one output component at one
// input, where d_j differentiates with respect to input coordinate j.
// Index 0 is the value, 1 and 2 the two derivative directions.
struct DerivKernelState {
  int ell = 1;
  double K00 = 0.0;
  double K10 = 0.0;
  double K20 = 0.0;
  double K11 = 0.0;
  double K22 = 0.0;
  double K12 = 0.0;
};

// Canonical fourth joint cumulants of the same triple.  Mirrored entries
// (indices 1 and 2 exchanged, e.g. the (22)(00) partner of k1100) are not
// stored; apply the swap map on demand or use run_derivs, which carries the
// full symmetric matrix, for inputs without the 1<->2 symmetry.
struct DerivFourthState {
  double k0000 = 0.0;
  double k1000 = 0.0;
  double k1010 = 0.0;
  double k1020 = 0.0;
  double k1100 = 0.0;
  double k1200 = 0.0;
  double k1110 = 0.0;
  double k1210 = 0.0;
  double k1120 = 0.0;
  double k1111 = 0.0;
  double k1122 = 0.0;
  double k1212 = 0.0;
};

// Finite-width corrections S_(ij) = kappa_(ij) - K_(ij) to the derivative
// kernels.  All zero at layer 1.
struct SCorrectionState {
  double S00 = 0.0;
  double S10 = 0.0;
  double S20 = 0.0;
  double S11 = 0.0;
  double S22 = 0.0;
  double S12 = 0.0;
};

// The six observable channels indexing the fourth-cumulant matrix.
enum DerivIndex : int {
  kD00 = 0,
  kD10 = 1,
  kD20 = 2,
  kD11 = 3,
  kD22 = 4,
  kD12 = 5,
};

// Flat slot of the unordered pair (a, b) in the 21-entry symmetric matrix.
int deriv_pair_slot(int a, int b);

// Full symmetric fourth-cumulant matrix including mirrored entries, used
// when the two derivative directions are not interchangeable.
using DerivFourthFull = std::array<double, 21>;

// Layer-1 seeds per the network architecture: K00 from the input norm,
// Kj0 = C_W x_j / n0, Kjj = C_W / n0, K12 = 0.  Requires n0 >= 2.
DerivKernelState deriv_kernel_seed(const NetworkSpec& spec);

// One layer of the infinite-width derivative-kernel recursion.  Throws
// NotPSD when the input moment matrix is indefinite beyond roundoff.
DerivKernelState deriv_kernel_step(const DerivKernelState& st, double c_b,
                                   double c_w, const Nonlinearity& nl);

// One layer of the fourth-cumulant recursion at width n_ell (kInfiniteWidth
// zeroes the covariance sources).  Gaussian brackets are evaluated at the
// infinite-width derivative kernels, reduced to univariate weak derivatives
// in z through the conditional law of (d1 z, d2 z) given z; O(1/n^2)
// remainders are dropped.  Missing mirrored inputs are filled by the swap
// map, which is exact whenever the trajectory has the 1<->2 symmetry.
DerivFourthState deriv_fourth_step(const DerivFourthState& f4,
                                   const DerivKernelState& st, int n_ell,
                                   double c_w, const Nonlinearity& nl);

// Same step on the full 21-entry matrix, valid for asymmetric inputs.
DerivFourthFull deriv_fourth_step_full(const DerivFourthFull& f4,
                                       const DerivKernelState& st, int n_ell,
                                       double c_w, const Nonlinearity& nl);

// One layer of the finite-width kernel-correction recursion.  The fourth
// cumulants must be the ones entering this layer (same ell as st), not the
// stepped ones.  Width enters only through them, so n_ell is accepted for
// signature symmetry but unused.  O(1/n^2) remainders are dropped.
SCorrectionState s_correction_step(const SCorrectionState& s,
                                   const DerivKernelState& st,
                                   const DerivFourthState& f4, int n_ell,
                                   double c_w, const Nonlinearity& nl);

// Full-matrix variant for asymmetric inputs.
SCorrectionState s_correction_step_full(const SCorrectionState& s,
                                        const DerivKernelState& st,
                                        const DerivFourthFull& f4, int n_ell,
                                        double c_w, const Nonlinearity& nl);

struct DerivTrajectoryPoint {
  DerivKernelState kernels;
  DerivFourthState fourth;
  DerivFourthFull fourth_full{};
  SCorrectionState s;
};

struct DerivTrajectory {
  std::vector<DerivTrajectoryPoint> points;  // layers 1..L+1
};

// Iterate kernels, fourth cumulants and S corrections through every layer.
// Maintains the full cumulant matrix so asymmetric inputs are exact.
DerivTrajectory run_derivs(const NetworkSpec& spec);

// Project the canonical twelve entries out of a full matrix.
DerivFourthState deriv_fourth_canonical(const DerivFourthFull& full);

// Large-depth leading-order predictions for the K* = 0 class at depth ell,
// width n, input dimension n0.
struct DerivAsymptotics {
  double K00 = 0.0;          // 1 / (a ell)
  double K10 = 0.0;          // C_W e^{-2 gamma} x1 / (n0 ell^2)
  double K11 = 0.0;          // C_W e^{-gamma} / (n0 ell)
  double ratio_k1100 = 0.0;  // kappa_(11)(00) / (K11 K00) -> -xi/3
  double ratio_k1111 = 0.0;  // kappa_(11)(11) / K11^2 -> 8 xi / 3
  double ratio_k1122 = 0.0;  // kappa_(11)(22) / (K11 K22) -> 2 xi / 3
  double kappa00 = 0.0;      // (1 - xi/3) K00
  double kappa11 = 0.0;      // (1 + xi/3) K11
};

// xi = ell / n.  Throws NotKStarZeroClass unless nl is a smooth odd
// activation and the tuning targets K* = 0.
DerivAsymptotics deriv_asymptotics(int ell, int n, int n0,
                                   const std::vector<double>& x,
                                   const Nonlinearity& nl,
                                   const CriticalTuning& tuning);

// Gradient variance-to-mean-squared ratio prediction
// C_{sigma,alpha} (1 + (8/3) xi) for first-layer weight gradients, with
// C_{sigma,alpha} built from <(sigma')^2> and <(sigma')^4> at the
// first-layer kernel C_W ||x||^2 / n0 and the input's fourth-power ratio.
// xi sums 1/n_ell over hidden layers (= L/n at equal widths).  Throws
// ZeroInput for a zero input and NotKStarZeroClass for the wrong class.
double evgp_predict(const NetworkSpec& spec);

}  // namespace hierarchylab

#endif  // HIERARCHYLAB_DERIVS_HPP_
