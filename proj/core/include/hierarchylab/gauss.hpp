// core/include/hierarchylab/gauss.hpp

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

#ifndef HIERARCHYLAB_GAUSS_HPP_
#define HIERARCHYLAB_GAUSS_HPP_

#include <functional>
#include <vector>

#include "hierarchylab/errors.hpp"
#include "hierarchylab/nonlin.hpp"

namespace hierarchylab {

// Variance of a single centered Gaussian coordinate.  Must be >= 0.
struct Kernel1 {
  double K = 0.0;
};

// Covariance of a centered Gaussian pair.
struct Kernel2 {
  double K_aa = 0.0;
  double K_ab = 0.0;
  double K_bb = 0.0;
};

inline constexpr int kDefaultNodes1 = 129;
inline constexpr int kDefaultNodes2 = 65;
inline constexpr int kNodeCap = 1025;
inline constexpr double kQuadRelTol = 1e-10;
inline constexpr double kPsdTol = 1e-12;

// Gauss-Hermite rule for the standard normal weight (unit total mass),
// symmetrized so nodes come in exact +/- pairs with an exact zero center
// node for odd sizes.  Rules are cached per size.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const QuadratureRule& gauss_hermite_rule(int n);

// <f(z)> for z ~ N(0, K).  Starts at `nodes` points and doubles the rule
// until two successive results agree to 1e-10 relative or the 1025-node cap
// is reached.  K = 0 returns f(0).  Kinked integrands are supported: the
// exact-zero center node is evaluated as the two-sided average
// (f(+d) + f(-d)) / 2 with d = 2^-512, which is what products of one-sided
// limits require.  Throws NonFinite when the result is not finite.
double expect1(const std::function<double(double)>& f, Kernel1 k,
               int nodes = kDefaultNodes1);

// <g(z_a, z_b)> under the 2x2 kernel.  Factorizes through the Cholesky
// transform; a kernel within 1e-12 of singular collapses to the exact
// rank-1 line.  Throws NotPSD when the kernel is indefinite beyond 1e-12
// relative tolerance.
double expect2(const std::function<double(double, double)>& g, Kernel2 k,
               int nodes = kDefaultNodes2);

// <d^i f / dz^i> in the weak sense: always evaluated through the Hermite
// identity <f^(i)> = K^(-i/2) <He_i(u) f(sqrt(K) u)>, so f itself is never
// differentiated and jump discontinuities contribute their distributional
// derivatives.  Throws SingularKernel for K = 0 with i >= 1.
double weak_deriv_expect(const std::function<double(double)>& f, Kernel1 k,
                         int i, int nodes = kDefaultNodes1);

// T_{i,j} = C_W^j <d^i/dz^i [ (sigma(z)^2 - <sigma^2>_K)^j ]>_K for even i
// and j >= 1.  These are the susceptibilities feeding the cumulant
// recursions.
double t_functional(const Nonlinearity& nl, Kernel1 k, int i, int j,
                    double c_w, int nodes = kDefaultNodes1);

}  // namespace hierarchylab

#endif  // HIERARCHYLAB_GAUSS_HPP_
