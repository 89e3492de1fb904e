// core/include/hierarchylab/homog.hpp

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

#ifndef HIERARCHYLAB_HOMOG_HPP_
#define HIERARCHYLAB_HOMOG_HPP_

#include <cstdint>
#include <vector>

#include "hierarchylab/hierarchy.hpp"

namespace hierarchylab {

// Closed-form results for piecewise-linear (1-homogeneous) activations
// sigma(t) = a_plus t for t > 0, a_minus t for t < 0.

struct HomogParams {
  double a_plus = 1.0;
  double a_minus = 0.0;
  double C_W = 2.0;      // critical weight variance 2/(a+^2 + a-^2)
  double bracket = 5.0;  // 6(a+^4 + a-^4)/(a+^2 + a-^2)^2 - 1
};

// Throws OutOfRange when a_plus^2 == a_minus^2 (the linear and
// absolute-value cases degenerate: no angle dynamics, bracket at its
// minimum).  For ReLU bracket = 5.
HomogParams homog_params(double a_plus, double a_minus);

// One layer of the two-input correlation map at equal input norms, in the
// variable eps with K_ab = K (1 - 2 eps).  eps = 0 is the fixed point of
// identical inputs.  Requires eps in [0, 1].
double correlation_step(double eps, const HomogParams& p);

// Leading large-depth amplitude quoted for the normalized map,
// (2/(3 pi)) / ell^2.  The measured invariant of the iterated map is the
// rate constant: 1/(ell sqrt(eps_ell)) -> 2 r/(3 pi) with
// r = (a+ - a-)^2/(a+^2 + a-^2), equivalently ell^2 eps -> (3 pi/(2 r))^2.
double correlation_asymptote(int ell, const HomogParams& p);

// Companion full-correlation form 2 (a+ - a-)^2/(3 pi (a+^2 + a-^2)) / ell^2.
double correlation_asymptote_full(int ell, const HomogParams& p);

// Leading-order normalized fourth cumulant K^2 * bracket * sum(1/n_ell)
// with K = C_W * norm_sq_over_n0.  Empty widths sum to zero.
double kappa4_closed_form(double norm_sq_over_n0,
                          const std::vector<int>& widths,
                          const HomogParams& p);

struct LognormalParams {
  double mu = 0.0;
  double sigma_sq = 0.0;
};

// Double-scaling limit of the radial log factor at effective depth xi:
// log R converges to N(-mu, sigma_sq) with mu = sigma_sq = (xi/4) bracket.
// Requires xi >= 0.
LognormalParams lognormal_limit_params(double xi, const HomogParams& p);

// Exact finite-width samples of the first output component: the output law
// is Z * sqrt(C_W ||x||^2 / n0) * R with Z standard normal and
// R = prod_l rho_l, rho_l^2 = (C_W/n_l)(a+^2 chi2_M + a-^2 chi2_{n_l - M}),
// M binomial(n_l, 1/2), all factors independent.  Valid for bias-free
// Homog1 networks (any C_W); requires C_b = 0.  Radial log factors are
// accumulated in log space and exponentiated once.
std::vector<double> sample_exact(const NetworkSpec& spec, long long n_samples,
                                 std::uint64_t seed);

// log R alone for the same draws, the statistic compared against the
// lognormal_limit_params normal law.
std::vector<double> sample_radial_log(const NetworkSpec& spec,
                                      long long n_samples,
                                      std::uint64_t seed);

}  // namespace hierarchylab

#endif  // HIERARCHYLAB_HOMOG_HPP_
