// core/include/hierarchylab/crit.hpp

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

#ifndef HIERARCHYLAB_CRIT_HPP_
#define HIERARCHYLAB_CRIT_HPP_

#include <string>

#include "hierarchylab/nonlin.hpp"

namespace hierarchylab {

enum class UniversalityClass {
  kHomog1,           // piecewise linear, scale invariant, any K* works
  kKStarZero,        // smooth odd activation, critical kernel shrinks to zero
  kGenericCritical,  // smooth activation with an isolated K* > 0
};

// Initialization variances plus the critical fixed-point kernel they tune.
struct CriticalTuning {
  double C_b = 0.0;
  double C_W = 1.0;
  double K_star = 0.0;
  UniversalityClass cls = UniversalityClass::kKStarZero;
};

// Parallel susceptibility (C_W / 2) <d^2 sigma^2 / dz^2>_K.  At K = 0 this
// is the Taylor value C_W sigma1^2 (Homog1: C_W (a+^2 + a-^2) / 2, which
// also equals the K > 0 value by scale invariance).
double chi_parallel(const Nonlinearity& nl, double c_w, double K);

// Perpendicular susceptibility C_W <sigma'(z)^2>_K, Taylor value
// C_W sigma'(0)^2 at K = 0.
double chi_perp(const Nonlinearity& nl, double c_w, double K);

// Decide which critical class the activation belongs to.  Oddness is
// checked numerically on a Chebyshev grid over [-5, 5] at 1e-10.
UniversalityClass classify(const Nonlinearity& nl);

// Solve for (C_b, C_W, K_star) putting the network at criticality.
// Homog1 and smooth odd activations have closed forms; the generic case
// runs a damped Newton iteration on (K_star, C_W) driving both
// susceptibilities to 1, then back-solves C_b from the fixed-point
// condition.  Throws NoCriticalPoint when the iteration fails, exceeds 200
// steps, or lands on C_b < 0.
CriticalTuning tune_critical(const Nonlinearity& nl);

// Spellings used in configuration files: "Homog1", "KStarZero",
// "GenericCritical".
std::string universality_to_string(UniversalityClass cls);
UniversalityClass universality_from_string(const std::string& name);

}  // namespace hierarchylab

#endif  // HIERARCHYLAB_CRIT_HPP_
