// core/include/hierarchylab/nonlin.hpp

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

#ifndef HIERARCHYLAB_NONLIN_HPP_
#define HIERARCHYLAB_NONLIN_HPP_

#include <functional>
#include <string>

#include "hierarchylab/errors.hpp"

namespace hierarchylab {

enum class NonlinKind {
  kHomog1,    // piecewise linear through the origin: a_plus z for z>0, a_minus z for z<0
  kTanh,      // tanh with closed-form derivatives of any order
  kTanhLike,  // caller-supplied smooth odd-ish activation with analytic derivatives
};

// Value type describing the pointwise activation and as many of its
// derivatives as the evaluation routines need.  Derivatives are analytic:
// tanh uses the polynomial-in-tanh recurrence, Homog1 is piecewise linear,
// and TanhLike evaluators must supply derivatives themselves (finite
// differencing the activation is refused because fourth and higher
// differences lose too many digits for the recursions built on top).
class Nonlinearity {
 public:
  using Evaluator = std::function<double(double z, int order)>;

  static Nonlinearity relu();
  static Nonlinearity leaky_relu(double a_minus);
  static Nonlinearity homog1(double a_plus, double a_minus);
  static Nonlinearity tanh();
  // max_deriv_order is the largest order the evaluator supports.
  // Orders 0..3 are required so the slope and cubic coefficient exist.
  static Nonlinearity tanh_like(Evaluator evaluator, int max_deriv_order);

  // Value (order 0) or analytic derivative of the given order at z.
  // Throws UnsupportedOrder past the supported order.  For Homog1 the kink
  // at z = 0 evaluates to the right limit: order 1 gives a_plus, higher
  // orders give 0.
  double eval(double z, int order = 0) const;

  NonlinKind kind() const { return kind_; }
  bool smooth() const { return kind_ != NonlinKind::kHomog1; }

  // Odd Taylor coefficients of smooth activations: sigma(z) ~ sigma1 z +
  // sigma3 z^3 + ...  NaN for Homog1.
  double sigma1() const { return sigma1_; }
  double sigma3() const { return sigma3_; }

  // Largest derivative order eval accepts.
  int max_deriv_order() const { return max_order_; }

  // Slopes of the two linear pieces.  Throws OutOfRange unless Homog1.
  double a_plus() const;
  double a_minus() const;

  // Curvature ratio -6 sigma3 / sigma1 controlling the kernel decay rate of
  // smooth odd activations tuned to a vanishing critical kernel.  Throws
  // NotKStarZeroClass for anything else.
  double taylor_a() const;

 private:
  Nonlinearity() = default;

  NonlinKind kind_ = NonlinKind::kTanh;
  double a_plus_ = 0.0;
  double a_minus_ = 0.0;
  double sigma1_ = 0.0;
  double sigma3_ = 0.0;
  int max_order_ = 0;
  Evaluator evaluator_;
};

// True when the activation is smooth and odd to within 1e-10 on a fixed
// Chebyshev grid over [-5, 5].
bool odd_activation(const Nonlinearity& nl);

// Parse {"kind": "relu"|"leaky_relu"|"tanh", ...} with optional slope
// overrides for leaky_relu.  Unknown keys or kinds throw OutOfRange.
Nonlinearity nonlin_from_json(const std::string& text);

// Inverse of nonlin_from_json for the serializable kinds.  TanhLike and
// Homog1 slopes without a JSON spelling throw OutOfRange.
std::string nonlin_to_json(const Nonlinearity& nl);

}  // namespace hierarchylab

#endif  // HIERARCHYLAB_NONLIN_HPP_
