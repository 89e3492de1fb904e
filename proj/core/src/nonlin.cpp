// core/src/nonlin.cpp

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

#include "hierarchylab/nonlin.hpp"

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "json.hpp"

namespace hierarchylab {

namespace {

constexpr int kTanhMaxOrder = 12;
constexpr double kOddTol = 1e-10;

// Derivatives of tanh as polynomials in t = tanh(z):
// P_0(t) = t, P_{k+1}(t) = (1 - t^2) P_k'(t).
const std::vector<std::vector<double>>& tanh_poly_table() {
  static const std::vector<std::vector<double>> table = [] {
    std::vector<std::vector<double>> polys;
    polys.push_back({0.0, 1.0});
    for (int k = 0; k < kTanhMaxOrder; ++k) {
      const auto& p = polys.back();
      std::vector<double> dp(p.size() >= 2 ? p.size() - 1 : 1, 0.0);
      for (std::size_t i = 1; i < p.size(); ++i) {
        dp[i - 1] = static_cast<double>(i) * p[i];
      }
      std::vector<double> next(dp.size() + 2, 0.0);
      for (std::size_t i = 0; i < dp.size(); ++i) {
        next[i] += dp[i];
        next[i + 2] -= dp[i];
      }
      polys.push_back(std::move(next));
    }
    return polys;
  }();
  return table;
}

double tanh_deriv(double z, int order) {
  const double t = std::tanh(z);
  const auto& p = tanh_poly_table()[static_cast<std::size_t>(order)];
  double acc = 0.0;
  for (std::size_t i = p.size(); i-- > 0;) {
    acc = acc * t + p[i];
  }
  return acc;
}

}  // namespace

Nonlinearity Nonlinearity::relu() { return homog1(1.0, 0.0); }

Nonlinearity Nonlinearity::leaky_relu(double a_minus) {
  return homog1(1.0, a_minus);
}

Nonlinearity Nonlinearity::homog1(double a_plus, double a_minus) {
  Nonlinearity nl;
  nl.kind_ = NonlinKind::kHomog1;
  nl.a_plus_ = a_plus;
  nl.a_minus_ = a_minus;
  nl.sigma1_ = std::numeric_limits<double>::quiet_NaN();
  nl.sigma3_ = std::numeric_limits<double>::quiet_NaN();
  nl.max_order_ = std::numeric_limits<int>::max();
  return nl;
}

Nonlinearity Nonlinearity::tanh() {
  Nonlinearity nl;
  nl.kind_ = NonlinKind::kTanh;
  nl.sigma1_ = 1.0;
  nl.sigma3_ = -1.0 / 3.0;
  nl.max_order_ = kTanhMaxOrder;
  return nl;
}

Nonlinearity Nonlinearity::tanh_like(Evaluator evaluator, int max_deriv_order) {
  if (!evaluator) {
    throw OutOfRange("tanh_like requires a non-empty evaluator");
  }
  if (max_deriv_order < 3) {
    throw UnsupportedOrder(
        "tanh_like evaluators must support derivative orders up to 3");
  }
  Nonlinearity nl;
  nl.kind_ = NonlinKind::kTanhLike;
  nl.max_order_ = max_deriv_order;
  nl.sigma1_ = evaluator(0.0, 1);
  nl.sigma3_ = evaluator(0.0, 3) / 6.0;
  nl.evaluator_ = std::move(evaluator);
  return nl;
}

double Nonlinearity::eval(double z, int order) const {
  if (order < 0 || order > max_order_) {
    throw UnsupportedOrder("derivative order " + std::to_string(order) +
                           " not supported by this nonlinearity");
  }
  switch (kind_) {
    case NonlinKind::kHomog1:
      if (order == 0) {
        return z > 0.0 ? a_plus_ * z : (z < 0.0 ? a_minus_ * z : 0.0);
      }
      if (order == 1) {
        return z > 0.0 ? a_plus_ : (z < 0.0 ? a_minus_ : a_plus_);
      }
      return 0.0;
    case NonlinKind::kTanh:
      return tanh_deriv(z, order);
    case NonlinKind::kTanhLike:
      return evaluator_(z, order);
  }
  throw Error("unreachable nonlinearity kind");
}

double Nonlinearity::a_plus() const {
  if (kind_ != NonlinKind::kHomog1) {
    throw OutOfRange("a_plus is only defined for Homog1 activations");
  }
  return a_plus_;
}

double Nonlinearity::a_minus() const {
  if (kind_ != NonlinKind::kHomog1) {
    throw OutOfRange("a_minus is only defined for Homog1 activations");
  }
  return a_minus_;
}

double Nonlinearity::taylor_a() const {
  if (!smooth() || !odd_activation(*this)) {
    throw NotKStarZeroClass(
        "taylor_a requires a smooth odd activation tuned to K* = 0");
  }
  if (sigma1_ == 0.0) {
    throw NotKStarZeroClass("taylor_a requires a nonzero linear coefficient");
  }
  return -6.0 * sigma3_ / sigma1_;
}

bool odd_activation(const Nonlinearity& nl) {
  if (!nl.smooth()) {
    return false;
  }
  constexpr int kPoints = 64;
  constexpr double kHalfWidth = 5.0;
  for (int k = 0; k < kPoints; ++k) {
    const double theta = M_PI * (2.0 * k + 1.0) / (2.0 * kPoints);
    const double z = kHalfWidth * std::cos(theta);
    const double fwd = nl.eval(z, 0);
    const double bwd = nl.eval(-z, 0);
    if (std::abs(fwd + bwd) > kOddTol * std::max(1.0, std::abs(fwd))) {
      return false;
    }
  }
  return true;
}

Nonlinearity nonlin_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw OutOfRange(std::string("invalid nonlinearity JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw OutOfRange("nonlinearity JSON must be an object with a 'kind' key");
  }
  const std::string kind = j["kind"].get<std::string>();
  for (const auto& item : j.items()) {
    const std::string& key = item.key();
    if (key != "kind" && key != "a_plus" && key != "a_minus") {
      throw OutOfRange("unknown nonlinearity key: " + key);
    }
  }
  const bool has_plus = j.contains("a_plus");
  const bool has_minus = j.contains("a_minus");
  if (kind == "tanh") {
    if (has_plus || has_minus) {
      throw OutOfRange("tanh takes no slope parameters");
    }
    return Nonlinearity::tanh();
  }
  if (kind == "relu") {
    if (has_plus || has_minus) {
      throw OutOfRange("relu takes no slope parameters; use leaky_relu");
    }
    return Nonlinearity::relu();
  }
  if (kind == "leaky_relu") {
    if (!has_minus || !j["a_minus"].is_number()) {
      throw OutOfRange("leaky_relu requires a numeric 'a_minus'");
    }
    const double am = j["a_minus"].get<double>();
    const double ap =
        has_plus ? j["a_plus"].get<double>() : 1.0;
    return Nonlinearity::homog1(ap, am);
  }
  throw OutOfRange("unknown nonlinearity kind: " + kind);
}

std::string nonlin_to_json(const Nonlinearity& nl) {
  nlohmann::json j;
  switch (nl.kind()) {
    case NonlinKind::kTanh:
      j["kind"] = "tanh";
      break;
    case NonlinKind::kHomog1:
      if (nl.a_plus() == 1.0 && nl.a_minus() == 0.0) {
        j["kind"] = "relu";
      } else {
        j["kind"] = "leaky_relu";
        if (nl.a_plus() != 1.0) {
          j["a_plus"] = nl.a_plus();
        }
        j["a_minus"] = nl.a_minus();
      }
      break;
    case NonlinKind::kTanhLike:
      throw OutOfRange("TanhLike activations have no JSON spelling");
  }
  return j.dump();
}

}  // namespace hierarchylab
