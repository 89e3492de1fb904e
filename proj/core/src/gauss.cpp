// core/src/gauss.cpp

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

#include "hierarchylab/gauss.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <mutex>

namespace hierarchylab {

namespace {

// Two-sided evaluation offset for integrands with a jump at the origin.
const double kSideStep = std::ldexp(1.0, -512);

QuadratureRule build_rule(int n) {
  // Golub-Welsch for the probabilists' Hermite weight: Jacobi matrix with
  // zero diagonal and off-diagonal sqrt(k).
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(n - 1 > 0 ? n - 1 : 0);
  for (int k = 1; k < n; ++k) {
    sub[k - 1] = std::sqrt(static_cast<double>(k));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);

  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = solver.eigenvalues()[i];
    const double v = solver.eigenvectors()(0, i);
    rule.weights[i] = v * v;
  }
  // Enforce exact +/- symmetry; eigensolvers only give it to roundoff.
  for (int i = 0, j = n - 1; i < j; ++i, --j) {
    const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    rule.weights[i] = w;
    rule.weights[j] = w;
  }
  if (n % 2 == 1) {
    rule.nodes[n / 2] = 0.0;
  }
  double total = 0.0;
  for (double w : rule.weights) total += w;
  for (double& w : rule.weights) w /= total;
  return rule;
}

double apply1(const QuadratureRule& rule,
              const std::function<double(double)>& f, double sqrt_k) {
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double x = rule.nodes[i];
    double v;
    if (x == 0.0) {
      v = 0.5 * (f(kSideStep) + f(-kSideStep));
    } else {
      v = f(sqrt_k * x);
    }
    acc += rule.weights[i] * v;
  }
  return acc;
}

double apply1_hermite(const QuadratureRule& rule,
                      const std::function<double(double)>& f, double sqrt_k,
                      int order) {
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double x = rule.nodes[i];
    double he0 = 1.0;
    double he1 = x;
    double he = order == 0 ? he0 : he1;
    for (int k = 1; k < order; ++k) {
      const double next = x * he1 - static_cast<double>(k) * he0;
      he0 = he1;
      he1 = next;
      he = next;
    }
    double v;
    if (x == 0.0) {
      v = 0.5 * (f(kSideStep) + f(-kSideStep));
    } else {
      v = f(sqrt_k * x);
    }
    acc += rule.weights[i] * he * v;
  }
  return acc;
}

int next_size(int n) { return 2 * n - 1; }

bool converged(double prev, double cur) {
  return std::abs(cur - prev) <= kQuadRelTol * std::max(1.0, std::abs(cur));
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw NonFinite(std::string(what) + " produced a non-finite value");
  }
}

}  // namespace

const QuadratureRule& gauss_hermite_rule(int n) {
  if (n < 1) {
    throw OutOfRange("quadrature size must be positive");
  }
  static std::map<int, QuadratureRule> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) {
    it = cache.emplace(n, build_rule(n)).first;
  }
  return it->second;
}

double expect1(const std::function<double(double)>& f, Kernel1 k, int nodes) {
  if (!std::isfinite(k.K) || k.K < 0.0) {
    throw OutOfRange("expect1 requires a finite kernel K >= 0");
  }
  if (k.K == 0.0) {
    const double v = f(0.0);
    require_finite(v, "expect1");
    return v;
  }
  const double sqrt_k = std::sqrt(k.K);
  int n = nodes;
  double prev = apply1(gauss_hermite_rule(n), f, sqrt_k);
  while (next_size(n) <= kNodeCap) {
    n = next_size(n);
    const double cur = apply1(gauss_hermite_rule(n), f, sqrt_k);
    if (converged(prev, cur)) {
      prev = cur;
      break;
    }
    prev = cur;
  }
  require_finite(prev, "expect1");
  return prev;
}

double weak_deriv_expect(const std::function<double(double)>& f, Kernel1 k,
                         int i, int nodes) {
  if (i < 0) {
    throw OutOfRange("derivative order must be >= 0");
  }
  if (i == 0) {
    return expect1(f, k, nodes);
  }
  if (!std::isfinite(k.K) || k.K < 0.0) {
    throw OutOfRange("weak_deriv_expect requires a finite kernel K >= 0");
  }
  if (k.K == 0.0) {
    throw SingularKernel("weak derivative against a zero-variance kernel");
  }
  const double sqrt_k = std::sqrt(k.K);
  int n = nodes;
  double prev = apply1_hermite(gauss_hermite_rule(n), f, sqrt_k, i);
  while (next_size(n) <= kNodeCap) {
    n = next_size(n);
    const double cur = apply1_hermite(gauss_hermite_rule(n), f, sqrt_k, i);
    if (converged(prev, cur)) {
      prev = cur;
      break;
    }
    prev = cur;
  }
  const double scaled = prev * std::pow(k.K, -0.5 * i);
  require_finite(scaled, "weak_deriv_expect");
  return scaled;
}

namespace {

// One tensor-product pass.  Center nodes are measure-zero jump locations,
// so the integrand is averaged over the one-sided limits in each Gaussian
// coordinate that sits exactly at zero.
double apply2(const QuadratureRule& rule,
              const std::function<double(double, double)>& g, double sqrt_aa,
              double beta, double s) {
  const std::size_t n = rule.nodes.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = rule.nodes[i];
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double y = rule.nodes[j];
      double v = 0.0;
      const int su_count = x == 0.0 ? 2 : 1;
      const int sv_count = y == 0.0 ? 2 : 1;
      for (int su = 0; su < su_count; ++su) {
        const double za =
            x == 0.0 ? (su == 0 ? kSideStep : -kSideStep) : sqrt_aa * x;
        for (int sv = 0; sv < sv_count; ++sv) {
          const double vb =
              y == 0.0 ? (sv == 0 ? kSideStep : -kSideStep) : s * y;
          v += g(za, beta * za + vb);
        }
      }
      row += rule.weights[j] * v / (su_count * sv_count);
    }
    acc += rule.weights[i] * row;
  }
  return acc;
}

}  // namespace

double expect2(const std::function<double(double, double)>& g, Kernel2 k,
               int nodes) {
  if (!std::isfinite(k.K_aa) || !std::isfinite(k.K_ab) ||
      !std::isfinite(k.K_bb)) {
    throw OutOfRange("expect2 requires finite kernel entries");
  }
  const double scale =
      std::max({k.K_aa * k.K_bb, k.K_ab * k.K_ab, std::abs(k.K_aa),
                std::abs(k.K_bb), 1e-300});
  if (k.K_aa < -kPsdTol * scale || k.K_bb < -kPsdTol * scale) {
    throw NotPSD("expect2 kernel has a negative diagonal");
  }
  const double det = k.K_aa * k.K_bb - k.K_ab * k.K_ab;
  if (det < -kPsdTol * scale) {
    throw NotPSD("expect2 kernel is indefinite");
  }
  const double k_aa = std::max(k.K_aa, 0.0);
  const double k_bb = std::max(k.K_bb, 0.0);
  if (k_aa == 0.0) {
    return expect1([&g](double zb) { return g(0.0, zb); }, Kernel1{k_bb},
                   nodes);
  }
  if (k_bb == 0.0) {
    return expect1([&g](double za) { return g(za, 0.0); }, Kernel1{k_aa},
                   nodes);
  }
  const double beta = k.K_ab / k_aa;
  if (det <= kPsdTol * scale) {
    // Rank-1 kernel: z_b lies exactly on the line beta * z_a.
    return expect1([&g, beta](double za) { return g(za, beta * za); },
                   Kernel1{k_aa}, std::max(nodes, kDefaultNodes1));
  }
  const double sqrt_aa = std::sqrt(k_aa);
  const double s = std::sqrt(det / k_aa);
  int n = nodes;
  double prev = apply2(gauss_hermite_rule(n), g, sqrt_aa, beta, s);
  while (next_size(n) <= kNodeCap) {
    n = next_size(n);
    const double cur = apply2(gauss_hermite_rule(n), g, sqrt_aa, beta, s);
    if (converged(prev, cur)) {
      prev = cur;
      break;
    }
    prev = cur;
  }
  require_finite(prev, "expect2");
  return prev;
}

double t_functional(const Nonlinearity& nl, Kernel1 k, int i, int j,
                    double c_w, int nodes) {
  if (i < 0 || i % 2 != 0) {
    throw OutOfRange("t_functional requires an even derivative order");
  }
  if (j < 1) {
    throw OutOfRange("t_functional requires j >= 1");
  }
  const double mean =
      expect1([&nl](double z) { return nl.eval(z) * nl.eval(z); }, k, nodes);
  const auto centered_pow = [&nl, mean, j](double z) {
    const double s = nl.eval(z);
    double base = s * s - mean;
    double acc = base;
    for (int p = 1; p < j; ++p) acc *= base;
    return acc;
  };
  return std::pow(c_w, j) * weak_deriv_expect(centered_pow, k, i, nodes);
}

}  // namespace hierarchylab
