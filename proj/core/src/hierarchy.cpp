// core/src/hierarchy.cpp

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

#include "hierarchylab/hierarchy.hpp"

#include <algorithm>
#include <cmath>

namespace hierarchylab {

void validate_spec(const NetworkSpec& spec) {
  if (spec.n0 < 1) {
    throw OutOfRange("input dimension must be >= 1");
  }
  if (spec.input_x.size() != static_cast<std::size_t>(spec.n0)) {
    throw OutOfRange("input vector length must equal n0");
  }
  for (int w : spec.widths) {
    if (w < 1) {
      throw OutOfRange("hidden widths must be >= 1");
    }
  }
  if (spec.n_out < 1) {
    throw OutOfRange("output width must be >= 1");
  }
  if (!(spec.C_W > 0.0) || !std::isfinite(spec.C_W)) {
    throw OutOfRange("C_W must be positive");
  }
  if (spec.C_b < 0.0 || !std::isfinite(spec.C_b)) {
    throw OutOfRange("C_b must be >= 0");
  }
  for (double x : spec.input_x) {
    if (!std::isfinite(x)) {
      throw OutOfRange("input vector must be finite");
    }
  }
}

double kernel_seed(const NetworkSpec& spec) {
  double norm_sq = 0.0;
  for (double x : spec.input_x) norm_sq += x * x;
  return spec.C_b + spec.C_W * norm_sq / static_cast<double>(spec.n0);
}

double kernel_step(double K, double c_b, double c_w, const Nonlinearity& nl) {
  if (K < 0.0) {
    throw OutOfRange("kernel_step requires K >= 0");
  }
  return c_b + c_w * expect1(
                         [&nl](double z) {
                           const double s = nl.eval(z);
                           return s * s;
                         },
                         Kernel1{K});
}

Kernel2 kernel_pair_step(Kernel2 k2, double c_b, double c_w,
                         const Nonlinearity& nl) {
  Kernel2 out;
  out.K_aa = kernel_step(k2.K_aa, c_b, c_w, nl);
  out.K_bb = kernel_step(k2.K_bb, c_b, c_w, nl);
  out.K_ab = c_b + c_w * expect2([&nl](double za, double zb) {
               return nl.eval(za) * nl.eval(zb);
             },
                                 k2);
  return out;
}

CumulantState cumulant_step(const CumulantState& state, int n_ell, double c_w,
                            const Nonlinearity& nl, double c_b) {
  if (n_ell != kInfiniteWidth && n_ell < 1) {
    throw OutOfRange("layer width must be >= 1 or kInfiniteWidth");
  }
  const Kernel1 k{state.K};
  const double chi = chi_parallel(nl, c_w, state.K);
  const double k4 = state.k4;
  const double k6 = state.k6;
  const double k8 = state.k8;

  CumulantState out;
  out.ell = state.ell + 1;
  out.K = kernel_step(state.K, c_b, c_w, nl);

  if (n_ell == kInfiniteWidth) {
    out.k4 = chi * chi * k4;
    out.k6 = chi * chi * chi * k6;
    out.k8 = chi * chi * chi * chi * k8;
    return out;
  }

  const double n = static_cast<double>(n_ell);
  const double t02 = t_functional(nl, k, 0, 2, c_w);
  const double t22 = t_functional(nl, k, 2, 2, c_w);
  const double t41 = t_functional(nl, k, 4, 1, c_w);
  const double t03 = t_functional(nl, k, 0, 3, c_w);
  const double t04 = t_functional(nl, k, 0, 4, c_w);
  const double t23 = t_functional(nl, k, 2, 3, c_w);
  const double t42 = t_functional(nl, k, 4, 2, c_w);

  out.k4 = t02 / n + chi * chi * k4;

  out.k6 = t03 / (n * n) + (3.0 * t22 / (2.0 * n)) * chi * k4 -
           (3.0 * t41 / 8.0) * (chi * k4) * (chi * k4) +
           chi * chi * chi * k6;

  const double chi2 = chi * chi;
  const double chi3 = chi2 * chi;
  const double chi4 = chi2 * chi2;
  out.k8 = (t04 - 3.0 * t02 * t02) / (n * n * n) +
           (2.0 * t23 * chi - 12.0 * t02 * chi2 + 1.5 * t22 * t22 -
            1.5 * t41 * t02) *
               k4 / (n * n) -
           (2.0 * t22 * t41 * chi - 0.5 * t42 * chi2 + chi4) * k4 * k4 / n +
           (5.0 * t02 * t41 * chi + 12.0 * t22 * chi2) * k6 / n +
           (3.0 / 32.0) * t41 * t41 * chi2 * k4 * k4 * k4 -
           0.5 * chi3 * t41 * k4 * k6 + chi4 * k8;
  return out;
}

HierarchyRun run_hierarchy(const NetworkSpec& spec) {
  validate_spec(spec);
  HierarchyRun run;
  CumulantState state;
  state.ell = 1;
  state.K = kernel_seed(spec);
  run.states.push_back(state);
  for (int n_ell : spec.widths) {
    state = cumulant_step(state, n_ell, spec.C_W, spec.nl, spec.C_b);
    run.states.push_back(state);
  }
  if (!spec.widths.empty()) {
    const int min_width =
        *std::min_element(spec.widths.begin(), spec.widths.end());
    run.k8_caveat =
        static_cast<double>(spec.depth()) / min_width > 0.5;
  }
  return run;
}

NormalizedCumulants normalized_cumulants(const CumulantState& state) {
  NormalizedCumulants out;
  if (state.K > 0.0) {
    const double K2 = state.K * state.K;
    out.k4_hat = state.k4 / K2;
    out.k6_hat = state.k6 / (K2 * state.K);
    out.k8_hat = state.k8 / (K2 * K2);
  }
  return out;
}

double predict_normalized(double xi, int k) {
  if (xi < 0.0) {
    throw OutOfRange("xi must be >= 0");
  }
  double constant = 0.0;
  switch (k) {
    case 2:
      constant = 2.0 / 3.0;
      break;
    case 3:
      constant = 28.0 / 15.0;
      break;
    case 4:
      constant = 8756.0 / 315.0;
      break;
    default:
      throw BadOrder("predict_normalized supports k in {2, 3, 4}");
  }
  return constant * std::pow(xi, k - 1);
}

LinearRecursionResult solve_linear_recursion(
    const std::function<double(int)>& xi_seq,
    const std::function<double(int)>& zeta_seq, double a0, int L) {
  if (L < 1) {
    throw OutOfRange("recursion length must be >= 1");
  }
  LinearRecursionResult result;
  result.values.reserve(static_cast<std::size_t>(L));
  double a = a0;
  result.values.push_back(a);
  for (int ell = 1; ell < L; ++ell) {
    const double zeta = zeta_seq(ell);
    if (zeta < 0.0 || zeta > 1.0) {
      throw OutOfRange("zeta sequence must stay in [0, 1]");
    }
    a = xi_seq(ell) + (1.0 - zeta) * a;
    result.values.push_back(a);
  }
  const double kEulerGamma = 0.57721566490153286;
  result.asymptote = [a0, kEulerGamma](double ell, double C1, double psi,
                                       double C2) {
    const double denom = 1.0 - psi + C2;
    if (std::abs(denom) < 1e-12) {
      throw OutOfRange("degenerate asymptote: psi = C2 + 1");
    }
    return std::pow(ell, 1.0 - psi) * C1 / denom +
           std::exp(-C2 * kEulerGamma) * std::pow(ell, -C2) * a0;
  };
  return result;
}

double kstar_zero_kernel_asymptote(int ell, const Nonlinearity& nl) {
  if (ell < 1) {
    throw OutOfRange("layer index must be >= 1");
  }
  return 1.0 / (nl.taylor_a() * static_cast<double>(ell));
}

}  // namespace hierarchylab
