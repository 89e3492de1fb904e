// core/src/mc.cpp

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

#include "hierarchylab/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <thread>

#include "hierarchylab/rng.hpp"

namespace hierarchylab {

namespace {

constexpr int kBatches = 20;
constexpr long long kMinSamples = 10000;
constexpr long long kChunk = 4096;
constexpr std::uint32_t kBiasStream = 0x40000000u;

struct Workspace {
  std::vector<double> w;     // scaled weights of the current layer
  std::vector<double> bias;
  std::vector<double> z, t1, t2;
  std::vector<double> act, dact, dt1, dt2;
  std::vector<double> nz, nt1, nt2;
  std::vector<double> g, gn;  // backprop row
  std::vector<std::vector<double>> saved_w;
  std::vector<std::vector<double>> saved_d;
  std::vector<double> layer_z1;
};

struct ForwardFlags {
  bool tangents = false;
  bool backprop = false;
  bool track_first = false;
};

void act_and_deriv(const Nonlinearity& nl, const std::vector<double>& z,
                   std::vector<double>& a, std::vector<double>& d,
                   bool need_d) {
  const std::size_t n = z.size();
  a.resize(n);
  d.resize(n);
  if (nl.kind() == NonlinKind::kTanh) {
    for (std::size_t i = 0; i < n; ++i) {
      const double t = std::tanh(z[i]);
      a[i] = t;
      d[i] = 1.0 - t * t;
    }
    return;
  }
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = nl.eval(z[i], 0);
    if (need_d) d[i] = nl.eval(z[i], 1);
  }
}

// One draw through every layer.  Weights are generated layer by layer in
// row-major order from the (draw, layer) lane space and scaled by
// sqrt(C_W/n_in) on the fly.
void forward_draw(const NetworkSpec& spec, std::uint64_t seed,
                  std::uint32_t draw, const ForwardFlags& fl, Workspace& ws) {
  const int depth = spec.depth() + 1;  // weight layers 1..L+1
  ws.layer_z1.clear();
  if (fl.backprop) {
    ws.saved_w.resize(depth);
    ws.saved_d.resize(depth > 0 ? depth - 1 : 0);
  }
  int n_in = spec.n0;
  const double* input = spec.input_x.data();
  for (int layer = 1; layer <= depth; ++layer) {
    const int n_out = layer <= static_cast<int>(spec.widths.size())
                          ? spec.widths[layer - 1]
                          : spec.n_out;
    const double scale = std::sqrt(spec.C_W / n_in);
    ws.w.resize(static_cast<std::size_t>(n_out) * n_in);
    fill_normals(seed, draw, static_cast<std::uint32_t>(layer), ws.w.data(),
                 n_out * n_in);
    for (double& v : ws.w) v *= scale;

    if (layer == 1) {
      ws.nz.assign(n_out, 0.0);
      for (int i = 0; i < n_out; ++i) {
        const double* row = ws.w.data() + static_cast<std::size_t>(i) * n_in;
        double acc = 0.0;
        for (int j = 0; j < n_in; ++j) acc += row[j] * input[j];
        ws.nz[i] = acc;
      }
      if (fl.tangents) {
        ws.nt1.resize(n_out);
        ws.nt2.resize(n_out);
        for (int i = 0; i < n_out; ++i) {
          const double* row = ws.w.data() + static_cast<std::size_t>(i) * n_in;
          ws.nt1[i] = row[0];
          ws.nt2[i] = n_in > 1 ? row[1] : 0.0;
        }
      }
    } else {
      act_and_deriv(spec.nl, ws.z, ws.act, ws.dact,
                    fl.tangents || fl.backprop);
      if (fl.backprop) ws.saved_d[layer - 2] = ws.dact;
      if (fl.tangents) {
        ws.dt1.resize(n_in);
        ws.dt2.resize(n_in);
        for (int j = 0; j < n_in; ++j) {
          ws.dt1[j] = ws.dact[j] * ws.t1[j];
          ws.dt2[j] = ws.dact[j] * ws.t2[j];
        }
      }
      ws.nz.assign(n_out, 0.0);
      if (fl.tangents) {
        ws.nt1.assign(n_out, 0.0);
        ws.nt2.assign(n_out, 0.0);
      }
      for (int i = 0; i < n_out; ++i) {
        const double* row = ws.w.data() + static_cast<std::size_t>(i) * n_in;
        double acc = 0.0, acc1 = 0.0, acc2 = 0.0;
        for (int j = 0; j < n_in; ++j) {
          acc += row[j] * ws.act[j];
          if (fl.tangents) {
            acc1 += row[j] * ws.dt1[j];
            acc2 += row[j] * ws.dt2[j];
          }
        }
        ws.nz[i] = acc;
        if (fl.tangents) {
          ws.nt1[i] = acc1;
          ws.nt2[i] = acc2;
        }
      }
    }

    if (spec.C_b > 0.0) {
      const double bscale = std::sqrt(spec.C_b);
      ws.bias.resize(n_out);
      fill_normals(seed, draw, kBiasStream | static_cast<std::uint32_t>(layer),
                   ws.bias.data(), n_out);
      for (int i = 0; i < n_out; ++i) ws.nz[i] += bscale * ws.bias[i];
    }
    if (fl.backprop) ws.saved_w[layer - 1] = ws.w;

    ws.z.swap(ws.nz);
    if (fl.tangents) {
      ws.t1.swap(ws.nt1);
      ws.t2.swap(ws.nt2);
    }
    if (fl.track_first) ws.layer_z1.push_back(ws.z[0]);
    n_in = n_out;
  }
}

// Row q of the Jacobian of the output with respect to the first
// pre-activation, from the saved weights and activation slopes.
void backprop_row(const NetworkSpec& spec, const Workspace& ws, int q,
                  std::vector<double>& g, std::vector<double>& gn) {
  const int depth = spec.depth() + 1;
  int n_cur = spec.n_out;
  g.assign(n_cur, 0.0);
  g[q] = 1.0;
  for (int layer = depth; layer >= 2; --layer) {
    const int n_prev = spec.widths[layer - 2];
    const std::vector<double>& w = ws.saved_w[layer - 1];
    const std::vector<double>& d = ws.saved_d[layer - 2];
    gn.assign(n_prev, 0.0);
    for (int i = 0; i < n_cur; ++i) {
      const double gi = g[i];
      if (gi == 0.0) continue;
      const double* row = w.data() + static_cast<std::size_t>(i) * n_prev;
      for (int j = 0; j < n_prev; ++j) gn[j] += gi * row[j];
    }
    for (int j = 0; j < n_prev; ++j) gn[j] *= d[j];
    g.swap(gn);
    n_cur = n_prev;
  }
}

int env_worker_count() {
  const char* raw = std::getenv("HIERARCHYLAB_THREADS");
  if (raw != nullptr && *raw != '\0') {
    const long v = std::strtol(raw, nullptr, 10);
    if (v >= 1) return static_cast<int>(v);
    return 1;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Fills obs[draw * n_obs + k]; chunk-parallel, slot-addressed, so the
// result is independent of the worker schedule.
void run_draws(long long n_samples, int n_obs,
               const std::function<void(std::uint32_t, Workspace&, double*)>&
                   per_draw,
               std::vector<double>& obs) {
  obs.resize(static_cast<std::size_t>(n_samples) * n_obs);
  const long long n_chunks = (n_samples + kChunk - 1) / kChunk;
  const int workers =
      static_cast<int>(std::min<long long>(worker_count(), n_chunks));
  std::atomic<long long> next{0};
  std::atomic<bool> failed{false};
  auto body = [&]() {
    Workspace ws;
    for (;;) {
      const long long c = next.fetch_add(1);
      if (c >= n_chunks || failed.load()) return;
      const long long lo = c * kChunk;
      const long long hi = std::min(n_samples, lo + kChunk);
      try {
        for (long long d = lo; d < hi; ++d) {
          per_draw(static_cast<std::uint32_t>(d), ws,
                   obs.data() + static_cast<std::size_t>(d) * n_obs);
        }
      } catch (...) {
        failed.store(true);
        return;
      }
    }
  };
  if (workers <= 1) {
    body();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) pool.emplace_back(body);
    for (auto& t : pool) t.join();
  }
  if (failed.load()) {
    throw NonFinite("a Monte Carlo draw failed");
  }
}

struct BatchMoments {
  std::vector<double> pooled;              // [n_obs]
  std::vector<std::vector<double>> batch;  // [kBatches][n_obs]
  long long n_samples = 0;
};

// Sequential indexed reduction (fixed order regardless of fill schedule).
BatchMoments reduce_batches(const std::vector<double>& obs,
                            long long n_samples, int n_obs) {
  BatchMoments out;
  out.n_samples = n_samples;
  out.pooled.assign(n_obs, 0.0);
  out.batch.assign(kBatches, std::vector<double>(n_obs, 0.0));
  for (int b = 0; b < kBatches; ++b) {
    const long long lo = n_samples * b / kBatches;
    const long long hi = n_samples * (b + 1) / kBatches;
    std::vector<double>& acc = out.batch[b];
    for (long long d = lo; d < hi; ++d) {
      const double* row = obs.data() + static_cast<std::size_t>(d) * n_obs;
      for (int k = 0; k < n_obs; ++k) acc[k] += row[k];
    }
    for (int k = 0; k < n_obs; ++k) out.pooled[k] += acc[k];
    const double inv = 1.0 / static_cast<double>(hi - lo);
    for (int k = 0; k < n_obs; ++k) acc[k] *= inv;
  }
  const double inv_n = 1.0 / static_cast<double>(n_samples);
  for (int k = 0; k < n_obs; ++k) out.pooled[k] *= inv_n;
  return out;
}

MCEstimate estimate_from(const BatchMoments& bm,
                         const std::function<double(const double*)>& stat) {
  MCEstimate est;
  est.value = stat(bm.pooled.data());
  est.n_samples = bm.n_samples;
  est.n_batches = kBatches;
  double mean = 0.0;
  std::vector<double> vals(kBatches);
  for (int b = 0; b < kBatches; ++b) {
    vals[b] = stat(bm.batch[b].data());
    mean += vals[b];
  }
  mean /= kBatches;
  double ss = 0.0;
  for (int b = 0; b < kBatches; ++b) {
    ss += (vals[b] - mean) * (vals[b] - mean);
  }
  est.std_error = std::sqrt(ss / (kBatches - 1) / kBatches);
  return est;
}

// Central moments u2..u8 from raw moment means m[0] = m1 .. m[7] = m8.
void central_moments(const double* m, double* u) {
  const double m1 = m[0];
  double pow_m1[9];
  pow_m1[0] = 1.0;
  for (int j = 1; j <= 8; ++j) pow_m1[j] = pow_m1[j - 1] * (-m1);
  for (int k = 2; k <= 8; ++k) {
    double binom = 1.0;
    double acc = 0.0;
    for (int j = 0; j <= k; ++j) {
      const double raw = (k - j == 0) ? 1.0 : m[k - j - 1];
      acc += binom * raw * pow_m1[j];
      binom = binom * (k - j) / (j + 1);
    }
    u[k] = acc;
  }
}

double cumulant_from_raw(const double* m, int order) {
  double u[9];
  central_moments(m, u);
  switch (order) {
    case 2:
      return u[2];
    case 3:
      return u[3];
    case 4:
      return u[4] - 3.0 * u[2] * u[2];
    case 5:
      return u[5] - 10.0 * u[3] * u[2];
    case 6:
      return u[6] - 15.0 * u[4] * u[2] - 10.0 * u[3] * u[3] +
             30.0 * u[2] * u[2] * u[2];
    case 8:
      return u[8] - 28.0 * u[6] * u[2] - 56.0 * u[5] * u[3] -
             35.0 * u[4] * u[4] + 420.0 * u[4] * u[2] * u[2] +
             560.0 * u[3] * u[3] * u[2] -
             630.0 * u[2] * u[2] * u[2] * u[2];
  }
  throw BadOrder("cumulant order must be 2, 3, 4, 5, 6 or 8");
}

void check_samples(long long n_samples) {
  if (n_samples < kMinSamples) {
    throw InsufficientSamples("need at least 10^4 draws");
  }
}

void check_two_outputs(const NetworkSpec& spec) {
  if (spec.n_out < 2) {
    throw OutOfRange("cross-neuron estimators need n_out >= 2");
  }
}

}  // namespace

int worker_count() { return env_worker_count(); }

ForwardResult forward_with_grads(const NetworkSpec& spec,
                                 std::uint64_t seed) {
  validate_spec(spec);
  Workspace ws;
  ForwardFlags fl;
  fl.backprop = true;
  forward_draw(spec, seed, 0, fl, ws);
  ForwardResult out;
  out.z_out = ws.z;
  const int n1 = spec.widths.empty() ? spec.n_out : spec.widths[0];
  out.dz_dx.assign(spec.n_out, std::vector<double>(spec.n0, 0.0));
  out.dz_dW1.assign(
      spec.n_out,
      std::vector<std::vector<double>>(n1, std::vector<double>(spec.n0, 0.0)));
  std::vector<double> g, gn;
  const std::vector<double>& w1 = ws.saved_w[0];
  for (int q = 0; q < spec.n_out; ++q) {
    backprop_row(spec, ws, q, g, gn);
    for (int i = 0; i < n1; ++i) {
      const double* row = w1.data() + static_cast<std::size_t>(i) * spec.n0;
      for (int j = 0; j < spec.n0; ++j) {
        out.dz_dx[q][j] += g[i] * row[j];
        out.dz_dW1[q][i][j] = g[i] * spec.input_x[j];
      }
    }
  }
  return out;
}

CumulantEstimates estimate_cumulants(const NetworkSpec& spec,
                                     long long n_samples,
                                     std::uint64_t seed) {
  validate_spec(spec);
  check_two_outputs(spec);
  check_samples(n_samples);
  constexpr int kObs = 10;  // z1^1..z1^8, z2^2, z1^2 z2^2
  std::vector<double> obs;
  run_draws(n_samples, kObs,
            [&spec, seed](std::uint32_t draw, Workspace& ws, double* row) {
              forward_draw(spec, seed, draw, ForwardFlags{}, ws);
              const double z1 = ws.z[0];
              const double z2 = ws.z[1];
              double p = 1.0;
              for (int k = 0; k < 8; ++k) {
                p *= z1;
                row[k] = p;
              }
              row[8] = z2 * z2;
              row[9] = z1 * z1 * row[8];
            },
            obs);
  const BatchMoments bm = reduce_batches(obs, n_samples, kObs);
  const auto kappa = [](int order, double denom) {
    return [order, denom](const double* m) {
      return cumulant_from_raw(m, order) / denom;
    };
  };
  CumulantEstimates out;
  out.kappa2 = estimate_from(bm, kappa(2, 1.0));
  out.kappa3 = estimate_from(bm, kappa(3, 1.0));
  out.kappa4_hat = estimate_from(bm, kappa(4, 3.0));
  out.kappa5 = estimate_from(bm, kappa(5, 1.0));
  out.kappa6_hat = estimate_from(bm, kappa(6, 15.0));
  out.kappa8_hat = estimate_from(bm, kappa(8, 105.0));
  out.cross00 = estimate_from(
      bm, [](const double* m) { return m[9] - m[1] * m[8]; });
  return out;
}

DerivCumulantEstimates estimate_deriv_cumulants(const NetworkSpec& spec,
                                                long long n_samples,
                                                std::uint64_t seed) {
  validate_spec(spec);
  if (spec.n0 < 2) {
    throw OutOfRange("derivative estimators need n0 >= 2");
  }
  check_two_outputs(spec);
  check_samples(n_samples);
  constexpr int kObs = 15;
  std::vector<double> obs;
  ForwardFlags fl;
  fl.tangents = true;
  run_draws(n_samples, kObs,
            [&spec, seed, fl](std::uint32_t draw, Workspace& ws, double* row) {
              forward_draw(spec, seed, draw, fl, ws);
              const double z1 = ws.z[0], z2 = ws.z[1];
              const double a = ws.t1[0], b = ws.t2[0];
              const double c = ws.t1[1], d = ws.t2[1];
              row[0] = z1;
              row[1] = a;
              row[2] = b;
              row[3] = a * a;
              row[4] = a * b;
              row[5] = z1 * a;
              row[6] = z1 * z1;
              row[7] = z2 * z2;
              row[8] = row[3] * row[7];
              row[9] = c * c;
              row[10] = row[3] * row[9];
              row[11] = d * d;
              row[12] = row[3] * row[11];
              row[13] = c * d;
              row[14] = row[4] * row[13];
            },
            obs);
  const BatchMoments bm = reduce_batches(obs, n_samples, kObs);
  const auto cov = [](int xy, int x, int y) {
    return [xy, x, y](const double* m) { return m[xy] - m[x] * m[y]; };
  };
  DerivCumulantEstimates out;
  out.K11 = estimate_from(bm, cov(3, 1, 1));
  out.K10 = estimate_from(bm, cov(5, 0, 1));
  out.K12 = estimate_from(bm, cov(4, 1, 2));
  out.k1100 = estimate_from(bm, cov(8, 3, 7));
  out.k1111 = estimate_from(bm, cov(10, 3, 9));
  out.k1122 = estimate_from(bm, cov(12, 3, 11));
  out.k1212 = estimate_from(bm, cov(14, 4, 13));
  return out;
}

GradStats estimate_evgp(const NetworkSpec& spec, long long n_samples,
                        std::uint64_t seed) {
  validate_spec(spec);
  check_samples(n_samples);
  double x2 = 0.0, x4 = 0.0;
  for (double v : spec.input_x) {
    x2 += v * v;
    x4 += v * v * v * v;
  }
  if (x2 == 0.0) {
    throw ZeroInput("gradient statistics need a nonzero input");
  }
  const double n1 =
      spec.widths.empty() ? spec.n_out : spec.widths[0];
  const double mean_x2 = x2 / spec.n0;
  const double mean_x4 = x4 / spec.n0;
  constexpr int kObs = 2;
  std::vector<double> obs;
  ForwardFlags fl;
  fl.backprop = true;
  run_draws(n_samples, kObs,
            [&spec, seed, fl, n1, mean_x2, mean_x4](
                std::uint32_t draw, Workspace& ws, double* row) {
              forward_draw(spec, seed, draw, fl, ws);
              std::vector<double>& g = ws.g;
              backprop_row(spec, ws, 0, g, ws.gn);
              double d2 = 0.0, d4 = 0.0;
              for (double v : g) {
                d2 += v * v;
                d4 += v * v * v * v;
              }
              const double gm = d2 / n1 * mean_x2;
              row[0] = gm;
              row[1] = d4 / n1 * mean_x4 - gm * gm;
            },
            obs);
  const BatchMoments bm = reduce_batches(obs, n_samples, kObs);
  GradStats out;
  out.grad_mean = estimate_from(bm, [](const double* m) { return m[0]; });
  out.grad_var = estimate_from(bm, [](const double* m) { return m[1]; });
  out.ratio = estimate_from(
      bm, [](const double* m) { return m[1] / (m[0] * m[0]); });
  // delta-method error from the batch covariance of (grad_var, grad_mean)
  double ma = 0.0, mb = 0.0;
  for (int b = 0; b < kBatches; ++b) {
    ma += bm.batch[b][1];
    mb += bm.batch[b][0];
  }
  ma /= kBatches;
  mb /= kBatches;
  double caa = 0.0, cbb = 0.0, cab = 0.0;
  for (int b = 0; b < kBatches; ++b) {
    const double da = bm.batch[b][1] - ma;
    const double db = bm.batch[b][0] - mb;
    caa += da * da;
    cbb += db * db;
    cab += da * db;
  }
  const double norm = 1.0 / (kBatches - 1) / kBatches;
  caa *= norm;
  cbb *= norm;
  cab *= norm;
  const double a = bm.pooled[1], b = bm.pooled[0];
  const double fa = 1.0 / (b * b);
  const double fb = -2.0 * a / (b * b * b);
  const double var =
      fa * fa * caa + fb * fb * cbb + 2.0 * fa * fb * cab;
  out.ratio.std_error = var > 0.0 ? std::sqrt(var) : 0.0;
  return out;
}

std::vector<MCEstimate> estimate_layer_variances(const NetworkSpec& spec,
                                                 long long n_samples,
                                                 std::uint64_t seed) {
  validate_spec(spec);
  check_samples(n_samples);
  const int depth = spec.depth() + 1;
  const int n_obs = 2 * depth;
  std::vector<double> obs;
  ForwardFlags fl;
  fl.track_first = true;
  run_draws(n_samples, n_obs,
            [&spec, seed, fl, depth](std::uint32_t draw, Workspace& ws,
                                     double* row) {
              forward_draw(spec, seed, draw, fl, ws);
              for (int l = 0; l < depth; ++l) {
                row[2 * l] = ws.layer_z1[l];
                row[2 * l + 1] = ws.layer_z1[l] * ws.layer_z1[l];
              }
            },
            obs);
  const BatchMoments bm = reduce_batches(obs, n_samples, n_obs);
  std::vector<MCEstimate> out(depth);
  for (int l = 0; l < depth; ++l) {
    out[l] = estimate_from(bm, [l](const double* m) {
      return m[2 * l + 1] - m[2 * l] * m[2 * l];
    });
  }
  return out;
}

VerifyReport verify(double pred, const MCEstimate& est, double z_max) {
  VerifyReport rep;
  const double gap = std::fabs(pred - est.value);
  if (est.std_error > 0.0) {
    rep.z = gap / est.std_error;
  } else {
    rep.z = gap == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  rep.pass = rep.z <= z_max;
  rep.underpowered = std::fabs(pred) < 5.0 * est.std_error;
  return rep;
}

}  // namespace hierarchylab
