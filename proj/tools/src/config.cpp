// tools/src/config.cpp

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

#include "config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "hierarchylab/crit.hpp"
#include "hierarchylab/derivs.hpp"
#include "hierarchylab/errors.hpp"
#include "hierarchylab/homog.hpp"
#include "hierarchylab/mc.hpp"
#include "hierarchylab/nonlin.hpp"
#include "hierarchylab/version.hpp"

namespace hierarchylab {
namespace cli {

namespace {

using nlohmann::json;

const char* kCommandNames[] = {"tune",  "kernel", "hierarchy", "derivs",
                               "evgp",  "relu",   "mc",        "verify"};

double req_num(const json& j, const char* key, const char* where) {
  if (!j.contains(key) || !j[key].is_number()) {
    throw OutOfRange(std::string(where) + ": missing numeric field '" + key +
                     "'");
  }
  return j[key].get<double>();
}

double opt_num(const json& j, const char* key, double def) {
  if (!j.contains(key)) return def;
  if (!j[key].is_number()) {
    throw OutOfRange(std::string("field '") + key + "' must be a number");
  }
  return j[key].get<double>();
}

long long opt_int(const json& j, const char* key, long long def,
                  const char* where) {
  if (!j.contains(key)) return def;
  if (!j[key].is_number_integer()) {
    throw OutOfRange(std::string(where) + ": field '" + key +
                     "' must be an integer");
  }
  return j[key].get<long long>();
}

std::string req_str(const json& j, const char* key, const char* where) {
  if (!j.contains(key) || !j[key].is_string()) {
    throw OutOfRange(std::string(where) + ": missing string field '" + key +
                     "'");
  }
  return j[key].get<std::string>();
}

// An experiment's output: either a finished CSV body (columns line plus data
// rows, comment header added at write time) or a JSON result object.
struct RunOutput {
  bool is_csv = false;
  std::string csv;
  json result;
  std::vector<std::string> notes;  // extra '#' header lines
  int exit_code = 0;
};

std::string join_row(const std::vector<double>& vals) {
  std::string line;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (i) line += ',';
    line += fmt_g17(vals[i]);
  }
  line += '\n';
  return line;
}

json estimate_json(const MCEstimate& e) {
  json j;
  j["value"] = e.value;
  j["std_error"] = e.std_error;
  j["n_samples"] = e.n_samples;
  j["n_batches"] = e.n_batches;
  return j;
}

RunOutput do_tune(const ExperimentConfig& cfg) {
  check_keys(cfg.options, {}, "tune options");
  const CriticalTuning t = tune_critical(cfg.spec.nl);
  RunOutput out;
  out.result["C_b"] = json_number(t.C_b);
  out.result["C_W"] = json_number(t.C_W);
  out.result["K_star"] = json_number(t.K_star);
  out.result["class"] = universality_to_string(t.cls);
  return out;
}

RunOutput do_kernel(const ExperimentConfig& cfg) {
  check_keys(cfg.options, {"layers", "eps0"}, "kernel options");
  const long long layers = opt_int(cfg.options, "layers", -1, "kernel");
  if (layers < 1) {
    throw OutOfRange("kernel: options.layers must be a positive integer");
  }
  RunOutput out;
  out.is_csv = true;
  const NetworkSpec& s = cfg.spec;
  const double k1 = kernel_seed(s);
  if (cfg.options.contains("eps0")) {
    const double eps0 = req_num(cfg.options, "eps0", "kernel");
    if (eps0 < 0.0 || eps0 > 1.0) {
      throw OutOfRange("kernel: eps0 must lie in [0, 1]");
    }
    out.csv = "ell,K,K_off,eps\n";
    Kernel2 k2{k1, k1 * (1.0 - 2.0 * eps0), k1};
    for (long long ell = 1; ell <= layers + 1; ++ell) {
      const double eps = k2.K_aa > 0.0
                             ? 0.5 * (1.0 - k2.K_ab / k2.K_aa)
                             : 0.0;
      out.csv += join_row({static_cast<double>(ell), k2.K_aa, k2.K_ab, eps});
      if (ell <= layers) k2 = kernel_pair_step(k2, s.C_b, s.C_W, s.nl);
    }
  } else {
    out.csv = "ell,K\n";
    double K = k1;
    for (long long ell = 1; ell <= layers + 1; ++ell) {
      out.csv += join_row({static_cast<double>(ell), K});
      if (ell <= layers) K = kernel_step(K, s.C_b, s.C_W, s.nl);
    }
  }
  return out;
}

RunOutput do_hierarchy(const ExperimentConfig& cfg) {
  check_keys(cfg.options, {}, "hierarchy options");
  const HierarchyRun run = run_hierarchy(cfg.spec);
  RunOutput out;
  out.is_csv = true;
  if (run.k8_caveat) {
    out.notes.push_back(
        "note depth/width > 0.5: dropped eighth-cumulant remainders may "
        "reach (L/n)^4");
  }
  out.csv = "ell,K,kappa4,kappa6,kappa8,kappa4_hat,kappa6_hat,kappa8_hat\n";
  for (const CumulantState& st : run.states) {
    const NormalizedCumulants nc = normalized_cumulants(st);
    out.csv += join_row({static_cast<double>(st.ell), st.K, st.k4, st.k6,
                         st.k8, nc.k4_hat, nc.k6_hat, nc.k8_hat});
  }
  return out;
}

RunOutput do_derivs(const ExperimentConfig& cfg) {
  check_keys(cfg.options, {}, "derivs options");
  const DerivTrajectory tr = run_derivs(cfg.spec);
  RunOutput out;
  out.is_csv = true;
  out.csv =
      "ell,K00,K10,K20,K11,K22,K12,"
      "k0000,k1000,k1010,k1020,k1100,k1200,k1110,k1210,k1120,k1111,k1122,"
      "k1212,S00,S10,S20,S11,S22,S12\n";
  for (const DerivTrajectoryPoint& p : tr.points) {
    const DerivKernelState& k = p.kernels;
    const DerivFourthState& f = p.fourth;
    const SCorrectionState& s = p.s;
    out.csv += join_row({static_cast<double>(k.ell), k.K00, k.K10, k.K20,
                         k.K11, k.K22, k.K12, f.k0000, f.k1000, f.k1010,
                         f.k1020, f.k1100, f.k1200, f.k1110, f.k1210, f.k1120,
                         f.k1111, f.k1122, f.k1212, s.S00, s.S10, s.S20,
                         s.S11, s.S22, s.S12});
  }
  return out;
}

RunOutput do_evgp(const ExperimentConfig& cfg) {
  check_keys(cfg.options, {}, "evgp options");
  const double prediction = evgp_predict(cfg.spec);
  double xi = 0.0;
  for (int n : cfg.spec.widths) xi += 1.0 / n;
  RunOutput out;
  out.result["prediction"] = prediction;
  out.result["xi"] = xi;
  out.result["C_sigma"] = prediction / (1.0 + 8.0 / 3.0 * xi);
  return out;
}

RunOutput do_relu(const ExperimentConfig& cfg) {
  check_keys(cfg.options,
             {"mode", "a_plus", "a_minus", "eps0", "layers", "xi"},
             "relu options");
  const std::string mode = req_str(cfg.options, "mode", "relu");
  const double a_plus = opt_num(cfg.options, "a_plus", 1.0);
  const double a_minus = opt_num(cfg.options, "a_minus", 0.0);
  const HomogParams params = homog_params(a_plus, a_minus);
  RunOutput out;
  if (mode == "corr") {
    const double eps0 = req_num(cfg.options, "eps0", "relu corr");
    const long long layers = opt_int(cfg.options, "layers", -1, "relu corr");
    if (layers < 1) {
      throw OutOfRange("relu corr: options.layers must be positive");
    }
    out.is_csv = true;
    out.csv = "ell,eps,ell_sq_eps,rate_reading\n";
    double eps = eps0;
    for (long long ell = 1; ell <= layers; ++ell) {
      eps = correlation_step(eps, params);
      const double le = static_cast<double>(ell);
      const double rate = eps > 0.0 ? 1.0 / (le * std::sqrt(eps)) : 0.0;
      out.csv += join_row({le, eps, le * le * eps, rate});
    }
    return out;
  }
  if (mode == "kappa4") {
    const NetworkSpec& s = cfg.spec;
    double norm_sq = 0.0;
    for (double v : s.input_x) norm_sq += v * v;
    // slopes come from the spec activation so the closed form describes
    // the configured network, not the flag defaults
    const HomogParams sp = homog_params(s.nl.a_plus(), s.nl.a_minus());
    out.result["kappa4_hat"] =
        kappa4_closed_form(norm_sq / s.n0, s.widths, sp);
    return out;
  }
  if (mode == "limit") {
    const double xi = req_num(cfg.options, "xi", "relu limit");
    const LognormalParams lp = lognormal_limit_params(xi, params);
    out.result["mu"] = lp.mu;
    out.result["sigma_sq"] = lp.sigma_sq;
    return out;
  }
  if (mode == "sample") {
    const std::vector<double> z =
        sample_exact(cfg.spec, cfg.samples,
                     static_cast<std::uint64_t>(cfg.seed));
    out.is_csv = true;
    out.csv = "index,z\n";
    for (std::size_t i = 0; i < z.size(); ++i) {
      out.csv += join_row({static_cast<double>(i), z[i]});
    }
    return out;
  }
  throw OutOfRange("relu: mode must be corr, kappa4, limit or sample");
}

RunOutput do_mc(const ExperimentConfig& cfg) {
  check_keys(cfg.options, {"what"}, "mc options");
  const std::string what = req_str(cfg.options, "what", "mc");
  const std::uint64_t seed = static_cast<std::uint64_t>(cfg.seed);
  RunOutput out;
  if (what == "cumulants") {
    const CumulantEstimates c =
        estimate_cumulants(cfg.spec, cfg.samples, seed);
    out.result["kappa2"] = estimate_json(c.kappa2);
    out.result["kappa3"] = estimate_json(c.kappa3);
    out.result["kappa4_hat"] = estimate_json(c.kappa4_hat);
    out.result["kappa5"] = estimate_json(c.kappa5);
    out.result["kappa6_hat"] = estimate_json(c.kappa6_hat);
    out.result["kappa8_hat"] = estimate_json(c.kappa8_hat);
    out.result["cross00"] = estimate_json(c.cross00);
    return out;
  }
  if (what == "derivs") {
    const DerivCumulantEstimates d =
        estimate_deriv_cumulants(cfg.spec, cfg.samples, seed);
    out.result["K11"] = estimate_json(d.K11);
    out.result["K10"] = estimate_json(d.K10);
    out.result["K12"] = estimate_json(d.K12);
    out.result["k1100"] = estimate_json(d.k1100);
    out.result["k1111"] = estimate_json(d.k1111);
    out.result["k1122"] = estimate_json(d.k1122);
    out.result["k1212"] = estimate_json(d.k1212);
    return out;
  }
  if (what == "evgp") {
    const GradStats g = estimate_evgp(cfg.spec, cfg.samples, seed);
    out.result["grad_mean"] = estimate_json(g.grad_mean);
    out.result["grad_var"] = estimate_json(g.grad_var);
    out.result["ratio"] = estimate_json(g.ratio);
    return out;
  }
  if (what == "layer_variances") {
    const std::vector<MCEstimate> vs =
        estimate_layer_variances(cfg.spec, cfg.samples, seed);
    json arr = json::array();
    for (const MCEstimate& e : vs) arr.push_back(estimate_json(e));
    out.result["layer_variances"] = arr;
    return out;
  }
  throw OutOfRange(
      "mc: what must be cumulants, derivs, evgp or layer_variances");
}

RunOutput do_verify(const ExperimentConfig& cfg) {
  check_keys(cfg.options, {"pred", "value", "se", "n_samples", "z_max"},
             "verify options");
  const double pred = req_num(cfg.options, "pred", "verify");
  MCEstimate est;
  est.value = req_num(cfg.options, "value", "verify");
  est.std_error = req_num(cfg.options, "se", "verify");
  est.n_samples = opt_int(cfg.options, "n_samples", cfg.samples, "verify");
  const double z_max = opt_num(cfg.options, "z_max", 3.0);
  if (est.std_error < 0.0 || z_max <= 0.0) {
    throw OutOfRange("verify: se must be >= 0 and z_max > 0");
  }
  const VerifyReport rep = verify(pred, est, z_max);
  RunOutput out;
  out.result["pass"] = rep.pass;
  out.result["z"] = rep.z;
  out.result["underpowered"] = rep.underpowered;
  out.exit_code = rep.pass ? 0 : 3;
  return out;
}

RunOutput dispatch(const ExperimentConfig& cfg) {
  switch (cfg.command) {
    case Command::kTune:
      return do_tune(cfg);
    case Command::kKernel:
      return do_kernel(cfg);
    case Command::kHierarchy:
      return do_hierarchy(cfg);
    case Command::kDerivs:
      return do_derivs(cfg);
    case Command::kEvgp:
      return do_evgp(cfg);
    case Command::kRelu:
      return do_relu(cfg);
    case Command::kMc:
      return do_mc(cfg);
    case Command::kVerify:
      return do_verify(cfg);
  }
  throw OutOfRange("unknown command");
}

void write_output(const ExperimentConfig& cfg, const RunOutput& out) {
  std::string text;
  if (out.is_csv) {
    text += "# hierarchylab ";
    text += kVersionString;
    text += '\n';
    text += "# config ";
    text += config_to_json(cfg).dump();
    text += '\n';
    text += "# seed ";
    text += std::to_string(cfg.seed);
    text += '\n';
    for (const std::string& n : out.notes) {
      text += "# ";
      text += n;
      text += '\n';
    }
    text += out.csv;
  } else if (!cfg.output_path.empty()) {
    json wrapped;
    wrapped["header"]["version"] = kVersionString;
    wrapped["header"]["seed"] = cfg.seed;
    wrapped["header"]["config"] = config_to_json(cfg);
    wrapped["result"] = out.result;
    text = wrapped.dump() + "\n";
  } else {
    text = out.result.dump() + "\n";
  }
  if (cfg.output_path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    std::fflush(stdout);
    return;
  }
  std::ofstream f(cfg.output_path, std::ios::binary);
  if (!f) {
    throw OutOfRange("output path not writable: " + cfg.output_path);
  }
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  f.close();
  if (!f) {
    throw OutOfRange("write failed: " + cfg.output_path);
  }
}

std::string sanitize(const std::string& msg) {
  std::string out;
  for (char c : msg) {
    if (c == '\n' || c == '\r') {
      out += ' ';
    } else if (c == '"') {
      out += '\'';
    } else {
      out += c;
    }
  }
  return out;
}

int fail(int code, const char* kind, const std::string& msg) {
  std::fprintf(stderr, "hierarchylab: exit=%d kind=%s msg=\"%s\"\n", code,
               kind, sanitize(msg).c_str());
  return code;
}

}  // namespace

std::string command_to_string(Command c) {
  return kCommandNames[static_cast<int>(c)];
}

Command command_from_string(const std::string& name) {
  for (int i = 0; i < 8; ++i) {
    if (name == kCommandNames[i]) return static_cast<Command>(i);
  }
  throw OutOfRange("unknown command '" + name + "'");
}

void check_keys(const nlohmann::json& j,
                std::initializer_list<const char*> allowed,
                const char* where) {
  if (!j.is_object()) {
    throw OutOfRange(std::string(where) + " must be a JSON object");
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed) {
      if (it.key() == k) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw OutOfRange(std::string(where) + ": unknown field '" + it.key() +
                       "'");
    }
  }
}

std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

nlohmann::json json_number(double v) {
  if (std::isfinite(v) && v == std::floor(v) && std::fabs(v) < 9.0e15) {
    return static_cast<long long>(v);
  }
  return v;
}

NetworkSpec spec_from_json(const nlohmann::json& j, bool need_input) {
  check_keys(j, {"n0", "widths", "n_out", "activation", "C_b", "C_W", "input"},
             "spec");
  if (!j.contains("activation")) {
    throw OutOfRange("spec: missing 'activation'");
  }
  NetworkSpec s;
  s.nl = nonlin_from_json(j["activation"].dump());
  if (j.contains("widths")) {
    if (!j["widths"].is_array()) {
      throw OutOfRange("spec: 'widths' must be an array of integers");
    }
    for (const auto& w : j["widths"]) {
      if (!w.is_number_integer()) {
        throw OutOfRange("spec: 'widths' must be an array of integers");
      }
      s.widths.push_back(w.get<int>());
    }
  }
  if (j.contains("input")) {
    if (!j["input"].is_array()) {
      throw OutOfRange("spec: 'input' must be an array of numbers");
    }
    for (const auto& v : j["input"]) {
      if (!v.is_number()) {
        throw OutOfRange("spec: 'input' must be an array of numbers");
      }
      s.input_x.push_back(v.get<double>());
    }
  } else if (need_input) {
    throw OutOfRange("spec: missing 'input'");
  } else {
    s.input_x = {1.0};
  }
  s.n0 = static_cast<int>(
      opt_int(j, "n0", static_cast<long long>(s.input_x.size()), "spec"));
  if (s.n0 != static_cast<int>(s.input_x.size())) {
    throw OutOfRange("spec: n0 does not match the input length");
  }
  s.n_out = static_cast<int>(opt_int(j, "n_out", 1, "spec"));
  s.C_b = opt_num(j, "C_b", 0.0);
  s.C_W = opt_num(j, "C_W", 1.0);
  return s;
}

nlohmann::json spec_to_json(const NetworkSpec& spec) {
  json j;
  j["n0"] = spec.n0;
  j["widths"] = spec.widths;
  j["n_out"] = spec.n_out;
  j["activation"] = json::parse(nonlin_to_json(spec.nl));
  j["C_b"] = spec.C_b;
  j["C_W"] = spec.C_W;
  j["input"] = spec.input_x;
  return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  check_keys(j,
             {"schema_version", "command", "spec", "output_path", "seed",
              "samples", "options"},
             "config");
  const long long ver = opt_int(j, "schema_version", -1, "config");
  if (ver != kSchemaVersion) {
    throw OutOfRange("config: schema_version must be " +
                     std::to_string(kSchemaVersion));
  }
  ExperimentConfig cfg;
  cfg.command = command_from_string(req_str(j, "command", "config"));
  cfg.seed = opt_int(j, "seed", 1, "config");
  cfg.samples = opt_int(j, "samples", 100000, "config");
  if (j.contains("output_path")) {
    if (!j["output_path"].is_string()) {
      throw OutOfRange("config: 'output_path' must be a string");
    }
    cfg.output_path = j["output_path"].get<std::string>();
  }
  if (j.contains("options")) {
    if (!j["options"].is_object()) {
      throw OutOfRange("config: 'options' must be an object");
    }
    cfg.options = j["options"];
  }
  const bool need_input = cfg.command != Command::kTune;
  if (j.contains("spec")) {
    cfg.spec = spec_from_json(j["spec"], need_input);
    cfg.has_spec = true;
  } else if (cfg.command != Command::kVerify) {
    throw OutOfRange("config: missing 'spec'");
  }
  return cfg;
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command_to_string(cfg.command);
  if (cfg.has_spec) j["spec"] = spec_to_json(cfg.spec);
  j["output_path"] = cfg.output_path;
  j["seed"] = cfg.seed;
  j["samples"] = cfg.samples;
  j["options"] = cfg.options;
  return j;
}

int run(const ExperimentConfig& cfg) {
  try {
    const RunOutput out = dispatch(cfg);
    write_output(cfg, out);
    if (out.exit_code != 0) {
      return fail(out.exit_code, "VerifyGate", "prediction rejected");
    }
    return 0;
  } catch (const OutOfRange& e) {
    return fail(2, "OutOfRange", e.what());
  } catch (const BadOrder& e) {
    return fail(2, "BadOrder", e.what());
  } catch (const UnsupportedOrder& e) {
    return fail(2, "UnsupportedOrder", e.what());
  } catch (const InsufficientSamples& e) {
    return fail(2, "InsufficientSamples", e.what());
  } catch (const ZeroInput& e) {
    return fail(2, "ZeroInput", e.what());
  } catch (const NotKStarZeroClass& e) {
    return fail(2, "NotKStarZeroClass", e.what());
  } catch (const NonFinite& e) {
    return fail(3, "NonFinite", e.what());
  } catch (const NotPSD& e) {
    return fail(3, "NotPSD", e.what());
  } catch (const SingularKernel& e) {
    return fail(3, "SingularKernel", e.what());
  } catch (const NoCriticalPoint& e) {
    return fail(3, "NoCriticalPoint", e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(2, "Json", e.what());
  } catch (const std::exception& e) {
    return fail(3, "Internal", e.what());
  }
}

}  // namespace cli
}  // namespace hierarchylab
