// tools/src/main.cpp

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

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "config.hpp"
#include "hierarchylab/errors.hpp"
#include "hierarchylab/nonlin.hpp"
#include "hierarchylab/version.hpp"

namespace {

using hierarchylab::cli::Command;
using hierarchylab::cli::ExperimentConfig;
using nlohmann::json;

int fail_validation(const std::string& msg) {
  std::string clean;
  for (char c : msg) clean += (c == '\n' || c == '\r') ? ' ' : c;
  std::fprintf(stderr, "hierarchylab: exit=2 kind=Config msg=\"%s\"\n",
               clean.c_str());
  return 2;
}

json load_json_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    throw hierarchylab::OutOfRange("cannot open file: " + path);
  }
  std::ostringstream buf;
  buf << f.rdbuf();
  return json::parse(buf.str());
}

struct SpecFlag {
  std::string path;

  void load_into(ExperimentConfig& cfg, bool need_input) const {
    if (path.empty()) {
      throw hierarchylab::OutOfRange("--spec is required for this command");
    }
    cfg.spec = hierarchylab::cli::spec_from_json(load_json_file(path),
                                                 need_input);
    cfg.has_spec = true;
  }
};

// Either a built-in name (tanh, relu, leaky_relu) or inline JSON.
json activation_json(const std::string& text) {
  if (!text.empty() && text.front() == '{') {
    return json::parse(text);
  }
  json j;
  j["kind"] = text;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hierarchylab: cumulant hierarchies of finite-width random "
               "networks"};
  app.set_version_flag("--version", hierarchylab::kVersionString);
  app.require_subcommand(1);

  ExperimentConfig cfg;
  SpecFlag spec_flag;
  std::string activation = "tanh";
  std::string what = "cumulants";
  std::string mode = "corr";
  std::string config_path;
  double a_plus = 1.0, a_minus = 0.0, eps0 = -1.0, xi = -1.0;
  double pred = 0.0, value = 0.0, se = -1.0, z_max = 3.0;
  long long layers = -1, n_samples = -1;

  CLI::App* tune = app.add_subcommand(
      "tune", "solve the criticality conditions for an activation");
  tune->add_option("--activation", activation,
                   "activation name or inline JSON {\"kind\":...}");
  tune->add_option("--out", cfg.output_path, "output file (default stdout)");

  CLI::App* kernel = app.add_subcommand(
      "kernel", "iterate the infinite-width kernel recursion");
  kernel->add_option("--spec", spec_flag.path, "network spec JSON file")
      ->required();
  kernel->add_option("--layers", layers, "number of recursion steps")
      ->required();
  kernel->add_option("--eps0", eps0,
                     "track a correlated pair seeded at this epsilon");
  kernel->add_option("--out", cfg.output_path, "output CSV file");

  CLI::App* hierarchy = app.add_subcommand(
      "hierarchy", "run the finite-width cumulant hierarchy");
  hierarchy->add_option("--spec", spec_flag.path, "network spec JSON file")
      ->required();
  hierarchy->add_option("--out", cfg.output_path, "output CSV file");

  CLI::App* derivs = app.add_subcommand(
      "derivs", "run the derivative-kernel and joint-cumulant recursions");
  derivs->add_option("--spec", spec_flag.path, "network spec JSON file")
      ->required();
  derivs->add_option("--out", cfg.output_path, "output CSV file");

  CLI::App* evgp = app.add_subcommand(
      "evgp", "predict the gradient fluctuation ratio");
  evgp->add_option("--spec", spec_flag.path, "network spec JSON file")
      ->required();
  evgp->add_option("--out", cfg.output_path, "output file");

  CLI::App* relu = app.add_subcommand(
      "relu", "closed-form results for piecewise linear activations");
  relu->add_option("--mode", mode, "corr | kappa4 | limit | sample")
      ->required();
  relu->add_option("--spec", spec_flag.path,
                   "network spec JSON file (kappa4, sample)");
  relu->add_option("--a-plus", a_plus, "positive-side slope (corr, limit)");
  relu->add_option("--a-minus", a_minus, "negative-side slope (corr, limit)");
  relu->add_option("--eps0", eps0, "initial pair epsilon (corr)");
  relu->add_option("--layers", layers, "number of steps (corr)");
  relu->add_option("--xi", xi, "depth-to-width ratio (limit)");
  relu->add_option("--samples", cfg.samples, "draw count (sample)");
  relu->add_option("--seed", cfg.seed, "RNG seed (sample)");
  relu->add_option("--out", cfg.output_path, "output file");

  CLI::App* mc = app.add_subcommand(
      "mc", "finite-width Monte Carlo estimators");
  mc->add_option("--spec", spec_flag.path, "network spec JSON file")
      ->required();
  mc->add_option("--what", what,
                 "cumulants | derivs | evgp | layer_variances");
  mc->add_option("--samples", cfg.samples, "draw count")->required();
  mc->add_option("--seed", cfg.seed, "RNG seed");
  mc->add_option("--out", cfg.output_path, "output file");

  CLI::App* verify = app.add_subcommand(
      "verify", "gate a prediction against a Monte Carlo estimate");
  verify->add_option("--pred", pred, "predicted value")->required();
  verify->add_option("--value", value, "estimated value")->required();
  verify->add_option("--se", se, "standard error of the estimate")
      ->required();
  verify->add_option("--n-samples", n_samples, "draw count behind the "
                     "estimate");
  verify->add_option("--zmax", z_max, "acceptance threshold (default 3)");

  CLI::App* run_cmd = app.add_subcommand(
      "run", "run an experiment from a config JSON file");
  run_cmd->add_option("--config", config_path, "ExperimentConfig JSON file")
      ->required();
  run_cmd->add_option("--out", cfg.output_path,
                      "override the config output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail_validation(e.what());
  }

  try {
    if (run_cmd->parsed()) {
      ExperimentConfig file_cfg =
          hierarchylab::cli::config_from_json(load_json_file(config_path));
      if (!cfg.output_path.empty()) file_cfg.output_path = cfg.output_path;
      return hierarchylab::cli::run(file_cfg);
    }
    if (tune->parsed()) {
      cfg.command = Command::kTune;
      json sj;
      sj["activation"] = activation_json(activation);
      cfg.spec = hierarchylab::cli::spec_from_json(sj, false);
      cfg.has_spec = true;
    } else if (kernel->parsed()) {
      cfg.command = Command::kKernel;
      spec_flag.load_into(cfg, true);
      cfg.options["layers"] = layers;
      if (eps0 >= 0.0) cfg.options["eps0"] = eps0;
    } else if (hierarchy->parsed()) {
      cfg.command = Command::kHierarchy;
      spec_flag.load_into(cfg, true);
    } else if (derivs->parsed()) {
      cfg.command = Command::kDerivs;
      spec_flag.load_into(cfg, true);
    } else if (evgp->parsed()) {
      cfg.command = Command::kEvgp;
      spec_flag.load_into(cfg, true);
    } else if (relu->parsed()) {
      cfg.command = Command::kRelu;
      cfg.options["mode"] = mode;
      if (mode == "kappa4" || mode == "sample") {
        spec_flag.load_into(cfg, true);
      } else {
        cfg.options["a_plus"] = a_plus;
        cfg.options["a_minus"] = a_minus;
      }
      if (eps0 >= 0.0) cfg.options["eps0"] = eps0;
      if (layers >= 0) cfg.options["layers"] = layers;
      if (xi >= 0.0) cfg.options["xi"] = xi;
    } else if (mc->parsed()) {
      cfg.command = Command::kMc;
      spec_flag.load_into(cfg, true);
      cfg.options["what"] = what;
    } else if (verify->parsed()) {
      cfg.command = Command::kVerify;
      cfg.options["pred"] = pred;
      cfg.options["value"] = value;
      cfg.options["se"] = se;
      if (n_samples >= 0) cfg.options["n_samples"] = n_samples;
      cfg.options["z_max"] = z_max;
    }
    return hierarchylab::cli::run(cfg);
  } catch (const nlohmann::json::exception& e) {
    return fail_validation(e.what());
  } catch (const hierarchylab::OutOfRange& e) {
    return fail_validation(e.what());
  } catch (const std::exception& e) {
    return fail_validation(e.what());
  }
}
