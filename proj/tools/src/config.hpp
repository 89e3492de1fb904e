// tools/src/config.hpp

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

#ifndef HIERARCHYLAB_TOOLS_CONFIG_HPP_
#define HIERARCHYLAB_TOOLS_CONFIG_HPP_

#include <string>

#include "hierarchylab/hierarchy.hpp"
#include "nlohmann/json.hpp"

namespace hierarchylab {
namespace cli {

inline constexpr int kSchemaVersion = 1;

enum class Command {
  kTune,
  kKernel,
  kHierarchy,
  kDerivs,
  kEvgp,
  kRelu,
  kMc,
  kVerify,
};

std::string command_to_string(Command c);
Command command_from_string(const std::string& name);

// One experiment: a command plus everything needed to rerun it.  The JSON
// form is fail-closed (unknown keys anywhere are validation errors) and
// carries a schema_version field.
struct ExperimentConfig {
  Command command = Command::kTune;
  NetworkSpec spec;
  bool has_spec = false;
  std::string output_path;  // empty writes to stdout
  long long seed = 1;
  long long samples = 100000;
  nlohmann::json options = nlohmann::json::object();
};

// Parse / serialize the full config.  from_json throws OutOfRange on schema
// violations; the echo emitted into output headers is to_json(config).
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

// Network spec object <-> JSON.  Keys: n0, widths, n_out, activation, C_b,
// C_W, input.  need_input demands the input vector (kernel seeds depend on
// it); tune does not.
NetworkSpec spec_from_json(const nlohmann::json& j, bool need_input);
nlohmann::json spec_to_json(const NetworkSpec& spec);

// Reject any key outside the allowed set.
void check_keys(const nlohmann::json& j,
                std::initializer_list<const char*> allowed,
                const char* where);

// %.17g with '.' decimal point.
std::string fmt_g17(double v);

// Number node that serializes integral values without a trailing ".0".
nlohmann::json json_number(double v);

// Runs the experiment and writes its output (stdout or config.output_path).
// Returns the process exit code: 0 success, 2 validation error, 3 numerical
// failure.  Failure reasons go to stderr as a single machine-parsable line.
int run(const ExperimentConfig& cfg);

}  // namespace cli
}  // namespace hierarchylab

#endif  // HIERARCHYLAB_TOOLS_CONFIG_HPP_
