// Copyright 2026 The rshac Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Run configuration. The file format is flat `key = value` lines with dotted
// section prefixes (plant., rshac., fuzzy., lqr., harness.). A `[section]`
// header applies its prefix to the undotted keys that follow. `#` starts a
// comment. Every omitted key keeps the tuned default.

#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rshac/controllers.hpp"
#include "rshac/harness.hpp"
#include "rshac/plant.hpp"

namespace rshac {

enum class ExperimentSelector { kExp1, kExp2, kAll, kCustom };

/// Single user-defined episode, run for every selected controller.
struct CustomEpisode {
  PlantState x0 = PlantState::Zero();
  double x_ref = 0.0;
  std::optional<double> step_time;
  double step_ref = 0.0;
};

struct RunConfig {
  ExperimentSelector experiment = ExperimentSelector::kAll;
  std::vector<ControllerKind> controllers{ControllerKind::kRsHac, ControllerKind::kFuzzy,
                                          ControllerKind::kLqr};
  std::filesystem::path out_dir = "results";
  Integrator integrator = Integrator::kRk4;
  double dwell = 0.5;
  double duration = 10.0;
  bool parallel = true;

  Params plant = Params::measured();
  RsHacConfig rshac = RsHacConfig::defaults();
  FuzzyConfig fuzzy = FuzzyConfig::defaults();
  LqrConfig lqr = LqrConfig::defaults();
  CustomEpisode custom;

  HarnessOptions harness_options() const;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, std::string key, const std::string& message);

  /// 1-based line of the offending entry, 0 when not tied to a line.
  int line() const { return line_; }
  const std::string& key() const { return key_; }

 private:
  int line_;
  std::string key_;
};

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Every key parse_config understands.
std::vector<std::string> config_keys();

ExperimentSelector parse_experiment(std::string_view name);
Integrator parse_integrator(std::string_view name);
/// "all" or a comma-separated list of rshac / fc / lqr.
std::vector<ControllerKind> parse_controller_list(std::string_view text);

}  // namespace rshac
