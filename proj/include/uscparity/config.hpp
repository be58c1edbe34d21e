// Copyright 2026 The uscparity Authors
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

#pragma once

#include <functional>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "uscparity/model.hpp"
#include "uscparity/pointer.hpp"

namespace uscparity {

enum class ModelSelection { exact, rwa, both };

std::string_view to_string(ModelSelection m);
ModelSelection parse_model_selection(std::string_view text);
std::vector<ModelKind> models_of(ModelSelection m);

enum class AxisScale { linear, log };

struct Axis {
  double min = 0.0;
  double max = 0.0;
  int points = 2;
  AxisScale scale = AxisScale::linear;

  /// Grid values, endpoints included exactly.
  [[nodiscard]] std::vector<double> values() const;
  void validate(std::string_view name, double lo, double hi) const;
};

/// Two-dimensional grid over (g/kappa, g/omega_r).
struct SweepSpec {
  Axis g_over_kappa{5.0, 50.0, 40, AxisScale::linear};
  Axis g_over_omega_r{0.01, 0.5, 40, AxisScale::linear};

  void validate() const;
};

inline constexpr double kMaxGOverDelta = 0.2;

/// Everything a run needs. Defaults reproduce the standard operating point:
/// g = 15 kappa, g/omega_r = 0.5, g/Delta = 0.1, eps = 0.5 kappa, Delta_r = 0.
struct RunConfig {
  RatioParams ratios;
  double omega_r_ghz = 2.0;  ///< physical anchor, labelling only
  ModelSelection model = ModelSelection::both;
  IntegrationOptions integration;
  std::string out;  ///< empty: stdout
  int threads = 0;  ///< 0: hardware concurrency
  ParityLabel label = ParityLabel::ee;

  SweepSpec heatmap;
  std::vector<double> cut_g_over_kappa{15.0, 50.0};
  Axis cut_g_over_omega_r{0.001, 0.5, 30, AxisScale::log};

  int oracle_cutoff = 30;
  double oracle_chi_scale = 1.0;  ///< fault injection for oracle-check
  bool oracle_full_rabi = false;

  void validate() const;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Assigns one key. Unknown keys and malformed values throw ConfigError.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);

/// Flat "key = value" lines; '#' starts a comment.
void apply_config_text(RunConfig& cfg, std::istream& in, std::string_view origin = "config");
void apply_config_file(RunConfig& cfg, const std::string& path);

/// Every accepted key, in documentation order.
const std::vector<std::string>& config_keys();

/// Environment name of a key: USCPARITY_ + upper-case key with '.' -> '_'.
std::string env_name(std::string_view key);

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;
void apply_environment(RunConfig& cfg, const EnvLookup& lookup);
void apply_process_environment(RunConfig& cfg);

/// Current value of a key, formatted as it would be written in a file.
std::string setting_value(const RunConfig& cfg, std::string_view key);

/// Parameters of the run after layering ratios into physical units.
SystemParams system_params(const RunConfig& cfg);

}  // namespace uscparity
