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

// Command-line front end: parity-measurement sweeps and oracle checks as CSV.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uscparity/config.hpp"
#include "uscparity/harness.hpp"

namespace {

using namespace uscparity;

struct Flags {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::string> model;
  std::optional<double> tol;
  std::optional<double> t_end;
  std::optional<std::string> label;
  std::optional<int> threads;
  std::vector<std::string> set;
  std::vector<double> cut_values;
  bool with_oracles = false;
  bool print_config = false;
};

RunConfig resolve(const Flags& f) {
  RunConfig cfg;
  if (!f.config.empty()) apply_config_file(cfg, f.config);
  apply_process_environment(cfg);
  for (const auto& kv : f.set) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (f.out) cfg.out = *f.out;
  if (f.model) apply_setting(cfg, "model", *f.model);
  if (f.tol) cfg.integration.tol = *f.tol;
  if (f.t_end) cfg.integration.t_end = *f.t_end;
  if (f.label) apply_setting(cfg, "label", *f.label);
  if (f.threads) cfg.threads = *f.threads;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-qubit dispersive parity measurement beyond the rotating-wave approximation"};
  app.require_subcommand(1);
  Flags f;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", f.config, "flat key = value file")->check(CLI::ExistingFile);
    sub->add_option("--out", f.out, "CSV destination (default stdout)");
    sub->add_option("--model", f.model, "exact|rwa|both");
    sub->add_option("--tol", f.tol, "ODE tolerance");
    sub->add_option("--t-end", f.t_end, "integration horizon in 1/kappa");
    sub->add_option("--threads", f.threads, "worker threads (0: all cores)");
    sub->add_option("--set", f.set, "override any config key, key=value");
    sub->add_flag("--print-config", f.print_config, "print the resolved configuration and exit");
  };

  auto* portrait = app.add_subcommand("phase-portrait", "steady pointer amplitudes of all labels");
  auto* trace = app.add_subcommand("time-trace", "alpha(t) for one label");
  auto* trajectories = app.add_subcommand("trajectories", "alpha(t) for all labels, optionally with oracles");
  auto* heatmap = app.add_subcommand("heatmap", "average fidelity over the (g/kappa, g/omega_r) grid");
  auto* cut = app.add_subcommand("cut", "average fidelity along g/omega_r at fixed g/kappa");
  auto* oracle = app.add_subcommand("oracle-check", "master-equation and quadrature cross-checks");
  for (auto* s : {portrait, trace, trajectories, heatmap, cut, oracle}) common(s);
  trace->add_option("--label", f.label, "gg|ge|eg|ee");
  trajectories->add_flag("--with-oracles", f.with_oracles, "append master-equation <a>(t)");
  cut->add_option("--g-over-kappa", f.cut_values, "g/kappa values")->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  RunConfig cfg;
  try {
    cfg = resolve(f);
  } catch (const std::exception& e) {
    std::cerr << "uscparity: " << e.what() << '\n';
    return 2;
  }

  if (f.print_config) {
    for (const auto& key : config_keys()) std::cout << key << " = " << setting_value(cfg, key) << '\n';
    return 0;
  }

  std::ofstream file;
  if (!cfg.out.empty()) {
    file.open(cfg.out, std::ios::binary | std::ios::trunc);
    if (!file) {
      std::cerr << "uscparity: cannot write '" << cfg.out << "'\n";
      return 2;
    }
  }
  std::ostream& os = cfg.out.empty() ? std::cout : file;

  try {
    if (*portrait) {
      run_phase_portrait(cfg, os);
    } else if (*trace) {
      run_time_trace(cfg, cfg.label, os);
    } else if (*trajectories) {
      run_trajectories(cfg, f.with_oracles, os);
    } else if (*heatmap) {
      run_fidelity_heatmap(cfg.heatmap, cfg, os);
    } else if (*cut) {
      run_fidelity_cut(cfg, f.cut_values.empty() ? cfg.cut_g_over_kappa : f.cut_values, os);
    } else if (*oracle) {
      const auto res = run_oracle_check(cfg, os);
      os.flush();
      if (!res.passed()) {
        for (const auto& r : res.failures()) {
          std::cerr << "oracle-check: " << r.check << " [" << r.label << "] = " << r.value << " (limit "
                    << r.limit << ")\n";
        }
        return 1;
      }
    }
  } catch (const ConfigError& e) {
    std::cerr << "uscparity: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "uscparity: " << e.what() << '\n';
    return 3;
  }
  os.flush();
  return os ? 0 : 3;
}
