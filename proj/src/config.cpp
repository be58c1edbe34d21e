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

#include "uscparity/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace uscparity {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(std::string_view key, std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
    throw ConfigError(fmt::format("{}: '{}' is not a finite number", key, text));
  }
  return v;
}

int parse_int(std::string_view key, std::string_view text) {
  text = trim(text);
  int v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) throw ConfigError(fmt::format("{}: '{}' is not an integer", key, text));
  return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError(fmt::format("{}: '{}' is not a boolean", key, text));
}

std::vector<double> parse_list(std::string_view key, std::string_view text) {
  std::vector<double> out;
  text = trim(text);
  while (!text.empty()) {
    const auto comma = text.find(',');
    out.push_back(parse_double(key, text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  if (out.empty()) throw ConfigError(fmt::format("{}: empty list", key));
  return out;
}

AxisScale parse_scale(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "linear") return AxisScale::linear;
  if (text == "log") return AxisScale::log;
  throw ConfigError(fmt::format("{}: scale must be linear or log, got '{}'", key, text));
}

std::string fmt_num(double v) { return fmt::format("{:.12g}", v); }

struct Entry {
  std::string key;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <class Field>
Entry number(std::string key, Field field) {
  return {key, [key, field](RunConfig& c, std::string_view v) { field(c) = parse_double(key, v); },
          [field](const RunConfig& c) { return fmt_num(field(const_cast<RunConfig&>(c))); }};
}

void add_axis(std::vector<Entry>& t, const std::string& prefix, Axis& (*axis)(RunConfig&)) {
  t.push_back({prefix + ".min", [=](RunConfig& c, std::string_view v) { axis(c).min = parse_double(prefix, v); },
               [=](const RunConfig& c) { return fmt_num(axis(const_cast<RunConfig&>(c)).min); }});
  t.push_back({prefix + ".max", [=](RunConfig& c, std::string_view v) { axis(c).max = parse_double(prefix, v); },
               [=](const RunConfig& c) { return fmt_num(axis(const_cast<RunConfig&>(c)).max); }});
  t.push_back({prefix + ".points",
               [=](RunConfig& c, std::string_view v) { axis(c).points = parse_int(prefix, v); },
               [=](const RunConfig& c) { return std::to_string(axis(const_cast<RunConfig&>(c)).points); }});
  t.push_back({prefix + ".scale",
               [=](RunConfig& c, std::string_view v) { axis(c).scale = parse_scale(prefix, v); },
               [=](const RunConfig& c) {
                 return std::string(axis(const_cast<RunConfig&>(c)).scale == AxisScale::log ? "log" : "linear");
               }});
}

const std::vector<Entry>& table() {
  static const std::vector<Entry> t = [] {
    std::vector<Entry> t;
    t.push_back(number("g_over_kappa", [](RunConfig& c) -> double& { return c.ratios.g_over_kappa; }));
    t.push_back(number("g_over_omega_r", [](RunConfig& c) -> double& { return c.ratios.g_over_omega_r; }));
    t.push_back(number("g_over_delta", [](RunConfig& c) -> double& { return c.ratios.g_over_delta; }));
    t.push_back(number("eps_over_kappa", [](RunConfig& c) -> double& { return c.ratios.eps_over_kappa; }));
    t.push_back(
        number("delta_r_over_kappa", [](RunConfig& c) -> double& { return c.ratios.delta_r_over_kappa; }));
    t.push_back(number("gamma_1", [](RunConfig& c) -> double& { return c.ratios.gamma_1; }));
    t.push_back(number("gamma_phi", [](RunConfig& c) -> double& { return c.ratios.gamma_phi; }));
    t.push_back(number("omega_r_ghz", [](RunConfig& c) -> double& { return c.omega_r_ghz; }));
    t.push_back({"model", [](RunConfig& c, std::string_view v) { c.model = parse_model_selection(trim(v)); },
                 [](const RunConfig& c) { return std::string(to_string(c.model)); }});
    t.push_back(number("t_end", [](RunConfig& c) -> double& { return c.integration.t_end; }));
    t.push_back(number("tol", [](RunConfig& c) -> double& { return c.integration.tol; }));
    t.push_back({"secular",
                 [](RunConfig& c, std::string_view v) { c.integration.secular = parse_bool("secular", v); },
                 [](const RunConfig& c) { return std::string(c.integration.secular ? "true" : "false"); }});
    t.push_back({"out", [](RunConfig& c, std::string_view v) { c.out = std::string(trim(v)); },
                 [](const RunConfig& c) { return c.out; }});
    t.push_back({"threads", [](RunConfig& c, std::string_view v) { c.threads = parse_int("threads", v); },
                 [](const RunConfig& c) { return std::to_string(c.threads); }});
    t.push_back({"label",
                 [](RunConfig& c, std::string_view v) {
                   try {
                     c.label = parse_label(trim(v));
                   } catch (const std::exception& e) {
                     throw ConfigError(fmt::format("label: {}", e.what()));
                   }
                 },
                 [](const RunConfig& c) { return std::string(to_string(c.label)); }});
    add_axis(t, "heatmap.g_over_kappa", [](RunConfig& c) -> Axis& { return c.heatmap.g_over_kappa; });
    add_axis(t, "heatmap.g_over_omega_r", [](RunConfig& c) -> Axis& { return c.heatmap.g_over_omega_r; });
    t.push_back({"cut.g_over_kappa",
                 [](RunConfig& c, std::string_view v) { c.cut_g_over_kappa = parse_list("cut.g_over_kappa", v); },
                 [](const RunConfig& c) {
                   std::string s;
                   for (double x : c.cut_g_over_kappa) s += (s.empty() ? "" : ",") + fmt_num(x);
                   return s;
                 }});
    add_axis(t, "cut.g_over_omega_r", [](RunConfig& c) -> Axis& { return c.cut_g_over_omega_r; });
    t.push_back({"oracle.cutoff",
                 [](RunConfig& c, std::string_view v) { c.oracle_cutoff = parse_int("oracle.cutoff", v); },
                 [](const RunConfig& c) { return std::to_string(c.oracle_cutoff); }});
    t.push_back(number("oracle.chi_scale", [](RunConfig& c) -> double& { return c.oracle_chi_scale; }));
    t.push_back({"oracle.full_rabi",
                 [](RunConfig& c, std::string_view v) { c.oracle_full_rabi = parse_bool("oracle.full_rabi", v); },
                 [](const RunConfig& c) { return std::string(c.oracle_full_rabi ? "true" : "false"); }});
    return t;
  }();
  return t;
}

const Entry& find(std::string_view key) {
  const auto& t = table();
  const auto it = std::find_if(t.begin(), t.end(), [&](const Entry& e) { return e.key == key; });
  if (it == t.end()) throw ConfigError(fmt::format("unknown setting '{}'", key));
  return *it;
}

}  // namespace

std::string_view to_string(ModelSelection m) {
  switch (m) {
    case ModelSelection::exact: return "exact";
    case ModelSelection::rwa: return "rwa";
    case ModelSelection::both: return "both";
  }
  return "?";
}

ModelSelection parse_model_selection(std::string_view text) {
  if (text == "exact") return ModelSelection::exact;
  if (text == "rwa") return ModelSelection::rwa;
  if (text == "both") return ModelSelection::both;
  throw ConfigError(fmt::format("model must be exact, rwa or both, got '{}'", text));
}

std::vector<ModelKind> models_of(ModelSelection m) {
  switch (m) {
    case ModelSelection::exact: return {ModelKind::exact};
    case ModelSelection::rwa: return {ModelKind::rwa};
    case ModelSelection::both: break;
  }
  return {ModelKind::exact, ModelKind::rwa};
}

std::vector<double> Axis::values() const {
  std::vector<double> v(static_cast<std::size_t>(std::max(points, 1)));
  if (points == 1) {
    v[0] = min;
    return v;
  }
  for (int i = 0; i < points; ++i) {
    const double f = static_cast<double>(i) / (points - 1);
    v[i] = scale == AxisScale::log ? min * std::pow(max / min, f) : min + (max - min) * f;
  }
  v.front() = min;
  v.back() = max;
  return v;
}

void Axis::validate(std::string_view name, double lo, double hi) const {
  if (points < 2) throw ConfigError(fmt::format("{}: need at least 2 points", name));
  if (!(min < max)) throw ConfigError(fmt::format("{}: min must be below max", name));
  if (!(min > lo) || max > hi) throw ConfigError(fmt::format("{}: range must lie in ({}, {}]", name, lo, hi));
}

void SweepSpec::validate() const {
  g_over_kappa.validate("heatmap.g_over_kappa", 0.0, 1000.0);
  g_over_omega_r.validate("heatmap.g_over_omega_r", 0.0, 1.0);
}

void RunConfig::validate() const {
  const auto& r = ratios;
  if (!(r.g_over_kappa > 0.0)) throw ConfigError("g_over_kappa must be positive");
  if (!(r.g_over_omega_r > 0.0)) throw ConfigError("g_over_omega_r must be positive");
  if (!(r.g_over_delta > 0.0) || r.g_over_delta > kMaxGOverDelta) {
    throw ConfigError(fmt::format("g_over_delta must lie in (0, {}]", kMaxGOverDelta));
  }
  if (!(r.eps_over_kappa >= 0.0)) throw ConfigError("eps_over_kappa must be non-negative");
  if (!(r.gamma_1 >= 0.0) || !(r.gamma_phi >= 0.0)) throw ConfigError("qubit rates must be non-negative");
  if (!(omega_r_ghz > 0.0)) throw ConfigError("omega_r_ghz must be positive");
  if (integration.t_end < kMinHorizon) {
    throw ConfigError(fmt::format("t_end must be at least {} / kappa", kMinHorizon));
  }
  if (integration.tol < kMinTol || integration.tol > kMaxTol) {
    throw ConfigError(fmt::format("tol must lie in [{}, {}]", kMinTol, kMaxTol));
  }
  if (threads < 0) throw ConfigError("threads must be >= 0");
  for (double gk : cut_g_over_kappa) {
    if (!(gk > 0.0)) throw ConfigError("cut.g_over_kappa entries must be positive");
  }
  cut_g_over_omega_r.validate("cut.g_over_omega_r", 0.0, 1.0);
  if (oracle_cutoff < 10) throw ConfigError("oracle.cutoff must be >= 10");
  if (!(oracle_chi_scale > 0.0)) throw ConfigError("oracle.chi_scale must be positive");
}

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value) {
  find(trim(key)).set(cfg, value);
}

void apply_config_text(RunConfig& cfg, std::istream& in, std::string_view origin) {
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    std::string_view s = line;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(fmt::format("{}:{}: expected key = value", origin, n));
    }
    try {
      apply_setting(cfg, trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(fmt::format("{}:{}: {}", origin, n, e.what()));
    }
  }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path));
  apply_config_text(cfg, in, path);
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& e : table()) k.push_back(e.key);
    return k;
  }();
  return keys;
}

std::string env_name(std::string_view key) {
  std::string s = "USCPARITY_";
  for (char c : key) s += c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

void apply_environment(RunConfig& cfg, const EnvLookup& lookup) {
  for (const auto& e : table()) {
    const auto name = env_name(e.key);
    if (const auto v = lookup(name)) {
      try {
        e.set(cfg, *v);
      } catch (const ConfigError& err) {
        throw ConfigError(fmt::format("{}: {}", name, err.what()));
      }
    }
  }
}

void apply_process_environment(RunConfig& cfg) {
  apply_environment(cfg, [](const std::string& name) -> std::optional<std::string> {
    if (const char* v = std::getenv(name.c_str())) return std::string(v);
    return std::nullopt;
  });
}

std::string setting_value(const RunConfig& cfg, std::string_view key) { return find(key).get(cfg); }

SystemParams system_params(const RunConfig& cfg) {
  cfg.validate();
  return from_ratios(cfg.ratios);
}

}  // namespace uscparity
