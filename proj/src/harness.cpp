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

#include "uscparity/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace uscparity {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double v) { return fmt::format("{:.12g}", v); }

std::string clean(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ';';
  }
  return s;
}

std::string validity_tag(const ValidityReport& v) {
  if (v.ok()) return "ok";
  std::string s = "warn";
  if (!v.coupling_ok) s += ":coupling";
  if (!v.photons_ok) s += ":photons";
  return s;
}

RatioParams at(const RunConfig& cfg, double gk, double gw) {
  RatioParams r = cfg.ratios;
  r.g_over_kappa = gk;
  r.g_over_omega_r = gw;
  return r;
}

// Pointer equation with chi scaled; the oracle keeps the true one.
DerivedParams corrupted(DerivedParams d, double scale) {
  d.chi *= scale;
  d.chi_rwa *= scale;
  return d;
}

}  // namespace

double SteadyPointers::max_residual() const { return *std::max_element(residuals.begin(), residuals.end()); }

double SteadyPointers::max_photons() const {
  double n = 0.0;
  for (auto l : kAllLabels) n = std::max(n, std::norm(means[l]));
  return n;
}

SteadyPointers steady_pointers(const SystemParams& params, const DerivedParams& derived, ModelKind model,
                               const IntegrationOptions& options) {
  SteadyPointers sp;
  for (std::size_t i = 0; i < kAllLabels.size(); ++i) {
    const auto label = kAllLabels[i];
    try {
      const auto s = steady_state(integrate(params, derived, label, model, options));
      sp.means[label] = s.mean;
      sp.residuals[i] = s.residual_oscillation;
    } catch (const IntegrationError& e) {
      throw IntegrationError(fmt::format("label {}: {}", to_string(label), e.what()), e.failure_time());
    }
  }
  return sp;
}

GridPoint evaluate_point(const RunConfig& cfg, double g_over_kappa, double g_over_omega_r, ModelKind model) {
  GridPoint p;
  p.g_over_kappa = g_over_kappa;
  p.g_over_omega_r = g_over_omega_r;
  p.eps_over_kappa = cfg.ratios.eps_over_kappa;
  p.model = model;
  try {
    const auto params = from_ratios(at(cfg, g_over_kappa, g_over_omega_r));
    const auto derived = derive(params);
    const auto sp = steady_pointers(params, derived, model, cfg.integration);
    p.report = fidelity_closed_form(sp.means);
    p.residual = sp.max_residual();
    p.band = fidelity_sensitivity(sp.means, sp.residuals);
    p.validity = validate_dispersive(params, derived, sp.max_photons());
  } catch (const std::exception& e) {
    p.error = clean(e.what());
    p.report.p_m = p.report.prob_even = p.report.prob_odd = kNaN;
    p.report.f_even = p.report.f_odd = p.report.f_avg = kNaN;
    p.residual = p.band.lo = p.band.hi = kNaN;
  }
  return p;
}

void write_grid_row(std::ostream& os, const GridPoint& p) {
  fmt::print(os, "{},{},{},{},{},{},{},{},{},{},{},{},{}\n", num(p.g_over_omega_r), num(p.g_over_kappa),
             num(p.eps_over_kappa), to_string(p.model), num(p.report.prob_even), num(p.report.f_even),
             num(p.report.f_odd), num(p.report.f_avg), num(p.residual), num(p.band.lo), num(p.band.hi),
             p.ok() ? validity_tag(p.validity) : "n/a", p.error);
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads) : std::thread::hardware_concurrency();
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first;
  std::mutex mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(mu);
          if (!first) first = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

void run_phase_portrait(const RunConfig& cfg, std::ostream& os) {
  const auto params = system_params(cfg);
  const auto derived = derive(params);
  const auto models = models_of(cfg.model);
  std::vector<SteadyPointers> sp(models.size());
  parallel_for(models.size(), cfg.threads,
               [&](std::size_t i) { sp[i] = steady_pointers(params, derived, models[i], cfg.integration); });
  fmt::print(os, "label,model,I,Q,residual\n");
  for (std::size_t m = 0; m < models.size(); ++m) {
    for (std::size_t i = 0; i < kAllLabels.size(); ++i) {
      const auto a = sp[m].means[kAllLabels[i]];
      fmt::print(os, "{},{},{},{},{}\n", to_string(kAllLabels[i]), to_string(models[m]), num(a.real()),
                 num(a.imag()), num(sp[m].residuals[i]));
    }
  }
}

void run_time_trace(const RunConfig& cfg, ParityLabel label, std::ostream& os) {
  const auto params = system_params(cfg);
  const auto derived = derive(params);
  fmt::print(os, "t,re,im,model\n");
  for (auto model : models_of(cfg.model)) {
    const auto tr = integrate(params, derived, label, model, cfg.integration);
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
      const auto a = tr.amplitudes[i];
      fmt::print(os, "{},{},{},{}\n", num(tr.times[i]), num(a.real()), num(a.imag()), to_string(model));
    }
  }
}

void run_trajectories(const RunConfig& cfg, bool with_oracles, std::ostream& os) {
  const auto params = system_params(cfg);
  const auto derived = derive(params);
  auto row = [&](double t, Complex a, ParityLabel l, std::string_view model) {
    fmt::print(os, "{},{},{},{},{}\n", num(t), num(a.real()), num(a.imag()), to_string(l), model);
  };
  fmt::print(os, "t,re_alpha,im_alpha,label,model\n");
  for (auto model : models_of(cfg.model)) {
    for (auto l : kAllLabels) {
      const auto tr = integrate(params, derived, l, model, cfg.integration);
      for (std::size_t i = 0; i < tr.times.size(); ++i) row(tr.times[i], tr.amplitudes[i], l, to_string(model));
    }
  }
  if (!with_oracles) return;
  FockConfig fock;
  fock.cutoff = cfg.oracle_cutoff;
  fock.t_end = cfg.integration.t_end;
  for (auto l : kAllLabels) {
    const auto br = evolve_dispersive_branch(params, derived, l, fock);
    for (std::size_t i = 0; i < br.times.size(); ++i) row(br.times[i], br.mean_field[i], l, "oracle_dispersive");
  }
  if (!cfg.oracle_full_rabi) return;
  fock.include_qubits = true;
  fock.allow_large = true;
  const auto rabi = evolve_full_rabi(params, fock);
  for (std::size_t k = 0; k < kAllLabels.size(); ++k) {
    for (std::size_t i = 0; i < rabi.times.size(); ++i) {
      row(rabi.times[i], rabi.mean_field[k][i], kAllLabels[k], "oracle_rabi");
    }
  }
}

namespace {

std::vector<GridPoint> run_grid(const RunConfig& cfg, const std::vector<double>& gk,
                                const std::vector<double>& gw, std::ostream& os) {
  const auto models = models_of(cfg.model);
  const std::size_t per_row = gw.size() * models.size();
  std::vector<GridPoint> out(gk.size() * per_row);
  parallel_for(out.size(), cfg.threads, [&](std::size_t i) {
    const std::size_t a = i / per_row;
    const std::size_t b = (i % per_row) / models.size();
    out[i] = evaluate_point(cfg, gk[a], gw[b], models[i % models.size()]);
  });
  fmt::print(os, "{}\n", kGridHeader);
  for (const auto& p : out) write_grid_row(os, p);
  return out;
}

}  // namespace

std::vector<GridPoint> run_fidelity_heatmap(const SweepSpec& sweep, const RunConfig& cfg, std::ostream& os) {
  sweep.validate();
  cfg.validate();
  return run_grid(cfg, sweep.g_over_kappa.values(), sweep.g_over_omega_r.values(), os);
}

std::vector<GridPoint> run_fidelity_cut(const RunConfig& cfg, const std::vector<double>& g_over_kappa,
                                        std::ostream& os) {
  cfg.validate();
  if (g_over_kappa.empty()) throw ConfigError("cut needs at least one g/kappa value");
  for (double gk : g_over_kappa) {
    if (!(gk > 0.0)) throw ConfigError("cut g/kappa values must be positive");
  }
  return run_grid(cfg, g_over_kappa, cfg.cut_g_over_omega_r.values(), os);
}

bool OracleCheckResult::passed() const {
  return std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.pass; });
}

std::vector<CheckRow> OracleCheckResult::failures() const {
  std::vector<CheckRow> f;
  std::copy_if(rows.begin(), rows.end(), std::back_inserter(f), [](const CheckRow& r) { return !r.pass; });
  return f;
}

OracleCheckResult run_oracle_check(const RunConfig& cfg, std::ostream& os) {
  const auto params = system_params(cfg);
  const auto derived = derive(params);
  const auto pointer_chi = corrupted(derived, cfg.oracle_chi_scale);
  OracleCheckResult res;
  auto upper = [&](std::string check, std::string_view label, double v, double limit) {
    res.rows.push_back({std::move(check), std::string(label), v, limit, v <= limit});
  };

  FockConfig fock;
  fock.cutoff = cfg.oracle_cutoff;
  fock.t_end = cfg.integration.t_end;
  std::array<std::vector<CheckRow>, 4> per_label;
  parallel_for(kAllLabels.size(), cfg.threads, [&](std::size_t i) {
    const auto l = kAllLabels[i];
    auto& rows = per_label[i];
    const auto name = std::string(to_string(l));
    try {
      const auto br = evolve_dispersive_branch(params, derived, l, fock);
      const auto pt = integrate_exact(params, pointer_chi, l, cfg.integration);
      const auto rep = compare_with_ansatz(br, pt);
      const auto& d = br.diagnostics;
      rows.push_back({"pointer_deviation", name, rep.relative_deviation, kPointerDeviationLimit,
                      rep.relative_deviation <= kPointerDeviationLimit});
      rows.push_back({"coherent_fidelity", name, rep.min_coherent_fidelity, kOracleCoherentFidelity,
                      rep.min_coherent_fidelity >= kOracleCoherentFidelity});
      rows.push_back({"truncation_leak", name, d.max_leak, fock.leak_limit, d.max_leak <= fock.leak_limit});
      rows.push_back({"trace_drift", name, d.max_trace_drift, kTraceDriftLimit,
                      d.max_trace_drift <= kTraceDriftLimit});
      rows.push_back({"hermiticity", name, d.max_hermiticity_residual, kHermiticityLimit,
                      d.max_hermiticity_residual <= kHermiticityLimit});
      rows.push_back({"min_eigenvalue", name, d.min_eigenvalue, kNegativityLimit,
                      d.min_eigenvalue >= kNegativityLimit});
    } catch (const std::exception& e) {
      rows.push_back({"oracle_run: " + clean(e.what()), name, kNaN, 0.0, false});
    }
  });
  for (auto& rows : per_label) res.rows.insert(res.rows.end(), rows.begin(), rows.end());

  try {
    const auto sp = steady_pointers(params, derived, ModelKind::exact, cfg.integration);
    const auto cf = fidelity_closed_form(sp.means);
    const auto nq = fidelity_numeric(sp.means, cf.p_m);
    upper("closed_vs_numeric_F_even", "all", std::abs(cf.f_even - nq.f_even), kClosedFormLimit);
    upper("closed_vs_numeric_F_odd", "all", std::abs(cf.f_odd - nq.f_odd), kClosedFormLimit);
    upper("closed_vs_numeric_F_avg", "all", std::abs(cf.f_avg - nq.f_avg), kClosedFormLimit);
    upper("closed_vs_numeric_P_even", "all", std::abs(cf.prob_even - nq.prob_even), kParityProbabilityLimit);
    // P_even = 1/2 needs mirror-symmetric pointers; only the RWA set has them.
    const auto rwa = steady_pointers(params, derived, ModelKind::rwa, cfg.integration);
    const auto rcf = fidelity_closed_form(rwa.means);
    const auto rnq = fidelity_numeric(rwa.means, rcf.p_m);
    upper("P_even_half_closed_form", "rwa", std::abs(rcf.prob_even - 0.5), kParityProbabilityLimit);
    upper("P_even_half_numeric", "rwa", std::abs(rnq.prob_even - 0.5), kParityProbabilityLimit);
  } catch (const std::exception& e) {
    res.rows.push_back({"fidelity_run: " + clean(e.what()), "all", kNaN, 0.0, false});
  }

  if (cfg.oracle_full_rabi) {
    try {
      FockConfig rf;
      rf.cutoff = cfg.oracle_cutoff;
      rf.include_qubits = true;
      rf.allow_large = true;
      rf.t_end = cfg.integration.t_end;
      const double sim = evolve_full_rabi(params, rf).q_separation();
      const double pred = predicted_q_separation(params, pointer_chi, cfg.integration);
      const double rel = pred != 0.0 ? std::abs(sim - pred) / std::abs(pred) : std::abs(sim);
      upper("rabi_q_separation", "all", rel, kRabiSeparationLimit);
    } catch (const std::exception& e) {
      res.rows.push_back({"rabi_run: " + clean(e.what()), "all", kNaN, 0.0, false});
    }
  }
  fmt::print(os, "check,label,value,limit,pass\n");
  for (const auto& r : res.rows) {
    fmt::print(os, "{},{},{},{},{}\n", r.check, r.label, num(r.value), num(r.limit), r.pass ? "true" : "false");
  }
  return res;
}

}  // namespace uscparity
