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

#include <array>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "uscparity/config.hpp"
#include "uscparity/fidelity.hpp"
#include "uscparity/lindblad.hpp"
#include "uscparity/model.hpp"
#include "uscparity/pointer.hpp"

namespace uscparity {

/// Time-averaged amplitudes of all four branches for one model.
struct SteadyPointers {
  PointerSet means;
  std::array<double, 4> residuals{};  ///< kAllLabels order
  [[nodiscard]] double max_residual() const;
  [[nodiscard]] double max_photons() const;
};

SteadyPointers steady_pointers(const SystemParams& params, const DerivedParams& derived,
                               ModelKind model, const IntegrationOptions& options);

/// One row of a heatmap or cut. error is empty on success; otherwise the
/// numeric fields are NaN.
struct GridPoint {
  double g_over_kappa = 0.0;
  double g_over_omega_r = 0.0;
  double eps_over_kappa = 0.0;
  ModelKind model = ModelKind::exact;
  FidelityReport report;
  double residual = 0.0;
  FidelityBand band;
  ValidityReport validity;
  std::string error;

  [[nodiscard]] bool ok() const { return error.empty(); }
};

/// Fidelity at (g/kappa, g/omega_r) with every other ratio taken from cfg.
/// Never throws on numerical failure; the message lands in error.
GridPoint evaluate_point(const RunConfig& cfg, double g_over_kappa, double g_over_omega_r,
                         ModelKind model);

inline constexpr const char* kGridHeader =
    "g_over_wr,g_over_kappa,eps_over_kappa,model,P_even,F_even,F_odd,F_avg,residual,F_band_lo,"
    "F_band_hi,validity,error";

void write_grid_row(std::ostream& os, const GridPoint& p);

/// Steady (I, Q) of every label: label,model,I,Q,residual.
void run_phase_portrait(const RunConfig& cfg, std::ostream& os);

/// alpha(t) of one label: t,re,im,model.
void run_time_trace(const RunConfig& cfg, ParityLabel label, std::ostream& os);

/// Every label and model as t,re_alpha,im_alpha,label,model. With
/// with_oracles the dispersive master-equation <a>(t) is appended as
/// model=oracle_dispersive, and the full Rabi one as oracle_rabi when
/// cfg.oracle_full_rabi is set.
void run_trajectories(const RunConfig& cfg, bool with_oracles, std::ostream& os);

/// Row-major over the grid: g/kappa outer, g/omega_r inner, model innermost.
std::vector<GridPoint> run_fidelity_heatmap(const SweepSpec& sweep, const RunConfig& cfg,
                                            std::ostream& os);

/// Line cuts along cfg.cut_g_over_omega_r, one per requested g/kappa.
std::vector<GridPoint> run_fidelity_cut(const RunConfig& cfg, const std::vector<double>& g_over_kappa,
                                        std::ostream& os);

struct CheckRow {
  std::string check;
  std::string label;
  double value = 0.0;
  double limit = 0.0;
  bool pass = false;
};

struct OracleCheckResult {
  std::vector<CheckRow> rows;
  [[nodiscard]] bool passed() const;
  [[nodiscard]] std::vector<CheckRow> failures() const;
};

inline constexpr double kPointerDeviationLimit = 1e-3;
inline constexpr double kOracleCoherentFidelity = 0.97;
inline constexpr double kClosedFormLimit = 1e-8;
inline constexpr double kParityProbabilityLimit = 1e-9;
inline constexpr double kRabiSeparationLimit = 0.1;

/// Master-equation and quadrature cross-checks at the configured point:
/// check,label,value,limit,pass.
OracleCheckResult run_oracle_check(const RunConfig& cfg, std::ostream& os);

/// Runs fn(i) for i in [0, n) on up to `threads` workers (0: hardware
/// concurrency). The first exception, if any, is rethrown after all finish.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace uscparity
