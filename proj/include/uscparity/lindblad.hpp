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
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "uscparity/model.hpp"
#include "uscparity/pointer.hpp"

namespace uscparity {

/// Truncated Fock-space settings for the master-equation oracles.
struct FockConfig {
  int cutoff = 30;  ///< highest photon number kept
  bool include_qubits = false;
  double t_end = 10.0;
  double dt = 0.0;              ///< 0 picks (pi/omega_m)/40, tightened for RK4 stability
  double record_interval = 0.01;  ///< spacing of stored samples
  double leak_limit = 1e-6;     ///< population allowed in levels N-2..N
  int max_dimension = 400;
  bool allow_large = false;
  /// Drop every dissipator (kappa, gamma_1, gamma_phi); unitary check only.
  bool closed_system = false;

  void validate() const;
};

using DensityMatrix = Eigen::MatrixXcd;

/// Raised when the top Fock levels pick up population; retry with
/// suggested_cutoff().
class CutoffError : public std::runtime_error {
 public:
  CutoffError(const std::string& what, int suggested)
      : std::runtime_error(what), suggested_(suggested) {}
  [[nodiscard]] int suggested_cutoff() const { return suggested_; }

 private:
  int suggested_;
};

class DimensionGuardError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Trace, Hermiticity or positivity of rho broke during propagation.
class StateInvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StateDiagnostics {
  double max_trace_drift = 0.0;
  double max_hermiticity_residual = 0.0;
  double min_eigenvalue = 1.0;
  double max_leak = 0.0;
  double min_purity = 1.0;
};

inline constexpr double kTraceDriftLimit = 1e-9;
inline constexpr double kHermiticityLimit = 1e-10;
inline constexpr double kNegativityLimit = -1e-8;

/// Checks rho against the density-matrix invariants, folds the result into
/// diag and throws StateInvariantError on a breach.
void check_density(const DensityMatrix& rho, StateDiagnostics& diag, bool spectrum);

/// Population of the top three Fock levels of a field-only state.
double truncation_leak(const DensityMatrix& rho);

/// <beta| rho |beta> for a coherent state truncated to the same basis.
double coherent_fidelity(const DensityMatrix& rho, Complex beta);

struct BranchTrajectory {
  ParityLabel label = ParityLabel::ee;
  double drive_frequency = 0.0;
  double kappa = 1.0;
  std::vector<double> times;
  std::vector<Complex> mean_field;     ///< <a>(t), rotating frame
  std::vector<DensityMatrix> states;   ///< rho_field at each recorded time
  std::vector<double> purity;
  StateDiagnostics diagnostics;
};

/// Field-only evolution of one qubit branch under
///   H = (Delta_r + chi_xy) a^dag a + chi_xy/2 (a^2 e^{-2i w t} + h.c.) + eps (a + a^dag)
/// with kappa D[a], from vacuum, by fixed-step RK4.
BranchTrajectory evolve_dispersive_branch(const SystemParams& params, const DerivedParams& derived,
                                          ParityLabel label, const FockConfig& fock);

struct RabiTrajectory {
  double drive_frequency = 0.0;
  double kappa = 1.0;
  std::vector<double> times;
  /// Branch-conditioned <a>(t) in the frame rotating at omega_m, per label
  /// in kAllLabels order.
  std::array<std::vector<Complex>, 4> mean_field;
  /// Branch populations at t_end.
  std::array<double, 4> populations{};
  /// <H0> of the undriven Rabi Hamiltonian and <(-1)^(n + #e)> per sample;
  /// both are constants of motion of the closed undriven system.
  std::vector<double> energy;
  std::vector<double> parity;
  StateDiagnostics diagnostics;

  /// Average over the last kAveragingSpan of the record.
  [[nodiscard]] std::array<Complex, 4> steady_means() const;
  /// Q separation between even and odd branch means,
  /// (Im ee + Im gg)/2 - (Im eg + Im ge)/2.
  [[nodiscard]] double q_separation() const;
};

/// Lab-frame two-qubit Rabi model with a rotating drive and the full set of
/// dissipators, started from (|g>+|e>)/sqrt2 (x) (|g>+|e>)/sqrt2 (x) |0>
/// dressed by the undriven Hamiltonian. Branches are read out in the dressed
/// basis, so virtual photons of the ground state do not count as signal.
RabiTrajectory evolve_full_rabi(const SystemParams& params, const FockConfig& fock);

/// Same separation predicted by the exact pointer equation.
double predicted_q_separation(const SystemParams& params, const DerivedParams& derived,
                              const IntegrationOptions& options = {});

class AlignmentError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

struct OracleReport {
  double max_deviation = 0.0;           ///< max_t |<a>_oracle - alpha(t)|
  double relative_deviation = 0.0;      ///< max_deviation / max_t |alpha(t)| (1 if alpha == 0)
  double min_coherent_fidelity = 1.0;   ///< min_t <alpha(t)| rho |alpha(t)>
  double max_leak = 0.0;
  double min_purity = 1.0;
  std::size_t samples = 0;
};

/// Resamples the pointer trajectory onto the oracle times.
OracleReport compare_with_ansatz(const BranchTrajectory& oracle, const PointerTrajectory& pointer);

}  // namespace uscparity
