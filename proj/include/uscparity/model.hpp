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
#include <string_view>

namespace uscparity {

/// Physical parameters of two identical qubits dispersively coupled to a
/// driven, lossy resonator. Angular frequencies; kappa = 1 sets the unit of
/// every quantity built by from_ratios().
struct SystemParams {
  double omega_r = 0.0;  ///< resonator frequency
  double omega_a = 0.0;  ///< qubit frequency (both qubits)
  double g = 0.0;        ///< qubit-resonator coupling
  double kappa = 1.0;    ///< photon loss rate
  double epsilon_m = 0.0;
  double omega_m = 0.0;  ///< drive frequency
  double gamma_1 = 0.0;
  double gamma_phi = 0.0;

  /// Throws std::invalid_argument on any violated invariant.
  void validate() const;
  /// Uniformly rescales every rate and frequency.
  [[nodiscard]] SystemParams scaled(double s) const;
};

/// The operating-point parametrization used throughout: kappa = 1,
/// omega_a = omega_r + Delta with Delta > 0, omega_m = omega_r - Delta_r.
struct RatioParams {
  double g_over_kappa = 15.0;
  double g_over_omega_r = 0.5;
  double g_over_delta = 0.1;
  double eps_over_kappa = 0.5;
  double delta_r_over_kappa = 0.0;
  double gamma_1 = 0.0;
  double gamma_phi = 0.0;
};

SystemParams from_ratios(const RatioParams& r);

struct DerivedParams {
  double delta = 0.0;    ///< |omega_a - omega_r|
  double sigma = 0.0;    ///< omega_r + omega_a
  double delta_r = 0.0;  ///< omega_r - omega_m
  double chi = 0.0;      ///< g^2 (1/delta + 1/sigma)
  double chi_rwa = 0.0;  ///< g^2 / delta
  double lamb_shifted_omega_a = 0.0;
  double j_coupling = 0.0;  ///< g^2 (1/delta - 1/sigma)
  double n_crit = 0.0;      ///< (delta / 2g)^2
};

/// Raised when omega_a == omega_r: the dispersive expansion does not exist.
class DegenerateDetuningError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

DerivedParams derive(const SystemParams& params);

enum class ParityLabel { gg, ge, eg, ee };

inline constexpr std::array<ParityLabel, 4> kAllLabels = {ParityLabel::gg, ParityLabel::ge,
                                                          ParityLabel::eg, ParityLabel::ee};

std::string_view to_string(ParityLabel label);
ParityLabel parse_label(std::string_view text);

/// <xy| chi sz1 + chi sz2 |xy> with sz|e> = +|e>: +2chi (ee), -2chi (gg),
/// 0 for the odd labels.
double chi_for_label(const DerivedParams& derived, ParityLabel label, bool rwa);

struct ValidityReport {
  double g_over_delta = 0.0;
  double g_over_sigma = 0.0;
  double photons_over_ncrit = 0.0;
  bool coupling_ok = true;
  bool photons_ok = true;
  [[nodiscard]] bool ok() const { return coupling_ok && photons_ok; }
};

inline constexpr double kMaxDispersiveRatio = 0.15;
inline constexpr double kMaxPhotonFraction = 0.1;

ValidityReport validate_dispersive(const SystemParams& params, const DerivedParams& derived,
                                   double mean_photons);

}  // namespace uscparity
