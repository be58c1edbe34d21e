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

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "uscparity/model.hpp"
#include "uscparity/special_fn.hpp"

namespace uscparity {

enum class ModelKind { exact, rwa };

std::string_view to_string(ModelKind kind);

/// Coherent pointer amplitude alpha_xy(t) sampled on an increasing time grid
/// starting at t = 0 with alpha(0) = 0.
struct PointerTrajectory {
  ParityLabel label = ParityLabel::ee;
  ModelKind model = ModelKind::exact;
  std::vector<double> times;
  std::vector<Complex> amplitudes;
  /// omega_m when the trajectory carries the 2 omega_m ripple, else 0. Sets
  /// the averaging period pi/omega_m.
  double drive_frequency = 0.0;
  double kappa = 1.0;
};

struct IntegrationOptions {
  double t_end = 10.0;
  double tol = 1e-8;
  /// Drops the alpha* exp(2i omega_m t) term while keeping the exact chi.
  /// Only accepted for g/omega_r < 1e-2; error O(chi / 2 omega_m).
  bool secular = false;
  /// Output samples (and maximum step) per half drive period pi/omega_m.
  int samples_per_period = 20;
  /// Output spacing when nothing oscillates at 2 omega_m.
  double smooth_sample_dt = 0.01;
};

inline constexpr double kMinTol = 1e-12;
inline constexpr double kMaxTol = 1e-4;

/// Step-size underflow or controller failure inside the ODE solver.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double failure_time)
      : std::runtime_error(what), failure_time_(failure_time) {}
  [[nodiscard]] double failure_time() const { return failure_time_; }

 private:
  double failure_time_;
};

/// Right-hand side of the pointer equation for either model.
Complex pointer_rhs(const SystemParams& params, const DerivedParams& derived, ParityLabel label,
                    ModelKind model, bool secular, double t, Complex alpha);

/// d alpha/dt = -i eps - i[Delta_r alpha + chi_xy (alpha + alpha* e^{2i omega_m t})] - kappa/2 alpha
PointerTrajectory integrate_exact(const SystemParams& params, const DerivedParams& derived,
                                  ParityLabel label, const IntegrationOptions& options);
PointerTrajectory integrate_exact(const SystemParams& params, const DerivedParams& derived,
                                  ParityLabel label, double t_end, double tol);

/// d alpha/dt = -i eps - i (Delta_r + chi^RWA_xy) alpha - kappa/2 alpha
PointerTrajectory integrate_rwa(const SystemParams& params, const DerivedParams& derived,
                                ParityLabel label, const IntegrationOptions& options);
PointerTrajectory integrate_rwa(const SystemParams& params, const DerivedParams& derived,
                                ParityLabel label, double t_end, double tol);

PointerTrajectory integrate(const SystemParams& params, const DerivedParams& derived,
                            ParityLabel label, ModelKind model, const IntegrationOptions& options);

/// -i eps / (i (Delta_r + chi^RWA_xy) + kappa/2)
Complex rwa_fixed_point(const SystemParams& params, const DerivedParams& derived, ParityLabel label);

struct SteadyAmplitude {
  Complex mean;
  double residual_oscillation = 0.0;  ///< max |alpha(t) - mean| over the window
  double window_start = 0.0;
  double window_end = 0.0;
};

class InsufficientHorizonError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kSettleTime = 8.0;     ///< in units of 1/kappa
inline constexpr double kMinHorizon = 10.0;    ///< in units of 1/kappa
inline constexpr double kAveragingSpan = 2.0;  ///< in units of 1/kappa

/// Time average of alpha over the largest whole number of periods pi/omega_m
/// that ends at the last sample and fits in [max(8, t_end - 2)/kappa, t_end].
/// At the default horizon this is the window [8/kappa, 10/kappa].
SteadyAmplitude steady_state(const PointerTrajectory& traj);

/// Complex amplitude at time t by 4-point Lagrange interpolation of the
/// samples; throws std::out_of_range outside [times.front(), times.back()].
Complex interpolate(const PointerTrajectory& traj, double t);

}  // namespace uscparity
