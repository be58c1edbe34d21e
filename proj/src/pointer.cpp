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

#include "uscparity/pointer.hpp"

#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <stdexcept>

namespace uscparity {
namespace {

namespace odeint = boost::numeric::odeint;
using State = std::array<double, 2>;

constexpr Complex kI{0.0, 1.0};

void check_request(const SystemParams& params, double t_end, double tol) {
  params.validate();
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("t_end must be > 0");
  if (!(tol >= kMinTol && tol <= kMaxTol)) {
    throw std::invalid_argument("tol must lie in [1e-12, 1e-4]");
  }
}

// Uniform grid of spacing h aligned so that t_end is a sample, preceded by t = 0.
std::vector<double> sample_grid(double t_end, double h) {
  const auto n = static_cast<std::size_t>(std::floor(t_end / h + 1e-9));
  std::vector<double> times;
  times.reserve(n + 2);
  const double first = t_end - static_cast<double>(n) * h;
  if (first > 1e-12 * t_end) times.push_back(0.0);
  for (std::size_t k = 0; k <= n; ++k) {
    times.push_back(k == n ? t_end : std::max(0.0, first + static_cast<double>(k) * h));
  }
  times.front() = 0.0;
  return times;
}

PointerTrajectory run(const SystemParams& params, const DerivedParams& derived, ParityLabel label,
                      ModelKind model, const IntegrationOptions& opt) {
  check_request(params, opt.t_end, opt.tol);
  if (opt.samples_per_period < 4) throw std::invalid_argument("samples_per_period must be >= 4");
  if (opt.secular && model == ModelKind::exact && params.g / params.omega_r >= 1e-2) {
    throw std::invalid_argument("secular fast path requires g/omega_r < 1e-2");
  }

  const double chi_xy = chi_for_label(derived, label, model == ModelKind::rwa);
  const bool fast_term = model == ModelKind::exact && !opt.secular && chi_xy != 0.0 &&
                         params.omega_m > 0.0;
  double h = opt.smooth_sample_dt;
  if (fast_term) {
    h = (M_PI / params.omega_m) / opt.samples_per_period;
  } else {
    h = std::min(h, opt.t_end / 10.0);
  }

  PointerTrajectory traj;
  traj.label = label;
  traj.model = model;
  traj.drive_frequency = fast_term ? params.omega_m : 0.0;
  traj.kappa = params.kappa;
  traj.times = sample_grid(opt.t_end, h);
  traj.amplitudes.resize(traj.times.size());

  const double eps = params.epsilon_m;
  const double detune = derived.delta_r + chi_xy;
  const double half_kappa = 0.5 * params.kappa;
  const double two_omega = 2.0 * params.omega_m;
  auto sys = [&](const State& x, State& dxdt, double t) {
    const Complex a{x[0], x[1]};
    Complex d = -kI * eps - kI * detune * a - half_kappa * a;
    if (fast_term) d -= kI * chi_xy * std::conj(a) * std::polar(1.0, two_omega * t);
    dxdt[0] = d.real();
    dxdt[1] = d.imag();
  };

  auto stepper = odeint::make_dense_output(opt.tol, opt.tol, h, odeint::runge_kutta_dopri5<State>());
  State x{0.0, 0.0};
  stepper.initialize(x, 0.0, std::min(h, 1e-3));
  traj.amplitudes[0] = {0.0, 0.0};
  std::size_t k = 1;
  const std::size_t n = traj.times.size();
  try {
    while (k < n) {
      const double t_prev = stepper.current_time();
      stepper.do_step(sys);
      const double dt_next = stepper.current_time_step();
      if (!(dt_next > 1e-14 * std::max(1.0, t_prev)) ||
          !std::isfinite(stepper.current_state()[0]) || !std::isfinite(stepper.current_state()[1])) {
        throw IntegrationError("pointer integration: step size underflow", t_prev);
      }
      while (k < n && traj.times[k] <= stepper.current_time()) {
        State xi;
        stepper.calc_state(traj.times[k], xi);
        traj.amplitudes[k] = {xi[0], xi[1]};
        ++k;
      }
    }
  } catch (const odeint::step_adjustment_error& e) {
    throw IntegrationError(std::string("pointer integration: ") + e.what(), stepper.current_time());
  }
  return traj;
}

}  // namespace

std::string_view to_string(ModelKind kind) {
  return kind == ModelKind::exact ? "exact" : "rwa";
}

Complex pointer_rhs(const SystemParams& params, const DerivedParams& derived, ParityLabel label,
                    ModelKind model, bool secular, double t, Complex alpha) {
  const double chi_xy = chi_for_label(derived, label, model == ModelKind::rwa);
  Complex d = -kI * params.epsilon_m - kI * (derived.delta_r + chi_xy) * alpha -
              0.5 * params.kappa * alpha;
  if (model == ModelKind::exact && !secular) {
    d -= kI * chi_xy * std::conj(alpha) * std::polar(1.0, 2.0 * params.omega_m * t);
  }
  return d;
}

PointerTrajectory integrate_exact(const SystemParams& params, const DerivedParams& derived,
                                  ParityLabel label, const IntegrationOptions& options) {
  return run(params, derived, label, ModelKind::exact, options);
}

PointerTrajectory integrate_exact(const SystemParams& params, const DerivedParams& derived,
                                  ParityLabel label, double t_end, double tol) {
  IntegrationOptions o;
  o.t_end = t_end;
  o.tol = tol;
  return run(params, derived, label, ModelKind::exact, o);
}

PointerTrajectory integrate_rwa(const SystemParams& params, const DerivedParams& derived,
                                ParityLabel label, const IntegrationOptions& options) {
  return run(params, derived, label, ModelKind::rwa, options);
}

PointerTrajectory integrate_rwa(const SystemParams& params, const DerivedParams& derived,
                                ParityLabel label, double t_end, double tol) {
  IntegrationOptions o;
  o.t_end = t_end;
  o.tol = tol;
  return run(params, derived, label, ModelKind::rwa, o);
}

PointerTrajectory integrate(const SystemParams& params, const DerivedParams& derived,
                            ParityLabel label, ModelKind model, const IntegrationOptions& options) {
  return run(params, derived, label, model, options);
}

Complex rwa_fixed_point(const SystemParams& params, const DerivedParams& derived, ParityLabel label) {
  const double chi_xy = chi_for_label(derived, label, true);
  return -kI * params.epsilon_m / (kI * (derived.delta_r + chi_xy) + 0.5 * params.kappa);
}

SteadyAmplitude steady_state(const PointerTrajectory& traj) {
  const auto& t = traj.times;
  const auto& a = traj.amplitudes;
  if (t.size() < 2 || t.size() != a.size()) throw std::invalid_argument("steady_state: empty trajectory");
  const double settle = kSettleTime / traj.kappa;
  const double t_last = t.back();
  if (t_last < kMinHorizon / traj.kappa * (1.0 - 1e-12)) {
    throw InsufficientHorizonError("steady_state: trajectory must reach 10/kappa");
  }

  const double earliest = std::max(settle, t_last - kAveragingSpan / traj.kappa);
  double start = earliest;
  if (traj.drive_frequency > 0.0) {
    const double period = M_PI / traj.drive_frequency;
    const double periods = std::floor((t_last - earliest) / period + 1e-9);
    if (periods >= 1.0) start = t_last - periods * period;
  }

  // Trapezoid rule; for the exact model the grid is aligned with the window
  // and the rule is the periodic one.
  auto it = std::lower_bound(t.begin(), t.end(), start - 1e-12 * t_last);
  std::size_t i = static_cast<std::size_t>(it - t.begin());
  Complex integral{0.0, 0.0};
  double t0 = start;
  Complex a0 = std::abs(t[i] - start) <= 1e-12 * t_last ? a[i] : interpolate(traj, start);
  std::vector<Complex> window{a0};
  if (std::abs(t[i] - start) <= 1e-12 * t_last) ++i;
  for (; i < t.size(); ++i) {
    integral += 0.5 * (t[i] - t0) * (a0 + a[i]);
    t0 = t[i];
    a0 = a[i];
    window.push_back(a0);
  }

  SteadyAmplitude s;
  s.window_start = start;
  s.window_end = t_last;
  s.mean = integral / (t_last - start);
  for (const Complex& v : window) s.residual_oscillation = std::max(s.residual_oscillation, std::abs(v - s.mean));
  return s;
}

Complex interpolate(const PointerTrajectory& traj, double t) {
  const auto& ts = traj.times;
  if (ts.empty() || t < ts.front() - 1e-12 || t > ts.back() + 1e-12) {
    throw std::out_of_range("interpolate: time outside trajectory");
  }
  auto it = std::upper_bound(ts.begin(), ts.end(), t);
  std::size_t hi = static_cast<std::size_t>(it - ts.begin());
  hi = std::clamp<std::size_t>(hi, 1, ts.size() - 1);
  if (ts.size() < 4) {
    const double w = (t - ts[hi - 1]) / (ts[hi] - ts[hi - 1]);
    return (1.0 - w) * traj.amplitudes[hi - 1] + w * traj.amplitudes[hi];
  }
  // Stencil hi-2 .. hi+1, clamped to the array.
  std::size_t lo = hi >= 2 ? hi - 2 : 0;
  lo = std::min(lo, ts.size() - 4);
  Complex out{0.0, 0.0};
  for (std::size_t j = lo; j < lo + 4; ++j) {
    double w = 1.0;
    for (std::size_t m = lo; m < lo + 4; ++m) {
      if (m != j) w *= (t - ts[m]) / (ts[j] - ts[m]);
    }
    out += w * traj.amplitudes[j];
  }
  return out;
}

}  // namespace uscparity
