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

#include "uscparity/model.hpp"

#include <cmath>
#include <string>

namespace uscparity {

void SystemParams::validate() const {
  const double fields[] = {omega_r, omega_a, g, kappa, epsilon_m, omega_m, gamma_1, gamma_phi};
  for (double f : fields) {
    if (!std::isfinite(f)) throw std::invalid_argument("SystemParams: non-finite field");
    if (f < 0.0) throw std::invalid_argument("SystemParams: rates and frequencies must be >= 0");
  }
  if (omega_r <= 0.0) throw std::invalid_argument("SystemParams: omega_r must be > 0");
  if (g <= 0.0) throw std::invalid_argument("SystemParams: g must be > 0");
  if (kappa <= 0.0) throw std::invalid_argument("SystemParams: kappa must be > 0");
}

SystemParams SystemParams::scaled(double s) const {
  SystemParams p = *this;
  p.omega_r *= s;
  p.omega_a *= s;
  p.g *= s;
  p.kappa *= s;
  p.epsilon_m *= s;
  p.omega_m *= s;
  p.gamma_1 *= s;
  p.gamma_phi *= s;
  return p;
}

SystemParams from_ratios(const RatioParams& r) {
  if (!(r.g_over_kappa > 0.0) || !(r.g_over_omega_r > 0.0) || !(r.g_over_delta > 0.0) ||
      !(r.eps_over_kappa >= 0.0) || !std::isfinite(r.delta_r_over_kappa)) {
    throw std::invalid_argument("RatioParams: ratios must be positive and finite");
  }
  SystemParams p;
  p.kappa = 1.0;
  p.g = r.g_over_kappa;
  p.omega_r = p.g / r.g_over_omega_r;
  p.omega_a = p.omega_r + p.g / r.g_over_delta;
  p.epsilon_m = r.eps_over_kappa;
  p.omega_m = p.omega_r - r.delta_r_over_kappa;
  p.gamma_1 = r.gamma_1;
  p.gamma_phi = r.gamma_phi;
  p.validate();
  return p;
}

DerivedParams derive(const SystemParams& params) {
  params.validate();
  DerivedParams d;
  d.delta = std::abs(params.omega_a - params.omega_r);
  if (d.delta == 0.0) {
    throw DegenerateDetuningError("derive: omega_a == omega_r, dispersive expansion undefined");
  }
  d.sigma = params.omega_r + params.omega_a;
  d.delta_r = params.omega_r - params.omega_m;
  const double g2 = params.g * params.g;
  d.chi = g2 * (1.0 / d.delta + 1.0 / d.sigma);
  d.chi_rwa = g2 / d.delta;
  d.lamb_shifted_omega_a = params.omega_a + d.chi;
  d.j_coupling = g2 * (1.0 / d.delta - 1.0 / d.sigma);
  const double r = d.delta / (2.0 * params.g);
  d.n_crit = r * r;
  return d;
}

std::string_view to_string(ParityLabel label) {
  switch (label) {
    case ParityLabel::gg: return "gg";
    case ParityLabel::ge: return "ge";
    case ParityLabel::eg: return "eg";
    case ParityLabel::ee: return "ee";
  }
  return "??";
}

ParityLabel parse_label(std::string_view text) {
  for (ParityLabel l : kAllLabels) {
    if (to_string(l) == text) return l;
  }
  throw std::invalid_argument("unknown parity label '" + std::string(text) + "'");
}

double chi_for_label(const DerivedParams& derived, ParityLabel label, bool rwa) {
  const double chi = rwa ? derived.chi_rwa : derived.chi;
  switch (label) {
    case ParityLabel::ee: return 2.0 * chi;
    case ParityLabel::gg: return -2.0 * chi;
    default: return 0.0;
  }
}

ValidityReport validate_dispersive(const SystemParams& params, const DerivedParams& derived,
                                   double mean_photons) {
  ValidityReport v;
  v.g_over_delta = params.g / derived.delta;
  v.g_over_sigma = params.g / derived.sigma;
  v.photons_over_ncrit = mean_photons / derived.n_crit;
  v.coupling_ok = v.g_over_delta <= kMaxDispersiveRatio && v.g_over_sigma <= kMaxDispersiveRatio;
  v.photons_ok = mean_photons <= kMaxPhotonFraction * derived.n_crit;
  return v;
}

}  // namespace uscparity
