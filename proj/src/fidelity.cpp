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

#include "uscparity/fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <fmt/format.h>

namespace uscparity {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr Complex kI{0.0, 1.0};
constexpr double kResidueLimit = 1e-8;
constexpr double kUnitSlack = 1e-12;

// Half-line overlap of two pointer wavefunctions,
//   upper: int_a^inf  C1 C2* dp,   lower: int_-inf^a C1 C2* dp.
// Completing the square gives 1/2 e^Phi erfc(+-sqrt2 (a - m + i beta/2)).
Complex overlap(Complex a1, Complex a2, double a, bool upper) {
  const double r1 = a1.real(), q1 = a1.imag();
  const double r2 = a2.real(), q2 = a2.imag();
  const double beta = r1 - r2;
  const double m = 0.5 * (q1 + q2);
  const double dq = q1 - q2;
  const Complex phi{-0.5 * dq * dq - 0.5 * beta * beta, -2.0 * beta * m + r1 * q1 - r2 * q2};
  const Complex arg = kSqrt2 * (Complex{a - m, 0.0} + 0.5 * kI * beta);
  return 0.5 * std::exp(phi) * erfc_complex(upper ? arg : -arg);
}

// Weight of |(C1 + C2)/(2 sqrt2)|^2 on a half-line. The two cross terms are
// complex conjugates; evaluating both and checking they cancel catches sign
// slips in the exponent.
double pair_weight(Complex a1, Complex a2, double a, bool upper) {
  const Complex x12 = overlap(a1, a2, a, upper);
  const Complex x21 = overlap(a2, a1, a, upper);
  const Complex cross = x12 + x21;
  if (std::abs(cross.imag()) > kResidueLimit * std::max(1.0, std::abs(x12))) {
    throw ClosedFormInconsistencyError(
        fmt::format("cross terms do not combine to a real value (residue {:.3e})", cross.imag()));
  }
  const double s1 = overlap(a1, a1, a, upper).real();
  const double s2 = overlap(a2, a2, a, upper).real();
  return (s1 + s2 + cross.real()) / 8.0;
}

double clamp_unit(double v, const char* what) {
  if (!std::isfinite(v) || v < -kUnitSlack || v > 1.0 + kUnitSlack) {
    throw ClosedFormInconsistencyError(fmt::format("{} = {} outside [0,1]", what, v));
  }
  return std::clamp(v, 0.0, 1.0);
}

double half_tail(double x) { return erfc_real(kSqrt2 * x); }

}  // namespace

Complex PointerSet::operator[](ParityLabel l) const {
  switch (l) {
    case ParityLabel::gg: return gg;
    case ParityLabel::ge: return ge;
    case ParityLabel::eg: return eg;
    case ParityLabel::ee: return ee;
  }
  return {};
}

Complex& PointerSet::operator[](ParityLabel l) {
  switch (l) {
    case ParityLabel::gg: return gg;
    case ParityLabel::ge: return ge;
    case ParityLabel::eg: return eg;
    case ParityLabel::ee: break;
  }
  return ee;
}

bool PointerSet::is_parity_symmetric(double tol) const {
  return std::abs(ge - eg) <= tol && std::abs(gg.imag() - ee.imag()) <= tol;
}

Complex pointer_wavefunction(Complex alpha, double p) {
  static const double norm = std::pow(2.0 / std::numbers::pi, 0.25);
  const double r = alpha.real(), q = alpha.imag();
  const double env = norm * std::exp(-(p - q) * (p - q));
  return env * std::exp(Complex{0.0, -r * (2.0 * p - q)});
}

double midpoint(const PointerSet& ps) { return 0.5 * (ps.ee.imag() + ps.eg.imag()); }

SubspaceProbabilities subspace_probabilities(const PointerSet& ps, double p_m) {
  double up = 0.0, down = 0.0;
  for (auto l : kAllLabels) {
    up += half_tail(p_m - ps[l].imag());
    down += half_tail(ps[l].imag() - p_m);
  }
  // each pointer is normalized, so the halves must add to one
  SubspaceProbabilities out{up / 8.0, down / 8.0};
  if (std::abs(out.even + out.odd - 1.0) > kUnitSlack) {
    throw ClosedFormInconsistencyError("subspace probabilities do not sum to one");
  }
  return out;
}

double fidelity_even(const PointerSet& ps, double p_m) {
  const double prob = subspace_probabilities(ps, p_m).even;
  if (prob <= 0.0) return 0.0;
  return clamp_unit(pair_weight(ps.ee, ps.gg, p_m, true) / prob, "F_even");
}

double fidelity_odd(const PointerSet& ps, double p_m) {
  const double prob = subspace_probabilities(ps, p_m).odd;
  if (prob <= 0.0) return 0.0;
  return clamp_unit(pair_weight(ps.eg, ps.ge, p_m, false) / prob, "F_odd");
}

double average_fidelity(double prob_even, double f_even, double prob_odd, double f_odd) {
  if (std::abs(prob_even + prob_odd - 1.0) > 1e-9 || prob_even < 0.0 || prob_odd < 0.0) {
    throw std::invalid_argument("subspace probabilities must be non-negative and sum to one");
  }
  return prob_even * f_even + prob_odd * f_odd;
}

std::string_view to_string(FidelityMethod m) {
  return m == FidelityMethod::closed_form ? "closed_form" : "numeric_oracle";
}

FidelityReport fidelity_closed_form(const PointerSet& ps) {
  return fidelity_closed_form(ps, midpoint(ps));
}

FidelityReport fidelity_closed_form(const PointerSet& ps, double p_m) {
  FidelityReport r;
  r.method = FidelityMethod::closed_form;
  r.p_m = p_m;
  const auto pr = subspace_probabilities(ps, p_m);
  r.prob_even = pr.even;
  r.prob_odd = pr.odd;
  r.f_even = fidelity_even(ps, p_m);
  r.f_odd = fidelity_odd(ps, p_m);
  r.f_avg = average_fidelity(r.prob_even, r.f_even, r.prob_odd, r.f_odd);
  // |psi-> weight over the whole line: (2 - 2 Re <C_eg|C_ge>)/8
  const Complex full = overlap(ps.eg, ps.ge, p_m, true) + overlap(ps.eg, ps.ge, p_m, false);
  r.psi_minus_weight = std::max(0.0, (2.0 - 2.0 * full.real()) / 8.0);
  return r;
}

namespace {

struct Moments {
  double trace = 0.0;
  double phi_plus = 0.0;
  double psi_plus = 0.0;
  double psi_minus = 0.0;
};

// Composite Simpson over [a, b] with n (even) intervals.
Moments simpson(const PointerSet& ps, Complex phase, double a, double b, int n) {
  Moments acc;
  const double h = (b - a) / n;
  for (int k = 0; k <= n; ++k) {
    const double p = a + h * k;
    const double w = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    // |Psi^C(p)> = 1/2 sum_xy C_xy |xy>
    const Complex cgg = 0.5 * phase * pointer_wavefunction(ps.gg, p);
    const Complex cge = 0.5 * phase * pointer_wavefunction(ps.ge, p);
    const Complex ceg = 0.5 * phase * pointer_wavefunction(ps.eg, p);
    const Complex cee = 0.5 * phase * pointer_wavefunction(ps.ee, p);
    acc.trace += w * (std::norm(cgg) + std::norm(cge) + std::norm(ceg) + std::norm(cee));
    acc.phi_plus += w * std::norm((cgg + cee) / kSqrt2);
    acc.psi_plus += w * std::norm((cge + ceg) / kSqrt2);
    acc.psi_minus += w * std::norm((ceg - cge) / kSqrt2);
  }
  const double s = h / 3.0;
  acc.trace *= s;
  acc.phi_plus *= s;
  acc.psi_plus *= s;
  acc.psi_minus *= s;
  return acc;
}

Moments resolved(const PointerSet& ps, Complex phase, double a, double b, int n, int n_max, double tol) {
  Moments coarse = simpson(ps, phase, a, b, n / 2);
  for (;; n *= 2) {
    const Moments fine = simpson(ps, phase, a, b, n);
    const double worst = std::max({std::abs(fine.trace - coarse.trace),
                                   std::abs(fine.phi_plus - coarse.phi_plus),
                                   std::abs(fine.psi_plus - coarse.psi_plus),
                                   std::abs(fine.psi_minus - coarse.psi_minus)});
    if (worst <= tol) return fine;
    if (2 * n > n_max) {
      throw QuadratureResolutionError(
          fmt::format("Simpson grid of {} intervals on [{}, {}] unresolved: halving changes result by {:.3e}",
                      n, a, b, worst));
    }
    coarse = fine;
  }
}

}  // namespace

FidelityReport fidelity_numeric(const PointerSet& ps, double p_m, const QuadratureSpec& spec) {
  if (spec.points < 4000 || spec.margin < 8.0) {
    throw std::invalid_argument("quadrature needs >= 4000 intervals and a margin >= 8");
  }
  if (spec.max_points < spec.points) throw std::invalid_argument("max_points below points");
  if (std::abs(std::abs(spec.common_phase) - 1.0) > 1e-12) {
    throw std::invalid_argument("common phase must have unit modulus");
  }
  double qmin = ps.gg.imag(), qmax = qmin;
  for (auto l : kAllLabels) {
    qmin = std::min(qmin, ps[l].imag());
    qmax = std::max(qmax, ps[l].imag());
  }
  const double lo = std::min(qmin - spec.margin, p_m - spec.margin);
  const double hi = std::max(qmax + spec.margin, p_m + spec.margin);
  const int n = spec.points + (spec.points % 2);

  const Moments below = resolved(ps, spec.common_phase, lo, p_m, n, spec.max_points, spec.richardson_tol);
  const Moments above = resolved(ps, spec.common_phase, p_m, hi, n, spec.max_points, spec.richardson_tol);

  FidelityReport r;
  r.method = FidelityMethod::numeric_oracle;
  r.p_m = p_m;
  r.prob_even = above.trace;
  r.prob_odd = below.trace;
  r.f_even = r.prob_even > 0.0 ? above.phi_plus / r.prob_even : 0.0;
  r.f_odd = r.prob_odd > 0.0 ? below.psi_plus / r.prob_odd : 0.0;
  r.f_avg = r.prob_even * r.f_even + r.prob_odd * r.f_odd;
  r.psi_minus_weight = above.psi_minus + below.psi_minus;
  if (std::abs(ps.ge - ps.eg) == 0.0 && r.psi_minus_weight > 1e-12) {
    throw QuadratureResolutionError("|psi-> picked up weight although alpha_ge == alpha_eg");
  }
  return r;
}

namespace symmetric {

double prob_even(double p_m, double im_eg, double im_ee) {
  return 0.25 * (half_tail(p_m - im_eg) + half_tail(p_m - im_ee));
}

double fidelity_odd(double im_eg, double im_ee) { return 0.5 * erfc_real((im_eg - im_ee) / kSqrt2); }

double fidelity_even(double b, double c, double im_eg) {
  const double h = 0.5 * (im_eg - c);
  const Complex t1 = std::exp(-2.0 * b * Complex{b, -c}) * erfc_complex(kSqrt2 * Complex{h, -b});
  const Complex t2 = std::exp(-2.0 * b * Complex{b, c}) * erfc_complex(kSqrt2 * Complex{h, b});
  const Complex sum = t1 + t2;
  if (std::abs(sum.imag()) > kResidueLimit * std::max(1.0, std::abs(t1))) {
    throw ClosedFormInconsistencyError("symmetric even-fidelity terms are not conjugate");
  }
  return clamp_unit(0.25 * erfc_real((im_eg - c) / kSqrt2) + sum.real() / 8.0, "F_even");
}

Complex fidelity_even_unbalanced(double b, double c, double im_eg) {
  const double h = 0.5 * (im_eg - c);
  const Complex t1 = std::exp(-2.0 * Complex{b, -c}) * erfc_complex(kSqrt2 * Complex{h, -b});
  const Complex t2 = std::exp(-2.0 * b * Complex{b, c}) * erfc_complex(kSqrt2 * Complex{h, b});
  return 0.25 * erfc_real((im_eg - c) / kSqrt2) + (t1 + t2) / 8.0;
}

}  // namespace symmetric

FidelityBand fidelity_sensitivity(const PointerSet& ps, const std::array<double, 4>& residuals) {
  const double f0 = fidelity_closed_form(ps).f_avg;
  FidelityBand band{f0, f0};
  // each label moves independently to one of 4 corners (or stays put if
  // its residual is zero); 4^4 evaluations at most
  std::array<std::vector<Complex>, 4> moves;
  for (std::size_t i = 0; i < 4; ++i) {
    const double r = residuals[i];
    if (!(r >= 0.0) || !std::isfinite(r)) throw std::invalid_argument("residual must be finite and >= 0");
    if (r == 0.0) {
      moves[i] = {Complex{}};
    } else {
      moves[i] = {Complex{r, 0.0}, Complex{-r, 0.0}, Complex{0.0, r}, Complex{0.0, -r}};
    }
  }
  for (auto d0 : moves[0])
    for (auto d1 : moves[1])
      for (auto d2 : moves[2])
        for (auto d3 : moves[3]) {
          PointerSet p = ps;
          p[kAllLabels[0]] += d0;
          p[kAllLabels[1]] += d1;
          p[kAllLabels[2]] += d2;
          p[kAllLabels[3]] += d3;
          const double f = fidelity_closed_form(p).f_avg;
          band.lo = std::min(band.lo, f);
          band.hi = std::max(band.hi, f);
        }
  return band;
}

}  // namespace uscparity
