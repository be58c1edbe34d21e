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

#include "uscparity/special_fn.hpp"

#include <cmath>
#include <stdexcept>

namespace uscparity {
namespace {

constexpr double kTwoOverSqrtPi = 1.12837916709551257390;
constexpr double kAsymptoticRadius = 30.0;
// log(DBL_MAX) with a little headroom.
constexpr double kMaxExpArg = 708.0;

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

// Regions follow the Poppe & Wijers partition of the quadrant x, y >= 0,
// measured in the scaled radius rho^2 = (x/6.3)^2 + (y/4.4)^2.
Complex faddeeva_upper(Complex z) {
  const double xabs = std::abs(z.real());
  const double y = z.imag();
  if (y < 0.0) throw std::invalid_argument("faddeeva_upper: Im z must be >= 0");

  const double xs = xabs / 6.3;
  const double ys = y / 4.4;
  double qrho = xs * xs + ys * ys;
  const double xquad = xabs * xabs - y * y;
  const double yquad = 2.0 * xabs * y;

  double u = 0.0;
  double v = 0.0;
  if (qrho < 0.085264) {
    // w(z) = exp(-z^2) (1 - erf(-iz)); erf by its Maclaurin series in z^2.
    qrho = (1.0 - 0.85 * ys) * std::sqrt(qrho);
    const int n = static_cast<int>(std::lround(6.0 + 72.0 * qrho));
    int j = 2 * n + 1;
    double xsum = 1.0 / j;
    double ysum = 0.0;
    for (int i = n; i >= 1; --i) {
      j -= 2;
      const double xaux = (xsum * xquad - ysum * yquad) / i;
      ysum = (xsum * yquad + ysum * xquad) / i;
      xsum = xaux + 1.0 / j;
    }
    const double u1 = -kTwoOverSqrtPi * (xsum * y + ysum * xabs) + 1.0;
    const double v1 = kTwoOverSqrtPi * (xsum * xabs - ysum * y);
    const double daux = std::exp(-xquad);
    const double u2 = daux * std::cos(yquad);
    const double v2 = -daux * std::sin(yquad);
    u = u1 * u2 - v1 * v2;
    v = u1 * v2 + v1 * u2;
  } else {
    double h = 0.0;
    int kapn = 0;
    int nu = 0;
    if (qrho > 1.0) {
      // Plain Laplace continued fraction.
      qrho = std::sqrt(qrho);
      nu = static_cast<int>(3.0 + 1442.0 / (26.0 * qrho + 77.0));
    } else {
      // Continued fraction shifted by h, summed as a truncated Taylor series.
      qrho = (1.0 - ys) * std::sqrt(1.0 - qrho);
      h = 1.88 * qrho;
      kapn = static_cast<int>(std::lround(7.0 + 34.0 * qrho));
      nu = static_cast<int>(std::lround(16.0 + 26.0 * qrho));
    }
    const bool taylor = h > 0.0;
    const double h2 = 2.0 * h;
    double qlambda = taylor ? std::pow(h2, kapn) : 0.0;
    double rx = 0.0, ry = 0.0, sx = 0.0, sy = 0.0;
    for (int n = nu; n >= 0; --n) {
      const double np1 = n + 1.0;
      double tx = y + h + np1 * rx;
      double ty = xabs - np1 * ry;
      const double c = 0.5 / (tx * tx + ty * ty);
      rx = c * tx;
      ry = c * ty;
      if (taylor && n <= kapn) {
        tx = qlambda + sx;
        sx = rx * tx - ry * sy;
        sy = ry * tx + rx * sy;
        qlambda /= h2;
      }
    }
    if (taylor) {
      u = kTwoOverSqrtPi * sx;
      v = kTwoOverSqrtPi * sy;
    } else {
      u = kTwoOverSqrtPi * rx;
      v = kTwoOverSqrtPi * ry;
    }
    if (y == 0.0) u = std::exp(-xabs * xabs);
  }
  if (z.real() < 0.0) v = -v;
  return {u, v};
}

namespace {

// erfc on the closed right half-plane.
Complex erfc_right(Complex z) {
  const Complex w = faddeeva_upper(Complex(-z.imag(), z.real()));
  const Complex minus_z2 = -z * z;
  if (std::abs(minus_z2.real()) < kMaxExpArg) return std::exp(minus_z2) * w;
  // exp(-z^2) alone under/overflows; combine in the log domain.
  if (w == Complex(0.0, 0.0)) return {0.0, 0.0};
  const Complex lg = minus_z2 + std::log(w);
  if (lg.real() > kMaxExpArg) throw std::range_error("erfc_complex: result overflows");
  return std::exp(lg);
}

}  // namespace

Complex erfc_complex(Complex z) {
  if (!finite(z)) throw std::invalid_argument("erfc_complex: non-finite argument");
  // Beyond the asymptotic radius the continued fraction is still exact; the
  // shortcut only fires where |erfc(|Re z| + i Im z)| < exp(-750) so the
  // limiting value is the correctly rounded result.
  if (std::abs(z) > kAsymptoticRadius &&
      z.real() * z.real() - z.imag() * z.imag() > 750.0) {
    return z.real() > 0.0 ? Complex(0.0, 0.0) : Complex(2.0, 0.0);
  }
  if (z.real() >= 0.0) return erfc_right(z);
  return Complex(2.0, 0.0) - erfc_right(-z);
}

double erfc_real(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("erfc_real: non-finite argument");
  return std::erfc(x);
}

}  // namespace uscparity
