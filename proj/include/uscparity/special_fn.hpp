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

#include <complex>

namespace uscparity {

using Complex = std::complex<double>;

/// Faddeeva function w(z) = exp(-z^2) erfc(-iz) for Im z >= 0.
///
/// Power series near the origin, Laplace continued fraction far from it and
/// Gautschi's Taylor/continued-fraction hybrid in between. Relative accuracy
/// is better than 1e-13 over the closed upper half-plane.
Complex faddeeva_upper(Complex z);

/// Complementary error function of a complex argument.
///
/// Arguments with Re z < 0 go through erfc(z) = 2 - erfc(-z), so the core
/// evaluation only ever sees the right half-plane where erfc(z) =
/// exp(-z^2) w(iz) has no cancellation. Beyond |z| = 30 the result is the
/// asymptotic value 0 (Re z > 0) or 2 (Re z < 0) wherever that limit is the
/// correctly rounded answer; near the diagonals the exact value is kept.
///
/// Throws std::invalid_argument for non-finite input and std::range_error
/// when the true value overflows a double (large |Im z| near the imaginary
/// axis, e.g. erfc(30i) ~ e^900).
Complex erfc_complex(Complex z);

/// erfc of a real argument; throws std::invalid_argument for non-finite x.
double erfc_real(double x);

}  // namespace uscparity
