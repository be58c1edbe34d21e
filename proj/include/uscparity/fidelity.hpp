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
#include <string_view>

#include "uscparity/model.hpp"
#include "uscparity/special_fn.hpp"

namespace uscparity {

/// Steady pointer amplitudes for the four two-qubit basis states.
struct PointerSet {
  Complex gg, ge, eg, ee;

  [[nodiscard]] Complex operator[](ParityLabel l) const;
  Complex& operator[](ParityLabel l);
  /// alpha_ge == alpha_eg and Im alpha_gg == Im alpha_ee within tol.
  [[nodiscard]] bool is_parity_symmetric(double tol = 1e-12) const;
};

/// Q-quadrature wavefunction <p|alpha> of a coherent pointer, in the
/// convention where the p-distribution has variance 1/4 around Im alpha:
///   C(p) = (2/pi)^{1/4} exp[-(p - Im a)^2] exp[-i Re a (2p - Im a)]
Complex pointer_wavefunction(Complex alpha, double p);

/// Decision threshold (Im alpha_ee + Im alpha_eg) / 2; outcomes p > p_m are
/// assigned to the even subspace.
double midpoint(const PointerSet& ps);

struct SubspaceProbabilities {
  double even = 0.0;
  double odd = 0.0;
};

/// Detection probabilities for the product input state
/// (|g>+|e>)/sqrt2 (x) (|g>+|e>)/sqrt2 (x) |0>.
SubspaceProbabilities subspace_probabilities(const PointerSet& ps, double p_m);

/// Raised when the two complex-conjugate erfc terms of a closed form do not
/// combine to a real number (imaginary residue > 1e-8).
class ClosedFormInconsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Bell-state fidelity |phi+> = (|gg>+|ee>)/sqrt2 conditioned on p > p_m.
double fidelity_even(const PointerSet& ps, double p_m);
/// Bell-state fidelity |psi+> = (|ge>+|eg>)/sqrt2 conditioned on p < p_m.
double fidelity_odd(const PointerSet& ps, double p_m);

double average_fidelity(double prob_even, double f_even, double prob_odd, double f_odd);

enum class FidelityMethod { closed_form, numeric_oracle };
std::string_view to_string(FidelityMethod m);

struct FidelityReport {
  double p_m = 0.0;
  double prob_even = 0.0;
  double prob_odd = 0.0;
  double f_even = 0.0;
  double f_odd = 0.0;
  double f_avg = 0.0;
  /// Integrated weight on |psi->; zero whenever alpha_ge == alpha_eg.
  double psi_minus_weight = 0.0;
  FidelityMethod method = FidelityMethod::closed_form;
};

/// Closed-form report at the midpoint threshold.
FidelityReport fidelity_closed_form(const PointerSet& ps);
FidelityReport fidelity_closed_form(const PointerSet& ps, double p_m);

struct QuadratureSpec {
  int points = 4000;      ///< Simpson intervals on each half-line
  int max_points = 64000;  ///< doubling stops here
  double margin = 8.0;    ///< grid extends this far beyond the extreme Im alpha
  double richardson_tol = 1e-10;
  /// Common unit phase multiplied onto every pointer wavefunction.
  Complex common_phase{1.0, 0.0};
};

class QuadratureResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Brute-force evaluation: builds the conditional two-qubit state
///   |Psi^C(p)> = 1/2 sum_xy C_xy(p) |xy>
/// on a p grid, projects onto the Bell states and integrates each half-line.
/// The grid doubles until halving it moves no moment by more than
/// richardson_tol, or throws QuadratureResolutionError past max_points.
FidelityReport fidelity_numeric(const PointerSet& ps, double p_m, const QuadratureSpec& spec = {});

/// Reduced expressions for the symmetric configuration
/// alpha_gg = -conj(alpha_ee), alpha_ge = alpha_eg at the midpoint threshold.
namespace symmetric {

/// 1/4 [erfc(sqrt2 (p_m - Im a_eg)) + erfc(sqrt2 (p_m - Im a_ee))]
double prob_even(double p_m, double im_eg, double im_ee);
/// 1/2 erfc((Im a_eg - Im a_ee)/sqrt2)
double fidelity_odd(double im_eg, double im_ee);
/// Three-term form with the symmetric exponents exp(-2b(b -+ ic)),
/// b = Re a_ee, c = Im a_ee.
double fidelity_even(double b, double c, double im_eg);
/// Variant whose first exponent is exp(-2(b - ic)) instead of
/// exp(-2b(b - ic)). Generally complex and wrong; kept as a regression guard.
Complex fidelity_even_unbalanced(double b, double c, double im_eg);

}  // namespace symmetric

struct FidelityBand {
  double lo = 0.0;
  double hi = 0.0;
};

/// Range of the closed-form average fidelity when each pointer is displaced
/// by its residual oscillation radius along +-I and +-Q.
FidelityBand fidelity_sensitivity(const PointerSet& ps, const std::array<double, 4>& residuals);

}  // namespace uscparity
