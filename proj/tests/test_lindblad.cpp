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
#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "uscparity/lindblad.hpp"

using namespace uscparity;

namespace {

SystemParams op(double eps = 0.5) {
  RatioParams r;
  r.eps_over_kappa = eps;
  return from_ratios(r);
}

}  // namespace

TEST_CASE("fock config validation") {
  FockConfig f;
  CHECK_NOTHROW(f.validate());
  f.cutoff = 5;
  CHECK_THROWS_AS(f.validate(), std::invalid_argument);
  f = {};
  f.include_qubits = true;
  f.cutoff = 120;
  CHECK_THROWS_AS(f.validate(), DimensionGuardError);
  f.allow_large = true;
  CHECK_NOTHROW(f.validate());
  f = {};
  f.t_end = -1.0;
  CHECK_THROWS_AS(f.validate(), std::invalid_argument);
}

TEST_CASE("coherent fidelity of a truncated coherent state") {
  const Complex beta{0.3, -0.8};
  Eigen::VectorXcd c(31);
  c(0) = std::exp(-0.5 * std::norm(beta));
  for (int n = 1; n <= 30; ++n) c(n) = c(n - 1) * beta / std::sqrt(double(n));
  const DensityMatrix rho = c * c.adjoint();
  CHECK(coherent_fidelity(rho, beta) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(coherent_fidelity(rho, Complex{}) == doctest::Approx(std::exp(-std::norm(beta))).epsilon(1e-12));
  StateDiagnostics d;
  DensityMatrix bad = rho;
  bad(0, 1) += 1e-6;
  CHECK_THROWS_AS(check_density(bad, d, false), StateInvariantError);
}

TEST_CASE("undriven branches") {
  const auto p = op(0.0);
  const auto d = derive(p);
  FockConfig f;
  f.t_end = 3.0;
  // no linear term: <a> stays zero; the odd branches have no pair term either
  for (auto label : kAllLabels) {
    const auto traj = evolve_dispersive_branch(p, d, label, f);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      CHECK(std::abs(traj.mean_field[i]) <= 1e-14);
      if (label == ParityLabel::ge || label == ParityLabel::eg) {
        CHECK(traj.states[i](0, 0).real() == doctest::Approx(1.0).epsilon(1e-13));
      }
    }
  }
  // the even branches pick up virtual pairs through a^2 e^{-2i w t}: a
  // squeezed vacuum whose moments the Gaussian oracle tracks
  const auto traj = evolve_dispersive_branch(p, d, ParityLabel::ee, f);
  const double chi = chi_for_label(d, ParityLabel::ee, false);
  const auto g = oracle::gaussian_fluctuations(d.delta_r + chi, chi, 2.0 * p.omega_m, p.kappa, traj.times);
  double worst = 0.0, lowest = 1.0;
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    worst = std::max(worst, std::abs(traj.states[i](0, 0).real() - g[i].coherent_overlap()));
    worst = std::max(worst, std::abs(traj.purity[i] - g[i].purity()));
    lowest = std::min(lowest, traj.states[i](0, 0).real());
  }
  CHECK(worst <= 1e-6);
  CHECK(lowest < 0.995);
}

TEST_CASE("odd branch relaxes to the analytic fixed point") {
  const auto p = op();
  FockConfig f;
  f.t_end = 30.0;
  f.record_interval = 0.5;
  const auto traj = evolve_dispersive_branch(p, derive(p), ParityLabel::ge, f);
  CHECK(std::abs(traj.mean_field.back() - Complex{0.0, -1.0}) <= 1e-6);
  const auto d = traj.diagnostics;
  CHECK(d.max_trace_drift <= 1e-9);
  CHECK(d.max_hermiticity_residual <= 1e-10);
  CHECK(d.min_eigenvalue >= -1e-8);
}

TEST_CASE("dispersive oracle against the pointer equation at the operating point") {
  const auto p = op();
  const auto d = derive(p);
  const auto traj = evolve_dispersive_branch(p, d, ParityLabel::ee, FockConfig{});
  const auto ptr = integrate_exact(p, d, ParityLabel::ee, 10.0, 1e-10);
  const auto rep = compare_with_ansatz(traj, ptr);
  MESSAGE("relative deviation " << rep.relative_deviation << ", min fidelity " << rep.min_coherent_fidelity);
  CHECK(rep.relative_deviation <= 1e-3);
  CHECK(rep.max_leak < 1e-6);
  CHECK(rep.samples == traj.times.size());
  const auto hb = oracle::harmonic_balance(p.epsilon_m, d.delta_r, 2.0 * d.chi, p.omega_m, p.kappa);
  CHECK(std::abs(traj.mean_field.back() - hb.at(10.0, p.omega_m)) <= 1e-2 * std::abs(hb.mean));

  // The drive only displaces; the pair term squeezes and kappa mixes, so the
  // overlap with the coherent pointer is the Gaussian vacuum overlap.
  const double chi = chi_for_label(d, ParityLabel::ee, false);
  const auto g = oracle::gaussian_fluctuations(d.delta_r + chi, chi, 2.0 * p.omega_m, p.kappa, traj.times);
  double predicted = 1.0, late = 1.0;
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    predicted = std::min(predicted, g[i].coherent_overlap());
    if (traj.times[i] >= 8.0) late = std::min(late, coherent_fidelity(traj.states[i], interpolate(ptr, traj.times[i])));
  }
  CHECK(std::abs(rep.min_coherent_fidelity - predicted) <= 1e-5);
  CHECK(rep.min_coherent_fidelity >= 0.985);
  CHECK(late >= 0.99);
  CHECK(rep.min_purity >= 0.985);
}

TEST_CASE("closed dispersive branch stays pure") {
  const auto p = op();
  FockConfig f;
  f.closed_system = true;
  f.t_end = 3.0;
  const auto traj = evolve_dispersive_branch(p, derive(p), ParityLabel::gg, f);
  CHECK(traj.diagnostics.min_purity >= 1.0 - 1e-8);
}

TEST_CASE("wrong dispersive shift is detected") {
  const auto p = op();
  const auto d = derive(p);
  const auto traj = evolve_dispersive_branch(p, d, ParityLabel::ee, FockConfig{});
  auto wrong = d;
  wrong.chi *= 1.2;
  const auto ptr = integrate_exact(p, wrong, ParityLabel::ee, 10.0, 1e-10);
  CHECK(compare_with_ansatz(traj, ptr).relative_deviation > 1e-2);
}

TEST_CASE("compare_with_ansatz plumbing") {
  const auto p = op(0.0);
  const auto d = derive(p);
  const auto traj = evolve_dispersive_branch(p, d, ParityLabel::ge, FockConfig{});
  PointerTrajectory zero;
  zero.label = ParityLabel::ge;
  zero.times = traj.times;
  zero.amplitudes.assign(traj.times.size(), Complex{});
  zero.drive_frequency = p.omega_m;
  const auto rep = compare_with_ansatz(traj, zero);
  CHECK(rep.max_deviation == 0.0);
  CHECK(rep.min_coherent_fidelity == doctest::Approx(1.0));

  PointerTrajectory short_ptr = zero;
  short_ptr.times.resize(10);
  short_ptr.amplitudes.resize(10);
  CHECK_THROWS_AS(compare_with_ansatz(traj, short_ptr), AlignmentError);
  zero.label = ParityLabel::ee;
  CHECK_THROWS_AS(compare_with_ansatz(traj, zero), std::invalid_argument);
}

TEST_CASE("cutoff convergence") {
  const auto p = op();
  const auto d = derive(p);
  FockConfig f15;
  f15.cutoff = 15;
  f15.record_interval = 0.5;
  FockConfig f30 = f15;
  f30.cutoff = 30;
  const auto a = evolve_dispersive_branch(p, d, ParityLabel::ee, f15);
  const auto b = evolve_dispersive_branch(p, d, ParityLabel::ee, f30);
  CHECK(std::abs(a.mean_field.back() - b.mean_field.back()) <= 1e-6);
}

TEST_CASE("strong drive trips the leak guard") {
  const auto p = op(2.5);  // |alpha| -> 5, <n> = 25 does not fit below n = 12
  FockConfig f;
  f.cutoff = 12;
  try {
    (void)evolve_dispersive_branch(p, derive(p), ParityLabel::ge, f);
    FAIL("expected CutoffError");
  } catch (const CutoffError& e) {
    CHECK(e.suggested_cutoff() == 24);
  }
}

TEST_CASE("decoupled Rabi model is a driven damped cavity") {
  auto p = op();
  p.g = 0.0;
  FockConfig f;
  f.include_qubits = true;
  f.cutoff = 20;
  f.t_end = 4.0;
  const auto tr = evolve_full_rabi(p, f);
  const Complex fp{0.0, -1.0};
  for (std::size_t b = 0; b < 4; ++b) {
    CHECK(std::abs(tr.mean_field[b].back() - fp * (1.0 - std::exp(-2.0))) <= 1e-4);
    CHECK(tr.populations[b] == doctest::Approx(0.25).epsilon(1e-9));
  }
}

TEST_CASE("closed undriven Rabi model conserves energy and parity") {
  auto p = op(0.0);
  FockConfig f;
  f.include_qubits = true;
  f.cutoff = 20;
  f.t_end = 1.0;
  f.closed_system = true;
  const auto tr = evolve_full_rabi(p, f);
  const double span = tr.times.back();
  double de = 0.0, dp = 0.0;
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    de = std::max(de, std::abs(tr.energy[i] - tr.energy.front()));
    dp = std::max(dp, std::abs(tr.parity[i] - tr.parity.front()));
  }
  CHECK(dp / span <= 1e-8);
  CHECK(de / span / std::abs(tr.energy.front()) <= 1e-8);
  CHECK(tr.diagnostics.min_purity >= 1.0 - 1e-8);
}

TEST_CASE("qubit dissipators act on the qubits") {
  auto p = op(0.0);
  p.gamma_1 = 0.5;
  FockConfig f;
  f.include_qubits = true;
  f.cutoff = 20;
  f.t_end = 2.0;
  const auto tr = evolve_full_rabi(p, f);
  // gg fills up as both qubits relax: 1/4 -> (1 - e^{-2}/2)^2 roughly
  CHECK(tr.populations[0] > 0.5);
  CHECK(tr.populations[3] < 0.05);
}

TEST_CASE("full Rabi input validation") {
  const auto p = op();
  FockConfig f;
  CHECK_THROWS_AS(evolve_full_rabi(p, f), std::invalid_argument);
  f.include_qubits = true;
  f.cutoff = 15;
  CHECK_THROWS_AS(evolve_full_rabi(p, f), std::invalid_argument);
  CHECK_THROWS_AS(evolve_dispersive_branch(p, derive(p), ParityLabel::ee, f), std::invalid_argument);
}
