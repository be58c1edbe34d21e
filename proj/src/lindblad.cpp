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

#include "uscparity/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <Eigen/Sparse>
#include <fmt/format.h>

namespace uscparity {

namespace {

using Sparse = Eigen::SparseMatrix<Complex>;
using Triplets = std::vector<Eigen::Triplet<Complex>>;
constexpr Complex kI{0.0, 1.0};
constexpr double kStepsPerHalfPeriod = 40.0;

Sparse from_triplets(Eigen::Index dim, const Triplets& t) {
  Sparse m(dim, dim);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

// Annihilator on n = 0..N.
Sparse annihilator(int n_max) {
  Triplets t;
  for (int n = 1; n <= n_max; ++n) t.emplace_back(n - 1, n, std::sqrt(static_cast<double>(n)));
  return from_triplets(n_max + 1, t);
}

// A Lindblad generator split as
//   L(rho) = M + M^dag + sum_k rate_k J_k (J_k rho)^dag,
//   M = -i H(t) rho - 1/2 sum_k rate_k J_k^dag J_k rho,
// valid for Hermitian rho, which RK4 preserves stage by stage.
struct Generator {
  Sparse static_part;  // -i H0 - 1/2 sum rate J^dag J
  // time-dependent Hamiltonian pieces: -i (f(t) X + conj f(t) X^dag)
  Sparse drive_op;
  Complex drive_amp{0.0, 0.0};
  double drive_rate = 0.0;  // f(t) = drive_amp * exp(i drive_rate t)
  std::vector<Sparse> jumps;
  std::vector<double> rates;

  DensityMatrix operator()(double t, const DensityMatrix& rho) const {
    DensityMatrix m = static_part * rho;
    if (drive_amp != Complex{0.0, 0.0}) {
      const Complex f = drive_amp * std::exp(kI * (drive_rate * t));
      DensityMatrix hx = drive_op * rho;
      DensityMatrix hxd = drive_op.adjoint() * rho;
      m.noalias() -= kI * (f * hx + std::conj(f) * hxd);
    }
    DensityMatrix out = m + m.adjoint();
    for (std::size_t k = 0; k < jumps.size(); ++k) {
      // J rho J^dag, symmetrised so round-off cannot build up anti-Hermitian parts
      const DensityMatrix jr = jumps[k] * rho;
      const DensityMatrix jrj = jumps[k] * jr.adjoint();
      out.noalias() += (0.5 * rates[k]) * (jrj + jrj.adjoint());
    }
    return out;
  }
};

struct StepPlan {
  long steps = 0;
  double dt = 0.0;
  long stride = 1;
};

// h_norm bounds ||H||; the Liouvillian spectrum then sits inside
// |z| <= 2 h_norm + decay and RK4 is stable below |z dt| ~ 2.8.
StepPlan plan_steps(const FockConfig& fock, double omega_m, double h_norm, double decay) {
  double dt = fock.dt;
  if (dt <= 0.0) {
    dt = (std::numbers::pi / std::abs(omega_m)) / kStepsPerHalfPeriod;
    dt = std::min(dt, 2.0 / (2.0 * h_norm + decay));
    dt = std::min(dt, fock.record_interval);
  }
  StepPlan p;
  p.steps = std::max<long>(1, static_cast<long>(std::ceil(fock.t_end / dt - 1e-9)));
  p.dt = fock.t_end / static_cast<double>(p.steps);
  p.stride = std::max<long>(1, std::lround(fock.record_interval / p.dt));
  return p;
}

double leak_of_blocks(const DensityMatrix& rho, int n_max, int blocks) {
  double s = 0.0;
  for (int b = 0; b < blocks; ++b)
    for (int n = std::max(0, n_max - 2); n <= n_max; ++n) {
      const Eigen::Index i = static_cast<Eigen::Index>(b) * (n_max + 1) + n;
      s += rho(i, i).real();
    }
  return s;
}

void guard_leak(double leak, const FockConfig& fock, double t, StateDiagnostics& diag) {
  diag.max_leak = std::max(diag.max_leak, leak);
  if (leak >= fock.leak_limit) {
    throw CutoffError(fmt::format("population {:.3e} in the top Fock levels at t = {:.4g} exceeds {:.1e}; "
                                  "raise the cutoff above {}",
                                  leak, t, fock.leak_limit, fock.cutoff),
                      2 * fock.cutoff);
  }
}

// Integrating-factor RK4: a static Hermitian H0 is applied exactly through
// U(h) = exp(-i H0 h) from its eigendecomposition, RK4 only sees the weak
// drive and the dissipators. Plain RK4 on the full generator distorts fast
// coherences enough to break positivity at the 1e-8 level.
class LawsonStepper {
 public:
  LawsonStepper(const Generator& rest, const Eigen::VectorXd& energies, const Eigen::MatrixXcd& vecs, double h)
      : rest_(rest), h_(h) {
    auto prop = [&](double tau) {
      Eigen::VectorXcd ph(energies.size());
      for (Eigen::Index i = 0; i < ph.size(); ++i) ph(i) = std::exp(-kI * (energies(i) * tau));
      return Eigen::MatrixXcd(vecs * ph.asDiagonal() * vecs.adjoint());
    };
    half_ = prop(0.5 * h);
    half_adj_ = half_.adjoint();
  }

  // Classic RK4 in the interaction picture of H0, regrouped so that only
  // four conjugations by U(h/2) are needed:
  //   k2 at E(rho + h/2 k1), k3 at E(rho) + h/2 k2, k4 at E(E(rho) + h k3)
  //   rho' = E(E(rho + h/6 k1) + h/3 (k2 + k3)) + h/6 k4
  void step(double t, DensityMatrix& rho) const {
    const double h = h_;
    const DensityMatrix k1 = rest_(t, rho);
    const DensityMatrix er = conj_half(rho);
    const DensityMatrix ek = conj_half(k1);
    const DensityMatrix k2 = rest_(t + 0.5 * h, er + 0.5 * h * ek);
    const DensityMatrix k3 = rest_(t + 0.5 * h, er + 0.5 * h * k2);
    const DensityMatrix k4 = rest_(t + h, conj_half(er + h * k3));
    rho = conj_half(er + (h / 6.0) * ek + (h / 3.0) * (k2 + k3)) + (h / 6.0) * k4;
  }

 private:
  DensityMatrix conj_half(const DensityMatrix& x) const {
    DensityMatrix tmp;
    tmp.noalias() = half_ * x;
    DensityMatrix out;
    out.noalias() = tmp * half_adj_;
    return out;
  }

  const Generator& rest_;
  double h_;
  Eigen::MatrixXcd half_, half_adj_;
};

}  // namespace

void FockConfig::validate() const {
  if (cutoff < 10) throw std::invalid_argument("Fock cutoff must be >= 10");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("t_end must be positive");
  if (!(dt >= 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be >= 0 (0 = automatic)");
  if (!(record_interval > 0.0)) throw std::invalid_argument("record_interval must be positive");
  if (!(leak_limit > 0.0)) throw std::invalid_argument("leak_limit must be positive");
  const int dim = (include_qubits ? 4 : 1) * (cutoff + 1);
  if (dim > max_dimension && !allow_large) {
    throw DimensionGuardError(fmt::format(
        "Hilbert-space dimension {} exceeds the guard of {}; set allow_large to override", dim, max_dimension));
  }
}

void check_density(const DensityMatrix& rho, StateDiagnostics& diag, bool spectrum) {
  const double drift = std::abs(rho.trace() - Complex{1.0, 0.0});
  const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  const double purity = rho.squaredNorm();
  diag.max_trace_drift = std::max(diag.max_trace_drift, drift);
  diag.max_hermiticity_residual = std::max(diag.max_hermiticity_residual, herm);
  diag.min_purity = std::min(diag.min_purity, purity);
  if (drift > kTraceDriftLimit) {
    throw StateInvariantError(fmt::format("trace drifted by {:.3e}", drift));
  }
  if (herm > kHermiticityLimit) {
    throw StateInvariantError(fmt::format("Hermiticity residual {:.3e}", herm));
  }
  if (spectrum) {
    Eigen::SelfAdjointEigenSolver<DensityMatrix> es(rho, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    diag.min_eigenvalue = std::min(diag.min_eigenvalue, lo);
    if (lo < kNegativityLimit) {
      throw StateInvariantError(fmt::format("negative eigenvalue {:.3e}", lo));
    }
  }
}

double truncation_leak(const DensityMatrix& rho) {
  return leak_of_blocks(rho, static_cast<int>(rho.rows()) - 1, 1);
}

double coherent_fidelity(const DensityMatrix& rho, Complex beta) {
  Eigen::VectorXcd c(rho.rows());
  c(0) = std::exp(-0.5 * std::norm(beta));
  for (Eigen::Index n = 1; n < c.size(); ++n) c(n) = c(n - 1) * beta / std::sqrt(static_cast<double>(n));
  return std::clamp((c.adjoint() * rho * c)(0, 0).real(), 0.0, 1.0);
}

BranchTrajectory evolve_dispersive_branch(const SystemParams& params, const DerivedParams& derived,
                                          ParityLabel label, const FockConfig& fock) {
  params.validate();
  fock.validate();
  if (fock.include_qubits) {
    throw std::invalid_argument("evolve_dispersive_branch is field-only; use evolve_full_rabi for qubits");
  }
  const int n_max = fock.cutoff;
  const Eigen::Index dim = n_max + 1;
  const double chi = chi_for_label(derived, label, false);
  const double kappa = fock.closed_system ? 0.0 : params.kappa;
  const double eps = params.epsilon_m;
  const double w = params.omega_m;

  const Sparse a = annihilator(n_max);
  const Sparse ad = a.adjoint();
  const Sparse num = ad * a;
  const Sparse a2 = a * a;

  // In the frame rho' = R rho R^dag, R = exp(-i w t n), the pair term is
  // static: H' = (Delta_r + chi + w) n + chi/2 (a^2 + a^dag^2)
  //              + eps (a e^{iwt} + a^dag e^{-iwt}),
  // and kappa D[a] is unchanged.
  const DensityMatrix hs =
      DensityMatrix((derived.delta_r + chi + w) * num) + DensityMatrix((0.5 * chi) * (a2 + Sparse(a2.adjoint())));
  const Eigen::SelfAdjointEigenSolver<DensityMatrix> eig(hs);
  Generator gen;
  gen.static_part = -(0.5 * kappa) * num;
  gen.drive_op = a;
  gen.drive_amp = Complex{eps, 0.0};
  gen.drive_rate = w;
  if (kappa > 0.0) {
    gen.jumps.push_back(a);
    gen.rates.push_back(kappa);
  }
  const StepPlan plan = plan_steps(fock, w, 2.0 * eps * std::sqrt(n_max), kappa * n_max);
  const LawsonStepper stepper(gen, eig.eigenvalues(), eig.eigenvectors(), plan.dt);

  BranchTrajectory out;
  out.label = label;
  out.drive_frequency = w;
  out.kappa = params.kappa;

  DensityMatrix rho = DensityMatrix::Zero(dim, dim);
  rho(0, 0) = 1.0;
  auto record = [&](double t) {
    // back to the drive frame: rho_mn = rho'_mn e^{i w t (m - n)}
    DensityMatrix lab(dim, dim);
    for (Eigen::Index c = 0; c < dim; ++c)
      for (Eigen::Index r = 0; r < dim; ++r) lab(r, c) = rho(r, c) * std::exp(kI * (w * t * double(r - c)));
    check_density(lab, out.diagnostics, true);
    out.times.push_back(t);
    Complex mean{0.0, 0.0};
    for (Eigen::Index k = 1; k < dim; ++k) mean += std::sqrt(static_cast<double>(k)) * lab(k, k - 1);
    out.mean_field.push_back(mean);
    out.purity.push_back(lab.squaredNorm());
    out.states.push_back(std::move(lab));
  };
  record(0.0);
  for (long s = 1; s <= plan.steps; ++s) {
    stepper.step((s - 1) * plan.dt, rho);
    const double t = s * plan.dt;
    guard_leak(truncation_leak(rho), fock, t, out.diagnostics);
    if (s % plan.stride == 0 || s == plan.steps) record(t);
  }
  return out;
}

namespace {

// Undriven lab-frame Hamiltonian and operators of two qubits (x) field.
// Basis index (2 q1 + q2)(N+1) + n with q = 0 for g, 1 for e.
struct RabiOperators {
  int n_max = 0;
  Eigen::Index dim = 0;
  Sparse h0, a, num;
  std::array<Sparse, 2> lower, sz;
  std::vector<double> bare_energy;
  std::vector<double> parity;
};

RabiOperators build_rabi(const SystemParams& p, int n_max) {
  RabiOperators ops;
  ops.n_max = n_max;
  const Eigen::Index blk = n_max + 1;
  ops.dim = 4 * blk;
  auto idx = [&](int q1, int q2, int n) { return static_cast<Eigen::Index>(2 * q1 + q2) * blk + n; };
  Triplets th, ta, tn, tl0, tl1, tz0, tz1;
  ops.bare_energy.resize(ops.dim);
  ops.parity.resize(ops.dim);
  for (int q1 = 0; q1 < 2; ++q1)
    for (int q2 = 0; q2 < 2; ++q2)
      for (int n = 0; n <= n_max; ++n) {
        const auto i = idx(q1, q2, n);
        const double s1 = q1 ? 1.0 : -1.0, s2 = q2 ? 1.0 : -1.0;
        const double e = p.omega_r * n + 0.5 * p.omega_a * (s1 + s2);
        ops.bare_energy[i] = e;
        ops.parity[i] = ((n + q1 + q2) % 2) ? -1.0 : 1.0;
        th.emplace_back(i, i, e);
        tn.emplace_back(i, i, static_cast<double>(n));
        tz0.emplace_back(i, i, s1);
        tz1.emplace_back(i, i, s2);
        if (n > 0) ta.emplace_back(idx(q1, q2, n - 1), i, std::sqrt(static_cast<double>(n)));
        if (q1 == 1) tl0.emplace_back(idx(0, q2, n), i, 1.0);
        if (q2 == 1) tl1.emplace_back(idx(q1, 0, n), i, 1.0);
        // g sx_j (a + a^dag)
        for (int dn : {-1, 1}) {
          const int m = n + dn;
          if (m < 0 || m > n_max) continue;
          const double amp = p.g * std::sqrt(static_cast<double>(std::max(n, m)));
          th.emplace_back(idx(1 - q1, q2, m), i, amp);
          th.emplace_back(idx(q1, 1 - q2, m), i, amp);
        }
      }
  ops.h0 = from_triplets(ops.dim, th);
  ops.a = from_triplets(ops.dim, ta);
  ops.num = from_triplets(ops.dim, tn);
  ops.lower = {from_triplets(ops.dim, tl0), from_triplets(ops.dim, tl1)};
  ops.sz = {from_triplets(ops.dim, tz0), from_triplets(ops.dim, tz1)};
  return ops;
}

// Unitary V with V|bare> = |dressed>, each dressed state tied to the bare
// manifold (exactly degenerate bare energies) it overlaps most. Inside a
// manifold the polar factor of the overlap picks the rotation closest to
// the identity, which keeps ge and eg apart.
Eigen::MatrixXcd dressing_unitary(const RabiOperators& ops, const Eigen::MatrixXcd& v) {
  const Eigen::Index dim = ops.dim;

  std::vector<int> group(dim);
  std::vector<std::vector<Eigen::Index>> members;
  {
    std::vector<Eigen::Index> order(dim);
    for (Eigen::Index i = 0; i < dim; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](auto x, auto y) { return ops.bare_energy[x] < ops.bare_energy[y]; });
    double last = 0.0;
    for (std::size_t k = 0; k < order.size(); ++k) {
      const double e = ops.bare_energy[order[k]];
      if (k == 0 || std::abs(e - last) > 1e-9 * (1.0 + std::abs(e))) members.emplace_back();
      members.back().push_back(order[k]);
      group[order[k]] = static_cast<int>(members.size()) - 1;
      last = e;
    }
  }
  // Greedy matching by overlap weight with one slot per bare state. Deep in
  // the spectrum this is the plain argmax; near the truncation edge, where
  // dressing gets distorted, it still yields a complete assignment.
  const auto n_groups = members.size();
  struct Pair {
    double w;
    Eigen::Index k;
    std::size_t g;
  };
  std::vector<Pair> pairs;
  for (Eigen::Index k = 0; k < dim; ++k) {
    std::vector<double> w(n_groups, 0.0);
    for (Eigen::Index b = 0; b < dim; ++b) w[group[b]] += std::norm(v(b, k));
    for (std::size_t gi = 0; gi < n_groups; ++gi) pairs.push_back({w[gi], k, gi});
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) { return x.w > y.w; });
  std::vector<std::vector<Eigen::Index>> assigned(n_groups);
  std::vector<char> taken(dim, 0);
  for (const auto& pr : pairs) {
    if (taken[pr.k] || assigned[pr.g].size() >= members[pr.g].size()) continue;
    taken[pr.k] = 1;
    assigned[pr.g].push_back(pr.k);
  }
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t gi = 0; gi < n_groups; ++gi) {
    const auto& bs = members[gi];
    const auto& ks = assigned[gi];
    if (bs.size() != ks.size()) {
      throw std::runtime_error(fmt::format(
          "dressed-state labelling failed: bare energy {} has {} states but {} eigenvectors",
          ops.bare_energy[bs.front()], bs.size(), ks.size()));
    }
    const auto m = static_cast<Eigen::Index>(bs.size());
    Eigen::MatrixXcd o(m, m);  // <dressed_k | bare_b>
    for (Eigen::Index r = 0; r < m; ++r)
      for (Eigen::Index c = 0; c < m; ++c) o(r, c) = std::conj(v(bs[c], ks[r]));
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(o, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::MatrixXcd polar = svd.matrixU() * svd.matrixV().adjoint();
    for (Eigen::Index c = 0; c < m; ++c) {
      Eigen::VectorXcd col = Eigen::VectorXcd::Zero(dim);
      for (Eigen::Index r = 0; r < m; ++r) col += v.col(ks[r]) * polar(r, c);
      out.col(bs[c]) = col;
    }
  }
  return out;
}

}  // namespace

RabiTrajectory evolve_full_rabi(const SystemParams& params, const FockConfig& fock) {
  fock.validate();
  if (!fock.include_qubits) throw std::invalid_argument("evolve_full_rabi needs include_qubits");
  if (fock.cutoff < 20) throw std::invalid_argument("full Rabi evolution needs a cutoff >= 20");
  const double fields[] = {params.omega_r, params.omega_a, params.g, params.kappa,
                           params.epsilon_m, params.omega_m, params.gamma_1, params.gamma_phi};
  for (double f : fields) {
    if (!std::isfinite(f) || f < 0.0) throw std::invalid_argument("Rabi parameters must be finite and >= 0");
  }
  if (!(params.omega_r > 0.0) || !(params.omega_m > 0.0) || !(params.kappa > 0.0)) {
    throw std::invalid_argument("omega_r, omega_m and kappa must be positive");
  }

  const RabiOperators ops = build_rabi(params, fock.cutoff);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig{Eigen::MatrixXcd(ops.h0)};
  const Eigen::MatrixXcd v = dressing_unitary(ops, eig.eigenvectors());
  const Eigen::Index dim = ops.dim;
  const Eigen::Index blk = fock.cutoff + 1;

  const bool open = !fock.closed_system;
  Generator gen;
  Sparse decay(dim, dim);
  if (open) {
    auto add = [&](const Sparse& j, double rate) {
      if (rate <= 0.0) return;
      gen.jumps.push_back(j);
      gen.rates.push_back(rate);
      decay += (0.5 * rate) * Sparse(j.adjoint() * j);
    };
    add(ops.a, params.kappa);
    for (int j = 0; j < 2; ++j) {
      add(ops.lower[j], params.gamma_1);
      add(ops.sz[j], 0.5 * params.gamma_phi);
    }
  }
  gen.static_part = -decay;
  // eps (a e^{iwt} + a^dag e^{-iwt})
  gen.drive_op = ops.a;
  gen.drive_amp = Complex{params.epsilon_m, 0.0};
  gen.drive_rate = params.omega_m;

  // H0 is exact, so only the drive and the losses limit the step
  const double n = fock.cutoff;
  const double loss = open ? params.kappa * n + 2.0 * (params.gamma_1 + params.gamma_phi) : 0.0;
  const StepPlan plan = plan_steps(fock, params.omega_m, 2.0 * params.epsilon_m * std::sqrt(n), loss);
  const LawsonStepper stepper(gen, eig.eigenvalues(), eig.eigenvectors(), plan.dt);

  // branch readout operators V (P_xy (x) a) V^dag and V (P_xy (x) 1) V^dag,
  // stored transposed so that Tr[X rho] = sum(X^T .* rho)
  std::array<Eigen::MatrixXcd, 4> field_t, proj_t;
  for (int b = 0; b < 4; ++b) {
    Eigen::MatrixXcd pa = Eigen::MatrixXcd::Zero(dim, dim);
    Eigen::MatrixXcd pp = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index k = 0; k < blk; ++k) {
      const Eigen::Index i = b * blk + k;
      pp(i, i) = 1.0;
      if (k + 1 < blk) pa(i, i + 1) = std::sqrt(static_cast<double>(k + 1));
    }
    field_t[b] = (v * pa * v.adjoint()).transpose();
    proj_t[b] = (v * pp * v.adjoint()).transpose();
  }

  // dressed (|g>+|e>)/sqrt2 (x) (|g>+|e>)/sqrt2 (x) |0>
  Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(dim);
  for (int b = 0; b < 4; ++b) psi0(b * blk) = 0.5;
  const Eigen::VectorXcd psi = v * psi0;
  DensityMatrix rho = psi * psi.adjoint();

  RabiTrajectory out;
  out.drive_frequency = params.omega_m;
  out.kappa = params.kappa;
  const long checkpoints = 20;
  const long spectral_every = std::max<long>(1, plan.steps / checkpoints);
  auto record = [&](long s, double t) {
    check_density(rho, out.diagnostics, s % spectral_every == 0 || s == plan.steps);
    out.times.push_back(t);
    const Complex rot = std::exp(kI * (params.omega_m * t));
    for (int b = 0; b < 4; ++b) {
      const double pop = proj_t[b].cwiseProduct(rho).sum().real();
      const Complex num = field_t[b].cwiseProduct(rho).sum();
      out.mean_field[b].push_back(pop > 0.0 ? rot * num / pop : Complex{});
      out.populations[b] = pop;
    }
    double e = 0.0, par = 0.0;
    for (Eigen::Index k = 0; k < ops.h0.outerSize(); ++k)
      for (Sparse::InnerIterator it(ops.h0, k); it; ++it) e += (it.value() * rho(it.col(), it.row())).real();
    for (Eigen::Index i = 0; i < dim; ++i) par += ops.parity[i] * rho(i, i).real();
    out.energy.push_back(e);
    out.parity.push_back(par);
  };
  record(0, 0.0);
  for (long s = 1; s <= plan.steps; ++s) {
    stepper.step((s - 1) * plan.dt, rho);
    const double t = s * plan.dt;
    guard_leak(leak_of_blocks(rho, fock.cutoff, 4), fock, t, out.diagnostics);
    if (s % plan.stride == 0 || s == plan.steps) record(s, t);
  }
  return out;
}

std::array<Complex, 4> RabiTrajectory::steady_means() const {
  if (times.empty() || times.back() < kMinHorizon / kappa - 1e-9) {
    throw InsufficientHorizonError("Rabi record shorter than the settling horizon");
  }
  const double start = std::max(kSettleTime, times.back() * kappa - kAveragingSpan) / kappa;
  std::array<Complex, 4> means{};
  double span = 0.0;
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (times[i - 1] < start - 1e-12) continue;
    const double h = times[i] - times[i - 1];
    span += h;
    for (std::size_t b = 0; b < 4; ++b) means[b] += 0.5 * h * (mean_field[b][i - 1] + mean_field[b][i]);
  }
  for (auto& m : means) m /= span;
  return means;
}

double RabiTrajectory::q_separation() const {
  const auto m = steady_means();
  // kAllLabels order: gg, ge, eg, ee
  return 0.5 * (m[3].imag() + m[0].imag()) - 0.5 * (m[2].imag() + m[1].imag());
}

double predicted_q_separation(const SystemParams& params, const DerivedParams& derived,
                              const IntegrationOptions& options) {
  std::array<double, 4> q{};
  for (std::size_t i = 0; i < 4; ++i) {
    q[i] = steady_state(integrate_exact(params, derived, kAllLabels[i], options)).mean.imag();
  }
  return 0.5 * (q[3] + q[0]) - 0.5 * (q[2] + q[1]);
}

OracleReport compare_with_ansatz(const BranchTrajectory& oracle, const PointerTrajectory& pointer) {
  if (oracle.label != pointer.label) throw std::invalid_argument("oracle and pointer describe different labels");
  if (oracle.times.empty()) throw std::invalid_argument("empty oracle trajectory");
  OracleReport r;
  double scale = 0.0;
  for (std::size_t i = 0; i < oracle.times.size(); ++i) {
    Complex alpha;
    try {
      alpha = interpolate(pointer, oracle.times[i]);
    } catch (const std::out_of_range&) {
      throw AlignmentError(fmt::format("oracle time {} outside the pointer trajectory", oracle.times[i]));
    }
    scale = std::max(scale, std::abs(alpha));
    r.max_deviation = std::max(r.max_deviation, std::abs(oracle.mean_field[i] - alpha));
    if (i < oracle.states.size()) {
      r.min_coherent_fidelity = std::min(r.min_coherent_fidelity, coherent_fidelity(oracle.states[i], alpha));
    }
    if (i < oracle.purity.size()) r.min_purity = std::min(r.min_purity, oracle.purity[i]);
  }
  r.relative_deviation = scale > 0.0 ? r.max_deviation / scale : r.max_deviation;
  r.max_leak = oracle.diagnostics.max_leak;
  r.samples = oracle.times.size();
  return r;
}

}  // namespace uscparity
