// Copyright 2026 The molgate Authors
// SPDX-License-Identifier: Apache-2.0

#include "molgate/scatter1.hpp"

#include <cmath>
#include <cstdio>

#include "molgate/errors.hpp"
#include "molgate/units.hpp"

namespace molgate {

Junction Junction::from_molecule(const MoleculeModel& molecule, const LeadConfig& leads,
                                 const LatticeParams& lattice) {
  require_valid(molecule);
  Junction j;
  j.B = assemble_B(molecule, leads).B;
  j.D = molecule.charged_energies();
  j.E0 = molecule.neutral.energy;
  j.lattice = lattice;
  j.validate();
  return j;
}

void Junction::validate() const {
  lattice.validate();
  if (B.cols() < 1) throw ValidationError("junction needs at least one lead");
  if (B.rows() != D.size())
    throw ValidationError("coupling matrix rows must match the number of charged states");
  if (!B.allFinite() || !D.allFinite() || !std::isfinite(E0))
    throw ValidationError("junction data contains non-finite values");
}

namespace {

std::string fmt(const char* f, double x, double y = 0.0) {
  char buf[200];
  std::snprintf(buf, sizeof buf, f, x, y);
  return buf;
}

// 1 / (E_in + E0 - D), with pole checks.
Eigen::VectorXcd resolvent(const Junction& j, double E_in, std::vector<std::string>* warnings) {
  Eigen::VectorXcd r(j.D.size());
  for (Eigen::Index g = 0; g < j.D.size(); ++g) {
    const double gap = E_in + j.E0 - j.D(g);
    if (std::abs(gap) < kPoleTolerance) throw PoleError(static_cast<std::size_t>(g), gap);
    if (warnings && std::abs(gap) < kPoleWarning)
      warnings->push_back(fmt("within %.3e eV of the pole of charged state %g", std::abs(gap),
                              static_cast<double>(g)));
    r(g) = 1.0 / gap;
  }
  return r;
}

}  // namespace

Eigen::MatrixXcd q_matrix(const Junction& j, double E_in, cd z) {
  const Eigen::VectorXcd r = resolvent(j, E_in, nullptr);
  const auto N = j.lead_count();
  Eigen::MatrixXcd Q = j.lattice.beta_eff() * Eigen::MatrixXcd::Identity(N, N);
  Q.noalias() += z * (j.B.adjoint() * r.asDiagonal() * j.B);
  return Q;
}

namespace {

ScatteringSolution solve(const Junction& j, double E_in, double kappa) {
  ScatteringSolution sol;
  sol.E_in = E_in;
  sol.E0 = j.E0;
  sol.kappa = kappa;

  const Eigen::VectorXcd r = resolvent(j, E_in, &sol.warnings);
  const auto N = j.lead_count();
  const double beta = j.lattice.beta_eff();
  const Eigen::MatrixXcd M = j.B.adjoint() * r.asDiagonal() * j.B;
  const cd zp = std::polar(1.0, kappa);
  const cd zm = std::conj(zp);
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(N, N);
  const Eigen::MatrixXcd Qp = beta * I + zp * M;
  const Eigen::MatrixXcd Qm = beta * I + zm * M;

  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(Qp);
  sol.rcond = lu.rcond();
  if (!(sol.rcond > 0.0) || !std::isfinite(sol.rcond))
    throw SingularSystemError("Q(e^{i kappa}) is singular");
  if (1.0 / sol.rcond > kConditionWarning)
    sol.warnings.push_back(fmt("Q(e^{i kappa}) is ill-conditioned (cond ~ %.3e)", 1.0 / sol.rcond));

  sol.S = -lu.solve(Qm);
  sol.Psi = r.asDiagonal() * (zm * j.B + zp * (j.B * sol.S));
  if (!sol.S.allFinite()) throw SingularSystemError("S-matrix has non-finite entries");

  sol.unitarity_defect = (sol.S.adjoint() * sol.S - I).cwiseAbs().maxCoeff();
  const Eigen::MatrixXcd upper = j.B.adjoint() * sol.Psi + beta * (I + sol.S);
  sol.bound_residual = upper.cwiseAbs().maxCoeff() / beta;
  return sol;
}

}  // namespace

ScatteringSolution s_matrix(const Junction& j, double E_in) {
  const Momentum m = energy_to_momentum(E_in, j.lattice);
  auto sol = solve(j, E_in, m.kappa);
  if (m.outside_continuum_regime)
    sol.warnings.push_back(fmt("kappa = %.4f exceeds %.1f; lattice no longer mimics a free particle",
                               m.kappa, kContinuumKappaLimit));
  return sol;
}

ScatteringSolution s_matrix_at_kappa(const Junction& j, double kappa) {
  if (!(kappa > 0.0) || !(kappa < units::pi))
    throw ValidationError("lattice momentum must lie in (0, pi)");
  return solve(j, momentum_to_energy(kappa, j.lattice), kappa);
}

double effective_length(const Junction& j, double kappa, Eigen::Index out, Eigen::Index in,
                        double h) {
  h = std::min(h, 0.25 * kappa);
  auto phase_slope = [&](double step) {
    const cd sp = s_matrix_at_kappa(j, kappa + step).S(out, in);
    const cd sm = s_matrix_at_kappa(j, kappa - step).S(out, in);
    if (std::abs(sp) < 1e-10 || std::abs(sm) < 1e-10)
      throw NumericalError("transmission amplitude vanishes; effective length undefined");
    return std::arg(sp / sm) / (2.0 * step);
  };
  const double d1 = phase_slope(h);
  const double d2 = phase_slope(0.5 * h);
  return j.lattice.a * (4.0 * d2 - d1) / 3.0;
}

Eigen::Matrix2cd chain_s_matrix(int G, double kappa) {
  if (G < 1) throw ValidationError("chain needs at least one dot");
  const cd t = std::polar(1.0, kappa * (G - 1));
  Eigen::Matrix2cd S;
  S << 0.0, t, t, 0.0;
  return S;
}

Junction chain_junction(int G, double a, double beta) {
  if (G < 1) throw ValidationError("chain needs at least one dot");
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(G, G);
  for (int i = 0; i < G; ++i) {
    H(i, i) = 2.0 * beta;
    if (i + 1 < G) H(i, i + 1) = H(i + 1, i) = -beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  const Eigen::MatrixXd& U = es.eigenvectors();
  Junction j;
  j.lattice.a = a;
  j.lattice.beta = beta;
  j.lattice.dispersion = Dispersion::Cosine;
  j.D = es.eigenvalues();
  j.E0 = 0.0;
  j.B.resize(G, 2);
  for (int al = 0; al < G; ++al) {
    j.B(al, 0) = -beta * U(0, al);
    j.B(al, 1) = -beta * U(G - 1, al);
  }
  return j;
}

double splitter_total_transmission(const std::vector<double>& ratios, double phi, int N) {
  if (N != 3 && N != 4) throw ValidationError("splitter prediction supports N = 3 or N = 4");
  if (ratios.size() != static_cast<std::size_t>(N - 1))
    throw ValidationError("splitter prediction needs N - 1 coupling ratios");
  double all = 1.0;
  for (double v : ratios) all += v * v;
  const double out = N == 3 ? ratios[0] * ratios[0] + ratios[1] * ratios[1]
                            : ratios[1] * ratios[1] + ratios[2] * ratios[2];
  const double c = std::cos(phi);
  return 4.0 * c * c * out / (all * all);
}

double splitter_phase(const ScatteringSolution& sol, const Eigen::VectorXcd& c, Eigen::Index in) {
  if (c.size() != sol.Psi.rows())
    throw ValidationError("shared coupling vector does not match the charged-state count");
  const cd invK = c.dot(sol.Psi.col(in));  // sum_g conj(c_g) w_g
  return -std::arg(invK);
}

}  // namespace molgate
