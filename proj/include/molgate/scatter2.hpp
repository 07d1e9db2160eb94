// Copyright 2026 The molgate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/SparseCore>

#include "molgate/model.hpp"
#include "molgate/spectrum.hpp"

namespace molgate {

/// Two electrons passing each other on parallel leads d sites apart. In the
/// relative coordinate r = i1 - i2 the problem is a 1D chain with the
/// potential V(r) = K / sqrt(r^2 + d^2) for |r| <= C.
struct TwoParticleProblem {
  long C = 1;
  long d = 1;
  double K = 0.0;          ///< eV
  double p1_kappa = 0.0;   ///< total-momentum phase
  double p2_kappa = 0.0;   ///< relative-momentum phase, <= 0
  LatticeParams lattice;

  /// Equal kinetic energy E_in per electron, opposite directions: p1 = 0,
  /// p2 = -kappa(E_in) and K = kq^2 / a.
  static TwoParticleProblem equal_energy(double E_in, long C, long d, const LatticeParams& lattice);

  void validate() const;
  /// 2 beta cos(p1 / 2)
  double hopping() const;
  /// 4 beta cos(p1 / 2) cos(p2)
  double eigen_term() const;
};

double coulomb_potential(long r, long d, double K, long C);

/// Site momenta (p^(1), p^(2)) to (p1, p2) = (p^(1) + p^(2), (p^(1) - p^(2)) / 2).
std::pair<double, double> momentum_transform(double p1_site, double p2_site);

/// Tridiagonal complex system: row i reads
///   sub[i-1] x[i-1] + diag[i] x[i] + sup[i] x[i+1] = rhs[i].
struct TridiagonalSystem {
  std::vector<cd> sub, diag, sup, rhs;

  std::size_t size() const { return diag.size(); }
  Eigen::MatrixXcd dense() const;
  std::vector<cd> apply(const std::vector<cd>& x) const;
};

/// Gaussian elimination with partial pivoting for tridiagonal systems, O(n).
/// Throws SingularSystemError on a zero pivot.
std::vector<cd> solve_tridiagonal(const TridiagonalSystem& system);

/// The 2C+1 equations for the unknowns [T, f(C-1), ..., f(-C+1), R].
TridiagonalSystem assemble_system(const TwoParticleProblem& problem);

struct TwoParticleSolution {
  cd R;
  cd T;
  std::vector<cd> f;  ///< f[k] = f(r) with r = -C + 1 + k
  double flux_defect = 0.0;
  double residual = 0.0;  ///< relative residual of the linear system

  cd f_at(long r, long C) const { return f.at(static_cast<std::size_t>(r + C - 1)); }
};

/// Flux defects above this raise FluxError.
inline constexpr double kFluxTolerance = 1e-6;

TwoParticleSolution solve_two_particle(const TwoParticleProblem& problem);

struct TwoParticleRow {
  double E_in = 0.0;
  bool ok = true;
  std::string error;
  cd T, R;
  double T2 = 0.0, R2 = 0.0, argT = 0.0, flux_defect = 0.0;
};

struct TwoParticleTable {
  std::vector<TwoParticleRow> rows;
  std::vector<std::string> phase_warnings;

  double max_flux_defect() const;
  std::size_t failed_rows() const;
};

/// Solves `templ` at every grid energy with the equal-energy convention
/// (C, d, K and the lattice are taken from `templ`).
TwoParticleTable phase_spectrum(const TwoParticleProblem& templ, const std::vector<double>& grid,
                                PhasePolicy policy = PhasePolicy::Strict, unsigned jobs = 1);

void write_two_particle_csv(std::ostream& out, const TwoParticleTable& table);

/// Two-electron Hamiltonian on two finite leads of L sites in the site basis.
/// The basis holds both lead assignments, (electron 1 on lead A, electron 2 on
/// lead B) first and the swapped assignment second, each ordered (i1, i2)
/// with i1 major. Used to inspect which lead sectors the operator connects.
Eigen::SparseMatrix<double> pair_hamiltonian(long L, long d, double K, long C, double beta);

}  // namespace molgate
