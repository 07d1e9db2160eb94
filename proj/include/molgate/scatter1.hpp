// Copyright 2026 The molgate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "molgate/coupling.hpp"
#include "molgate/model.hpp"

namespace molgate {

/// Everything the one-particle solver needs: the coupling matrix B
/// ((G+1) x N), the charged-state energies D, the neutral energy E0 and the
/// lead lattice.
struct Junction {
  Eigen::MatrixXcd B;
  Eigen::VectorXd D;
  double E0 = 0.0;
  LatticeParams lattice;

  static Junction from_molecule(const MoleculeModel& molecule, const LeadConfig& leads,
                                const LatticeParams& lattice);

  Eigen::Index lead_count() const { return B.cols(); }
  Eigen::Index charged_count() const { return B.rows(); }
  /// Throws ValidationError on inconsistent shapes or an invalid lattice.
  void validate() const;
};

/// |E_in + E0 - E_g| below this is treated as sitting on the pole.
inline constexpr double kPoleTolerance = 1e-9;
/// |E_in + E0 - E_g| below this produces a warning.
inline constexpr double kPoleWarning = 1e-6;
/// Condition number of Q(e^{i kappa}) above which a warning is attached.
inline constexpr double kConditionWarning = 1e12;

/// Q(z) = beta_eff I + z B^dagger (E_in + E0 - D)^{-1} B.
/// Throws PoleError when E_in + E0 is within kPoleTolerance of a charged level.
Eigen::MatrixXcd q_matrix(const Junction& junction, double E_in, cd z);

struct ScatteringSolution {
  Eigen::MatrixXcd S;    ///< S(out, in); diagonal = reflection
  Eigen::MatrixXcd Psi;  ///< bound amplitudes w(g, in)
  double kappa = 0.0;
  double E_in = 0.0;
  double E0 = 0.0;
  double unitarity_defect = 0.0;  ///< max |S^dagger S - I|
  double bound_residual = 0.0;    ///< relative residual of B^dagger Psi + beta_eff (I + S) = 0
  double rcond = 1.0;             ///< reciprocal condition estimate of Q(e^{i kappa})
  std::vector<std::string> warnings;

  double transmission(Eigen::Index out, Eigen::Index in) const { return std::norm(S(out, in)); }
};

/// Solves the scattering problem at kinetic energy E_in.
ScatteringSolution s_matrix(const Junction& junction, double E_in);

/// Same, parametrized by the lattice momentum kappa.
ScatteringSolution s_matrix_at_kappa(const Junction& junction, double kappa);

/// l = a d(arg S(out, in))/d kappa in Angstrom, from central differences with
/// one Richardson step. Throws NumericalError if |S(out, in)| vanishes nearby.
double effective_length(const Junction& junction, double kappa, Eigen::Index out,
                        Eigen::Index in, double h = 1e-4);

/// Closed-form S of a straight chain of G dots between two leads.
Eigen::Matrix2cd chain_s_matrix(int G, double kappa);

/// The G-dot chain expressed as a molecule: D holds the eigenvalues of the
/// chain Hamiltonian (on-site 2 beta, hopping -beta), E0 = 0 and B couples each
/// eigenvector to the leads through its end-site amplitudes. Cosine lattice.
Junction chain_junction(int G, double a, double beta);

/// Predicted |T_12|^2 + |T_13|^2 (N = 3) or |T_13|^2 + |T_14|^2 (N = 4) of a
/// separable junction fed from lead 1, for v_i = V_i / V_1 and phase phi of K_1.
/// `ratios` holds v_2 .. v_N.
double splitter_total_transmission(const std::vector<double>& ratios, double phi, int N);

/// arg K_in where 1/K_in = sum_g Psi(g, in) conj(c_g) and c is the shared
/// coupling vector of a separable junction.
double splitter_phase(const ScatteringSolution& solution, const Eigen::VectorXcd& c,
                      Eigen::Index in);

}  // namespace molgate
