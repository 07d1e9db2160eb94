// Copyright 2026 The molgate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>

#include "molgate/model.hpp"

namespace molgate {

struct CreationOverlap {
  std::size_t orbital = 0;
  int sign = 1;
};

/// <bra| a^dagger_p |ket> for occupation vectors. Returns the orbital p and the
/// fermionic sign (-1)^(occupied orbitals of ket left of p) when bra equals ket
/// with one extra electron at p, and nothing otherwise.
/// Throws ValidationError unless popcount(bra) == popcount(ket) + 1.
std::optional<CreationOverlap> single_creation_overlap(const OccupationVector& bra,
                                                       const OccupationVector& ket);

/// Charge-transfer matrix between charged states (rows) and leads (columns):
///   B(g, n) = sum_p conj(V_{n,p}) <E_g^(eta+1)| a^dagger_p |E_0^(eta)>.
struct CouplingMatrix {
  Eigen::MatrixXcd B;

  Eigen::Index charged_count() const { return B.rows(); }
  Eigen::Index lead_count() const { return B.cols(); }
};

CouplingMatrix assemble_B(const MoleculeModel& molecule, const LeadConfig& leads);

/// c_g = sum_p V_p <E_g| a^dagger_p |E_0>, the vector shared by every column
/// of B when couplings are separable: B(:, n) = V_n * c.
Eigen::VectorXcd shared_coupling_vector(const MoleculeModel& molecule);

/// Numerical rank of B with singular values below tol * max(1, sigma_max) dropped.
Eigen::Index coupling_rank(const CouplingMatrix& B, double tol = 1e-10);

}  // namespace molgate
