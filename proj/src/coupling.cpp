// Copyright 2026 The molgate Authors
// SPDX-License-Identifier: Apache-2.0

#include "molgate/coupling.hpp"

#include "molgate/errors.hpp"

namespace molgate {

std::optional<CreationOverlap> single_creation_overlap(const OccupationVector& bra,
                                                       const OccupationVector& ket) {
  if (bra.popcount() != ket.popcount() + 1)
    throw ValidationError("single_creation_overlap: bra " + bra.to_string() + " and ket " +
                          ket.to_string() + " do not differ by one electron");
  if (bra.size() != ket.size())
    throw ValidationError("single_creation_overlap: occupation vectors differ in length");
  std::optional<std::size_t> added;
  for (std::size_t p = 0; p < bra.size(); ++p) {
    if (bra.occupied(p) == ket.occupied(p)) continue;
    if (!bra.occupied(p) || added) return std::nullopt;
    added = p;
  }
  if (!added) return std::nullopt;
  return CreationOverlap{*added, ket.occupied_before(*added) % 2 == 0 ? 1 : -1};
}

namespace {

// <E_g| a^dagger_p |E_0> for every g and p.
Eigen::MatrixXcd creation_elements(const MoleculeModel& m) {
  const auto G = static_cast<Eigen::Index>(m.charged.size());
  const auto M = static_cast<Eigen::Index>(m.orbital_count);
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(G, M);
  for (Eigen::Index g = 0; g < G; ++g) {
    for (const auto& tg : m.charged[static_cast<std::size_t>(g)].terms) {
      for (const auto& t0 : m.neutral.terms) {
        auto ov = single_creation_overlap(tg.occupation, t0.occupation);
        if (!ov) continue;
        A(g, static_cast<Eigen::Index>(ov->orbital)) +=
            static_cast<double>(ov->sign) * std::conj(tg.coefficient) * t0.coefficient;
      }
    }
  }
  return A;
}

}  // namespace

CouplingMatrix assemble_B(const MoleculeModel& molecule, const LeadConfig& leads) {
  validate_leads(leads, molecule);
  const Eigen::MatrixXcd A = creation_elements(molecule);
  const auto N = static_cast<Eigen::Index>(leads.lead_count());
  const auto M = static_cast<Eigen::Index>(molecule.orbital_count);
  Eigen::MatrixXcd V(N, M);
  for (Eigen::Index n = 0; n < N; ++n)
    for (Eigen::Index p = 0; p < M; ++p)
      V(n, p) = leads.coupling(static_cast<std::size_t>(n), static_cast<std::size_t>(p), molecule);
  // B(g, n) = sum_p A(g, p) conj(V(n, p))
  return {A * V.adjoint()};
}

Eigen::VectorXcd shared_coupling_vector(const MoleculeModel& molecule) {
  const Eigen::MatrixXcd A = creation_elements(molecule);
  Eigen::VectorXcd v(static_cast<Eigen::Index>(molecule.orbital_count));
  for (std::size_t p = 0; p < molecule.orbital_count; ++p)
    v(static_cast<Eigen::Index>(p)) = molecule.orbital_factors.at(p);
  return A * v;
}

Eigen::Index coupling_rank(const CouplingMatrix& B, double tol) {
  if (B.B.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(B.B);
  const auto& s = svd.singularValues();
  const double cut = tol * std::max(1.0, s(0));
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) r += s(i) > cut ? 1 : 0;
  return r;
}

}  // namespace molgate
