// Copyright 2026 The molgate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "molgate/molecule_io.hpp"
#include "molgate/scatter1.hpp"

namespace molgate::testing {

inline std::filesystem::path data_dir() { return MOLGATE_DATA_DIR; }

inline MoleculeModel h2() { return read_molecule(data_dir() / "h2_sto3g.json"); }

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline Junction h2_junction(std::vector<double> lead_factors, LatticeParams lattice = LatticeParams::canonical(0.1)) {
  LeadConfig leads;
  leads.lead_factors = std::move(lead_factors);
  return Junction::from_molecule(h2(), leads, lattice);
}

/// Random real junction: N leads, G charged levels spread over (lo, hi) eV
/// above the neutral energy.
inline Junction random_junction(std::mt19937_64& rng, Eigen::Index N, Eigen::Index G,
                                LatticeParams lattice = LatticeParams::canonical(0.1), double scale = 2.0) {
  std::uniform_real_distribution<double> u(-scale, scale), e(0.5, 40.0);
  Junction j;
  j.lattice = lattice;
  j.E0 = -20.0;
  j.B.resize(G, N);
  j.D.resize(G);
  for (Eigen::Index g = 0; g < G; ++g) {
    j.D(g) = j.E0 + e(rng);
    for (Eigen::Index n = 0; n < N; ++n) j.B(g, n) = u(rng);
  }
  return j;
}

/// Energy in (lo, hi) keeping at least `gap` eV from every resonance.
inline double energy_away_from_poles(std::mt19937_64& rng, const Junction& j, double lo, double hi,
                                     double gap = 1e-6) {
  std::uniform_real_distribution<double> u(lo, hi);
  for (;;) {
    const double E = u(rng);
    bool ok = true;
    for (Eigen::Index g = 0; g < j.D.size(); ++g) ok = ok && std::abs(E + j.E0 - j.D(g)) > gap;
    if (ok) return E;
  }
}

}  // namespace molgate::testing
