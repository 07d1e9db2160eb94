// Copyright 2026 The molgate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "molgate/model.hpp"

namespace molgate {

/// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitInvalidInput = 2,
  kExitNumerical = 3,
};

struct GridConfig {
  double min_eV = 0.0;
  double max_eV = 0.0;
  std::size_t count = 0;
  std::string spacing = "linear";  ///< "linear" or "log"
  bool refine_poles = false;       ///< add log-spaced points around each resonance
};

struct TwoParticleConfig {
  long C = 0;
  long d = 0;
  std::optional<double> K_eV;  ///< defaults to the Coulomb constant over a
};

struct ChainConfig {
  std::vector<int> dots{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  double kappa_min = 0.05;
  double kappa_max = 3.0;
  std::size_t points = 40;
};

struct SplitterConfig {
  std::optional<long> input_lead;  ///< 1-based; defaults to the last lead
  double reflection_limit = 1e-3;
};

struct HadamardConfig {
  std::string splitter = "ideal";  ///< "ideal" or "molecule"
  double theta = 0.0;              ///< global phase of the ideal splitter
  std::optional<double> splitter_energy_eV;
  std::optional<double> phi;
  std::optional<double> phi_energy_eV;  ///< take phi = arg T from the two-particle problem
  int q = 0;
};

struct OracleChainConfig {
  int G = 5;
  long L = 2000;
  double sigma = 20.0;
  double kappa = 1.0;
  std::vector<double> check_kappas{0.3, 1.0, 2.0};
};

struct OracleMoleculeConfig {
  long L = 2000;
  double sigma = 10.0;
  std::vector<double> kappas;
  long input = 1;       ///< 1-based lead numbers
  long out = 2;
  double x0 = 0.0;       ///< 0 picks L / 4
  double t_final = 0.0;  ///< 0 stops when the packet is half a lead past the molecule
};

struct OracleTwoParticleConfig {
  long C = 500;
  long d = 100;
  std::optional<double> K_eV;
  GridConfig grid{1.0, 20.0, 20, "linear", false};
};

struct OracleConfig {
  std::optional<OracleChainConfig> chain;
  std::optional<OracleMoleculeConfig> molecule;
  std::optional<OracleTwoParticleConfig> two_particle;
};

inline constexpr long kMaxOracleLeadLength = 5000;
inline constexpr long kMaxOracleCutoff = 1000;

/// Parsed sweep configuration. Relative paths inside the file are resolved
/// against the directory holding it.
struct SweepConfig {
  std::filesystem::path base_dir;
  std::optional<std::filesystem::path> molecule;
  std::vector<double> lead_factors;
  LatticeParams lattice = LatticeParams::canonical(0.1);
  std::optional<GridConfig> grid;
  std::optional<TwoParticleConfig> two_particle;
  std::optional<std::filesystem::path> output;
  std::optional<ChainConfig> chain;
  std::optional<SplitterConfig> splitter;
  std::optional<HadamardConfig> hadamard;
  std::optional<OracleConfig> oracle;
};

/// Throws ValidationError on malformed JSON, unknown fields, bad values or
/// references to missing files.
SweepConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir);
SweepConfig load_config(const std::filesystem::path& path);

/// Energy grid described by `grid`, with pole refinement around `poles` when
/// requested.
std::vector<double> build_grid(const GridConfig& grid, const std::vector<double>& poles = {});

/// Entry point of the molgate executable.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace molgate
