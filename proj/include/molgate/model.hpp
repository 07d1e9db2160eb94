// Copyright 2026 The molgate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace molgate {

using cd = std::complex<double>;

// ---------------------------------------------------------------------------
// Lattice
// ---------------------------------------------------------------------------

enum class Dispersion {
  /// Lead kinetic energy p^2/2m; the boundary term uses hbar^2/(2 m a^2).
  Quadratic,
  /// Exact tight-binding band 2*beta*(1 - cos(kappa)).
  Cosine,
};

std::string_view to_string(Dispersion d) noexcept;
Dispersion parse_dispersion(std::string_view name);

/// Quantum-dot chain used to discretize every lead.
struct LatticeParams {
  double a = 0.1;       ///< dot spacing, Angstrom
  double beta = 0.0;    ///< nearest-neighbour hopping, eV
  double mass = 1.0;    ///< particle mass, electron masses
  Dispersion dispersion = Dispersion::Quadratic;

  /// Lattice with beta = hbar^2 / (2 m a^2), which makes the band match a
  /// free particle at small momentum.
  static LatticeParams canonical(double a, double mass = 1.0,
                                 Dispersion dispersion = Dispersion::Quadratic);

  /// Hopping entering the boundary condition of the scattering equations:
  /// hbar^2/(2 m a^2) in Quadratic mode and beta in Cosine mode.
  double beta_eff() const;

  /// Throws ValidationError unless a, beta and mass are positive.
  void validate() const;
};

/// hbar^2 / (2 m a^2) in eV for spacing `a` (Angstrom) and mass `mass` (m_e).
double canonical_beta(double a, double mass = 1.0);

/// Phase per site above which the lattice no longer mimics a free particle.
inline constexpr double kContinuumKappaLimit = 0.3;

struct Momentum {
  double kappa = 0.0;  ///< p * a / hbar
  /// Set when kappa exceeds kContinuumKappaLimit.
  bool outside_continuum_regime = false;
};

/// Dimensionless lattice momentum of an electron with kinetic energy E_in.
/// Cosine mode requires 0 <= E_in <= 4 beta.
Momentum energy_to_momentum(double E_in, const LatticeParams& lattice);

/// Inverse of energy_to_momentum.
double momentum_to_energy(double kappa, const LatticeParams& lattice);

// ---------------------------------------------------------------------------
// Molecule
// ---------------------------------------------------------------------------

/// Slater-determinant occupation pattern. Index 0 is the leftmost character
/// of the string form, e.g. "1100" occupies orbitals 0 and 1.
class OccupationVector {
 public:
  OccupationVector() = default;
  explicit OccupationVector(std::vector<std::uint8_t> bits);

  /// Parses a string of '0'/'1' characters; throws ValidationError otherwise.
  static OccupationVector parse(std::string_view text);

  std::size_t size() const noexcept { return bits_.size(); }
  bool occupied(std::size_t p) const { return bits_.at(p) != 0; }
  int popcount() const noexcept;
  /// Number of occupied orbitals with index strictly below p.
  int occupied_before(std::size_t p) const;
  std::string to_string() const;

  friend bool operator==(const OccupationVector&, const OccupationVector&) = default;
  friend auto operator<=>(const OccupationVector&, const OccupationVector&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

struct CITerm {
  OccupationVector occupation;
  cd coefficient;
};

/// Molecular eigenstate expanded over occupation vectors.
struct CIState {
  std::vector<CITerm> terms;
  double energy = 0.0;  ///< eV

  double norm_squared() const;
  /// Popcount of the first term, or -1 for an empty expansion.
  int electron_count() const;
};

struct MoleculeModel {
  std::string name;
  std::size_t orbital_count = 0;
  CIState neutral;               ///< ground state with eta electrons
  std::vector<CIState> charged;  ///< eta+1 electron states, sorted by energy
  std::vector<double> orbital_factors;  ///< V_p, one per orbital
  std::string notes;

  std::size_t charged_count() const noexcept { return charged.size(); }
  Eigen::VectorXd charged_energies() const;
};

/// Couplings between lead n and orbital p. With only `lead_factors` set the
/// coupling is separable, V_{n,p} = V_n * V_p.
struct LeadConfig {
  std::vector<double> lead_factors;
  std::optional<Eigen::MatrixXcd> full_matrix;  ///< N x M, overrides separable form

  std::size_t lead_count() const;
  /// V_{n,p} for this lead configuration and molecule.
  cd coupling(std::size_t n, std::size_t p, const MoleculeModel& molecule) const;
};

struct Violation {
  std::string code;  ///< machine-readable, e.g. "ci.norm"
  std::string message;
};

/// Every invariant violation of the molecule; empty means solver-ready.
std::vector<Violation> validate_molecule(const MoleculeModel& molecule);

/// Throws ValidationError listing all violations, if any.
void require_valid(const MoleculeModel& molecule);

/// Throws ValidationError if the leads do not fit the molecule.
void validate_leads(const LeadConfig& leads, const MoleculeModel& molecule);

// ---------------------------------------------------------------------------
// Orbital densities on a grid
// ---------------------------------------------------------------------------

struct GridPoint {
  std::array<double, 3> position{};  ///< Angstrom
  double density = 0.0;              ///< |chi_p|^2, Angstrom^-3
  double volume = 0.0;               ///< voxel volume, Angstrom^3
};

struct OrbitalGrid {
  std::map<std::size_t, std::vector<GridPoint>> orbitals;
};

struct OrbitalFactor {
  double value = 0.0;
  bool clamped = false;  ///< the raw integral exceeded 1 and was clamped
  double raw = 0.0;
};

using Region = std::function<bool(const std::array<double, 3>&)>;

/// V_p as the orbital density integrated over the grid points of orbital p
/// (restricted to `region` when given).
OrbitalFactor integrate_orbital_factor(const OrbitalGrid& grid, std::size_t p,
                                       const Region& region = {});

}  // namespace molgate
