// Copyright 2026 The molgate Authors
// SPDX-License-Identifier: Apache-2.0

#include "molgate/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "molgate/errors.hpp"
#include "molgate/units.hpp"

namespace molgate {

std::string_view to_string(Dispersion d) noexcept {
  return d == Dispersion::Cosine ? "cosine" : "quadratic";
}

Dispersion parse_dispersion(std::string_view name) {
  if (name == "quadratic" || name == "Quadratic") return Dispersion::Quadratic;
  if (name == "cosine" || name == "Cosine") return Dispersion::Cosine;
  throw ValidationError("unknown dispersion mode '" + std::string(name) +
                        "' (expected 'quadratic' or 'cosine')");
}

double canonical_beta(double a, double mass) {
  if (!(a > 0.0) || !(mass > 0.0))
    throw ValidationError("canonical_beta requires a > 0 and m > 0");
  return units::kinetic_constant / (mass * a * a);
}

LatticeParams LatticeParams::canonical(double a, double mass, Dispersion dispersion) {
  LatticeParams p;
  p.a = a;
  p.mass = mass;
  p.beta = canonical_beta(a, mass);
  p.dispersion = dispersion;
  return p;
}

double LatticeParams::beta_eff() const {
  return dispersion == Dispersion::Quadratic ? canonical_beta(a, mass) : beta;
}

void LatticeParams::validate() const {
  if (!(a > 0.0)) throw ValidationError("lattice spacing a must be positive");
  if (!(beta > 0.0)) throw ValidationError("lattice hopping beta must be positive");
  if (!(mass > 0.0)) throw ValidationError("particle mass must be positive");
}

Momentum energy_to_momentum(double E_in, const LatticeParams& lattice) {
  lattice.validate();
  if (!(E_in >= 0.0)) throw ValidationError("incoming energy must be non-negative");
  Momentum m;
  if (lattice.dispersion == Dispersion::Quadratic) {
    m.kappa = std::sqrt(E_in / lattice.beta_eff());
  } else {
    if (E_in > 4.0 * lattice.beta)
      throw ValidationError("incoming energy lies above the cosine band (4 beta)");
    m.kappa = std::acos(std::clamp(1.0 - E_in / (2.0 * lattice.beta), -1.0, 1.0));
  }
  m.outside_continuum_regime = m.kappa > kContinuumKappaLimit;
  return m;
}

double momentum_to_energy(double kappa, const LatticeParams& lattice) {
  lattice.validate();
  if (lattice.dispersion == Dispersion::Quadratic) return lattice.beta_eff() * kappa * kappa;
  return 2.0 * lattice.beta * (1.0 - std::cos(kappa));
}

// ---------------------------------------------------------------------------

OccupationVector::OccupationVector(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto b : bits_)
    if (b > 1) throw ValidationError("occupation numbers must be 0 or 1");
}

OccupationVector OccupationVector::parse(std::string_view text) {
  std::vector<std::uint8_t> bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1')
      throw ValidationError("occupation vector '" + std::string(text) +
                            "' contains a character other than 0/1");
    bits.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  if (bits.empty()) throw ValidationError("empty occupation vector");
  return OccupationVector(std::move(bits));
}

int OccupationVector::popcount() const noexcept {
  return static_cast<int>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

int OccupationVector::occupied_before(std::size_t p) const {
  if (p > bits_.size()) throw std::out_of_range("orbital index out of range");
  return static_cast<int>(std::count(bits_.begin(), bits_.begin() + static_cast<long>(p),
                                     std::uint8_t{1}));
}

std::string OccupationVector::to_string() const {
  std::string s(bits_.size(), '0');
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) s[i] = '1';
  return s;
}

double CIState::norm_squared() const {
  double s = 0.0;
  for (const auto& t : terms) s += std::norm(t.coefficient);
  return s;
}

int CIState::electron_count() const {
  return terms.empty() ? -1 : terms.front().occupation.popcount();
}

Eigen::VectorXd MoleculeModel::charged_energies() const {
  Eigen::VectorXd e(static_cast<Eigen::Index>(charged.size()));
  for (std::size_t g = 0; g < charged.size(); ++g) e(static_cast<Eigen::Index>(g)) = charged[g].energy;
  return e;
}

std::size_t LeadConfig::lead_count() const {
  return full_matrix ? static_cast<std::size_t>(full_matrix->rows()) : lead_factors.size();
}

cd LeadConfig::coupling(std::size_t n, std::size_t p, const MoleculeModel& molecule) const {
  if (full_matrix) return (*full_matrix)(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  return lead_factors.at(n) * molecule.orbital_factors.at(p);
}

// ---------------------------------------------------------------------------

namespace {

void check_state(const CIState& s, const std::string& label, std::size_t M, int expected_count,
                 std::vector<Violation>& out) {
  if (s.terms.empty()) {
    out.push_back({"ci.empty", label + " has no CI terms"});
    return;
  }
  if (!std::isfinite(s.energy)) out.push_back({"ci.energy", label + " energy is not finite"});
  if (std::abs(s.norm_squared() - 1.0) > 1e-8) {
    std::ostringstream msg;
    msg << label << " has squared norm " << s.norm_squared() << ", expected 1";
    out.push_back({"ci.norm", msg.str()});
  }
  std::set<OccupationVector> seen;
  bool length_bad = false, count_bad = false, dup = false;
  for (const auto& t : s.terms) {
    if (t.occupation.size() != M) length_bad = true;
    if (t.occupation.popcount() != expected_count) count_bad = true;
    if (!seen.insert(t.occupation).second) dup = true;
  }
  if (length_bad)
    out.push_back({"ci.length", label + " has an occupation vector whose length differs from M"});
  if (count_bad) {
    std::ostringstream msg;
    msg << label << " has an occupation vector whose popcount differs from " << expected_count;
    out.push_back({"ci.popcount", msg.str()});
  }
  if (dup) out.push_back({"ci.duplicate", label + " lists the same occupation vector twice"});
}

}  // namespace

std::vector<Violation> validate_molecule(const MoleculeModel& m) {
  std::vector<Violation> out;
  if (m.orbital_count == 0) out.push_back({"molecule.M", "orbital count M must be positive"});
  const int eta = m.neutral.electron_count();
  check_state(m.neutral, "neutral state", m.orbital_count, eta, out);
  if (m.charged.empty())
    out.push_back({"molecule.charged", "at least one charged state is required"});
  for (std::size_t g = 0; g < m.charged.size(); ++g)
    check_state(m.charged[g], "charged state " + std::to_string(g), m.orbital_count, eta + 1, out);
  for (std::size_t g = 1; g < m.charged.size(); ++g) {
    if (m.charged[g].energy < m.charged[g - 1].energy) {
      out.push_back({"molecule.order", "charged-state energies must be non-decreasing"});
      break;
    }
  }
  if (m.orbital_factors.size() != m.orbital_count)
    out.push_back({"molecule.factors", "orbital_factors must have exactly M entries"});
  for (double v : m.orbital_factors) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      out.push_back({"molecule.factor_sign", "orbital factors must be finite and non-negative"});
      break;
    }
  }
  return out;
}

void require_valid(const MoleculeModel& m) {
  auto v = validate_molecule(m);
  if (v.empty()) return;
  std::string msg = "invalid molecule";
  if (!m.name.empty()) msg += " '" + m.name + "'";
  msg += ":";
  for (const auto& x : v) msg += "\n  [" + x.code + "] " + x.message;
  throw ValidationError(msg);
}

void validate_leads(const LeadConfig& leads, const MoleculeModel& m) {
  if (leads.full_matrix) {
    if (leads.full_matrix->rows() < 1)
      throw ValidationError("lead coupling matrix needs at least one row");
    if (static_cast<std::size_t>(leads.full_matrix->cols()) != m.orbital_count)
      throw ValidationError("lead coupling matrix must have M columns");
    if (!leads.full_matrix->allFinite())
      throw ValidationError("lead coupling matrix has non-finite entries");
    return;
  }
  if (leads.lead_factors.empty()) throw ValidationError("at least one lead is required");
  for (double v : leads.lead_factors)
    if (!std::isfinite(v)) throw ValidationError("lead factors must be finite");
  if (m.orbital_factors.size() != m.orbital_count)
    throw ValidationError("orbital_factors must have exactly M entries");
}

// ---------------------------------------------------------------------------

OrbitalFactor integrate_orbital_factor(const OrbitalGrid& grid, std::size_t p, const Region& region) {
  auto it = grid.orbitals.find(p);
  if (it == grid.orbitals.end() || it->second.empty())
    throw ValidationError("orbital grid has no points for orbital " + std::to_string(p));
  double sum = 0.0;
  for (const auto& pt : it->second) {
    if (pt.density < 0.0) throw ValidationError("orbital densities must be non-negative");
    if (region && !region(pt.position)) continue;
    sum += pt.density * pt.volume;
  }
  OrbitalFactor f;
  f.raw = sum;
  f.value = std::clamp(sum, 0.0, 1.0);
  f.clamped = sum > 1.0;
  return f;
}

}  // namespace molgate
