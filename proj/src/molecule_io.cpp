// Copyright 2026 The molgate Authors
// SPDX-License-Identifier: Apache-2.0

#include "molgate/molecule_io.hpp"

#include <fstream>
#include <sstream>

#include "json_util.hpp"

namespace molgate {

using detail::json;

namespace {

CIState parse_state(const json& j, const std::string& where) {
  detail::require_object(j, where);
  detail::reject_unknown(j, {"energy_eV", "terms", "label"}, where);
  CIState s;
  s.energy = detail::number(j, "energy_eV", where);
  const json& terms = detail::field(j, "terms", where);
  if (!terms.is_array()) throw ValidationError("'terms' in " + where + " must be an array");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string tw = where + ".terms[" + std::to_string(i) + "]";
    const json& t = terms[i];
    detail::require_object(t, tw);
    detail::reject_unknown(t, {"occ", "re", "im"}, tw);
    CITerm term;
    term.occupation = OccupationVector::parse(detail::string(t, "occ", tw));
    term.coefficient = {detail::number(t, "re", tw), detail::number_or(t, "im", 0.0, tw)};
    s.terms.push_back(std::move(term));
  }
  return s;
}

std::vector<double> factors_from_grid(const json& j, std::size_t M) {
  const std::string where = "orbital_grid";
  detail::require_object(j, where);
  detail::reject_unknown(j, {"region", "orbitals"}, where);

  Region region;
  if (j.contains("region")) {
    const json& r = j["region"];
    detail::require_object(r, "orbital_grid.region");
    detail::reject_unknown(r, {"half_space"}, "orbital_grid.region");
    const json& hs = detail::field(r, "half_space", "orbital_grid.region");
    detail::reject_unknown(hs, {"point", "normal"}, "orbital_grid.region.half_space");
    auto point = detail::field(hs, "point", "half_space").get<std::array<double, 3>>();
    auto normal = detail::field(hs, "normal", "half_space").get<std::array<double, 3>>();
    region = [point, normal](const std::array<double, 3>& x) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += (x[k] - point[k]) * normal[k];
      return s >= 0.0;
    };
  }

  OrbitalGrid grid;
  const json& orbitals = detail::field(j, "orbitals", where);
  if (!orbitals.is_array()) throw ValidationError("orbital_grid.orbitals must be an array");
  for (const json& o : orbitals) {
    detail::reject_unknown(o, {"orbital", "points"}, "orbital_grid.orbitals[]");
    auto p = static_cast<std::size_t>(detail::integer(o, "orbital", "orbital_grid.orbitals[]"));
    auto& pts = grid.orbitals[p];
    for (const json& row : detail::field(o, "points", "orbital_grid.orbitals[]")) {
      auto v = row.get<std::vector<double>>();
      if (v.size() != 5)
        throw ValidationError("orbital grid points are [x, y, z, density, volume]");
      pts.push_back({{v[0], v[1], v[2]}, v[3], v[4]});
    }
  }
  std::vector<double> factors(M);
  for (std::size_t p = 0; p < M; ++p) factors[p] = integrate_orbital_factor(grid, p, region).value;
  return factors;
}

json state_to_json(const CIState& s) {
  json terms = json::array();
  for (const auto& t : s.terms)
    terms.push_back({{"occ", t.occupation.to_string()},
                     {"re", t.coefficient.real()},
                     {"im", t.coefficient.imag()}});
  return {{"energy_eV", s.energy}, {"terms", terms}};
}

}  // namespace

static MoleculeModel parse_molecule_checked(const std::string& text) {
  const json j = detail::parse_json(text, "molecule file");
  const std::string where = "molecule";
  detail::require_object(j, where);
  detail::reject_unknown(j, {"name", "M", "neutral", "charged", "orbital_factors", "orbital_grid",
                             "notes"},
                         where);
  MoleculeModel m;
  m.name = detail::string(j, "name", where);
  const long M = detail::integer(j, "M", where);
  if (M <= 0) throw ValidationError("M must be positive");
  m.orbital_count = static_cast<std::size_t>(M);
  m.neutral = parse_state(detail::field(j, "neutral", where), "neutral");
  const json& charged = detail::field(j, "charged", where);
  if (!charged.is_array()) throw ValidationError("'charged' must be an array");
  for (std::size_t g = 0; g < charged.size(); ++g)
    m.charged.push_back(parse_state(charged[g], "charged[" + std::to_string(g) + "]"));

  const bool has_factors = j.contains("orbital_factors");
  const bool has_grid = j.contains("orbital_grid");
  if (has_factors == has_grid)
    throw ValidationError("exactly one of 'orbital_factors' and 'orbital_grid' must be given");
  if (has_factors) {
    const json& f = j["orbital_factors"];
    if (!f.is_array()) throw ValidationError("'orbital_factors' must be an array");
    for (const json& v : f) {
      if (!v.is_number()) throw ValidationError("'orbital_factors' entries must be numbers");
      m.orbital_factors.push_back(v.get<double>());
    }
  } else {
    m.orbital_factors = factors_from_grid(j["orbital_grid"], m.orbital_count);
  }
  if (j.contains("notes")) {
    const json& n = j["notes"];
    if (n.is_string()) {
      m.notes = n.get<std::string>();
    } else if (n.is_array()) {
      for (const json& line : n) m.notes += line.get<std::string>() + "\n";
    } else {
      throw ValidationError("'notes' must be a string or an array of strings");
    }
  }
  require_valid(m);
  return m;
}

MoleculeModel parse_molecule(const std::string& text) {
  try {
    return parse_molecule_checked(text);
  } catch (const detail::json::exception& e) {
    throw ValidationError(std::string("molecule file: ") + e.what());
  }
}

MoleculeModel read_molecule(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open molecule file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_molecule(ss.str());
}

std::string molecule_to_json(const MoleculeModel& m) {
  json charged = json::array();
  for (const auto& s : m.charged) charged.push_back(state_to_json(s));
  json j = {{"name", m.name},
            {"M", m.orbital_count},
            {"neutral", state_to_json(m.neutral)},
            {"charged", charged},
            {"orbital_factors", m.orbital_factors}};
  if (!m.notes.empty()) j["notes"] = m.notes;
  return j.dump(2);
}

}  // namespace molgate
