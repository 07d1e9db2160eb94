// Copyright 2026 The molgate Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <string>

#include "helpers.hpp"
#include "molgate/errors.hpp"
#include "molgate/molecule_io.hpp"

using namespace molgate;

namespace {

std::string with_factors(const std::string& extra) {
  return R"({"name": "toy", "M": 2,
    "neutral": {"energy_eV": -1.0, "terms": [{"occ": "10", "re": 1.0}]},
    "charged": [{"energy_eV": 2.0, "terms": [{"occ": "11", "re": 0.0, "im": 1.0}]}])" +
         extra + "}";
}

std::string error_of(const std::string& text) {
  try {
    parse_molecule(text);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("molecule_io") {

TEST_CASE("bundled H2 dataset") {
  const MoleculeModel m = testing::h2();
  CHECK(m.name == "H2 STO-3G");
  CHECK(m.orbital_count == 4);
  CHECK(m.neutral.energy == -30.91);
  REQUIRE(m.neutral.terms.size() == 2);
  CHECK(m.neutral.terms[0].occupation.to_string() == "1100");
  CHECK(m.neutral.terms[0].coefficient.real() == doctest::Approx(-0.99).epsilon(0.01));
  CHECK(m.neutral.terms[1].coefficient.real() == doctest::Approx(0.11).epsilon(0.01));
  CHECK(m.neutral.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
  // Published ratio -0.99 : 0.11 is kept exactly.
  CHECK(m.neutral.terms[0].coefficient.real() / m.neutral.terms[1].coefficient.real() ==
        doctest::Approx(-9.0).epsilon(1e-12));
  REQUIRE(m.charged.size() == 4);
  CHECK(m.charged[0].energy == -17.86);
  CHECK(m.charged[1].energy == -17.86);
  CHECK(m.charged[2].energy == -6.169);
  CHECK(m.charged[3].energy == -6.169);
  CHECK(m.charged[0].terms[0].occupation.to_string() == "1110");
  CHECK(m.charged[3].terms[0].occupation.to_string() == "0111");
  CHECK(m.orbital_factors == std::vector<double>{0.25, 0.25, 0.39, 0.39});
  CHECK_FALSE(m.notes.empty());
}

TEST_CASE("write then parse reproduces the model") {
  const MoleculeModel m = testing::h2();
  const MoleculeModel back = parse_molecule(molecule_to_json(m));
  CHECK(back.name == m.name);
  CHECK(back.orbital_count == m.orbital_count);
  CHECK(back.neutral.energy == m.neutral.energy);
  REQUIRE(back.charged.size() == m.charged.size());
  for (std::size_t g = 0; g < m.charged.size(); ++g) {
    CHECK(back.charged[g].energy == m.charged[g].energy);
    CHECK(back.charged[g].terms[0].occupation == m.charged[g].terms[0].occupation);
  }
  for (std::size_t i = 0; i < m.neutral.terms.size(); ++i)
    CHECK(back.neutral.terms[i].coefficient == m.neutral.terms[i].coefficient);
  CHECK(back.orbital_factors == m.orbital_factors);
}

TEST_CASE("complex coefficients and factors") {
  const MoleculeModel m = parse_molecule(with_factors(R"(, "orbital_factors": [0.5, 0.25])"));
  CHECK(m.charged[0].terms[0].coefficient == cd(0.0, 1.0));
}

TEST_CASE("unknown fields are named in the error") {
  CHECK(error_of(with_factors(R"(, "orbital_factors": [0.5, 0.25], "spin": 1)")).find("'spin'") !=
        std::string::npos);
  const std::string bad_term = R"({"name": "toy", "M": 2,
    "neutral": {"energy_eV": -1.0, "terms": [{"occ": "10", "re": 1.0, "phase": 0}]},
    "charged": [{"energy_eV": 2.0, "terms": [{"occ": "11", "re": 1.0}]}], "orbital_factors": [1, 1]})";
  CHECK(error_of(bad_term).find("'phase'") != std::string::npos);
}

TEST_CASE("factor source must be unique") {
  CHECK_FALSE(error_of(with_factors("")).empty());
  CHECK_FALSE(error_of(with_factors(R"(, "orbital_factors": [1, 1], "orbital_grid": {"orbitals": []})")).empty());
}

TEST_CASE("invalid content is rejected") {
  CHECK_FALSE(error_of("{not json").empty());
  CHECK_FALSE(error_of(with_factors(R"(, "orbital_factors": [0.5])")).empty());
  CHECK_FALSE(error_of(with_factors(R"(, "orbital_factors": ["x", 1])")).empty());
  CHECK_THROWS_AS(read_molecule(testing::data_dir() / "no_such_file.json"), ValidationError);
}

TEST_CASE("orbital factors from a grid with a half-space region") {
  const std::string grid = R"(, "orbital_grid": {
      "region": {"half_space": {"point": [0, 0, 1], "normal": [0, 0, 1]}},
      "orbitals": [
        {"orbital": 0, "points": [[0, 0, 0, 0.5, 1.0], [0, 0, 2, 0.25, 1.0]]},
        {"orbital": 1, "points": [[0, 0, 3, 0.1, 2.0], [0, 0, -3, 0.4, 1.0]]}
      ]})";
  const MoleculeModel m = parse_molecule(with_factors(grid));
  CHECK(m.orbital_factors[0] == doctest::Approx(0.25));
  CHECK(m.orbital_factors[1] == doctest::Approx(0.2));

  const std::string bad_row = R"(, "orbital_grid": {"orbitals": [{"orbital": 0, "points": [[0, 0, 0, 1]]}]})";
  CHECK_FALSE(error_of(with_factors(bad_row)).empty());
}

}  // TEST_SUITE
