// Copyright 2026 The molgate Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "helpers.hpp"
#include "molgate/errors.hpp"
#include "molgate/spectrum.hpp"
#include "molgate/units.hpp"
#include "molgate/util.hpp"

using namespace molgate;

TEST_SUITE("spectrum") {

TEST_CASE("phase unwrapping") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const auto u = unwrap_phase({3.0, -3.0, -2.5, nan, -2.0}, PhasePolicy::Strict);
  CHECK(u.phase[0] == 3.0);
  CHECK(u.phase[1] == doctest::Approx(2.0 * units::pi - 3.0));
  CHECK(u.phase[2] == doctest::Approx(2.0 * units::pi - 2.5));
  CHECK(std::isnan(u.phase[3]));
  CHECK(u.phase[4] == doctest::Approx(2.0 * units::pi - 2.0));
  CHECK(u.jumps.empty());

  CHECK_THROWS_AS(unwrap_phase({0.0, 2.0}, PhasePolicy::Strict), PhaseRefinementError);
  const auto f = unwrap_phase({0.0, 2.0, 2.1}, PhasePolicy::Flag);
  CHECK(f.jumps == std::vector<std::size_t>{1});
  CHECK(f.phase[2] == doctest::Approx(2.1));
}

TEST_CASE("grids") {
  const auto g = linear_grid(1.0, 2.0, 5);
  CHECK(g == std::vector<double>{1.0, 1.25, 1.5, 1.75, 2.0});
  const auto l = log_grid(1e-3, 10.0, 5);
  CHECK(l.front() == 1e-3);
  CHECK(l[1] == doctest::Approx(1e-2));
  CHECK(l.back() == 10.0);
  CHECK_THROWS_AS(linear_grid(1.0, 1.0, 3), ValidationError);
  CHECK_THROWS_AS(log_grid(0.0, 1.0, 3), ValidationError);

  const auto p = pole_refined_grid(10.0, 20.0, 11, {13.05});
  CHECK(p.size() > 11);
  for (std::size_t i = 1; i < p.size(); ++i) CHECK(p[i] > p[i - 1]);
  for (double x : p) CHECK(std::abs(x - 13.05) >= 1e-7 * (1 - 1e-6));
  CHECK(std::count_if(p.begin(), p.end(), [](double x) { return std::abs(x - 13.05) < 1e-6; }) >= 2);
}

TEST_CASE("peaks") {
  CHECK(find_peaks({0, 1, 3, 1, 0, 0, 2, 5, 2, 0}) == std::vector<std::size_t>{2, 7});
  CHECK(find_peaks({0, 1, 3, 1, 0, 0, 2, 5, 2, 0}, 2.5) == std::vector<std::size_t>{7});
  CHECK(find_peaks({1, 2, 3, 4}).empty());
  CHECK(refine_peak([](double x) { return -(x - 0.3) * (x - 0.3); }, 0.0, 1.0, 1e-12) ==
        doctest::Approx(0.3).epsilon(1e-9));
}

TEST_CASE("H2 resonant transmission") {
  const Junction j = testing::h2_junction({0.25, 0.25});
  const auto poles = resonance_energies(j);
  REQUIRE(poles.size() == 2);
  CHECK(poles[0] == doctest::Approx(13.05));
  CHECK(poles[1] == doctest::Approx(24.741));
  const auto peaks = transmission_peaks(j, pole_refined_grid(1.0, 40.0, 400, poles), 1, 0, 0.5);
  REQUIRE(peaks.size() == 2);
  for (const auto& pk : peaks) CHECK(pk.value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(peaks[0].E_in - 13.05) < 0.01);
  CHECK(std::abs(peaks[1].E_in - 24.741) < 0.01);
}

TEST_CASE("failed rows are flagged, not fatal") {
  const Junction j = testing::h2_junction({0.25, 0.25});
  const double pole = j.D(0) - j.E0;
  const std::vector<double> grid{12.0, pole, 14.0};
  const SpectrumTable t = spectrum(j, grid, PhasePolicy::Flag);
  CHECK(t.failed_rows() == 1);
  CHECK_FALSE(t.rows[1].ok);
  CHECK_FALSE(t.rows[1].error.empty());
  CHECK(std::isnan(t.column(1, 0)[1]));
  CHECK(t.rows[0].ok);
  CHECK(t.warning_count() >= 1);
  std::ostringstream csv;
  write_spectrum_csv(csv, t);
  CHECK(csv.str().find("nan") != std::string::npos);
}

TEST_CASE("CSV layout and round trip") {
  const Junction j = testing::h2_junction({0.25, 0.25});
  const SpectrumTable t = spectrum(j, linear_grid(2.0, 10.0, 9));
  std::ostringstream os;
  write_spectrum_csv(os, t);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  const auto header = split_csv_line(line);
  REQUIRE(header.size() == 1 + 8 + 4 + 4);
  CHECK(header[0] == "E_in_eV");
  CHECK(header[1] == "S_re[1][1]");
  CHECK(header[4] == "S_im[1][2]");
  CHECK(header[9] == "T2[1][1]");
  CHECK(header[16] == "argS[2][2]");
  std::size_t row = 0;
  while (std::getline(is, line)) {
    const auto cells = split_csv_line(line);
    const auto& r = t.rows[row++];
    CHECK(parse_number(cells[0]) == doctest::Approx(r.E_in).epsilon(1e-12));
    CHECK(parse_number(cells[3]) == doctest::Approx(r.S(0, 1).real()).epsilon(1e-11).scale(1e-12));
    CHECK(parse_number(cells[11]) == doctest::Approx(r.T2(1, 0)).epsilon(1e-11).scale(1e-12));
  }
  CHECK(row == t.rows.size());
}

TEST_CASE("results do not depend on the thread count") {
  const Junction j = testing::h2_junction({0.25, 0.3, 0.2});
  const auto grid = pole_refined_grid(1.0, 40.0, 300, resonance_energies(j));
  std::ostringstream a, b;
  write_spectrum_csv(a, spectrum(j, grid, PhasePolicy::Flag, 1));
  write_spectrum_csv(b, spectrum(j, grid, PhasePolicy::Flag, 4));
  CHECK(a.str() == b.str());
}

TEST_CASE("strict phase policy on a coarse grid") {
  const Junction j = testing::h2_junction({0.25, 0.25});
  CHECK_THROWS_AS(spectrum(j, linear_grid(12.0, 14.0, 3), PhasePolicy::Strict), PhaseRefinementError);
  const auto t = spectrum(j, linear_grid(12.0, 14.0, 3), PhasePolicy::Flag);
  CHECK_FALSE(t.phase_warnings.empty());
}

TEST_CASE("splitter candidates") {
  const double VR = 0.25;
  const Junction j = testing::h2_junction({VR, VR, std::sqrt(2.0) * VR});
  const auto c = splitter_candidates(j, pole_refined_grid(1.0, 40.0, 400, resonance_energies(j)), 2);
  REQUIRE_FALSE(c.empty());
  CHECK(c.front().reflection < 1e-10);
  CHECK(c.front().T2(0) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(c.front().T2(1) == doctest::Approx(0.5).epsilon(1e-6));
  for (std::size_t i = 1; i < c.size(); ++i) CHECK(c[i].reflection >= c[i - 1].reflection);
  CHECK_THROWS_AS(splitter_candidates(j, linear_grid(1.0, 2.0, 3), 3), ValidationError);
}

}  // TEST_SUITE
