// Copyright 2026 The molgate Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "helpers.hpp"
#include "molgate/errors.hpp"
#include "molgate/model.hpp"
#include "molgate/units.hpp"

using namespace molgate;

TEST_SUITE("model") {

TEST_CASE("canonical hopping follows hbar^2 / 2 m a^2") {
  CHECK(canonical_beta(1.0, 1.0) == doctest::Approx(3.80998).epsilon(1e-6));
  CHECK(canonical_beta(0.1, 1.0) == doctest::Approx(380.998).epsilon(1e-6));
  CHECK(canonical_beta(1.0, 2.0) == doctest::Approx(0.5 * canonical_beta(1.0, 1.0)).epsilon(1e-15));
  CHECK_THROWS_AS(canonical_beta(0.0, 1.0), ValidationError);
  CHECK_THROWS_AS(canonical_beta(1.0, -1.0), ValidationError);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.01, 5.0);
  for (int i = 0; i < 100; ++i) {
    const double a = u(rng), m = u(rng);
    CHECK(canonical_beta(a, m) * a * a * m == doctest::Approx(units::kinetic_constant).epsilon(1e-13));
  }
}

TEST_CASE("energy to momentum, quadratic mode") {
  const auto lat1 = LatticeParams::canonical(1.0);
  CHECK(energy_to_momentum(0.0, lat1).kappa == 0.0);
  const Momentum m = energy_to_momentum(3.80998, lat1);
  CHECK(m.kappa == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m.outside_continuum_regime);

  const Momentum h = energy_to_momentum(13.05, LatticeParams::canonical(0.1));
  CHECK(h.kappa == doctest::Approx(0.1 * std::sqrt(13.05 / 3.80998)).epsilon(1e-12));
  CHECK(h.kappa == doctest::Approx(0.1851).epsilon(1e-3));
  CHECK_FALSE(h.outside_continuum_regime);
  CHECK_THROWS_AS(energy_to_momentum(-1.0, lat1), ValidationError);
}

TEST_CASE("energy to momentum, cosine mode") {
  LatticeParams lat = LatticeParams::canonical(1.0, 1.0, Dispersion::Cosine);
  const double b = lat.beta;
  CHECK(energy_to_momentum(2.0 * b, lat).kappa == doctest::Approx(units::pi / 2).epsilon(1e-14));
  CHECK(energy_to_momentum(4.0 * b, lat).kappa == doctest::Approx(units::pi).epsilon(1e-14));
  CHECK_THROWS_AS(energy_to_momentum(4.0 * b + 1e-9, lat), ValidationError);
  lat.beta = 2.0;
  CHECK(lat.beta_eff() == 2.0);
}

TEST_CASE("momentum round trip in both modes") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> k(1e-4, 3.0);
  for (auto d : {Dispersion::Quadratic, Dispersion::Cosine}) {
    const auto lat = LatticeParams::canonical(0.3, 1.0, d);
    for (int i = 0; i < 200; ++i) {
      const double kappa = k(rng);
      const double E = momentum_to_energy(kappa, lat);
      CHECK(energy_to_momentum(E, lat).kappa == doctest::Approx(kappa).epsilon(1e-12));
      CHECK(momentum_to_energy(energy_to_momentum(E, lat).kappa, lat) == doctest::Approx(E).epsilon(1e-12));
    }
  }
}

TEST_CASE("cosine and quadratic momenta agree to first order") {
  const auto quad = LatticeParams::canonical(0.1, 1.0, Dispersion::Quadratic);
  const auto cosl = LatticeParams::canonical(0.1, 1.0, Dispersion::Cosine);
  for (double kq = 0.005; kq < 0.2; kq += 0.005) {
    const double E = momentum_to_energy(kq, quad);
    const double kc = energy_to_momentum(E, cosl).kappa;
    CHECK(std::abs(kc - kq) / kq < kq * kq / 4.0);
  }
}

TEST_CASE("dispersion names") {
  CHECK(parse_dispersion("cosine") == Dispersion::Cosine);
  CHECK(parse_dispersion("quadratic") == Dispersion::Quadratic);
  CHECK(to_string(Dispersion::Cosine) == "cosine");
  CHECK_THROWS_AS(parse_dispersion("parabolic"), ValidationError);
}

TEST_CASE("occupation vectors") {
  const auto v = OccupationVector::parse("1100");
  CHECK(v.size() == 4);
  CHECK(v.popcount() == 2);
  CHECK(v.occupied(0));
  CHECK_FALSE(v.occupied(2));
  CHECK(v.occupied_before(2) == 2);
  CHECK(v.occupied_before(0) == 0);
  CHECK(v.to_string() == "1100");
  CHECK(OccupationVector::parse("0011") != v);
  CHECK_THROWS_AS(OccupationVector::parse("1120"), ValidationError);
  CHECK_THROWS_AS(OccupationVector::parse(""), ValidationError);
}

TEST_CASE("molecule validation") {
  const MoleculeModel good = testing::h2();
  CHECK(validate_molecule(good).empty());

  auto codes = [](const MoleculeModel& m) {
    std::vector<std::string> c;
    for (const auto& v : validate_molecule(m)) c.push_back(v.code);
    return c;
  };

  MoleculeModel m = good;
  m.neutral.terms = {{OccupationVector::parse("1100"), std::sqrt(0.5)}};
  CHECK(codes(m) == std::vector<std::string>{"ci.norm"});

  m = good;
  m.charged[2].terms = {{OccupationVector::parse("1111"), 1.0}};
  CHECK(codes(m) == std::vector<std::string>{"ci.popcount"});

  m = good;
  m.charged[0].terms.push_back(m.charged[0].terms[0]);
  m.charged[0].terms[0].coefficient = m.charged[0].terms[1].coefficient = std::sqrt(0.5);
  CHECK(codes(m) == std::vector<std::string>{"ci.duplicate"});

  m = good;
  std::swap(m.charged[0], m.charged[3]);
  CHECK(codes(m) == std::vector<std::string>{"molecule.order"});

  m = good;
  m.orbital_factors[1] = -0.1;
  CHECK(codes(m) == std::vector<std::string>{"molecule.factor_sign"});

  m = good;
  m.orbital_factors.pop_back();
  CHECK(codes(m) == std::vector<std::string>{"molecule.factors"});

  m = good;
  m.charged.clear();
  CHECK(codes(m) == std::vector<std::string>{"molecule.charged"});

  CHECK_THROWS_AS(require_valid(m), ValidationError);
}

TEST_CASE("lead couplings are separable") {
  const MoleculeModel m = testing::h2();
  LeadConfig leads;
  leads.lead_factors = {0.5, 2.0};
  CHECK(leads.lead_count() == 2);
  CHECK(leads.coupling(1, 2, m) == cd(2.0 * 0.39));
  Eigen::MatrixXcd full = Eigen::MatrixXcd::Constant(3, 4, cd(0.0, 1.0));
  leads.full_matrix = full;
  CHECK(leads.lead_count() == 3);
  CHECK(leads.coupling(2, 3, m) == cd(0.0, 1.0));
  leads.full_matrix = Eigen::MatrixXcd::Zero(3, 5);
  CHECK_THROWS_AS(validate_leads(leads, m), ValidationError);
}

TEST_CASE("orbital factor integration basics") {
  OrbitalGrid g;
  g.orbitals[0] = {{{0, 0, 0}, 0.0, 1.0}, {{1, 0, 0}, 0.0, 1.0}};
  CHECK(integrate_orbital_factor(g, 0).value == 0.0);
  CHECK_THROWS_AS(integrate_orbital_factor(g, 1), ValidationError);

  g.orbitals[1] = {{{0, 0, 0}, 0.7, 1.0}, {{0, 0, 2}, 0.6, 1.0}};
  const OrbitalFactor all = integrate_orbital_factor(g, 1);
  CHECK(all.value == 1.0);
  CHECK(all.clamped);
  CHECK(all.raw == doctest::Approx(1.3));
  const OrbitalFactor upper =
      integrate_orbital_factor(g, 1, [](const std::array<double, 3>& r) { return r[2] > 1.0; });
  CHECK(upper.value == doctest::Approx(0.6));
  CHECK_FALSE(upper.clamped);

  g.orbitals[2] = {{{0, 0, 0}, -0.1, 1.0}};
  CHECK_THROWS_AS(integrate_orbital_factor(g, 2), ValidationError);
}

namespace {

// STO-3G hydrogen 1s contraction (exponents in bohr^-2, already scaled).
constexpr std::array<double, 3> kAlpha{3.42525091, 0.62391373, 0.16885540};
constexpr std::array<double, 3> kCoef{0.15432897, 0.53532814, 0.44463454};

double sto3g(double r2) {
  double v = 0.0;
  for (int i = 0; i < 3; ++i)
    v += kCoef[i] * std::pow(2.0 * kAlpha[i] / units::pi, 0.75) * std::exp(-kAlpha[i] * r2);
  return v;
}

double sto3g_overlap(double R) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double a = kAlpha[i], b = kAlpha[j];
      s += kCoef[i] * kCoef[j] * std::pow(2.0 * a / units::pi, 0.75) * std::pow(2.0 * b / units::pi, 0.75) *
           std::pow(units::pi / (a + b), 1.5) * std::exp(-a * b * R * R / (a + b));
    }
  return s;
}

}  // namespace

TEST_CASE("H2 orbital factors from a density grid") {
  // Bond length 0.7414 A; the region is the half-space beyond the plane
  // through one proton, perpendicular to the bond.
  const double b = units::bohr_radius;
  const double R = 0.7414 / b;
  const double S = sto3g_overlap(R);
  CHECK(S == doctest::Approx(0.659).epsilon(2e-3));

  const double h = 0.12, zp = R / 2;
  const int nxy = 42;
  OrbitalGrid grid;
  for (int ix = -nxy; ix < nxy; ++ix)
    for (int iy = -nxy; iy < nxy; ++iy)
      for (int iz = -8; iz < 56; ++iz) {
        const double x = (ix + 0.5) * h, y = (iy + 0.5) * h, z = zp + (iz + 0.5) * h;
        const double rho2 = x * x + y * y;
        const double fa = sto3g(rho2 + (z - zp) * (z - zp)), fb = sto3g(rho2 + (z + zp) * (z + zp));
        const double g = (fa + fb) / std::sqrt(2.0 * (1.0 + S));
        const double u = (fa - fb) / std::sqrt(2.0 * (1.0 - S));
        const std::array<double, 3> pos{x * b, y * b, z * b};
        const double vol = h * h * h * b * b * b;
        grid.orbitals[0].push_back({pos, g * g / (b * b * b), vol});
        grid.orbitals[2].push_back({pos, u * u / (b * b * b), vol});
      }
  const double plane = zp * b;
  const Region beyond = [plane](const std::array<double, 3>& r) { return r[2] > plane; };
  const double Vg = integrate_orbital_factor(grid, 0, beyond).value;
  const double Vu = integrate_orbital_factor(grid, 2, beyond).value;
  CHECK(Vg == doctest::Approx(0.25).epsilon(0.04));
  CHECK(Vu == doctest::Approx(0.39).epsilon(0.03));
  CHECK(std::abs(Vg - 0.247) < 5e-3);
  CHECK(std::abs(Vu - 0.390) < 5e-3);
}

}  // TEST_SUITE
