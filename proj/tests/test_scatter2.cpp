// Copyright 2026 The molgate Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/LU>

#include "molgate/errors.hpp"
#include "molgate/oracle.hpp"
#include "molgate/scatter2.hpp"
#include "molgate/units.hpp"

using namespace molgate;

namespace {

const LatticeParams kLat = LatticeParams::canonical(0.1);

TwoParticleProblem problem(double E, long C, long d, std::optional<double> K = std::nullopt) {
  auto p = TwoParticleProblem::equal_energy(E, C, d, kLat);
  if (K) p.K = *K;
  return p;
}

}  // namespace

TEST_SUITE("scatter2") {

TEST_CASE("Coulomb potential") {
  CHECK(coulomb_potential(0, 1000, units::coulomb_constant / 0.1, 10000) ==
        doctest::Approx(0.1439964).epsilon(1e-9));
  CHECK(coulomb_potential(0, 1, 2.0, 5) == 2.0);
  CHECK(coulomb_potential(3, 4, 10.0, 5) == doctest::Approx(2.0));
  CHECK(coulomb_potential(-3, 4, 10.0, 5) == doctest::Approx(2.0));
  CHECK(coulomb_potential(6, 4, 10.0, 5) == 0.0);
  CHECK(coulomb_potential(5, 4, 0.0, 5) == 0.0);
  CHECK_THROWS_AS(coulomb_potential(0, 0, 1.0, 5), ValidationError);
}

TEST_CASE("momentum transform") {
  const auto [p1, p2] = momentum_transform(0.3, -0.3);
  CHECK(p1 == 0.0);
  CHECK(p2 == doctest::Approx(0.3));
  const auto [q1, q2] = momentum_transform(0.5, 0.1);
  CHECK(q1 == doctest::Approx(0.6));
  CHECK(q2 == doctest::Approx(0.2));
}

TEST_CASE("equal-energy convention") {
  const auto p = problem(5.0, 10, 3);
  CHECK(p.p1_kappa == 0.0);
  CHECK(p.p2_kappa == doctest::Approx(-energy_to_momentum(5.0, kLat).kappa));
  CHECK(p.K == doctest::Approx(143.9964));
  CHECK(p.hopping() == doctest::Approx(2.0 * kLat.beta_eff()));
  CHECK(p.eigen_term() == doctest::Approx(4.0 * kLat.beta_eff() * std::cos(p.p2_kappa)));
  auto bad = p;
  bad.p2_kappa = 0.1;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = p;
  bad.C = 0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("smallest cutoff gives a 3 x 3 system") {
  const auto s = assemble_system(problem(3.0, 1, 2));
  CHECK(s.size() == 3);
  CHECK(s.sub.size() == 2);
  CHECK(s.sup.size() == 2);
  const auto sol = solve_two_particle(problem(3.0, 1, 2));
  CHECK(sol.f.size() == 1);
  CHECK(sol.flux_defect < 1e-12);
}

TEST_CASE("no interaction transmits a plane wave") {
  for (long C : {1L, 5L, 200L}) {
    const auto p = problem(4.0, C, 10, 0.0);
    const auto sol = solve_two_particle(p);
    CHECK(std::abs(sol.T - 1.0) < 1e-12);
    CHECK(std::abs(sol.R) < 1e-12);
    for (long r = -C + 1; r <= C - 1; ++r)
      CHECK(std::abs(sol.f_at(r, C) - std::polar(1.0, -p.p2_kappa * r)) < 1e-10);
  }
}

TEST_CASE("tridiagonal solver matches dense LU") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m = 1 + static_cast<std::size_t>(trial) * 3;
    TridiagonalSystem s;
    for (std::size_t i = 0; i < m; ++i) {
      s.diag.emplace_back(n(rng), n(rng));
      s.rhs.emplace_back(n(rng), n(rng));
      if (i + 1 < m) {
        s.sub.emplace_back(n(rng), n(rng));
        s.sup.emplace_back(n(rng), n(rng));
      }
    }
    // Small diagonals force pivoting.
    if (m > 3) s.diag[1] = 1e-14;
    const auto x = solve_tridiagonal(s);
    Eigen::VectorXcd b(static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) b(static_cast<Eigen::Index>(i)) = s.rhs[i];
    const Eigen::VectorXcd ref = s.dense().partialPivLu().solve(b);
    for (std::size_t i = 0; i < m; ++i)
      CHECK(std::abs(x[i] - ref(static_cast<Eigen::Index>(i))) < 1e-8 * (1.0 + ref.cwiseAbs().maxCoeff()));
  }
  TridiagonalSystem singular;
  singular.diag = {1.0, 1.0};
  singular.sub = {1.0};
  singular.sup = {1.0};
  singular.rhs = {1.0, 2.0};
  CHECK_THROWS_AS(solve_tridiagonal(singular), SingularSystemError);
}

TEST_CASE("flux is conserved") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> e(0.001, 30.0);
  std::uniform_int_distribution<long> c(1, 3000), d(1, 5000);
  for (int i = 0; i < 40; ++i) {
    const auto sol = solve_two_particle(problem(e(rng), c(rng), d(rng)));
    CHECK(sol.flux_defect < 1e-10);
    CHECK(sol.residual < 1e-12);
  }
}

TEST_CASE("agrees with the transfer-matrix solution") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> e(0.01, 30.0);
  std::uniform_int_distribution<long> c(1, 1000), d(1, 2000);
  for (int i = 0; i < 40; ++i) {
    const auto p = problem(e(rng), c(rng), d(rng));
    const auto a = solve_two_particle(p);
    const auto b = transfer_matrix_two_particle(p);
    CHECK(std::abs(a.T - b.T) < 1e-8);
    CHECK(std::abs(a.R - b.R) < 1e-8);
  }
}

TEST_CASE("phase shrinks as the leads move apart") {
  // Continued from the far end, where the phase is small.
  auto ds = log_grid(100.0, 10000.0, 120);
  std::reverse(ds.begin(), ds.end());
  for (double E : {0.5, 5.0}) {
    std::vector<double> wrapped;
    for (double d : ds) wrapped.push_back(std::arg(solve_two_particle(problem(E, 2000, std::lround(d))).T));
    CHECK(std::abs(wrapped.front()) < 1.5);
    const auto phase = unwrap_phase(wrapped, PhasePolicy::Strict).phase;
    for (std::size_t i = 1; i < phase.size(); ++i) CHECK(std::abs(phase[i]) > std::abs(phase[i - 1]));
  }
}

TEST_CASE("Coulomb scattering never transfers an electron between leads") {
  const long L = 6;
  const auto H = pair_hamiltonian(L, 2, 5.0, 3, 1.0);
  CHECK(H.rows() == 2 * L * L);
  const long block = L * L;
  int cross = 0, total = 0;
  for (int k = 0; k < H.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(H, k); it; ++it) {
      ++total;
      if ((it.row() < block) != (it.col() < block) && it.value() != 0.0) ++cross;
    }
  CHECK(total > 0);
  CHECK(cross == 0);
  CHECK((Eigen::MatrixXd(H) - Eigen::MatrixXd(H).transpose()).norm() == 0.0);
}

TEST_CASE("phase spectrum") {
  auto templ = problem(1.0, 50, 10, 0.0);
  const auto flat = phase_spectrum(templ, linear_grid(0.5, 20.0, 10));
  for (const auto& r : flat.rows) {
    CHECK(r.ok);
    CHECK(r.T2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(r.argT) < 1e-10);
    CHECK(r.R2 < 1e-20);
  }
  templ = problem(1.0, 500, 100);
  const auto a = phase_spectrum(templ, log_grid(0.01, 20.0, 30), PhasePolicy::Flag, 1);
  const auto b = phase_spectrum(templ, log_grid(0.01, 20.0, 30), PhasePolicy::Flag, 3);
  std::ostringstream sa, sb;
  write_two_particle_csv(sa, a);
  write_two_particle_csv(sb, b);
  CHECK(sa.str() == sb.str());
  CHECK(sa.str().rfind("E_in_eV,T2,argT,R2\n", 0) == 0);
  CHECK(a.max_flux_defect() < 1e-10);
  CHECK(a.failed_rows() == 0);
}

}  // TEST_SUITE
