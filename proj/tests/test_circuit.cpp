// Copyright 2026 The molgate Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "molgate/circuit.hpp"
#include "molgate/errors.hpp"
#include "molgate/scatter2.hpp"
#include "molgate/spectrum.hpp"
#include "molgate/units.hpp"

using namespace molgate;

TEST_SUITE("circuit") {

TEST_CASE("controlled phase") {
  const Eigen::Matrix4cd U = cphase_gate(units::pi);
  CHECK(std::abs(U(2, 2) + 1.0) < 1e-15);
  CHECK(U(0, 0) == 1.0);
  CHECK(U(3, 3) == 1.0);
  CHECK((cphase_gate(0.0) - Eigen::Matrix4cd::Identity()).norm() == 0.0);
  const Eigen::Matrix4cd V = cphase_gate(0.7);
  CHECK((V.adjoint() * V - Eigen::Matrix4cd::Identity()).norm() < 1e-15);

  LeadState s = LeadState::basis({2, 2}, {1, 0});
  s = propagate(s, {GateOp::cphase(0.7, 1, 0)});
  CHECK(std::abs(s.amplitude({1, 0}) - std::polar(1.0, 0.7)) < 1e-15);
  s = propagate(LeadState::basis({2, 2}, {1, 1}), {GateOp::cphase(0.7, 1, 0)});
  CHECK(s.amplitude({1, 1}) == cd(1.0));
}

TEST_CASE("splitter gate") {
  const auto out = splitter_gate(ideal_splitter(0.4), 2);
  CHECK(std::abs(out.amplitudes[0] - std::polar(1.0 / std::sqrt(2.0), 0.4)) < 1e-15);
  CHECK(std::abs(out.amplitudes[1] - std::polar(1.0 / std::sqrt(2.0), 0.4)) < 1e-15);
  CHECK(out.theta == doctest::Approx(0.4));
  CHECK(out.reflection == 0.0);

  Eigen::Matrix3cd bad = Eigen::Matrix3cd::Identity();
  CHECK_THROWS_AS(splitter_gate(bad, 0), GateError);
  Eigen::Matrix3cd one_way = Eigen::Matrix3cd::Zero();
  one_way(0, 2) = one_way(2, 0) = 1.0;
  one_way(1, 1) = 1.0;
  CHECK_THROWS_AS(splitter_gate(one_way, 2), GateError);
  CHECK_THROWS_AS(splitter_gate(ideal_splitter(), 3), ValidationError);
  CHECK_THROWS_AS(splitter_gate(Eigen::MatrixXcd::Identity(2, 2), 0), ValidationError);
}

TEST_CASE("lead states") {
  const LeadState s = LeadState::basis({4, 2}, {3, 1});
  CHECK(s.flat_index({3, 1}) == 7);
  CHECK(s.probability(0, 3) == 1.0);
  CHECK(s.probability(1, 0) == 0.0);
  CHECK(propagate(s, {}).amplitudes == s.amplitudes);
  LeadState bad = s;
  bad.amplitudes *= 2.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("propagate applies unitaries and their inverses") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXcd A(3, 3);
  for (int i = 0; i < 9; ++i) A(i / 3, i % 3) = cd(n(rng), n(rng));
  const Eigen::MatrixXcd U = A.householderQr().householderQ();
  const LeadState s = LeadState::basis({4, 2}, {0, 1});
  const LeadState t =
      propagate(s, {GateOp::splitter(U, 0, {1, 2, 0}), GateOp::cphase(1.1, 2, 1),
                    GateOp::cphase(-1.1, 2, 1), GateOp::splitter(U.adjoint(), 0, {1, 2, 0})});
  CHECK((t.amplitudes - s.amplitudes).norm() < 1e-14);
  CHECK_THROWS_AS(propagate(s, {GateOp::splitter(2.0 * U, 0, {1, 2, 0})}), ValidationError);
  CHECK_THROWS_AS(propagate(s, {GateOp::splitter(U, 0, {1, 2, 4})}), ValidationError);
}

TEST_CASE("Hadamard test with an ideal splitter") {
  CHECK(hadamard_test(ideal_splitter(), 0.0, 0).T_f_squared == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(hadamard_test(ideal_splitter(), units::pi, 0).T_f_squared < 1e-28);
  CHECK(hadamard_test(ideal_splitter(), units::pi / 2, 0).T_f_squared == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(hadamard_test(ideal_splitter(0.9), 2.0, 1).T_f_squared == doctest::Approx(1.0).epsilon(1e-14));
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-units::pi, units::pi);
  for (int i = 0; i < 100; ++i) {
    const double phi = u(rng), theta = u(rng);
    const auto r = hadamard_test(ideal_splitter(theta), phi, 0);
    CHECK(std::abs(r.T_f_squared - 0.5 * (1.0 + std::cos(phi))) < 1e-12);
    CHECK(std::abs(r.T_f_squared - r.closed_form) < 1e-12);
    CHECK(r.theta == doctest::Approx(theta).epsilon(1e-12));
  }
  CHECK_THROWS_AS(hadamard_test(ideal_splitter(), 0.0, 2), ValidationError);
}

TEST_CASE("symmetry violations are rejected") {
  Eigen::Matrix3cd S = ideal_splitter();
  S(2, 0) *= -1.0;
  S(0, 2) *= -1.0;
  CHECK_THROWS_AS(hadamard_test(S, 0.0, 0), GateError);
  S = ideal_splitter();
  std::swap(S(0, 1), S(1, 2));
  CHECK_THROWS_AS(hadamard_test(S, 0.0, 0), GateError);
}

TEST_CASE("circuit description") {
  const std::string text = R"({
    "matrices": {"s": {"re": [[-0.5, 0.5, 0.7071067811865476],
                              [0.5, -0.5, 0.7071067811865476],
                              [0.7071067811865476, 0.7071067811865476, 0]]}},
    "ops": [{"kind": "splitter", "matrix": "s"},
            {"kind": "cphase", "phi": 1.0471975511965976},
            {"kind": "recombiner", "matrix": "s"}],
    "q": 0})";
  const CircuitSpec spec = parse_circuit_spec(text);
  CHECK(spec.steps.size() == 3);
  const CircuitResult r = run_circuit(spec);
  CHECK(r.T_f_squared == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(circuit_result_json(r).find("T_f_squared") != std::string::npos);

  CHECK_THROWS_AS(parse_circuit_spec("{"), ValidationError);
  CHECK_THROWS_AS(parse_circuit_spec(R"({"matrices": {}, "ops": [], "extra": 1})"), ValidationError);
  CHECK_THROWS_AS(parse_circuit_spec(R"({"matrices": {}, "ops": [{"kind": "splitter", "matrix": "x"}]})"),
                  ValidationError);
  CHECK_THROWS_AS(parse_circuit_spec(R"({"matrices": {"s": {"re": "no"}}, "ops": []})"), ValidationError);
}

TEST_CASE("molecular splitter with a Coulomb phase") {
  const double VR = 0.25;
  const Junction j = testing::h2_junction({VR, VR, std::sqrt(2.0) * VR});
  const auto cands = splitter_candidates(j, pole_refined_grid(1.0, 40.0, 400, resonance_energies(j)), 2);
  REQUIRE_FALSE(cands.empty());
  const ScatteringSolution s = s_matrix(j, cands.front().E_in);
  const double phi = std::arg(
      solve_two_particle(TwoParticleProblem::equal_energy(cands.front().E_in, 10000, 1000, j.lattice)).T);
  for (int q : {0, 1}) {
    const auto r = hadamard_test(s.S, phi, q);
    CHECK(r.reflection < 1e-3);
    CHECK(r.deviation_from_ideal <= r.reflection_bound + 1e-12);
    CHECK(std::abs(r.T_f_squared - r.closed_form) < 1e-12);
  }
}

}  // TEST_SUITE
