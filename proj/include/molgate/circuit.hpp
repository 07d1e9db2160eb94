// Copyright 2026 The molgate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <vector>

#include "molgate/model.hpp"

namespace molgate {

/// Amplitudes of one or more electrons over lead labels. Electron e may sit
/// on any of dims[e] labels; the flattened index is row-major with electron 0
/// most significant.
struct LeadState {
  std::vector<std::size_t> dims;
  Eigen::VectorXcd amplitudes;

  /// Product state with electron e on label labels[e].
  static LeadState basis(std::vector<std::size_t> dims, const std::vector<std::size_t>& labels);

  std::size_t electrons() const { return dims.size(); }
  std::size_t flat_index(const std::vector<std::size_t>& labels) const;
  cd amplitude(const std::vector<std::size_t>& labels) const;
  /// Probability that electron e is found on label `label`.
  double probability(std::size_t e, std::size_t label) const;
  double norm() const { return amplitudes.norm(); }
  /// Throws ValidationError unless the norm is 1 within tol.
  void validate(double tol = 1e-10) const;
};

/// One step of a lead circuit.
struct GateOp {
  enum class Kind { Splitter, CPhase, Recombiner };

  Kind kind = Kind::Splitter;
  /// Splitter / Recombiner: scattering matrix S(out, in) acting on electron
  /// `electron`, with S index k living on state label lead_map[k].
  Eigen::MatrixXcd S;
  std::size_t electron = 0;
  std::vector<std::size_t> lead_map;
  /// CPhase: e^{i phi} on amplitudes with electron 0 on target[0] and
  /// electron 1 on target[1].
  double phi = 0.0;
  std::array<std::size_t, 2> target{};

  static GateOp splitter(Eigen::MatrixXcd S, std::size_t electron, std::vector<std::size_t> lead_map);
  static GateOp recombiner(Eigen::MatrixXcd S, std::size_t electron,
                           std::vector<std::size_t> lead_map);
  static GateOp cphase(double phi, std::size_t label0, std::size_t label1);
};

/// Left-multiplies the embedded unitary of every op in order. Throws
/// ValidationError on dimension mismatches or a non-unitary S (tol 1e-10).
LeadState propagate(const LeadState& state, const std::vector<GateOp>& ops);

/// Default limit on the input-lead reflection |R|^2 of a usable splitter.
inline constexpr double kDefaultReflectionLimit = 1e-3;
/// Each output branch must carry at least this probability.
inline constexpr double kMinBranchProbability = 1e-6;

struct SplitterOutput {
  std::array<cd, 2> amplitudes{};  ///< normalized (T_a, T_b)
  double theta = 0.0;               ///< arg T_a, the global phase
  double reflection = 0.0;          ///< |R|^2 back into the input
};

/// One-qubit state produced by sending an electron into lead `input` of a
/// three-lead junction; the outputs are the other two leads in increasing
/// order. Throws GateError when the reflection exceeds `reflection_limit` or a
/// branch is empty.
SplitterOutput splitter_gate(const Eigen::MatrixXcd& S, std::size_t input,
                             double reflection_limit = kDefaultReflectionLimit);

/// diag(1, 1, e^{i phi}, 1) over |00>, |01>, |10>, |11>.
Eigen::Matrix4cd cphase_gate(double phi);

struct HadamardResult {
  double T_f_squared = 0.0;
  double phase_used = 0.0;   ///< phi if q == 0, else 0
  double theta = 0.0;        ///< splitter global phase
  double reflection = 0.0;   ///< |R|^2 of the splitter input
  double ideal = 0.0;        ///< (1 + cos(phase_used)) / 2
  double closed_form = 0.0;  ///< |T13 T31 + T23 T32 e^{i phase_used}|^2
  double deviation_from_ideal = 0.0;
  double reflection_bound = 0.0;  ///< 2 |R|
  std::vector<std::string> warnings;
};

/// Splitter, CPHASE and recombiner for a symmetric three-lead S whose last
/// lead (index 2) is the special one: it feeds the splitter and reads out the
/// recombiner. Leads 0 and 1 carry qubit states |0> and |1>. The control
/// electron sits on qubit value q. Throws GateError when S violates the
/// mirror or time-reversal symmetry beyond 1e-8.
HadamardResult hadamard_test(const Eigen::MatrixXcd& S, double phi, int q);

/// Returns S with leads relabeled: result(i, j) = S(perm[i], perm[j]).
Eigen::MatrixXcd permute_leads(const Eigen::MatrixXcd& S, const std::vector<std::size_t>& perm);

/// Ideal splitter: zero reflection and |T|^2 = 1/2 into each output, with
/// the special lead last.
Eigen::Matrix3cd ideal_splitter(double theta = 0.0);

// ---------------------------------------------------------------------------

/// Parsed circuit description:
///   {"matrices": {"name": {"re": [[...]], "im": [[...]]}},
///    "ops": [{"kind": "splitter", "matrix": "name"},
///            {"kind": "cphase", "phi": 1.0},
///            {"kind": "recombiner", "matrix": "name"}],
///    "q": 0}
/// Matrices follow the hadamard_test lead convention.
struct CircuitSpec {
  std::map<std::string, Eigen::MatrixXcd> matrices;
  struct Step {
    GateOp::Kind kind;
    std::string matrix;
    double phi = 0.0;
  };
  std::vector<Step> steps;
  int q = 0;
};

CircuitSpec parse_circuit_spec(const std::string& json_text);

struct CircuitResult {
  double T_f_squared = 0.0;
  double phase_used = 0.0;
  std::vector<std::string> warnings;
};

/// Runs the steps on the two-electron state (circuit electron on the splitter
/// input, control electron on q) and returns the readout probability.
CircuitResult run_circuit(const CircuitSpec& spec);

std::string circuit_result_json(const CircuitResult& result);

}  // namespace molgate
