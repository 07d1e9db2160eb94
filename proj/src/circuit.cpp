// Copyright 2026 The molgate Authors
// SPDX-License-Identifier: Apache-2.0

#include "molgate/circuit.hpp"

#include <cmath>
#include <numeric>

#include "json_util.hpp"
#include "molgate/errors.hpp"
#include "molgate/util.hpp"

namespace molgate {

LeadState LeadState::basis(std::vector<std::size_t> dims, const std::vector<std::size_t>& labels) {
  LeadState s;
  s.dims = std::move(dims);
  const std::size_t total =
      std::accumulate(s.dims.begin(), s.dims.end(), std::size_t{1}, std::multiplies<>());
  s.amplitudes = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(total));
  s.amplitudes(static_cast<Eigen::Index>(s.flat_index(labels))) = 1.0;
  return s;
}

std::size_t LeadState::flat_index(const std::vector<std::size_t>& labels) const {
  if (labels.size() != dims.size()) throw ValidationError("label count differs from electron count");
  std::size_t idx = 0;
  for (std::size_t e = 0; e < dims.size(); ++e) {
    if (labels[e] >= dims[e]) throw ValidationError("lead label out of range");
    idx = idx * dims[e] + labels[e];
  }
  return idx;
}

cd LeadState::amplitude(const std::vector<std::size_t>& labels) const {
  return amplitudes(static_cast<Eigen::Index>(flat_index(labels)));
}

double LeadState::probability(std::size_t e, std::size_t label) const {
  if (e >= dims.size() || label >= dims[e]) throw ValidationError("lead label out of range");
  std::size_t stride = 1;
  for (std::size_t k = e + 1; k < dims.size(); ++k) stride *= dims[k];
  double p = 0.0;
  for (Eigen::Index i = 0; i < amplitudes.size(); ++i)
    if ((static_cast<std::size_t>(i) / stride) % dims[e] == label) p += std::norm(amplitudes(i));
  return p;
}

void LeadState::validate(double tol) const {
  if (std::abs(amplitudes.squaredNorm() - 1.0) > tol)
    throw ValidationError("lead state is not normalized");
}

GateOp GateOp::splitter(Eigen::MatrixXcd S, std::size_t electron, std::vector<std::size_t> lead_map) {
  GateOp op;
  op.kind = Kind::Splitter;
  op.S = std::move(S);
  op.electron = electron;
  op.lead_map = std::move(lead_map);
  return op;
}

GateOp GateOp::recombiner(Eigen::MatrixXcd S, std::size_t electron,
                          std::vector<std::size_t> lead_map) {
  GateOp op = splitter(std::move(S), electron, std::move(lead_map));
  op.kind = Kind::Recombiner;
  return op;
}

GateOp GateOp::cphase(double phi, std::size_t label0, std::size_t label1) {
  GateOp op;
  op.kind = Kind::CPhase;
  op.phi = phi;
  op.target = {label0, label1};
  return op;
}

namespace {

void apply_scatterer(LeadState& st, const GateOp& op) {
  const auto N = static_cast<std::size_t>(op.S.rows());
  if (op.S.cols() != op.S.rows() || op.lead_map.size() != N)
    throw ValidationError("scatterer matrix and lead map sizes differ");
  if (op.electron >= st.dims.size()) throw ValidationError("scatterer acts on a missing electron");
  const double defect =
      (op.S.adjoint() * op.S - Eigen::MatrixXcd::Identity(op.S.rows(), op.S.cols())).cwiseAbs().maxCoeff();
  if (defect > 1e-10) throw ValidationError("embedded scattering matrix is not unitary");
  const std::size_t dim = st.dims[op.electron];
  for (std::size_t l : op.lead_map)
    if (l >= dim) throw ValidationError("lead map points outside the electron's labels");

  std::size_t stride = 1;
  for (std::size_t k = op.electron + 1; k < st.dims.size(); ++k) stride *= st.dims[k];
  const std::size_t total = static_cast<std::size_t>(st.amplitudes.size());
  const std::size_t outer = total / (stride * dim);
  Eigen::VectorXcd in(static_cast<Eigen::Index>(N));
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t s = 0; s < stride; ++s) {
      auto at = [&](std::size_t label) {
        return static_cast<Eigen::Index>((o * dim + label) * stride + s);
      };
      for (std::size_t k = 0; k < N; ++k) in(static_cast<Eigen::Index>(k)) = st.amplitudes(at(op.lead_map[k]));
      const Eigen::VectorXcd out = op.S * in;
      for (std::size_t k = 0; k < N; ++k) st.amplitudes(at(op.lead_map[k])) = out(static_cast<Eigen::Index>(k));
    }
  }
}

void apply_cphase(LeadState& st, const GateOp& op) {
  if (st.dims.size() != 2) throw ValidationError("CPHASE needs a two-electron state");
  const std::size_t idx = st.flat_index({op.target[0], op.target[1]});
  st.amplitudes(static_cast<Eigen::Index>(idx)) *= std::polar(1.0, op.phi);
}

}  // namespace

LeadState propagate(const LeadState& state, const std::vector<GateOp>& ops) {
  const std::size_t total =
      std::accumulate(state.dims.begin(), state.dims.end(), std::size_t{1}, std::multiplies<>());
  if (static_cast<std::size_t>(state.amplitudes.size()) != total)
    throw ValidationError("lead state amplitude count does not match its dimensions");
  LeadState st = state;
  for (const auto& op : ops) {
    if (op.kind == GateOp::Kind::CPhase)
      apply_cphase(st, op);
    else
      apply_scatterer(st, op);
  }
  return st;
}

SplitterOutput splitter_gate(const Eigen::MatrixXcd& S, std::size_t input, double reflection_limit) {
  if (S.rows() != 3 || S.cols() != 3) throw ValidationError("splitter needs a 3x3 S-matrix");
  if (input > 2) throw ValidationError("splitter input lead must be 0, 1 or 2");
  const auto in = static_cast<Eigen::Index>(input);
  const Eigen::Index a = input == 0 ? 1 : 0;
  const Eigen::Index b = input == 2 ? 1 : 2;
  SplitterOutput out;
  out.reflection = std::norm(S(in, in));
  if (out.reflection > reflection_limit)
    throw GateError("splitter reflection |R|^2 = " + format_number(out.reflection) +
                    " exceeds the limit " + format_number(reflection_limit) +
                    "; no equal superposition at this energy");
  const cd ta = S(a, in), tb = S(b, in);
  if (std::norm(ta) < kMinBranchProbability || std::norm(tb) < kMinBranchProbability)
    throw GateError("splitter sends no amplitude into one output lead");
  const double n = std::sqrt(std::norm(ta) + std::norm(tb));
  out.amplitudes = {ta / n, tb / n};
  out.theta = std::arg(ta);
  return out;
}

Eigen::Matrix4cd cphase_gate(double phi) {
  Eigen::Matrix4cd U = Eigen::Matrix4cd::Identity();
  U(2, 2) = std::polar(1.0, phi);
  return U;
}

Eigen::MatrixXcd permute_leads(const Eigen::MatrixXcd& S, const std::vector<std::size_t>& perm) {
  const auto N = S.rows();
  if (static_cast<Eigen::Index>(perm.size()) != N) throw ValidationError("permutation has wrong size");
  std::vector<bool> seen(perm.size(), false);
  for (auto p : perm) {
    if (p >= perm.size() || seen[p]) throw ValidationError("not a permutation");
    seen[p] = true;
  }
  Eigen::MatrixXcd out(N, N);
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index j = 0; j < N; ++j)
      out(i, j) = S(static_cast<Eigen::Index>(perm[static_cast<std::size_t>(i)]),
                    static_cast<Eigen::Index>(perm[static_cast<std::size_t>(j)]));
  return out;
}

Eigen::Matrix3cd ideal_splitter(double theta) {
  const cd t = std::polar(1.0 / std::sqrt(2.0), theta);
  const cd a = 0.5 * std::polar(1.0, 2.0 * theta);
  Eigen::Matrix3cd S;
  S << -a, a, t,
        a, -a, t,
        t, t, 0.0;
  return S;
}

namespace {

// Labels of the circuit electron: 0 splitter input, 1 wire |0>, 2 wire |1>, 3 readout.
constexpr std::size_t kInput = 0, kWire0 = 1, kWire1 = 2, kReadout = 3;

std::vector<GateOp> hadamard_ops(const Eigen::MatrixXcd& S, double phase) {
  return {GateOp::splitter(S, 0, {kWire0, kWire1, kInput}),
          GateOp::cphase(phase, kWire1, 0),
          GateOp::recombiner(S, 0, {kWire0, kWire1, kReadout})};
}

void check_symmetry(const Eigen::MatrixXcd& S) {
  if (S.rows() != 3 || S.cols() != 3) throw GateError("Hadamard test needs a 3x3 S-matrix");
  constexpr double tol = 1e-8;
  if (std::abs(S(2, 0) - S(2, 1)) > tol) throw GateError("S violates T13 = T23");
  if (std::abs(S(1, 0) - S(0, 1)) > tol) throw GateError("S violates T12 = T21");
  if (std::abs(S(0, 0) - S(1, 1)) > tol) throw GateError("S violates T11 = T22");
  if ((S - S.transpose()).cwiseAbs().maxCoeff() > tol)
    throw GateError("S is not symmetric (time-reversal invariance)");
}

}  // namespace

HadamardResult hadamard_test(const Eigen::MatrixXcd& S, double phi, int q) {
  if (q != 0 && q != 1) throw ValidationError("control qubit value must be 0 or 1");
  check_symmetry(S);
  HadamardResult r;
  r.phase_used = q == 0 ? phi : 0.0;
  const LeadState in = LeadState::basis({4, 2}, {kInput, static_cast<std::size_t>(q)});
  const LeadState out = propagate(in, hadamard_ops(S, r.phase_used));
  r.T_f_squared = out.probability(0, kReadout);
  r.theta = std::arg(S(0, 2));
  r.reflection = std::norm(S(2, 2));
  r.ideal = 0.5 * (1.0 + std::cos(r.phase_used));
  r.closed_form = std::norm(S(2, 0) * S(0, 2) + S(2, 1) * S(1, 2) * std::polar(1.0, r.phase_used));
  r.deviation_from_ideal = std::abs(r.T_f_squared - r.ideal);
  r.reflection_bound = 2.0 * std::sqrt(r.reflection);
  if (r.reflection > kDefaultReflectionLimit)
    r.warnings.push_back("splitter reflection |R|^2 = " + format_number(r.reflection) +
                         " exceeds " + format_number(kDefaultReflectionLimit));
  return r;
}

// ---------------------------------------------------------------------------

using detail::json;

static CircuitSpec parse_circuit_checked(const std::string& text) {
  const json j = detail::parse_json(text, "circuit spec");
  detail::require_object(j, "circuit spec");
  detail::reject_unknown(j, {"matrices", "ops", "q"}, "circuit spec");
  CircuitSpec spec;
  spec.q = static_cast<int>(j.contains("q") ? detail::integer(j, "q", "circuit spec") : 0);
  if (spec.q != 0 && spec.q != 1) throw ValidationError("circuit spec: q must be 0 or 1");

  const json& mats = detail::field(j, "matrices", "circuit spec");
  detail::require_object(mats, "circuit spec matrices");
  for (auto it = mats.begin(); it != mats.end(); ++it) {
    const std::string where = "matrix '" + it.key() + "'";
    detail::reject_unknown(*it, {"re", "im"}, where);
    auto re = detail::field(*it, "re", where).get<std::vector<std::vector<double>>>();
    auto im = it->contains("im") ? (*it)["im"].get<std::vector<std::vector<double>>>()
                                 : std::vector<std::vector<double>>(re.size(), std::vector<double>(re.size(), 0.0));
    const auto n = static_cast<Eigen::Index>(re.size());
    Eigen::MatrixXcd M(n, n);
    if (im.size() != re.size()) throw ValidationError(where + ": re and im differ in shape");
    for (Eigen::Index r = 0; r < n; ++r) {
      const auto ur = static_cast<std::size_t>(r);
      if (re[ur].size() != re.size() || im[ur].size() != re.size())
        throw ValidationError(where + " must be square");
      for (Eigen::Index c = 0; c < n; ++c)
        M(r, c) = cd(re[ur][static_cast<std::size_t>(c)], im[ur][static_cast<std::size_t>(c)]);
    }
    spec.matrices.emplace(it.key(), M);
  }

  const json& ops = detail::field(j, "ops", "circuit spec");
  if (!ops.is_array()) throw ValidationError("circuit spec: ops must be an array");
  for (const json& o : ops) {
    detail::reject_unknown(o, {"kind", "matrix", "phi"}, "circuit op");
    CircuitSpec::Step step;
    const std::string kind = detail::string(o, "kind", "circuit op");
    if (kind == "splitter" || kind == "recombiner") {
      step.kind = kind == "splitter" ? GateOp::Kind::Splitter : GateOp::Kind::Recombiner;
      step.matrix = detail::string(o, "matrix", "circuit op");
      if (!spec.matrices.count(step.matrix))
        throw ValidationError("circuit op references unknown matrix '" + step.matrix + "'");
    } else if (kind == "cphase") {
      step.kind = GateOp::Kind::CPhase;
      step.phi = detail::number(o, "phi", "circuit op");
    } else {
      throw ValidationError("unknown circuit op kind '" + kind + "'");
    }
    spec.steps.push_back(step);
  }
  return spec;
}

CircuitSpec parse_circuit_spec(const std::string& text) {
  try {
    return parse_circuit_checked(text);
  } catch (const detail::json::exception& e) {
    throw ValidationError(std::string("circuit spec: ") + e.what());
  }
}

CircuitResult run_circuit(const CircuitSpec& spec) {
  CircuitResult res;
  std::vector<GateOp> ops;
  for (const auto& s : spec.steps) {
    switch (s.kind) {
      case GateOp::Kind::Splitter: {
        const auto& S = spec.matrices.at(s.matrix);
        if (S.rows() != 3) throw ValidationError("splitter matrices must be 3x3");
        const double R2 = std::norm(S(2, 2));
        if (R2 > kDefaultReflectionLimit)
          res.warnings.push_back("splitter '" + s.matrix + "' reflects |R|^2 = " + format_number(R2));
        ops.push_back(GateOp::splitter(S, 0, {kWire0, kWire1, kInput}));
        break;
      }
      case GateOp::Kind::Recombiner:
        ops.push_back(GateOp::recombiner(spec.matrices.at(s.matrix), 0, {kWire0, kWire1, kReadout}));
        break;
      case GateOp::Kind::CPhase:
        ops.push_back(GateOp::cphase(s.phi, kWire1, 0));
        if (spec.q == 0) res.phase_used += s.phi;
        break;
    }
  }
  const LeadState in = LeadState::basis({4, 2}, {kInput, static_cast<std::size_t>(spec.q)});
  res.T_f_squared = propagate(in, ops).probability(0, kReadout);
  return res;
}

std::string circuit_result_json(const CircuitResult& r) {
  json j = {{"T_f_squared", r.T_f_squared}, {"phase_used", r.phase_used}, {"warnings", r.warnings}};
  return j.dump(2);
}

}  // namespace molgate
