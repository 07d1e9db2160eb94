// Copyright 2026 The molgate Authors
// SPDX-License-Identifier: Apache-2.0

#include "molgate/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "json_util.hpp"
#include "molgate/circuit.hpp"
#include "molgate/errors.hpp"
#include "molgate/molecule_io.hpp"
#include "molgate/oracle.hpp"
#include "molgate/scatter1.hpp"
#include "molgate/scatter2.hpp"
#include "molgate/spectrum.hpp"
#include "molgate/units.hpp"
#include "molgate/util.hpp"

namespace molgate {

namespace fs = std::filesystem;
using detail::json;

namespace {

std::vector<double> number_list(const json& j, const char* key, std::string_view where) {
  const json& v = detail::field(j, key, where);
  if (!v.is_array()) throw ValidationError(std::string(key) + " in " + std::string(where) + " must be an array");
  std::vector<double> out;
  for (const json& x : v) {
    if (!x.is_number()) throw ValidationError(std::string(key) + " in " + std::string(where) + " must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

bool boolean_or(const json& j, const char* key, bool fallback, std::string_view where) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_boolean())
    throw ValidationError("field '" + std::string(key) + "' in " + std::string(where) + " must be true or false");
  return j[key].get<bool>();
}

long positive_integer(const json& j, const char* key, std::string_view where) {
  const long v = detail::integer(j, key, where);
  if (v < 1) throw ValidationError("field '" + std::string(key) + "' in " + std::string(where) + " must be positive");
  return v;
}

GridConfig parse_grid(const json& j, std::string_view where) {
  detail::require_object(j, where);
  detail::reject_unknown(j, {"min_eV", "max_eV", "count", "spacing", "refine_poles"}, where);
  GridConfig g;
  g.min_eV = detail::number(j, "min_eV", where);
  g.max_eV = detail::number(j, "max_eV", where);
  const long count = detail::integer(j, "count", where);
  if (count < 2) throw ValidationError(std::string(where) + ": count must be at least 2");
  g.count = static_cast<std::size_t>(count);
  if (!(g.min_eV < g.max_eV)) throw ValidationError(std::string(where) + ": min_eV must be below max_eV");
  if (j.contains("spacing")) g.spacing = detail::string(j, "spacing", where);
  if (g.spacing != "linear" && g.spacing != "log")
    throw ValidationError(std::string(where) + ": spacing must be 'linear' or 'log'");
  if (g.spacing == "log" && !(g.min_eV > 0.0))
    throw ValidationError(std::string(where) + ": log spacing needs min_eV > 0");
  g.refine_poles = boolean_or(j, "refine_poles", false, where);
  return g;
}

LatticeParams parse_lattice(const json& j) {
  constexpr std::string_view where = "lattice";
  detail::require_object(j, where);
  detail::reject_unknown(j, {"a_angstrom", "beta_eV", "mass_me", "dispersion"}, where);
  LatticeParams p;
  p.a = detail::number(j, "a_angstrom", where);
  p.mass = detail::number_or(j, "mass_me", 1.0, where);
  if (j.contains("dispersion")) p.dispersion = parse_dispersion(detail::string(j, "dispersion", where));
  if (!(p.a > 0.0) || !(p.mass > 0.0)) throw ValidationError("lattice: a_angstrom and mass_me must be positive");
  p.beta = j.contains("beta_eV") ? detail::number(j, "beta_eV", where) : canonical_beta(p.a, p.mass);
  p.validate();
  return p;
}

TwoParticleConfig parse_two_particle(const json& j) {
  constexpr std::string_view where = "two_particle";
  detail::require_object(j, where);
  detail::reject_unknown(j, {"C", "d", "K_eV"}, where);
  TwoParticleConfig t;
  t.C = positive_integer(j, "C", where);
  t.d = positive_integer(j, "d", where);
  if (j.contains("K_eV")) {
    t.K_eV = detail::number(j, "K_eV", where);
    if (!(*t.K_eV >= 0.0)) throw ValidationError("two_particle: K_eV must be non-negative");
  }
  return t;
}

ChainConfig parse_chain(const json& j) {
  constexpr std::string_view where = "chain";
  detail::require_object(j, where);
  detail::reject_unknown(j, {"dots", "kappa_min", "kappa_max", "points"}, where);
  ChainConfig c;
  if (j.contains("dots")) {
    c.dots.clear();
    for (double v : number_list(j, "dots", where)) {
      if (v < 1 || v != std::floor(v)) throw ValidationError("chain: dots must be positive integers");
      c.dots.push_back(static_cast<int>(v));
    }
  }
  c.kappa_min = detail::number_or(j, "kappa_min", c.kappa_min, where);
  c.kappa_max = detail::number_or(j, "kappa_max", c.kappa_max, where);
  if (j.contains("points")) c.points = static_cast<std::size_t>(positive_integer(j, "points", where));
  if (!(c.kappa_min > 0.0 && c.kappa_max < units::pi && c.kappa_min < c.kappa_max))
    throw ValidationError("chain: need 0 < kappa_min < kappa_max < pi");
  if (c.points < 2) throw ValidationError("chain: points must be at least 2");
  return c;
}

SplitterConfig parse_splitter(const json& j) {
  constexpr std::string_view where = "splitter";
  detail::require_object(j, where);
  detail::reject_unknown(j, {"input_lead", "reflection_limit"}, where);
  SplitterConfig s;
  if (j.contains("input_lead")) s.input_lead = positive_integer(j, "input_lead", where);
  s.reflection_limit = detail::number_or(j, "reflection_limit", s.reflection_limit, where);
  if (!(s.reflection_limit > 0.0 && s.reflection_limit < 1.0))
    throw ValidationError("splitter: reflection_limit must lie in (0, 1)");
  return s;
}

HadamardConfig parse_hadamard(const json& j) {
  constexpr std::string_view where = "hadamard";
  detail::require_object(j, where);
  detail::reject_unknown(j, {"splitter", "theta", "splitter_energy_eV", "phi", "phi_energy_eV", "q"}, where);
  HadamardConfig h;
  if (j.contains("splitter")) h.splitter = detail::string(j, "splitter", where);
  if (h.splitter != "ideal" && h.splitter != "molecule")
    throw ValidationError("hadamard: splitter must be 'ideal' or 'molecule'");
  h.theta = detail::number_or(j, "theta", 0.0, where);
  if (j.contains("splitter_energy_eV")) h.splitter_energy_eV = detail::number(j, "splitter_energy_eV", where);
  if (j.contains("phi")) h.phi = detail::number(j, "phi", where);
  if (j.contains("phi_energy_eV")) h.phi_energy_eV = detail::number(j, "phi_energy_eV", where);
  if (h.phi && h.phi_energy_eV) throw ValidationError("hadamard: give either phi or phi_energy_eV, not both");
  if (!h.phi && !h.phi_energy_eV) throw ValidationError("hadamard: one of phi or phi_energy_eV is required");
  if (j.contains("q")) h.q = static_cast<int>(detail::integer(j, "q", where));
  if (h.q != 0 && h.q != 1) throw ValidationError("hadamard: q must be 0 or 1");
  return h;
}

OracleConfig parse_oracle(const json& j) {
  detail::require_object(j, "oracle");
  detail::reject_unknown(j, {"chain", "molecule", "two_particle"}, "oracle");
  OracleConfig o;
  if (j.contains("chain")) {
    constexpr std::string_view where = "oracle.chain";
    const json& c = j["chain"];
    detail::require_object(c, where);
    detail::reject_unknown(c, {"G", "L", "sigma", "kappa", "check_kappas"}, where);
    OracleChainConfig cc;
    if (c.contains("G")) cc.G = static_cast<int>(positive_integer(c, "G", where));
    if (c.contains("L")) cc.L = positive_integer(c, "L", where);
    cc.sigma = detail::number_or(c, "sigma", cc.sigma, where);
    cc.kappa = detail::number_or(c, "kappa", cc.kappa, where);
    if (c.contains("check_kappas")) cc.check_kappas = number_list(c, "check_kappas", where);
    o.chain = cc;
  }
  if (j.contains("molecule")) {
    constexpr std::string_view where = "oracle.molecule";
    const json& m = j["molecule"];
    detail::require_object(m, where);
    detail::reject_unknown(m, {"L", "sigma", "kappas", "input_lead", "output_lead", "x0", "t_final"}, where);
    OracleMoleculeConfig mc;
    if (m.contains("L")) mc.L = positive_integer(m, "L", where);
    mc.sigma = detail::number_or(m, "sigma", mc.sigma, where);
    mc.kappas = number_list(m, "kappas", where);
    if (m.contains("input_lead")) mc.input = positive_integer(m, "input_lead", where);
    if (m.contains("output_lead")) mc.out = positive_integer(m, "output_lead", where);
    mc.x0 = detail::number_or(m, "x0", 0.0, where);
    mc.t_final = detail::number_or(m, "t_final", 0.0, where);
    o.molecule = mc;
  }
  if (j.contains("two_particle")) {
    constexpr std::string_view where = "oracle.two_particle";
    const json& t = j["two_particle"];
    detail::require_object(t, where);
    detail::reject_unknown(t, {"C", "d", "K_eV", "grid"}, where);
    OracleTwoParticleConfig tc;
    if (t.contains("C")) tc.C = positive_integer(t, "C", where);
    if (t.contains("d")) tc.d = positive_integer(t, "d", where);
    if (t.contains("K_eV")) tc.K_eV = detail::number(t, "K_eV", where);
    if (t.contains("grid")) tc.grid = parse_grid(t["grid"], "oracle.two_particle.grid");
    o.two_particle = tc;
  }
  return o;
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

// ---------------------------------------------------------------------------

struct Options {
  std::string config;
  std::string output;
  std::string circuit;
  std::string molecule;
  unsigned jobs = 1;
};

SweepConfig require_config(const Options& o) {
  if (o.config.empty()) throw ValidationError("this command needs --config");
  return load_config(o.config);
}

template <typename T>
const T& need(const std::optional<T>& v, const char* section) {
  if (!v) throw ValidationError(std::string("config is missing the '") + section + "' section");
  return *v;
}

std::optional<fs::path> output_path(const SweepConfig& cfg, const Options& o) {
  if (!o.output.empty()) return fs::path(o.output);
  return cfg.output;
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream f(path);
  if (!f) throw ValidationError("cannot open output file " + path.string());
  body(f);
  if (!f) throw ValidationError("failed writing " + path.string());
}

MoleculeModel load_molecule(const SweepConfig& cfg) {
  return read_molecule(need(cfg.molecule, "molecule"));
}

Junction junction_from(const SweepConfig& cfg, const MoleculeModel& mol, const LatticeParams& lattice) {
  if (cfg.lead_factors.empty()) throw ValidationError("config is missing 'lead_factors'");
  LeadConfig leads;
  leads.lead_factors = cfg.lead_factors;
  validate_leads(leads, mol);
  return Junction::from_molecule(mol, leads, lattice);
}

std::string fmt(double x, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

double coulomb_K(const std::optional<double>& K, const LatticeParams& lattice) {
  return K ? *K : units::coulomb_constant / lattice.a;
}

TwoParticleProblem two_particle_problem(double E, long C, long d, const std::optional<double>& K,
                                        const LatticeParams& lattice) {
  TwoParticleProblem p = TwoParticleProblem::equal_energy(E, C, d, lattice);
  p.K = coulomb_K(K, lattice);
  return p;
}

Eigen::Index splitter_input(const SweepConfig& cfg, Eigen::Index leads) {
  const long in = cfg.splitter && cfg.splitter->input_lead ? *cfg.splitter->input_lead : leads;
  if (in < 1 || in > leads) throw ValidationError("splitter input_lead is out of range");
  return in - 1;
}

double reflection_limit(const SweepConfig& cfg) {
  return cfg.splitter ? cfg.splitter->reflection_limit : kDefaultReflectionLimit;
}

// ---------------------------------------------------------------------------

int cmd_spectrum1(const Options& o, std::ostream& out, std::ostream& err) {
  const SweepConfig cfg = require_config(o);
  const MoleculeModel mol = load_molecule(cfg);
  const Junction j = junction_from(cfg, mol, cfg.lattice);
  const auto poles = resonance_energies(j);
  const auto grid = build_grid(need(cfg.grid, "grid"), poles);
  const auto path = output_path(cfg, o);
  if (!path) throw ValidationError("no output path: set 'output' in the config or pass --output");

  const SpectrumTable t = spectrum(j, grid, PhasePolicy::Flag, o.jobs);
  write_file(*path, [&](std::ostream& s) { write_spectrum_csv(s, t); });

  out << "spectrum1: " << mol.name << ", " << j.lead_count() << " leads, " << grid.size()
      << " energies -> " << path->string() << "\n";
  out << "max unitarity defect: " << fmt(t.max_unitarity_defect(), 3) << "\n";
  for (Eigen::Index in = 0; in < j.lead_count(); ++in) {
    for (Eigen::Index o2 = in + 1; o2 < j.lead_count(); ++o2) {
      const auto peaks = transmission_peaks(j, grid, o2, in);
      out << "peaks of |S[" << o2 + 1 << "][" << in + 1 << "]|^2:";
      if (peaks.empty()) out << " none";
      out << "\n";
      for (const Peak& p : peaks) {
        double nearest = 0.0, gap = 1e300;
        for (double r : poles)
          if (std::abs(r - p.E_in) < gap) gap = std::abs(r - p.E_in), nearest = r;
        out << "  E_in = " << fmt(p.E_in, 9) << " eV  |T|^2 = " << fmt(p.value)
            << "  (nearest resonance " << fmt(nearest, 9) << " eV)\n";
      }
    }
  }
  const std::size_t flagged = t.failed_rows();
  const std::size_t warnings = t.warning_count() + t.phase_warnings.size();
  out << "flagged rows: " << flagged << ", warnings: " << warnings << "\n";
  for (const auto& w : t.phase_warnings) err << "warning: " << w << "\n";
  for (const auto& r : t.rows)
    if (!r.ok) err << "warning: E_in = " << format_number(r.E_in) << " eV: " << r.error << "\n";
  if (flagged == t.rows.size()) {
    err << "error: every energy failed\n";
    return kExitNumerical;
  }
  return kExitOk;
}

int cmd_spectrum2(const Options& o, std::ostream& out, std::ostream& err) {
  const SweepConfig cfg = require_config(o);
  const TwoParticleConfig& tp = need(cfg.two_particle, "two_particle");
  const auto grid = build_grid(need(cfg.grid, "grid"));
  const auto path = output_path(cfg, o);
  if (!path) throw ValidationError("no output path: set 'output' in the config or pass --output");

  TwoParticleProblem templ;
  templ.C = tp.C;
  templ.d = tp.d;
  templ.lattice = cfg.lattice;
  templ.K = coulomb_K(tp.K_eV, cfg.lattice);
  const TwoParticleTable t = phase_spectrum(templ, grid, PhasePolicy::Flag, o.jobs);
  write_file(*path, [&](std::ostream& s) { write_two_particle_csv(s, t); });

  double max_arg = 0.0, min_T2 = 1.0, max_T2 = 0.0;
  for (const auto& r : t.rows) {
    if (!r.ok) continue;
    max_arg = std::max(max_arg, std::abs(r.argT));
    min_T2 = std::min(min_T2, r.T2);
    max_T2 = std::max(max_T2, r.T2);
  }
  out << "spectrum2: C = " << tp.C << ", d = " << tp.d << ", K = " << fmt(templ.K) << " eV, "
      << grid.size() << " energies -> " << path->string() << "\n";
  out << "max flux defect: " << fmt(t.max_flux_defect(), 3) << "\n";
  out << "|T|^2 range: [" << fmt(min_T2, 9) << ", " << fmt(max_T2, 9) << "]\n";
  out << "max |arg T|: " << fmt(max_arg) << " rad\n";
  const std::size_t flagged = t.failed_rows();
  out << "flagged rows: " << flagged << ", warnings: " << t.phase_warnings.size() << "\n";
  for (const auto& w : t.phase_warnings) err << "warning: " << w << "\n";
  for (const auto& r : t.rows)
    if (!r.ok) err << "warning: E_in = " << format_number(r.E_in) << " eV: " << r.error << "\n";
  if (flagged == t.rows.size()) {
    err << "error: every energy failed\n";
    return kExitNumerical;
  }
  return kExitOk;
}

int cmd_chain_check(const Options& o, std::ostream& out, std::ostream&) {
  SweepConfig cfg;
  if (!o.config.empty()) cfg = load_config(o.config);
  const ChainConfig chain = cfg.chain.value_or(ChainConfig{});
  const double a = cfg.lattice.a, beta = cfg.lattice.beta;
  const auto kappas = linear_grid(chain.kappa_min, chain.kappa_max, chain.points);

  bool all_ok = true;
  out << "G    max|S - S_exact|   max rel. length error   status\n";
  for (int G : chain.dots) {
    const Junction j = chain_junction(G, a, beta);
    const double expected = a * (G - 1);
    double s_err = 0.0, l_err = 0.0;
    for (double k : kappas) {
      const Eigen::Matrix2cd exact = chain_s_matrix(G, k);
      const ScatteringSolution s = s_matrix_at_kappa(j, k);
      s_err = std::max(s_err, (s.S - exact).cwiseAbs().maxCoeff());
      const double ell = effective_length(j, k, 1, 0);
      l_err = std::max(l_err, std::abs(ell - expected) / std::max(expected, a));
    }
    const bool ok = s_err <= 1e-9 && l_err <= 1e-6;
    all_ok = all_ok && ok;
    char line[128];
    std::snprintf(line, sizeof line, "%-4d %-18.3e %-23.3e %s\n", G, s_err, l_err, ok ? "pass" : "FAIL");
    out << line;
  }
  return all_ok ? kExitOk : kExitCheckFailed;
}

struct SplitterChoice {
  double E_in = 0.0;
  Eigen::Index input = 0;
  Eigen::MatrixXcd S;
  std::vector<SplitterCandidate> candidates;
};

SplitterChoice choose_splitter(const SweepConfig& cfg, const Junction& j,
                               std::optional<double> energy) {
  if (j.lead_count() != 3) throw ValidationError("a splitter needs exactly three leads");
  SplitterChoice c;
  c.input = splitter_input(cfg, j.lead_count());
  if (energy) {
    c.E_in = *energy;
  } else {
    const auto grid = build_grid(need(cfg.grid, "grid"), resonance_energies(j));
    c.candidates = splitter_candidates(j, grid, c.input);
    if (c.candidates.empty()) throw GateError("no reflection minimum found on the energy grid");
    c.E_in = c.candidates.front().E_in;
  }
  c.S = s_matrix(j, c.E_in).S;
  return c;
}

Eigen::MatrixXcd special_lead_last(const Eigen::MatrixXcd& S, Eigen::Index input) {
  std::vector<std::size_t> perm;
  for (Eigen::Index n = 0; n < S.rows(); ++n)
    if (n != input) perm.push_back(static_cast<std::size_t>(n));
  perm.push_back(static_cast<std::size_t>(input));
  return permute_leads(S, perm);
}

int cmd_splitter_design(const Options& o, std::ostream& out, std::ostream& err) {
  const SweepConfig cfg = require_config(o);
  const MoleculeModel mol = load_molecule(cfg);
  const Junction j = junction_from(cfg, mol, cfg.lattice);
  const SplitterChoice c = choose_splitter(cfg, j, std::nullopt);
  const double limit = reflection_limit(cfg);

  const Eigen::MatrixXcd S = special_lead_last(c.S, c.input);
  json r;
  r["E_in_eV"] = c.E_in;
  r["input_lead"] = c.input + 1;
  r["reflection"] = std::norm(c.S(c.input, c.input));
  std::vector<double> T2;
  for (Eigen::Index n = 0; n < c.S.rows(); ++n) T2.push_back(std::norm(c.S(n, c.input)));
  r["transmission"] = T2;
  r["theta"] = std::arg(S(0, 2));
  r["reflection_limit"] = limit;
  json cands = json::array();
  for (std::size_t i = 0; i < std::min<std::size_t>(5, c.candidates.size()); ++i)
    cands.push_back({{"E_in_eV", c.candidates[i].E_in}, {"reflection", c.candidates[i].reflection}});
  r["candidates"] = cands;
  const bool ok = r["reflection"].get<double>() < limit;
  r["qualifies"] = ok;
  const std::string text = r.dump(2);
  out << text << "\n";
  if (const auto path = output_path(cfg, o)) write_file(*path, [&](std::ostream& s) { s << text << "\n"; });
  if (!ok) {
    err << "error: best reflection " << fmt(r["reflection"].get<double>(), 3) << " at "
        << fmt(c.E_in, 9) << " eV exceeds the limit " << fmt(limit, 3) << "\n";
    return kExitInvalidInput;
  }
  return kExitOk;
}

int cmd_hadamard(const Options& o, std::ostream& out, std::ostream& err) {
  if (!o.circuit.empty()) {
    std::ifstream f(o.circuit);
    if (!f) throw ValidationError("circuit file not found: " + o.circuit);
    std::stringstream ss;
    ss << f.rdbuf();
    const CircuitResult r = run_circuit(parse_circuit_spec(ss.str()));
    const std::string text = circuit_result_json(r);
    out << text << "\n";
    for (const auto& w : r.warnings) err << "warning: " << w << "\n";
    if (!o.output.empty()) write_file(o.output, [&](std::ostream& s) { s << text << "\n"; });
    return kExitOk;
  }
  const SweepConfig cfg = require_config(o);
  const HadamardConfig& h = need(cfg.hadamard, "hadamard");

  Eigen::MatrixXcd S;
  if (h.splitter == "ideal") {
    S = ideal_splitter(h.theta);
  } else {
    const MoleculeModel mol = load_molecule(cfg);
    const Junction j = junction_from(cfg, mol, cfg.lattice);
    const SplitterChoice c = choose_splitter(cfg, j, h.splitter_energy_eV);
    S = special_lead_last(c.S, c.input);
    splitter_gate(S, 2, reflection_limit(cfg));
  }

  double phi = 0.0;
  if (h.phi) {
    phi = *h.phi;
  } else {
    const TwoParticleConfig& tp = need(cfg.two_particle, "two_particle");
    const TwoParticleSolution s =
        solve_two_particle(two_particle_problem(*h.phi_energy_eV, tp.C, tp.d, tp.K_eV, cfg.lattice));
    phi = std::arg(s.T);
  }

  const HadamardResult r = hadamard_test(S, phi, h.q);
  json j;
  j["T_f_squared"] = r.T_f_squared;
  j["phi"] = phi;
  j["theta"] = r.theta;
  j["deviation_from_closed_form"] = r.deviation_from_ideal;
  j["reflection_bound"] = r.reflection_bound;
  j["warnings"] = r.warnings;
  const std::string text = j.dump(2);
  out << text << "\n";
  for (const auto& w : r.warnings) err << "warning: " << w << "\n";
  if (const auto path = output_path(cfg, o)) write_file(*path, [&](std::ostream& s) { s << text << "\n"; });
  return kExitOk;
}

struct OracleRow {
  std::string check;
  double solver = 0.0;
  double oracle = 0.0;
  double discrepancy = 0.0;
  double tolerance = 0.0;
  bool pass() const { return discrepancy <= tolerance; }
};

double relative(double x, double ref) { return std::abs(x - ref) / std::max(std::abs(ref), 1e-300); }

void oracle_chain(const OracleChainConfig& c, const LatticeParams& lattice, std::vector<OracleRow>& rows) {
  if (c.L > kMaxOracleLeadLength) throw ValidationError("oracle.chain: L exceeds 5000");
  const double a = lattice.a, beta = lattice.beta;
  const Junction j = chain_junction(c.G, a, beta);
  const std::string tag = "chain G=" + std::to_string(c.G);
  for (double k : c.check_kappas) {
    const ScatteringSolution s = s_matrix_at_kappa(j, k);
    const double d = (s.S - chain_s_matrix(c.G, k)).cwiseAbs().maxCoeff();
    rows.push_back({tag + " S at kappa=" + fmt(k, 4), std::arg(s.S(1, 0)),
                    wrap_angle(k * (c.G - 1)), d, 1e-9});
  }
  const double ell = effective_length(j, c.kappa, 1, 0);
  rows.push_back({tag + " effective length", ell, a * (c.G - 1),
                  c.G > 1 ? relative(ell, a * (c.G - 1)) : std::abs(ell) / a, 1e-6});

  const TruncatedLattice lat = build_truncated_hamiltonian(j, c.L);
  Wavepacket packet;
  packet.x0 = static_cast<double>(c.L) / 4.0;
  packet.sigma = c.sigma;
  packet.kappa0 = c.kappa;
  const WavepacketResult wp = wavepacket_transmission(lat, packet);
  const double avg = packet_averaged_transmission(j, packet, 1);
  rows.push_back({tag + " wavepacket |T|^2", avg, wp.lead_probability[1], relative(avg, wp.lead_probability[1]),
                  0.02});

  const double v = group_velocity(c.kappa, beta);
  const auto detector = static_cast<Eigen::Index>(std::ceil(5.0 * c.sigma));
  const double t_final = (packet.x0 + static_cast<double>(detector) + 10.0 * c.sigma + c.G) / v;
  const TruncatedLattice bare = build_truncated_hamiltonian(chain_junction(1, a, beta), c.L);
  const ArrivalResult t1 = arrival_time(bare, packet, 1, detector, t_final);
  const ArrivalResult tG = arrival_time(lat, packet, 1, detector, t_final);
  const double ell_arrival = (tG.time - t1.time) * v * a;
  rows.push_back({tag + " arrival delay length", ell_arrival, ell,
                  c.G > 1 ? relative(ell_arrival, ell) : std::abs(ell_arrival) / a, 0.05});
}

void oracle_molecule(const OracleMoleculeConfig& m, const SweepConfig& cfg, std::vector<OracleRow>& rows) {
  if (m.L > kMaxOracleLeadLength) throw ValidationError("oracle.molecule: L exceeds 5000");
  const MoleculeModel mol = load_molecule(cfg);
  LatticeParams lattice = cfg.lattice;
  lattice.dispersion = Dispersion::Cosine;
  const Junction j = junction_from(cfg, mol, lattice);
  if (m.input > j.lead_count() || m.out > j.lead_count())
    throw ValidationError("oracle.molecule: lead index out of range");
  const TruncatedLattice lat = build_truncated_hamiltonian(j, m.L);
  for (double k : m.kappas) {
    Wavepacket packet;
    packet.x0 = m.x0 > 0.0 ? m.x0 : static_cast<double>(m.L) / 4.0;
    packet.sigma = m.sigma;
    packet.kappa0 = k;
    packet.lead = m.input - 1;
    const double t_final = m.t_final > 0.0
                               ? m.t_final
                               : (packet.x0 + 0.5 * static_cast<double>(m.L)) / group_velocity(k, lattice.beta);
    const WavepacketResult wp = wavepacket_transmission(lat, packet, t_final);
    const double oracle = wp.lead_probability[static_cast<std::size_t>(m.out - 1)];
    const double avg = packet_averaged_transmission(j, packet, m.out - 1);
    rows.push_back({mol.name + " wavepacket |T|^2 at kappa=" + fmt(k, 4), avg, oracle,
                    std::abs(avg - oracle), 0.02 * std::max(std::abs(oracle), 1e-4)});
  }
}

void oracle_two_particle(const OracleTwoParticleConfig& t, const LatticeParams& lattice,
                         std::vector<OracleRow>& rows) {
  if (t.C > kMaxOracleCutoff) throw ValidationError("oracle.two_particle: C exceeds 1000");
  for (double E : build_grid(t.grid)) {
    const TwoParticleProblem p = two_particle_problem(E, t.C, t.d, t.K_eV, lattice);
    const TwoParticleSolution s = solve_two_particle(p);
    const TransferMatrixResult tm = transfer_matrix_two_particle(p);
    const double d = std::max(std::abs(s.T - tm.T), std::abs(s.R - tm.R));
    rows.push_back({"two-particle C=" + std::to_string(t.C) + " at E=" + fmt(E, 6) + " eV", std::arg(s.T),
                    std::arg(tm.T), d, 1e-8});
  }
}

int cmd_oracle_compare(const Options& o, std::ostream& out, std::ostream& err) {
  const SweepConfig cfg = require_config(o);
  const OracleConfig& oc = need(cfg.oracle, "oracle");
  std::vector<OracleRow> rows;
  if (oc.chain) oracle_chain(*oc.chain, cfg.lattice, rows);
  if (oc.molecule) oracle_molecule(*oc.molecule, cfg, rows);
  if (oc.two_particle) oracle_two_particle(*oc.two_particle, cfg.lattice, rows);
  if (rows.empty()) throw ValidationError("oracle section lists no comparisons");

  std::size_t failed = 0;
  for (const auto& r : rows) {
    char line[256];
    std::snprintf(line, sizeof line, "%-48s solver %-14.8g oracle %-14.8g diff %-10.3e tol %-8.2g %s\n",
                  r.check.c_str(), r.solver, r.oracle, r.discrepancy, r.tolerance, r.pass() ? "pass" : "FAIL");
    out << line;
    if (!r.pass()) ++failed;
  }
  out << rows.size() << " comparisons, " << failed << " failed\n";
  if (const auto path = output_path(cfg, o)) {
    write_file(*path, [&](std::ostream& s) {
      s << "check,solver,oracle,discrepancy,tolerance,pass\n";
      for (const auto& r : rows)
        s << '"' << r.check << "\"," << format_number(r.solver) << ',' << format_number(r.oracle) << ','
          << format_number(r.discrepancy) << ',' << format_number(r.tolerance) << ',' << (r.pass() ? 1 : 0)
          << "\n";
    });
  }
  if (failed) err << "error: " << failed << " oracle comparison(s) exceed tolerance\n";
  return failed ? kExitCheckFailed : kExitOk;
}

void describe_molecule(const MoleculeModel& m, std::ostream& out) {
  out << "molecule '" << m.name << "': " << m.orbital_count << " spin orbitals, "
      << m.neutral.electron_count() << " electrons, neutral energy " << fmt(m.neutral.energy, 9) << " eV\n";
  out << "charged states: " << m.charged_count() << "\n";
  for (const auto& c : m.charged)
    out << "  E = " << fmt(c.energy, 9) << " eV  resonance at E_in = " << fmt(c.energy - m.neutral.energy, 9)
        << " eV\n";
}

int cmd_validate(const Options& o, std::ostream& out, std::ostream&) {
  if (o.config.empty() && o.molecule.empty()) throw ValidationError("validate needs --config or --molecule");
  if (!o.molecule.empty()) describe_molecule(read_molecule(o.molecule), out);
  if (!o.config.empty()) {
    const SweepConfig cfg = load_config(o.config);
    if (cfg.molecule) {
      const MoleculeModel mol = load_molecule(cfg);
      describe_molecule(mol, out);
      if (!cfg.lead_factors.empty()) {
        const Junction j = junction_from(cfg, mol, cfg.lattice);
        out << "junction: " << j.lead_count() << " leads, coupling rank "
            << coupling_rank(CouplingMatrix{j.B}) << "\n";
      }
    }
    out << "lattice: a = " << fmt(cfg.lattice.a) << " A, beta = " << fmt(cfg.lattice.beta) << " eV, "
        << to_string(cfg.lattice.dispersion) << " dispersion\n";
  }
  out << "valid\n";
  return kExitOk;
}

}  // namespace

// ---------------------------------------------------------------------------

static SweepConfig parse_config_checked(const std::string& text, const fs::path& base_dir) {
  const json j = detail::parse_json(text, "config");
  detail::require_object(j, "config");
  detail::reject_unknown(j,
                         {"description", "molecule", "lead_factors", "lattice", "grid", "two_particle", "output",
                          "chain", "splitter", "hadamard", "oracle"},
                         "config");
  SweepConfig c;
  c.base_dir = base_dir;
  if (j.contains("molecule")) {
    c.molecule = resolve(base_dir, detail::string(j, "molecule", "config"));
    if (!fs::exists(*c.molecule)) throw ValidationError("molecule file not found: " + c.molecule->string());
  }
  if (j.contains("lead_factors")) {
    c.lead_factors = number_list(j, "lead_factors", "config");
    if (c.lead_factors.empty()) throw ValidationError("lead_factors must not be empty");
  }
  if (j.contains("lattice")) c.lattice = parse_lattice(j["lattice"]);
  if (j.contains("grid")) c.grid = parse_grid(j["grid"], "grid");
  if (j.contains("two_particle")) c.two_particle = parse_two_particle(j["two_particle"]);
  if (j.contains("output")) c.output = resolve(base_dir, detail::string(j, "output", "config"));
  if (j.contains("chain")) c.chain = parse_chain(j["chain"]);
  if (j.contains("splitter")) c.splitter = parse_splitter(j["splitter"]);
  if (j.contains("hadamard")) c.hadamard = parse_hadamard(j["hadamard"]);
  if (j.contains("oracle")) c.oracle = parse_oracle(j["oracle"]);
  return c;
}

SweepConfig parse_config(const std::string& text, const fs::path& base_dir) {
  try {
    return parse_config_checked(text, base_dir);
  } catch (const detail::json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
}

SweepConfig load_config(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("config file not found: " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

std::vector<double> build_grid(const GridConfig& g, const std::vector<double>& poles) {
  std::vector<double> grid;
  if (g.spacing == "log")
    grid = log_grid(g.min_eV, g.max_eV, g.count);
  else
    grid = linear_grid(g.min_eV, g.max_eV, g.count);
  if (!g.refine_poles || poles.empty()) return grid;
  if (g.spacing == "linear") return pole_refined_grid(g.min_eV, g.max_eV, g.count, poles);
  std::vector<double> extra = pole_refined_grid(g.min_eV, g.max_eV, 2, poles);
  grid.insert(grid.end(), extra.begin(), extra.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end(),
                         [](double x, double y) { return y - x <= 1e-12 * std::max(1.0, std::abs(y)); }),
             grid.end());
  return grid;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"molgate: molecular junction scattering and lead-circuit gates"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* c = sub->add_option("--config", o.config, "JSON configuration file");
    if (config_required) c->required();
    sub->add_option("--output", o.output, "output file, overriding the config");
    sub->add_option("--jobs", o.jobs, "worker threads for sweeps")->check(CLI::Range(1u, 256u));
  };

  std::function<int(const Options&, std::ostream&, std::ostream&)> run;
  auto bind = [&](CLI::App* sub, auto fn) { sub->callback([&run, fn] { run = fn; }); };

  auto* s1 = app.add_subcommand("spectrum1", "one-electron S-matrix sweep to CSV");
  add_common(s1, true);
  bind(s1, cmd_spectrum1);
  auto* s2 = app.add_subcommand("spectrum2", "two-electron transmission sweep to CSV");
  add_common(s2, true);
  bind(s2, cmd_spectrum2);
  auto* ch = app.add_subcommand("chain-check", "general solver against the exact dot-chain result");
  add_common(ch, false);
  bind(ch, cmd_chain_check);
  auto* sd = app.add_subcommand("splitter-design", "find the energy of least input reflection");
  add_common(sd, true);
  bind(sd, cmd_splitter_design);
  auto* hd = app.add_subcommand("hadamard", "Hadamard-test readout probability");
  add_common(hd, false);
  hd->add_option("--circuit", o.circuit, "JSON circuit description");
  bind(hd, cmd_hadamard);
  auto* oc = app.add_subcommand("oracle-compare", "solvers against independent oracles");
  add_common(oc, true);
  bind(oc, cmd_oracle_compare);
  auto* va = app.add_subcommand("validate", "check a molecule file or config");
  add_common(va, false);
  va->add_option("--molecule", o.molecule, "molecule JSON file");
  bind(va, cmd_validate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalidInput;
  }
  try {
    return run(o, out, err);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace molgate
