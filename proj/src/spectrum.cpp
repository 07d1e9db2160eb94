// Copyright 2026 The molgate Authors
// SPDX-License-Identifier: Apache-2.0

#include "molgate/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "molgate/errors.hpp"
#include "molgate/units.hpp"
#include "molgate/util.hpp"

namespace molgate {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

UnwrapResult unwrap_phase(const std::vector<double>& wrapped, PhasePolicy policy) {
  UnwrapResult res;
  res.phase.resize(wrapped.size(), kNaN);
  bool have_prev = false;
  double prev = 0.0;
  for (std::size_t i = 0; i < wrapped.size(); ++i) {
    const double x = wrapped[i];
    if (std::isnan(x)) continue;
    if (!have_prev) {
      res.phase[i] = x;
    } else {
      const double step = wrap_angle(x - prev);
      if (std::abs(step) > 0.5 * units::pi) {
        if (policy == PhasePolicy::Strict)
          throw PhaseRefinementError("phase jumps by " + format_number(step) +
                                     " rad at grid index " + std::to_string(i) +
                                     "; refine the energy grid");
        res.jumps.push_back(i);
      }
      res.phase[i] = prev + step;
    }
    prev = res.phase[i];
    have_prev = true;
  }
  return res;
}

std::size_t SpectrumTable::failed_rows() const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const SpectrumRow& r) { return !r.ok; }));
}

std::size_t SpectrumTable::warning_count() const {
  std::size_t n = phase_warnings.size();
  for (const auto& r : rows) n += r.warnings.size() + (r.ok ? 0 : 1);
  return n;
}

double SpectrumTable::max_unitarity_defect() const {
  double m = 0.0;
  for (const auto& r : rows)
    if (r.ok) m = std::max(m, r.unitarity_defect);
  return m;
}

std::vector<double> SpectrumTable::column(Eigen::Index out, Eigen::Index in) const {
  std::vector<double> v;
  v.reserve(rows.size());
  for (const auto& r : rows) v.push_back(r.ok ? r.T2(out, in) : kNaN);
  return v;
}

std::vector<double> SpectrumTable::energies() const {
  std::vector<double> v;
  v.reserve(rows.size());
  for (const auto& r : rows) v.push_back(r.E_in);
  return v;
}

SpectrumTable spectrum(const Junction& junction, const std::vector<double>& grid,
                       PhasePolicy policy, unsigned jobs) {
  junction.validate();
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw ValidationError("energy grid must be strictly increasing");

  const Eigen::Index N = junction.lead_count();
  SpectrumTable table;
  table.leads = N;
  table.rows.resize(grid.size());

  parallel_for(grid.size(), jobs, [&](std::size_t i) {
    SpectrumRow& row = table.rows[i];
    row.E_in = grid[i];
    try {
      ScatteringSolution sol = s_matrix(junction, grid[i]);
      row.S = sol.S;
      row.T2 = sol.S.cwiseAbs2();
      row.unitarity_defect = sol.unitarity_defect;
      row.warnings = std::move(sol.warnings);
    } catch (const Error& e) {
      row.ok = false;
      row.error = e.what();
      row.S = Eigen::MatrixXcd::Constant(N, N, cd(kNaN, kNaN));
      row.T2 = Eigen::MatrixXd::Constant(N, N, kNaN);
    }
    row.argS = Eigen::MatrixXd::Constant(N, N, kNaN);
  });

  for (Eigen::Index o = 0; o < N; ++o) {
    for (Eigen::Index n = 0; n < N; ++n) {
      std::vector<double> raw(grid.size(), kNaN);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& r = table.rows[i];
        if (r.ok && std::abs(r.S(o, n)) >= kPhaseAmplitudeFloor) raw[i] = std::arg(r.S(o, n));
      }
      UnwrapResult u = unwrap_phase(raw, policy);
      for (std::size_t i = 0; i < grid.size(); ++i) table.rows[i].argS(o, n) = u.phase[i];
      for (std::size_t i : u.jumps)
        table.phase_warnings.push_back("phase of S[" + std::to_string(o + 1) + "][" +
                                       std::to_string(n + 1) + "] jumps by more than pi/2 at E = " +
                                       format_number(grid[i]) + " eV");
    }
  }
  return table;
}

void write_spectrum_csv(std::ostream& out, const SpectrumTable& t) {
  const Eigen::Index N = t.leads;
  auto label = [](const char* name, Eigen::Index i, Eigen::Index j) {
    return std::string(name) + "[" + std::to_string(i + 1) + "][" + std::to_string(j + 1) + "]";
  };
  out << "E_in_eV";
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index j = 0; j < N; ++j) out << ',' << label("S_re", i, j) << ',' << label("S_im", i, j);
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index j = 0; j < N; ++j) out << ',' << label("T2", i, j);
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index j = 0; j < N; ++j) out << ',' << label("argS", i, j);
  out << '\n';
  for (const auto& r : t.rows) {
    out << format_number(r.E_in);
    for (Eigen::Index i = 0; i < N; ++i)
      for (Eigen::Index j = 0; j < N; ++j)
        out << ',' << format_number(r.S(i, j).real()) << ',' << format_number(r.S(i, j).imag());
    for (Eigen::Index i = 0; i < N; ++i)
      for (Eigen::Index j = 0; j < N; ++j) out << ',' << format_number(r.T2(i, j));
    for (Eigen::Index i = 0; i < N; ++i)
      for (Eigen::Index j = 0; j < N; ++j) out << ',' << format_number(r.argS(i, j));
    out << '\n';
  }
}

// ---------------------------------------------------------------------------

std::vector<double> linear_grid(double lo, double hi, std::size_t count) {
  if (count < 2 || !(hi > lo)) throw ValidationError("grid needs count >= 2 and min < max");
  std::vector<double> g(count);
  for (std::size_t i = 0; i < count; ++i)
    g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  g.back() = hi;
  return g;
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0)) throw ValidationError("logarithmic grid needs a positive lower bound");
  auto g = linear_grid(std::log(lo), std::log(hi), count);
  for (double& x : g) x = std::exp(x);
  g.front() = lo;
  g.back() = hi;
  return g;
}

std::vector<double> pole_refined_grid(double lo, double hi, std::size_t count,
                                      const std::vector<double>& poles, double nearest,
                                      double farthest, std::size_t per_side) {
  std::vector<double> g = linear_grid(lo, hi, count);
  if (per_side >= 2 && farthest > nearest) {
    const auto offsets = log_grid(nearest, farthest, per_side);
    for (double p : poles) {
      if (!(p > lo && p < hi)) continue;
      for (double d : offsets) {
        if (p - d > lo) g.push_back(p - d);
        if (p + d < hi) g.push_back(p + d);
      }
    }
  }
  std::sort(g.begin(), g.end());
  std::vector<double> out;
  out.reserve(g.size());
  for (double x : g) {
    bool near_pole = false;
    for (double p : poles) near_pole = near_pole || std::abs(x - p) < 10.0 * kPoleTolerance;
    if (near_pole) continue;
    if (!out.empty() && x - out.back() <= 1e-12 * std::max(1.0, std::abs(x))) continue;
    out.push_back(x);
  }
  return out;
}

std::vector<double> resonance_energies(const Junction& j) {
  std::vector<double> e;
  for (Eigen::Index g = 0; g < j.D.size(); ++g) e.push_back(j.D(g) - j.E0);
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  return e;
}

std::vector<std::size_t> find_peaks(const std::vector<double>& values, double min_height) {
  const std::size_t n = values.size();
  std::vector<double> s(n, kNaN);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    int cnt = 0;
    for (std::size_t k = (i == 0 ? 0 : i - 1); k <= std::min(n - 1, i + 1); ++k) {
      if (std::isnan(values[k])) continue;
      sum += values[k];
      ++cnt;
    }
    if (!std::isnan(values[i]) && cnt > 0) s[i] = sum / cnt;
  }
  std::vector<std::size_t> peaks;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::isnan(s[i]) || s[i] < min_height) continue;
    std::size_t l = i, r = i;
    while (l > 0 && std::isnan(s[l - 1])) --l;
    while (r + 1 < n && std::isnan(s[r + 1])) ++r;
    const bool left_ok = l == 0 || s[i] > s[l - 1];
    const bool right_ok = r + 1 >= n || s[i] >= s[r + 1];
    if (i > 0 && i + 1 < n && left_ok && right_ok) peaks.push_back(i);
  }
  return peaks;
}

double refine_peak(const std::function<double(double)>& f, double lo, double hi, double tol,
                   int max_iter) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < max_iter && (b - a) > tol * std::max(1.0, std::abs(a)); ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? c : d;
}

std::vector<Peak> transmission_peaks(const Junction& junction, const std::vector<double>& grid,
                                     Eigen::Index out, Eigen::Index in, double min_height) {
  auto T2 = [&](double E) {
    try {
      return s_matrix(junction, E).transmission(out, in);
    } catch (const Error&) {
      return kNaN;
    }
  };
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = T2(grid[i]);
  std::vector<Peak> peaks;
  for (std::size_t i : find_peaks(values, 0.0)) {
    const double lo = grid[i >= 2 ? i - 2 : 0];
    const double hi = grid[std::min(grid.size() - 1, i + 2)];
    const double E = refine_peak(
        [&](double x) {
          const double v = T2(x);
          return std::isnan(v) ? -1.0 : v;
        },
        lo, hi, 1e-13);
    const double v = std::max(T2(E), values[i]);
    if (v < min_height) continue;
    if (!peaks.empty() && std::abs(peaks.back().E_in - E) < 1e-9) {
      peaks.back().value = std::max(peaks.back().value, v);
      continue;
    }
    peaks.push_back({v == values[i] && values[i] > T2(E) ? grid[i] : E, v});
  }
  return peaks;
}

std::vector<SplitterCandidate> splitter_candidates(const Junction& junction,
                                                   const std::vector<double>& grid,
                                                   Eigen::Index input) {
  if (input < 0 || input >= junction.lead_count()) throw ValidationError("input lead out of range");
  auto passed = [&](double E) {
    try {
      return 1.0 - std::norm(s_matrix(junction, E).S(input, input));
    } catch (const Error&) {
      return kNaN;
    }
  };
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = passed(grid[i]);
  std::vector<SplitterCandidate> out;
  for (std::size_t i : find_peaks(values, 0.0)) {
    const double lo = grid[i >= 2 ? i - 2 : 0];
    const double hi = grid[std::min(grid.size() - 1, i + 2)];
    double E = refine_peak(
        [&](double x) {
          const double v = passed(x);
          return std::isnan(v) ? -1.0 : v;
        },
        lo, hi, 1e-14);
    if (!(passed(E) >= values[i])) E = grid[i];
    ScatteringSolution s;
    try {
      s = s_matrix(junction, E);
    } catch (const Error&) {
      continue;
    }
    SplitterCandidate c;
    c.E_in = E;
    c.reflection = std::norm(s.S(input, input));
    c.T2 = s.S.col(input).cwiseAbs2();
    if (!out.empty() && std::abs(out.back().E_in - E) < 1e-9) {
      if (c.reflection < out.back().reflection) out.back() = c;
      continue;
    }
    out.push_back(c);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& x, const auto& y) { return x.reflection < y.reflection; });
  return out;
}

}  // namespace molgate
