// Copyright 2026 The molgate Authors
// SPDX-License-Identifier: Apache-2.0

#include "molgate/scatter2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "molgate/errors.hpp"
#include "molgate/units.hpp"
#include "molgate/util.hpp"

namespace molgate {

TwoParticleProblem TwoParticleProblem::equal_energy(double E_in, long C, long d,
                                                    const LatticeParams& lattice) {
  TwoParticleProblem p;
  p.C = C;
  p.d = d;
  p.lattice = lattice;
  p.K = units::coulomb_constant / lattice.a;
  p.p1_kappa = 0.0;
  p.p2_kappa = -energy_to_momentum(E_in, lattice).kappa;
  return p;
}

void TwoParticleProblem::validate() const {
  lattice.validate();
  if (C < 1) throw ValidationError("cutoff C must be at least 1");
  if (d < 1) throw ValidationError("lead separation d must be at least 1");
  if (!(K >= 0.0)) throw ValidationError("Coulomb prefactor K must be non-negative");
  if (!(p2_kappa <= 0.0)) throw ValidationError("relative momentum p2 must be <= 0");
  if (!std::isfinite(p1_kappa)) throw ValidationError("total momentum must be finite");
}

double TwoParticleProblem::hopping() const {
  return 2.0 * lattice.beta_eff() * std::cos(0.5 * p1_kappa);
}

double TwoParticleProblem::eigen_term() const {
  return 4.0 * lattice.beta_eff() * std::cos(0.5 * p1_kappa) * std::cos(p2_kappa);
}

double coulomb_potential(long r, long d, double K, long C) {
  if (d < 1) throw ValidationError("lead separation d must be at least 1");
  if (std::labs(r) > C) return 0.0;
  const double rr = static_cast<double>(r), dd = static_cast<double>(d);
  return K / std::sqrt(rr * rr + dd * dd);
}

std::pair<double, double> momentum_transform(double p1_site, double p2_site) {
  return {p1_site + p2_site, 0.5 * (p1_site - p2_site)};
}

// ---------------------------------------------------------------------------

Eigen::MatrixXcd TridiagonalSystem::dense() const {
  const auto n = static_cast<Eigen::Index>(size());
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    A(i, i) = diag[static_cast<std::size_t>(i)];
    if (i + 1 < n) {
      A(i, i + 1) = sup[static_cast<std::size_t>(i)];
      A(i + 1, i) = sub[static_cast<std::size_t>(i)];
    }
  }
  return A;
}

std::vector<cd> TridiagonalSystem::apply(const std::vector<cd>& x) const {
  const std::size_t n = size();
  std::vector<cd> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    cd s = diag[i] * x[i];
    if (i > 0) s += sub[i - 1] * x[i - 1];
    if (i + 1 < n) s += sup[i] * x[i + 1];
    y[i] = s;
  }
  return y;
}

std::vector<cd> solve_tridiagonal(const TridiagonalSystem& A) {
  const std::size_t n = A.size();
  if (n == 0) return {};
  if (A.sub.size() + 1 != n || A.sup.size() + 1 != n || A.rhs.size() != n)
    throw ValidationError("tridiagonal system has inconsistent band lengths");

  // Row i of U has entries at columns i, i+1, i+2 (the last from pivoting fill-in).
  std::vector<cd> u0(n), u1(n), u2(n), y(n);
  cd c0 = A.diag[0], c1 = n > 1 ? A.sup[0] : cd{}, cr = A.rhs[0];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const cd l = A.sub[i], d1 = A.diag[i + 1], r1 = A.rhs[i + 1];
    const cd e1 = i + 2 < n ? A.sup[i + 1] : cd{};
    if (std::abs(l) > std::abs(c0)) {
      u0[i] = l;
      u1[i] = d1;
      u2[i] = e1;
      y[i] = r1;
      const cd m = c0 / l;
      c0 = c1 - m * d1;
      c1 = -m * e1;
      cr -= m * r1;
    } else {
      if (c0 == cd{}) throw SingularSystemError("tridiagonal system is singular");
      u0[i] = c0;
      u1[i] = c1;
      u2[i] = cd{};
      y[i] = cr;
      const cd m = l / c0;
      c0 = d1 - m * c1;
      c1 = e1;
      cr = r1 - m * cr;
    }
  }
  if (c0 == cd{}) throw SingularSystemError("tridiagonal system is singular");
  u0[n - 1] = c0;
  y[n - 1] = cr;

  std::vector<cd> x(n);
  for (std::size_t k = n; k-- > 0;) {
    cd s = y[k];
    if (k + 1 < n) s -= u1[k] * x[k + 1];
    if (k + 2 < n) s -= u2[k] * x[k + 2];
    x[k] = s / u0[k];
  }
  return x;
}

TridiagonalSystem assemble_system(const TwoParticleProblem& p) {
  p.validate();
  const long C = p.C;
  const std::size_t n = static_cast<std::size_t>(2 * C + 1);
  const double h = p.hopping(), lam = p.eigen_term(), k = p.p2_kappa;
  auto V = [&](long r) { return coulomb_potential(r, p.d, p.K, C); };
  auto e = [](double phase) { return std::polar(1.0, phase); };
  const double dC = static_cast<double>(C);

  TridiagonalSystem s;
  s.sub.assign(n - 1, cd{});
  s.sup.assign(n - 1, cd{});
  s.diag.assign(n, cd{});
  s.rhs.assign(n, cd{});

  // r = C: transmitted side.
  s.diag[0] = h * e(-k * (dC - 1.0)) + V(C) * e(-k * dC);
  s.sup[0] = -h;

  // Interior rows: column i holds f(C - i).
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const long r = C - static_cast<long>(i);
    s.diag[i] = V(r) + lam;
    // neighbour r + 1 sits in column i - 1
    s.sub[i - 1] = r + 1 == C ? -h * e(-k * dC) : cd(-h);
    // neighbour r - 1 sits in column i + 1
    if (r - 1 == -C) {
      s.sup[i] = -h * e(-k * dC);
      s.rhs[i] += h * e(k * dC);
    } else {
      s.sup[i] = -h;
    }
  }

  // r = -C: incoming side.
  s.sub[n - 2] = -h;
  s.diag[n - 1] = h * e(k * (1.0 - dC)) + V(-C) * e(-k * dC);
  s.rhs[n - 1] = -h * e(-k * (1.0 - dC)) - V(-C) * e(k * dC);
  return s;
}

TwoParticleSolution solve_two_particle(const TwoParticleProblem& p) {
  const TridiagonalSystem sys = assemble_system(p);
  const std::vector<cd> x = solve_tridiagonal(sys);
  const std::size_t n = x.size();

  TwoParticleSolution sol;
  sol.T = x.front();
  sol.R = x.back();
  sol.f.resize(n - 2);
  // x[i] = f(C - i); store ascending in r.
  for (std::size_t i = 1; i + 1 < n; ++i) sol.f[n - 2 - i] = x[i];

  const std::vector<cd> Ax = sys.apply(x);
  double rmax = 0.0, amax = 0.0, xmax = 0.0, bmax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    rmax = std::max(rmax, std::abs(Ax[i] - sys.rhs[i]));
    double row = std::abs(sys.diag[i]);
    if (i > 0) row += std::abs(sys.sub[i - 1]);
    if (i + 1 < n) row += std::abs(sys.sup[i]);
    amax = std::max(amax, row);
    xmax = std::max(xmax, std::abs(x[i]));
    bmax = std::max(bmax, std::abs(sys.rhs[i]));
  }
  sol.residual = rmax / (amax * xmax + bmax);
  sol.flux_defect = std::abs(1.0 - std::norm(sol.R) - std::norm(sol.T));
  if (!std::isfinite(sol.flux_defect) || sol.flux_defect > kFluxTolerance)
    throw FluxError("two-particle flux defect " + format_number(sol.flux_defect) +
                    " exceeds " + format_number(kFluxTolerance));
  return sol;
}

// ---------------------------------------------------------------------------

double TwoParticleTable::max_flux_defect() const {
  double m = 0.0;
  for (const auto& r : rows)
    if (r.ok) m = std::max(m, r.flux_defect);
  return m;
}

std::size_t TwoParticleTable::failed_rows() const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const TwoParticleRow& r) { return !r.ok; }));
}

TwoParticleTable phase_spectrum(const TwoParticleProblem& templ, const std::vector<double>& grid,
                                PhasePolicy policy, unsigned jobs) {
  templ.validate();
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw ValidationError("energy grid must be strictly increasing");
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();

  TwoParticleTable t;
  t.rows.resize(grid.size());
  parallel_for(grid.size(), jobs, [&](std::size_t i) {
    TwoParticleRow& row = t.rows[i];
    row.E_in = grid[i];
    try {
      TwoParticleProblem p = templ;
      p.p1_kappa = 0.0;
      p.p2_kappa = -energy_to_momentum(grid[i], templ.lattice).kappa;
      const TwoParticleSolution s = solve_two_particle(p);
      row.T = s.T;
      row.R = s.R;
      row.T2 = std::norm(s.T);
      row.R2 = std::norm(s.R);
      row.flux_defect = s.flux_defect;
    } catch (const Error& e) {
      row.ok = false;
      row.error = e.what();
      row.T = row.R = cd(nan, nan);
      row.T2 = row.R2 = row.flux_defect = nan;
    }
  });

  std::vector<double> raw(grid.size(), nan);
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (t.rows[i].ok && std::abs(t.rows[i].T) >= kPhaseAmplitudeFloor) raw[i] = std::arg(t.rows[i].T);
  const UnwrapResult u = unwrap_phase(raw, policy);
  for (std::size_t i = 0; i < grid.size(); ++i) t.rows[i].argT = u.phase[i];
  for (std::size_t i : u.jumps)
    t.phase_warnings.push_back("phase of T jumps by more than pi/2 at E = " +
                               format_number(grid[i]) + " eV");
  return t;
}

void write_two_particle_csv(std::ostream& out, const TwoParticleTable& t) {
  out << "E_in_eV,T2,argT,R2\n";
  for (const auto& r : t.rows)
    out << format_number(r.E_in) << ',' << format_number(r.T2) << ',' << format_number(r.argT)
        << ',' << format_number(r.R2) << '\n';
}

Eigen::SparseMatrix<double> pair_hamiltonian(long L, long d, double K, long C, double beta) {
  if (L < 2) throw ValidationError("pair Hamiltonian needs at least two sites per lead");
  const long block = L * L;
  auto index = [&](int sector, long i1, long i2) { return sector * block + i1 * L + i2; };
  std::vector<Eigen::Triplet<double>> trip;
  for (int sector = 0; sector < 2; ++sector) {
    for (long i1 = 0; i1 < L; ++i1) {
      for (long i2 = 0; i2 < L; ++i2) {
        const long row = index(sector, i1, i2);
        trip.emplace_back(row, row, 4.0 * beta + coulomb_potential(i1 - i2, d, K, C));
        if (i1 + 1 < L) {
          trip.emplace_back(row, index(sector, i1 + 1, i2), -beta);
          trip.emplace_back(index(sector, i1 + 1, i2), row, -beta);
        }
        if (i2 + 1 < L) {
          trip.emplace_back(row, index(sector, i1, i2 + 1), -beta);
          trip.emplace_back(index(sector, i1, i2 + 1), row, -beta);
        }
      }
    }
  }
  Eigen::SparseMatrix<double> H(2 * block, 2 * block);
  H.setFromTriplets(trip.begin(), trip.end());
  return H;
}

}  // namespace molgate
