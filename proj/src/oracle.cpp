// Copyright 2026 The molgate Authors
// SPDX-License-Identifier: Apache-2.0

#include "molgate/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "molgate/errors.hpp"
#include "molgate/units.hpp"
#include "molgate/util.hpp"

namespace molgate {

double TruncatedLattice::hermiticity_defect() const {
  const Eigen::SparseMatrix<cd> D = H - Eigen::SparseMatrix<cd>(H.adjoint());
  double m = 0.0;
  for (Eigen::Index k = 0; k < D.outerSize(); ++k)
    for (Eigen::SparseMatrix<cd>::InnerIterator it(D, k); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

TruncatedLattice build_truncated_hamiltonian(const Junction& j, Eigen::Index L) {
  j.validate();
  if (L < 50) throw ValidationError("truncated leads need at least 50 sites");
  TruncatedLattice lat;
  lat.leads = j.lead_count();
  lat.length = L;
  lat.levels = j.charged_count();
  lat.beta = j.lattice.beta;
  lat.a = j.lattice.a;

  std::vector<Eigen::Triplet<cd>> trip;
  const double b = lat.beta;
  for (Eigen::Index n = 0; n < lat.leads; ++n) {
    for (Eigen::Index x = 1; x <= L; ++x) {
      trip.emplace_back(lat.site(n, x), lat.site(n, x), 2.0 * b);
      if (x < L) {
        trip.emplace_back(lat.site(n, x), lat.site(n, x + 1), -b);
        trip.emplace_back(lat.site(n, x + 1), lat.site(n, x), -b);
      }
    }
  }
  for (Eigen::Index g = 0; g < lat.levels; ++g) {
    trip.emplace_back(lat.level(g), lat.level(g), j.D(g) - j.E0);
    for (Eigen::Index n = 0; n < lat.leads; ++n) {
      const cd v = j.B(g, n);
      if (v == cd{}) continue;
      trip.emplace_back(lat.level(g), lat.site(n, 1), v);
      trip.emplace_back(lat.site(n, 1), lat.level(g), std::conj(v));
    }
  }
  lat.H.resize(lat.dimension(), lat.dimension());
  lat.H.setFromTriplets(trip.begin(), trip.end());
  lat.H.makeCompressed();
  return lat;
}

// ---------------------------------------------------------------------------

void Wavepacket::validate(Eigen::Index L) const {
  if (sigma < 5.0) throw ValidationError("wavepacket width must be at least 5 sites");
  if (x0 - 3.0 * sigma < 1.0 || x0 + 3.0 * sigma > static_cast<double>(L))
    throw ValidationError("wavepacket must stay 3 sigma away from both ends of its lead");
  if (!(kappa0 > 0.0 && kappa0 < units::pi)) throw ValidationError("carrier momentum must lie in (0, pi)");
}

Eigen::VectorXcd Wavepacket::state(const TruncatedLattice& lat) const {
  validate(lat.length);
  if (lead < 0 || lead >= lat.leads) throw ValidationError("wavepacket lead out of range");
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(lat.dimension());
  for (Eigen::Index x = 1; x <= lat.length; ++x) {
    const double dx = static_cast<double>(x) - x0;
    psi(lat.site(lead, x)) = std::exp(-dx * dx / (2.0 * sigma * sigma)) *
                             std::polar(1.0, -kappa0 * static_cast<double>(x));
  }
  return psi / psi.norm();
}

std::vector<double> bessel_j_sequence(double x, int kmax) {
  std::vector<double> J(static_cast<std::size_t>(kmax) + 1, 0.0);
  if (x == 0.0) {
    J[0] = 1.0;
    return J;
  }
  const double ax = std::abs(x);
  int M = std::max(kmax, static_cast<int>(ax)) + 40 + static_cast<int>(10.0 * std::cbrt(ax));
  if (M % 2) ++M;
  std::vector<double> t(static_cast<std::size_t>(M) + 2, 0.0);
  t[static_cast<std::size_t>(M) + 1] = 0.0;
  t[static_cast<std::size_t>(M)] = 1e-300;
  for (int k = M; k >= 1; --k) {
    const auto uk = static_cast<std::size_t>(k);
    t[uk - 1] = (2.0 * k / ax) * t[uk] - t[uk + 1];
    if (std::abs(t[uk - 1]) > 1e250) {
      for (std::size_t i = uk - 1; i <= static_cast<std::size_t>(M) + 1; ++i) t[i] *= 1e-250;
    }
  }
  double norm = t[0];
  for (int k = 2; k <= M; k += 2) norm += 2.0 * t[static_cast<std::size_t>(k)];
  for (int k = 0; k <= kmax; ++k) {
    double v = t[static_cast<std::size_t>(k)] / norm;
    if (x < 0.0 && (k % 2)) v = -v;
    J[static_cast<std::size_t>(k)] = v;
  }
  return J;
}

ChebyshevPropagator::ChebyshevPropagator(const Eigen::SparseMatrix<cd>& H, double tolerance)
    : H_(H), tol_(tolerance) {
  double lo = 1e300, hi = -1e300;
  std::vector<double> diag(static_cast<std::size_t>(H.rows()), 0.0), off(static_cast<std::size_t>(H.rows()), 0.0);
  for (Eigen::Index k = 0; k < H.outerSize(); ++k) {
    for (Eigen::SparseMatrix<cd>::InnerIterator it(H, k); it; ++it) {
      const auto r = static_cast<std::size_t>(it.row());
      if (it.row() == it.col())
        diag[r] += it.value().real();
      else
        off[r] += std::abs(it.value());
    }
  }
  for (std::size_t r = 0; r < diag.size(); ++r) {
    lo = std::min(lo, diag[r] - off[r]);
    hi = std::max(hi, diag[r] + off[r]);
  }
  center_ = 0.5 * (lo + hi);
  radius_ = std::max(1e-12, 0.5 * (hi - lo) * 1.01);
}

Eigen::VectorXcd ChebyshevPropagator::step(const Eigen::VectorXcd& psi, double dt) const {
  const double x = radius_ * dt;
  const int kmax = static_cast<int>(std::ceil(std::abs(x) + 20.0 * std::cbrt(std::abs(x)) + 20.0));
  const std::vector<double> J = bessel_j_sequence(x, kmax);
  int K = kmax;
  while (K > 1 && std::abs(J[static_cast<std::size_t>(K)]) < tol_ * 1e-4) --K;

  const double inv_r = 1.0 / radius_;
  auto apply = [&](const Eigen::VectorXcd& v) -> Eigen::VectorXcd {
    return inv_r * (H_ * v - center_ * v);
  };
  Eigen::VectorXcd t0 = psi;
  Eigen::VectorXcd t1 = apply(psi);
  Eigen::VectorXcd acc = J[0] * t0;
  const cd mi(0.0, -1.0);
  cd ipow = mi;
  acc += 2.0 * ipow * J[1] * t1;
  for (int k = 2; k <= K; ++k) {
    Eigen::VectorXcd t2 = 2.0 * apply(t1) - t0;
    ipow *= mi;
    acc += 2.0 * ipow * J[static_cast<std::size_t>(k)] * t2;
    t0.swap(t1);
    t1.swap(t2);
  }
  return std::polar(1.0, -center_ * dt) * acc;
}

Eigen::VectorXcd ChebyshevPropagator::evolve(const Eigen::VectorXcd& psi, double t) const {
  if (t == 0.0) return psi;
  const double max_arg = 200.0;
  const int steps = std::max(1, static_cast<int>(std::ceil(radius_ * std::abs(t) / max_arg)));
  const double dt = t / steps;
  Eigen::VectorXcd v = psi;
  for (int s = 0; s < steps; ++s) v = step(v, dt);
  return v;
}

// ---------------------------------------------------------------------------

double group_velocity(double kappa, double beta) { return 2.0 * beta * std::sin(kappa); }

WavepacketResult wavepacket_transmission(const TruncatedLattice& lat, const Wavepacket& packet,
                                         double t_final, Eigen::Index junction_sites) {
  const Eigen::VectorXcd psi0 = packet.state(lat);
  const double v = group_velocity(packet.kappa0, lat.beta);
  if (t_final <= 0.0) t_final = 2.0 * packet.x0 / v;
  if (v * t_final - packet.x0 + 3.0 * packet.sigma > static_cast<double>(lat.length))
    throw ValidationError("evolution time lets the packet reach the far end of the leads");

  ChebyshevPropagator prop(lat.H);
  const Eigen::VectorXcd psi = prop.evolve(psi0, t_final);

  WavepacketResult res;
  res.t_final = t_final;
  res.norm_drift = std::abs(psi.norm() - 1.0);
  res.lead_probability.assign(static_cast<std::size_t>(lat.leads), 0.0);
  const auto edge = static_cast<Eigen::Index>(std::floor(static_cast<double>(lat.length) - 3.0 * packet.sigma));
  for (Eigen::Index n = 0; n < lat.leads; ++n) {
    for (Eigen::Index x = 1; x <= lat.length; ++x) {
      const double p = std::norm(psi(lat.site(n, x)));
      if (x <= junction_sites)
        res.junction_probability += p;
      else
        res.lead_probability[static_cast<std::size_t>(n)] += p;
      if (x > edge) res.boundary_probability += p;
    }
  }
  for (Eigen::Index g = 0; g < lat.levels; ++g) res.junction_probability += std::norm(psi(lat.level(g)));
  if (res.boundary_probability > 1e-4)
    throw NumericalError("wavepacket reached a lead end (probability " +
                         format_number(res.boundary_probability) + "); lengthen the leads");
  return res;
}

MomentumDistribution packet_momentum_distribution(const Wavepacket& p, std::size_t points) {
  if (points < 3) throw ValidationError("momentum grid needs at least 3 points");
  const double lo = std::max(1e-6, p.kappa0 - 10.0 / p.sigma);
  const double hi = std::min(units::pi - 1e-6, p.kappa0 + 10.0 / p.sigma);
  const auto xlo = static_cast<long>(std::floor(p.x0 - 10.0 * p.sigma));
  const auto xhi = static_cast<long>(std::ceil(p.x0 + 10.0 * p.sigma));
  MomentumDistribution d;
  d.kappa = linear_grid(lo, hi, points);
  d.weight.resize(points);
  double total = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    cd A{};
    for (long x = std::max(1L, xlo); x <= xhi; ++x) {
      const double dx = static_cast<double>(x) - p.x0;
      A += std::exp(-dx * dx / (2.0 * p.sigma * p.sigma)) *
           std::polar(1.0, (d.kappa[i] - p.kappa0) * static_cast<double>(x));
    }
    const double w = (i == 0 || i + 1 == points) ? 0.5 : 1.0;
    d.weight[i] = w * std::norm(A);
    total += d.weight[i];
  }
  for (double& w : d.weight) w /= total;
  return d;
}

double packet_averaged_transmission(const Junction& j, const Wavepacket& p, Eigen::Index out,
                                    std::size_t points) {
  const MomentumDistribution d = packet_momentum_distribution(p, points);
  double avg = 0.0;
  for (std::size_t i = 0; i < d.kappa.size(); ++i) {
    double k = d.kappa[i];
    ScatteringSolution s;
    try {
      s = s_matrix_at_kappa(j, k);
    } catch (const PoleError&) {
      s = s_matrix_at_kappa(j, k * (1.0 + 1e-9));
    }
    avg += d.weight[i] * s.transmission(out, p.lead);
  }
  return avg;
}

ArrivalResult arrival_time(const TruncatedLattice& lat, const Wavepacket& packet, Eigen::Index out,
                           Eigen::Index detector, double t_final, std::size_t samples) {
  if (detector < 1 || detector >= lat.length) throw ValidationError("detector site out of range");
  if (samples < 10) throw ValidationError("arrival time needs at least 10 samples");
  ChebyshevPropagator prop(lat.H);
  Eigen::VectorXcd psi = packet.state(lat);
  const double dt = t_final / static_cast<double>(samples);
  const Eigen::Index y0 = lat.site(out, detector), y1 = lat.site(out, detector + 1);
  auto current = [&](const Eigen::VectorXcd& v) {
    return 2.0 * lat.beta * std::imag(std::conj(v(y0)) * v(y1));
  };
  double norm = 0.0, moment = 0.0;
  double prev_j = current(psi), prev_t = 0.0;
  for (std::size_t s = 1; s <= samples; ++s) {
    psi = prop.evolve(psi, dt);
    const double t = dt * static_cast<double>(s);
    const double jv = current(psi);
    norm += 0.5 * (prev_j + jv) * dt;
    moment += 0.5 * (prev_t * prev_j + t * jv) * dt;
    prev_j = jv;
    prev_t = t;
  }
  if (norm < 0.1)
    throw NumericalError("less than 10% of the packet crossed the detector (" + format_number(norm) + ")");
  return {moment / norm, norm};
}

TransferMatrixResult transfer_matrix_two_particle(const TwoParticleProblem& p) {
  p.validate();
  const long C = p.C;
  const double h = p.hopping(), lam = p.eigen_term(), k = p.p2_kappa;
  if (h == 0.0) throw NumericalError("vanishing hopping in the relative coordinate");
  auto e = [](double phase) { return std::polar(1.0, phase); };

  // v = (psi(r), psi(r + 1)), starting on the transmitted side with T = 1.
  Eigen::Vector2cd v(e(-k * static_cast<double>(C)), e(-k * static_cast<double>(C + 1)));
  TransferMatrixResult res;
  for (long r = C; r >= -C; --r) {
    Eigen::Matrix2cd step;
    step << (coulomb_potential(r, p.d, p.K, C) + lam) / h, -1.0, 1.0, 0.0;
    v = step * v;  // (psi(r - 1), psi(r))
    const double m = v.cwiseAbs().maxCoeff();
    if (m > 1e100) {
      v /= m;
      res.log_scale += std::log(m);
    }
  }
  // v = (psi(-C - 1), psi(-C)) = alpha e^{-i k r} + gamma e^{i k r}
  const double c = static_cast<double>(C);
  const cd det = e(-k) - e(k);
  const cd alpha = (v(1) * e(-k * (c + 1.0)) - v(0) * e(-k * c)) / det;
  const cd gamma = (e(k * c) * v(0) - e(k * (c + 1.0)) * v(1)) / det;
  if (alpha == cd{}) throw NumericalError("transfer matrix found no incoming wave");
  res.T = std::exp(-res.log_scale) / alpha;
  res.R = gamma / alpha;
  res.flux_defect = std::abs(1.0 - std::norm(res.R) - std::norm(res.T));
  return res;
}

}  // namespace molgate
