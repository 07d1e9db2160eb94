// Copyright 2026 The molgate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include <Eigen/SparseCore>

#include "molgate/scatter1.hpp"
#include "molgate/scatter2.hpp"

namespace molgate {

/// Finite realization of a junction: N leads of L sites each (on-site 2 beta,
/// hopping -beta, site 1 next to the molecule) plus the G+1 molecular levels
/// D - E0, coupled through B. Times are in hbar/eV.
struct TruncatedLattice {
  Eigen::SparseMatrix<cd> H;
  Eigen::Index leads = 0;
  Eigen::Index length = 0;   ///< L
  Eigen::Index levels = 0;   ///< G + 1
  double beta = 0.0;
  double a = 0.0;

  Eigen::Index dimension() const { return leads * length + levels; }
  /// Row of site x (1-based, 1 = next to the molecule) on lead n.
  Eigen::Index site(Eigen::Index n, Eigen::Index x) const { return n * length + (x - 1); }
  Eigen::Index level(Eigen::Index g) const { return leads * length + g; }
  double hermiticity_defect() const;
};

/// Throws ValidationError if L < 50.
TruncatedLattice build_truncated_hamiltonian(const Junction& junction, Eigen::Index L);

struct Wavepacket {
  double x0 = 0.0;      ///< center site
  double sigma = 10.0;  ///< width in sites
  double kappa0 = 0.5;  ///< carrier momentum (moving toward the molecule)
  Eigen::Index lead = 0;

  /// Throws ValidationError if sigma < 5 or the packet is closer than 3 sigma
  /// to either end of a lead of length L.
  void validate(Eigen::Index L) const;
  /// Normalized initial state on `lattice`.
  Eigen::VectorXcd state(const TruncatedLattice& lattice) const;
};

/// Bessel functions J_0 .. J_kmax at x by Miller's backward recurrence.
std::vector<double> bessel_j_sequence(double x, int kmax);

/// Chebyshev expansion of exp(-i H t) applied to psi.
class ChebyshevPropagator {
 public:
  explicit ChebyshevPropagator(const Eigen::SparseMatrix<cd>& H, double tolerance = 1e-12);

  /// Advances psi by time t (hbar/eV), internally in sub-steps.
  Eigen::VectorXcd evolve(const Eigen::VectorXcd& psi, double t) const;

  double spectral_center() const { return center_; }
  double spectral_radius() const { return radius_; }

 private:
  Eigen::VectorXcd step(const Eigen::VectorXcd& psi, double dt) const;

  Eigen::SparseMatrix<cd> H_;
  double tol_;
  double center_ = 0.0;
  double radius_ = 1.0;
};

struct WavepacketResult {
  std::vector<double> lead_probability;  ///< per lead, sites beyond the junction region
  double junction_probability = 0.0;     ///< molecule plus the first `junction_sites` lead sites
  double norm_drift = 0.0;
  double boundary_probability = 0.0;     ///< within 3 sigma of any lead end
  double t_final = 0.0;
};

/// Group velocity 2 beta sin(kappa) in sites per hbar/eV.
double group_velocity(double kappa, double beta);

/// Evolves the packet to t_final (0 picks the time at which the packet center
/// returns to its starting distance) and integrates the probability on every
/// lead. Throws NumericalError if more than 1e-4 probability reaches a lead
/// end, ValidationError if the packet could outrun the lattice.
WavepacketResult wavepacket_transmission(const TruncatedLattice& lattice, const Wavepacket& packet,
                                         double t_final = 0.0, Eigen::Index junction_sites = 10);

/// Normalized momentum weights |A(kappa)|^2 of the packet's incoming
/// component, A(kappa) = sum_x psi0(x) e^{i kappa x}, on a uniform grid.
struct MomentumDistribution {
  std::vector<double> kappa;
  std::vector<double> weight;  ///< trapezoid weights times |A|^2, summing to 1
};
MomentumDistribution packet_momentum_distribution(const Wavepacket& packet, std::size_t points = 2001);

/// sum over the packet's momenta of |S(out, in)(kappa)|^2.
double packet_averaged_transmission(const Junction& junction, const Wavepacket& packet,
                                    Eigen::Index out, std::size_t points = 2001);

struct ArrivalResult {
  double time = 0.0;               ///< flux-weighted mean crossing time
  double transmitted_norm = 0.0;   ///< time-integrated flux through the detector
};

/// Records the probability current through `detector` (site) on lead `out`
/// and returns its first moment in time. Throws NumericalError when less than
/// 0.1 of the packet crosses.
ArrivalResult arrival_time(const TruncatedLattice& lattice, const Wavepacket& packet,
                           Eigen::Index out, Eigen::Index detector, double t_final,
                           std::size_t samples = 2000);

struct TransferMatrixResult {
  cd R;
  cd T;
  double flux_defect = 0.0;
  double log_scale = 0.0;  ///< natural log of the renormalization applied
};

/// Independent two-particle solution: propagates the relative-coordinate
/// recurrence from the transmitted side across r = C .. -C with 2x2 step
/// matrices and matches plane waves on the incoming side.
TransferMatrixResult transfer_matrix_two_particle(const TwoParticleProblem& problem);

}  // namespace molgate
