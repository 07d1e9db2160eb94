// Copyright 2026 The molgate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "molgate/scatter1.hpp"

namespace molgate {

/// What unwrap_phase does when consecutive samples differ by more than pi/2.
enum class PhasePolicy {
  Strict,  ///< throw PhaseRefinementError
  Flag,    ///< continue on the nearest branch and report the index
};

struct UnwrapResult {
  std::vector<double> phase;        ///< NaN where the input was NaN
  std::vector<std::size_t> jumps;   ///< indices whose step exceeded pi/2
};

/// Nearest-branch continuation of a sequence of principal-value phases.
/// NaN entries (undefined phase) are passed through and do not break the
/// continuation.
UnwrapResult unwrap_phase(const std::vector<double>& wrapped, PhasePolicy policy);

/// Amplitudes smaller than this have no meaningful phase.
inline constexpr double kPhaseAmplitudeFloor = 1e-10;

struct SpectrumRow {
  double E_in = 0.0;
  bool ok = true;
  std::string error;  ///< set when the solve failed; numeric columns are NaN
  Eigen::MatrixXcd S;
  Eigen::MatrixXd T2;
  Eigen::MatrixXd argS;  ///< unwrapped along the grid
  double unitarity_defect = 0.0;
  std::vector<std::string> warnings;
};

struct SpectrumTable {
  Eigen::Index leads = 0;
  std::vector<SpectrumRow> rows;
  std::vector<std::string> phase_warnings;

  std::size_t failed_rows() const;
  std::size_t warning_count() const;
  double max_unitarity_defect() const;
  /// |S(out, in)|^2 along the grid (NaN on failed rows).
  std::vector<double> column(Eigen::Index out, Eigen::Index in) const;
  std::vector<double> energies() const;
};

/// Solves every grid energy (strictly increasing). Failed rows are kept and
/// flagged. Rows may be computed on `jobs` threads; the result does not depend
/// on it.
SpectrumTable spectrum(const Junction& junction, const std::vector<double>& grid,
                       PhasePolicy policy = PhasePolicy::Strict, unsigned jobs = 1);

void write_spectrum_csv(std::ostream& out, const SpectrumTable& table);

// ---------------------------------------------------------------------------
// Grids and peaks
// ---------------------------------------------------------------------------

std::vector<double> linear_grid(double lo, double hi, std::size_t count);
std::vector<double> log_grid(double lo, double hi, std::size_t count);

/// Linear grid plus geometric clusters of points on both sides of every pole
/// energy in (lo, hi), from `nearest` out to `farthest` eV away. Sorted and
/// de-duplicated; exact poles are never included.
std::vector<double> pole_refined_grid(double lo, double hi, std::size_t count,
                                      const std::vector<double>& poles, double nearest = 1e-7,
                                      double farthest = 0.5, std::size_t per_side = 40);

/// Incoming energies E_g - E0 at which the bare junction resonates.
std::vector<double> resonance_energies(const Junction& junction);

/// Indices of local maxima of the 3-point moving average of `values`.
/// NaN entries are skipped.
std::vector<std::size_t> find_peaks(const std::vector<double>& values, double min_height = 0.0);

/// Maximizes `f` on [lo, hi] by golden-section search; returns the argmax.
double refine_peak(const std::function<double(double)>& f, double lo, double hi,
                   double tol = 1e-10, int max_iter = 200);

struct Peak {
  double E_in = 0.0;
  double value = 0.0;
};

/// Peaks of |S(out, in)|^2 over `grid`, each refined by golden-section
/// search between its neighbouring grid points.
std::vector<Peak> transmission_peaks(const Junction& junction, const std::vector<double>& grid,
                                     Eigen::Index out, Eigen::Index in, double min_height = 1e-3);

struct SplitterCandidate {
  double E_in = 0.0;
  double reflection = 0.0;  ///< |S(in, in)|^2
  Eigen::VectorXd T2;       ///< |S(n, in)|^2 for every lead n
};

/// Local minima of the reflection back into lead `input` over the grid,
/// refined by golden-section search and sorted by increasing reflection.
std::vector<SplitterCandidate> splitter_candidates(const Junction& junction,
                                                   const std::vector<double>& grid,
                                                   Eigen::Index input);

}  // namespace molgate
