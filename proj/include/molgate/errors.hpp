// Copyright 2026 The molgate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace molgate {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or physically inconsistent input. The CLI maps it to exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A solve could not produce a trustworthy answer. The CLI maps it to exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The incoming energy sits on a charged-state level, where the bound-state
/// propagator diverges.
class PoleError : public NumericalError {
 public:
  PoleError(std::size_t charged_index, double gap_eV);

  std::size_t charged_index() const noexcept { return charged_index_; }
  double gap_eV() const noexcept { return gap_eV_; }

 private:
  std::size_t charged_index_;
  double gap_eV_;
};

class SingularSystemError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Consecutive grid points are too far apart to follow a phase continuously.
class PhaseRefinementError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class FluxError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A requested gate cannot be realized by the supplied scattering data.
class GateError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

}  // namespace molgate
