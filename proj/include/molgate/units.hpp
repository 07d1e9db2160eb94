// Copyright 2026 The molgate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Unit system: energies in eV, lengths in Angstrom, masses in electron masses.
// Times produced by the oracle are in units of hbar/eV.

namespace molgate::units {

/// hbar^2 / (2 m_e) in eV * Angstrom^2.
inline constexpr double kinetic_constant = 3.80998;

/// Coulomb constant times the elementary charge squared, in eV * Angstrom.
inline constexpr double coulomb_constant = 14.39964;

inline constexpr double bohr_radius = 0.529177210903;  // Angstrom

inline constexpr double pi = 3.14159265358979323846;

}  // namespace molgate::units
