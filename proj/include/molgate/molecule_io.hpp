// Copyright 2026 The molgate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>

#include "molgate/model.hpp"

namespace molgate {

/// Reads a molecule document:
///
///   {"name": "...", "M": 4,
///    "neutral": {"energy_eV": -30.91, "terms": [{"occ": "1100", "re": -0.99, "im": 0}]},
///    "charged": [{"energy_eV": -17.86, "terms": [...]}, ...],
///    "orbital_factors": [0.25, 0.25, 0.39, 0.39]}
///
/// "notes" is an optional free-text field. Instead of "orbital_factors" a
/// document may carry "orbital_grid" with per-orbital density samples and an
/// optional half-space region. Unknown fields are rejected by name. The
/// returned model has passed require_valid().
MoleculeModel parse_molecule(const std::string& json_text);
MoleculeModel read_molecule(const std::filesystem::path& path);

/// Serializes a model in the format accepted by parse_molecule.
std::string molecule_to_json(const MoleculeModel& molecule);

}  // namespace molgate
