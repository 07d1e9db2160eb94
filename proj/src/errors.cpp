// Copyright 2026 The molgate Authors
// SPDX-License-Identifier: Apache-2.0

#include "molgate/errors.hpp"

#include <cstdio>

namespace molgate {

namespace {

std::string pole_message(std::size_t g, double gap) {
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "incoming energy hits the pole of charged state %zu (gap %.3e eV)", g, gap);
  return buf;
}

}  // namespace

PoleError::PoleError(std::size_t charged_index, double gap_eV)
    : NumericalError(pole_message(charged_index, gap_eV)),
      charged_index_(charged_index),
      gap_eV_(gap_eV) {}

}  // namespace molgate
