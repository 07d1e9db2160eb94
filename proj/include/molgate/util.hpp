// Copyright 2026 The molgate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace molgate {

/// Runs body(i) for i in [0, n) on up to `jobs` threads. Work is split into
/// contiguous blocks; the first exception is rethrown after all threads join.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& body);

/// 12 significant digits, the precision of every CSV the tools write.
std::string format_number(double x);

/// Splits one CSV line on commas (no quoting is used by our files).
std::vector<std::string> split_csv_line(const std::string& line);

/// Parses a number written by format_number ("nan", "inf" included).
double parse_number(const std::string& text);

/// Principal value of x in (-pi, pi].
double wrap_angle(double x);

}  // namespace molgate
