// Copyright 2026 The molgate Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "molgate/cli.hpp"

int main(int argc, char** argv) { return molgate::run_cli(argc, argv, std::cout, std::cerr); }
