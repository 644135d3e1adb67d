// Copyright (C) 2026 accelbuild contributors
// SPDX-License-Identifier: Apache-2.0
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "accelbuild/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  accelbuild::cli_invocation inv;
  try {
    inv = accelbuild::parse_cli(args);
  } catch (const accelbuild::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return accelbuild::run_cli(inv, std::filesystem::current_path());
}
