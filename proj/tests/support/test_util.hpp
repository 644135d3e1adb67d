// Copyright (C) 2026 accelbuild contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <unistd.h>

#include <filesystem>
#include <map>
#include <random>
#include <string>

#include "accelbuild/hash.hpp"
#include "accelbuild/util.hpp"

namespace testsupport {

namespace fs = std::filesystem;

inline fs::path fixtures_dir() { return fs::path(ACCELBUILD_FIXTURES_DIR); }

// Unique scratch directory, removed on scope exit.
class temp_dir {
public:
  explicit temp_dir(const std::string& tag = "accelbuild") {
    static std::mt19937_64 rng(std::random_device{}());
    path_ = fs::temp_directory_path() /
            (tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(rng()));
    fs::create_directories(path_);
  }
  ~temp_dir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  temp_dir(const temp_dir&) = delete;
  temp_dir& operator=(const temp_dir&) = delete;

  const fs::path& path() const { return path_; }

private:
  fs::path path_;
};

// Copy of the checked-in fixture workspace, ready to be built.
inline fs::path copy_fixture_ws(const temp_dir& tmp, const std::string& name = "ws1") {
  auto dst = tmp.path() / name;
  accelbuild::copy_tree(fixtures_dir() / name, dst);
  return dst;
}

// relpath -> content hash for every regular file under root.
inline std::map<std::string, std::string> tree_snapshot(const fs::path& root) {
  std::map<std::string, std::string> snap;
  for (const auto& rel : accelbuild::list_files(root))
    snap[rel.generic_string()] = accelbuild::sha256_hex(accelbuild::read_file(root / rel));
  return snap;
}

// Paths present in either snapshot whose content differs (or exists on one side only).
inline std::vector<std::string> changed_paths(const std::map<std::string, std::string>& before,
                                              const std::map<std::string, std::string>& after) {
  std::vector<std::string> out;
  for (const auto& [p, h] : after) {
    auto it = before.find(p);
    if (it == before.end() || it->second != h) out.push_back(p);
  }
  for (const auto& [p, h] : before)
    if (!after.count(p)) out.push_back(p);
  return out;
}

} // namespace testsupport
