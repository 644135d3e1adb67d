// Copyright (C) 2026 accelbuild contributors
// SPDX-License-Identifier: Apache-2.0
//
// Overlay workspace discovery: src/ holds packages (directories with a
// package.accel), acceleration/firmware/<platform> holds deployed firmware.
#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "accelbuild/errors.hpp"
#include "accelbuild/manifest.hpp"
#include "accelbuild/util.hpp"

namespace accelbuild {

struct workspace_package {
  package_manifest manifest;
  std::filesystem::path dir;

  friend bool operator==(const workspace_package&, const workspace_package&) = default;
};

struct workspace {
  std::filesystem::path root;
  std::filesystem::path src_dir;       // root/src
  std::filesystem::path mixin_dir;     // root/.accel/mixins
  std::filesystem::path firmware_root; // root/acceleration/firmware
  std::vector<workspace_package> packages;

  const workspace_package* find(std::string_view name) const {
    for (const auto& p : packages)
      if (p.manifest.name == name) return &p;
    return nullptr;
  }

  friend bool operator==(const workspace&, const workspace&) = default;
};

inline constexpr std::string_view manifest_filename = "package.accel";

namespace detail {

inline void discover_dir(const std::filesystem::path& dir, workspace& ws,
                         std::map<std::string, std::filesystem::path>& seen) {
  namespace fs = std::filesystem;
  std::vector<fs::path> subdirs;
  for (const auto& ent : fs::directory_iterator(dir))
    if (ent.is_directory()) subdirs.push_back(ent.path());
  std::sort(subdirs.begin(), subdirs.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });

  for (const auto& sub : subdirs) {
    auto manifest_path = sub / manifest_filename;
    if (fs::is_regular_file(manifest_path)) {
      package_manifest m;
      try {
        m = parse_manifest(read_file(manifest_path));
      } catch (const error& e) {
        if (e.code() != errc::parse) throw;
        throw error(errc::parse, fs::relative(manifest_path, ws.root).generic_string() + ": " + e.what());
      }
      if (auto it = seen.find(m.name); it != seen.end())
        throw error(errc::duplicate_package,
                    "package '" + m.name + "' declared in both " +
                        fs::relative(it->second, ws.root).generic_string() + " and " +
                        fs::relative(sub, ws.root).generic_string(),
                    {m.name});
      seen.emplace(m.name, sub);
      ws.packages.push_back({std::move(m), sub});
      // A package root is a leaf: nested package.accel files are not discovered.
    } else {
      discover_dir(sub, ws, seen);
    }
  }
}

} // namespace detail

inline workspace discover_workspace(const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  workspace ws;
  ws.root = root;
  ws.src_dir = root / "src";
  ws.mixin_dir = root / ".accel" / "mixins";
  ws.firmware_root = root / "acceleration" / "firmware";
  if (!fs::is_directory(ws.src_dir))
    throw error(errc::no_src, "no src directory under " + root.string());
  std::map<std::string, fs::path> seen;
  detail::discover_dir(ws.src_dir, ws, seen);
  return ws;
}

// Pure path computation: <root>/acceleration/firmware/<platform>.
inline std::filesystem::path firmware_dir(const workspace& ws, std::string_view platform) {
  if (!is_identifier(platform))
    throw error(errc::parse, "platform must be an identifier, got '" + std::string(platform) + "'");
  return ws.root / "acceleration" / "firmware" / platform;
}

} // namespace accelbuild
