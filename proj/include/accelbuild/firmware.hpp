// Copyright (C) 2026 accelbuild contributors
// SPDX-License-Identifier: Apache-2.0
//
// Firmware package deployment. Retargeting a workspace means swapping one
// firmware package: deployment copies the platform descriptor, sysroot and
// rootfs into acceleration/firmware/<platform> and registers a dynamically
// generated mixin for the platform.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "accelbuild/errors.hpp"
#include "accelbuild/hash.hpp"
#include "accelbuild/mixin.hpp"
#include "accelbuild/platform.hpp"
#include "accelbuild/workspace.hpp"

namespace accelbuild {

struct deployed_firmware {
  std::string platform;
  std::filesystem::path dir;
  platform_descriptor descriptor;
  std::filesystem::path sysroot_dir;
  std::string generated_mixin;
  bool changed = false; // false when re-deployment was a no-op
};

namespace detail {

// Hash of the firmware package's source artifacts; recorded in the deployed
// dir so re-deployments can detect no-ops and foreign-package conflicts.
inline std::string firmware_content_hash(const workspace_package& pkg, const firmware_spec& spec) {
  sha256 h;
  h.part("firmware");
  h.part(read_file(pkg.dir / spec.descriptor));
  h.part(read_file(pkg.dir / spec.rootfs));
  h.part(read_file(pkg.dir / spec.mixin_template));
  for (const auto& rel : list_files(pkg.dir / spec.sysroot)) {
    h.part(rel.generic_string());
    h.part(read_file(pkg.dir / spec.sysroot / rel));
  }
  return h.hex();
}

struct deploy_meta {
  std::string owner;
  std::string hash;
};

inline std::optional<deploy_meta> read_deploy_meta(const std::filesystem::path& dir) {
  auto p = dir / ".deploy.meta";
  if (!std::filesystem::is_regular_file(p)) return std::nullopt;
  deploy_meta meta;
  for (const auto& ln : significant_lines(read_file(p))) {
    std::string key, value;
    if (!split_key_value(ln.text, key, value)) continue;
    if (key == "owner") meta.owner = value;
    if (key == "hash") meta.hash = value;
  }
  if (meta.owner.empty() || meta.hash.empty()) return std::nullopt;
  return meta;
}

} // namespace detail

inline deployed_firmware deploy_firmware(const workspace_package& pkg, const workspace& ws) {
  namespace fs = std::filesystem;
  const auto& m = pkg.manifest;
  if (m.kind != package_kind::firmware || !m.firmware)
    throw error(errc::config, "package '" + m.name + "' is not a firmware package");
  const auto& spec = *m.firmware;

  auto require = [&](const std::string& rel, bool dir_expected, const char* what) {
    auto p = pkg.dir / rel;
    bool ok = dir_expected ? fs::is_directory(p) : fs::is_regular_file(p);
    if (!ok)
      throw error(errc::firmware_incomplete,
                  "package '" + m.name + "' is missing its " + what + " (" + rel + ")",
                  {what});
  };
  require(spec.descriptor, false, "descriptor");
  require(spec.sysroot, true, "sysroot");
  require(spec.rootfs, false, "rootfs");
  require(spec.mixin_template, false, "mixin-template");

  auto descriptor_bytes = read_file(pkg.dir / spec.descriptor);
  auto descriptor = load_platform(descriptor_bytes);
  if (descriptor.platform != spec.platform)
    throw error(errc::parse, "descriptor declares platform '" + descriptor.platform +
                                 "' but the firmware block says '" + spec.platform + "'");

  auto dest = firmware_dir(ws, spec.platform);
  auto hash = detail::firmware_content_hash(pkg, spec);

  deployed_firmware out;
  out.platform = spec.platform;
  out.dir = dest;
  out.descriptor = descriptor;
  out.sysroot_dir = dest / "sysroot";

  auto render = [&]() {
    std::map<std::string, std::string> bindings = {
        {"WORKSPACE", ws.root.string()},
        {"PLATFORM", spec.platform},
        {"FIRMWARE_DIR", dest.string()},
    };
    return render_template(read_file(pkg.dir / spec.mixin_template), bindings);
  };

  if (auto meta = detail::read_deploy_meta(dest)) {
    if (meta->hash == hash) {
      // Unchanged content: only make sure the generated mixin still exists.
      auto mx = render();
      out.generated_mixin = mx.name;
      write_file_if_different(ws.mixin_dir / (spec.platform + ".mixin"), render_mixin(mx));
      out.changed = false;
      return out;
    }
    if (meta->owner != m.name)
      throw error(errc::platform_conflict,
                  "platform '" + spec.platform + "' is already deployed by package '" + meta->owner +
                      "' with different content",
                  {spec.platform, meta->owner, m.name});
  }

  // Fresh deployment or in-place update by the owning package.
  std::error_code ec;
  fs::remove_all(dest, ec);
  fs::create_directories(dest);
  write_file(dest / "platform.desc", descriptor_bytes);
  write_file(dest / "rootfs.img", read_file(pkg.dir / spec.rootfs));
  copy_tree(pkg.dir / spec.sysroot, dest / "sysroot");
  write_file(dest / ".deploy.meta", "owner: " + m.name + "\nhash: " + hash + "\n");

  auto mx = render();
  out.generated_mixin = mx.name;
  write_file_if_different(ws.mixin_dir / (spec.platform + ".mixin"), render_mixin(mx));
  out.changed = true;
  return out;
}

// Descriptors of every deployed platform, sorted by platform name.
inline std::vector<platform_descriptor> list_platforms(const workspace& ws) {
  namespace fs = std::filesystem;
  std::vector<platform_descriptor> out;
  if (!fs::is_directory(ws.firmware_root)) return out;
  std::vector<fs::path> dirs;
  for (const auto& ent : fs::directory_iterator(ws.firmware_root))
    if (ent.is_directory()) dirs.push_back(ent.path());
  std::sort(dirs.begin(), dirs.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
  for (const auto& d : dirs) {
    auto desc_path = d / "platform.desc";
    if (!fs::is_regular_file(desc_path))
      throw error(errc::parse, "deployed platform dir " + d.string() + " has no platform.desc");
    auto descriptor = load_platform(read_file(desc_path));
    if (descriptor.platform != d.filename().string())
      throw error(errc::parse, "descriptor in " + d.string() + " declares platform '" +
                                   descriptor.platform + "'");
    out.push_back(std::move(descriptor));
  }
  return out;
}

} // namespace accelbuild
