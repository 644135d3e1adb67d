// Copyright (C) 2026 accelbuild contributors
// SPDX-License-Identifier: Apache-2.0
//
// package.accel parsing and canonical rendering. The format is deliberately
// line-oriented: one statement per line, '#' comments, block members indented
// by exactly two spaces.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "accelbuild/build_type.hpp"
#include "accelbuild/errors.hpp"
#include "accelbuild/util.hpp"

namespace accelbuild {

enum class package_kind { source, firmware };

inline std::string_view to_string(package_kind k) {
  return k == package_kind::source ? "source" : "firmware";
}

// One acceleration kernel declaration: which DSL source to lower, against
// which config, to which target.
struct kernel_decl {
  std::string name;
  std::string file;
  std::string config;
  std::vector<std::string> include;
  build_type type = build_type::sw_emu;
  bool package_flag = false;

  friend bool operator==(const kernel_decl&, const kernel_decl&) = default;
};

// Artifacts a firmware package contributes for one platform.
struct firmware_spec {
  std::string platform;
  std::string descriptor;
  std::string sysroot;
  std::string rootfs;
  std::string mixin_template;

  friend bool operator==(const firmware_spec&, const firmware_spec&) = default;
};

struct package_manifest {
  std::string name;
  std::string version = "0.0.0";
  package_kind kind = package_kind::source;
  std::vector<std::string> depends;
  std::vector<kernel_decl> kernels;
  std::optional<firmware_spec> firmware;

  friend bool operator==(const package_manifest&, const package_manifest&) = default;
};

namespace detail {

inline bool is_version(std::string_view s) {
  int dots = 0;
  bool digit_before = false;
  for (char c : s) {
    if (c == '.') {
      if (!digit_before) return false;
      ++dots;
      digit_before = false;
    } else if (c >= '0' && c <= '9') {
      digit_before = true;
    } else {
      return false;
    }
  }
  return dots == 2 && digit_before;
}

inline std::string require_identifier(int line, const std::string& key, const std::string& v) {
  if (!is_identifier(v)) throw parse_error(line, "'" + key + "' must be an identifier, got '" + v + "'");
  return v;
}

inline std::string require_relpath(int line, const std::string& key, const std::string& v) {
  if (!is_relpath(v))
    throw parse_error(line, "'" + key + "' must be a relative path without '..', got '" + v + "'");
  return v;
}

inline bool require_bool(int line, const std::string& key, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw parse_error(line, "'" + key + "' must be true or false, got '" + v + "'");
}

// key -> (line, value) for one indented block, order-free per the grammar.
using block_map = std::map<std::string, std::pair<int, std::string>>;

inline const std::pair<int, std::string>* find(const block_map& m, const std::string& key) {
  auto it = m.find(key);
  return it == m.end() ? nullptr : &it->second;
}

inline const std::pair<int, std::string>& require(const block_map& m, int block_line,
                                                  const std::string& block, const std::string& key) {
  if (auto* p = find(m, key)) return *p;
  throw parse_error(block_line, block + " block missing required key '" + key + "'");
}

inline kernel_decl make_kernel(int block_line, const block_map& kv) {
  static const std::vector<std::string> known = {"name", "file", "config", "include", "type", "package"};
  for (const auto& [key, lv] : kv)
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw parse_error(lv.first, "unknown key '" + key + "' in kernel block");
  kernel_decl d;
  {
    const auto& [line, v] = require(kv, block_line, "kernel", "name");
    d.name = require_identifier(line, "name", v);
  }
  {
    const auto& [line, v] = require(kv, block_line, "kernel", "file");
    d.file = require_relpath(line, "file", v);
  }
  {
    const auto& [line, v] = require(kv, block_line, "kernel", "config");
    d.config = require_relpath(line, "config", v);
  }
  if (auto* p = find(kv, "include"))
    for (const auto& item : split_list(p->second)) d.include.push_back(require_relpath(p->first, "include", item));
  {
    const auto& [line, v] = require(kv, block_line, "kernel", "type");
    auto t = parse_build_type(v);
    if (!t) throw parse_error(line, "invalid build type '" + v + "' (expected sw_emu, hw_emu or hw)");
    d.type = *t;
  }
  if (auto* p = find(kv, "package")) d.package_flag = require_bool(p->first, "package", p->second);
  return d;
}

inline firmware_spec make_firmware(int block_line, const block_map& kv) {
  static const std::vector<std::string> known = {"platform", "descriptor", "sysroot", "rootfs",
                                                 "mixin-template"};
  for (const auto& [key, lv] : kv)
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw parse_error(lv.first, "unknown key '" + key + "' in firmware block");
  firmware_spec f;
  {
    const auto& [line, v] = require(kv, block_line, "firmware", "platform");
    f.platform = require_identifier(line, "platform", v);
  }
  {
    const auto& [line, v] = require(kv, block_line, "firmware", "descriptor");
    f.descriptor = require_relpath(line, "descriptor", v);
  }
  {
    const auto& [line, v] = require(kv, block_line, "firmware", "sysroot");
    f.sysroot = require_relpath(line, "sysroot", v);
  }
  {
    const auto& [line, v] = require(kv, block_line, "firmware", "rootfs");
    f.rootfs = require_relpath(line, "rootfs", v);
  }
  {
    const auto& [line, v] = require(kv, block_line, "firmware", "mixin-template");
    f.mixin_template = require_relpath(line, "mixin-template", v);
  }
  return f;
}

} // namespace detail

inline package_manifest parse_manifest(std::string_view text) {
  using namespace detail;
  package_manifest m;
  bool saw_package = false, saw_version = false, saw_kind = false, saw_depends = false;
  int first_kernel_line = 0, firmware_line = 0;

  enum class block_kind { none, kernel, firmware };
  block_kind open = block_kind::none;
  int open_line = 0;
  block_map block;

  auto close_block = [&] {
    if (open == block_kind::kernel) {
      m.kernels.push_back(make_kernel(open_line, block));
    } else if (open == block_kind::firmware) {
      m.firmware = make_firmware(open_line, block);
    }
    open = block_kind::none;
    block.clear();
  };

  for (const auto& ln : significant_lines(text)) {
    std::string key, value;
    if (!split_key_value(ln.text, key, value))
      throw parse_error(ln.no, "expected 'key: value', got '" + ln.text + "'");

    if (ln.indent == 2) {
      if (open == block_kind::none) throw parse_error(ln.no, "indented line outside a block");
      if (block.count(key)) throw parse_error(ln.no, "duplicate key '" + key + "' in block");
      block.emplace(key, std::make_pair(ln.no, value));
      continue;
    }
    if (ln.indent != 0)
      throw parse_error(ln.no, "block members must be indented by exactly two spaces");

    close_block();
    if (key == "kernel") {
      if (!value.empty()) throw parse_error(ln.no, "'kernel:' takes no value on its own line");
      open = block_kind::kernel;
      open_line = ln.no;
      if (first_kernel_line == 0) first_kernel_line = ln.no;
    } else if (key == "firmware") {
      if (!value.empty()) throw parse_error(ln.no, "'firmware:' takes no value on its own line");
      if (m.firmware) throw parse_error(ln.no, "duplicate firmware block");
      open = block_kind::firmware;
      open_line = ln.no;
      firmware_line = ln.no;
    } else if (key == "package") {
      if (saw_package) throw parse_error(ln.no, "duplicate key 'package'");
      saw_package = true;
      m.name = require_identifier(ln.no, "package", value);
    } else if (key == "version") {
      if (saw_version) throw parse_error(ln.no, "duplicate key 'version'");
      saw_version = true;
      if (!is_version(value)) throw parse_error(ln.no, "version must be <d.d.d>, got '" + value + "'");
      m.version = value;
    } else if (key == "kind") {
      if (saw_kind) throw parse_error(ln.no, "duplicate key 'kind'");
      saw_kind = true;
      if (value == "source") m.kind = package_kind::source;
      else if (value == "firmware") m.kind = package_kind::firmware;
      else throw parse_error(ln.no, "invalid kind '" + value + "' (expected source or firmware)");
    } else if (key == "depends") {
      if (saw_depends) throw parse_error(ln.no, "duplicate key 'depends'");
      saw_depends = true;
      for (const auto& dep : split_list(value)) {
        require_identifier(ln.no, "depends", dep);
        if (std::find(m.depends.begin(), m.depends.end(), dep) != m.depends.end())
          throw parse_error(ln.no, "duplicate dependency '" + dep + "'");
        m.depends.push_back(dep);
      }
    } else {
      throw parse_error(ln.no, "unknown key '" + key + "'");
    }
  }
  close_block();

  if (!saw_package) throw error(errc::parse, "missing required key 'package'");
  if (!saw_kind) throw error(errc::parse, "missing required key 'kind'");
  for (const auto& dep : m.depends)
    if (dep == m.name) throw error(errc::parse, "package '" + m.name + "' depends on itself");
  if (m.kind == package_kind::firmware) {
    if (!m.kernels.empty())
      throw parse_error(first_kernel_line, "firmware packages cannot declare kernels");
    if (!m.firmware) throw error(errc::parse, "firmware package missing firmware block");
  } else if (m.firmware) {
    throw parse_error(firmware_line, "firmware block requires kind: firmware");
  }
  return m;
}

// Canonical rendering: defaults applied, fixed key order, two-space block
// indent. parse(render(m)) == m for every valid manifest.
inline std::string render_manifest(const package_manifest& m) {
  std::string out;
  out += "package: " + m.name + "\n";
  out += "version: " + m.version + "\n";
  out += "kind: " + std::string(to_string(m.kind)) + "\n";
  if (!m.depends.empty()) {
    out += "depends: ";
    for (size_t i = 0; i < m.depends.size(); ++i) {
      if (i) out += ", ";
      out += m.depends[i];
    }
    out += "\n";
  }
  for (const auto& k : m.kernels) {
    out += "kernel:\n";
    out += "  name: " + k.name + "\n";
    out += "  file: " + k.file + "\n";
    out += "  config: " + k.config + "\n";
    if (!k.include.empty()) {
      out += "  include: ";
      for (size_t i = 0; i < k.include.size(); ++i) {
        if (i) out += ", ";
        out += k.include[i];
      }
      out += "\n";
    }
    out += "  type: " + std::string(to_string(k.type)) + "\n";
    out += std::string("  package: ") + (k.package_flag ? "true" : "false") + "\n";
  }
  if (m.firmware) {
    out += "firmware:\n";
    out += "  platform: " + m.firmware->platform + "\n";
    out += "  descriptor: " + m.firmware->descriptor + "\n";
    out += "  sysroot: " + m.firmware->sysroot + "\n";
    out += "  rootfs: " + m.firmware->rootfs + "\n";
    out += "  mixin-template: " + m.firmware->mixin_template + "\n";
  }
  return out;
}

} // namespace accelbuild
