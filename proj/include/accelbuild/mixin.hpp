// Copyright (C) 2026 accelbuild contributors
// SPDX-License-Identifier: Apache-2.0
//
// Mixins: named build-configuration bundles. Firmware packages ship mixin
// templates; deployment renders them with workstation-specific bindings and
// registers them under <ws>/.accel/mixins. Precedence when merging:
// defaults < mixins left-to-right < explicit CLI keys.
#pragma once

#include <array>
#include <filesystem>
#include <charconv>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "accelbuild/build_type.hpp"
#include "accelbuild/errors.hpp"
#include "accelbuild/util.hpp"

namespace accelbuild {

inline constexpr std::string_view host_triple = "host";

inline constexpr std::array<std::string_view, 8> mixin_keys = {
    "build-base",  "install-base", "merge-install", "target-triple",
    "firmware-dir", "platform",    "kernel-type",   "clock-mhz",
};

inline bool is_mixin_key(std::string_view k) {
  return std::find(mixin_keys.begin(), mixin_keys.end(), k) != mixin_keys.end();
}

struct mixin {
  std::string name;
  std::vector<std::pair<std::string, std::string>> entries; // ordered

  const std::string* get(std::string_view key) const {
    for (const auto& [k, v] : entries)
      if (k == key) return &v;
    return nullptr;
  }

  friend bool operator==(const mixin&, const mixin&) = default;
};

// The single configuration a build runs under once mixins and CLI flags are
// merged. target_triple is "host" unless a mixin retargets the build.
struct effective_config {
  std::string build_base = "build";
  std::string install_base = "install";
  bool merge_install = false;
  std::string target_triple = std::string(host_triple);
  std::optional<std::string> firmware_dir;
  std::optional<std::string> platform;
  std::optional<build_type> kernel_type_override;
  std::optional<int> clock_mhz_override;

  friend bool operator==(const effective_config&, const effective_config&) = default;
};

inline mixin parse_mixin(std::string_view text) {
  mixin m;
  bool saw_name = false;
  for (const auto& ln : significant_lines(text)) {
    if (ln.indent != 0) throw parse_error(ln.no, "mixin lines must not be indented");
    std::string key, value;
    if (!split_key_value(ln.text, key, value))
      throw parse_error(ln.no, "expected 'key: value', got '" + ln.text + "'");
    if (!saw_name) {
      if (key != "mixin") throw parse_error(ln.no, "mixin files must start with 'mixin: <name>'");
      if (!is_identifier(value)) throw parse_error(ln.no, "mixin name must be an identifier");
      m.name = value;
      saw_name = true;
      continue;
    }
    if (key == "mixin") throw parse_error(ln.no, "duplicate 'mixin:' line");
    if (!is_mixin_key(key)) throw parse_error(ln.no, "unknown mixin key '" + key + "'");
    if (m.get(key)) throw parse_error(ln.no, "duplicate mixin key '" + key + "'");
    if (key == "merge-install" && value != "true" && value != "false")
      throw parse_error(ln.no, "merge-install must be true or false");
    m.entries.emplace_back(key, value);
  }
  if (!saw_name) throw error(errc::parse, "empty mixin");
  return m;
}

inline std::string render_mixin(const mixin& m) {
  std::string out = "mixin: " + m.name + "\n";
  for (const auto& [k, v] : m.entries) out += k + ": " + v + "\n";
  return out;
}

// Replaces ${NAME} placeholders (names uppercase) and parses the result.
inline mixin render_template(std::string_view tmpl,
                             const std::map<std::string, std::string>& bindings) {
  std::string out;
  out.reserve(tmpl.size());
  size_t pos = 0;
  while (pos < tmpl.size()) {
    auto dollar = tmpl.find("${", pos);
    if (dollar == std::string_view::npos) {
      out.append(tmpl.substr(pos));
      break;
    }
    out.append(tmpl.substr(pos, dollar - pos));
    auto close = tmpl.find('}', dollar + 2);
    if (close == std::string_view::npos)
      throw error(errc::parse, "unterminated placeholder in template");
    std::string name(tmpl.substr(dollar + 2, close - dollar - 2));
    if (name.empty() || !std::all_of(name.begin(), name.end(), [](unsigned char c) {
          return (c >= 'A' && c <= 'Z') || c == '_';
        }))
      throw error(errc::parse, "malformed placeholder '${" + name + "}'");
    auto it = bindings.find(name);
    if (it == bindings.end())
      throw error(errc::template_unbound, "unbound placeholder '" + name + "'", {name});
    out.append(it->second);
    pos = close + 1;
  }
  return parse_mixin(out);
}

inline const mixin& resolve_mixin(std::string_view name, const std::vector<mixin>& registry) {
  for (const auto& m : registry)
    if (m.name == name) return m;
  std::vector<std::string> known;
  for (const auto& m : registry) known.push_back(m.name);
  std::sort(known.begin(), known.end());
  std::string msg = "no mixin named '" + std::string(name) + "' (known:";
  if (known.empty()) msg += " none";
  for (const auto& k : known) msg += " " + k;
  msg += ")";
  std::vector<std::string> args{std::string(name)};
  args.insert(args.end(), known.begin(), known.end());
  throw error(errc::unknown_mixin, msg, args);
}

// Every *.mixin file under dir, sorted by filename. Duplicate mixin names are
// rejected at load so resolve_mixin stays unambiguous.
inline std::vector<mixin> load_mixin_registry(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::vector<mixin> out;
  if (!fs::is_directory(dir)) return out;
  std::vector<fs::path> files;
  for (const auto& ent : fs::directory_iterator(dir))
    if (ent.is_regular_file() && ent.path().extension() == ".mixin") files.push_back(ent.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    mixin m;
    try {
      m = parse_mixin(read_file(f));
    } catch (const error& e) {
      throw error(errc::parse, f.filename().string() + ": " + e.what());
    }
    for (const auto& prev : out)
      if (prev.name == m.name)
        throw error(errc::parse, "duplicate mixin name '" + m.name + "' in registry");
    out.push_back(std::move(m));
  }
  return out;
}

inline effective_config merge_mixins(const std::vector<mixin>& mixins,
                                     const std::vector<std::pair<std::string, std::string>>& cli) {
  // Layer everything first, validate the final state once.
  std::map<std::string, std::string> merged;
  for (const auto& m : mixins)
    for (const auto& [k, v] : m.entries) merged[k] = v;
  for (const auto& [k, v] : cli) {
    if (!is_mixin_key(k)) throw error(errc::config, "unknown configuration key '" + k + "'");
    merged[k] = v;
  }

  effective_config cfg;
  for (const auto& [k, v] : merged) {
    if (k == "build-base") cfg.build_base = v;
    else if (k == "install-base") cfg.install_base = v;
    else if (k == "merge-install") {
      if (v != "true" && v != "false")
        throw error(errc::config, "merge-install must be true or false, got '" + v + "'");
      cfg.merge_install = v == "true";
    } else if (k == "target-triple") cfg.target_triple = v;
    else if (k == "firmware-dir") cfg.firmware_dir = v;
    else if (k == "platform") {
      if (!is_identifier(v)) throw error(errc::config, "platform must be an identifier, got '" + v + "'");
      cfg.platform = v;
    } else if (k == "kernel-type") {
      auto t = parse_build_type(v);
      if (!t) throw error(errc::config, "invalid kernel-type '" + v + "'");
      cfg.kernel_type_override = *t;
    } else if (k == "clock-mhz") {
      int mhz = 0;
      auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), mhz);
      if (ec != std::errc() || p != v.data() + v.size() || mhz <= 0)
        throw error(errc::config, "clock-mhz must be a positive integer, got '" + v + "'");
      cfg.clock_mhz_override = mhz;
    }
  }

  if (cfg.build_base == cfg.install_base)
    throw error(errc::config, "build-base and install-base must differ (both '" + cfg.build_base + "')");
  if (cfg.platform.has_value() != cfg.firmware_dir.has_value())
    throw error(errc::config, "platform and firmware-dir must be set together");
  return cfg;
}

} // namespace accelbuild
