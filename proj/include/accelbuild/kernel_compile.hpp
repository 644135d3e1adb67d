// Copyright (C) 2026 accelbuild contributors
// SPDX-License-Identifier: Apache-2.0
//
// The acceleration backend: resource estimation against the platform budget,
// ASAP pipeline scheduling, and the deterministic .akbin artifact container.
#pragma once

#include <charconv>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "accelbuild/build_type.hpp"
#include "accelbuild/errors.hpp"
#include "accelbuild/hash.hpp"
#include "accelbuild/kernel_ir.hpp"
#include "accelbuild/platform.hpp"
#include "accelbuild/util.hpp"
#include "accelbuild/version.hpp"

namespace accelbuild {

struct kernel_config {
  std::string platform;
  int ii = 1;
  std::optional<int> clock_mhz;

  friend bool operator==(const kernel_config&, const kernel_config&) = default;
};

inline kernel_config parse_config(std::string_view text) {
  kernel_config cfg;
  bool saw_platform = false, saw_ii = false, saw_clock = false;
  for (const auto& ln : significant_lines(text)) {
    if (ln.indent != 0) throw parse_error(ln.no, "config lines must not be indented");
    std::string key, value;
    if (!split_key_value(ln.text, key, value))
      throw parse_error(ln.no, "expected 'key: value', got '" + ln.text + "'");
    auto positive = [&](const char* k) {
      int n = 0;
      auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), n);
      if (ec != std::errc() || p != value.data() + value.size() || n < 1)
        throw parse_error(ln.no, std::string("'") + k + "' must be a positive integer, got '" + value + "'");
      return n;
    };
    if (key == "platform") {
      if (saw_platform) throw parse_error(ln.no, "duplicate key 'platform'");
      if (!is_identifier(value)) throw parse_error(ln.no, "platform must be an identifier");
      cfg.platform = value;
      saw_platform = true;
    } else if (key == "ii") {
      if (saw_ii) throw parse_error(ln.no, "duplicate key 'ii'");
      cfg.ii = positive("ii");
      saw_ii = true;
    } else if (key == "clock-mhz") {
      if (saw_clock) throw parse_error(ln.no, "duplicate key 'clock-mhz'");
      cfg.clock_mhz = positive("clock-mhz");
      saw_clock = true;
    } else {
      throw parse_error(ln.no, "unknown key '" + key + "'");
    }
  }
  if (!saw_platform) throw error(errc::parse, "config missing required key 'platform'");
  return cfg;
}

inline std::string render_config(const kernel_config& cfg) {
  std::string out = "platform: " + cfg.platform + "\n";
  out += "ii: " + std::to_string(cfg.ii) + "\n";
  if (cfg.clock_mhz) out += "clock-mhz: " + std::to_string(*cfg.clock_mhz) + "\n";
  return out;
}

struct resource_estimate {
  long long dsps = 0;
  long long luts = 0;

  friend bool operator==(const resource_estimate&, const resource_estimate&) = default;
};

inline resource_estimate estimate_resources(const kernel_ir& ir) {
  resource_estimate est;
  for (const auto& s : ir.stages) {
    est.dsps += info(s.op).dsps;
    est.luts += info(s.op).luts;
  }
  return est;
}

struct pipeline_schedule {
  int depth = 1; // critical-path latency in cycles (>= 1)
  int ii = 1;
  std::vector<int> stage_start; // index -> start cycle

  friend bool operator==(const pipeline_schedule&, const pipeline_schedule&) = default;
};

// ASAP: a stage starts when its last operand completes; inputs complete at
// cycle 0. depth = latest completion among output-producing stages; outputs
// passed through from inputs count as an implicit 1-cycle copy.
inline pipeline_schedule schedule_pipeline(const kernel_ir& ir, const kernel_config& cfg) {
  pipeline_schedule sched;
  sched.ii = cfg.ii;
  std::map<std::string, int> completion;
  for (const auto& [n, t] : ir.inputs) completion[n] = 0;
  for (const auto& s : ir.stages) {
    int start = completion.at(s.lhs);
    if (info(s.op).arity == op_arity::binary) start = std::max(start, completion.at(s.rhs));
    sched.stage_start.push_back(start);
    completion[s.result] = start + info(s.op).latency;
  }
  int depth = 1;
  for (const auto& [n, t] : ir.outputs)
    depth = std::max(depth, ir.is_input(n) ? 1 : completion.at(n));
  sched.depth = depth;
  return sched;
}

struct artifact_metadata {
  std::string kernel;
  std::string platform;
  build_type type = build_type::sw_emu;
  int clock_mhz = 0;
  int depth = 1;
  int ii = 1;
  long long dsps = 0;
  long long luts = 0;
  std::vector<std::string> inputs;  // "name:i32"
  std::vector<std::string> outputs;
  std::string content_hash;

  friend bool operator==(const artifact_metadata&, const artifact_metadata&) = default;
};

struct kernel_artifact {
  artifact_metadata meta;
  kernel_ir ir;
  pipeline_schedule schedule;

  friend bool operator==(const kernel_artifact&, const kernel_artifact&) = default;
};

inline constexpr std::string_view akbin_magic = "AKB1";

namespace detail {

inline nlohmann::ordered_json metadata_json(const artifact_metadata& m) {
  nlohmann::ordered_json j;
  j["kernel"] = m.kernel;
  j["platform"] = m.platform;
  j["type"] = std::string(to_string(m.type));
  j["clock_mhz"] = m.clock_mhz;
  j["depth"] = m.depth;
  j["ii"] = m.ii;
  j["dsps"] = m.dsps;
  j["luts"] = m.luts;
  j["inputs"] = m.inputs;
  j["outputs"] = m.outputs;
  j["content_hash"] = m.content_hash;
  return j;
}

inline std::string schedule_text(const pipeline_schedule& s) {
  std::string out;
  for (size_t i = 0; i < s.stage_start.size(); ++i)
    out += std::to_string(i) + ":" + std::to_string(s.stage_start[i]) + "\n";
  return out;
}

// Hash over everything the container carries (with the hash slot emptied)
// plus the tool version, so decoding can verify integrity bit-for-bit.
inline std::string artifact_hash(const artifact_metadata& m, std::string_view ir_text,
                                 std::string_view sched_text) {
  artifact_metadata unsigned_meta = m;
  unsigned_meta.content_hash.clear();
  return sha256()
      .part(tool_version)
      .part(metadata_json(unsigned_meta).dump())
      .part(ir_text)
      .part(sched_text)
      .hex();
}

} // namespace detail

inline kernel_artifact compile_kernel(const kernel_ir& ir, const kernel_config& cfg,
                                      const platform_descriptor& platform, build_type type) {
  if (cfg.platform != platform.platform)
    throw error(errc::config, "config targets platform '" + cfg.platform +
                                  "' but compiling against '" + platform.platform + "'");

  auto est = estimate_resources(ir);
  // sw_emu runs regardless of the board budget.
  if (type != build_type::sw_emu) {
    if (est.dsps > platform.budget_dsps)
      throw resource_overflow_error("dsps", est.dsps, platform.budget_dsps);
    if (est.luts > platform.budget_luts)
      throw resource_overflow_error("luts", est.luts, platform.budget_luts);
  }

  kernel_artifact art;
  art.ir = ir;
  art.schedule = schedule_pipeline(ir, cfg);
  art.meta.kernel = ir.name;
  art.meta.platform = platform.platform;
  art.meta.type = type;
  art.meta.clock_mhz = cfg.clock_mhz.value_or(platform.clock_mhz);
  art.meta.depth = art.schedule.depth;
  art.meta.ii = art.schedule.ii;
  art.meta.dsps = est.dsps;
  art.meta.luts = est.luts;
  for (const auto& [n, t] : ir.inputs) art.meta.inputs.push_back(n + ":" + std::string(to_string(t)));
  for (const auto& [n, t] : ir.outputs) art.meta.outputs.push_back(n + ":" + std::string(to_string(t)));
  art.meta.content_hash =
      detail::artifact_hash(art.meta, render_kernel(ir), detail::schedule_text(art.schedule));
  return art;
}

inline std::string encode_artifact(const kernel_artifact& art) {
  std::string out(akbin_magic);
  auto section = [&out](std::string_view bytes) {
    be64_append(out, bytes.size());
    out.append(bytes);
  };
  section(detail::metadata_json(art.meta).dump());
  section(render_kernel(art.ir));
  section(detail::schedule_text(art.schedule));
  return out;
}

inline kernel_artifact decode_artifact(std::string_view bytes) {
  if (bytes.size() < akbin_magic.size() || bytes.substr(0, akbin_magic.size()) != akbin_magic)
    throw error(errc::container, "bad magic");
  size_t off = akbin_magic.size();
  auto section = [&]() -> std::string_view {
    if (off + 8 > bytes.size()) throw error(errc::container, "truncated container");
    auto len = be64_read(bytes, off);
    off += 8;
    if (len > bytes.size() - off) throw error(errc::container, "truncated container");
    auto s = bytes.substr(off, len);
    off += len;
    return s;
  };
  auto meta_bytes = section();
  auto ir_bytes = section();
  auto sched_bytes = section();
  if (off != bytes.size()) throw error(errc::container, "trailing bytes after container");

  artifact_metadata meta;
  try {
    auto j = nlohmann::ordered_json::parse(meta_bytes);
    meta.kernel = j.at("kernel").get<std::string>();
    meta.platform = j.at("platform").get<std::string>();
    auto type = parse_build_type(j.at("type").get<std::string>());
    if (!type) throw error(errc::container, "bad build type in metadata");
    meta.type = *type;
    meta.clock_mhz = j.at("clock_mhz").get<int>();
    meta.depth = j.at("depth").get<int>();
    meta.ii = j.at("ii").get<int>();
    meta.dsps = j.at("dsps").get<long long>();
    meta.luts = j.at("luts").get<long long>();
    meta.inputs = j.at("inputs").get<std::vector<std::string>>();
    meta.outputs = j.at("outputs").get<std::vector<std::string>>();
    meta.content_hash = j.at("content_hash").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw error(errc::container, std::string("bad metadata: ") + e.what());
  }

  if (detail::artifact_hash(meta, ir_bytes, sched_bytes) != meta.content_hash)
    throw error(errc::container, "content hash mismatch");

  kernel_artifact art;
  art.meta = std::move(meta);
  try {
    art.ir = parse_kernel(ir_bytes);
  } catch (const error& e) {
    throw error(errc::container, std::string("bad kernel section: ") + e.what());
  }
  art.schedule.depth = art.meta.depth;
  art.schedule.ii = art.meta.ii;
  for (const auto& ln : significant_lines(sched_bytes)) {
    auto colon = ln.text.find(':');
    if (colon == std::string::npos) throw error(errc::container, "bad schedule line");
    int start = 0;
    const char* b = ln.text.data() + colon + 1;
    const char* e = ln.text.data() + ln.text.size();
    auto [p, ec] = std::from_chars(b, e, start);
    if (ec != std::errc() || p != e) throw error(errc::container, "bad schedule line");
    art.schedule.stage_start.push_back(start);
  }
  if (art.schedule.stage_start.size() != art.ir.stages.size())
    throw error(errc::container, "schedule does not match kernel stages");
  return art;
}

} // namespace accelbuild
