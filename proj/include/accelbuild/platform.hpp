// Copyright (C) 2026 accelbuild contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <charconv>
#include <map>
#include <string>
#include <string_view>

#include "accelbuild/errors.hpp"
#include "accelbuild/util.hpp"

namespace accelbuild {

// One target board: identity, toolchain triple, clock, resource budget.
struct platform_descriptor {
  std::string platform;
  std::string triple;
  int clock_mhz = 0;
  long long budget_luts = 0;
  long long budget_dsps = 0;
  long long budget_bram_kb = 0;

  friend bool operator==(const platform_descriptor&, const platform_descriptor&) = default;
};

inline platform_descriptor load_platform(std::string_view text) {
  std::map<std::string, std::pair<int, std::string>> kv;
  for (const auto& ln : significant_lines(text)) {
    if (ln.indent != 0) throw parse_error(ln.no, "descriptor lines must not be indented");
    std::string key, value;
    if (!split_key_value(ln.text, key, value))
      throw parse_error(ln.no, "expected 'key: value', got '" + ln.text + "'");
    if (kv.count(key)) throw parse_error(ln.no, "duplicate key '" + key + "'");
    kv.emplace(key, std::make_pair(ln.no, value));
  }

  auto take = [&](const char* key) -> std::pair<int, std::string> {
    auto it = kv.find(key);
    if (it == kv.end())
      throw error(errc::parse, std::string("descriptor missing required key '") + key + "'");
    auto lv = it->second;
    kv.erase(it);
    return lv;
  };
  auto number = [](int line, const char* key, const std::string& v) -> long long {
    long long n = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
    if (ec != std::errc() || p != v.data() + v.size() || n < 0)
      throw parse_error(line, std::string("'") + key + "' must be a nonnegative integer, got '" + v + "'");
    return n;
  };

  platform_descriptor d;
  {
    auto [line, v] = take("platform");
    if (!is_identifier(v)) throw parse_error(line, "platform must be an identifier");
    d.platform = v;
  }
  {
    auto [line, v] = take("triple");
    if (v.empty()) throw parse_error(line, "triple must be nonempty");
    d.triple = v;
  }
  {
    auto [line, v] = take("clock-mhz");
    auto n = number(line, "clock-mhz", v);
    if (n <= 0) throw parse_error(line, "clock-mhz must be positive");
    d.clock_mhz = static_cast<int>(n);
  }
  {
    auto [line, v] = take("budget-luts");
    d.budget_luts = number(line, "budget-luts", v);
  }
  {
    auto [line, v] = take("budget-dsps");
    d.budget_dsps = number(line, "budget-dsps", v);
  }
  {
    auto [line, v] = take("budget-bram-kb");
    d.budget_bram_kb = number(line, "budget-bram-kb", v);
  }
  if (!kv.empty())
    throw parse_error(kv.begin()->second.first, "unknown key '" + kv.begin()->first + "'");
  return d;
}

inline std::string render_platform(const platform_descriptor& d) {
  std::string out;
  out += "platform: " + d.platform + "\n";
  out += "triple: " + d.triple + "\n";
  out += "clock-mhz: " + std::to_string(d.clock_mhz) + "\n";
  out += "budget-luts: " + std::to_string(d.budget_luts) + "\n";
  out += "budget-dsps: " + std::to_string(d.budget_dsps) + "\n";
  out += "budget-bram-kb: " + std::to_string(d.budget_bram_kb) + "\n";
  return out;
}

} // namespace accelbuild
