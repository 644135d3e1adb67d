// Copyright (C) 2026 accelbuild contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string_view>

namespace accelbuild {

// The three kernel build targets: functional emulation, timed emulation,
// and the sealed hardware artifact bound to one platform.
enum class build_type { sw_emu, hw_emu, hw };

inline std::string_view to_string(build_type t) {
  switch (t) {
  case build_type::sw_emu: return "sw_emu";
  case build_type::hw_emu: return "hw_emu";
  case build_type::hw: return "hw";
  }
  return "?";
}

inline std::optional<build_type> parse_build_type(std::string_view s) {
  if (s == "sw_emu") return build_type::sw_emu;
  if (s == "hw_emu") return build_type::hw_emu;
  if (s == "hw") return build_type::hw;
  return std::nullopt;
}

} // namespace accelbuild
