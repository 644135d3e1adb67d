// Copyright (C) 2026 accelbuild contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace accelbuild {

enum class errc {
  parse,
  no_src,
  duplicate_package,
  missing_dep,
  cycle,
  template_unbound,
  unknown_mixin,
  config,
  firmware_incomplete,
  platform_conflict,
  resource_overflow,
  container,
  platform_mismatch,
  signature,
  phase_order,
  no_firmware,
  usage,
  io,
  locked,
};

inline std::string_view to_string(errc c) {
  switch (c) {
  case errc::parse: return "E_PARSE";
  case errc::no_src: return "E_NO_SRC";
  case errc::duplicate_package: return "E_DUPLICATE_PACKAGE";
  case errc::missing_dep: return "E_MISSING_DEP";
  case errc::cycle: return "E_CYCLE";
  case errc::template_unbound: return "E_TEMPLATE";
  case errc::unknown_mixin: return "E_UNKNOWN_MIXIN";
  case errc::config: return "E_CONFIG";
  case errc::firmware_incomplete: return "E_FIRMWARE_INCOMPLETE";
  case errc::platform_conflict: return "E_PLATFORM_CONFLICT";
  case errc::resource_overflow: return "E_RESOURCE_OVERFLOW";
  case errc::container: return "E_CONTAINER";
  case errc::platform_mismatch: return "E_PLATFORM_MISMATCH";
  case errc::signature: return "E_SIGNATURE";
  case errc::phase_order: return "E_PHASE_ORDER";
  case errc::no_firmware: return "E_NO_FIRMWARE";
  case errc::usage: return "E_USAGE";
  case errc::io: return "E_IO";
  case errc::locked: return "E_LOCKED";
  }
  return "E_UNKNOWN";
}

// All module errors are thrown as accelbuild::error. what() is prefixed with
// the code name so diagnostics stay grep-able; args() carries the structured
// values an error names (cycle node list, missing dep, known mixins, ...).
class error : public std::runtime_error {
public:
  error(errc code, const std::string& msg, std::vector<std::string> args = {})
      : std::runtime_error(std::string(to_string(code)) + ": " + msg),
        code_(code),
        args_(std::move(args)) {}

  errc code() const { return code_; }
  const std::vector<std::string>& args() const { return args_; }

private:
  errc code_;
  std::vector<std::string> args_;
};

class resource_overflow_error : public error {
public:
  resource_overflow_error(std::string resource, long long needed, long long budget)
      : error(errc::resource_overflow,
              resource + ": needed " + std::to_string(needed) + ", budget " +
                  std::to_string(budget),
              {resource, std::to_string(needed), std::to_string(budget)}),
        resource_(std::move(resource)),
        needed_(needed),
        budget_(budget) {}

  const std::string& resource() const { return resource_; }
  long long needed() const { return needed_; }
  long long budget() const { return budget_; }

private:
  std::string resource_;
  long long needed_;
  long long budget_;
};

inline error parse_error(int line, const std::string& msg) {
  return error(errc::parse, "line " + std::to_string(line) + ": " + msg);
}

} // namespace accelbuild
