// Copyright (C) 2026 accelbuild contributors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line surface. parse_cli is total: every argv yields an invocation
// or E_USAGE. Exit codes: 0 success, 1 build/runtime error, 2 usage error.
// Data goes to the output stream, diagnostics to the error stream.
#pragma once

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "accelbuild/dep_graph.hpp"
#include "accelbuild/errors.hpp"
#include "accelbuild/executor.hpp"
#include "accelbuild/firmware.hpp"
#include "accelbuild/mixin.hpp"
#include "accelbuild/runtime.hpp"
#include "accelbuild/workspace.hpp"

namespace accelbuild {

enum class cli_command { build, graph, mixin_list, platform_list, kernel_run, clean };

struct cli_invocation {
  cli_command command = cli_command::build;
  // build
  std::optional<std::string> build_base;
  std::optional<std::string> install_base;
  bool merge_install = false;
  std::vector<std::string> mixins; // order preserved
  std::vector<std::string> packages_select;
  // graph
  bool dot = false;
  // kernel run
  std::string artifact_file;
  std::string platform;
  std::vector<std::pair<std::string, std::vector<long long>>> kernel_inputs;
  bool report_cycles = false;
  // clean
  std::optional<std::string> clean_platform;
};

inline constexpr std::string_view cli_usage =
    "usage:\n"
    "  accelbuild build [--build-base D] [--install-base D] [--merge-install]\n"
    "                   [--mixin NAME]... [--packages-select NAME]...\n"
    "  accelbuild graph [--dot]\n"
    "  accelbuild mixin list\n"
    "  accelbuild platform list\n"
    "  accelbuild kernel run <file.akbin> --platform <id> --in <stream>=<csv>...\n"
    "                   [--report-cycles]\n"
    "  accelbuild clean [--platform <id>]\n";

namespace detail {

[[noreturn]] inline void usage_error(const std::string& offending) {
  throw error(errc::usage, "invalid usage at '" + offending + "'\n" + std::string(cli_usage),
              {offending});
}

inline std::vector<long long> parse_csv_ints(const std::string& spec, const std::string& raw) {
  std::vector<long long> out;
  if (raw.empty()) return out;
  for (const auto& item : split_list(raw)) {
    long long v = 0;
    auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || p != item.data() + item.size()) usage_error(spec);
    out.push_back(v);
  }
  return out;
}

} // namespace detail

// argv excludes the program name.
inline cli_invocation parse_cli(const std::vector<std::string>& argv) {
  using detail::usage_error;
  if (argv.empty()) usage_error("(no command)");

  cli_invocation inv;
  size_t i = 0;
  const std::string& cmd = argv[i++];

  auto value_of = [&](const std::string& flag) -> const std::string& {
    if (i >= argv.size()) usage_error(flag);
    return argv[i++];
  };

  if (cmd == "build") {
    inv.command = cli_command::build;
    while (i < argv.size()) {
      const std::string& a = argv[i++];
      if (a == "--build-base") inv.build_base = value_of(a);
      else if (a == "--install-base") inv.install_base = value_of(a);
      else if (a == "--merge-install") inv.merge_install = true;
      else if (a == "--mixin") inv.mixins.push_back(value_of(a));
      else if (a == "--packages-select") inv.packages_select.push_back(value_of(a));
      else usage_error(a);
    }
  } else if (cmd == "graph") {
    inv.command = cli_command::graph;
    while (i < argv.size()) {
      const std::string& a = argv[i++];
      if (a == "--dot") inv.dot = true;
      else usage_error(a);
    }
  } else if (cmd == "mixin" || cmd == "platform") {
    if (i >= argv.size() || argv[i] != "list") usage_error(i < argv.size() ? argv[i] : cmd);
    ++i;
    if (i < argv.size()) usage_error(argv[i]);
    inv.command = cmd == "mixin" ? cli_command::mixin_list : cli_command::platform_list;
  } else if (cmd == "kernel") {
    if (i >= argv.size() || argv[i] != "run") usage_error(i < argv.size() ? argv[i] : cmd);
    ++i;
    inv.command = cli_command::kernel_run;
    while (i < argv.size()) {
      const std::string& a = argv[i++];
      if (a == "--platform") {
        inv.platform = value_of(a);
      } else if (a == "--in") {
        const std::string& spec = value_of(a);
        auto eq = spec.find('=');
        if (eq == std::string::npos || eq == 0) usage_error(spec);
        std::string stream = spec.substr(0, eq);
        if (!is_identifier(stream)) usage_error(spec);
        for (const auto& [name, vals] : inv.kernel_inputs)
          if (name == stream) usage_error(spec);
        inv.kernel_inputs.emplace_back(stream, detail::parse_csv_ints(spec, spec.substr(eq + 1)));
      } else if (a == "--report-cycles") {
        inv.report_cycles = true;
      } else if (!a.empty() && a[0] == '-') {
        usage_error(a);
      } else if (inv.artifact_file.empty()) {
        inv.artifact_file = a;
      } else {
        usage_error(a);
      }
    }
    if (inv.artifact_file.empty()) usage_error("(missing artifact file)");
    if (inv.platform.empty()) usage_error("(missing --platform)");
  } else if (cmd == "clean") {
    inv.command = cli_command::clean;
    while (i < argv.size()) {
      const std::string& a = argv[i++];
      if (a == "--platform") inv.clean_platform = value_of(a);
      else usage_error(a);
    }
  } else {
    usage_error(cmd);
  }
  return inv;
}

namespace detail {

inline std::filesystem::path find_workspace_root(const std::filesystem::path& cwd) {
  namespace fs = std::filesystem;
  if (const char* env = std::getenv("ACCEL_WORKSPACE")) {
    fs::path root(env);
    if (!fs::is_directory(root / "src"))
      throw error(errc::no_src, "ACCEL_WORKSPACE=" + std::string(env) + " has no src directory");
    return root;
  }
  for (fs::path p = fs::absolute(cwd);; p = p.parent_path()) {
    if (fs::is_directory(p / "src")) return p;
    if (p == p.root_path()) break;
  }
  throw error(errc::no_src, "no workspace found walking up from " + cwd.string());
}

inline int run_build(const cli_invocation& inv, const workspace& ws, std::ostream& out,
                     std::ostream& err) {
  auto registry = load_mixin_registry(ws.mixin_dir);
  std::vector<mixin> mixins;
  for (const auto& name : inv.mixins) {
    try {
      mixins.push_back(resolve_mixin(name, registry));
    } catch (const error& e) {
      if (e.code() != errc::unknown_mixin) throw;
      // Before Phase A there is no registry entry yet; if a firmware package
      // in src provides this platform, the real problem is phase order.
      bool provided = std::any_of(ws.packages.begin(), ws.packages.end(),
                                  [&](const workspace_package& p) {
                                    return p.manifest.firmware &&
                                           p.manifest.firmware->platform == name;
                                  });
      if (provided)
        throw error(errc::phase_order,
                    "mixin '" + name + "' is generated by firmware deployment; run a native "
                    "build (no mixin) first",
                    {name});
      throw;
    }
  }

  std::vector<std::pair<std::string, std::string>> cli_keys;
  if (inv.build_base) cli_keys.emplace_back("build-base", *inv.build_base);
  if (inv.install_base) cli_keys.emplace_back("install-base", *inv.install_base);
  if (inv.merge_install) cli_keys.emplace_back("merge-install", "true");
  auto cfg = merge_mixins(mixins, cli_keys);

  std::optional<std::set<std::string>> selected;
  if (!inv.packages_select.empty())
    selected = std::set<std::string>(inv.packages_select.begin(), inv.packages_select.end());

  auto plan = plan_build(ws, cfg, selected);
  auto report = execute(plan, ws);

  out << "phase: " << (report.phase == build_phase::native ? "native" : "cross");
  if (plan.platform) out << " (" << plan.platform->platform << ")";
  out << "\n";
  for (const auto& p : report.packages) {
    out << to_string(p.status) << " " << p.name << " (";
    for (size_t k = 0; k < p.actions.size(); ++k) {
      if (k) out << "+";
      out << to_string(p.actions[k]);
    }
    out << ")\n";
    if (p.status == build_status::failed)
      err << "error: package '" << p.name << "': " << p.message << "\n";
  }
  for (const auto& k : report.kernels)
    out << "kernel " << k.package << "/" << k.kernel << " -> " << k.artifact_path << " ("
        << to_string(k.type) << ", depth " << k.depth << ", ii " << k.ii << ", dsps " << k.dsps
        << ", luts " << k.luts << ")\n";
  out << "summary: " << report.count(build_status::built) << " built, "
      << report.count(build_status::skipped) << " skipped, "
      << report.count(build_status::failed) << " failed (" << report.elapsed_ms << " ms)\n";
  return report.ok() ? 0 : 1;
}

inline int run_kernel_run(const cli_invocation& inv, const workspace& ws,
                          const std::filesystem::path& cwd, std::ostream& out) {
  namespace fs = std::filesystem;
  auto desc_path = firmware_dir(ws, inv.platform) / "platform.desc";
  if (!fs::is_regular_file(desc_path))
    throw error(errc::no_firmware, "platform '" + inv.platform + "' is not deployed",
                {inv.platform});
  device dev(load_platform(read_file(desc_path)));

  fs::path artifact = inv.artifact_file;
  if (artifact.is_relative()) artifact = cwd / artifact;
  const auto& kernel = dev.load_artifact(read_file(artifact));

  stream_data inputs;
  for (const auto& [name, values] : inv.kernel_inputs) inputs[name] = values;

  stream_data outputs;
  std::optional<cycle_report> report;
  if (inv.report_cycles) {
    auto [o, r] = run_timed(kernel, inputs);
    outputs = std::move(o);
    report = r;
  } else {
    outputs = run_functional(kernel, inputs);
  }

  for (const auto& [name, values] : outputs) { // std::map: streams sorted
    out << name << "=";
    for (size_t k = 0; k < values.size(); ++k) {
      if (k) out << ",";
      out << values[k];
    }
    out << "\n";
  }
  if (report)
    out << "n=" << report->n << " pipeline=" << report->pipeline_cycles
        << " sequential=" << report->sequential_cycles
        << " speedup=" << report->speedup.to_decimal(3)
        << " est_us=" << report->wall_estimate_us.to_decimal(3) << "\n";
  return 0;
}

inline int run_clean(const cli_invocation& inv, const workspace& ws, std::ostream& out) {
  namespace fs = std::filesystem;
  std::vector<std::string> bases;
  if (inv.clean_platform) {
    bases = {"build-" + *inv.clean_platform, "install-" + *inv.clean_platform};
  } else {
    bases = {"build", "install"};
    for (const auto& d : list_platforms(ws)) {
      bases.push_back("build-" + d.platform);
      bases.push_back("install-" + d.platform);
    }
  }
  for (const auto& b : bases) {
    auto p = ws.root / b;
    if (fs::exists(p)) {
      fs::remove_all(p);
      out << "removed " << b << "\n";
    }
  }
  return 0;
}

} // namespace detail

inline int run_cli(const cli_invocation& inv, const std::filesystem::path& cwd,
                   std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  try {
    auto root = detail::find_workspace_root(cwd);
    auto ws = discover_workspace(root);
    switch (inv.command) {
    case cli_command::build:
      return detail::run_build(inv, ws, out, err);
    case cli_command::graph: {
      auto g = build_graph(ws);
      if (inv.dot) {
        out << to_dot(g);
      } else {
        for (const auto& n : g.nodes) {
          out << n << ":";
          for (const auto& d : g.deps_of(n)) out << " " << d;
          out << "\n";
        }
      }
      return 0;
    }
    case cli_command::mixin_list:
      for (const auto& m : load_mixin_registry(ws.mixin_dir)) out << m.name << "\n";
      return 0;
    case cli_command::platform_list:
      for (const auto& d : list_platforms(ws)) out << d.platform << "\n";
      return 0;
    case cli_command::kernel_run:
      return detail::run_kernel_run(inv, ws, cwd, out);
    case cli_command::clean:
      return detail::run_clean(inv, ws, out);
    }
    return 1;
  } catch (const error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == errc::usage ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

} // namespace accelbuild
