// Copyright (C) 2026 accelbuild contributors
// SPDX-License-Identifier: Apache-2.0
//
// Two-phase build executor. Phase A (no mixin) prepares the workspace:
// stages host packages, deploys firmware, generates mixins. Phase B (with a
// platform mixin) cross-stages packages into per-platform bases and lowers
// kernels through the backend. Incrementality is content-hash based: the
// rebuilt set is exactly the dirty closure of hash-changed packages.
#pragma once

#include <algorithm>
#include <chrono>
#include <fcntl.h>
#include <filesystem>
#include <future>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <unistd.h>
#include <vector>

#include "accelbuild/dep_graph.hpp"
#include "accelbuild/errors.hpp"
#include "accelbuild/firmware.hpp"
#include "accelbuild/hash.hpp"
#include "accelbuild/kernel_compile.hpp"
#include "accelbuild/mixin.hpp"
#include "accelbuild/version.hpp"
#include "accelbuild/workspace.hpp"

namespace accelbuild {

enum class build_phase { native, cross };

enum class build_action { host_build, deploy_firmware, cross_build, compile_kernels, skip_unchanged };

inline std::string_view to_string(build_action a) {
  switch (a) {
  case build_action::host_build: return "host_build";
  case build_action::deploy_firmware: return "deploy_firmware";
  case build_action::cross_build: return "cross_build";
  case build_action::compile_kernels: return "compile_kernels";
  case build_action::skip_unchanged: return "skip_unchanged";
  }
  return "?";
}

enum class build_status { built, skipped, failed };

inline std::string_view to_string(build_status s) {
  switch (s) {
  case build_status::built: return "built";
  case build_status::skipped: return "skipped";
  case build_status::failed: return "failed";
  }
  return "?";
}

struct build_plan {
  build_phase phase = build_phase::native;
  effective_config config;
  std::vector<std::set<std::string>> waves;
  std::map<std::string, std::vector<build_action>> actions;
  std::map<std::string, std::string> input_hash;
  std::map<std::string, std::vector<std::string>> deps; // within the selected subgraph
  std::optional<platform_descriptor> platform;          // cross phase only
};

struct kernel_result {
  std::string package;
  std::string kernel;
  std::string artifact_path; // workspace-root relative
  build_type type = build_type::sw_emu;
  int depth = 1;
  int ii = 1;
  long long dsps = 0;
  long long luts = 0;
};

struct package_result {
  std::string name;
  std::vector<build_action> actions;
  build_status status = build_status::skipped;
  std::string input_hash;
  std::string message; // failure diagnostic
};

struct build_report {
  build_phase phase = build_phase::native;
  std::vector<package_result> packages; // wave order, then name
  std::vector<kernel_result> kernels;
  long long elapsed_ms = 0;

  bool ok() const {
    return std::none_of(packages.begin(), packages.end(),
                        [](const package_result& p) { return p.status == build_status::failed; });
  }
  size_t count(build_status s) const {
    return std::count_if(packages.begin(), packages.end(),
                         [s](const package_result& p) { return p.status == s; });
  }
};

// SHA-256 over everything that determines a package's build output for the
// given configuration. Dependency hashes are deliberately excluded; the dirty
// closure handles transitive rebuilds.
inline std::string content_hash(const workspace_package& pkg, const workspace& ws,
                                const effective_config& cfg) {
  sha256 h;
  h.part(tool_version);
  h.part(render_manifest(pkg.manifest));
  for (const auto& rel : list_files(pkg.dir)) {
    h.part(rel.generic_string());
    h.part(read_file(pkg.dir / rel));
  }
  std::string cfg_part;
  if (cfg.platform) cfg_part += "platform=" + *cfg.platform + "\n";
  cfg_part += "target-triple=" + cfg.target_triple + "\n";
  if (cfg.kernel_type_override)
    cfg_part += "kernel-type=" + std::string(to_string(*cfg.kernel_type_override)) + "\n";
  if (cfg.clock_mhz_override) cfg_part += "clock-mhz=" + std::to_string(*cfg.clock_mhz_override) + "\n";
  cfg_part += std::string("merge-install=") + (cfg.merge_install ? "true" : "false") + "\n";
  h.part(cfg_part);
  if (cfg.platform && !pkg.manifest.kernels.empty()) {
    auto desc = (cfg.firmware_dir ? std::filesystem::path(*cfg.firmware_dir)
                                  : firmware_dir(ws, *cfg.platform)) /
                "platform.desc";
    h.part(read_file(desc));
  }
  return h.hex();
}

// Stamp store: lines "package<TAB>platform-or-host<TAB>hash" under the build base.
class stamp_store {
public:
  static std::filesystem::path file_for(const std::filesystem::path& build_base) {
    return build_base / ".accel-stamps";
  }

  static stamp_store load(const std::filesystem::path& build_base) {
    stamp_store st;
    st.file_ = file_for(build_base);
    if (!std::filesystem::is_regular_file(st.file_)) return st;
    for (const auto& ln : significant_lines(read_file(st.file_))) {
      auto t1 = ln.text.find('\t');
      auto t2 = t1 == std::string::npos ? std::string::npos : ln.text.find('\t', t1 + 1);
      if (t2 == std::string::npos) continue;
      st.stamps_[{ln.text.substr(0, t1), ln.text.substr(t1 + 1, t2 - t1 - 1)}] =
          ln.text.substr(t2 + 1);
    }
    return st;
  }

  std::optional<std::string> lookup(const std::string& pkg, const std::string& platform) const {
    auto it = stamps_.find({pkg, platform});
    if (it == stamps_.end()) return std::nullopt;
    return it->second;
  }

  void set(const std::string& pkg, const std::string& platform, const std::string& hash) {
    stamps_[{pkg, platform}] = hash;
  }

  void save() const {
    std::string out;
    for (const auto& [key, hash] : stamps_)
      out += key.first + "\t" + key.second + "\t" + hash + "\n";
    write_file_if_different(file_, out);
  }

private:
  std::filesystem::path file_;
  std::map<std::pair<std::string, std::string>, std::string> stamps_;
};

// Exclusive advisory lock: rejects concurrent executor runs on one build base.
class build_lock {
public:
  explicit build_lock(const std::filesystem::path& build_base)
      : path_(build_base / ".accel-lock") {
    std::filesystem::create_directories(build_base);
    int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd < 0)
      throw error(errc::locked, "build base " + build_base.string() +
                                    " is locked by another accelbuild run (" + path_.string() + ")");
    ::close(fd);
  }
  ~build_lock() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }
  build_lock(const build_lock&) = delete;
  build_lock& operator=(const build_lock&) = delete;

private:
  std::filesystem::path path_;
};

inline build_plan plan_build(const workspace& ws, const effective_config& cfg,
                             const std::optional<std::set<std::string>>& selected = std::nullopt) {
  build_plan plan;
  plan.config = cfg;
  plan.phase = cfg.platform ? build_phase::cross : build_phase::native;

  auto graph = build_graph(ws);
  if (selected)
    for (const auto& name : *selected)
      if (!graph.nodes.count(name))
        throw error(errc::missing_dep, "unknown package '" + name + "' in selection", {name});

  // Selection closure: selected packages plus all transitive dependencies.
  std::set<std::string> chosen;
  if (selected) {
    std::vector<std::string> todo(selected->begin(), selected->end());
    while (!todo.empty()) {
      auto n = todo.back();
      todo.pop_back();
      if (!chosen.insert(n).second) continue;
      for (const auto& d : graph.deps_of(n)) todo.push_back(d);
    }
  } else {
    chosen = graph.nodes;
  }

  dep_graph sub;
  sub.nodes = chosen;
  for (const auto& e : graph.edges)
    if (chosen.count(e.first) && chosen.count(e.second)) sub.edges.insert(e);
  plan.waves = schedule_waves(sub);
  for (const auto& n : sub.nodes) plan.deps[n] = sub.deps_of(n);

  std::filesystem::path fw_dir;
  if (plan.phase == build_phase::cross) {
    fw_dir = cfg.firmware_dir ? std::filesystem::path(*cfg.firmware_dir)
                              : firmware_dir(ws, *cfg.platform);
    if (!std::filesystem::is_regular_file(fw_dir / "platform.desc")) {
      bool provided_in_src = std::any_of(
          ws.packages.begin(), ws.packages.end(), [&](const workspace_package& p) {
            return p.manifest.firmware && p.manifest.firmware->platform == *cfg.platform;
          });
      if (provided_in_src)
        throw error(errc::phase_order,
                    "firmware for platform '" + *cfg.platform +
                        "' is not deployed; run a native build (no mixin) first",
                    {*cfg.platform});
      throw error(errc::no_firmware,
                  "no firmware package provides platform '" + *cfg.platform + "'",
                  {*cfg.platform});
    }
    plan.platform = load_platform(read_file(fw_dir / "platform.desc"));
  }

  auto stamps = stamp_store::load(ws.root / cfg.build_base);
  const std::string stamp_key = plan.phase == build_phase::cross ? *cfg.platform : "host";

  std::set<std::string> changed;
  for (const auto& name : sub.nodes) {
    const auto* pkg = ws.find(name);
    auto hash = content_hash(*pkg, ws, cfg);
    plan.input_hash[name] = hash;
    if (pkg->manifest.kind == package_kind::firmware) {
      if (plan.phase == build_phase::native) {
        // Firmware rebuild state lives in the deployed dir, not the stamp store.
        try {
          auto meta = detail::read_deploy_meta(firmware_dir(ws, pkg->manifest.firmware->platform));
          if (!meta || meta->owner != name ||
              meta->hash != detail::firmware_content_hash(*pkg, *pkg->manifest.firmware))
            changed.insert(name);
        } catch (const error&) {
          changed.insert(name); // let deploy_firmware report the real problem
        }
      }
    } else if (stamps.lookup(name, stamp_key) != hash) {
      changed.insert(name);
    }
  }

  auto rebuild = dirty_set(sub, changed);
  for (const auto& name : sub.nodes) {
    const auto* pkg = ws.find(name);
    std::vector<build_action> acts;
    if (!rebuild.count(name)) {
      acts = {build_action::skip_unchanged};
    } else if (pkg->manifest.kind == package_kind::firmware) {
      // Deployment belongs to Phase A; the cross phase never redeploys.
      acts = plan.phase == build_phase::native
                 ? std::vector<build_action>{build_action::deploy_firmware}
                 : std::vector<build_action>{build_action::skip_unchanged};
    } else if (plan.phase == build_phase::native) {
      acts = {build_action::host_build};
    } else {
      acts = {build_action::cross_build};
      if (!pkg->manifest.kernels.empty()) acts.push_back(build_action::compile_kernels);
    }
    plan.actions[name] = std::move(acts);
  }
  return plan;
}

namespace detail {

struct package_outcome {
  package_result result;
  std::vector<kernel_result> kernels;
};

// Copies package sources into the build base, records the target triple, and
// installs the payload under share/<pkg> in the install prefix.
inline std::vector<std::string> stage_package(const workspace_package& pkg, const workspace& ws,
                                              const effective_config& cfg,
                                              const std::string& triple) {
  namespace fs = std::filesystem;
  auto build_dir = ws.root / cfg.build_base / pkg.manifest.name;
  std::error_code ec;
  fs::remove_all(build_dir, ec);
  copy_tree(pkg.dir, build_dir);
  write_file(build_dir / "target.stamp", triple + "\n");

  auto install_base = ws.root / cfg.install_base;
  fs::remove_all(install_base / pkg.manifest.name, ec); // stale kernels and non-merge payload
  auto prefix = cfg.merge_install ? install_base : install_base / pkg.manifest.name;
  auto payload = prefix / "share" / pkg.manifest.name;
  fs::remove_all(payload, ec);
  copy_tree(pkg.dir, payload);

  std::vector<std::string> installed;
  for (const auto& rel : list_files(payload))
    installed.push_back(fs::relative(payload / rel, install_base).generic_string());
  return installed;
}

inline void finish_install_manifest(const workspace_package& pkg, const workspace& ws,
                                    const effective_config& cfg,
                                    std::vector<std::string> installed) {
  auto install_base = ws.root / cfg.install_base;
  auto prefix = cfg.merge_install ? install_base : install_base / pkg.manifest.name;
  std::sort(installed.begin(), installed.end());
  std::string text;
  for (const auto& line : installed) text += line + "\n";
  write_file(prefix / "share" / pkg.manifest.name / "install.manifest", text);
}

inline std::vector<kernel_result> compile_package_kernels(const workspace_package& pkg,
                                                          const workspace& ws,
                                                          const build_plan& plan,
                                                          std::vector<std::string>& installed) {
  namespace fs = std::filesystem;
  const auto& cfg = plan.config;
  std::vector<kernel_result> out;
  for (const auto& decl : pkg.manifest.kernels) {
    auto ir = parse_kernel(read_file(pkg.dir / decl.file));
    if (ir.name != decl.name)
      throw error(errc::config, "kernel declaration '" + decl.name + "' names source kernel '" +
                                    ir.name + "' (" + decl.file + ")");
    auto kcfg = parse_config(read_file(pkg.dir / decl.config));
    // The declared config carries the kernel's default target; the build
    // retargets it to the platform being built.
    kcfg.platform = plan.platform->platform;
    if (cfg.clock_mhz_override) kcfg.clock_mhz = *cfg.clock_mhz_override;
    auto type = cfg.kernel_type_override.value_or(decl.type);

    auto artifact = compile_kernel(ir, kcfg, *plan.platform, type);
    auto bytes = encode_artifact(artifact);
    auto rel_build = fs::path(cfg.build_base) / pkg.manifest.name / "kernels" / (decl.name + ".akbin");
    write_file(ws.root / rel_build, bytes);
    if (decl.package_flag) {
      auto rel_install =
          fs::path(cfg.install_base) / pkg.manifest.name / "kernels" / (decl.name + ".akbin");
      write_file(ws.root / rel_install, bytes);
      installed.push_back((fs::path(pkg.manifest.name) / "kernels" / (decl.name + ".akbin"))
                              .generic_string());
    }

    kernel_result kr;
    kr.package = pkg.manifest.name;
    kr.kernel = decl.name;
    kr.artifact_path = rel_build.generic_string();
    kr.type = type;
    kr.depth = artifact.meta.depth;
    kr.ii = artifact.meta.ii;
    kr.dsps = artifact.meta.dsps;
    kr.luts = artifact.meta.luts;
    out.push_back(std::move(kr));
  }
  return out;
}

class install_claims {
public:
  // Returns the previous owner when the path was already claimed.
  std::optional<std::string> claim(const std::string& path, const std::string& pkg) {
    std::lock_guard<std::mutex> lock(mu_);
    auto [it, inserted] = owners_.emplace(path, pkg);
    if (inserted) return std::nullopt;
    return it->second;
  }

private:
  std::mutex mu_;
  std::map<std::string, std::string> owners_;
};

inline package_outcome run_package(const std::string& name, const workspace& ws,
                                   const build_plan& plan, install_claims& claims) {
  package_outcome out;
  out.result.name = name;
  out.result.actions = plan.actions.at(name);
  out.result.input_hash = plan.input_hash.at(name);
  const auto& acts = out.result.actions;

  if (acts.size() == 1 && acts[0] == build_action::skip_unchanged) {
    out.result.status = build_status::skipped;
    return out;
  }

  const auto* pkg = ws.find(name);
  try {
    std::vector<std::string> installed;
    bool staged = false;
    for (auto act : acts) {
      switch (act) {
      case build_action::deploy_firmware:
        deploy_firmware(*pkg, ws);
        break;
      case build_action::host_build:
        installed = stage_package(*pkg, ws, plan.config, std::string(host_triple));
        staged = true;
        break;
      case build_action::cross_build:
        installed = stage_package(*pkg, ws, plan.config, plan.config.target_triple);
        staged = true;
        break;
      case build_action::compile_kernels:
        for (auto& kr : compile_package_kernels(*pkg, ws, plan, installed))
          out.kernels.push_back(std::move(kr));
        break;
      case build_action::skip_unchanged:
        break;
      }
    }
    if (staged) {
      if (plan.config.merge_install)
        for (const auto& path : installed)
          if (auto owner = claims.claim(path, name))
            throw error(errc::config,
                        "install path conflict: '" + path + "' already installed by '" + *owner + "'");
      finish_install_manifest(*pkg, ws, plan.config, std::move(installed));
    }
    out.result.status = build_status::built;
  } catch (const std::exception& e) {
    out.result.status = build_status::failed;
    out.result.message = e.what();
  }
  return out;
}

} // namespace detail

inline build_report execute(const build_plan& plan, const workspace& ws) {
  namespace fs = std::filesystem;
  auto t0 = std::chrono::steady_clock::now();

  build_report report;
  report.phase = plan.phase;

  auto build_base = ws.root / plan.config.build_base;
  auto install_base = ws.root / plan.config.install_base;
  fs::create_directories(build_base);
  fs::create_directories(install_base);
  build_lock lock(build_base);

  if (plan.phase == build_phase::native)
    write_file_if_different(ws.root / ".accel" / "backends",
                            "kernel_compiler " + std::string(tool_version) + "\n");

  auto stamps = stamp_store::load(build_base);
  const std::string stamp_key =
      plan.phase == build_phase::cross ? *plan.config.platform : "host";

  detail::install_claims claims;
  std::set<std::string> failed;

  for (const auto& wave : plan.waves) {
    std::vector<std::pair<std::string, std::future<detail::package_outcome>>> running;
    std::vector<detail::package_outcome> outcomes;
    for (const auto& name : wave) {
      auto deps = plan.deps.at(name);
      if (std::any_of(deps.begin(), deps.end(),
                      [&](const std::string& d) { return failed.count(d); })) {
        detail::package_outcome out;
        out.result.name = name;
        out.result.actions = plan.actions.at(name);
        out.result.input_hash = plan.input_hash.at(name);
        out.result.status = build_status::failed;
        auto blocker = std::find_if(deps.begin(), deps.end(),
                                    [&](const std::string& d) { return failed.count(d) > 0; });
        out.result.message = "dependency '" + *blocker + "' failed";
        outcomes.push_back(std::move(out));
        continue;
      }
      running.emplace_back(name, std::async(std::launch::async, [&, name] {
                             return detail::run_package(name, ws, plan, claims);
                           }));
    }
    for (auto& [name, fut] : running) outcomes.push_back(fut.get());

    std::sort(outcomes.begin(), outcomes.end(),
              [](const auto& a, const auto& b) { return a.result.name < b.result.name; });
    for (auto& out : outcomes) {
      if (out.result.status == build_status::failed) {
        failed.insert(out.result.name);
      } else if (out.result.status == build_status::built) {
        const auto* pkg = ws.find(out.result.name);
        if (pkg->manifest.kind != package_kind::firmware)
          stamps.set(out.result.name, stamp_key, out.result.input_hash);
      }
      for (auto& kr : out.kernels) report.kernels.push_back(std::move(kr));
      report.packages.push_back(std::move(out.result));
    }
    stamps.save(); // stamp updates are serialized at wave boundaries
  }

  report.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
  return report;
}

} // namespace accelbuild
