// Copyright (C) 2026 accelbuild contributors
// SPDX-License-Identifier: Apache-2.0
//
// Package dependency DAG: deterministic topological orders, parallel
// scheduling waves (longest-path levels), and dirty-set closures for
// incremental builds. All tie-breaks are lexicographic.
#pragma once

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "accelbuild/errors.hpp"
#include "accelbuild/manifest.hpp"
#include "accelbuild/workspace.hpp"

namespace accelbuild {

struct dep_graph {
  std::set<std::string> nodes;
  // (dependency, dependent): the first must be built before the second.
  std::set<std::pair<std::string, std::string>> edges;

  std::vector<std::string> deps_of(const std::string& n) const {
    std::vector<std::string> out;
    for (const auto& [dep, dependent] : edges)
      if (dependent == n) out.push_back(dep);
    return out;
  }

  std::vector<std::string> dependents_of(const std::string& n) const {
    std::vector<std::string> out;
    for (const auto& [dep, dependent] : edges)
      if (dep == n) out.push_back(dependent);
    return out;
  }

  friend bool operator==(const dep_graph&, const dep_graph&) = default;
};

namespace detail {

// DFS cycle extraction over depends edges; nodes and adjacency visited in
// sorted order so the reported cycle is deterministic.
inline std::vector<std::string> find_cycle(const dep_graph& g) {
  enum class mark { white, grey, black };
  std::map<std::string, mark> marks;
  for (const auto& n : g.nodes) marks[n] = mark::white;
  std::vector<std::string> path;
  std::vector<std::string> cycle;

  auto dfs = [&](auto&& self, const std::string& n) -> bool {
    marks[n] = mark::grey;
    path.push_back(n);
    for (const auto& d : g.deps_of(n)) {
      if (marks[d] == mark::grey) {
        auto it = std::find(path.begin(), path.end(), d);
        cycle.assign(it, path.end());
        return true;
      }
      if (marks[d] == mark::white && self(self, d)) return true;
    }
    path.pop_back();
    marks[n] = mark::black;
    return false;
  };

  for (const auto& n : g.nodes)
    if (marks[n] == mark::white && dfs(dfs, n)) break;
  return cycle;
}

inline std::vector<std::string> canonical_rotation(std::vector<std::string> cycle) {
  if (cycle.empty()) return cycle;
  std::vector<std::string> best = cycle;
  for (size_t i = 1; i < cycle.size(); ++i) {
    std::rotate(cycle.begin(), cycle.begin() + 1, cycle.end());
    if (cycle < best) best = cycle;
  }
  return best;
}

} // namespace detail

inline dep_graph build_graph(const std::vector<package_manifest>& manifests) {
  dep_graph g;
  for (const auto& m : manifests) g.nodes.insert(m.name);
  for (const auto& m : manifests) {
    for (const auto& dep : m.depends) {
      if (!g.nodes.count(dep))
        throw error(errc::missing_dep,
                    "package '" + m.name + "' depends on unknown package '" + dep + "'",
                    {m.name, dep});
      g.edges.emplace(dep, m.name);
    }
  }
  if (auto cycle = detail::canonical_rotation(detail::find_cycle(g)); !cycle.empty()) {
    std::string msg = "dependency cycle: ";
    for (size_t i = 0; i < cycle.size(); ++i) {
      if (i) msg += " -> ";
      msg += cycle[i];
    }
    throw error(errc::cycle, msg, cycle);
  }
  return g;
}

inline dep_graph build_graph(const workspace& ws) {
  std::vector<package_manifest> ms;
  ms.reserve(ws.packages.size());
  for (const auto& p : ws.packages) ms.push_back(p.manifest);
  return build_graph(ms);
}

// Kahn's algorithm; among simultaneously-ready nodes the lexicographically
// smallest name goes first.
inline std::vector<std::string> topo_order(const dep_graph& g) {
  std::map<std::string, int> pending;
  for (const auto& n : g.nodes) pending[n] = 0;
  for (const auto& [dep, dependent] : g.edges) ++pending[dependent];

  std::priority_queue<std::string, std::vector<std::string>, std::greater<>> ready;
  for (const auto& [n, c] : pending)
    if (c == 0) ready.push(n);

  std::vector<std::string> order;
  while (!ready.empty()) {
    auto n = ready.top();
    ready.pop();
    order.push_back(n);
    for (const auto& d : g.dependents_of(n))
      if (--pending[d] == 0) ready.push(d);
  }
  return order;
}

// Wave k holds exactly the nodes whose longest dependency path has k edges.
inline std::vector<std::set<std::string>> schedule_waves(const dep_graph& g) {
  std::map<std::string, size_t> level;
  for (const auto& n : topo_order(g)) {
    size_t lv = 0;
    for (const auto& d : g.deps_of(n)) lv = std::max(lv, level[d] + 1);
    level[n] = lv;
  }
  std::vector<std::set<std::string>> waves;
  for (const auto& [n, lv] : level) {
    if (waves.size() <= lv) waves.resize(lv + 1);
    waves[lv].insert(n);
  }
  return waves;
}

// changed plus every transitive dependent of a changed node.
inline std::set<std::string> dirty_set(const dep_graph& g, const std::set<std::string>& changed) {
  for (const auto& n : changed)
    if (!g.nodes.count(n))
      throw error(errc::missing_dep, "unknown package '" + n + "' in changed set", {n});
  std::set<std::string> dirty = changed;
  std::vector<std::string> todo(changed.begin(), changed.end());
  while (!todo.empty()) {
    auto n = todo.back();
    todo.pop_back();
    for (const auto& d : g.dependents_of(n))
      if (dirty.insert(d).second) todo.push_back(d);
  }
  return dirty;
}

inline std::string to_dot(const dep_graph& g) {
  std::string out = "digraph deps {\n";
  for (const auto& n : g.nodes) out += "  \"" + n + "\";\n";
  for (const auto& [dep, dependent] : g.edges)
    out += "  \"" + dep + "\" -> \"" + dependent + "\";\n";
  out += "}\n";
  return out;
}

} // namespace accelbuild
