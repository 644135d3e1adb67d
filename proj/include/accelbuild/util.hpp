// Copyright (C) 2026 accelbuild contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "accelbuild/errors.hpp"

namespace accelbuild {

inline std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_list(std::string_view s, char sep = ',') {
  std::vector<std::string> out;
  size_t pos = 0;
  while (pos <= s.size()) {
    auto next = s.find(sep, pos);
    if (next == std::string_view::npos) next = s.size();
    auto item = trim(s.substr(pos, next - pos));
    if (!item.empty()) out.push_back(item);
    pos = next + 1;
  }
  return out;
}

inline bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  });
}

// Workspace/package-relative path: no absolute paths, no parent escapes.
inline bool is_relpath(std::string_view s) {
  if (s.empty() || s.front() == '/') return false;
  size_t pos = 0;
  while (pos <= s.size()) {
    auto next = s.find('/', pos);
    if (next == std::string_view::npos) next = s.size();
    auto comp = s.substr(pos, next - pos);
    if (comp.empty() || comp == "..") return false;
    pos = next + 1;
  }
  return true;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw error(errc::io, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw error(errc::io, "read failed for " + p.string());
  return std::move(ss).str();
}

inline void write_file(const std::filesystem::path& p, std::string_view bytes) {
  std::error_code ec;
  std::filesystem::create_directories(p.parent_path(), ec);
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw error(errc::io, "cannot write " + p.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw error(errc::io, "write failed for " + p.string());
}

// Keeps byte-idempotent operations idempotent at the mtime level too.
inline bool write_file_if_different(const std::filesystem::path& p, std::string_view bytes) {
  if (std::filesystem::exists(p)) {
    std::error_code ec;
    if (std::filesystem::is_regular_file(p, ec) && read_file(p) == bytes) return false;
  }
  write_file(p, bytes);
  return true;
}

// Sorted relative paths of all regular files under root.
inline std::vector<std::filesystem::path> list_files(const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  std::vector<fs::path> out;
  if (!fs::exists(root)) return out;
  for (const auto& ent : fs::recursive_directory_iterator(root)) {
    if (ent.is_regular_file()) out.push_back(fs::relative(ent.path(), root));
  }
  std::sort(out.begin(), out.end(),
            [](const fs::path& a, const fs::path& b) { return a.generic_string() < b.generic_string(); });
  return out;
}

inline void copy_tree(const std::filesystem::path& from, const std::filesystem::path& to) {
  namespace fs = std::filesystem;
  fs::create_directories(to);
  for (const auto& rel : list_files(from)) {
    fs::create_directories((to / rel).parent_path());
    fs::copy_file(from / rel, to / rel, fs::copy_options::overwrite_existing);
  }
}

inline void be64_append(std::string& out, uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8)
    out.push_back(static_cast<char>((v >> shift) & 0xff));
}

inline uint64_t be64_read(std::string_view bytes, size_t off) {
  uint64_t v = 0;
  for (size_t i = 0; i < 8; ++i) v = (v << 8) | static_cast<unsigned char>(bytes[off + i]);
  return v;
}

// Strips comments ('#' to end of line), drops blank lines, keeps 1-based
// line numbers and leading indentation. Shared by every line-oriented format.
struct source_line {
  int no;
  int indent;
  std::string text; // trimmed
};

inline std::vector<source_line> significant_lines(std::string_view text) {
  std::vector<source_line> out;
  int no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view raw = text.substr(pos, nl - pos);
    ++no;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    int indent = 0;
    while (static_cast<size_t>(indent) < raw.size() && raw[indent] == ' ') ++indent;
    auto body = trim(raw);
    if (!body.empty()) out.push_back({no, indent, std::move(body)});
    if (nl == text.size()) break;
    pos = nl + 1;
  }
  return out;
}

// Splits "key: value"; returns false when there is no colon.
inline bool split_key_value(std::string_view line, std::string& key, std::string& value) {
  auto colon = line.find(':');
  if (colon == std::string_view::npos) return false;
  key = trim(line.substr(0, colon));
  value = trim(line.substr(colon + 1));
  return !key.empty();
}

} // namespace accelbuild
