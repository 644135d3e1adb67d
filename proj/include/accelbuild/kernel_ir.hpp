// Copyright (C) 2026 accelbuild contributors
// SPDX-License-Identifier: Apache-2.0
//
// The kernel DSL: a dataflow program over named streams. Single assignment,
// define-before-use, two element widths. One cost table drives resource
// estimation, pipeline scheduling and the sequential baseline model.
#pragma once

#include <charconv>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "accelbuild/errors.hpp"
#include "accelbuild/util.hpp"

namespace accelbuild {

enum class kernel_op { add, sub, mul, min, max, copy, addi, muli, shri };

enum class elem_type { i32, i64 };

inline std::string_view to_string(elem_type t) { return t == elem_type::i32 ? "i32" : "i64"; }

enum class op_arity { binary, unary, immediate };

struct op_info {
  std::string_view name;
  op_arity arity;
  int latency;
  int luts;
  int dsps;
};

// Multipliers cost DSPs and pipeline deeper; everything else is LUT fabric.
inline constexpr op_info op_table[] = {
    {"add", op_arity::binary, 1, 8, 0},     {"sub", op_arity::binary, 1, 8, 0},
    {"mul", op_arity::binary, 3, 16, 1},    {"min", op_arity::binary, 1, 8, 0},
    {"max", op_arity::binary, 1, 8, 0},     {"copy", op_arity::unary, 1, 0, 0},
    {"addi", op_arity::immediate, 1, 8, 0}, {"muli", op_arity::immediate, 3, 16, 1},
    {"shri", op_arity::immediate, 1, 4, 0},
};

inline const op_info& info(kernel_op op) { return op_table[static_cast<int>(op)]; }

inline std::optional<kernel_op> parse_op(std::string_view s) {
  for (size_t i = 0; i < std::size(op_table); ++i)
    if (op_table[i].name == s) return static_cast<kernel_op>(i);
  return std::nullopt;
}

struct kernel_stage {
  kernel_op op;
  std::string lhs;      // first operand stream
  std::string rhs;      // second operand stream (binary ops)
  long long imm = 0;    // immediate (addi/muli/shri)
  std::string result;

  friend bool operator==(const kernel_stage&, const kernel_stage&) = default;
};

struct kernel_ir {
  std::string name;
  std::vector<std::pair<std::string, elem_type>> inputs;
  std::vector<std::pair<std::string, elem_type>> outputs;
  std::vector<kernel_stage> stages;

  bool is_input(std::string_view stream) const {
    for (const auto& [n, t] : inputs)
      if (n == stream) return true;
    return false;
  }

  // Stage index producing a stream, or -1 when the stream is an input.
  int producer(std::string_view stream) const {
    for (size_t i = 0; i < stages.size(); ++i)
      if (stages[i].result == stream) return static_cast<int>(i);
    return -1;
  }

  // Width of every stream: declared for in/out streams, inferred for
  // intermediates (immediate/copy keep the operand width, binary ops widen).
  std::map<std::string, elem_type> stream_types() const {
    std::map<std::string, elem_type> w;
    for (const auto& [n, t] : inputs) w[n] = t;
    for (const auto& [n, t] : outputs) w[n] = t;
    for (const auto& s : stages) {
      if (w.count(s.result)) continue;
      elem_type t = w.at(s.lhs);
      if (info(s.op).arity == op_arity::binary && w.at(s.rhs) == elem_type::i64) t = elem_type::i64;
      w[s.result] = t;
    }
    return w;
  }

  friend bool operator==(const kernel_ir&, const kernel_ir&) = default;
};

inline kernel_ir parse_kernel(std::string_view text) {
  kernel_ir ir;
  std::set<std::string> defined;   // inputs + stage results, in listing order
  std::set<std::string> out_decls; // declared output names
  bool saw_kernel = false;

  auto parse_type = [](int line, const std::string& s) {
    if (s == "i32") return elem_type::i32;
    if (s == "i64") return elem_type::i64;
    throw parse_error(line, "invalid element type '" + s + "' (expected i32 or i64)");
  };

  for (const auto& ln : significant_lines(text)) {
    std::vector<std::string> tok;
    {
      size_t pos = 0;
      const std::string& s = ln.text;
      while (pos < s.size()) {
        auto ws = s.find_first_of(" \t", pos);
        if (ws == std::string::npos) ws = s.size();
        if (ws > pos) tok.push_back(s.substr(pos, ws - pos));
        pos = ws + 1;
      }
    }
    const auto& head = tok[0];

    if (!saw_kernel) {
      if (head != "kernel") throw parse_error(ln.no, "expected 'kernel <name>' first");
      if (tok.size() != 2 || !is_identifier(tok[1]))
        throw parse_error(ln.no, "expected 'kernel <name>'");
      ir.name = tok[1];
      saw_kernel = true;
      continue;
    }

    if (head == "kernel") throw parse_error(ln.no, "duplicate kernel line");

    if (head == "in" || head == "out") {
      if (tok.size() != 3 || !is_identifier(tok[1]))
        throw parse_error(ln.no, "expected '" + head + " <stream> <i32|i64>'");
      auto t = parse_type(ln.no, tok[2]);
      if (head == "in") {
        if (defined.count(tok[1])) throw parse_error(ln.no, "redefinition of '" + tok[1] + "'");
        defined.insert(tok[1]);
        ir.inputs.emplace_back(tok[1], t);
      } else {
        if (out_decls.count(tok[1]))
          throw parse_error(ln.no, "duplicate output declaration '" + tok[1] + "'");
        for (const auto& [n, it] : ir.inputs)
          if (n == tok[1] && it != t)
            throw parse_error(ln.no, "conflicting type for stream '" + tok[1] + "'");
        out_decls.insert(tok[1]);
        ir.outputs.emplace_back(tok[1], t);
      }
      continue;
    }

    if (head == "stage") {
      // stage <op> <arg1> [<arg2>] -> <result>
      auto arrow = std::find(tok.begin(), tok.end(), "->");
      if (tok.size() < 5 || arrow == tok.end() || arrow + 2 != tok.end())
        throw parse_error(ln.no, "expected 'stage <op> <args> -> <stream>'");
      auto op = parse_op(tok[1]);
      if (!op) throw parse_error(ln.no, "unknown op '" + tok[1] + "'");
      std::vector<std::string> args(tok.begin() + 2, arrow);
      const std::string& result = tok.back();
      if (!is_identifier(result)) throw parse_error(ln.no, "invalid result stream '" + result + "'");

      kernel_stage st;
      st.op = *op;
      st.result = result;
      auto stream_arg = [&](const std::string& a) -> std::string {
        if (!a.empty() && a[0] == '=')
          throw parse_error(ln.no, "op '" + std::string(info(*op).name) + "' takes stream operands");
        if (!defined.count(a)) throw parse_error(ln.no, "use of undefined stream '" + a + "'");
        return a;
      };
      switch (info(*op).arity) {
      case op_arity::binary:
        if (args.size() != 2) throw parse_error(ln.no, "binary op needs two operands");
        st.lhs = stream_arg(args[0]);
        st.rhs = stream_arg(args[1]);
        break;
      case op_arity::unary:
        if (args.size() != 1) throw parse_error(ln.no, "copy takes one operand");
        st.lhs = stream_arg(args[0]);
        break;
      case op_arity::immediate: {
        if (args.size() != 2) throw parse_error(ln.no, "immediate op needs a stream and an immediate");
        st.lhs = stream_arg(args[0]);
        const std::string& immtok = args[1];
        if (immtok.empty() || immtok[0] != '=')
          throw parse_error(ln.no, "immediate must be written '=<int>'");
        long long v = 0;
        auto* b = immtok.data() + 1;
        auto* e = immtok.data() + immtok.size();
        auto [p, ec] = std::from_chars(b, e, v);
        if (ec != std::errc() || p != e)
          throw parse_error(ln.no, "invalid immediate '" + immtok + "'");
        if (*op == kernel_op::shri && (v < 0 || v > 63))
          throw parse_error(ln.no, "shri immediate out of range [0,63]");
        st.imm = v;
        break;
      }
      }
      if (defined.count(result)) throw parse_error(ln.no, "redefinition of '" + result + "'");
      defined.insert(result);
      ir.stages.push_back(std::move(st));
      continue;
    }

    throw parse_error(ln.no, "unknown statement '" + head + "'");
  }

  if (!saw_kernel) throw error(errc::parse, "empty kernel source");
  for (const auto& [n, t] : ir.outputs)
    if (!defined.count(n)) throw error(errc::parse, "undefined output stream '" + n + "'");
  return ir;
}

// Canonical form: exactly the grammar with single spaces; parse(render(ir)) == ir.
inline std::string render_kernel(const kernel_ir& ir) {
  std::string out = "kernel " + ir.name + "\n";
  for (const auto& [n, t] : ir.inputs) out += "in " + n + " " + std::string(to_string(t)) + "\n";
  for (const auto& [n, t] : ir.outputs) out += "out " + n + " " + std::string(to_string(t)) + "\n";
  for (const auto& s : ir.stages) {
    out += "stage " + std::string(info(s.op).name) + " " + s.lhs;
    if (info(s.op).arity == op_arity::binary) out += " " + s.rhs;
    if (info(s.op).arity == op_arity::immediate) out += " =" + std::to_string(s.imm);
    out += " -> " + s.result + "\n";
  }
  return out;
}

} // namespace accelbuild
