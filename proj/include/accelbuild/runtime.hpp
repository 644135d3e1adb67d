// Copyright (C) 2026 accelbuild contributors
// SPDX-License-Identifier: Apache-2.0
//
// Emulated device runtime: loads kernel artifacts into a single slot
// (whole-kernel DFX swap), runs them functionally (sw_emu) or under the
// streaming-pipeline cycle model (hw_emu), and reports cycles against the
// fetch-compute-store sequential baseline.
//
// Cycle laws (model, not silicon): pipeline = depth + (n-1)*ii for n >= 1;
// sequential = n * sum(latency(op) + 2) with an implicit copy stage for
// pass-through kernels.
#pragma once

#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "accelbuild/errors.hpp"
#include "accelbuild/kernel_compile.hpp"
#include "accelbuild/platform.hpp"

namespace accelbuild {

using stream_data = std::map<std::string, std::vector<long long>>;

// Exact nonnegative ratio; reports print it as a fixed-point decimal.
struct rational {
  long long num = 0;
  long long den = 1;

  static rational of(long long num, long long den) {
    auto g = std::gcd(num, den);
    if (g == 0) return {0, 1};
    return {num / g, den / g};
  }

  std::string to_decimal(int places) const {
    long long scale = 1;
    for (int i = 0; i < places; ++i) scale *= 10;
    long long scaled = (num * scale * 2 + den) / (2 * den); // round half up
    std::string digits = std::to_string(scaled % scale);
    digits.insert(digits.begin(), places - digits.size(), '0');
    return std::to_string(scaled / scale) + "." + digits;
  }

  friend bool operator==(const rational&, const rational&) = default;
};

struct cycle_report {
  long long n = 0;
  long long pipeline_cycles = 0;
  long long sequential_cycles = 0;
  rational speedup;          // sequential / pipeline
  rational wall_estimate_us; // pipeline / clock_mhz
};

struct loaded_kernel {
  kernel_artifact artifact;
};

// n * sum(latency + 2): one fetch and one store per stage per element.
inline long long sequential_cycle_model(const kernel_ir& ir, long long n) {
  long long per_element = 0;
  if (ir.stages.empty()) {
    per_element = info(kernel_op::copy).latency + 2; // implicit pass-through copy
  } else {
    for (const auto& s : ir.stages) per_element += info(s.op).latency + 2;
  }
  return n * per_element;
}

namespace detail {

inline long long wrap_to(elem_type t, long long v) {
  if (t == elem_type::i32)
    return static_cast<long long>(static_cast<int32_t>(static_cast<uint32_t>(v)));
  return v;
}

inline long long eval_stage(const kernel_stage& s, long long a, long long b, elem_type lhs_type,
                            elem_type result_type) {
  uint64_t ua = static_cast<uint64_t>(a);
  uint64_t ub = static_cast<uint64_t>(b);
  long long raw = 0;
  switch (s.op) {
  case kernel_op::add: raw = static_cast<long long>(ua + ub); break;
  case kernel_op::sub: raw = static_cast<long long>(ua - ub); break;
  case kernel_op::mul: raw = static_cast<long long>(ua * ub); break;
  case kernel_op::min: raw = std::min(a, b); break;
  case kernel_op::max: raw = std::max(a, b); break;
  case kernel_op::copy: raw = a; break;
  case kernel_op::addi: raw = static_cast<long long>(ua + static_cast<uint64_t>(s.imm)); break;
  case kernel_op::muli: raw = static_cast<long long>(ua * static_cast<uint64_t>(s.imm)); break;
  case kernel_op::shri: {
    // Logical shift at the operand's width.
    if (lhs_type == elem_type::i32)
      raw = s.imm >= 32 ? 0 : static_cast<long long>(static_cast<uint32_t>(a) >> s.imm);
    else
      raw = s.imm >= 64 ? 0 : static_cast<long long>(ua >> s.imm);
    break;
  }
  }
  return wrap_to(result_type, raw);
}

inline void validate_inputs(const kernel_ir& ir, const stream_data& inputs) {
  for (const auto& [name, t] : ir.inputs)
    if (!inputs.count(name))
      throw error(errc::signature, "missing input stream '" + name + "'");
  for (const auto& [name, values] : inputs)
    if (!ir.is_input(name))
      throw error(errc::signature, "unexpected input stream '" + name + "'");
  size_t n = inputs.empty() ? 0 : inputs.begin()->second.size();
  for (const auto& [name, values] : inputs)
    if (values.size() != n)
      throw error(errc::signature, "input streams have mismatched lengths");
  for (const auto& [name, t] : ir.inputs) {
    if (t != elem_type::i32) continue;
    for (long long v : inputs.at(name))
      if (v < INT32_MIN || v > INT32_MAX)
        throw error(errc::signature,
                    "value " + std::to_string(v) + " overflows i32 input '" + name + "'");
  }
}

} // namespace detail

// Direct interpretation of the IR in stage order, wraparound arithmetic at
// each stream's element width.
inline stream_data run_functional(const loaded_kernel& k, const stream_data& inputs) {
  const kernel_ir& ir = k.artifact.ir;
  detail::validate_inputs(ir, inputs);
  size_t n = inputs.empty() ? 0 : inputs.begin()->second.size();
  auto widths = ir.stream_types();

  std::map<std::string, std::vector<long long>> streams;
  for (const auto& [name, t] : ir.inputs) {
    auto vals = inputs.at(name);
    for (auto& v : vals) v = detail::wrap_to(t, v);
    streams.emplace(name, std::move(vals));
  }
  for (const auto& s : ir.stages) {
    const auto& lhs = streams.at(s.lhs);
    const std::vector<long long>* rhs =
        info(s.op).arity == op_arity::binary ? &streams.at(s.rhs) : nullptr;
    std::vector<long long> out(n);
    for (size_t i = 0; i < n; ++i)
      out[i] = detail::eval_stage(s, lhs[i], rhs ? (*rhs)[i] : 0, widths.at(s.lhs),
                                  widths.at(s.result));
    streams.emplace(s.result, std::move(out));
  }

  stream_data outputs;
  for (const auto& [name, t] : ir.outputs) outputs[name] = streams.at(name);
  return outputs;
}

inline std::pair<stream_data, cycle_report> run_timed(const loaded_kernel& k,
                                                      const stream_data& inputs) {
  auto outputs = run_functional(k, inputs);
  const auto& meta = k.artifact.meta;
  long long n = inputs.empty() ? 0 : static_cast<long long>(inputs.begin()->second.size());

  cycle_report report;
  report.n = n;
  report.pipeline_cycles = n == 0 ? 0 : meta.depth + (n - 1) * static_cast<long long>(meta.ii);
  report.sequential_cycles = sequential_cycle_model(k.artifact.ir, n);
  report.speedup = report.pipeline_cycles == 0
                       ? rational{0, 1}
                       : rational::of(report.sequential_cycles, report.pipeline_cycles);
  report.wall_estimate_us = rational::of(report.pipeline_cycles, meta.clock_mhz);
  return {std::move(outputs), report};
}

// An emulated device bound to one platform. One kernel slot: loading swaps
// the whole kernel (DFX model); the buffer pool survives swaps.
class device {
public:
  explicit device(platform_descriptor platform) : platform_(std::move(platform)) {}

  const loaded_kernel& load_artifact(std::string_view bytes) {
    auto art = decode_artifact(bytes);
    if (art.meta.type == build_type::hw && art.meta.platform != platform_.platform)
      throw error(errc::platform_mismatch,
                  "hw artifact for platform '" + art.meta.platform +
                      "' cannot load on device '" + platform_.platform + "'",
                  {art.meta.platform, platform_.platform});
    loaded_ = loaded_kernel{std::move(art)};
    return *loaded_;
  }

  const platform_descriptor& platform() const { return platform_; }
  const loaded_kernel* loaded() const { return loaded_ ? &*loaded_ : nullptr; }

  void set_buffer(const std::string& name, std::vector<long long> values) {
    buffers_[name] = std::move(values);
  }
  const std::map<std::string, std::vector<long long>>& buffers() const { return buffers_; }

private:
  platform_descriptor platform_;
  std::optional<loaded_kernel> loaded_;
  std::map<std::string, std::vector<long long>> buffers_;
};

} // namespace accelbuild
