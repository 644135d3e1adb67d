// Copyright (C) 2026 accelbuild contributors
// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "accelbuild/kernel_compile.hpp"
#include "support/oracles.hpp"
#include "support/test_util.hpp"

using namespace accelbuild;

static platform_descriptor zcu102_fixture() {
  return load_platform("platform: zcu102\ntriple: aarch64-accel-eabi\nclock-mhz: 200\n"
                       "budget-luts: 120000\nbudget-dsps: 1200\nbudget-bram-kb: 4000\n");
}

static platform_descriptor kv260_fixture() {
  return load_platform("platform: kv260\ntriple: aarch64-accel-eabi\nclock-mhz: 200\n"
                       "budget-luts: 100000\nbudget-dsps: 1000\nbudget-bram-kb: 4000\n");
}

static kernel_ir vadd_ir() {
  return parse_kernel("kernel vadd\nin a i32\nin b i32\nout c i32\nstage add a b -> c\n");
}

TEST_CASE("parse_config", "[kernel_compile]") {
  auto c1 = parse_config("platform: zcu102\n");
  CHECK(c1.platform == "zcu102");
  CHECK(c1.ii == 1);
  CHECK(!c1.clock_mhz);

  auto c2 = parse_config("platform: kv260\nii: 2\n");
  CHECK(c2.ii == 2);

  auto code_of = [](const char* text) {
    try {
      parse_config(text);
      return errc::io;
    } catch (const error& e) {
      return e.code();
    }
  };
  CHECK(code_of("ii: 0\nplatform: p\n") == errc::parse);
  CHECK(code_of("ii: 2\n") == errc::parse); // missing platform
  CHECK(code_of("platform: p\nflux: 9\n") == errc::parse);
  CHECK(code_of("platform: p\nclock-mhz: 0\n") == errc::parse);
}

TEST_CASE("estimate_resources per the cost table", "[kernel_compile]") {
  CHECK(estimate_resources(vadd_ir()) == resource_estimate{0, 8});

  auto ir = parse_kernel("kernel m\nin x i32\nout y i32\n"
                         "stage muli x =2 -> a\nstage muli x =3 -> b\n"
                         "stage add a b -> c\nstage add c x -> y\n");
  CHECK(estimate_resources(ir) == resource_estimate{2, 48}); // 2*16 + 2*8

  auto pass = parse_kernel("kernel pass\nin x i32\nout x i32\n");
  CHECK(estimate_resources(pass) == resource_estimate{0, 0});
}

TEST_CASE("estimate_resources is additive over concatenated stage lists", "[kernel_compile]") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    auto ir1 = testsupport::random_ir(rng, 8);
    auto ir2 = testsupport::random_ir(rng, 8);
    auto e1 = estimate_resources(ir1);
    auto e2 = estimate_resources(ir2);
    kernel_ir joint = ir1;
    // Rename ir2's streams so concatenation stays a valid IR.
    auto rn = [](std::string s) { return s + "_x"; };
    for (auto [n, t] : ir2.inputs) joint.inputs.emplace_back(rn(n), t);
    for (auto st : ir2.stages) {
      st.lhs = rn(st.lhs);
      if (info(st.op).arity == op_arity::binary) st.rhs = rn(st.rhs);
      st.result = rn(st.result);
      joint.stages.push_back(st);
    }
    auto joint_est = estimate_resources(joint);
    CHECK(joint_est.dsps == e1.dsps + e2.dsps);
    CHECK(joint_est.luts == e1.luts + e2.luts);
  }
}

TEST_CASE("schedule_pipeline depths", "[kernel_compile]") {
  kernel_config cfg;
  cfg.platform = "zcu102";

  SECTION("vadd: single latency-1 stage") {
    auto s = schedule_pipeline(vadd_ir(), cfg);
    CHECK(s.depth == 1);
    CHECK(s.ii == 1);
    CHECK(s.stage_start == std::vector<int>{0});
  }
  SECTION("chain add then mul") {
    auto ir = parse_kernel("kernel c\nin a i32\nin b i32\nout y i32\n"
                           "stage add a b -> t\nstage mul t a -> y\n");
    auto s = schedule_pipeline(ir, cfg);
    CHECK(s.depth == 4); // 1 + 3
    CHECK(s.stage_start == std::vector<int>{0, 1});
  }
  SECTION("diamond with a mul branch and a copy branch") {
    auto ir = parse_kernel("kernel d\nin x i32\nout y i32\n"
                           "stage copy x -> t\nstage mul t t -> m\n"
                           "stage copy t -> c\nstage add m c -> y\n");
    auto s = schedule_pipeline(ir, cfg);
    // Oracle: brute-force enumeration of input->output path latencies.
    CHECK(s.depth == testsupport::brute_force_depth(ir));
    CHECK(s.depth == 5);
  }
  SECTION("pass-through has depth 1 via the implicit copy") {
    auto s = schedule_pipeline(parse_kernel("kernel p\nin x i32\nout x i32\n"), cfg);
    CHECK(s.depth == 1);
    CHECK(s.stage_start.empty());
  }
}

TEST_CASE("schedule legality and depth oracle over random IRs", "[kernel_compile]") {
  std::mt19937_64 rng(20260101);
  kernel_config cfg;
  cfg.platform = "p";
  for (int iter = 0; iter < 300; ++iter) {
    auto ir = testsupport::random_ir(rng);
    cfg.ii = 1 + static_cast<int>(rng() % 3);
    auto s = schedule_pipeline(ir, cfg);
    REQUIRE(s.stage_start.size() == ir.stages.size());
    // Legality: each stage starts at or after every operand's completion.
    std::map<std::string, int> completion;
    for (const auto& [n, t] : ir.inputs) completion[n] = 0;
    for (size_t i = 0; i < ir.stages.size(); ++i) {
      const auto& st = ir.stages[i];
      CHECK(s.stage_start[i] >= completion.at(st.lhs));
      if (info(st.op).arity == op_arity::binary) CHECK(s.stage_start[i] >= completion.at(st.rhs));
      completion[st.result] = s.stage_start[i] + info(st.op).latency;
    }
    CHECK(s.depth == testsupport::brute_force_depth(ir));
    CHECK(s.ii == cfg.ii);
  }
}

TEST_CASE("compile_kernel produces the vadd artifact metadata", "[kernel_compile]") {
  auto art = compile_kernel(vadd_ir(), parse_config("platform: zcu102\n"), zcu102_fixture(),
                            build_type::hw);
  CHECK(art.meta.kernel == "vadd");
  CHECK(art.meta.platform == "zcu102");
  CHECK(art.meta.type == build_type::hw);
  CHECK(art.meta.clock_mhz == 200);
  CHECK(art.meta.depth == 1);
  CHECK(art.meta.ii == 1);
  CHECK(art.meta.dsps == 0);
  CHECK(art.meta.luts == 8);
  CHECK(art.meta.inputs == std::vector<std::string>{"a:i32", "b:i32"});
  CHECK(art.meta.outputs == std::vector<std::string>{"c:i32"});
  CHECK(art.meta.content_hash.size() == 64);
}

TEST_CASE("compile_kernel enforces the resource budget for hw targets", "[kernel_compile]") {
  // 1300 mul stages against kv260's 1000-DSP budget.
  std::string src = "kernel big\nin x i32\nout y i32\n";
  std::string prev = "x";
  for (int i = 0; i < 1300; ++i) {
    std::string cur = i == 1299 ? "y" : "t" + std::to_string(i);
    src += "stage mul " + prev + " x -> " + cur + "\n";
    prev = cur;
  }
  auto ir = parse_kernel(src);
  auto cfg = parse_config("platform: kv260\n");

  try {
    compile_kernel(ir, cfg, kv260_fixture(), build_type::hw);
    FAIL("expected E_RESOURCE_OVERFLOW");
  } catch (const resource_overflow_error& e) {
    CHECK(e.resource() == "dsps");
    CHECK(e.needed() == 1300);
    CHECK(e.budget() == 1000);
  }
  // sw_emu skips the resource check entirely.
  auto art = compile_kernel(ir, cfg, kv260_fixture(), build_type::sw_emu);
  CHECK(art.meta.dsps == 1300);
}

TEST_CASE("compile_kernel rejects platform mismatch", "[kernel_compile]") {
  try {
    compile_kernel(vadd_ir(), parse_config("platform: kv260\n"), zcu102_fixture(), build_type::hw);
    FAIL("expected E_CONFIG");
  } catch (const error& e) {
    CHECK(e.code() == errc::config);
  }
}

TEST_CASE("compile_kernel clock override", "[kernel_compile]") {
  auto art = compile_kernel(vadd_ir(), parse_config("platform: zcu102\nclock-mhz: 250\n"),
                            zcu102_fixture(), build_type::hw);
  CHECK(art.meta.clock_mhz == 250);
}

TEST_CASE("compile_kernel is byte-deterministic", "[kernel_compile]") {
  auto cfg = parse_config("platform: zcu102\nii: 2\n");
  auto a1 = compile_kernel(vadd_ir(), cfg, zcu102_fixture(), build_type::hw_emu);
  auto a2 = compile_kernel(vadd_ir(), cfg, zcu102_fixture(), build_type::hw_emu);
  CHECK(a1 == a2);
  CHECK(encode_artifact(a1) == encode_artifact(a2));
}

TEST_CASE("artifact container round-trip and validation", "[kernel_compile]") {
  auto art = compile_kernel(vadd_ir(), parse_config("platform: zcu102\n"), zcu102_fixture(),
                            build_type::hw);
  auto bytes = encode_artifact(art);
  CHECK(bytes.substr(0, 4) == "AKB1");
  CHECK(decode_artifact(bytes) == art);

  SECTION("bad magic") {
    auto bad = bytes;
    bad[0] = 'X';
    try {
      decode_artifact(bad);
      FAIL("expected E_CONTAINER");
    } catch (const error& e) {
      CHECK(e.code() == errc::container);
      CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("bad magic"));
    }
  }
  SECTION("truncated") {
    try {
      decode_artifact(bytes.substr(0, bytes.size() / 2));
      FAIL("expected E_CONTAINER");
    } catch (const error& e) {
      CHECK(e.code() == errc::container);
    }
  }
  SECTION("payload byte flips are caught by the content hash") {
    // Flip bytes across all three sections; every flip must be detected.
    for (size_t off : {bytes.size() / 3, bytes.size() / 2, bytes.size() - 2}) {
      auto bad = bytes;
      bad[off] = static_cast<char>(bad[off] ^ 0x01);
      try {
        decode_artifact(bad);
        FAIL("expected E_CONTAINER at offset " << off);
      } catch (const error& e) {
        CHECK(e.code() == errc::container);
      }
    }
  }
}

TEST_CASE("artifact matches the frozen golden container", "[kernel_compile]") {
  auto art = compile_kernel(vadd_ir(), parse_config("platform: zcu102\n"), zcu102_fixture(),
                            build_type::hw);
  auto golden_path = testsupport::fixtures_dir() / "golden" / "vadd_zcu102_hw.akbin";
  REQUIRE(std::filesystem::is_regular_file(golden_path));
  CHECK(encode_artifact(art) == read_file(golden_path));
}
