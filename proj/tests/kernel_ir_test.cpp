// Copyright (C) 2026 accelbuild contributors
// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "accelbuild/kernel_ir.hpp"
#include "support/oracles.hpp"

using namespace accelbuild;

static const char* vadd_src = "kernel vadd\nin a i32\nin b i32\nout c i32\nstage add a b -> c\n";

TEST_CASE("parse_kernel accepts vadd", "[kernel_ir]") {
  auto ir = parse_kernel(vadd_src);
  CHECK(ir.name == "vadd");
  REQUIRE(ir.inputs.size() == 2);
  REQUIRE(ir.outputs.size() == 1);
  REQUIRE(ir.stages.size() == 1);
  CHECK(ir.stages[0].op == kernel_op::add);
  CHECK(ir.stages[0].lhs == "a");
  CHECK(ir.stages[0].rhs == "b");
  CHECK(ir.stages[0].result == "c");
}

TEST_CASE("parse_kernel error paths", "[kernel_ir]") {
  auto fails_with = [](const std::string& text, const std::string& needle) {
    try {
      parse_kernel(text);
      FAIL("expected E_PARSE for: " << text);
    } catch (const error& e) {
      CHECK(e.code() == errc::parse);
      CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring(needle));
    }
  };
  fails_with("kernel k\nin a i32\nstage add a q -> r\n", "undefined stream 'q'");
  fails_with("kernel k\nin a i32\nstage copy a -> t0\nstage copy a -> t0\n", "redefinition of 't0'");
  fails_with("kernel k\nin a i32\nstage frob a -> t\n", "unknown op");
  fails_with("kernel k\nin a i32\nout y i32\n", "undefined output stream 'y'");
  fails_with("kernel k\nin a i32\nstage shri a =64 -> t\n", "out of range");
  fails_with("kernel k\nin a i32\nstage shri a =-1 -> t\n", "out of range");
  fails_with("kernel k\nin a i32\nstage addi a 3 -> t\n", "immediate must be written");
  fails_with("kernel k\nin a i32\nstage add a =3 -> t\n", "stream operands");
  fails_with("kernel k\nin a i7\n", "invalid element type");
  fails_with("in a i32\n", "expected 'kernel <name>' first");
  fails_with("kernel k\nin a i32\nin a i64\n", "redefinition of 'a'");
  fails_with("kernel k\nin a i32\nout a i64\n", "conflicting type");
  fails_with("kernel k\nstage copy =1 -> t\n", "stream operands");
}

TEST_CASE("parse_kernel pass-through and empty kernels", "[kernel_ir]") {
  auto pass = parse_kernel("kernel pass\nin x i64\nout x i64\n");
  CHECK(pass.stages.empty());
  CHECK(pass.is_input("x"));
  auto empty = parse_kernel("kernel nothing\n");
  CHECK(empty.inputs.empty());
  CHECK(empty.outputs.empty());
}

TEST_CASE("canonical render round-trips", "[kernel_ir]") {
  auto check = [](const std::string& src) {
    auto ir = parse_kernel(src);
    CHECK(parse_kernel(render_kernel(ir)) == ir);
  };
  check(vadd_src);
  check("kernel k\nin x i32\nout y i64\nstage muli x =3 -> t\nstage addi t =-7 -> u\n"
        "stage shri u =2 -> v\nstage max v t -> y\n");
  check("kernel pass\nin x i64\nout x i64\n");

  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    auto ir = testsupport::random_ir(rng);
    CHECK(parse_kernel(render_kernel(ir)) == ir);
  }
}

TEST_CASE("stream widths: declared wins, binary ops widen", "[kernel_ir]") {
  auto ir = parse_kernel("kernel w\nin a i32\nin b i64\nout y i32\n"
                         "stage add a b -> t\nstage copy t -> y\n");
  auto w = ir.stream_types();
  CHECK(w.at("a") == elem_type::i32);
  CHECK(w.at("t") == elem_type::i64); // widened intermediate
  CHECK(w.at("y") == elem_type::i32); // declared output wins
}
