// Copyright (C) 2026 accelbuild contributors
// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "accelbuild/cli.hpp"
#include "support/test_util.hpp"

using namespace accelbuild;
using testsupport::copy_fixture_ws;
using testsupport::temp_dir;

namespace {

struct cli_run {
  int exit_code;
  std::string out;
  std::string err;
};

cli_run invoke(const std::vector<std::string>& argv, const std::filesystem::path& cwd) {
  std::ostringstream out, err;
  try {
    auto inv = parse_cli(argv);
    int code = run_cli(inv, cwd, out, err);
    return {code, out.str(), err.str()};
  } catch (const error& e) {
    err << "error: " << e.what() << "\n";
    return {2, out.str(), err.str()};
  }
}

} // namespace

TEST_CASE("parse_cli accepts the quoted build command", "[cli]") {
  auto inv = parse_cli({"build", "--build-base", "build-zcu102", "--install-base",
                        "install-zcu102", "--merge-install", "--mixin", "zcu102"});
  CHECK(inv.command == cli_command::build);
  CHECK(inv.build_base == "build-zcu102");
  CHECK(inv.install_base == "install-zcu102");
  CHECK(inv.merge_install);
  CHECK(inv.mixins == std::vector<std::string>{"zcu102"});
}

TEST_CASE("parse_cli defaults and repeated flags", "[cli]") {
  auto inv = parse_cli({"build"});
  CHECK(!inv.build_base);
  CHECK(!inv.merge_install);
  CHECK(inv.mixins.empty());

  auto multi = parse_cli({"build", "--mixin", "a", "--mixin", "b", "--packages-select", "p"});
  CHECK(multi.mixins == std::vector<std::string>{"a", "b"}); // order preserved
  CHECK(multi.packages_select == std::vector<std::string>{"p"});
}

TEST_CASE("parse_cli rejects unknown flags with the offending token", "[cli]") {
  try {
    parse_cli({"build", "--mixn", "x"});
    FAIL("expected E_USAGE");
  } catch (const error& e) {
    CHECK(e.code() == errc::usage);
    REQUIRE(!e.args().empty());
    CHECK(e.args()[0] == "--mixn");
    CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("usage:"));
  }
}

TEST_CASE("parse_cli kernel run grammar", "[cli]") {
  auto inv = parse_cli({"kernel", "run", "vadd.akbin", "--platform", "zcu102", "--in", "a=1,2,3",
                        "--in", "b=4,5,6", "--report-cycles"});
  CHECK(inv.command == cli_command::kernel_run);
  CHECK(inv.artifact_file == "vadd.akbin");
  CHECK(inv.platform == "zcu102");
  REQUIRE(inv.kernel_inputs.size() == 2);
  CHECK(inv.kernel_inputs[0].first == "a");
  CHECK(inv.kernel_inputs[0].second == std::vector<long long>{1, 2, 3});
  CHECK(inv.report_cycles);

  CHECK(parse_cli({"kernel", "run", "f.akbin", "--platform", "p", "--in", "a="})
            .kernel_inputs[0]
            .second.empty());

  auto usage_code = [](const std::vector<std::string>& argv) {
    try {
      parse_cli(argv);
      return errc::io;
    } catch (const error& e) {
      return e.code();
    }
  };
  CHECK(usage_code({"kernel", "run", "--platform", "p"}) == errc::usage);      // no file
  CHECK(usage_code({"kernel", "run", "f.akbin"}) == errc::usage);              // no platform
  CHECK(usage_code({"kernel", "run", "f", "--platform", "p", "--in", "x"}) == errc::usage);
  CHECK(usage_code({"kernel", "run", "f", "--platform", "p", "--in", "a=1", "--in", "a=2"}) ==
        errc::usage); // duplicate stream
  CHECK(usage_code({"kernel", "run", "f", "--platform", "p", "--in", "a=1,zz"}) == errc::usage);
  CHECK(usage_code({"kernel", "fly"}) == errc::usage);
  CHECK(usage_code({"mixin", "lst"}) == errc::usage);
  CHECK(usage_code({"frobnicate"}) == errc::usage);
  CHECK(usage_code({}) == errc::usage);
}

TEST_CASE("parse_cli is total over fuzzed argv", "[cli]") {
  std::mt19937_64 rng(13);
  const std::vector<std::string> vocab = {"build",   "--mixin",  "graph", "--dot", "kernel",
                                          "run",     "--in",     "a=1",   "clean", "--platform",
                                          "mixin",   "list",     "x",     "-9",    "--",
                                          "platform", "--weird", "a=b=c", ""};
  for (int iter = 0; iter < 500; ++iter) {
    std::vector<std::string> argv;
    int n = static_cast<int>(rng() % 6);
    for (int i = 0; i < n; ++i) argv.push_back(vocab[rng() % vocab.size()]);
    try {
      parse_cli(argv); // either a valid invocation...
    } catch (const error& e) {
      CHECK(e.code() == errc::usage); // ...or E_USAGE, never anything else
    }
  }
}

TEST_CASE("cli end-to-end on the fixture workspace", "[cli]") {
  temp_dir tmp;
  auto root = copy_fixture_ws(tmp);

  SECTION("native build exits 0 and prints a summary") {
    auto r = invoke({"build"}, root);
    CHECK(r.exit_code == 0);
    CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("phase: native"));
    CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("built core_lib (host_build)"));
    CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("6 built, 0 skipped, 0 failed"));
  }

  SECTION("cross build before phase A fails with E_PHASE_ORDER") {
    auto r = invoke({"build", "--mixin", "kv260"}, root);
    CHECK(r.exit_code == 1);
    CHECK_THAT(r.err, Catch::Matchers::ContainsSubstring("E_PHASE_ORDER"));
  }

  SECTION("unknown mixin with no firmware provider stays E_UNKNOWN_MIXIN") {
    auto r = invoke({"build", "--mixin", "nonesuch"}, root);
    CHECK(r.exit_code == 1);
    CHECK_THAT(r.err, Catch::Matchers::ContainsSubstring("E_UNKNOWN_MIXIN"));
  }

  SECTION("full walkthrough: build, list, graph, kernel run, clean") {
    REQUIRE(invoke({"build"}, root).exit_code == 0);

    auto platforms = invoke({"platform", "list"}, root);
    CHECK(platforms.exit_code == 0);
    CHECK(platforms.out == read_file(testsupport::fixtures_dir() / "golden/platform_list.txt"));

    auto mixins = invoke({"mixin", "list"}, root);
    CHECK(mixins.out == "kv260\ntiny\nzcu102\nzcu104\n");

    auto dot = invoke({"graph", "--dot"}, root);
    CHECK(dot.exit_code == 0);
    CHECK(dot.out == read_file(testsupport::fixtures_dir() / "golden/graph.dot"));

    auto plain = invoke({"graph"}, root);
    CHECK_THAT(plain.out, Catch::Matchers::ContainsSubstring("acceleration_examples: core_lib"));

    auto cross = invoke({"build", "--build-base", "build-zcu102", "--install-base",
                         "install-zcu102", "--merge-install", "--mixin", "zcu102"},
                        root);
    REQUIRE(cross.exit_code == 0);
    CHECK_THAT(cross.out, Catch::Matchers::ContainsSubstring("phase: cross (zcu102)"));
    CHECK_THAT(cross.out,
               Catch::Matchers::ContainsSubstring(
                   "kernel acceleration_examples/vadd -> "
                   "build-zcu102/acceleration_examples/kernels/vadd.akbin (hw, depth 1, ii 1"));

    auto run1 = invoke({"kernel", "run", "build-zcu102/acceleration_examples/kernels/vadd.akbin",
                        "--platform", "zcu102", "--in", "a=1,2,3", "--in", "b=4,5,6"},
                       root);
    CHECK(run1.exit_code == 0);
    CHECK(run1.out == read_file(testsupport::fixtures_dir() / "golden/vadd_run.txt"));

    auto run2 = invoke({"kernel", "run", "build-zcu102/acceleration_examples/kernels/vadd.akbin",
                        "--platform", "zcu102", "--in", "a=1,2,3", "--in", "b=4,5,6",
                        "--report-cycles"},
                       root);
    CHECK(run2.out == read_file(testsupport::fixtures_dir() / "golden/vadd_run_cycles.txt"));

    auto bad_run = invoke({"kernel", "run", "build-zcu102/acceleration_examples/kernels/vadd.akbin",
                           "--platform", "kv260", "--in", "a=1", "--in", "b=2"},
                          root);
    CHECK(bad_run.exit_code == 1);
    CHECK_THAT(bad_run.err, Catch::Matchers::ContainsSubstring("E_PLATFORM_MISMATCH"));

    auto cleaned = invoke({"clean", "--platform", "zcu102"}, root);
    CHECK(cleaned.exit_code == 0);
    CHECK(!std::filesystem::exists(root / "build-zcu102"));
    CHECK(!std::filesystem::exists(root / "install-zcu102"));
    CHECK(std::filesystem::exists(root / "build"));

    auto clean_all = invoke({"clean"}, root);
    CHECK(clean_all.exit_code == 0);
    CHECK(!std::filesystem::exists(root / "build"));
    CHECK(!std::filesystem::exists(root / "install"));
  }

  SECTION("workspace discovery walks up from a subdirectory") {
    std::filesystem::create_directories(root / "src" / "core_lib" / "deep");
    auto r = invoke({"graph"}, root / "src" / "core_lib" / "deep");
    CHECK(r.exit_code == 0);
    CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("core_lib"));
  }

  SECTION("missing workspace is an error") {
    temp_dir empty;
    auto r = invoke({"graph"}, empty.path());
    CHECK(r.exit_code == 1);
    CHECK_THAT(r.err, Catch::Matchers::ContainsSubstring("E_NO_SRC"));
  }

  SECTION("ACCEL_WORKSPACE overrides root discovery") {
    temp_dir elsewhere;
    ::setenv("ACCEL_WORKSPACE", root.string().c_str(), 1);
    auto r = invoke({"graph"}, elsewhere.path());
    ::unsetenv("ACCEL_WORKSPACE");
    CHECK(r.exit_code == 0);
    CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("core_lib"));

    ::setenv("ACCEL_WORKSPACE", elsewhere.path().string().c_str(), 1);
    auto bad = invoke({"graph"}, root);
    ::unsetenv("ACCEL_WORKSPACE");
    CHECK(bad.exit_code == 1);
    CHECK_THAT(bad.err, Catch::Matchers::ContainsSubstring("E_NO_SRC"));
  }
}
