// Copyright (C) 2026 accelbuild contributors
// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include "accelbuild/hash.hpp"

using namespace accelbuild;

TEST_CASE("sha256 matches known vectors", "[hash]") {
  CHECK(sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
        "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

TEST_CASE("sha256 incremental updates equal one-shot", "[hash]") {
  sha256 h;
  h.update("ab").update("c");
  CHECK(h.hex() == sha256_hex("abc"));
}

TEST_CASE("length-prefixed parts are concatenation-safe", "[hash]") {
  auto a = sha256().part("ab").part("c").hex();
  auto b = sha256().part("a").part("bc").hex();
  CHECK(a != b);
}
