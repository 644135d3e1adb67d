// Copyright (C) 2026 accelbuild contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <openssl/evp.h>

#include <memory>
#include <string>
#include <string_view>

#include "accelbuild/errors.hpp"
#include "accelbuild/util.hpp"

namespace accelbuild {

// Incremental SHA-256, hex output. Multi-part hashes length-prefix every part
// so distinct part sequences can never collide by concatenation.
class sha256 {
public:
  sha256() : ctx_(EVP_MD_CTX_new(), EVP_MD_CTX_free) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1)
      throw error(errc::io, "sha256 init failed");
  }

  sha256& update(std::string_view bytes) {
    if (EVP_DigestUpdate(ctx_.get(), bytes.data(), bytes.size()) != 1)
      throw error(errc::io, "sha256 update failed");
    return *this;
  }

  sha256& part(std::string_view bytes) {
    std::string len;
    be64_append(len, bytes.size());
    update(len);
    update(bytes);
    return *this;
  }

  std::string hex() {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int n = 0;
    if (EVP_DigestFinal_ex(ctx_.get(), digest, &n) != 1)
      throw error(errc::io, "sha256 final failed");
    static constexpr char tab[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * n);
    for (unsigned int i = 0; i < n; ++i) {
      out.push_back(tab[digest[i] >> 4]);
      out.push_back(tab[digest[i] & 0xf]);
    }
    return out;
  }

private:
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx_;
};

inline std::string sha256_hex(std::string_view bytes) {
  return sha256().update(bytes).hex();
}

} // namespace accelbuild
