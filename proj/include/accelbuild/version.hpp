// Copyright (C) 2026 accelbuild contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>

namespace accelbuild {

// Feeds every content hash; bump on any change to artifact or staging semantics.
inline constexpr std::string_view tool_version = "accelbuild 0.1.0";

} // namespace accelbuild
