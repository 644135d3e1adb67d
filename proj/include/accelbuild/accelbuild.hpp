// Copyright (C) 2026 accelbuild contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "accelbuild/cli.hpp"
#include "accelbuild/dep_graph.hpp"
#include "accelbuild/executor.hpp"
#include "accelbuild/firmware.hpp"
#include "accelbuild/kernel_compile.hpp"
#include "accelbuild/kernel_ir.hpp"
#include "accelbuild/manifest.hpp"
#include "accelbuild/mixin.hpp"
#include "accelbuild/platform.hpp"
#include "accelbuild/runtime.hpp"
#include "accelbuild/workspace.hpp"
