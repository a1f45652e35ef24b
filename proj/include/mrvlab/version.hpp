// Copyright (c) 2026 The mrvlab Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

namespace mrvlab {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kVersionString = "mrvlab-v1.0.0";

/// Default master seed; also the seed the acceptance suite runs under.
inline constexpr std::uint64_t kDefaultMasterSeed = 34ull;

}  // namespace mrvlab
