#pragma once

#define HYPERWALK_VERSION "0.1.0"

namespace hyperwalk {
inline constexpr const char* kVersion = HYPERWALK_VERSION;
}  // namespace hyperwalk
