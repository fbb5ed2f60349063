#pragma once

namespace hyperglass {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace hyperglass
