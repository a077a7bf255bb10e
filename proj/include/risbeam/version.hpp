#pragma once

namespace risbeam {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace risbeam
