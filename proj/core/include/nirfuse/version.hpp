#pragma once

namespace nirfuse {

inline constexpr const char* kVersion = "0.1.0";

} // namespace nirfuse
