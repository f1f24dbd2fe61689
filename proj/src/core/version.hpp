#pragma once

namespace docground {

inline constexpr const char* kVersion = "0.1.0";

} // namespace docground
