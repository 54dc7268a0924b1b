#pragma once

namespace tempnet {

inline constexpr const char* kVersion = "0.1.0";

} // namespace tempnet
