#pragma once

#include <string>

namespace evrisk {

/// Fixed 6-decimal rendering used by every CSV/table emitter, with "-0"
/// normalized away so output is stable across sign-of-zero differences.
[[nodiscard]] std::string format_fixed(double v);

/// Shortest representation that round-trips the exact double.
[[nodiscard]] std::string format_shortest(double v);

}  // namespace evrisk
