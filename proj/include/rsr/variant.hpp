// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>

namespace rsr {

/// Block-product strategy: dense product against the bit-pattern matrix, or the O(2^k) fold.
enum class Variant { rsr, rsrpp };

constexpr std::string_view to_string(Variant v) noexcept {
  return v == Variant::rsr ? "rsr" : "rsrpp";
}

/// Accepts "rsr", "rsrpp" and "rsr++". Throws ArgumentError otherwise.
Variant parse_variant(std::string_view name);

} // namespace rsr
