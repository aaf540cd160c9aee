// SPDX-License-Identifier: Apache-2.0
#include "rsr/variant.hpp"

#include <string>

#include "rsr/error.hpp"

namespace rsr {

Variant parse_variant(std::string_view name) {
  if (name == "rsr") return Variant::rsr;
  if (name == "rsrpp" || name == "rsr++") return Variant::rsrpp;
  throw ArgumentError("unknown variant '" + std::string(name) + "' (expected rsr or rsrpp)");
}

} // namespace rsr
