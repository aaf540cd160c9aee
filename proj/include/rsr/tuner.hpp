// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>

#include "rsr/variant.hpp"

namespace rsr {

/// Largest n accepted by the tuners; keeps the exact cost comparison within 128 bits.
inline constexpr std::uint64_t kMaxTunerSize = std::uint64_t{1} << 48;

/// Candidate block widths are [1, max_block_width(n)].
///
/// RSR cost:   (n / k) * (n + k * 2^k)
/// RSR++ cost: (n / k) * (n + 2^k)
///
/// The minimum is found by scanning every candidate. Costs are compared
/// exactly, and ties go to the smaller k.
std::size_t optimal_k_rsr(std::uint64_t n);
std::size_t optimal_k_rsrpp(std::uint64_t n);
std::size_t optimal_k(std::uint64_t n, Variant variant);

/// Bisection on the discrete slope of the same cost. It only agrees with the
/// scan when the cost is unimodal, which makes it useful as a cross-check.
std::size_t optimal_k_bisect(std::uint64_t n, Variant variant);

} // namespace rsr
