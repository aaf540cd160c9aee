// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "rsr/matrix.hpp"

namespace rsr {

using Rng = std::mt19937_64;

/// Entries i.i.d. uniform over {-1, 0, 1}.
TernaryMatrix random_ternary(std::size_t rows, std::size_t cols, Rng& rng);
/// Entries i.i.d. with P(1) = density.
BinaryMatrix random_binary(std::size_t rows, std::size_t cols, Rng& rng, double density = 0.5);
/// Integers uniform in [lo, hi], stored as doubles.
std::vector<double> random_int_vector(std::size_t n, Rng& rng, int lo = -100, int hi = 100);

} // namespace rsr
