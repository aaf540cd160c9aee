// SPDX-License-Identifier: Apache-2.0
#include "rsr/random.hpp"

namespace rsr {

TernaryMatrix random_ternary(std::size_t rows, std::size_t cols, Rng& rng) {
  std::uniform_int_distribution<int> trit(-1, 1);
  std::vector<std::int8_t> entries(rows * cols);
  for (auto& e : entries) e = static_cast<std::int8_t>(trit(rng));
  return TernaryMatrix(rows, cols, std::move(entries));
}

BinaryMatrix random_binary(std::size_t rows, std::size_t cols, Rng& rng, double density) {
  std::bernoulli_distribution bit(density);
  BinaryMatrix b(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) b.set(r, c, bit(rng));
  return b;
}

std::vector<double> random_int_vector(std::size_t n, Rng& rng, int lo, int hi) {
  std::uniform_int_distribution<int> value(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = static_cast<double>(value(rng));
  return v;
}

} // namespace rsr
