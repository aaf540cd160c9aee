// SPDX-License-Identifier: Apache-2.0
#include "rsr/tuner.hpp"

#include <string>

#include "rsr/error.hpp"
#include "rsr/indexer.hpp"

namespace rsr {

namespace {

using u128 = unsigned __int128;

// n * cost(k) * k, i.e. the cost with the 1/k factor kept aside.
u128 scaled_cost(std::uint64_t n, std::size_t k, Variant variant) {
  const u128 pattern = u128{1} << k;
  const u128 block_product = variant == Variant::rsr ? pattern * k : pattern;
  return u128{n} * (u128{n} + block_product);
}

// cost(a) < cost(b), exactly.
bool cheaper(std::uint64_t n, std::size_t a, std::size_t b, Variant variant) {
  return scaled_cost(n, a, variant) * b < scaled_cost(n, b, variant) * a;
}

std::size_t candidate_limit(std::uint64_t n) {
  if (n < 1 || n > kMaxTunerSize) throw ArgumentError("tuner size " + std::to_string(n) + " outside [1, 2^48]");
  return max_block_width(static_cast<std::size_t>(n));
}

} // namespace

std::size_t optimal_k(std::uint64_t n, Variant variant) {
  const std::size_t limit = candidate_limit(n);
  std::size_t best = 1;
  for (std::size_t k = 2; k <= limit; ++k)
    if (cheaper(n, k, best, variant)) best = k;
  return best;
}

std::size_t optimal_k_rsr(std::uint64_t n) { return optimal_k(n, Variant::rsr); }
std::size_t optimal_k_rsrpp(std::uint64_t n) { return optimal_k(n, Variant::rsrpp); }

std::size_t optimal_k_bisect(std::uint64_t n, Variant variant) {
  std::size_t lo = 1;
  std::size_t hi = candidate_limit(n);
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (cheaper(n, mid + 1, mid, variant))
      lo = mid + 1;
    else
      hi = mid;
  }
  return lo;
}

} // namespace rsr
