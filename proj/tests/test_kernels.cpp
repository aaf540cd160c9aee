// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>

#include "oracles.hpp"
#include "rsr/error.hpp"
#include "rsr/kernels.hpp"
#include "rsr/random.hpp"

using namespace rsr;

namespace {

const BinaryMatrix kB = oracle::to_binary(oracle::kExample);

BlockIndex example_block() { return {2, {1, 4, 5, 0, 2, 3}, {0, 3, 5, 5}}; }

std::vector<double> random_sums(std::size_t width, Rng& rng) {
  return random_int_vector(std::size_t{1} << width, rng, -100000, 100000);
}

} // namespace

TEST_CASE("segmented_sum: worked examples") {
  const std::vector<double> v = oracle::kExampleVector;
  const BlockIndex pre_permuted{2, {0, 1, 2, 3, 4, 5}, {0, 3, 5, 5}};
  CHECK(segmented_sum(v, pre_permuted).sums == std::vector<double>{9, 14, 0, 1});
  CHECK(segmented_sum(v, example_block()).sums == std::vector<double>{12, 7, 0, 5});
  CHECK(segmented_sum(std::vector<double>(6, 0.0), example_block()).sums == std::vector<double>(4, 0.0));
  CHECK(segmented_sum(v, example_block()).width == 2);
}

TEST_CASE("segmented_sum: errors and counting") {
  CHECK_THROWS_AS(segmented_sum(std::vector<double>(5, 1.0), example_block()), DimensionError);
  std::vector<double> nan(6, 1.0);
  nan[0] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(segmented_sum(nan, example_block()), ArgumentError);

  std::vector<double> out(4);
  OpCounter counter;
  segmented_sum(oracle::kExampleVector, example_block(), out, counter);
  CHECK(counter.additions == 6);
  std::vector<double> wrong(3);
  CHECK_THROWS_AS(segmented_sum(oracle::kExampleVector, example_block(), wrong), DimensionError);
}

TEST_CASE("bin_pattern_bit") {
  const std::vector<std::vector<int>> bin2{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 2; ++c) CHECK(bin_pattern_bit(2, r, c) == bool(bin2[r][c]));
  CHECK(bin_pattern_bit(3, 5, 0));
  CHECK(!bin_pattern_bit(3, 5, 1));
  CHECK(bin_pattern_bit(3, 5, 2));
  CHECK(!bin_pattern_bit(1, 0, 0));
  CHECK(bin_pattern_bit(1, 1, 0));
  CHECK_THROWS_AS(bin_pattern_bit(2, 4, 0), ArgumentError);
  CHECK_THROWS_AS(bin_pattern_bit(2, 0, 2), ArgumentError);
  const BinPattern p{3};
  CHECK(p.rows() == 8);
  CHECK(p.cols() == 3);
}

TEST_CASE("block products: worked examples") {
  const SegmentedSums u{2, {12, 7, 0, 5}};
  CHECK(oracle::pattern_product(u.sums, 2) == std::vector<double>{5, 12});
  CHECK(block_product_rsr(u) == std::vector<double>{5, 12});
  CHECK(block_product_rsrpp(u) == std::vector<double>{5, 12});

  CHECK(block_product_rsrpp(SegmentedSums{1, {4, 9}}) == std::vector<double>{9});
  CHECK(block_product_rsr(SegmentedSums{1, {4, 9}}) == std::vector<double>{9});

  // One-hot at j: the bit pattern of j.
  for (std::size_t j = 0; j < 8; ++j) {
    SegmentedSums hot{3, std::vector<double>(8, 0.0)};
    hot.sums[j] = 1.0;
    const std::vector<double> bits{double((j >> 2) & 1), double((j >> 1) & 1), double(j & 1)};
    CHECK(block_product_rsr(hot) == bits);
    CHECK(block_product_rsrpp(hot) == bits);
  }

  // All ones: every column of Bin_[k] has 2^(k-1) ones.
  for (std::uint32_t w = 1; w <= 10; ++w) {
    const SegmentedSums ones{w, std::vector<double>(std::size_t{1} << w, 1.0)};
    CHECK(block_product_rsr(ones) == std::vector<double>(w, double(std::size_t{1} << (w - 1))));
    CHECK(block_product_rsrpp(ones) == std::vector<double>(w, double(std::size_t{1} << (w - 1))));
  }
}

TEST_CASE("block products: RSR++ equals RSR bitwise on integer sums and the pattern oracle") {
  Rng rng(1000);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::uint32_t w = 1 + trial % 10;
    const SegmentedSums u{w, random_sums(w, rng)};
    const auto rsr = block_product_rsr(u);
    REQUIRE(block_product_rsrpp(u) == rsr);
    REQUIRE(oracle::pattern_product(u.sums, w) == rsr);
  }
}

TEST_CASE("block products: RSR++ within 1e-12 relative of RSR on real sums") {
  Rng rng(77);
  std::uniform_real_distribution<double> real(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint32_t w = 1 + trial % 12;
    SegmentedSums u{w, std::vector<double>(std::size_t{1} << w)};
    double scale = 0.0;
    for (auto& x : u.sums) {
      x = real(rng);
      scale += std::abs(x);
    }
    const auto a = block_product_rsr(u), b = block_product_rsrpp(u);
    for (std::uint32_t c = 0; c < w; ++c) REQUIRE(std::abs(a[c] - b[c]) <= 1e-12 * scale);
  }
}

TEST_CASE("block products: addition counts") {
  Rng rng(4);
  for (std::uint32_t w = 1; w <= 12; ++w) {
    const auto u = random_sums(w, rng);
    std::vector<double> out(w);
    OpCounter rsr, pp;
    block_product_rsr(u, out, rsr);
    block_product_rsrpp(u, out, pp);
    CHECK(rsr.additions == (std::uint64_t{w} << w));
    CHECK(pp.additions <= (std::uint64_t{2} << w));
    CHECK(pp.additions == (std::uint64_t{2} << w) - 3);
  }
}

TEST_CASE("block products: in-place fold and argument checks") {
  std::vector<double> u{12, 7, 0, 5};
  std::vector<double> out(2);
  block_product_rsrpp_inplace(u, out);
  CHECK(out == std::vector<double>{5, 12});
  std::vector<double> bad(2);
  CHECK_THROWS_AS(block_product_rsr(std::vector<double>(5), bad), ArgumentError);
  CHECK_THROWS_AS(block_product_rsrpp(std::vector<double>(8), bad), ArgumentError);
  CHECK_THROWS_AS(block_product_rsrpp(SegmentedSums{0, {1.0}}), ArgumentError);
}

TEST_CASE("multiply_rsr: worked example") {
  const RsrIndex index = preprocess(kB, 2);
  const std::vector<double> expected{5, 12, 16, 18, 12, 14};
  CHECK(multiply_rsr(oracle::kExampleVector, index, Variant::rsr) == expected);
  CHECK(multiply_rsr(oracle::kExampleVector, index, Variant::rsrpp) == expected);
  CHECK(multiply_rsr(std::vector<double>(6, 0.0), index, Variant::rsrpp) == std::vector<double>(6, 0.0));
  CHECK_THROWS_AS(multiply_rsr(std::vector<double>(7, 0.0), index, Variant::rsr), DimensionError);
}

TEST_CASE("multiply_rsr: exact against the oracle on random shapes") {
  Rng rng(200);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 256, m = 1 + rng() % 256;
    const BinaryMatrix b = random_binary(n, m, rng, 0.1 + 0.8 * double(rng() % 100) / 100.0);
    const auto v = random_int_vector(n, rng);
    const auto expected = oracle::column_dots(v, oracle::to_ints(b), m);
    for (std::size_t k = 1; k <= std::min<std::size_t>(8, max_block_width(n)); ++k) {
      const RsrIndex index = preprocess(b, k);
      REQUIRE(multiply_rsr(v, index, Variant::rsr) == expected);
      REQUIRE(multiply_rsr(v, index, Variant::rsrpp) == expected);
      REQUIRE(naive_multiply(v, reconstruct_matrix(index)) == expected);
    }
  }
}

TEST_CASE("multiply_rsr: real vectors within 1e-9 relative") {
  Rng rng(21);
  std::uniform_real_distribution<double> real(-10.0, 10.0);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 64 + rng() % 200, m = 1 + rng() % 100;
    const BinaryMatrix b = random_binary(n, m, rng);
    std::vector<double> v(n);
    for (auto& x : v) x = real(rng);
    const auto expected = naive_multiply(v, b);
    const RsrIndex index = preprocess(b, 1 + trial % 6);
    for (Variant var : {Variant::rsr, Variant::rsrpp}) {
      const auto got = multiply_rsr(v, index, var);
      for (std::size_t c = 0; c < m; ++c) {
        double scale = 0.0;
        for (std::size_t r = 0; r < n; ++r) scale += b(r, c) ? std::abs(v[r]) : 0.0;
        REQUIRE(std::abs(got[c] - expected[c]) <= 1e-9 * std::max(scale, 1e-300));
      }
    }
  }
}

TEST_CASE("multiply: permuting rows of B and entries of v together leaves the product unchanged") {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 32 + rng() % 64, m = 1 + rng() % 40;
    const BinaryMatrix b = random_binary(n, m, rng);
    const auto v = random_int_vector(n, rng);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    BinaryMatrix pb(n, m);
    std::vector<double> pv(n);
    for (std::size_t r = 0; r < n; ++r) {
      pv[r] = v[perm[r]];
      for (std::size_t c = 0; c < m; ++c) pb.set(r, c, b(perm[r], c));
    }
    const std::size_t k = 1 + trial % 5;
    REQUIRE(multiply_rsr(pv, preprocess(pb, k), Variant::rsrpp) == multiply_rsr(v, preprocess(b, k), Variant::rsrpp));
  }
}

TEST_CASE("segmented sums conserve the vector total") {
  Rng rng(88);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 64 + rng() % 300, m = 1 + rng() % 50;
    const BinaryMatrix b = random_binary(n, m, rng);
    const auto v = random_int_vector(n, rng);
    const double total = std::accumulate(v.begin(), v.end(), 0.0);
    for (const auto& blk : preprocess(b, 1 + trial % 6).blocks) {
      const auto u = segmented_sum(v, blk).sums;
      REQUIRE(std::accumulate(u.begin(), u.end(), 0.0) == total);
    }
  }
}

TEST_CASE("multiply_rsr: addition counts stay within the work bounds") {
  Rng rng(12);
  for (std::size_t n : {64u, 300u, 1024u}) {
    const std::size_t m = n;
    const BinaryMatrix b = random_binary(n, m, rng);
    const auto v = random_int_vector(n, rng);
    for (std::size_t k = 1; k <= max_block_width(n); ++k) {
      const RsrIndex index = preprocess(b, k);
      const std::uint64_t blocks = (m + k - 1) / k;
      OpCounter rsr, pp;
      multiply_rsr(v, index, Variant::rsr, rsr);
      multiply_rsr(v, index, Variant::rsrpp, pp);
      REQUIRE(rsr.additions <= blocks * (n + (std::uint64_t{k} << k)));
      REQUIRE(pp.additions <= blocks * (n + (std::uint64_t{2} << k)));
    }
  }
}

TEST_CASE("multiply_ternary") {
  Rng rng(128);
  const TernaryMatrix a = random_ternary(128, 128, rng);
  const auto v = random_int_vector(128, rng);
  const auto expected = oracle::column_dots(v, oracle::to_ints(a), 128);
  for (std::size_t k = 1; k <= 7; ++k) {
    const TernaryIndex idx = preprocess_ternary(a, k);
    REQUIRE(multiply_ternary(v, idx, Variant::rsr) == expected);
    REQUIRE(multiply_ternary(v, idx, Variant::rsrpp) == expected);
  }

  // A binary-valued matrix gives the positive-half product.
  const TernaryIndex bin = preprocess_ternary(oracle::to_ternary(oracle::kExample), 2);
  CHECK(multiply_ternary(oracle::kExampleVector, bin, Variant::rsrpp) ==
        multiply_rsr(oracle::kExampleVector, bin.positive, Variant::rsrpp));

  // Negating the matrix negates the result.
  oracle::IntMatrix neg = oracle::to_ints(a);
  for (auto& row : neg)
    for (auto& x : row) x = -x;
  const auto pos = multiply_ternary(v, preprocess_ternary(a, 5), Variant::rsrpp);
  const auto negated = multiply_ternary(v, preprocess_ternary(oracle::to_ternary(neg), 5), Variant::rsrpp);
  for (std::size_t c = 0; c < 128; ++c) REQUIRE(negated[c] == -pos[c]);

  CHECK_THROWS_AS(multiply_ternary(std::vector<double>(3), bin, Variant::rsr), DimensionError);
}

TEST_CASE("multiply_parallel is bitwise identical for any worker count") {
  Rng rng(4096);
  std::uniform_real_distribution<double> real(-1.0, 1.0);
  const std::size_t n = 1 << 10;
  const TernaryMatrix a = random_ternary(n, n + 13, rng);
  std::vector<double> v(n);
  for (auto& x : v) x = real(rng);
  const TernaryIndex idx = preprocess_ternary(a, 8);
  for (Variant var : {Variant::rsr, Variant::rsrpp}) {
    const auto single = multiply_ternary(v, idx, var);
    CHECK(multiply_parallel(v, idx, var, 1) == single);
    for (std::size_t w : {2u, 3u, 4u, 8u, 1000u}) {
      const auto par = multiply_parallel(v, idx, var, w);
      REQUIRE(std::memcmp(par.data(), single.data(), single.size() * sizeof(double)) == 0);
      const auto half = multiply_parallel(v, idx.positive, var, w);
      REQUIRE(half == multiply_rsr(v, idx.positive, var));
    }
  }
}
