// SPDX-License-Identifier: Apache-2.0
#include "rsr/verify.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>
#include <string>

#include "rsr/indexer.hpp"
#include "rsr/kernels.hpp"
#include "rsr/random.hpp"

namespace rsr {

namespace {

std::optional<Mismatch> first_mismatch(std::size_t trial, const std::vector<double>& expected,
                                       const std::vector<double>& actual) {
  for (std::size_t c = 0; c < expected.size(); ++c)
    if (expected[c] != actual[c]) return Mismatch{trial, c, expected[c], actual[c]};
  return std::nullopt;
}

std::string number(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::string describe(const std::optional<Mismatch>& m) {
  if (!m) return "pass";
  return "FAIL(trial " + std::to_string(m->trial) + ", column " + std::to_string(m->column) + ": expected " +
         number(m->expected) + ", got " + number(m->actual) + ")";
}

} // namespace

bool VerifyReport::passed() const noexcept {
  return std::all_of(per_k.begin(), per_k.end(), [](const VerifyKResult& r) { return r.passed(); });
}

void corrupt_for_testing(TernaryIndex& index) {
  if (index.positive.blocks.empty() || index.positive.rows == 0) return;
  auto& seg = index.positive.blocks.front().segmentation;
  if (seg.size() < 2) return;
  if (seg[1] > 0) {
    --seg[1];
  } else {
    for (std::size_t j = 1; j < seg.size(); ++j) seg[j] = std::max<std::uint32_t>(seg[j], 1);
  }
}

VerifyReport verify_matrix(const TernaryMatrix& a, const VerifyOptions& options) {
  VerifyReport report{a.rows(), a.cols(), options.trials, options.seed, {}};

  Rng rng(options.seed);
  std::vector<std::vector<double>> vectors;
  std::vector<std::vector<double>> expected;
  for (std::size_t t = 0; t < options.trials; ++t) {
    vectors.push_back(random_int_vector(a.rows(), rng));
    expected.push_back(naive_multiply(vectors.back(), a));
  }

  for (std::size_t k = 1; k <= max_block_width(a.rows()); ++k) {
    TernaryIndex index = preprocess_ternary(a, k);
    if (options.corrupt_index) corrupt_for_testing(index);
    VerifyKResult result{k, std::nullopt, std::nullopt};
    for (std::size_t t = 0; t < options.trials; ++t) {
      if (!result.rsr) result.rsr = first_mismatch(t, expected[t], multiply_ternary(vectors[t], index, Variant::rsr));
      if (!result.rsrpp)
        result.rsrpp = first_mismatch(t, expected[t], multiply_ternary(vectors[t], index, Variant::rsrpp));
      if (result.rsr && result.rsrpp) break;
    }
    report.per_k.push_back(result);
  }
  return report;
}

void print_report(std::ostream& out, const VerifyReport& report) {
  out << "verify rows=" << report.rows << " cols=" << report.cols << " trials=" << report.trials
      << " seed=" << report.seed << '\n';
  for (const auto& r : report.per_k)
    out << "k=" << r.k << " rsr=" << describe(r.rsr) << " rsrpp=" << describe(r.rsrpp) << '\n';
  out << (report.passed() ? "PASS" : "FAIL") << '\n';
}

} // namespace rsr
