// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rsr::bench {

enum class Method { naive, rsr, rsrpp, preprocess };

std::string_view to_string(Method m) noexcept;
/// Accepts naive, rsr, rsrpp (or rsr++). Throws ArgumentError otherwise.
Method parse_method(std::string_view name);

/// One timing row. `k` is 0 for the naive baseline.
struct BenchRecord {
  Method method = Method::naive;
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t k = 0;
  std::size_t workers = 1;
  std::size_t reps = 1;
  double mean_ns = 0.0;
  double stddev_ns = 0.0;
  double min_ns = 0.0;
  std::optional<double> speedup_vs_naive;
};

struct BenchConfig {
  std::vector<unsigned> size_exponents; // n = m = 2^e
  std::vector<Method> methods{Method::naive, Method::rsr, Method::rsrpp};
  std::size_t reps = 10;
  std::size_t warmup = 3;
  std::optional<std::size_t> k; // empty: tuned per variant
  std::size_t workers = 1;
  std::uint64_t seed = 1;
};

/// Summary statistics over timing samples; stddev uses the n-1 denominator.
struct Timing {
  double mean_ns = 0.0;
  double stddev_ns = 0.0;
  double min_ns = 0.0;
};
Timing summarize(const std::vector<double>& samples_ns);

/// Times `fn` `reps` times after `warmup` untimed calls.
Timing time_calls(const std::function<void()>& fn, std::size_t reps, std::size_t warmup);

/// For every size: builds a seeded random ternary matrix and vector, times
/// index construction once per distinct k (method = preprocess), then times
/// each requested method. Before timing, every RSR result is checked against
/// the naive product, and a mismatch throws Error. Records for one size are
/// passed to `sink` once the size is finished.
void run_bench(const BenchConfig& config, const std::function<void(const BenchRecord&)>& sink);
std::vector<BenchRecord> run_bench(const BenchConfig& config);

std::string csv_header();
std::string to_csv(const BenchRecord& r);
std::string to_jsonl(const BenchRecord& r);

} // namespace rsr::bench
