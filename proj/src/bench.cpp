// SPDX-License-Identifier: Apache-2.0
#include "rsr/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>

#include "json.hpp"

#include "rsr/error.hpp"
#include "rsr/indexer.hpp"
#include "rsr/kernels.hpp"
#include "rsr/random.hpp"
#include "rsr/tuner.hpp"

namespace rsr::bench {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ns(Clock::time_point start) {
  return std::chrono::duration<double, std::nano>(Clock::now() - start).count();
}

std::string number(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

Variant variant_of(Method m) { return m == Method::rsr ? Variant::rsr : Variant::rsrpp; }

// Keeps results observable so timed calls are not optimized away.
volatile double g_sink = 0.0;

} // namespace

std::string_view to_string(Method m) noexcept {
  switch (m) {
  case Method::naive: return "naive";
  case Method::rsr: return "rsr";
  case Method::rsrpp: return "rsrpp";
  case Method::preprocess: return "preprocess";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  if (name == "naive") return Method::naive;
  if (name == "rsr") return Method::rsr;
  if (name == "rsrpp" || name == "rsr++") return Method::rsrpp;
  throw ArgumentError("unknown method '" + std::string(name) + "' (expected naive, rsr or rsrpp)");
}

Timing summarize(const std::vector<double>& samples) {
  Timing t;
  if (samples.empty()) return t;
  const double n = static_cast<double>(samples.size());
  t.mean_ns = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  t.min_ns = *std::min_element(samples.begin(), samples.end());
  if (samples.size() > 1) {
    double ss = 0.0;
    for (double s : samples) ss += (s - t.mean_ns) * (s - t.mean_ns);
    t.stddev_ns = std::sqrt(ss / (n - 1.0));
  }
  return t;
}

Timing time_calls(const std::function<void()>& fn, std::size_t reps, std::size_t warmup) {
  if (reps < 1) throw ArgumentError("reps must be at least 1");
  for (std::size_t i = 0; i < warmup; ++i) fn();
  std::vector<double> samples;
  samples.reserve(reps);
  for (std::size_t i = 0; i < reps; ++i) {
    const auto start = Clock::now();
    fn();
    samples.push_back(elapsed_ns(start));
  }
  return summarize(samples);
}

void run_bench(const BenchConfig& config, const std::function<void(const BenchRecord&)>& sink) {
  if (config.size_exponents.empty()) throw ArgumentError("bench needs at least one size");
  if (config.methods.empty()) throw ArgumentError("bench needs at least one method");
  if (config.reps < 1) throw ArgumentError("reps must be at least 1");
  if (config.workers < 1) throw ArgumentError("workers must be at least 1");

  for (unsigned e : config.size_exponents) {
    if (e > 20) throw ArgumentError("size exponent " + std::to_string(e) + " is too large (max 20)");
    const std::size_t n = std::size_t{1} << e;
    std::seed_seq seq{config.seed, std::uint64_t{e}};
    Rng rng(seq);
    const TernaryMatrix a = random_ternary(n, n, rng);
    const std::vector<double> v = random_int_vector(n, rng);
    const std::vector<double> expected = naive_multiply(v, a);

    std::vector<BenchRecord> records;
    std::map<std::size_t, TernaryIndex> indices;
    auto index_for = [&](std::size_t k) -> const TernaryIndex& {
      if (auto it = indices.find(k); it != indices.end()) return it->second;
      const auto start = Clock::now();
      TernaryIndex idx = preprocess_ternary(a, k, config.workers);
      const double ns = elapsed_ns(start);
      records.push_back({Method::preprocess, n, n, k, config.workers, 1, ns, 0.0, ns, std::nullopt});
      return indices.emplace(k, std::move(idx)).first->second;
    };

    std::vector<BenchRecord> timed;
    for (Method m : config.methods) {
      BenchRecord r{m, n, n, 0, config.workers, config.reps, 0, 0, 0, std::nullopt};
      Timing t;
      if (m == Method::naive) {
        t = time_calls([&] { g_sink = g_sink + naive_multiply(v, a)[0]; }, config.reps, config.warmup);
      } else if (m == Method::rsr || m == Method::rsrpp) {
        const Variant variant = variant_of(m);
        r.k = config.k.value_or(optimal_k(n, variant));
        const TernaryIndex& idx = index_for(r.k);
        if (multiply_parallel(v, idx, variant, config.workers) != expected)
          throw Error("bench: " + std::string(to_string(m)) + " result differs from the naive product at n = " +
                      std::to_string(n));
        t = time_calls([&] { g_sink = g_sink + multiply_parallel(v, idx, variant, config.workers)[0]; },
                       config.reps, config.warmup);
      } else {
        throw ArgumentError("preprocess is not a benchmark method");
      }
      r.mean_ns = t.mean_ns;
      r.stddev_ns = t.stddev_ns;
      r.min_ns = t.min_ns;
      timed.push_back(r);
    }

    const auto naive = std::find_if(timed.begin(), timed.end(), [](const auto& r) { return r.method == Method::naive; });
    if (naive != timed.end())
      for (auto& r : timed) r.speedup_vs_naive = naive->mean_ns / r.mean_ns;

    records.insert(records.end(), timed.begin(), timed.end());
    for (const auto& r : records) sink(r);
  }
}

std::vector<BenchRecord> run_bench(const BenchConfig& config) {
  std::vector<BenchRecord> out;
  run_bench(config, [&](const BenchRecord& r) { out.push_back(r); });
  return out;
}

std::string csv_header() { return "method,n,m,k,workers,reps,mean_ns,stddev_ns,min_ns,speedup_vs_naive"; }

std::string to_csv(const BenchRecord& r) {
  std::string line(to_string(r.method));
  for (std::size_t x : {r.n, r.m, r.k, r.workers, r.reps}) line += ',' + std::to_string(x);
  for (double x : {r.mean_ns, r.stddev_ns, r.min_ns}) line += ',' + number(x);
  line += ',';
  if (r.speedup_vs_naive) line += number(*r.speedup_vs_naive);
  return line;
}

std::string to_jsonl(const BenchRecord& r) {
  nlohmann::ordered_json j;
  j["method"] = to_string(r.method);
  j["n"] = r.n;
  j["m"] = r.m;
  j["k"] = r.k;
  j["workers"] = r.workers;
  j["reps"] = r.reps;
  j["mean_ns"] = r.mean_ns;
  j["stddev_ns"] = r.stddev_ns;
  j["min_ns"] = r.min_ns;
  j["speedup_vs_naive"] = r.speedup_vs_naive ? nlohmann::ordered_json(*r.speedup_vs_naive) : nullptr;
  return j.dump();
}

} // namespace rsr::bench
