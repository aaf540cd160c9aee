// SPDX-License-Identifier: Apache-2.0
#include "rsr/cli.hpp"

#include <algorithm>
#include <charconv>
#include <optional>
#include <ostream>
#include <sstream>
#include <fstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "rsr/bench.hpp"
#include "rsr/error.hpp"
#include "rsr/index_store.hpp"
#include "rsr/io.hpp"
#include "rsr/kernels.hpp"
#include "rsr/random.hpp"
#include "rsr/tuner.hpp"
#include "rsr/verify.hpp"

namespace rsr::cli {

namespace {

// Empty means "auto".
std::optional<std::size_t> parse_k(const std::string& text) {
  if (text == "auto") return std::nullopt;
  std::size_t k = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), k);
  if (ec != std::errc{} || ptr != text.data() + text.size()) throw ArgumentError("--k must be an integer or 'auto'");
  return k;
}

template <class T>
std::vector<T> split_list(const std::string& text, T (*parse)(std::string_view)) {
  std::vector<T> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    out.push_back(parse(std::string_view(text).substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return out;
}

unsigned parse_exponent(std::string_view s) {
  unsigned e = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), e);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
    throw ArgumentError("--sizes expects comma-separated exponents, got '" + std::string(s) + "'");
  return e;
}

void require_workers(std::size_t workers) {
  if (workers < 1) throw ArgumentError("--workers must be at least 1");
}

std::string space_json(const SpaceReport& s, std::string_view kind, std::size_t rows, std::size_t cols,
                       std::size_t k) {
  nlohmann::ordered_json j;
  j["kind"] = kind;
  j["rows"] = rows;
  j["cols"] = cols;
  j["k"] = k;
  j["index_entries"] = s.index_entries;
  j["dense_entries"] = s.dense_entries;
  j["entry_ratio"] = s.entry_ratio;
  j["serialized_bytes"] = s.serialized_bytes;
  j["dense_bytes_1B"] = s.dense_bytes_1B;
  j["byte_ratio"] = s.byte_ratio;
  return j.dump();
}

struct PreprocessArgs {
  std::string matrix;
  std::string out;
  std::string k = "auto";
  std::string variant = "rsrpp";
  std::size_t workers = 1;
  bool binary = false;
};

int cmd_preprocess(const PreprocessArgs& a, std::ostream& out) {
  require_workers(a.workers);
  const Variant tuner = parse_variant(a.variant);
  const auto k_arg = parse_k(a.k);
  const bool binary = a.binary || format_from_path(a.matrix) == MatrixFormat::packed_binary;
  if (binary) {
    const BinaryMatrix b = load_binary_matrix(a.matrix);
    const std::size_t k = k_arg.value_or(optimal_k(std::max<std::size_t>(b.rows(), 1), tuner));
    const RsrIndex index = preprocess(b, k, a.workers);
    save_index(index, a.out);
    out << space_json(space_report(index), "binary", index.rows, index.cols, index.k) << '\n';
  } else {
    const TernaryMatrix m = load_ternary_matrix(a.matrix);
    const std::size_t k = k_arg.value_or(optimal_k(std::max<std::size_t>(m.rows(), 1), tuner));
    const TernaryIndex index = preprocess_ternary(m, k, a.workers);
    save_index(index, a.out);
    out << space_json(space_report(index), "ternary", index.rows(), index.cols(), index.k()) << '\n';
  }
  return kSuccess;
}

struct MultiplyArgs {
  std::string index;
  std::string vector;
  std::string out;
  std::string variant = "rsrpp";
  std::size_t workers = 1;
};

int cmd_multiply(const MultiplyArgs& a) {
  require_workers(a.workers);
  const Variant variant = parse_variant(a.variant);
  const StoredIndex index = load_index(a.index);
  const std::vector<double> v = load_vector(a.vector);
  const std::vector<double> result = std::visit(
      [&](const auto& idx) { return multiply_parallel(v, idx, variant, a.workers); }, index);
  save_vector(a.out, result);
  return kSuccess;
}

struct VerifyArgs {
  std::string matrix;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  bool corrupt = false;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  const TernaryMatrix m = load_ternary_matrix(a.matrix);
  const VerifyReport report = verify_matrix(m, {a.trials, a.seed, a.corrupt});
  print_report(out, report);
  return report.passed() ? kSuccess : kVerifyMismatch;
}

struct BenchArgs {
  std::string sizes;
  std::string methods = "naive,rsr,rsrpp";
  std::size_t reps = 10;
  std::size_t warmup = 3;
  std::string k = "auto";
  std::size_t workers = 1;
  std::uint64_t seed = 1;
  std::string format = "csv";
  std::string out;
};

int cmd_bench(const BenchArgs& a, std::ostream& out) {
  require_workers(a.workers);
  if (a.format != "csv" && a.format != "jsonl") throw ArgumentError("--format must be csv or jsonl");
  if (a.reps < 1) throw ArgumentError("--reps must be at least 1");
  bench::BenchConfig config;
  config.size_exponents = split_list<unsigned>(a.sizes, parse_exponent);
  config.methods = split_list<bench::Method>(a.methods, bench::parse_method);
  config.reps = a.reps;
  config.warmup = a.warmup;
  config.k = parse_k(a.k);
  config.workers = a.workers;
  config.seed = a.seed;

  std::ofstream file;
  if (!a.out.empty()) {
    file.open(a.out, std::ios::trunc);
    if (!file) throw IoError("cannot open " + a.out + " for writing");
  }
  std::ostream& sink = a.out.empty() ? out : file;
  const bool csv = a.format == "csv";
  if (csv) sink << bench::csv_header() << '\n';
  bench::run_bench(config, [&](const bench::BenchRecord& r) {
    sink << (csv ? bench::to_csv(r) : bench::to_jsonl(r)) << '\n';
    sink.flush();
  });
  if (!sink) throw IoError("write failed");
  return kSuccess;
}

struct GenMatrixArgs {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::uint64_t seed = 1;
  bool binary = false;
  std::string out;
};

int cmd_gen_matrix(const GenMatrixArgs& a) {
  Rng rng(a.seed);
  const MatrixFormat format = format_from_path(a.out);
  if (a.binary || format == MatrixFormat::packed_binary)
    save_matrix(a.out, random_binary(a.rows, a.cols, rng), format);
  else
    save_matrix(a.out, random_ternary(a.rows, a.cols, rng), format);
  return kSuccess;
}

struct GenVectorArgs {
  std::size_t len = 0;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_gen_vector(const GenVectorArgs& a) {
  Rng rng(a.seed);
  save_vector(a.out, random_int_vector(a.len, rng));
  return kSuccess;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Vector by binary/ternary matrix multiplication with RSR indices", "rsr"};
  app.require_subcommand(1);

  PreprocessArgs pre;
  auto* p = app.add_subcommand("preprocess", "Build an .rsx index from a matrix file");
  p->add_option("matrix", pre.matrix, "Matrix file (.tmx, .tpk or .bpk)")->required();
  p->add_option("-o,--out", pre.out, "Output .rsx path")->required();
  p->add_option("--k", pre.k, "Block width, or 'auto'");
  p->add_option("--variant", pre.variant, "Cost model used by --k auto (rsr or rsrpp)");
  p->add_option("--workers", pre.workers, "Worker threads");
  p->add_flag("--binary", pre.binary, "Treat a .tmx file as a binary matrix");

  MultiplyArgs mul;
  auto* mu = app.add_subcommand("multiply", "Multiply a vector by an indexed matrix");
  mu->add_option("index", mul.index, "Index file (.rsx)")->required();
  mu->add_option("vector", mul.vector, "Input vector (.vecf64)")->required();
  mu->add_option("-o,--out", mul.out, "Output vector path")->required();
  mu->add_option("--variant", mul.variant, "rsr or rsrpp");
  mu->add_option("--workers", mul.workers, "Worker threads");

  VerifyArgs ver;
  auto* ve = app.add_subcommand("verify", "Check RSR and RSR++ against the naive product for every k");
  ve->add_option("matrix", ver.matrix, "Matrix file")->required();
  ve->add_option("--trials", ver.trials, "Random vectors per k");
  ve->add_option("--seed", ver.seed, "RNG seed");
  ve->add_flag("--corrupt-index", ver.corrupt, "Break each index before checking (tests the failure path)")
      ->group("");

  BenchArgs ben;
  auto* be = app.add_subcommand("bench", "Time naive, RSR and RSR++ on random ternary matrices");
  be->add_option("--sizes", ben.sizes, "Comma-separated exponents, e.g. 11,12,13 for 2^11..2^13")->required();
  be->add_option("--methods", ben.methods, "Comma-separated subset of naive,rsr,rsrpp");
  be->add_option("--reps", ben.reps, "Timed repetitions");
  be->add_option("--warmup", ben.warmup, "Untimed warm-up repetitions");
  be->add_option("--k", ben.k, "Block width, or 'auto'");
  be->add_option("--workers", ben.workers, "Worker threads");
  be->add_option("--seed", ben.seed, "RNG seed");
  be->add_option("--format", ben.format, "csv or jsonl");
  be->add_option("-o,--out", ben.out, "Write the report here instead of standard output");

  GenMatrixArgs gm;
  auto* g = app.add_subcommand("gen-matrix", "Write a seeded random matrix");
  g->add_option("--rows", gm.rows)->required();
  g->add_option("--cols", gm.cols)->required();
  g->add_option("--seed", gm.seed);
  g->add_flag("--binary", gm.binary, "Entries in {0,1} instead of {-1,0,1}");
  g->add_option("-o,--out", gm.out, "Output path; the extension picks the format")->required();

  GenVectorArgs gv;
  auto* gvc = app.add_subcommand("gen-vector", "Write a seeded random integer vector");
  gvc->add_option("--len", gv.len)->required();
  gvc->add_option("--seed", gv.seed);
  gvc->add_option("-o,--out", gv.out)->required();

  // CLI11 consumes its argument vector from the back.
  std::vector<std::string> reversed(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(reversed.begin(), reversed.end());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kSuccess : kUsageError;
  }

  try {
    if (p->parsed()) return cmd_preprocess(pre, out);
    if (mu->parsed()) return cmd_multiply(mul);
    if (ve->parsed()) return cmd_verify(ver, out);
    if (be->parsed()) return cmd_bench(ben, out);
    if (g->parsed()) return cmd_gen_matrix(gm);
    if (gvc->parsed()) return cmd_gen_vector(gv);
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  }
  return kUsageError;
}

} // namespace rsr::cli
