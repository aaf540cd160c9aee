// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "oracles.hpp"
#include "rsr/cli.hpp"
#include "rsr/index_store.hpp"
#include "rsr/io.hpp"
#include "rsr/random.hpp"
#include "rsr/tuner.hpp"

using namespace rsr;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "rsr");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string bytes_of(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct Workspace {
  fs::path dir = oracle::temp_dir("cli");
  ~Workspace() { fs::remove_all(dir); }
  std::string operator/(const std::string& name) const { return (dir / name).string(); }
};

} // namespace

TEST_CASE("preprocess the example matrix and multiply") {
  Workspace ws;
  save_matrix(ws / "b.tmx", oracle::to_binary(oracle::kExample), MatrixFormat::text);
  save_vector(ws / "v.vecf64", oracle::kExampleVector);

  const Result pre = run({"preprocess", ws / "b.tmx", "--k", "2", "-o", ws / "b.rsx"});
  REQUIRE(pre.code == 0);
  const auto report = nlohmann::json::parse(pre.out);
  CHECK(report["kind"] == "ternary");
  CHECK(report["k"] == 2);
  CHECK(report["index_entries"] == 2 * 3 * (6 + 4));
  CHECK(pre.out.find('\n') == pre.out.size() - 1);

  const auto stored = std::get<TernaryIndex>(load_index(ws / "b.rsx"));
  CHECK(stored.positive.blocks[0].permutation == std::vector<std::uint32_t>{1, 4, 5, 0, 2, 3});
  CHECK(stored.positive.blocks[0].segmentation == std::vector<std::uint32_t>{0, 3, 5, 5});

  REQUIRE(run({"multiply", ws / "b.rsx", ws / "v.vecf64", "--variant", "rsr", "-o", ws / "rsr.vecf64"}).code == 0);
  REQUIRE(run({"multiply", ws / "b.rsx", ws / "v.vecf64", "--variant", "rsrpp", "-o", ws / "pp.vecf64"}).code == 0);
  CHECK(load_vector(ws / "rsr.vecf64") == std::vector<double>{5, 12, 16, 18, 12, 14});
  CHECK(bytes_of(ws / "rsr.vecf64") == bytes_of(ws / "pp.vecf64"));

  const Result bin = run({"preprocess", ws / "b.tmx", "--binary", "--k", "2", "-o", ws / "bin.rsx"});
  REQUIRE(bin.code == 0);
  CHECK(nlohmann::json::parse(bin.out)["kind"] == "binary");
  CHECK(std::get<RsrIndex>(load_index(ws / "bin.rsx")) == preprocess(oracle::to_binary(oracle::kExample), 2));
  REQUIRE(run({"multiply", ws / "bin.rsx", ws / "v.vecf64", "-o", ws / "bin.vecf64"}).code == 0);
  CHECK(load_vector(ws / "bin.vecf64") == std::vector<double>{5, 12, 16, 18, 12, 14});
}

TEST_CASE("k=auto uses the RSR++ tuner unless told otherwise") {
  Workspace ws;
  REQUIRE(run({"gen-matrix", "--rows", "4096", "--cols", "64", "--seed", "3", "-o", ws / "a.tpk"}).code == 0);
  const Result pp = run({"preprocess", ws / "a.tpk", "-o", ws / "a.rsx"});
  REQUIRE(pp.code == 0);
  CHECK(nlohmann::json::parse(pp.out)["k"] == optimal_k_rsrpp(4096));
  const Result rsr = run({"preprocess", ws / "a.tpk", "--k", "auto", "--variant", "rsr", "-o", ws / "a2.rsx"});
  REQUIRE(rsr.code == 0);
  CHECK(nlohmann::json::parse(rsr.out)["k"] == optimal_k_rsr(4096));
}

TEST_CASE("multiply is deterministic across worker counts") {
  Workspace ws;
  REQUIRE(run({"gen-matrix", "--rows", "512", "--cols", "300", "-o", ws / "a.tpk"}).code == 0);
  REQUIRE(run({"gen-vector", "--len", "512", "--seed", "9", "-o", ws / "v.vecf64"}).code == 0);
  REQUIRE(run({"preprocess", ws / "a.tpk", "--k", "6", "--workers", "3", "-o", ws / "a.rsx"}).code == 0);
  REQUIRE(run({"multiply", ws / "a.rsx", ws / "v.vecf64", "--workers", "1", "-o", ws / "w1.vecf64"}).code == 0);
  REQUIRE(run({"multiply", ws / "a.rsx", ws / "v.vecf64", "--workers", "4", "-o", ws / "w4.vecf64"}).code == 0);
  CHECK(bytes_of(ws / "w1.vecf64") == bytes_of(ws / "w4.vecf64"));
  const auto expected = naive_multiply(load_vector(ws / "v.vecf64"), load_ternary_matrix(ws / "a.tpk"));
  CHECK(load_vector(ws / "w4.vecf64") == expected);
}

TEST_CASE("verify: pass, failure hook and determinism") {
  Workspace ws;
  save_matrix(ws / "b.tmx", oracle::to_ternary(oracle::kExample), MatrixFormat::text);
  const Result ok = run({"verify", ws / "b.tmx", "--trials", "100", "--seed", "5"});
  CHECK(ok.code == cli::kSuccess);
  CHECK(ok.out == "verify rows=6 cols=6 trials=100 seed=5\nk=1 rsr=pass rsrpp=pass\nk=2 rsr=pass rsrpp=pass\nPASS\n");
  CHECK(run({"verify", ws / "b.tmx", "--trials", "100", "--seed", "5"}).out == ok.out);

  const Result bad = run({"verify", ws / "b.tmx", "--trials", "100", "--corrupt-index"});
  CHECK(bad.code == cli::kVerifyMismatch);
  CHECK(bad.out.find("FAIL(trial ") != std::string::npos);
  CHECK(bad.out.find(", column ") != std::string::npos);
  CHECK(bad.out.substr(bad.out.size() - 5) == "FAIL\n");
}

TEST_CASE("bench output") {
  const Result csv = run({"bench", "--sizes", "6,7", "--methods", "naive,rsrpp", "--reps", "2", "--warmup", "0"});
  REQUIRE(csv.code == 0);
  std::istringstream lines(csv.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "method,n,m,k,workers,reps,mean_ns,stddev_ns,min_ns,speedup_vs_naive");
  int naive = 0, rsrpp = 0, pre = 0;
  while (std::getline(lines, line)) {
    if (line.rfind("naive,", 0) == 0) ++naive;
    if (line.rfind("rsrpp,", 0) == 0) ++rsrpp;
    if (line.rfind("preprocess,", 0) == 0) ++pre;
  }
  CHECK(naive == 2);
  CHECK(rsrpp == 2);
  CHECK(pre == 2);

  const Result jsonl = run({"bench", "--sizes", "6", "--methods", "rsr", "--reps", "1", "--format", "jsonl", "--k", "2"});
  REQUIRE(jsonl.code == 0);
  std::istringstream jl(jsonl.out);
  while (std::getline(jl, line)) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j["k"] == 2);
    CHECK(j["speedup_vs_naive"].is_null());
  }
}

TEST_CASE("exit codes") {
  Workspace ws;
  CHECK(run({}).code == cli::kUsageError);
  CHECK(run({"frobnicate"}).code == cli::kUsageError);
  CHECK(run({"--help"}).code == cli::kSuccess);

  const Result missing = run({"preprocess", ws / "nope.tmx", "-o", ws / "x.rsx"});
  CHECK(missing.code == cli::kIoError);
  CHECK(missing.err.find("cannot open") != std::string::npos);

  save_matrix(ws / "b.tmx", oracle::to_ternary(oracle::kExample), MatrixFormat::text);
  CHECK(run({"preprocess", ws / "b.tmx", "--k", "7", "-o", ws / "x.rsx"}).code == cli::kUsageError);
  CHECK(run({"preprocess", ws / "b.tmx", "--k", "two", "-o", ws / "x.rsx"}).code == cli::kUsageError);
  CHECK(run({"bench", "--sizes", "6", "--format", "xml"}).code == cli::kUsageError);
  CHECK(run({"bench", "--sizes", "6,x"}).code == cli::kUsageError);

  { std::ofstream(ws / "broken.rsx") << "RSX1"; }
  save_vector(ws / "v.vecf64", oracle::kExampleVector);
  CHECK(run({"multiply", ws / "broken.rsx", ws / "v.vecf64", "-o", ws / "o.vecf64"}).code == cli::kIoError);

  REQUIRE(run({"preprocess", ws / "b.tmx", "--k", "2", "-o", ws / "b.rsx"}).code == 0);
  save_vector(ws / "short.vecf64", std::vector<double>{1, 2});
  CHECK(run({"multiply", ws / "b.rsx", ws / "short.vecf64", "-o", ws / "o.vecf64"}).code == cli::kIoError);
}

#ifdef RSR_CLI_PATH
TEST_CASE("the installed binary runs end to end") {
  Workspace ws;
  save_matrix(ws / "b.tmx", oracle::to_ternary(oracle::kExample), MatrixFormat::text);
  const std::string exe = RSR_CLI_PATH;
  CHECK(std::system((exe + " verify " + (ws / "b.tmx") + " --trials 10 > " + (ws / "out.txt")).c_str()) == 0);
  CHECK(bytes_of(ws / "out.txt").find("PASS") != std::string::npos);
  const int status = std::system((exe + " preprocess " + (ws / "missing.tmx") + " -o " + (ws / "x.rsx") + " 2> " +
                                  (ws / "err.txt")).c_str());
  CHECK(WEXITSTATUS(status) == cli::kIoError);
  CHECK(!bytes_of(ws / "err.txt").empty());
}
#endif
