// Copyright 2026 The posedtw Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "commands.hpp"
#include "posedtw/dataset_io.hpp"

using namespace posedtw;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "posedtw");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("posedtw-cli-" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("match help shows the default hyperparameters") {
  const Result r = run_cli({"match", "--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("--w,--width FLOAT [30]") != std::string::npos);
  CHECK(r.out.find("--upsilon FLOAT [8]") != std::string::npos);
  CHECK(r.out.find("--epsilon FLOAT [0.8]") != std::string::npos);
}

TEST_CASE("echo-config reports the resolved settings") {
  const auto cfg = nlohmann::json::parse(run_cli({"match", "--echo-config"}).out);
  CHECK(cfg["settings"]["window"]["width"] == 30.0);
  CHECK(cfg["settings"]["upsilon"] == 8.0);
  CHECK(cfg["settings"]["epsilon"] == 0.8);

  const auto custom = nlohmann::json::parse(
      run_cli({"match", "--echo-config", "--ratio", "0.25", "--upsilon", "inf", "--epsilon", "0.6"}).out);
  CHECK(custom["settings"]["window"]["ratio"] == 0.25);
  CHECK(custom["settings"]["upsilon"].is_null());
  CHECK(custom["settings"]["epsilon"] == 0.6);

  const auto open = nlohmann::json::parse(run_cli({"match", "--echo-config", "--no-window"}).out);
  CHECK(open["settings"]["window"].is_null());
}

TEST_CASE("usage errors exit with 1") {
  CHECK(run_cli({}).code == 1);
  CHECK(run_cli({"frobnicate"}).code == 1);
  CHECK(run_cli({"match", "--w", "wide"}).code == 1);
  CHECK(run_cli({"match"}).code == 1);
  CHECK(run_cli({"synth", "--conditions", "7"}).code == 1);
}

TEST_CASE("invalid values and missing files exit with 2") {
  TempDir dir;
  CHECK(run_cli({"match", "--echo-config", "--ratio", "2"}).code == 2);
  CHECK(run_cli({"evaluate", dir / "missing.jsonl"}).code == 2);
}

TEST_CASE("synth, ingest, match, evaluate, bench and sweep end to end") {
  TempDir dir;
  const std::string data = dir / "data.jsonl";
  Result r = run_cli({"synth", "--identities", "4", "--frames", "30", "--seed", "5", "-o", data});
  REQUIRE(r.code == 0);
  CHECK(fs::exists(data + ".manifest.json"));
  const auto manifest = nlohmann::json::parse(slurp(data + ".manifest.json"));
  CHECK(manifest["schema_version"] == 1);

  // A corrupt-but-parseable record (anchor below the floor everywhere) is
  // skipped by ingest; a malformed line is fatal.
  const std::string raw = dir / "raw.jsonl";
  {
    std::ifstream in(data);
    std::ofstream out(raw);
    std::string line;
    std::getline(in, line);
    out << line << "\n";
    auto obj = nlohmann::json::parse(line);
    for (auto& f : obj["frames"]) f[11][2] = 0.0;
    out << obj.dump() << "\n";
  }
  const std::string norm = dir / "norm.jsonl";
  r = run_cli({"ingest", raw, norm});
  CHECK(r.code == 0);
  CHECK(r.out.find("ingested 1 of 2") != std::string::npos);
  CHECK(r.err.find("line 2") != std::string::npos);
  {
    std::ofstream out(raw, std::ios::app);
    out << "{broken\n";
  }
  r = run_cli({"ingest", raw, norm});
  CHECK(r.code == 2);
  CHECK(r.err.find("line 3") != std::string::npos);

  r = run_cli({"ingest", data, norm});
  REQUIRE(r.code == 0);
  const std::string report = dir / "match.json";
  r = run_cli({"match", norm, data, "--top-k", "3", "-o", report});
  REQUIRE(r.code == 0);
  const auto ranked = nlohmann::json::parse(slurp(report));
  CHECK(ranked["results"].size() == 16);
  CHECK(ranked["results"][0]["entries"].size() == 3);
  CHECK(ranked["results"][0]["entries"][0]["distance"] == 0.0);

  r = run_cli({"match", norm, data, "--epsilon", "0"});
  CHECK(r.code == 0);
  CHECK(r.err.find("warning") != std::string::npos);

  const std::string eval_json = dir / "eval.json";
  r = run_cli({"evaluate", data, "--json", eval_json});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("Rank-1") != std::string::npos);
  CHECK(nlohmann::json::parse(slurp(eval_json))["report"]["cmc"]["rank1"] == 1.0);

  r = run_cli({"evaluate", data, "--query-condition", "nobody"});
  CHECK(r.code == 2);

  const std::string bench_json = dir / "bench.json";
  r = run_cli({"bench", data, "--json", bench_json});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("holds") != std::string::npos);
  const auto bench = nlohmann::json::parse(slurp(bench_json));
  CHECK(bench["runs"].size() == 5);
  CHECK_FALSE(bench["runs"][0].contains("wall_seconds"));

  r = run_cli({"bench", data, "--strategies", "GC", "--strategies", "LB+EA"});
  CHECK(r.code == 0);
  CHECK(r.out.find("not checked") != std::string::npos);

  const std::string sweep_json_path = dir / "sweep.json";
  r = run_cli({"sweep", data, "--json", sweep_json_path});
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(slurp(sweep_json_path))["rows"].size() == 20);
  r = run_cli({"sweep", data, "--plan", "grid", "--w-list", "10", "20", "--upsilon-list", "8",
               "--epsilon-list", "0.8"});
  CHECK(r.code == 0);
}

TEST_CASE("missing ground truth names the query identities") {
  TempDir dir;
  const std::string data = dir / "data.jsonl";
  REQUIRE(run_cli({"synth", "--identities", "3", "--frames", "25", "-o", data}).code == 0);
  // Keep only id001's query and id002's gallery entries.
  const std::string subset = dir / "subset.jsonl";
  {
    std::ifstream in(data);
    std::ofstream out(subset);
    std::string line;
    while (std::getline(in, line)) {
      const auto obj = nlohmann::json::parse(line);
      const bool query = obj["condition_tag"] == "clothesA-RGB";
      if ((query && obj["id"] == "id001") || (!query && obj["id"] == "id002")) out << line << "\n";
    }
  }
  const Result r = run_cli({"evaluate", subset});
  CHECK(r.code == 2);
  CHECK(r.err.find("id001") != std::string::npos);
}

}  // TEST_SUITE
