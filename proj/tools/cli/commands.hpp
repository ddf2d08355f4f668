// Copyright 2026 The posedtw Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "posedtw/retrieval.hpp"
#include "posedtw/types.hpp"

namespace posedtw::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitInternal = 3,
};

/// Matching flags shared by match, evaluate, bench.
struct MatchFlags {
  double width = kDefaultWindowWidth;
  std::optional<double> ratio;  // overrides width when set
  bool no_window = false;
  double upsilon = kDefaultAbandonThreshold;
  double epsilon = kDefaultEpsilon;
  unsigned workers = 1;
  double confidence_floor = kDefaultConfidenceFloor;

  [[nodiscard]] MatchSettings settings() const;
};

struct IngestOptions {
  std::string input;
  std::string output;
  double confidence_floor = kDefaultConfidenceFloor;
};

struct MatchOptions {
  std::string query_path;
  std::string gallery_path;
  MatchFlags flags;
  std::size_t top_k = 0;  // 0 = full ranking
  std::string output;     // empty = stdout
  bool echo_config = false;
};

struct EvaluateOptions {
  std::string dataset_path;
  std::string query_condition = kDefaultQueryCondition;
  std::vector<std::string> gallery_conditions;  // empty = all others
  MatchFlags flags;
  std::string json_path;
};

struct BenchOptions {
  std::string dataset_path;
  std::vector<std::string> strategies;  // empty = the five canonical sets
  std::string query_condition = kDefaultQueryCondition;
  std::vector<std::string> gallery_conditions;
  MatchFlags flags;
  std::string json_path;
  bool timing = false;
};

struct SynthOptions {
  std::size_t identities = 41;
  std::size_t conditions = 4;
  std::size_t frames = 40;
  std::uint64_t seed = 1;
  double noise = 0.0;
  double dropout = 0.0;
  std::string output = "synthetic.jsonl";
  std::string manifest;  // empty = <output>.manifest.json
};

struct SweepOptions {
  std::string dataset_path;
  std::string plan = "reference";  // reference | grid
  std::vector<double> widths{10, 20, 30, 40};
  std::vector<double> upsilons{3, 4, 5, 6, 7, 8};
  std::vector<double> epsilons{0.2, 0.4, 0.6, 0.8};
  std::string query_condition = kDefaultQueryCondition;
  std::vector<std::string> gallery_conditions;
  unsigned workers = 1;
  double confidence_floor = kDefaultConfidenceFloor;
  std::string json_path;
};

// Each command writes its primary output to `out` and diagnostics to `err`,
// and returns a process exit code.
int cmd_ingest(const IngestOptions& opts, std::ostream& out, std::ostream& err);
int cmd_match(const MatchOptions& opts, std::ostream& out, std::ostream& err);
int cmd_evaluate(const EvaluateOptions& opts, std::ostream& out, std::ostream& err);
int cmd_bench(const BenchOptions& opts, std::ostream& out, std::ostream& err);
int cmd_synth(const SynthOptions& opts, std::ostream& out, std::ostream& err);
int cmd_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches. Used by main() and by tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace posedtw::cli
