// Copyright 2026 The posedtw Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "posedtw/cost_model.hpp"
#include "posedtw/retrieval.hpp"
#include "posedtw/sweep.hpp"
#include "posedtw/synthetic.hpp"
#include "posedtw/types.hpp"

namespace posedtw {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr std::string_view kNormalizedFormat = "normalized-12";

// JSONL line formats.
//
// Raw record (one sequence per line):
//   {"id": str, "camera_tag": str, "condition_tag": str, "frame_rate": int,
//    "frames": [[[x, y, confidence] x 17] ...]}
//
// Normalized record, as written by `posedtw ingest`:
//   {"schema_version": 1, "format": "normalized-12", "id": ..., "camera_tag": ...,
//    "condition_tag": ..., "frame_rate": ..., "frame_indices": [...],
//    "frames": [[[x, y] x 12] ...]}

/// Parses one raw line. Throws Error(kParseError) for malformed JSON or a
/// record that breaks the schema.
DatasetRecord parse_dataset_record(std::string_view line);
std::string serialize_dataset_record(const DatasetRecord& record);

/// Parses a normalized line (fully valid frames).
PoseSequence parse_normalized_record(std::string_view line);
std::string serialize_normalized(const PoseSequence& seq);

/// A raw or normalized line to a fully valid sequence.
PoseSequence parse_any_record(std::string_view line, double confidence_floor);

struct LineError {
  std::size_t line = 0;  // 1-based
  std::string message;
  ErrorCode code = ErrorCode::kParseError;
};

/// Calls `on_line(line_number, text)` for each non-blank line.
void for_each_line(std::istream& in,
                   const std::function<void(std::size_t, std::string_view)>& on_line);

/// Reads every record into fully valid sequences. Throws Error with a
/// "line N:" prefixed message on the first bad line.
std::vector<PoseSequence> load_sequences(const std::filesystem::path& path,
                                         double confidence_floor = kDefaultConfidenceFloor);
std::vector<PoseSequence> read_sequences(std::istream& in,
                                         double confidence_floor = kDefaultConfidenceFloor);

void write_lines(const std::filesystem::path& path, const std::vector<std::string>& lines);

// Report JSON. Infinite distances and thresholds are written as null.
std::string ranked_lists_json(std::span<const RankedList> lists, const MatchSettings& settings,
                              std::size_t top_k);
std::string eval_report_json(const EvalReport& report, const MatchSettings& settings,
                             std::size_t queries, std::size_t gallery);
std::string cost_reports_json(std::span<const CostReport> reports, const MatchSettings& settings,
                              bool ordering_holds, bool include_timing);
std::string sweep_json(std::span<const SweepRow> rows);
std::string manifest_json(const BenchmarkManifest& manifest);
std::string settings_json(const MatchSettings& settings);

}  // namespace posedtw
