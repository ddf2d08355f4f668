// Copyright 2026 The posedtw Authors
// SPDX-License-Identifier: Apache-2.0

#include "posedtw/dataset_io.hpp"

#include <cmath>
#include <fstream>
#include <istream>

#include <json.hpp>

#include "posedtw/errors.hpp"

namespace posedtw {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ordered_json number_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

json parse_json(std::string_view line) {
  try {
    return json::parse(line);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::kParseError, std::string("malformed JSON: ") + e.what());
  }
}

template <typename T>
T required(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) {
    fail(ErrorCode::kParseError, std::string("missing field '") + key + "'");
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    fail(ErrorCode::kParseError, std::string("field '") + key + "' has the wrong type");
  }
}

double as_number(const json& v, const char* what) {
  if (!v.is_number()) fail(ErrorCode::kParseError, std::string(what) + " is not a number");
  return v.get<double>();
}

ordered_json settings_object(const MatchSettings& s) {
  ordered_json o;
  const auto width = s.dtw.width_for(1, 1);
  if (const auto* r = std::get_if<WindowRatio>(&s.dtw.window)) {
    o["window"] = {{"ratio", r->ratio}};
  } else if (width) {
    o["window"] = {{"width", *width}};
  } else {
    o["window"] = nullptr;
  }
  o["upsilon"] = number_or_null(s.dtw.abandon_threshold);
  o["epsilon"] = number_or_null(s.epsilon);
  return o;
}

ordered_json eval_object(const EvalReport& r) {
  ordered_json cmc = ordered_json::object();
  for (const auto& [k, v] : r.rank_k) cmc["rank" + std::to_string(k)] = v;
  ordered_json o;
  o["cmc"] = cmc;
  o["mAP"] = r.mean_ap;
  o["per_query_ap"] = r.per_query_ap;
  o["first_hit_rank"] = r.first_hit_rank;
  return o;
}

ordered_json cost_object(const CostReport& r, bool include_timing) {
  ordered_json o;
  o["strategies"] = r.strategies.to_string();
  o["N"] = r.N;
  o["m"] = r.m;
  o["n"] = r.n;
  o["uniform_lengths"] = r.uniform_lengths;
  o["cells_full"] = r.cells_full;
  o["cells_in_band"] = r.cells_in_band;
  o["S_out"] = r.S_out;
  o["V"] = r.V;
  o["abandoned"] = r.abandoned;
  o["k"] = r.k;
  o["measured_cells"] = r.measured_cells;
  o["predicted_cells"] = r.predicted_for(r.strategies);
  ordered_json predicted = ordered_json::object();
  for (StrategySet s : canonical_strategy_sets()) predicted[s.to_string()] = r.predicted_for(s);
  o["predicted"] = predicted;
  if (include_timing) o["wall_seconds"] = r.wall_seconds;
  return o;
}

ordered_json condition_object(const ConditionSpec& c) {
  ordered_json o;
  o["condition_tag"] = c.condition_tag;
  o["camera_tag"] = c.camera_tag;
  o["noise_sigma"] = c.noise_sigma;
  o["dropout_rate"] = c.dropout_rate;
  o["phase_offset"] = c.phase_offset;
  o["camera_scale"] = c.camera_scale;
  o["camera_offset"] = {c.camera_offset.x, c.camera_offset.y};
  return o;
}

}  // namespace

DatasetRecord parse_dataset_record(std::string_view line) {
  const json obj = parse_json(line);
  if (!obj.is_object()) fail(ErrorCode::kParseError, "record is not a JSON object");

  DatasetRecord rec;
  rec.id = required<std::string>(obj, "id");
  rec.camera_tag = required<std::string>(obj, "camera_tag");
  rec.condition_tag = required<std::string>(obj, "condition_tag");
  rec.frame_rate = required<int>(obj, "frame_rate");
  if (rec.frame_rate <= 0) fail(ErrorCode::kParseError, "frame_rate must be positive");

  const json& frames = obj.contains("frames") ? obj.at("frames") : json();
  if (!frames.is_array() || frames.empty()) {
    fail(ErrorCode::kParseError, "'frames' must be a non-empty array");
  }
  rec.frames.reserve(frames.size());
  for (std::size_t t = 0; t < frames.size(); ++t) {
    const json& f = frames[t];
    if (!f.is_array() || f.size() != kCocoJointCount) {
      fail(ErrorCode::kParseError, "frame " + std::to_string(t) + " must hold exactly 17 joints");
    }
    RawKeypointFrame raw;
    raw.frame_index = t;
    for (std::size_t j = 0; j < kCocoJointCount; ++j) {
      const json& p = f[j];
      if (!p.is_array() || p.size() != 3) {
        fail(ErrorCode::kParseError, "frame " + std::to_string(t) + " joint " +
                                         std::to_string(j) + " must be [x, y, confidence]");
      }
      raw.joints[j] = {as_number(p[0], "x"), as_number(p[1], "y"),
                       as_number(p[2], "confidence")};
    }
    try {
      raw.validate();
    } catch (const Error& e) {
      fail(ErrorCode::kParseError, "frame " + std::to_string(t) + ": " + e.what());
    }
    rec.frames.push_back(raw);
  }
  return rec;
}

std::string serialize_dataset_record(const DatasetRecord& record) {
  ordered_json o;
  o["id"] = record.id;
  o["camera_tag"] = record.camera_tag;
  o["condition_tag"] = record.condition_tag;
  o["frame_rate"] = record.frame_rate;
  ordered_json frames = ordered_json::array();
  for (const RawKeypointFrame& f : record.frames) {
    ordered_json joints = ordered_json::array();
    for (const RawJoint& p : f.joints) joints.push_back({p.x, p.y, p.confidence});
    frames.push_back(std::move(joints));
  }
  o["frames"] = std::move(frames);
  return o.dump();
}

std::string serialize_normalized(const PoseSequence& seq) {
  ordered_json o;
  o["schema_version"] = kReportSchemaVersion;
  o["format"] = kNormalizedFormat;
  o["id"] = seq.id();
  o["camera_tag"] = seq.camera_tag();
  o["condition_tag"] = seq.condition_tag();
  o["frame_rate"] = seq.frame_rate();
  ordered_json indices = ordered_json::array();
  ordered_json frames = ordered_json::array();
  for (const KeypointFrame& f : seq.frames()) {
    indices.push_back(f.frame_index);
    ordered_json joints = ordered_json::array();
    for (const Point2& p : f.joints) joints.push_back({p.x, p.y});
    frames.push_back(std::move(joints));
  }
  o["frame_indices"] = std::move(indices);
  o["frames"] = std::move(frames);
  return o.dump();
}

namespace {

PoseSequence normalized_from_json(const json& obj) {
  const auto frames_json = obj.contains("frames") ? obj.at("frames") : json();
  if (!frames_json.is_array() || frames_json.empty()) {
    fail(ErrorCode::kParseError, "'frames' must be a non-empty array");
  }
  const auto indices = required<std::vector<std::size_t>>(obj, "frame_indices");
  if (indices.size() != frames_json.size()) {
    fail(ErrorCode::kParseError, "'frame_indices' length differs from 'frames'");
  }
  std::vector<KeypointFrame> frames;
  frames.reserve(frames_json.size());
  for (std::size_t t = 0; t < frames_json.size(); ++t) {
    const json& f = frames_json[t];
    if (!f.is_array() || f.size() != kBodyJointCount) {
      fail(ErrorCode::kParseError, "normalized frame " + std::to_string(t) +
                                       " must hold exactly 12 joints");
    }
    KeypointFrame kf;
    kf.frame_index = indices[t];
    kf.valid.fill(true);
    for (std::size_t j = 0; j < kBodyJointCount; ++j) {
      if (!f[j].is_array() || f[j].size() != 2) {
        fail(ErrorCode::kParseError, "normalized joint must be [x, y]");
      }
      kf.joints[j] = {as_number(f[j][0], "x"), as_number(f[j][1], "y")};
    }
    frames.push_back(kf);
  }
  return PoseSequence(required<std::string>(obj, "id"), required<std::string>(obj, "camera_tag"),
                      required<std::string>(obj, "condition_tag"), std::move(frames),
                      required<int>(obj, "frame_rate"));
}

}  // namespace

PoseSequence parse_normalized_record(std::string_view line) {
  const json obj = parse_json(line);
  if (!obj.is_object() || obj.value("format", std::string()) != kNormalizedFormat) {
    fail(ErrorCode::kParseError, "not a normalized record");
  }
  return normalized_from_json(obj);
}

PoseSequence parse_any_record(std::string_view line, double confidence_floor) {
  const json obj = parse_json(line);
  if (obj.is_object() && obj.value("format", std::string()) == kNormalizedFormat) {
    return normalized_from_json(obj);
  }
  return sequence_from_record(parse_dataset_record(line), confidence_floor);
}

void for_each_line(std::istream& in,
                   const std::function<void(std::size_t, std::string_view)>& on_line) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    on_line(number, line);
  }
}

std::vector<PoseSequence> read_sequences(std::istream& in, double confidence_floor) {
  std::vector<PoseSequence> out;
  for_each_line(in, [&](std::size_t number, std::string_view line) {
    try {
      out.push_back(parse_any_record(line, confidence_floor));
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(number) + ": " + e.what());
    }
  });
  return out;
}

std::vector<PoseSequence> load_sequences(const std::filesystem::path& path,
                                         double confidence_floor) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kInvalidArgument, "cannot open '" + path.string() + "'");
  return read_sequences(in, confidence_floor);
}

void write_lines(const std::filesystem::path& path, const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kInvalidArgument, "cannot write '" + path.string() + "'");
  for (const std::string& l : lines) out << l << '\n';
  if (!out) fail(ErrorCode::kInvalidArgument, "write to '" + path.string() + "' failed");
}

std::string settings_json(const MatchSettings& settings) {
  ordered_json o;
  o["schema_version"] = kReportSchemaVersion;
  o["settings"] = settings_object(settings);
  return o.dump(2);
}

std::string ranked_lists_json(std::span<const RankedList> lists, const MatchSettings& settings,
                              std::size_t top_k) {
  ordered_json o;
  o["schema_version"] = kReportSchemaVersion;
  o["settings"] = settings_object(settings);
  ordered_json results = ordered_json::array();
  for (const RankedList& l : lists) {
    ordered_json entries = ordered_json::array();
    const std::size_t limit = top_k == 0 ? l.entries.size() : std::min(top_k, l.entries.size());
    for (std::size_t r = 0; r < limit; ++r) {
      const RankedEntry& e = l.entries[r];
      ordered_json item;
      item["rank"] = r + 1;
      item["gallery_id"] = e.gallery_id;
      item["gallery_index"] = e.gallery_index;
      item["distance"] = number_or_null(e.distance);
      item["status"] = to_string(e.status);
      entries.push_back(std::move(item));
    }
    results.push_back({{"query_id", l.query_id}, {"entries", std::move(entries)}});
  }
  o["results"] = std::move(results);
  return o.dump(2);
}

std::string eval_report_json(const EvalReport& report, const MatchSettings& settings,
                             std::size_t queries, std::size_t gallery) {
  ordered_json o;
  o["schema_version"] = kReportSchemaVersion;
  o["settings"] = settings_object(settings);
  o["queries"] = queries;
  o["gallery"] = gallery;
  o["report"] = eval_object(report);
  return o.dump(2);
}

std::string cost_reports_json(std::span<const CostReport> reports, const MatchSettings& settings,
                              bool ordering_holds, bool include_timing) {
  ordered_json o;
  o["schema_version"] = kReportSchemaVersion;
  o["settings"] = settings_object(settings);
  ordered_json runs = ordered_json::array();
  for (const CostReport& r : reports) runs.push_back(cost_object(r, include_timing));
  o["runs"] = std::move(runs);
  o["ordering_holds"] = ordering_holds;
  return o.dump(2);
}

std::string sweep_json(std::span<const SweepRow> rows) {
  ordered_json o;
  o["schema_version"] = kReportSchemaVersion;
  ordered_json out = ordered_json::array();
  for (const SweepRow& r : rows) {
    ordered_json row;
    row["group"] = r.point.group;
    row["w"] = r.point.width ? ordered_json(*r.point.width) : ordered_json(nullptr);
    row["upsilon"] = r.point.upsilon ? ordered_json(*r.point.upsilon) : ordered_json(nullptr);
    row["epsilon"] = r.point.epsilon ? ordered_json(*r.point.epsilon) : ordered_json(nullptr);
    row["rank1"] = r.eval.rank_k.at(1);
    row["rank5"] = r.eval.rank_k.at(5);
    row["mAP"] = r.eval.mean_ap;
    row["measured_cells"] = r.cost.measured_cells;
    row["V"] = r.cost.V;
    row["k"] = r.cost.k;
    out.push_back(std::move(row));
  }
  o["rows"] = std::move(out);
  return o.dump(2);
}

std::string manifest_json(const BenchmarkManifest& m) {
  ordered_json o;
  o["schema_version"] = m.schema_version;
  o["seed"] = m.seed;
  o["identities"] = m.identities;
  o["length"] = m.length;
  o["frame_rate"] = m.frame_rate;
  o["delta_sep"] = m.delta_sep;
  o["intra_reference"] = m.intra_reference;
  o["min_inter"] = number_or_null(m.min_inter);
  o["max_intra"] = m.max_intra;
  o["identity_seeds"] = m.identity_seeds;
  ordered_json conds = ordered_json::array();
  for (const ConditionSpec& c : m.conditions) conds.push_back(condition_object(c));
  o["conditions"] = std::move(conds);
  return o.dump(2);
}

}  // namespace posedtw
