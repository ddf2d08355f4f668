// Copyright 2026 The posedtw Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "posedtw/dtw.hpp"
#include "posedtw/lb.hpp"
#include "posedtw/types.hpp"

namespace posedtw {

inline constexpr double kDefaultWindowWidth = 30.0;
inline constexpr double kDefaultAbandonThreshold = 8.0;
inline constexpr double kDefaultEpsilon = 0.8;

/// A gallery sequence with its lower-bound inputs computed once.
struct GalleryEntry {
  PoseSequence sequence;
  std::vector<FeatureVector> features;
  NormSeries norms;
  LbFeatures lb;

  /// Requires a fully valid sequence.
  static GalleryEntry from(PoseSequence sequence);
};

std::vector<GalleryEntry> make_gallery(std::span<const PoseSequence> sequences);

struct MatchSettings {
  DtwConfig dtw = DtwConfig::with_width(kDefaultWindowWidth, kDefaultAbandonThreshold);
  double epsilon = kDefaultEpsilon;  // +inf disables the lower-bound filter
  unsigned workers = 1;

  static MatchSettings recommended() { return {}; }
  static MatchSettings exhaustive();  // no band, no filter, no abandon
};

enum class MatchStatus : std::uint8_t { kMatched, kFiltered, kAbandoned };

std::string_view to_string(MatchStatus status) noexcept;

/// Scoring of one query/gallery pair.
struct PairScore {
  double distance = kInfinity;
  double lower_bound = 0.0;
  MatchStatus status = MatchStatus::kMatched;
  std::uint64_t cells_evaluated = 0;
  std::uint64_t cells_in_band = 0;  // in-band cells under the active window
};

/// Scores every gallery entry in gallery order: prefilter, then banded DTW
/// with early abandon on the survivors. Independent of settings.workers.
std::vector<PairScore> score_gallery(const PoseSequence& query,
                                     std::span<const GalleryEntry> gallery,
                                     const MatchSettings& settings);

struct RankedEntry {
  std::string gallery_id;
  std::size_t gallery_index = 0;
  double distance = kInfinity;
  MatchStatus status = MatchStatus::kMatched;

  friend bool operator==(const RankedEntry&, const RankedEntry&) = default;
};

struct RankedList {
  std::string query_id;
  std::vector<RankedEntry> entries;  // ascending distance, ties by gallery index

  friend bool operator==(const RankedList&, const RankedList&) = default;
};

RankedList rank_scores(const std::string& query_id, std::span<const GalleryEntry> gallery,
                       std::span<const PairScore> scores);

/// Throws Error(kEmptyGallery) on an empty gallery.
RankedList match_query(const PoseSequence& query, std::span<const GalleryEntry> gallery,
                       const MatchSettings& settings);

inline constexpr std::array<std::size_t, 4> kCmcRanks{1, 5, 10, 20};

struct EvalReport {
  std::map<std::size_t, double> rank_k;  // k -> hit rate
  double mean_ap = 0.0;
  std::vector<double> per_query_ap;
  std::vector<std::size_t> first_hit_rank;  // 1-based

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

/// CMC and mAP over already ranked lists. Relevant gallery entries are those
/// sharing the query's identity. Throws Error(kMissingGroundTruth) when a
/// query identity has no gallery entry.
EvalReport evaluate_ranked(std::span<const RankedList> lists, std::span<const GalleryEntry> gallery);

EvalReport evaluate(std::span<const PoseSequence> queries, std::span<const GalleryEntry> gallery,
                    const MatchSettings& settings);

/// Average precision of one ranked list given relevance flags in ranked
/// order: mean over relevant items of precision at their rank.
double average_precision(const std::vector<bool>& relevant_in_rank_order);

/// Splits sequences by condition tag. An empty gallery_conditions list means
/// every condition other than the query condition.
struct QueryGallerySplit {
  std::vector<PoseSequence> queries;
  std::vector<PoseSequence> gallery;
};

QueryGallerySplit split_by_condition(std::span<const PoseSequence> sequences,
                                     const std::string& query_condition,
                                     const std::vector<std::string>& gallery_conditions = {});

inline constexpr const char* kDefaultQueryCondition = "clothesA-RGB";

}  // namespace posedtw
