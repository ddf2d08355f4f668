// Copyright 2026 The posedtw Authors
// SPDX-License-Identifier: Apache-2.0

#include "posedtw/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "parallel.hpp"
#include "posedtw/errors.hpp"

namespace posedtw {

GalleryEntry GalleryEntry::from(PoseSequence sequence) {
  if (!sequence.fully_valid()) {
    fail(ErrorCode::kInvalidArgument,
         "gallery sequence '" + sequence.id() + "' has unimputed joints");
  }
  std::vector<FeatureVector> features;
  features.reserve(sequence.size());
  for (const KeypointFrame& f : sequence.frames()) features.push_back(f.features());
  NormSeries norms = norm_series(sequence);
  const LbFeatures lb = lb_features(norms);
  return GalleryEntry{std::move(sequence), std::move(features), std::move(norms), lb};
}

std::vector<GalleryEntry> make_gallery(std::span<const PoseSequence> sequences) {
  std::vector<GalleryEntry> out;
  out.reserve(sequences.size());
  for (const PoseSequence& s : sequences) out.push_back(GalleryEntry::from(s));
  return out;
}

MatchSettings MatchSettings::exhaustive() {
  MatchSettings s;
  s.dtw = DtwConfig::unconstrained();
  s.epsilon = kInfinity;
  return s;
}

std::string_view to_string(MatchStatus status) noexcept {
  switch (status) {
    case MatchStatus::kMatched: return "matched";
    case MatchStatus::kFiltered: return "filtered";
    case MatchStatus::kAbandoned: return "abandoned";
  }
  return "unknown";
}

std::vector<PairScore> score_gallery(const PoseSequence& query,
                                     std::span<const GalleryEntry> gallery,
                                     const MatchSettings& settings) {
  if (gallery.empty()) fail(ErrorCode::kEmptyGallery, "gallery is empty");
  if (!(settings.epsilon >= 0.0)) fail(ErrorCode::kInvalidArgument, "epsilon must be >= 0");
  settings.dtw.validate();

  const GalleryEntry probe = GalleryEntry::from(query);
  DtwConfig cfg = settings.dtw;
  cfg.keep_path = false;

  std::vector<PairScore> scores(gallery.size());
  detail::parallel_for(gallery.size(), settings.workers, [&](std::size_t i) {
    const GalleryEntry& entry = gallery[i];
    PairScore& s = scores[i];
    const std::size_t m = probe.features.size();
    const std::size_t n = entry.features.size();
    s.lower_bound = lb_kim(probe.lb, entry.lb);
    s.cells_in_band = band_cell_count(m, n, cfg.width_for(m, n));
    if (!passes_lower_bound(s.lower_bound, settings.epsilon, m, n)) {
      s.status = MatchStatus::kFiltered;
      return;
    }
    const DtwOutcome outcome = dtw_distance(std::span<const FeatureVector>(probe.features),
                                            std::span<const FeatureVector>(entry.features), cfg);
    s.cells_evaluated = cells_evaluated(outcome);
    s.distance = distance_or_inf(outcome);
    s.status = is_abandoned(outcome) ? MatchStatus::kAbandoned : MatchStatus::kMatched;
  });
  return scores;
}

RankedList rank_scores(const std::string& query_id, std::span<const GalleryEntry> gallery,
                       std::span<const PairScore> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Stable: equal distances (including +inf) keep gallery order.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a].distance < scores[b].distance;
  });
  RankedList out{query_id, {}};
  out.entries.reserve(order.size());
  for (std::size_t i : order) {
    out.entries.push_back({gallery[i].sequence.id(), i, scores[i].distance, scores[i].status});
  }
  return out;
}

RankedList match_query(const PoseSequence& query, std::span<const GalleryEntry> gallery,
                       const MatchSettings& settings) {
  const auto scores = score_gallery(query, gallery, settings);
  return rank_scores(query.id(), gallery, scores);
}

double average_precision(const std::vector<bool>& relevant_in_rank_order) {
  std::size_t hits = 0;
  double sum = 0.0;
  for (std::size_t r = 0; r < relevant_in_rank_order.size(); ++r) {
    if (!relevant_in_rank_order[r]) continue;
    ++hits;
    sum += static_cast<double>(hits) / static_cast<double>(r + 1);
  }
  return hits == 0 ? 0.0 : sum / static_cast<double>(hits);
}

EvalReport evaluate_ranked(std::span<const RankedList> lists,
                           std::span<const GalleryEntry> gallery) {
  std::set<std::string> gallery_ids;
  for (const GalleryEntry& g : gallery) gallery_ids.insert(g.sequence.id());
  std::string missing;
  for (const RankedList& l : lists) {
    if (!gallery_ids.contains(l.query_id)) missing += (missing.empty() ? "" : ", ") + l.query_id;
  }
  if (!missing.empty()) {
    fail(ErrorCode::kMissingGroundTruth, "query identities absent from gallery: " + missing);
  }

  EvalReport report;
  std::map<std::size_t, std::size_t> hits;
  for (std::size_t k : kCmcRanks) hits[k] = 0;
  for (const RankedList& l : lists) {
    std::vector<bool> relevant;
    relevant.reserve(l.entries.size());
    for (const RankedEntry& e : l.entries) relevant.push_back(e.gallery_id == l.query_id);
    const auto first = std::find(relevant.begin(), relevant.end(), true);
    const auto first_rank = static_cast<std::size_t>(first - relevant.begin()) + 1;
    report.first_hit_rank.push_back(first_rank);
    for (std::size_t k : kCmcRanks) {
      if (first_rank <= k) ++hits[k];
    }
    report.per_query_ap.push_back(average_precision(relevant));
  }
  const double q = static_cast<double>(lists.size());
  for (std::size_t k : kCmcRanks) {
    report.rank_k[k] = lists.empty() ? 0.0 : static_cast<double>(hits[k]) / q;
  }
  report.mean_ap = lists.empty() ? 0.0
                                 : std::accumulate(report.per_query_ap.begin(),
                                                   report.per_query_ap.end(), 0.0) /
                                       q;
  return report;
}

EvalReport evaluate(std::span<const PoseSequence> queries, std::span<const GalleryEntry> gallery,
                    const MatchSettings& settings) {
  std::vector<RankedList> lists;
  lists.reserve(queries.size());
  for (const PoseSequence& q : queries) lists.push_back(match_query(q, gallery, settings));
  return evaluate_ranked(lists, gallery);
}

QueryGallerySplit split_by_condition(std::span<const PoseSequence> sequences,
                                     const std::string& query_condition,
                                     const std::vector<std::string>& gallery_conditions) {
  QueryGallerySplit out;
  for (const PoseSequence& s : sequences) {
    if (s.condition_tag() == query_condition) {
      out.queries.push_back(s);
    } else if (gallery_conditions.empty() ||
               std::find(gallery_conditions.begin(), gallery_conditions.end(),
                         s.condition_tag()) != gallery_conditions.end()) {
      out.gallery.push_back(s);
    }
  }
  return out;
}

}  // namespace posedtw
