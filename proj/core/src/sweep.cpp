// Copyright 2026 The posedtw Authors
// SPDX-License-Identifier: Apache-2.0

#include "posedtw/sweep.hpp"

#include "posedtw/errors.hpp"

namespace posedtw {

MatchSettings SweepPoint::settings(unsigned workers) const {
  MatchSettings s;
  s.dtw = width ? DtwConfig::with_width(*width) : DtwConfig::unconstrained();
  s.dtw.abandon_threshold = upsilon.value_or(kInfinity);
  s.epsilon = epsilon.value_or(kInfinity);
  s.workers = workers;
  return s;
}

StrategySet SweepPoint::strategies() const {
  std::uint8_t bits = 0;
  if (width) bits |= static_cast<std::uint8_t>(Strategy::kGlobalConstraint);
  if (epsilon) bits |= static_cast<std::uint8_t>(Strategy::kLowerBound);
  if (upsilon) bits |= static_cast<std::uint8_t>(Strategy::kEarlyAbandon);
  return StrategySet::from_bits(bits);
}

std::vector<SweepPoint> cartesian_points(const SweepGrid& grid) {
  std::vector<SweepPoint> out;
  for (double w : grid.widths) {
    for (double u : grid.upsilons) {
      for (double e : grid.epsilons) out.push_back({"grid", w, u, e});
    }
  }
  return out;
}

std::vector<SweepPoint> axis_points(const SweepGrid& grid, double fixed_width,
                                    const std::vector<double>& combo_upsilons,
                                    const std::vector<double>& combo_epsilons) {
  std::vector<SweepPoint> out;
  for (double w : grid.widths) out.push_back({"w", w, std::nullopt, std::nullopt});
  for (double u : grid.upsilons) out.push_back({"upsilon", std::nullopt, u, std::nullopt});
  for (double e : grid.epsilons) out.push_back({"epsilon", std::nullopt, std::nullopt, e});
  for (double u : combo_upsilons) {
    for (double e : combo_epsilons) out.push_back({"combination", fixed_width, u, e});
  }
  return out;
}

std::vector<SweepPoint> reference_sweep_points() {
  const SweepGrid grid{{10, 20, 30, 40}, {3, 4, 5, 6, 7, 8}, {0.2, 0.4, 0.6, 0.8}};
  return axis_points(grid, 30.0, {6, 7, 8}, {0.6, 0.8});
}

std::vector<SweepRow> sweep_hyperparameters(std::span<const SweepPoint> points,
                                            std::span<const PoseSequence> queries,
                                            std::span<const GalleryEntry> gallery,
                                            unsigned workers) {
  if (points.empty()) fail(ErrorCode::kInvalidArgument, "sweep: no hyperparameter points");
  std::vector<std::size_t> lengths;
  for (const PoseSequence& q : queries) lengths.push_back(q.size());

  std::vector<SweepRow> rows;
  rows.reserve(points.size());
  for (const SweepPoint& p : points) {
    const MatchSettings settings = p.settings(workers);
    std::vector<std::vector<PairScore>> scores;
    std::vector<RankedList> lists;
    for (const PoseSequence& q : queries) {
      scores.push_back(score_gallery(q, gallery, settings));
      lists.push_back(rank_scores(q.id(), gallery, scores.back()));
    }
    rows.push_back({p, evaluate_ranked(lists, gallery),
                    build_cost_report(scores, lengths, gallery, settings, p.strategies())});
  }
  return rows;
}

}  // namespace posedtw
