// Copyright 2026 The posedtw Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "posedtw/cost_model.hpp"
#include "posedtw/retrieval.hpp"

namespace posedtw {

/// One hyperparameter combination. An unset field disables that strategy.
struct SweepPoint {
  std::string group;
  std::optional<double> width;
  std::optional<double> upsilon;
  std::optional<double> epsilon;

  [[nodiscard]] MatchSettings settings(unsigned workers = 1) const;
  [[nodiscard]] StrategySet strategies() const;
};

struct SweepGrid {
  std::vector<double> widths;
  std::vector<double> upsilons;
  std::vector<double> epsilons;
};

/// Full Cartesian product, widths outermost.
std::vector<SweepPoint> cartesian_points(const SweepGrid& grid);

/// One-axis-at-a-time design: each axis swept with the other two disabled,
/// followed by w fixed at `fixed_width` crossed with the given upsilon and
/// epsilon combinations.
std::vector<SweepPoint> axis_points(const SweepGrid& grid, double fixed_width,
                                    const std::vector<double>& combo_upsilons,
                                    const std::vector<double>& combo_epsilons);

/// w in {10,20,30,40}, upsilon in {3..8}, epsilon in {0.2,0.4,0.6,0.8}
/// one axis at a time, then w=30 with upsilon in {6,7,8} x epsilon in
/// {0.6,0.8}: 4 + 6 + 4 + 6 = 20 points.
std::vector<SweepPoint> reference_sweep_points();

struct SweepRow {
  SweepPoint point;
  EvalReport eval;
  CostReport cost;
};

/// Throws Error(kInvalidArgument) on an empty point list.
std::vector<SweepRow> sweep_hyperparameters(std::span<const SweepPoint> points,
                                            std::span<const PoseSequence> queries,
                                            std::span<const GalleryEntry> gallery,
                                            unsigned workers = 1);

}  // namespace posedtw
