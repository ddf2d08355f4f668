// Copyright 2026 The posedtw Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "posedtw/errors.hpp"
#include "posedtw/types.hpp"

namespace posedtw {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct WindowRatio {
  double ratio = 1.0;  // w = ratio * max(m, n), ratio in [0, 1]
};

struct WindowWidth {
  double width = 0.0;  // absolute half-width of the band, >= 0
};

struct DtwConfig {
  // std::monostate means no global constraint.
  std::variant<std::monostate, WindowRatio, WindowWidth> window;
  // Early abandon threshold; +inf disables abandoning.
  double abandon_threshold = kInfinity;
  // Keep the full cost matrix and recover the warping path.
  bool keep_path = false;

  static DtwConfig unconstrained() { return {}; }
  static DtwConfig with_width(double width, double upsilon = kInfinity);
  static DtwConfig with_ratio(double ratio, double upsilon = kInfinity);

  [[nodiscard]] bool banded() const noexcept {
    return !std::holds_alternative<std::monostate>(window);
  }
  [[nodiscard]] bool early_abandon() const noexcept {
    return std::isfinite(abandon_threshold);
  }
  /// Band half-width for an m x n problem, or nullopt when unconstrained.
  [[nodiscard]] std::optional<double> width_for(std::size_t m, std::size_t n) const;

  /// Throws Error(kInvalidArgument) on a ratio outside [0,1], a negative or
  /// NaN width, or a non-positive abandon threshold.
  void validate() const;
};

/// One cell of a warping path, 0-based: (query index, reference index).
struct WarpStep {
  std::size_t i = 0;
  std::size_t j = 0;

  friend bool operator==(const WarpStep&, const WarpStep&) = default;
};

struct DtwDistance {
  double distance = 0.0;  // +inf when the band admits no path
  std::vector<WarpStep> path;
  std::uint64_t cells_evaluated = 0;
};

struct DtwAbandoned {
  std::uint64_t cells_evaluated = 0;
  std::size_t columns_completed = 0;
};

using DtwOutcome = std::variant<DtwDistance, DtwAbandoned>;

[[nodiscard]] inline bool is_abandoned(const DtwOutcome& o) noexcept {
  return std::holds_alternative<DtwAbandoned>(o);
}
[[nodiscard]] inline std::uint64_t cells_evaluated(const DtwOutcome& o) noexcept {
  return std::visit([](const auto& v) { return v.cells_evaluated; }, o);
}
/// The distance, or +inf for an abandoned match.
[[nodiscard]] inline double distance_or_inf(const DtwOutcome& o) noexcept {
  if (const auto* d = std::get_if<DtwDistance>(&o)) return d->distance;
  return kInfinity;
}

/// Warping-window predicate over the real plane with slope n/m:
///   y - (n/m)x + w >= 0,  y - (n/m)x - w <= 0,  0 <= x <= m,  0 <= y <= n.
bool window_contains(double x, double y, std::size_t m, std::size_t n, double w) noexcept;

/// Inclusive range [lo, hi] of 1-based rows y with window_contains(x, y, ...)
/// for the 1-based column x. Empty when lo > hi.
struct BandRange {
  std::size_t lo = 1;
  std::size_t hi = 0;

  [[nodiscard]] bool empty() const noexcept { return lo > hi; }
  [[nodiscard]] std::size_t size() const noexcept { return empty() ? 0 : hi - lo + 1; }
};

/// Row range of column x. width == nullopt means the whole column.
BandRange band_column(std::size_t x, std::size_t m, std::size_t n,
                      std::optional<double> width) noexcept;

/// Number of grid cells in [1,m] x [1,n] inside the band.
std::uint64_t band_cell_count(std::size_t m, std::size_t n, std::optional<double> width) noexcept;

/// Banded DTW over an m x n grid with an arbitrary non-negative cell cost
/// cost(i, j) (0-based). Symmetric step pattern {(1,0),(0,1),(1,1)}, unit
/// weights, summed costs. Abandons once a completed column's minimum
/// cumulative cost, or the final distance, reaches the abandon threshold.
template <typename CellCost>
DtwOutcome dtw_grid(std::size_t m, std::size_t n, CellCost&& cost, const DtwConfig& cfg) {
  if (m == 0 || n == 0) fail(ErrorCode::kEmptySequence, "dtw: empty sequence");
  cfg.validate();

  const std::optional<double> width = cfg.width_for(m, n);
  const bool abandon = cfg.early_abandon();
  const double upsilon = cfg.abandon_threshold;

  // Band columns store cumulative costs for rows [range.lo, range.hi].
  struct Column {
    BandRange range;
    std::vector<double> cost;

    [[nodiscard]] double at(std::size_t y) const noexcept {
      if (y < range.lo || y > range.hi) return kInfinity;
      return cost[y - range.lo];
    }
  };

  std::vector<Column> matrix;  // only filled when keep_path
  if (cfg.keep_path) matrix.reserve(m);

  Column prev{BandRange{1, 0}, {}};
  Column cur;
  std::uint64_t cells = 0;

  for (std::size_t x = 1; x <= m; ++x) {
    cur.range = band_column(x, m, n, width);
    cur.cost.assign(cur.range.size(), kInfinity);
    double column_min = kInfinity;
    for (std::size_t y = cur.range.lo; y <= cur.range.hi; ++y) {
      double best;
      if (x == 1 && y == 1) {
        best = 0.0;
      } else {
        const double diag = prev.at(y - 1);
        const double left = prev.at(y);
        const double down = y > cur.range.lo ? cur.cost[y - 1 - cur.range.lo] : kInfinity;
        best = std::min({diag, left, down});
      }
      const double c = best + cost(x - 1, y - 1);
      cur.cost[y - cur.range.lo] = c;
      column_min = std::min(column_min, c);
      ++cells;
    }
    if (abandon && column_min >= upsilon) {
      return DtwAbandoned{cells, x};
    }
    if (cfg.keep_path) matrix.push_back(cur);
    std::swap(prev, cur);
  }

  const double d = prev.at(n);
  if (abandon && d >= upsilon) return DtwAbandoned{cells, m};

  DtwDistance result{d, {}, cells};
  if (cfg.keep_path && std::isfinite(d)) {
    std::size_t x = m;
    std::size_t y = n;
    result.path.push_back({x - 1, y - 1});
    while (x > 1 || y > 1) {
      const double diag = x > 1 && y > 1 ? matrix[x - 2].at(y - 1) : kInfinity;
      const double left = x > 1 ? matrix[x - 2].at(y) : kInfinity;
      const double down = y > 1 ? matrix[x - 1].at(y - 1) : kInfinity;
      if (diag <= left && diag <= down) {
        --x;
        --y;
      } else if (left <= down) {
        --x;
      } else {
        --y;
      }
      result.path.push_back({x - 1, y - 1});
    }
    std::reverse(result.path.begin(), result.path.end());
  }
  return result;
}

/// Multivariate DTW over keypoint frames with frame_distance as the element
/// metric. Both inputs must be fully valid.
DtwOutcome dtw_distance(std::span<const KeypointFrame> query,
                        std::span<const KeypointFrame> reference, const DtwConfig& cfg);
DtwOutcome dtw_distance(const PoseSequence& query, const PoseSequence& reference,
                        const DtwConfig& cfg);
DtwOutcome dtw_distance_unconstrained(const PoseSequence& query, const PoseSequence& reference);

/// Precomputed feature vectors; the retrieval hot path uses these.
DtwOutcome dtw_distance(std::span<const FeatureVector> query,
                        std::span<const FeatureVector> reference, const DtwConfig& cfg);

/// Scalar DTW with |a - b| as the element metric.
DtwOutcome dtw_distance(std::span<const double> query, std::span<const double> reference,
                        const DtwConfig& cfg);

}  // namespace posedtw
