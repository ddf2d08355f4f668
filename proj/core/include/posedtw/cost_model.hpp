// Copyright 2026 The posedtw Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "posedtw/retrieval.hpp"

namespace posedtw {

enum class Strategy : std::uint8_t {
  kGlobalConstraint = 1,  // GC: warping window
  kLowerBound = 2,        // LB: LB_Kim prefilter
  kEarlyAbandon = 4,      // EA: cumulative-distance abandon
};

/// Subset of {GC, LB, EA}.
class StrategySet {
 public:
  constexpr StrategySet() = default;
  constexpr StrategySet(std::initializer_list<Strategy> list) {
    for (Strategy s : list) bits_ |= static_cast<std::uint8_t>(s);
  }

  static constexpr StrategySet none() { return {}; }
  static constexpr StrategySet all() {
    return {Strategy::kGlobalConstraint, Strategy::kLowerBound, Strategy::kEarlyAbandon};
  }
  static constexpr StrategySet from_bits(std::uint8_t bits) {
    StrategySet s;
    s.bits_ = bits & 7;
    return s;
  }

  [[nodiscard]] constexpr bool contains(Strategy s) const noexcept {
    return (bits_ & static_cast<std::uint8_t>(s)) != 0;
  }
  [[nodiscard]] constexpr std::uint8_t bits() const noexcept { return bits_; }

  /// "none", "GC", "GC+LB+EA", ...
  [[nodiscard]] std::string to_string() const;
  /// Accepts the to_string() form; also "all", "{}" and ',' as separator.
  static StrategySet parse(std::string_view text);

  friend constexpr bool operator==(StrategySet, StrategySet) = default;
  friend constexpr auto operator<=>(StrategySet, StrategySet) = default;

 private:
  std::uint8_t bits_ = 0;
};

/// The five strategy sets the cost analysis reports on.
std::vector<StrategySet> canonical_strategy_sets();

/// Number of cells of the m x n grid outside the warping window.
std::uint64_t s_out(std::size_t m, std::size_t n, double width) noexcept;

/// Closed-form cost for a strategy set with independent factors:
///   none: N*m*n        GC: N*(m*n - S_out)     LB: (N - V)*m*n
///   EA:   N*m*n*k      GC+LB+EA: (N - V)*(m*n - S_out)*k
double predicted_cost(StrategySet strategies, std::uint64_t N, std::uint64_t m, std::uint64_t n,
                      std::uint64_t S_out, std::uint64_t V, double k) noexcept;

/// Match settings with only the named strategies left active.
MatchSettings restrict_to(const MatchSettings& base, StrategySet strategies);

struct CostReport {
  StrategySet strategies;
  std::uint64_t N = 0;             // scored pairs
  std::uint64_t m = 0;             // query length (0 when lengths vary)
  std::uint64_t n = 0;             // gallery length (0 when lengths vary)
  bool uniform_lengths = true;
  std::uint64_t cells_full = 0;    // sum of m_i * n_i
  std::uint64_t cells_in_band = 0; // sum of m_i * n_i - S_out_i under the configured window
  std::uint64_t S_out = 0;         // per pair; only meaningful with uniform lengths
  std::uint64_t V = 0;             // pairs removed by the lower bound
  std::uint64_t abandoned = 0;
  double k = 1.0;                  // mean evaluated / in-band fraction of DTW runs
  std::uint64_t measured_cells = 0;
  std::map<std::string, double> predicted;  // strategy set -> predicted cells
  double wall_seconds = 0.0;       // informational

  [[nodiscard]] double predicted_for(StrategySet s) const;
};

/// Runs one query against the gallery with only `strategies` active. The
/// window, thresholds and worker count come from `settings`.
CostReport measure_run(const PoseSequence& query, std::span<const GalleryEntry> gallery,
                       const MatchSettings& settings, StrategySet strategies);

/// measure_run over several queries, merged into one report.
CostReport measure_workload(std::span<const PoseSequence> queries,
                            std::span<const GalleryEntry> gallery,
                            const MatchSettings& settings, StrategySet strategies);

/// Builds a report from per-pair scores. Every predicted_cost entry uses the
/// report's own V and k.
CostReport build_cost_report(std::span<const std::vector<PairScore>> per_query_scores,
                             std::span<const std::size_t> query_lengths,
                             std::span<const GalleryEntry> gallery, const MatchSettings& settings,
                             StrategySet strategies);

/// measured({GC,LB,EA}) <= each singleton <= measured({}).
struct OrderingVerdict {
  bool holds = false;
  std::string detail;
};

OrderingVerdict check_cost_ordering(const std::map<StrategySet, CostReport>& reports);

}  // namespace posedtw
