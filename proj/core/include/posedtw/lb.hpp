// Copyright 2026 The posedtw Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "posedtw/types.hpp"

namespace posedtw {

/// First, last, largest and smallest value of a norm series.
struct LbFeatures {
  double first = 0.0;
  double last = 0.0;
  double greatest = 0.0;
  double smallest = 0.0;

  friend bool operator==(const LbFeatures&, const LbFeatures&) = default;
};

/// Throws Error(kEmptySequence) on an empty series.
LbFeatures lb_features(std::span<const double> series);
inline LbFeatures lb_features(const NormSeries& s) { return lb_features(s.values); }

/// LB_Kim: the largest absolute difference among the four features. Never
/// exceeds the DTW distance between the underlying sequences.
double lb_kim(const LbFeatures& a, const LbFeatures& b) noexcept;

/// Threshold scale: the distance bound tested against lb_kim is
/// epsilon * max(m, n).
inline double epsilon_scale(std::size_t m, std::size_t n) noexcept {
  return static_cast<double>(m > n ? m : n);
}

/// True when the pair survives the prefilter, i.e. lb < epsilon * scale.
/// epsilon = +inf keeps everything; epsilon = 0 discards everything.
bool passes_lower_bound(double lb, double epsilon, std::size_t m, std::size_t n) noexcept;

struct PrefilterResult {
  std::vector<std::size_t> survivors;  // gallery indices, original order
  std::size_t filtered_count = 0;      // V
};

/// Applies the LB_Kim filter to every gallery sequence.
PrefilterResult prefilter(const PoseSequence& query, std::span<const PoseSequence> gallery,
                          double epsilon);

}  // namespace posedtw
