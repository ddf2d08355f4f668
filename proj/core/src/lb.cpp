// Copyright 2026 The posedtw Authors
// SPDX-License-Identifier: Apache-2.0

#include "posedtw/lb.hpp"

#include <algorithm>
#include <cmath>

#include "posedtw/errors.hpp"

namespace posedtw {

LbFeatures lb_features(std::span<const double> series) {
  if (series.empty()) fail(ErrorCode::kEmptySequence, "lb_features: empty series");
  const auto [lo, hi] = std::minmax_element(series.begin(), series.end());
  return {series.front(), series.back(), *hi, *lo};
}

double lb_kim(const LbFeatures& a, const LbFeatures& b) noexcept {
  return std::max({std::abs(a.first - b.first), std::abs(a.last - b.last),
                   std::abs(a.greatest - b.greatest), std::abs(a.smallest - b.smallest)});
}

bool passes_lower_bound(double lb, double epsilon, std::size_t m, std::size_t n) noexcept {
  if (std::isinf(epsilon)) return true;
  return lb < epsilon * epsilon_scale(m, n);
}

PrefilterResult prefilter(const PoseSequence& query, std::span<const PoseSequence> gallery,
                          double epsilon) {
  if (!(epsilon >= 0.0)) fail(ErrorCode::kInvalidArgument, "epsilon must be >= 0");
  const LbFeatures q = lb_features(norm_series(query));
  PrefilterResult out;
  for (std::size_t i = 0; i < gallery.size(); ++i) {
    const double lb = lb_kim(q, lb_features(norm_series(gallery[i])));
    if (passes_lower_bound(lb, epsilon, query.size(), gallery[i].size())) {
      out.survivors.push_back(i);
    } else {
      ++out.filtered_count;
    }
  }
  return out;
}

}  // namespace posedtw
