// Copyright 2026 The posedtw Authors
// SPDX-License-Identifier: Apache-2.0

#include "posedtw/dtw.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace posedtw {

DtwConfig DtwConfig::with_width(double width, double upsilon) {
  DtwConfig cfg;
  cfg.window = WindowWidth{width};
  cfg.abandon_threshold = upsilon;
  return cfg;
}

DtwConfig DtwConfig::with_ratio(double ratio, double upsilon) {
  DtwConfig cfg;
  cfg.window = WindowRatio{ratio};
  cfg.abandon_threshold = upsilon;
  return cfg;
}

std::optional<double> DtwConfig::width_for(std::size_t m, std::size_t n) const {
  if (const auto* r = std::get_if<WindowRatio>(&window)) {
    return r->ratio * static_cast<double>(std::max(m, n));
  }
  if (const auto* w = std::get_if<WindowWidth>(&window)) return w->width;
  return std::nullopt;
}

void DtwConfig::validate() const {
  if (const auto* r = std::get_if<WindowRatio>(&window)) {
    if (!(r->ratio >= 0.0 && r->ratio <= 1.0)) {
      fail(ErrorCode::kInvalidArgument, "window ratio must lie in [0,1]");
    }
  }
  if (const auto* w = std::get_if<WindowWidth>(&window)) {
    if (!(w->width >= 0.0)) fail(ErrorCode::kInvalidArgument, "window width must be >= 0");
  }
  if (!(abandon_threshold > 0.0)) {
    fail(ErrorCode::kInvalidArgument, "abandon threshold must be > 0");
  }
}

bool window_contains(double x, double y, std::size_t m, std::size_t n, double w) noexcept {
  const double md = static_cast<double>(m);
  const double nd = static_cast<double>(n);
  // y - (n/m)x in [-w, w], multiplied through by m so integer cells on the
  // band edge are decided without rounding the slope.
  const double offset = y * md - nd * x;
  const double reach = w * md;
  return offset + reach >= 0.0 && offset - reach <= 0.0 && x >= 0.0 && x <= md && y >= 0.0 &&
         y <= nd;
}

BandRange band_column(std::size_t x, std::size_t m, std::size_t n,
                      std::optional<double> width) noexcept {
  if (x < 1 || x > m || n == 0) return {1, 0};
  // Every grid cell satisfies both inequalities once w >= max(m, n).
  if (!width || *width >= static_cast<double>(std::max(m, n))) return {1, n};

  const double w = *width;
  const double xd = static_cast<double>(x);
  const double nd = static_cast<double>(n);
  const double centre = nd / static_cast<double>(m) * xd;
  auto inside = [&](std::size_t y) { return window_contains(xd, static_cast<double>(y), m, n, w); };

  // Start one row below the analytic edge so rounding can only move us up.
  auto lo = static_cast<std::size_t>(std::clamp(std::ceil(centre - w) - 1.0, 1.0, nd));
  while (lo <= n && !inside(lo)) ++lo;
  if (lo > n) return {1, 0};
  auto hi = static_cast<std::size_t>(
      std::clamp(std::floor(centre + w) + 1.0, static_cast<double>(lo), nd));
  while (hi > lo && !inside(hi)) --hi;
  return {lo, hi};
}

std::uint64_t band_cell_count(std::size_t m, std::size_t n, std::optional<double> width) noexcept {
  std::uint64_t count = 0;
  for (std::size_t x = 1; x <= m; ++x) count += band_column(x, m, n, width).size();
  return count;
}

namespace {

std::vector<FeatureVector> to_features(std::span<const KeypointFrame> frames, const char* which) {
  std::vector<FeatureVector> out;
  out.reserve(frames.size());
  for (const KeypointFrame& f : frames) {
    if (!f.fully_valid()) {
      fail(ErrorCode::kInvalidArgument,
           std::string("dtw: ") + which + " sequence has unimputed joints");
    }
    out.push_back(f.features());
  }
  return out;
}

}  // namespace

DtwOutcome dtw_distance(std::span<const FeatureVector> query,
                        std::span<const FeatureVector> reference, const DtwConfig& cfg) {
  return dtw_grid(
      query.size(), reference.size(),
      [&](std::size_t i, std::size_t j) { return feature_distance(query[i], reference[j]); }, cfg);
}

DtwOutcome dtw_distance(std::span<const KeypointFrame> query,
                        std::span<const KeypointFrame> reference, const DtwConfig& cfg) {
  if (query.empty() || reference.empty()) fail(ErrorCode::kEmptySequence, "dtw: empty sequence");
  const auto q = to_features(query, "query");
  const auto r = to_features(reference, "reference");
  return dtw_distance(std::span<const FeatureVector>(q), std::span<const FeatureVector>(r), cfg);
}

DtwOutcome dtw_distance(const PoseSequence& query, const PoseSequence& reference,
                        const DtwConfig& cfg) {
  return dtw_distance(query.frames(), reference.frames(), cfg);
}

DtwOutcome dtw_distance_unconstrained(const PoseSequence& query, const PoseSequence& reference) {
  return dtw_distance(query, reference, DtwConfig::unconstrained());
}

DtwOutcome dtw_distance(std::span<const double> query, std::span<const double> reference,
                        const DtwConfig& cfg) {
  return dtw_grid(
      query.size(), reference.size(),
      [&](std::size_t i, std::size_t j) { return std::abs(query[i] - reference[j]); }, cfg);
}

}  // namespace posedtw
