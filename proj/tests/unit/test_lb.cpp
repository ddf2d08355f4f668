// Copyright 2026 The posedtw Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "posedtw/dtw.hpp"
#include "posedtw/errors.hpp"
#include "posedtw/lb.hpp"

using namespace posedtw;
using namespace posedtw::testing;

namespace {

LbFeatures scan_features(const std::vector<double>& s) {
  LbFeatures f{s.front(), s.back(), s.front(), s.front()};
  for (double v : s) {
    if (v > f.greatest) f.greatest = v;
    if (v < f.smallest) f.smallest = v;
  }
  return f;
}

}  // namespace

TEST_SUITE("lb") {

TEST_CASE("lb_features reads the four order statistics") {
  const std::vector<double> s{1, 2, 3};
  CHECK(lb_features(s) == LbFeatures{1, 3, 3, 1});
  const std::vector<double> c(7, 2.5);
  CHECK(lb_features(c) == LbFeatures{2.5, 2.5, 2.5, 2.5});
  std::mt19937_64 rng(40);
  for (int rep = 0; rep < 200; ++rep) {
    const auto r = random_series(rng, 1 + rep % 50);
    CHECK(lb_features(r) == scan_features(r));
  }
  CHECK_THROWS_AS(lb_features(std::vector<double>{}), Error);
}

TEST_CASE("lb_kim examples") {
  const std::vector<double> q{1, 2, 3};
  const std::vector<double> l{2, 2, 5};
  CHECK(lb_kim(lb_features(q), lb_features(l)) == 2.0);
  CHECK(lb_kim(lb_features(q), lb_features(q)) == 0.0);
  std::vector<double> shifted = q;
  for (double& v : shifted) v += 0.75;
  CHECK(lb_kim(lb_features(q), lb_features(shifted)) == doctest::Approx(0.75));
}

TEST_CASE("lb_kim lower-bounds scalar DTW") {
  std::mt19937_64 rng(41);
  for (int rep = 0; rep < 500; ++rep) {
    const auto q = random_series(rng, 1 + rep % 30, 0.0, 4.0);
    const auto l = random_series(rng, 1 + (rep * 7) % 33, 0.0, 4.0);
    const double d = full_matrix_dtw(q.size(), l.size(), [&](std::size_t i, std::size_t j) {
      return std::abs(q[i] - l[j]);
    });
    CHECK(lb_kim(lb_features(q), lb_features(l)) <= d + 1e-12);
  }
}

TEST_CASE("scalar DTW on norms lower-bounds multivariate DTW") {
  std::mt19937_64 rng(42);
  for (int rep = 0; rep < 200; ++rep) {
    const auto a = random_frames(rng, 2 + rep % 15);
    const auto b = random_frames(rng, 2 + rep % 17);
    const NormSeries na = norm_series(std::span<const KeypointFrame>(a));
    const NormSeries nb = norm_series(std::span<const KeypointFrame>(b));
    const double scalar = distance_or_inf(dtw_distance(std::span<const double>(na.values),
                                                       std::span<const double>(nb.values),
                                                       DtwConfig::unconstrained()));
    const double multi = distance_or_inf(dtw_distance(std::span<const KeypointFrame>(a),
                                                      std::span<const KeypointFrame>(b),
                                                      DtwConfig::unconstrained()));
    CHECK(scalar <= multi + 1e-12);
  }
}

TEST_CASE("passes_lower_bound threshold semantics") {
  CHECK(passes_lower_bound(1e9, kInfinity, 4, 5));
  CHECK_FALSE(passes_lower_bound(0.0, 0.0, 4, 5));
  CHECK(passes_lower_bound(3.9, 0.8, 4, 5));   // 0.8 * 5 = 4
  CHECK_FALSE(passes_lower_bound(4.0, 0.8, 4, 5));
  CHECK(epsilon_scale(40, 30) == 40.0);
}

TEST_CASE("prefilter: disabled, total and sound") {
  std::mt19937_64 rng(43);
  const PoseSequence q = make_sequence("q", random_frames(rng, 10));
  std::vector<PoseSequence> gallery;
  for (int i = 0; i < 30; ++i) {
    gallery.push_back(make_sequence("g" + std::to_string(i), random_frames(rng, 6 + i % 9, 1.0 + i * 0.1)));
  }
  const auto all = prefilter(q, gallery, kInfinity);
  CHECK(all.survivors.size() == gallery.size());
  CHECK(all.filtered_count == 0);

  const auto none = prefilter(q, gallery, 0.0);
  CHECK(none.survivors.empty());
  CHECK(none.filtered_count == gallery.size());

  for (double eps : {0.05, 0.1, 0.2, 0.4}) {
    const auto r = prefilter(q, gallery, eps);
    CHECK(r.survivors.size() + r.filtered_count == gallery.size());
    CHECK(std::is_sorted(r.survivors.begin(), r.survivors.end()));
    for (std::size_t i = 0; i < gallery.size(); ++i) {
      if (std::find(r.survivors.begin(), r.survivors.end(), i) != r.survivors.end()) continue;
      const double d = distance_or_inf(dtw_distance_unconstrained(q, gallery[i]));
      CHECK(d >= eps * epsilon_scale(q.size(), gallery[i].size()));
    }
  }
  CHECK_THROWS_AS(prefilter(q, gallery, -1.0), Error);
}

TEST_CASE("filtered count is non-increasing in epsilon") {
  std::mt19937_64 rng(44);
  const PoseSequence q = make_sequence("q", random_walk_frames(rng, 12));
  std::vector<PoseSequence> gallery;
  for (int i = 0; i < 40; ++i) {
    gallery.push_back(make_sequence("g", random_walk_frames(rng, 8 + i % 10)));
  }
  std::size_t prev = gallery.size() + 1;
  for (double eps = 0.0; eps <= 1.0; eps += 0.02) {
    const std::size_t v = prefilter(q, gallery, eps).filtered_count;
    CHECK(v <= prev);
    prev = v;
  }
}

}  // TEST_SUITE
