// Copyright 2026 The posedtw Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "posedtw/errors.hpp"
#include "posedtw/types.hpp"

using namespace posedtw;
using namespace posedtw::testing;

namespace {

RawKeypointFrame upright_raw(double scale = 1.0, Point2 offset = {0.0, 0.0}) {
  RawKeypointFrame raw;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-60.0, 60.0);
  for (RawJoint& j : raw.joints) j = {u(rng), u(rng) + 150.0, 0.9};
  raw.joints[index(CocoJoint::kLeftHip)] = {100, 200, 0.9};
  raw.joints[index(CocoJoint::kRightHip)] = {120, 200, 0.9};
  raw.joints[index(CocoJoint::kLeftShoulder)] = {100, 100, 0.9};
  raw.joints[index(CocoJoint::kRightShoulder)] = {120, 100, 0.9};
  for (RawJoint& j : raw.joints) {
    j.x = scale * j.x + offset.x;
    j.y = scale * j.y + offset.y;
  }
  return raw;
}

RawKeypointFrame to_raw(const KeypointFrame& f) {
  RawKeypointFrame raw;
  for (std::size_t j = 0; j < kBodyJointCount; ++j) {
    raw.joints[j + kFirstBodyCocoIndex] = {f.joints[j].x, f.joints[j].y, 1.0};
  }
  raw.frame_index = f.frame_index;
  return raw;
}

Point2 mid(const KeypointFrame& f, BodyJoint a, BodyJoint b) {
  const Point2 p = f.joints[index(a)];
  const Point2 q = f.joints[index(b)];
  return {(p.x + q.x) / 2.0, (p.y + q.y) / 2.0};
}

void check_error(ErrorCode code, auto&& fn) {
  try {
    fn();
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == code);
  }
}

}  // namespace

TEST_SUITE("timeseries") {

TEST_CASE("normalize_frame maps hips to the origin and shoulders to unit distance") {
  const KeypointFrame f = normalize_frame(upright_raw());
  const Point2 hip = mid(f, BodyJoint::kLeftHip, BodyJoint::kRightHip);
  const Point2 shoulder = mid(f, BodyJoint::kLeftShoulder, BodyJoint::kRightShoulder);
  CHECK(hip.x == doctest::Approx(0.0));
  CHECK(hip.y == doctest::Approx(0.0));
  // Hand-applied affine map: subtract (110, 200), divide by torso length 100.
  CHECK(shoulder.x == doctest::Approx(0.0));
  CHECK(shoulder.y == doctest::Approx(-1.0));
  CHECK(f.joints[index(BodyJoint::kLeftShoulder)].x == doctest::Approx(-0.1));
  CHECK(f.fully_valid());
}

TEST_CASE("normalize_frame leaves an already normalized frame unchanged") {
  RawKeypointFrame raw;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (RawJoint& j : raw.joints) j = {u(rng), u(rng), 1.0};
  raw.joints[index(CocoJoint::kLeftHip)] = {-0.2, 0.0, 1.0};
  raw.joints[index(CocoJoint::kRightHip)] = {0.2, 0.0, 1.0};
  raw.joints[index(CocoJoint::kLeftShoulder)] = {-0.3, -1.0, 1.0};
  raw.joints[index(CocoJoint::kRightShoulder)] = {0.3, -1.0, 1.0};
  const KeypointFrame f = normalize_frame(raw);
  for (std::size_t j = 0; j < kBodyJointCount; ++j) {
    CHECK(f.joints[j].x == doctest::Approx(raw.joints[j + kFirstBodyCocoIndex].x));
    CHECK(f.joints[j].y == doctest::Approx(raw.joints[j + kFirstBodyCocoIndex].y));
  }
}

TEST_CASE("normalize_frame rejects a frame collapsed to a point") {
  RawKeypointFrame raw;
  for (RawJoint& j : raw.joints) j = {50.0, 50.0, 1.0};
  check_error(ErrorCode::kDegenerateFrame, [&] { (void)normalize_frame(raw); });
}

TEST_CASE("normalize_frame rejects low-confidence anchors and flags other joints") {
  RawKeypointFrame raw = upright_raw();
  raw.joints[index(CocoJoint::kLeftWrist)].confidence = 0.1;
  raw.joints[index(CocoJoint::kNose)].confidence = 0.0;  // facial joints are ignored
  const KeypointFrame f = normalize_frame(raw);
  CHECK_FALSE(f.valid[index(BodyJoint::kLeftWrist)]);
  CHECK(f.valid[index(BodyJoint::kRightWrist)]);

  raw.joints[index(CocoJoint::kRightHip)].confidence = 0.29;
  check_error(ErrorCode::kDegenerateFrame, [&] { (void)normalize_frame(raw); });
  CHECK_NOTHROW((void)normalize_frame(raw, 0.2));
}

TEST_CASE("normalize_frame validates its input") {
  RawKeypointFrame raw = upright_raw();
  raw.joints[3].confidence = 1.5;
  check_error(ErrorCode::kInvalidArgument, [&] { (void)normalize_frame(raw); });
  raw = upright_raw();
  raw.joints[0].x = std::nan("");
  check_error(ErrorCode::kInvalidArgument, [&] { (void)normalize_frame(raw); });
  check_error(ErrorCode::kInvalidArgument, [&] { (void)normalize_frame(upright_raw(), 1.5); });
}

TEST_CASE("normalize_frame is idempotent and invariant to translation and scale") {
  const KeypointFrame base = normalize_frame(upright_raw());
  const KeypointFrame again = normalize_frame(to_raw(base));
  for (double s : {0.5, 2.0, 13.7}) {
    const KeypointFrame moved = normalize_frame(upright_raw(s, {-40.0, 900.0}));
    for (std::size_t j = 0; j < kBodyJointCount; ++j) {
      CHECK(moved.joints[j].x == doctest::Approx(base.joints[j].x).epsilon(1e-12));
      CHECK(moved.joints[j].y == doctest::Approx(base.joints[j].y).epsilon(1e-12));
    }
  }
  for (std::size_t j = 0; j < kBodyJointCount; ++j) {
    CHECK(again.joints[j].x == doctest::Approx(base.joints[j].x).epsilon(1e-12));
    CHECK(again.joints[j].y == doctest::Approx(base.joints[j].y).epsilon(1e-12));
  }
}

TEST_CASE("impute_sequence interpolates linearly in frame time") {
  std::mt19937_64 rng(11);
  auto frames = random_frames(rng, 3);
  frames[0].joints[4] = {0.0, 0.0};
  frames[2].joints[4] = {1.0, -2.0};
  frames[1].valid[4] = false;
  const PoseSequence out = impute_sequence(make_sequence("a", frames));
  CHECK(out.frames()[1].joints[4].x == doctest::Approx(0.5));
  CHECK(out.frames()[1].joints[4].y == doctest::Approx(-1.0));
  CHECK(out.fully_valid());
}

TEST_CASE("impute_sequence uses frame indices, not positions") {
  std::mt19937_64 rng(12);
  auto frames = random_frames(rng, 3);
  frames[0].frame_index = 0;
  frames[1].frame_index = 1;
  frames[2].frame_index = 4;
  frames[0].joints[0] = {0.0, 0.0};
  frames[2].joints[0] = {4.0, 8.0};
  frames[1].valid[0] = false;
  const PoseSequence out = impute_sequence(make_sequence("a", frames));
  CHECK(out.frames()[1].joints[0].x == doctest::Approx(1.0));
  CHECK(out.frames()[1].joints[0].y == doctest::Approx(2.0));
}

TEST_CASE("impute_sequence holds end values constant") {
  std::mt19937_64 rng(13);
  auto frames = random_frames(rng, 5);
  for (std::size_t t : {0u, 1u, 4u}) frames[t].valid[7] = false;
  const PoseSequence out = impute_sequence(make_sequence("a", frames));
  CHECK(out.frames()[0].joints[7] == frames[2].joints[7]);
  CHECK(out.frames()[1].joints[7] == frames[2].joints[7]);
  CHECK(out.frames()[4].joints[7] == frames[3].joints[7]);
}

TEST_CASE("impute_sequence leaves a fully valid sequence unchanged") {
  std::mt19937_64 rng(14);
  const PoseSequence seq = make_sequence("a", random_frames(rng, 6));
  CHECK(impute_sequence(seq) == seq);
}

TEST_CASE("impute_sequence fails when a joint is never observed") {
  std::mt19937_64 rng(15);
  auto frames = random_frames(rng, 4);
  for (auto& f : frames) f.valid[9] = false;
  check_error(ErrorCode::kUnimputableJoint,
              [&] { (void)impute_sequence(make_sequence("a", frames)); });
}

TEST_CASE("PoseSequence enforces its invariants") {
  std::mt19937_64 rng(16);
  check_error(ErrorCode::kSequenceTooShort,
              [&] { (void)make_sequence("a", random_frames(rng, 24), "c", 25); });
  CHECK_NOTHROW((void)make_sequence("a", random_frames(rng, 25), "c", 25));
  auto frames = random_frames(rng, 4);
  frames[2].frame_index = 1;
  check_error(ErrorCode::kInvalidArgument, [&] { (void)make_sequence("a", frames); });
  check_error(ErrorCode::kEmptySequence, [&] { (void)make_sequence("a", {}); });
}

TEST_CASE("frame_distance: identity, single axis and reference implementation") {
  std::mt19937_64 rng(17);
  const KeypointFrame a = random_frame(rng, 0);
  CHECK(frame_distance(a, a) == 0.0);
  KeypointFrame b = a;
  b.joints[5].x += 0.75;
  CHECK(frame_distance(a, b) == doctest::Approx(0.75));
  for (int i = 0; i < 200; ++i) {
    const KeypointFrame p = random_frame(rng, 0);
    const KeypointFrame q = random_frame(rng, 0);
    CHECK(frame_distance(p, q) == doctest::Approx(reference_frame_distance(p, q)).epsilon(1e-12));
  }
}

TEST_CASE("frame_distance is a metric") {
  std::mt19937_64 rng(18);
  for (int i = 0; i < 500; ++i) {
    const KeypointFrame a = random_frame(rng, 0);
    const KeypointFrame b = random_frame(rng, 0);
    const KeypointFrame c = random_frame(rng, 0);
    CHECK(frame_distance(a, b) > 0.0);
    CHECK(frame_distance(a, b) == frame_distance(b, a));
    CHECK(frame_distance(a, c) <= frame_distance(a, b) + frame_distance(b, c) + 1e-12);
  }
}

TEST_CASE("norm_series: zeros, 3-4-5 and brute force") {
  KeypointFrame zero;
  zero.valid.fill(true);
  KeypointFrame tri = zero;
  tri.frame_index = 1;
  tri.joints[2].x = 3.0;
  tri.joints[8].y = 4.0;
  const NormSeries s = norm_series(make_sequence("a", {zero, tri}));
  CHECK(s.values == std::vector<double>{0.0, 5.0});

  std::mt19937_64 rng(19);
  const auto frames = random_frames(rng, 30);
  const NormSeries r = norm_series(make_sequence("b", frames));
  REQUIRE(r.values.size() == frames.size());
  for (std::size_t t = 0; t < frames.size(); ++t) {
    CHECK(r.values[t] == doctest::Approx(reference_norm(frames[t])).epsilon(1e-12));
  }
}

TEST_CASE("norm differences never exceed frame distances") {
  std::mt19937_64 rng(20);
  for (int rep = 0; rep < 50; ++rep) {
    const auto a = random_frames(rng, 6);
    const auto b = random_frames(rng, 5);
    const NormSeries na = norm_series(std::span<const KeypointFrame>(a));
    const NormSeries nb = norm_series(std::span<const KeypointFrame>(b));
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = 0; j < b.size(); ++j) {
        CHECK(std::abs(na.values[i] - nb.values[j]) <= frame_distance(a[i], b[j]) + 1e-12);
      }
    }
  }
}

TEST_CASE("sequence_from_record normalizes and imputes") {
  DatasetRecord rec{"id1", "cam0", "c", 2, {}};
  for (std::size_t t = 0; t < 3; ++t) {
    RawKeypointFrame raw = upright_raw(1.0, {10.0 * static_cast<double>(t), 0.0});
    raw.frame_index = t;
    rec.frames.push_back(raw);
  }
  rec.frames[1].joints[index(CocoJoint::kLeftAnkle)].confidence = 0.0;
  const PoseSequence seq = sequence_from_record(rec);
  CHECK(seq.size() == 3);
  CHECK(seq.fully_valid());
  CHECK(seq.frames()[1].joints[index(BodyJoint::kLeftAnkle)].x ==
        doctest::Approx(seq.frames()[0].joints[index(BodyJoint::kLeftAnkle)].x));
}

}  // TEST_SUITE
