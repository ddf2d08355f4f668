// Copyright 2026 The posedtw Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace posedtw {

inline constexpr std::size_t kCocoJointCount = 17;
inline constexpr std::size_t kBodyJointCount = 12;
inline constexpr std::size_t kFeatureDims = 2 * kBodyJointCount;
inline constexpr double kDefaultConfidenceFloor = 0.3;
inline constexpr int kDefaultFrameRate = 25;

// COCO-17 keypoint order.
enum class CocoJoint : std::uint8_t {
  kNose = 0,
  kLeftEye,
  kRightEye,
  kLeftEar,
  kRightEar,
  kLeftShoulder,
  kRightShoulder,
  kLeftElbow,
  kRightElbow,
  kLeftWrist,
  kRightWrist,
  kLeftHip,
  kRightHip,
  kLeftKnee,
  kRightKnee,
  kLeftAnkle,
  kRightAnkle,
};

// The 12 body joints kept after dropping the five facial keypoints. Same
// relative order as COCO-17, so body joint j is COCO joint j + 5.
enum class BodyJoint : std::uint8_t {
  kLeftShoulder = 0,
  kRightShoulder,
  kLeftElbow,
  kRightElbow,
  kLeftWrist,
  kRightWrist,
  kLeftHip,
  kRightHip,
  kLeftKnee,
  kRightKnee,
  kLeftAnkle,
  kRightAnkle,
};

inline constexpr std::size_t kFirstBodyCocoIndex = 5;

constexpr std::size_t index(CocoJoint j) { return static_cast<std::size_t>(j); }
constexpr std::size_t index(BodyJoint j) { return static_cast<std::size_t>(j); }

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

struct RawJoint {
  double x = 0.0;  // pixels
  double y = 0.0;  // pixels
  double confidence = 0.0;

  friend bool operator==(const RawJoint&, const RawJoint&) = default;
};

/// One detector output frame: 17 COCO joints in image coordinates.
struct RawKeypointFrame {
  std::array<RawJoint, kCocoJointCount> joints{};
  std::size_t frame_index = 0;

  /// Throws Error(kInvalidArgument) on non-finite coordinates or a confidence
  /// outside [0, 1].
  void validate() const;

  friend bool operator==(const RawKeypointFrame&, const RawKeypointFrame&) = default;
};

using FeatureVector = std::array<double, kFeatureDims>;

/// A normalized 12-joint frame. Joints with valid[j] == false carry
/// placeholder coordinates until imputation fills them.
struct KeypointFrame {
  std::array<Point2, kBodyJointCount> joints{};
  std::array<bool, kBodyJointCount> valid{};
  std::size_t frame_index = 0;

  [[nodiscard]] bool fully_valid() const noexcept;
  /// Concatenated (x0, y0, x1, y1, ...) coordinates.
  [[nodiscard]] FeatureVector features() const noexcept;

  friend bool operator==(const KeypointFrame&, const KeypointFrame&) = default;
};

/// Identity-labelled keypoint time series. Construction enforces
/// frames.size() >= frame_rate and strictly increasing frame indices.
class PoseSequence {
 public:
  PoseSequence(std::string id, std::string camera_tag, std::string condition_tag,
               std::vector<KeypointFrame> frames, int frame_rate);

  [[nodiscard]] const std::string& id() const noexcept { return id_; }
  [[nodiscard]] const std::string& camera_tag() const noexcept { return camera_tag_; }
  [[nodiscard]] const std::string& condition_tag() const noexcept { return condition_tag_; }
  [[nodiscard]] std::span<const KeypointFrame> frames() const noexcept { return frames_; }
  [[nodiscard]] int frame_rate() const noexcept { return frame_rate_; }
  [[nodiscard]] std::size_t size() const noexcept { return frames_.size(); }
  [[nodiscard]] bool fully_valid() const noexcept;

  /// Same metadata, new frames. Re-validates.
  [[nodiscard]] PoseSequence with_frames(std::vector<KeypointFrame> frames) const;

  friend bool operator==(const PoseSequence&, const PoseSequence&) = default;

 private:
  std::string id_;
  std::string camera_tag_;
  std::string condition_tag_;
  std::vector<KeypointFrame> frames_;
  int frame_rate_;
};

/// Per-frame Euclidean norm of the 24-dimensional feature vector.
struct NormSeries {
  std::vector<double> values;

  friend bool operator==(const NormSeries&, const NormSeries&) = default;
};

/// One line of the raw JSONL dataset.
struct DatasetRecord {
  std::string id;
  std::string camera_tag;
  std::string condition_tag;
  int frame_rate = kDefaultFrameRate;
  std::vector<RawKeypointFrame> frames;

  friend bool operator==(const DatasetRecord&, const DatasetRecord&) = default;
};

// ---------------------------------------------------------------------------
// Operations on single frames and sequences.

/// Drops the facial joints, moves the hip midpoint to the origin and scales
/// so the hip-midpoint to shoulder-midpoint distance is 1. Joints below
/// confidence_floor are marked invalid. Image axis orientation is preserved.
///
/// Throws Error(kDegenerateFrame) when a hip or shoulder is below the floor or
/// the torso length is zero.
KeypointFrame normalize_frame(const RawKeypointFrame& raw,
                              double confidence_floor = kDefaultConfidenceFloor);

/// Replaces every invalid joint by linear interpolation in frame-index time
/// between its nearest valid observations, holding the end values constant.
/// Throws Error(kUnimputableJoint) if some joint is never valid.
PoseSequence impute_sequence(const PoseSequence& seq);

double frame_distance(const KeypointFrame& a, const KeypointFrame& b) noexcept;
double feature_distance(const FeatureVector& a, const FeatureVector& b) noexcept;

NormSeries norm_series(const PoseSequence& seq);
NormSeries norm_series(std::span<const KeypointFrame> frames);

/// normalize_frame over every frame followed by impute_sequence.
PoseSequence sequence_from_record(const DatasetRecord& record,
                                  double confidence_floor = kDefaultConfidenceFloor);

}  // namespace posedtw
