// Copyright 2026 The posedtw Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>

#include "posedtw/errors.hpp"
#include "posedtw/types.hpp"

namespace posedtw {

void RawKeypointFrame::validate() const {
  for (std::size_t j = 0; j < joints.size(); ++j) {
    const RawJoint& p = joints[j];
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      fail(ErrorCode::kInvalidArgument, "joint " + std::to_string(j) + " has non-finite coordinates");
    }
    if (!(p.confidence >= 0.0 && p.confidence <= 1.0)) {
      fail(ErrorCode::kInvalidArgument, "joint " + std::to_string(j) + " confidence outside [0,1]");
    }
  }
}

bool KeypointFrame::fully_valid() const noexcept {
  return std::all_of(valid.begin(), valid.end(), [](bool v) { return v; });
}

FeatureVector KeypointFrame::features() const noexcept {
  FeatureVector out{};
  for (std::size_t j = 0; j < kBodyJointCount; ++j) {
    out[2 * j] = joints[j].x;
    out[2 * j + 1] = joints[j].y;
  }
  return out;
}

PoseSequence::PoseSequence(std::string id, std::string camera_tag, std::string condition_tag,
                           std::vector<KeypointFrame> frames, int frame_rate)
    : id_(std::move(id)),
      camera_tag_(std::move(camera_tag)),
      condition_tag_(std::move(condition_tag)),
      frames_(std::move(frames)),
      frame_rate_(frame_rate) {
  if (frame_rate_ <= 0) fail(ErrorCode::kInvalidArgument, "frame rate must be positive");
  if (frames_.empty()) fail(ErrorCode::kEmptySequence, "sequence '" + id_ + "' has no frames");
  if (frames_.size() < static_cast<std::size_t>(frame_rate_)) {
    fail(ErrorCode::kSequenceTooShort, "sequence '" + id_ + "' has " +
                                           std::to_string(frames_.size()) +
                                           " frames, fewer than the frame rate " +
                                           std::to_string(frame_rate_));
  }
  for (std::size_t t = 1; t < frames_.size(); ++t) {
    if (frames_[t].frame_index <= frames_[t - 1].frame_index) {
      fail(ErrorCode::kInvalidArgument,
           "sequence '" + id_ + "' frame indices not strictly increasing at position " +
               std::to_string(t));
    }
  }
  for (const KeypointFrame& f : frames_) {
    for (const Point2& p : f.joints) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
        fail(ErrorCode::kInvalidArgument, "sequence '" + id_ + "' has non-finite coordinates");
      }
    }
  }
}

bool PoseSequence::fully_valid() const noexcept {
  return std::all_of(frames_.begin(), frames_.end(),
                     [](const KeypointFrame& f) { return f.fully_valid(); });
}

PoseSequence PoseSequence::with_frames(std::vector<KeypointFrame> frames) const {
  return PoseSequence(id_, camera_tag_, condition_tag_, std::move(frames), frame_rate_);
}

namespace {

Point2 midpoint(const RawJoint& a, const RawJoint& b) {
  return {(a.x + b.x) / 2.0, (a.y + b.y) / 2.0};
}

}  // namespace

KeypointFrame normalize_frame(const RawKeypointFrame& raw, double confidence_floor) {
  if (!(confidence_floor >= 0.0 && confidence_floor <= 1.0)) {
    fail(ErrorCode::kInvalidArgument, "confidence floor outside [0,1]");
  }
  raw.validate();

  constexpr std::array anchors{CocoJoint::kLeftShoulder, CocoJoint::kRightShoulder,
                               CocoJoint::kLeftHip, CocoJoint::kRightHip};
  for (CocoJoint a : anchors) {
    if (raw.joints[index(a)].confidence < confidence_floor) {
      fail(ErrorCode::kDegenerateFrame, "frame " + std::to_string(raw.frame_index) +
                                            ": anchor joint " + std::to_string(index(a)) +
                                            " below confidence floor");
    }
  }

  const Point2 hip = midpoint(raw.joints[index(CocoJoint::kLeftHip)],
                              raw.joints[index(CocoJoint::kRightHip)]);
  const Point2 shoulder = midpoint(raw.joints[index(CocoJoint::kLeftShoulder)],
                                   raw.joints[index(CocoJoint::kRightShoulder)]);
  const double torso = std::hypot(shoulder.x - hip.x, shoulder.y - hip.y);
  if (!(torso > 0.0) || !std::isfinite(torso)) {
    fail(ErrorCode::kDegenerateFrame,
         "frame " + std::to_string(raw.frame_index) + ": zero torso length");
  }

  KeypointFrame out;
  out.frame_index = raw.frame_index;
  for (std::size_t j = 0; j < kBodyJointCount; ++j) {
    const RawJoint& p = raw.joints[j + kFirstBodyCocoIndex];
    out.joints[j] = {(p.x - hip.x) / torso, (p.y - hip.y) / torso};
    out.valid[j] = p.confidence >= confidence_floor;
  }
  return out;
}

PoseSequence impute_sequence(const PoseSequence& seq) {
  std::vector<KeypointFrame> frames(seq.frames().begin(), seq.frames().end());
  const std::size_t t_count = frames.size();

  for (std::size_t j = 0; j < kBodyJointCount; ++j) {
    std::optional<std::size_t> last_valid;
    for (std::size_t t = 0; t < t_count; ++t) {
      if (!frames[t].valid[j]) continue;
      if (!last_valid) {
        for (std::size_t u = 0; u < t; ++u) frames[u].joints[j] = frames[t].joints[j];
      } else if (*last_valid + 1 < t) {
        const KeypointFrame& a = frames[*last_valid];
        const KeypointFrame& b = frames[t];
        const double span = static_cast<double>(b.frame_index - a.frame_index);
        for (std::size_t u = *last_valid + 1; u < t; ++u) {
          const double alpha = static_cast<double>(frames[u].frame_index - a.frame_index) / span;
          frames[u].joints[j] = {a.joints[j].x + alpha * (b.joints[j].x - a.joints[j].x),
                                 a.joints[j].y + alpha * (b.joints[j].y - a.joints[j].y)};
        }
      }
      last_valid = t;
    }
    if (!last_valid) {
      fail(ErrorCode::kUnimputableJoint, "sequence '" + seq.id() + "': joint " +
                                             std::to_string(j) + " is invalid in every frame");
    }
    for (std::size_t u = *last_valid + 1; u < t_count; ++u) {
      frames[u].joints[j] = frames[*last_valid].joints[j];
    }
  }
  for (KeypointFrame& f : frames) f.valid.fill(true);
  return seq.with_frames(std::move(frames));
}

double feature_distance(const FeatureVector& a, const FeatureVector& b) noexcept {
  double sum = 0.0;
  for (std::size_t d = 0; d < kFeatureDims; ++d) {
    const double diff = a[d] - b[d];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

double frame_distance(const KeypointFrame& a, const KeypointFrame& b) noexcept {
  return feature_distance(a.features(), b.features());
}

NormSeries norm_series(std::span<const KeypointFrame> frames) {
  NormSeries out;
  out.values.reserve(frames.size());
  for (const KeypointFrame& f : frames) {
    double sum = 0.0;
    for (const Point2& p : f.joints) sum += p.x * p.x + p.y * p.y;
    out.values.push_back(std::sqrt(sum));
  }
  return out;
}

NormSeries norm_series(const PoseSequence& seq) { return norm_series(seq.frames()); }

PoseSequence sequence_from_record(const DatasetRecord& record, double confidence_floor) {
  std::vector<KeypointFrame> frames;
  frames.reserve(record.frames.size());
  for (const RawKeypointFrame& raw : record.frames) {
    frames.push_back(normalize_frame(raw, confidence_floor));
  }
  PoseSequence seq(record.id, record.camera_tag, record.condition_tag, std::move(frames),
                   record.frame_rate);
  return impute_sequence(seq);
}

}  // namespace posedtw
