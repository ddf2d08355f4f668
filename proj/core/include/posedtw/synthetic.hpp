// Copyright 2026 The posedtw Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "posedtw/dtw.hpp"
#include "posedtw/types.hpp"

namespace posedtw {

// Gait-like keypoint sequences. Joints oscillate sinusoidally around a base
// skeleton; each identity has its own proportions, stride period, amplitudes
// and phases. Conditions (clothing, modality) never change geometry: they
// only shift the gait phase, move the virtual camera and add jitter/dropout.

struct JointOscillation {
  double amplitude_x = 0.0;  // normalized units
  double amplitude_y = 0.0;
  double phase = 0.0;        // radians
  friend bool operator==(const JointOscillation&, const JointOscillation&) = default;
};

struct IdentityModel {
  std::uint64_t seed = 0;
  double stride_period = 30.0;  // frames per gait cycle
  std::array<Point2, kCocoJointCount> base{};
  std::array<JointOscillation, kCocoJointCount> oscillation{};

  [[nodiscard]] double frequency() const noexcept { return 1.0 / stride_period; }
  /// Noise-free joint position at (possibly fractional) frame t.
  [[nodiscard]] Point2 joint_at(std::size_t joint, double t, double phase_offset) const noexcept;

  friend bool operator==(const IdentityModel&, const IdentityModel&) = default;
};

struct ConditionSpec {
  std::string condition_tag;
  std::string camera_tag;
  double noise_sigma = 0.0;    // Gaussian per-joint jitter, normalized units
  double dropout_rate = 0.0;   // probability that a limb/face joint is low-confidence
  double phase_offset = 0.0;   // radians
  double camera_scale = 100.0; // pixels per normalized unit
  Point2 camera_offset{320.0, 240.0};

  void validate() const;
};

/// clothesA-RGB, clothesA-IR, clothesB-RGB, clothesB-IR with phase offsets
/// 0, pi/8, pi/4, 3pi/8 and distinct virtual cameras. Only the first `count`
/// (1..4) are returned.
std::vector<ConditionSpec> default_conditions(double noise_sigma = 0.0, double dropout_rate = 0.0,
                                              std::size_t count = 4);

/// Jitter levels used for the degradation study.
inline constexpr std::array<double, 5> kDefaultNoiseLadder{0.0, 0.02, 0.05, 0.1, 0.2};

struct GeneratorConfig {
  int frame_rate = kDefaultFrameRate;
  double max_amplitude = 0.35;        // bound on |joint - base| per axis
  double separation_factor = 5.0;     // delta_sep = factor * intra reference
  double confidence_floor = kDefaultConfidenceFloor;
  int max_attempts = 500;
  // DTW used for the separation check (matches the default matcher window).
  DtwConfig separation_dtw = DtwConfig::with_width(30.0);
};

/// Deterministic in (seed, config).
IdentityModel generate_identity(std::uint64_t seed, const GeneratorConfig& config = {});

/// Raw 17-joint frames in pixel coordinates with confidences. `stream_seed`
/// drives jitter and dropout; the draws do not depend on noise_sigma, so a
/// ladder of sigmas perturbs the same directions by growing amounts.
std::vector<RawKeypointFrame> render_raw(const IdentityModel& model, const ConditionSpec& cond,
                                         std::size_t length, std::uint64_t stream_seed,
                                         const GeneratorConfig& config = {});

/// render_raw followed by normalize_frame. The result may carry invalid joints;
/// impute_sequence always succeeds on it.
PoseSequence render_sequence(const IdentityModel& model, const ConditionSpec& cond,
                             std::size_t length, std::uint64_t stream_seed,
                             const std::string& id, const GeneratorConfig& config = {});

/// Noise-free, fully valid rendering (jitter and dropout ignored).
PoseSequence render_clean(const IdentityModel& model, const ConditionSpec& cond,
                          std::size_t length, const std::string& id,
                          const GeneratorConfig& config = {});

struct IdentityBank {
  std::vector<IdentityModel> models;
  std::vector<int> attempts;   // resamples needed per identity
  double intra_reference = 0.0;  // largest noise-free cross-condition DTW
  double delta_sep = 0.0;
  double min_inter = 0.0;        // smallest accepted inter-identity DTW
  double max_intra = 0.0;        // largest accepted intra-identity DTW
};

/// Draws `count` identities, resampling each until its noise-free renders
/// are at least delta_sep (DTW) from every previously accepted identity under
/// every condition pair, with intra-identity distances at most
/// delta_sep / separation_factor.
IdentityBank generate_identities(std::size_t count, std::uint64_t seed,
                                 std::span<const ConditionSpec> conditions, std::size_t length,
                                 const GeneratorConfig& config = {});

struct BenchmarkManifest {
  int schema_version = 1;
  std::uint64_t seed = 0;
  std::size_t identities = 0;
  std::size_t length = 0;
  int frame_rate = kDefaultFrameRate;
  double delta_sep = 0.0;
  double intra_reference = 0.0;
  double min_inter = 0.0;
  double max_intra = 0.0;
  std::vector<std::uint64_t> identity_seeds;
  std::vector<ConditionSpec> conditions;
};

struct BenchmarkDataset {
  std::vector<DatasetRecord> records;  // identity-major, condition-minor
  BenchmarkManifest manifest;
};

/// One raw record per (identity, condition). Throws Error(kInvalidArgument)
/// for fewer than 2 identities or conditions, or length < frame_rate.
BenchmarkDataset build_benchmark(std::size_t identities, std::span<const ConditionSpec> conditions,
                                 std::size_t length, std::uint64_t seed,
                                 const GeneratorConfig& config = {});

/// Stable 64-bit mix of a seed with stream coordinates.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                          std::uint64_t c = 0) noexcept;

}  // namespace posedtw
