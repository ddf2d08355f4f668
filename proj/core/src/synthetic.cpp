// Copyright 2026 The posedtw Authors
// SPDX-License-Identifier: Apache-2.0

#include "posedtw/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "posedtw/errors.hpp"

namespace posedtw {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Neutral standing pose, hip midpoint at the origin, image y axis (down),
// shoulder midpoint one unit above the hips.
constexpr std::array<Point2, kCocoJointCount> kBaseSkeleton{{
    {0.00, -1.45},                 // nose
    {-0.05, -1.52}, {0.05, -1.52},  // eyes
    {-0.10, -1.48}, {0.10, -1.48},  // ears
    {-0.22, -1.00}, {0.22, -1.00},  // shoulders
    {-0.26, -0.55}, {0.26, -0.55},  // elbows
    {-0.28, -0.12}, {0.28, -0.12},  // wrists
    {-0.12, 0.00}, {0.12, 0.00},    // hips
    {-0.13, 0.55}, {0.13, 0.55},    // knees
    {-0.14, 1.10}, {0.14, 1.10},    // ankles
}};

bool is_anchor(std::size_t j) {
  return j == index(CocoJoint::kLeftShoulder) || j == index(CocoJoint::kRightShoulder) ||
         j == index(CocoJoint::kLeftHip) || j == index(CocoJoint::kRightHip);
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<FeatureVector> clean_features(const IdentityModel& model, const ConditionSpec& cond,
                                          std::size_t length, const GeneratorConfig& config) {
  const PoseSequence seq = render_clean(model, cond, length, "probe", config);
  std::vector<FeatureVector> out;
  out.reserve(seq.size());
  for (const KeypointFrame& f : seq.frames()) out.push_back(f.features());
  return out;
}

double separation_distance(const std::vector<FeatureVector>& a,
                           const std::vector<FeatureVector>& b, const GeneratorConfig& config) {
  DtwConfig cfg = config.separation_dtw;
  cfg.abandon_threshold = kInfinity;
  cfg.keep_path = false;
  return distance_or_inf(dtw_distance(std::span<const FeatureVector>(a),
                                      std::span<const FeatureVector>(b), cfg));
}

struct Candidate {
  IdentityModel model;
  std::vector<std::vector<FeatureVector>> renders;  // one per condition
  double intra = 0.0;
};

Candidate make_candidate(std::uint64_t seed, std::span<const ConditionSpec> conditions,
                         std::size_t length, const GeneratorConfig& config) {
  Candidate c{generate_identity(seed, config), {}, 0.0};
  for (const ConditionSpec& cond : conditions) {
    c.renders.push_back(clean_features(c.model, cond, length, config));
  }
  for (std::size_t a = 0; a < c.renders.size(); ++a) {
    for (std::size_t b = a + 1; b < c.renders.size(); ++b) {
      c.intra = std::max(c.intra, separation_distance(c.renders[a], c.renders[b], config));
    }
  }
  return c;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                          std::uint64_t c) noexcept {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ a);
  h = splitmix64(h ^ b);
  return splitmix64(h ^ c);
}

Point2 IdentityModel::joint_at(std::size_t joint, double t, double phase_offset) const noexcept {
  const JointOscillation& o = oscillation[joint];
  const double theta = kTwoPi * frequency() * t + phase_offset + o.phase;
  return {base[joint].x + o.amplitude_x * std::sin(theta),
          base[joint].y + o.amplitude_y * std::cos(theta)};
}

void ConditionSpec::validate() const {
  if (!(noise_sigma >= 0.0)) fail(ErrorCode::kInvalidArgument, "noise_sigma must be >= 0");
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    fail(ErrorCode::kInvalidArgument, "dropout_rate must lie in [0,1)");
  }
  if (!(camera_scale > 0.0)) fail(ErrorCode::kInvalidArgument, "camera_scale must be > 0");
}

std::vector<ConditionSpec> default_conditions(double noise_sigma, double dropout_rate,
                                              std::size_t count) {
  constexpr double pi = std::numbers::pi;
  std::vector<ConditionSpec> all{
      {"clothesA-RGB", "cam0", noise_sigma, dropout_rate, 0.0, 120.0, {320.0, 260.0}},
      {"clothesA-IR", "cam1", noise_sigma, dropout_rate, pi / 8.0, 95.0, {300.0, 240.0}},
      {"clothesB-RGB", "cam2", noise_sigma, dropout_rate, pi / 4.0, 140.0, {360.0, 280.0}},
      {"clothesB-IR", "cam3", noise_sigma, dropout_rate, 3.0 * pi / 8.0, 80.0, {280.0, 230.0}},
  };
  if (count < 1 || count > all.size()) {
    fail(ErrorCode::kInvalidArgument, "default_conditions: count must lie in [1,4]");
  }
  all.resize(count);
  return all;
}

IdentityModel generate_identity(std::uint64_t seed, const GeneratorConfig& config) {
  std::mt19937_64 rng(derive_seed(seed, 0x1d));
  auto uniform = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };

  IdentityModel m;
  m.seed = seed;
  m.stride_period = uniform(22.0, 36.0);

  const double shoulder_width = uniform(0.7, 1.4);
  const double hip_width = uniform(0.7, 1.4);
  const double arm = uniform(0.7, 1.3);
  const double leg = uniform(0.7, 1.3);
  const double head = uniform(0.7, 1.3);
  const double lean = uniform(-0.15, 0.15);

  m.base = kBaseSkeleton;
  for (std::size_t side = 0; side < 2; ++side) {
    const std::size_t sh = index(CocoJoint::kLeftShoulder) + side;
    const std::size_t hp = index(CocoJoint::kLeftHip) + side;
    const Point2 sh0 = kBaseSkeleton[sh];
    const Point2 hp0 = kBaseSkeleton[hp];
    m.base[sh].x = sh0.x * shoulder_width;
    m.base[hp].x = hp0.x * hip_width;
    for (std::size_t limb : {index(CocoJoint::kLeftElbow), index(CocoJoint::kLeftWrist)}) {
      const std::size_t j = limb + side;
      m.base[j] = {m.base[sh].x + (kBaseSkeleton[j].x - sh0.x) * arm + lean,
                   m.base[sh].y + (kBaseSkeleton[j].y - sh0.y) * arm};
    }
    for (std::size_t limb : {index(CocoJoint::kLeftKnee), index(CocoJoint::kLeftAnkle)}) {
      const std::size_t j = limb + side;
      m.base[j] = {m.base[hp].x + (kBaseSkeleton[j].x - hp0.x) * leg,
                   m.base[hp].y + (kBaseSkeleton[j].y - hp0.y) * leg};
    }
  }
  for (std::size_t j = 0; j < index(CocoJoint::kLeftShoulder); ++j) {
    m.base[j] = {kBaseSkeleton[j].x + lean, -1.0 + (kBaseSkeleton[j].y + 1.0) * head};
  }

  // Arms swing against the same-side leg; left and right half a cycle apart.
  const double pi = std::numbers::pi;
  const double bob = uniform(0.0, 0.04);
  const double bob_phase = uniform(0.0, kTwoPi);
  const double sway = uniform(0.0, 0.04);
  for (std::size_t j = 0; j < kCocoJointCount; ++j) {
    JointOscillation& o = m.oscillation[j];
    const bool left = j >= index(CocoJoint::kLeftShoulder) && (j - 5) % 2 == 0;
    const double side_phase = left ? 0.0 : pi;
    if (j < index(CocoJoint::kLeftShoulder)) {
      o = {uniform(0.0, 0.03), bob, bob_phase};
    } else if (is_anchor(j)) {
      // Shared bob, equal and opposite sway: the anchor midpoints only bob.
      o = {left ? sway : -sway, bob, bob_phase};
    } else if (j == index(CocoJoint::kLeftElbow) || j == index(CocoJoint::kRightElbow)) {
      o = {uniform(0.04, 0.10), uniform(0.01, 0.03), side_phase + pi + uniform(-0.4, 0.4)};
    } else if (j == index(CocoJoint::kLeftWrist) || j == index(CocoJoint::kRightWrist)) {
      o = {uniform(0.06, 0.16), uniform(0.01, 0.05), side_phase + pi + uniform(-0.4, 0.4)};
    } else if (j == index(CocoJoint::kLeftKnee) || j == index(CocoJoint::kRightKnee)) {
      o = {uniform(0.05, 0.12), uniform(0.01, 0.04), side_phase + uniform(-0.4, 0.4)};
    } else {
      o = {uniform(0.08, 0.18), uniform(0.02, 0.06), side_phase + uniform(-0.4, 0.4)};
    }
    o.amplitude_x = std::clamp(o.amplitude_x, -config.max_amplitude, config.max_amplitude);
    o.amplitude_y = std::clamp(o.amplitude_y, -config.max_amplitude, config.max_amplitude);
  }
  return m;
}

std::vector<RawKeypointFrame> render_raw(const IdentityModel& model, const ConditionSpec& cond,
                                         std::size_t length, std::uint64_t stream_seed,
                                         const GeneratorConfig& config) {
  cond.validate();
  std::mt19937_64 rng(stream_seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<RawKeypointFrame> frames(length);
  // Dropout draw per (frame, joint); kept to guarantee one valid sample.
  std::vector<std::array<double, kCocoJointCount>> drop_draw(length);

  for (std::size_t t = 0; t < length; ++t) {
    RawKeypointFrame& f = frames[t];
    f.frame_index = t;
    for (std::size_t j = 0; j < kCocoJointCount; ++j) {
      const Point2 p = model.joint_at(j, static_cast<double>(t), cond.phase_offset);
      const double nx = gauss(rng);
      const double ny = gauss(rng);
      const double u_drop = unit(rng);
      const double u_conf = unit(rng);
      drop_draw[t][j] = u_drop;
      RawJoint& r = f.joints[j];
      r.x = cond.camera_offset.x + cond.camera_scale * (p.x + cond.noise_sigma * nx);
      r.y = cond.camera_offset.y + cond.camera_scale * (p.y + cond.noise_sigma * ny);
      const bool dropped = !is_anchor(j) && u_drop < cond.dropout_rate;
      r.confidence = dropped ? config.confidence_floor * 0.5 * u_conf
                             : 0.6 + 0.4 * u_conf;
    }
  }

  for (std::size_t j = 0; j < kCocoJointCount; ++j) {
    if (is_anchor(j) || length == 0) continue;
    const bool any_valid = std::any_of(frames.begin(), frames.end(), [&](const auto& f) {
      return f.joints[j].confidence >= config.confidence_floor;
    });
    if (any_valid) continue;
    std::size_t keep = 0;
    for (std::size_t t = 1; t < length; ++t) {
      if (drop_draw[t][j] > drop_draw[keep][j]) keep = t;
    }
    frames[keep].joints[j].confidence = 0.6;
  }
  return frames;
}

PoseSequence render_sequence(const IdentityModel& model, const ConditionSpec& cond,
                             std::size_t length, std::uint64_t stream_seed, const std::string& id,
                             const GeneratorConfig& config) {
  const auto raw = render_raw(model, cond, length, stream_seed, config);
  std::vector<KeypointFrame> frames;
  frames.reserve(raw.size());
  for (const RawKeypointFrame& r : raw) {
    frames.push_back(normalize_frame(r, config.confidence_floor));
  }
  return PoseSequence(id, cond.camera_tag, cond.condition_tag, std::move(frames),
                      config.frame_rate);
}

PoseSequence render_clean(const IdentityModel& model, const ConditionSpec& cond,
                          std::size_t length, const std::string& id,
                          const GeneratorConfig& config) {
  ConditionSpec clean = cond;
  clean.noise_sigma = 0.0;
  clean.dropout_rate = 0.0;
  return render_sequence(model, clean, length, 0, id, config);
}

IdentityBank generate_identities(std::size_t count, std::uint64_t seed,
                                 std::span<const ConditionSpec> conditions, std::size_t length,
                                 const GeneratorConfig& config) {
  IdentityBank bank;
  if (count == 0) return bank;

  std::vector<Candidate> first;
  first.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    first.push_back(make_candidate(derive_seed(seed, i, 0), conditions, length, config));
    bank.intra_reference = std::max(bank.intra_reference, first.back().intra);
  }
  bank.delta_sep = config.separation_factor * bank.intra_reference;
  bank.min_inter = kInfinity;

  std::vector<Candidate> accepted;
  for (std::size_t i = 0; i < count; ++i) {
    bool done = false;
    for (int attempt = 0; attempt < config.max_attempts && !done; ++attempt) {
      Candidate cand = attempt == 0
                           ? std::move(first[i])
                           : make_candidate(derive_seed(seed, i, static_cast<std::uint64_t>(attempt)),
                                            conditions, length, config);
      if (cand.intra > bank.intra_reference) continue;
      double nearest = kInfinity;
      for (const Candidate& other : accepted) {
        for (const auto& a : cand.renders) {
          for (const auto& b : other.renders) {
            nearest = std::min(nearest, separation_distance(a, b, config));
            if (nearest < bank.delta_sep) break;
          }
          if (nearest < bank.delta_sep) break;
        }
        if (nearest < bank.delta_sep) break;
      }
      if (nearest < bank.delta_sep) continue;
      bank.min_inter = std::min(bank.min_inter, nearest);
      bank.max_intra = std::max(bank.max_intra, cand.intra);
      bank.attempts.push_back(attempt + 1);
      bank.models.push_back(cand.model);
      accepted.push_back(std::move(cand));
      done = true;
    }
    if (!done) {
      fail(ErrorCode::kInvalidArgument,
           "generator could not separate identity " + std::to_string(i) + " after " +
               std::to_string(config.max_attempts) + " attempts");
    }
  }
  return bank;
}

BenchmarkDataset build_benchmark(std::size_t identities, std::span<const ConditionSpec> conditions,
                                 std::size_t length, std::uint64_t seed,
                                 const GeneratorConfig& config) {
  if (identities < 2) fail(ErrorCode::kInvalidArgument, "benchmark needs at least 2 identities");
  if (conditions.size() < 2) fail(ErrorCode::kInvalidArgument, "benchmark needs at least 2 conditions");
  if (length < static_cast<std::size_t>(config.frame_rate)) {
    fail(ErrorCode::kInvalidArgument, "sequence length must be >= frame rate");
  }
  for (const ConditionSpec& c : conditions) c.validate();

  const IdentityBank bank = generate_identities(identities, seed, conditions, length, config);

  BenchmarkDataset out;
  out.manifest.seed = seed;
  out.manifest.identities = identities;
  out.manifest.length = length;
  out.manifest.frame_rate = config.frame_rate;
  out.manifest.delta_sep = bank.delta_sep;
  out.manifest.intra_reference = bank.intra_reference;
  out.manifest.min_inter = bank.min_inter;
  out.manifest.max_intra = bank.max_intra;
  out.manifest.conditions.assign(conditions.begin(), conditions.end());

  for (std::size_t i = 0; i < bank.models.size(); ++i) {
    out.manifest.identity_seeds.push_back(bank.models[i].seed);
    char id[32];
    std::snprintf(id, sizeof(id), "id%03zu", i + 1);
    for (std::size_t c = 0; c < conditions.size(); ++c) {
      DatasetRecord rec;
      rec.id = id;
      rec.camera_tag = conditions[c].camera_tag;
      rec.condition_tag = conditions[c].condition_tag;
      rec.frame_rate = config.frame_rate;
      rec.frames = render_raw(bank.models[i], conditions[c], length,
                              derive_seed(seed, i, c, 0x5eed), config);
      out.records.push_back(std::move(rec));
    }
  }
  return out;
}

}  // namespace posedtw
