// Copyright 2026 The posedtw Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <numbers>

#include "posedtw/dataset_io.hpp"
#include "posedtw/errors.hpp"
#include "posedtw/retrieval.hpp"
#include "posedtw/synthetic.hpp"

using namespace posedtw;

namespace {

double clean_dtw(const IdentityModel& a, const ConditionSpec& ca, const IdentityModel& b,
                 const ConditionSpec& cb, std::size_t length) {
  return distance_or_inf(dtw_distance(render_clean(a, ca, length, "a"),
                                      render_clean(b, cb, length, "b"),
                                      DtwConfig::with_width(30.0)));
}

std::vector<PoseSequence> to_sequences(const BenchmarkDataset& ds) {
  std::vector<PoseSequence> out;
  for (const DatasetRecord& r : ds.records) out.push_back(sequence_from_record(r));
  return out;
}

}  // namespace

TEST_SUITE("synthetic") {

TEST_CASE("identity models are deterministic in the seed") {
  CHECK(generate_identity(17) == generate_identity(17));
  CHECK_FALSE(generate_identity(17) == generate_identity(18));
  const IdentityModel m = generate_identity(5);
  CHECK(m.frequency() > 0.0);
  for (const JointOscillation& o : m.oscillation) {
    CHECK(std::abs(o.amplitude_x) <= GeneratorConfig{}.max_amplitude);
    CHECK(std::abs(o.amplitude_y) <= GeneratorConfig{}.max_amplitude);
  }
}

TEST_CASE("derive_seed separates streams") {
  CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 2));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}

TEST_CASE("default conditions") {
  const auto c = default_conditions(0.05, 0.1);
  REQUIRE(c.size() == 4);
  CHECK(c[0].condition_tag == "clothesA-RGB");
  CHECK(c[3].condition_tag == "clothesB-IR");
  CHECK(c[2].phase_offset == doctest::Approx(std::numbers::pi / 4));
  CHECK(c[1].noise_sigma == 0.05);
  CHECK(default_conditions(0, 0, 2).size() == 2);
}

TEST_CASE("same identity under a phase shift stays well inside the margin") {
  const auto conds = default_conditions();
  const IdentityBank bank = generate_identities(6, 3, conds, 40);
  for (const IdentityModel& m : bank.models) {
    CHECK(clean_dtw(m, conds[0], m, conds[2], 40) < bank.delta_sep / 2.0);
  }
  CHECK(bank.max_intra <= bank.intra_reference);
  CHECK(bank.delta_sep == doctest::Approx(5.0 * bank.intra_reference));
}

TEST_CASE("41 identities are pairwise separated by delta_sep") {
  const auto conds = default_conditions();
  const IdentityBank bank = generate_identities(41, 1, conds, 40);
  REQUIRE(bank.models.size() == 41);
  double nearest = kInfinity;
  for (std::size_t a = 0; a < bank.models.size(); ++a) {
    for (std::size_t b = a + 1; b < bank.models.size(); ++b) {
      for (const ConditionSpec& ca : conds) {
        for (const ConditionSpec& cb : conds) {
          nearest = std::min(nearest, clean_dtw(bank.models[a], ca, bank.models[b], cb, 40));
        }
      }
    }
  }
  CHECK(nearest >= bank.delta_sep);
  CHECK(nearest == doctest::Approx(bank.min_inter));
}

TEST_CASE("heavy dropout still yields a valid sequence") {
  auto conds = default_conditions(0.0, 0.9);
  const IdentityModel m = generate_identity(9);
  const PoseSequence raw = render_sequence(m, conds[1], 40, 99, "x");
  std::size_t invalid = 0;
  for (const KeypointFrame& f : raw.frames()) {
    for (bool v : f.valid) invalid += v ? 0 : 1;
  }
  CHECK(invalid > 40 * 4);
  const PoseSequence filled = impute_sequence(raw);
  CHECK(filled.fully_valid());
}

TEST_CASE("jitter draws are shared across noise levels") {
  const IdentityModel m = generate_identity(4);
  ConditionSpec c = default_conditions()[0];
  const auto clean = render_raw(m, c, 30, 7);
  c.noise_sigma = 0.1;
  const auto small = render_raw(m, c, 30, 7);
  c.noise_sigma = 0.2;
  const auto big = render_raw(m, c, 30, 7);
  for (std::size_t t = 0; t < clean.size(); ++t) {
    for (std::size_t j = 0; j < kCocoJointCount; ++j) {
      const double d1 = small[t].joints[j].x - clean[t].joints[j].x;
      const double d2 = big[t].joints[j].x - clean[t].joints[j].x;
      CHECK(d2 == doctest::Approx(2.0 * d1).epsilon(1e-9));
    }
  }
}

TEST_CASE("benchmark shape, determinism and perfect noise-free retrieval") {
  const auto conds = default_conditions();
  const BenchmarkDataset two = build_benchmark(2, std::span(conds).first(2), 40, 11);
  REQUIRE(two.records.size() == 4);
  const auto seqs = to_sequences(two);
  const auto split = split_by_condition(seqs, "clothesA-RGB");
  const EvalReport r = evaluate(split.queries, make_gallery(split.gallery), MatchSettings{});
  CHECK(r.rank_k.at(1) == 1.0);
  CHECK(r.mean_ap == 1.0);

  const BenchmarkDataset again = build_benchmark(2, std::span(conds).first(2), 40, 11);
  for (std::size_t i = 0; i < two.records.size(); ++i) {
    CHECK(serialize_dataset_record(two.records[i]) == serialize_dataset_record(again.records[i]));
  }
  CHECK(manifest_json(two.manifest) == manifest_json(again.manifest));
  CHECK(two.records[0].id == "id001");
  CHECK(two.records[2].id == "id002");
}

TEST_CASE("benchmark argument checks") {
  const auto conds = default_conditions();
  CHECK_THROWS_AS(build_benchmark(1, conds, 40, 1), Error);
  CHECK_THROWS_AS(build_benchmark(3, std::span(conds).first(1), 40, 1), Error);
  CHECK_THROWS_AS(build_benchmark(3, conds, 10, 1), Error);
  ConditionSpec bad = conds[0];
  bad.dropout_rate = 1.5;
  CHECK_THROWS_AS(bad.validate(), Error);
}

}  // TEST_SUITE
