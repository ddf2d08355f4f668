// Copyright 2026 The posedtw Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <vector>

#include "posedtw/cost_model.hpp"
#include "posedtw/retrieval.hpp"
#include "posedtw/synthetic.hpp"

using namespace posedtw;

namespace {

// One synthetic 25-identity, 4-condition benchmark shared by every case.
struct Fixture {
  std::vector<PoseSequence> sequences;
  std::vector<GalleryEntry> gallery;
  PoseSequence probe;

  static const Fixture& get() {
    static const Fixture f = [] {
      const auto conds = default_conditions(0.02);
      const BenchmarkDataset ds = build_benchmark(25, conds, 40, 1);
      std::vector<PoseSequence> seqs;
      for (const DatasetRecord& r : ds.records) seqs.push_back(sequence_from_record(r));
      auto gallery = make_gallery(seqs);
      PoseSequence probe = seqs.front();
      return Fixture{std::move(seqs), std::move(gallery), std::move(probe)};
    }();
    return f;
  }
};

void BM_DtwPair(benchmark::State& state) {
  const Fixture& f = Fixture::get();
  const auto& a = f.gallery[0].features;
  const auto& b = f.gallery[5].features;
  const DtwConfig cfg = state.range(0) < 0 ? DtwConfig::unconstrained()
                                           : DtwConfig::with_width(static_cast<double>(state.range(0)));
  std::uint64_t cells = 0;
  for (auto _ : state) {
    const DtwOutcome out = dtw_distance(std::span<const FeatureVector>(a),
                                        std::span<const FeatureVector>(b), cfg);
    cells += cells_evaluated(out);
    benchmark::DoNotOptimize(out);
  }
  state.counters["cells/s"] = benchmark::Counter(static_cast<double>(cells), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_DtwPair)->Arg(-1)->Arg(10)->Arg(20)->Arg(30);

void BM_LowerBound(benchmark::State& state) {
  const Fixture& f = Fixture::get();
  for (auto _ : state) {
    double acc = 0.0;
    for (const GalleryEntry& g : f.gallery) acc += lb_kim(f.gallery[0].lb, g.lb);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.gallery.size()));
}
BENCHMARK(BM_LowerBound);

void BM_MatchQuery(benchmark::State& state) {
  const Fixture& f = Fixture::get();
  const StrategySet strategies = StrategySet::from_bits(static_cast<std::uint8_t>(state.range(0)));
  const MatchSettings settings = restrict_to(MatchSettings::recommended(), strategies);
  for (auto _ : state) {
    benchmark::DoNotOptimize(match_query(f.probe, f.gallery, settings));
  }
  state.SetLabel(strategies.to_string());
}
BENCHMARK(BM_MatchQuery)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->Arg(7);

void BM_MatchQueryWorkers(benchmark::State& state) {
  const Fixture& f = Fixture::get();
  MatchSettings settings = restrict_to(MatchSettings::recommended(), StrategySet::none());
  settings.workers = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(match_query(f.probe, f.gallery, settings));
  }
}
BENCHMARK(BM_MatchQueryWorkers)->Arg(1)->Arg(2)->Arg(4)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
