// Copyright 2026 The posedtw Authors
// SPDX-License-Identifier: Apache-2.0

#include "posedtw/cost_model.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <sstream>

#include "posedtw/errors.hpp"

namespace posedtw {

namespace {

constexpr std::array<std::pair<Strategy, std::string_view>, 3> kNames{{
    {Strategy::kGlobalConstraint, "GC"},
    {Strategy::kLowerBound, "LB"},
    {Strategy::kEarlyAbandon, "EA"},
}};

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::string StrategySet::to_string() const {
  if (bits_ == 0) return "none";
  std::string out;
  for (const auto& [s, name] : kNames) {
    if (!contains(s)) continue;
    if (!out.empty()) out += '+';
    out += name;
  }
  return out;
}

StrategySet StrategySet::parse(std::string_view text) {
  const std::string t = upper(text);
  if (t.empty() || t == "NONE" || t == "{}") return none();
  if (t == "ALL") return all();
  StrategySet out;
  std::size_t start = 0;
  while (start <= t.size()) {
    std::size_t end = t.find_first_of("+,", start);
    if (end == std::string::npos) end = t.size();
    const std::string token = t.substr(start, end - start);
    bool known = false;
    for (const auto& [s, name] : kNames) {
      if (token == name) {
        out.bits_ |= static_cast<std::uint8_t>(s);
        known = true;
      }
    }
    if (!known) fail(ErrorCode::kInvalidArgument, "unknown strategy '" + token + "'");
    start = end + 1;
  }
  return out;
}

std::vector<StrategySet> canonical_strategy_sets() {
  return {StrategySet::none(),
          {Strategy::kGlobalConstraint},
          {Strategy::kLowerBound},
          {Strategy::kEarlyAbandon},
          StrategySet::all()};
}

std::uint64_t s_out(std::size_t m, std::size_t n, double width) noexcept {
  return static_cast<std::uint64_t>(m) * n - band_cell_count(m, n, width);
}

double predicted_cost(StrategySet strategies, std::uint64_t N, std::uint64_t m, std::uint64_t n,
                      std::uint64_t S_out, std::uint64_t V, double k) noexcept {
  const double pairs =
      static_cast<double>(strategies.contains(Strategy::kLowerBound) ? N - V : N);
  const double cells = static_cast<double>(
      strategies.contains(Strategy::kGlobalConstraint) ? m * n - S_out : m * n);
  const double fraction = strategies.contains(Strategy::kEarlyAbandon) ? k : 1.0;
  return pairs * cells * fraction;
}

MatchSettings restrict_to(const MatchSettings& base, StrategySet strategies) {
  MatchSettings out = base;
  if (!strategies.contains(Strategy::kGlobalConstraint)) out.dtw.window = std::monostate{};
  if (!strategies.contains(Strategy::kLowerBound)) out.epsilon = kInfinity;
  if (!strategies.contains(Strategy::kEarlyAbandon)) out.dtw.abandon_threshold = kInfinity;
  return out;
}

double CostReport::predicted_for(StrategySet s) const {
  const auto it = predicted.find(s.to_string());
  return it == predicted.end() ? 0.0 : it->second;
}

CostReport build_cost_report(std::span<const std::vector<PairScore>> per_query_scores,
                             std::span<const std::size_t> query_lengths,
                             std::span<const GalleryEntry> gallery, const MatchSettings& settings,
                             StrategySet strategies) {
  if (per_query_scores.size() != query_lengths.size()) {
    fail(ErrorCode::kInvalidArgument, "cost report: score/length count mismatch");
  }
  CostReport r;
  r.strategies = strategies;

  struct PairGeometry {
    std::uint64_t full;
    std::uint64_t band;
    bool survives;
  };
  std::vector<PairGeometry> pairs;
  double k_sum = 0.0;
  std::uint64_t k_count = 0;

  for (std::size_t q = 0; q < per_query_scores.size(); ++q) {
    const auto& scores = per_query_scores[q];
    if (scores.size() != gallery.size()) {
      fail(ErrorCode::kInvalidArgument, "cost report: score count differs from gallery size");
    }
    const std::size_t m = query_lengths[q];
    for (std::size_t i = 0; i < scores.size(); ++i) {
      const std::size_t n = gallery[i].sequence.size();
      const PairScore& s = scores[i];
      const std::uint64_t full = static_cast<std::uint64_t>(m) * n;
      const std::uint64_t band = band_cell_count(m, n, settings.dtw.width_for(m, n));
      const bool survives = passes_lower_bound(s.lower_bound, settings.epsilon, m, n);
      pairs.push_back({full, band, survives});

      if (r.N == 0) {
        r.m = m;
        r.n = n;
      } else if (r.m != m || r.n != n) {
        r.uniform_lengths = false;
      }
      ++r.N;
      r.cells_full += full;
      r.cells_in_band += band;
      if (!survives) ++r.V;
      if (s.status == MatchStatus::kAbandoned) ++r.abandoned;
      r.measured_cells += s.cells_evaluated;
      if (s.status != MatchStatus::kFiltered && s.cells_in_band > 0) {
        k_sum += static_cast<double>(s.cells_evaluated) / static_cast<double>(s.cells_in_band);
        ++k_count;
      }
    }
  }
  if (!r.uniform_lengths) {
    r.m = 0;
    r.n = 0;
  }
  if (r.uniform_lengths && r.N > 0) r.S_out = pairs.front().full - pairs.front().band;
  r.k = k_count == 0 ? 1.0 : k_sum / static_cast<double>(k_count);

  for (std::uint8_t bits = 0; bits < 8; ++bits) {
    const StrategySet s = StrategySet::from_bits(bits);
    double total = 0.0;
    for (const PairGeometry& p : pairs) {
      if (s.contains(Strategy::kLowerBound) && !p.survives) continue;
      total += static_cast<double>(s.contains(Strategy::kGlobalConstraint) ? p.band : p.full);
    }
    if (s.contains(Strategy::kEarlyAbandon)) total *= r.k;
    r.predicted[s.to_string()] = total;
  }
  return r;
}

CostReport measure_workload(std::span<const PoseSequence> queries,
                            std::span<const GalleryEntry> gallery, const MatchSettings& settings,
                            StrategySet strategies) {
  const MatchSettings active = restrict_to(settings, strategies);
  const auto start = std::chrono::steady_clock::now();
  std::vector<std::vector<PairScore>> scores;
  std::vector<std::size_t> lengths;
  scores.reserve(queries.size());
  for (const PoseSequence& q : queries) {
    scores.push_back(score_gallery(q, gallery, active));
    lengths.push_back(q.size());
  }
  const auto stop = std::chrono::steady_clock::now();
  CostReport r = build_cost_report(scores, lengths, gallery, settings, strategies);
  r.wall_seconds = std::chrono::duration<double>(stop - start).count();
  return r;
}

CostReport measure_run(const PoseSequence& query, std::span<const GalleryEntry> gallery,
                       const MatchSettings& settings, StrategySet strategies) {
  return measure_workload(std::span<const PoseSequence>(&query, 1), gallery, settings, strategies);
}

OrderingVerdict check_cost_ordering(const std::map<StrategySet, CostReport>& reports) {
  const auto sets = canonical_strategy_sets();
  for (StrategySet s : sets) {
    if (!reports.contains(s)) {
      return {false, "missing measurement for " + s.to_string()};
    }
  }
  const std::uint64_t none = reports.at(StrategySet::none()).measured_cells;
  const std::uint64_t combined = reports.at(StrategySet::all()).measured_cells;
  std::ostringstream detail;
  bool holds = true;
  detail << "GC+LB+EA=" << combined;
  for (std::size_t i = 1; i + 1 < sets.size(); ++i) {
    const std::uint64_t single = reports.at(sets[i]).measured_cells;
    detail << " " << sets[i].to_string() << "=" << single;
    holds = holds && combined <= single && single <= none;
  }
  detail << " none=" << none;
  return {holds, detail.str()};
}

}  // namespace posedtw
