// Copyright 2026 The posedtw Authors
// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "posedtw/cost_model.hpp"
#include "posedtw/dataset_io.hpp"
#include "posedtw/errors.hpp"
#include "posedtw/sweep.hpp"
#include "posedtw/synthetic.hpp"

namespace posedtw::cli {

namespace {

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::logic_error& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
}

void write_text(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty()) {
    fallback << text << '\n';
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) fail(ErrorCode::kInvalidArgument, "cannot write '" + path + "'");
  f << text << '\n';
}

std::string format_threshold(double v) {
  if (std::isinf(v)) return "inf";
  std::ostringstream s;
  s << v;
  return s.str();
}

std::string describe(const MatchSettings& s) {
  std::ostringstream out;
  if (const auto* r = std::get_if<WindowRatio>(&s.dtw.window)) {
    out << "r=" << r->ratio;
  } else if (const auto* w = std::get_if<WindowWidth>(&s.dtw.window)) {
    out << "w=" << format_threshold(w->width);
  } else {
    out << "w=none";
  }
  out << " upsilon=" << format_threshold(s.dtw.abandon_threshold)
      << " epsilon=" << format_threshold(s.epsilon);
  return out.str();
}

std::string percent(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(1) << 100.0 * v << '%';
  return s.str();
}

QueryGallerySplit load_split(const std::string& path, double floor, const std::string& query_cond,
                             const std::vector<std::string>& gallery_conds) {
  const auto sequences = load_sequences(path, floor);
  QueryGallerySplit split = split_by_condition(sequences, query_cond, gallery_conds);
  if (split.queries.empty()) {
    fail(ErrorCode::kInvalidArgument, "no sequences with query condition '" + query_cond + "'");
  }
  if (split.gallery.empty()) fail(ErrorCode::kEmptyGallery, "no gallery sequences selected");
  return split;
}

}  // namespace

MatchSettings MatchFlags::settings() const {
  MatchSettings s;
  if (no_window) {
    s.dtw = DtwConfig::unconstrained();
  } else if (ratio) {
    s.dtw = DtwConfig::with_ratio(*ratio);
  } else {
    s.dtw = DtwConfig::with_width(width);
  }
  s.dtw.abandon_threshold = upsilon;
  s.epsilon = epsilon;
  s.workers = workers == 0 ? 1 : workers;
  s.dtw.validate();
  if (!(epsilon >= 0.0)) fail(ErrorCode::kInvalidArgument, "epsilon must be >= 0");
  return s;
}

int cmd_ingest(const IngestOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::ifstream in(opts.input);
    if (!in) fail(ErrorCode::kInvalidArgument, "cannot open '" + opts.input + "'");
    std::vector<std::string> lines;
    std::size_t total = 0;
    std::size_t skipped = 0;
    for_each_line(in, [&](std::size_t number, std::string_view line) {
      ++total;
      DatasetRecord rec;
      try {
        rec = parse_dataset_record(line);
      } catch (const Error& e) {
        throw Error(e.code(), "line " + std::to_string(number) + ": " + e.what());
      }
      try {
        lines.push_back(serialize_normalized(sequence_from_record(rec, opts.confidence_floor)));
      } catch (const Error& e) {
        ++skipped;
        err << "line " << number << ": skipped record '" << rec.id << "': " << e.what() << '\n';
      }
    });
    write_lines(opts.output, lines);
    out << "ingested " << lines.size() << " of " << total << " records (" << skipped
        << " skipped)\n";
    return static_cast<int>(kExitOk);
  });
}

int cmd_match(const MatchOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const MatchSettings settings = opts.flags.settings();
    if (opts.echo_config) {
      out << settings_json(settings) << '\n';
      return static_cast<int>(kExitOk);
    }
    if (settings.epsilon == 0.0) {
      err << "warning: epsilon = 0 filters every gallery entry; all distances will be +inf\n";
    }
    const auto queries = load_sequences(opts.query_path, opts.flags.confidence_floor);
    const auto gallery_seqs = load_sequences(opts.gallery_path, opts.flags.confidence_floor);
    if (gallery_seqs.empty()) fail(ErrorCode::kEmptyGallery, "gallery file has no records");
    const auto gallery = make_gallery(gallery_seqs);
    std::vector<RankedList> lists;
    lists.reserve(queries.size());
    for (const PoseSequence& q : queries) lists.push_back(match_query(q, gallery, settings));
    write_text(opts.output, ranked_lists_json(lists, settings, opts.top_k), out);
    return static_cast<int>(kExitOk);
  });
}

int cmd_evaluate(const EvaluateOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const MatchSettings settings = opts.flags.settings();
    const auto split = load_split(opts.dataset_path, opts.flags.confidence_floor,
                                  opts.query_condition, opts.gallery_conditions);
    const auto gallery = make_gallery(split.gallery);
    const EvalReport report = evaluate(split.queries, gallery, settings);

    out << "queries: " << split.queries.size() << "  gallery: " << gallery.size() << "  ("
        << describe(settings) << ")\n";
    out << std::left;
    for (std::size_t k : kCmcRanks) out << std::setw(10) << ("Rank-" + std::to_string(k));
    out << "mAP\n";
    for (std::size_t k : kCmcRanks) out << std::setw(10) << percent(report.rank_k.at(k));
    out << percent(report.mean_ap) << '\n';

    if (!opts.json_path.empty()) {
      write_text(opts.json_path,
                 eval_report_json(report, settings, split.queries.size(), gallery.size()), out);
    }
    return static_cast<int>(kExitOk);
  });
}

int cmd_bench(const BenchOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const MatchSettings settings = opts.flags.settings();
    std::vector<StrategySet> sets;
    if (opts.strategies.empty()) {
      sets = canonical_strategy_sets();
    } else {
      for (const std::string& s : opts.strategies) sets.push_back(StrategySet::parse(s));
    }
    const auto split = load_split(opts.dataset_path, opts.flags.confidence_floor,
                                  opts.query_condition, opts.gallery_conditions);
    const auto gallery = make_gallery(split.gallery);

    std::map<StrategySet, CostReport> by_set;
    std::vector<CostReport> reports;
    for (StrategySet s : sets) {
      CostReport r = measure_workload(split.queries, gallery, settings, s);
      by_set[s] = r;
      reports.push_back(std::move(r));
    }

    out << "pairs: " << (reports.empty() ? 0 : reports.front().N) << "  (" << describe(settings)
        << ")\n";
    out << std::left << std::setw(12) << "strategies" << std::right << std::setw(16)
        << "measured" << std::setw(16) << "predicted" << std::setw(8) << "V" << std::setw(10)
        << "k" << std::setw(11) << "abandoned" << '\n';
    for (const CostReport& r : reports) {
      out << std::left << std::setw(12) << r.strategies.to_string() << std::right
          << std::setw(16) << r.measured_cells << std::setw(16) << std::fixed
          << std::setprecision(0) << r.predicted_for(r.strategies) << std::setw(8) << r.V
          << std::setw(10) << std::setprecision(4) << r.k << std::setw(11) << r.abandoned
          << '\n';
      out.unsetf(std::ios::floatfield);
      out << std::setprecision(6);
    }
    bool holds = false;
    const OrderingVerdict verdict = check_cost_ordering(by_set);
    if (verdict.detail.rfind("missing", 0) == 0) {
      out << "ordering: not checked (" << verdict.detail << ")\n";
    } else {
      holds = verdict.holds;
      out << "ordering GC+LB+EA <= {GC,LB,EA} <= none: " << (holds ? "holds" : "VIOLATED")
          << "  [" << verdict.detail << "]\n";
    }
    if (opts.timing) {
      for (const CostReport& r : reports) {
        err << "wall " << r.strategies.to_string() << ": " << r.wall_seconds << " s\n";
      }
    }
    if (!opts.json_path.empty()) {
      write_text(opts.json_path, cost_reports_json(reports, settings, holds, opts.timing), out);
    }
    return static_cast<int>(kExitOk);
  });
}

int cmd_synth(const SynthOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto conditions = default_conditions(opts.noise, opts.dropout, opts.conditions);
    const BenchmarkDataset ds =
        build_benchmark(opts.identities, conditions, opts.frames, opts.seed);
    std::vector<std::string> lines;
    lines.reserve(ds.records.size());
    for (const DatasetRecord& r : ds.records) lines.push_back(serialize_dataset_record(r));
    write_lines(opts.output, lines);
    const std::string manifest =
        opts.manifest.empty() ? opts.output + ".manifest.json" : opts.manifest;
    write_lines(manifest, {manifest_json(ds.manifest)});
    out << "wrote " << lines.size() << " sequences to " << opts.output << " (delta_sep "
        << ds.manifest.delta_sep << ", manifest " << manifest << ")\n";
    return static_cast<int>(kExitOk);
  });
}

int cmd_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::vector<SweepPoint> points;
    const SweepGrid grid{opts.widths, opts.upsilons, opts.epsilons};
    if (opts.plan == "reference") {
      points = reference_sweep_points();
    } else if (opts.plan == "axes") {
      points = axis_points(grid, kDefaultWindowWidth, {}, {});
    } else if (opts.plan == "grid") {
      points = cartesian_points(grid);
    } else {
      fail(ErrorCode::kInvalidArgument, "unknown sweep plan '" + opts.plan + "'");
    }
    const auto split = load_split(opts.dataset_path, opts.confidence_floor, opts.query_condition,
                                  opts.gallery_conditions);
    const auto gallery = make_gallery(split.gallery);
    const auto rows = sweep_hyperparameters(points, split.queries, gallery, opts.workers);

    auto opt = [](const std::optional<double>& v) {
      return v ? format_threshold(*v) : std::string("-");
    };
    out << std::left << std::setw(13) << "group" << std::setw(7) << "w" << std::setw(9)
        << "upsilon" << std::setw(9) << "epsilon" << std::setw(9) << "Rank-1" << std::setw(9)
        << "Rank-5" << std::setw(9) << "mAP" << "cells\n";
    for (const SweepRow& r : rows) {
      out << std::left << std::setw(13) << r.point.group << std::setw(7) << opt(r.point.width)
          << std::setw(9) << opt(r.point.upsilon) << std::setw(9) << opt(r.point.epsilon)
          << std::setw(9) << percent(r.eval.rank_k.at(1)) << std::setw(9)
          << percent(r.eval.rank_k.at(5)) << std::setw(9) << percent(r.eval.mean_ap)
          << r.cost.measured_cells << '\n';
    }
    if (!opts.json_path.empty()) write_text(opts.json_path, sweep_json(rows), out);
    return static_cast<int>(kExitOk);
  });
}

namespace {

void add_match_flags(CLI::App* cmd, MatchFlags& f) {
  cmd->add_option("--w,--width", f.width, "Warping window half-width (frames)")
      ->capture_default_str();
  cmd->add_option("--ratio", f.ratio, "Window as a fraction r of max(m, n); overrides --w");
  cmd->add_flag("--no-window", f.no_window, "Disable the global constraint");
  cmd->add_option("--upsilon", f.upsilon, "Early-abandon threshold on cumulative distance (inf disables)")
      ->capture_default_str();
  cmd->add_option("--epsilon", f.epsilon, "Lower-bound threshold per frame of max(m, n) (inf disables)")
      ->capture_default_str();
  cmd->add_option("--workers", f.workers, "Worker threads for gallery matching")
      ->capture_default_str();
  cmd->add_option("--confidence-floor", f.confidence_floor, "Minimum joint confidence")
      ->capture_default_str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"posedtw: skeleton-sequence DTW matching for person re-identification"};
  app.require_subcommand(1);

  IngestOptions ingest;
  auto* c_ingest = app.add_subcommand("ingest", "Normalize raw keypoint JSONL into 12-joint sequences");
  c_ingest->add_option("input", ingest.input, "Raw JSONL dataset")->required();
  c_ingest->add_option("output", ingest.output, "Normalized JSONL output")->required();
  c_ingest->add_option("--confidence-floor", ingest.confidence_floor, "Minimum joint confidence")
      ->capture_default_str();

  MatchOptions match;
  auto* c_match = app.add_subcommand("match", "Rank gallery sequences for each query");
  c_match->add_option("query", match.query_path, "Query JSONL");
  c_match->add_option("gallery", match.gallery_path, "Gallery JSONL");
  add_match_flags(c_match, match.flags);
  c_match->add_option("--top-k", match.top_k, "Entries per query in the output (0 = all)")
      ->capture_default_str();
  c_match->add_option("-o,--output", match.output, "Write JSON here instead of stdout");
  c_match->add_flag("--echo-config", match.echo_config, "Print the resolved settings and exit");

  EvaluateOptions eval;
  auto* c_eval = app.add_subcommand("evaluate", "CMC and mAP over a query/gallery condition split");
  c_eval->add_option("dataset", eval.dataset_path, "Dataset JSONL")->required();
  c_eval->add_option("--query-condition", eval.query_condition, "Condition tag used as queries")
      ->capture_default_str();
  c_eval->add_option("--gallery-condition", eval.gallery_conditions,
                     "Gallery condition tag (repeatable; default: all others)");
  add_match_flags(c_eval, eval.flags);
  c_eval->add_option("--json", eval.json_path, "Write the JSON report here");

  BenchOptions bench;
  auto* c_bench = app.add_subcommand("bench", "Measured vs predicted DTW cell counts per strategy set");
  c_bench->add_option("dataset", bench.dataset_path, "Dataset JSONL")->required();
  c_bench->add_option("--strategies", bench.strategies,
                      "Strategy sets such as none, GC, LB+EA, all (repeatable; default: the five canonical sets)");
  c_bench->add_option("--query-condition", bench.query_condition, "Condition tag used as queries")
      ->capture_default_str();
  c_bench->add_option("--gallery-condition", bench.gallery_conditions, "Gallery condition tag (repeatable)");
  add_match_flags(c_bench, bench.flags);
  c_bench->add_option("--json", bench.json_path, "Write the JSON report here");
  c_bench->add_flag("--timing", bench.timing, "Report wall-clock time (stderr and JSON)");

  SynthOptions synth;
  auto* c_synth = app.add_subcommand("synth", "Generate a synthetic gait benchmark");
  c_synth->add_option("--identities", synth.identities, "Number of identities")->capture_default_str();
  c_synth->add_option("--conditions", synth.conditions, "Conditions per identity (2-4)")
      ->capture_default_str()
      ->check(CLI::Range(2, 4));
  c_synth->add_option("--frames", synth.frames, "Frames per sequence")->capture_default_str();
  c_synth->add_option("--seed", synth.seed, "Generator seed")->capture_default_str();
  c_synth->add_option("--noise", synth.noise, "Keypoint jitter sigma (normalized units)")
      ->capture_default_str();
  c_synth->add_option("--dropout", synth.dropout, "Limb joint dropout rate in [0,1)")
      ->capture_default_str();
  c_synth->add_option("-o,--output", synth.output, "Dataset JSONL path")->capture_default_str();
  c_synth->add_option("--manifest", synth.manifest, "Manifest JSON path (default: <output>.manifest.json)");

  SweepOptions sweep;
  auto* c_sweep = app.add_subcommand("sweep", "Hyperparameter sweep: Rank-1, mAP and cell counts");
  c_sweep->add_option("dataset", sweep.dataset_path, "Dataset JSONL")->required();
  c_sweep->add_option("--plan", sweep.plan, "reference | axes | grid")->capture_default_str();
  c_sweep->add_option("--w-list", sweep.widths, "Window widths")->capture_default_str();
  c_sweep->add_option("--upsilon-list", sweep.upsilons, "Abandon thresholds")->capture_default_str();
  c_sweep->add_option("--epsilon-list", sweep.epsilons, "Lower-bound thresholds")->capture_default_str();
  c_sweep->add_option("--query-condition", sweep.query_condition, "Condition tag used as queries")
      ->capture_default_str();
  c_sweep->add_option("--gallery-condition", sweep.gallery_conditions, "Gallery condition tag (repeatable)");
  c_sweep->add_option("--workers", sweep.workers, "Worker threads")->capture_default_str();
  c_sweep->add_option("--confidence-floor", sweep.confidence_floor, "Minimum joint confidence")
      ->capture_default_str();
  c_sweep->add_option("--json", sweep.json_path, "Write the JSON rows here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? static_cast<int>(kExitOk) : static_cast<int>(kExitUsage);
  }

  if (c_ingest->parsed()) return cmd_ingest(ingest, out, err);
  if (c_match->parsed()) {
    if (!match.echo_config && (match.query_path.empty() || match.gallery_path.empty())) {
      err << "match: query and gallery paths are required\n";
      return kExitUsage;
    }
    return cmd_match(match, out, err);
  }
  if (c_eval->parsed()) return cmd_evaluate(eval, out, err);
  if (c_bench->parsed()) return cmd_bench(bench, out, err);
  if (c_synth->parsed()) return cmd_synth(synth, out, err);
  if (c_sweep->parsed()) return cmd_sweep(sweep, out, err);
  return kExitUsage;
}

}  // namespace posedtw::cli
