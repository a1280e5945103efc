#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "temponet/formats.hpp"
#include "temponet/labels.hpp"
#include "temponet/optimizer.hpp"
#include "temponet/run_config.hpp"
#include "temponet/svg.hpp"
#include "temponet/synth.hpp"
#include "temponet/timelines.hpp"

namespace temponet::pipeline {

namespace fs = std::filesystem;

inline constexpr const char* kPostsFile = "posts.jsonl";
inline constexpr const char* kTruthFile = "truth.tsv";
inline constexpr const char* kRecordsFile = "records.tsv";
inline constexpr const char* kIngestReport = "ingest_report.json";
inline constexpr const char* kGraphFile = "graph.tsv";
inline constexpr const char* kStatsFile = "stats.json";
inline constexpr const char* kPartitionFile = "partition.tsv";
inline constexpr const char* kCodelengthFile = "codelength.json";
inline constexpr const char* kTimelinesFile = "timelines.jsonl";
inline constexpr const char* kSummaryFile = "summary.json";

namespace detail {

inline void write_file(const fs::path& path,
                       const std::function<void(std::ostream&)>& body) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  body(out);
  if (!out) throw IoError("write failed: " + path.string());
}

inline std::ifstream open_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  return in;
}

inline RecordStore load_records(const fs::path& out_dir) {
  auto in = open_file(out_dir / kRecordsFile);
  return read_records_tsv(in);
}

inline Stoplist make_stoplist(const RunConfig& cfg) {
  Stoplist stoplist;
  if (cfg.default_stoplist) stoplist = Stoplist::defaults();
  stoplist.query_keywords.clear();
  for (const auto& kw : cfg.query_keywords) {
    const std::string tag = normalize_hashtag(kw);
    if (!tag.empty()) stoplist.query_keywords.insert(tag);
  }
  if (!cfg.stoplist_path.empty()) {
    auto in = open_file(cfg.stoplist_path);
    for (auto& tag : load_stoplist(in)) stoplist.generic.insert(tag);
  }
  return stoplist;
}

inline TemporalGraph build_from_store(const RecordStore& store,
                                      const RunConfig& cfg) {
  BuildOptions opts;
  opts.threads = cfg.threads;
  opts.on_warning = [](const std::string& msg) {
    std::cerr << "warning: " << msg << '\n';
  };
  return build_network(store.days, cfg.parsed_edge_mode(), opts);
}

/// Partition rows joined back onto graph nodes by (user, day).
inline Partition partition_for_graph(const TemporalGraph& tg,
                                     const std::vector<NodeLabel>& rows) {
  if (rows.size() != tg.num_nodes()) {
    throw FormatError("partition covers " + std::to_string(rows.size()) +
                      " nodes but the graph has " +
                      std::to_string(tg.num_nodes()));
  }
  std::unordered_map<std::string, std::uint32_t> by_key;
  by_key.reserve(rows.size());
  for (const auto& r : rows) {
    by_key[r.user + '\t' + std::to_string(r.day)] = r.community;
  }
  std::vector<std::uint32_t> labels(tg.num_nodes());
  for (std::size_t i = 0; i < tg.num_nodes(); ++i) {
    const auto it = by_key.find(tg.nodes[i].user + '\t' +
                                std::to_string(tg.nodes[i].day));
    if (it == by_key.end()) {
      throw FormatError("partition misses node " + tg.nodes[i].user + "/" +
                        std::to_string(tg.nodes[i].day));
    }
    labels[i] = it->second;
  }
  return Partition::from_labels(labels);
}

inline TopicMap load_topics(const RunConfig& cfg) {
  if (cfg.topic_map_path.empty()) return {};
  auto in = open_file(cfg.topic_map_path);
  return load_topic_map(in);
}

}  // namespace detail

/// Writes a planted post stream (the same JSONL the ingest stage consumes)
/// plus its ground-truth labels.
inline void stage_synth(const fs::path& out_dir, const RunConfig& cfg,
                        const PlantedSpec& spec) {
  const PlantedData data = generate_planted(spec);
  const MetaInfo meta = cfg.meta();
  detail::write_file(out_dir / kPostsFile, [&](std::ostream& out) {
    nlohmann::json header;
    header["meta"] = meta_to_json(meta);
    out << header.dump() << '\n';
    for (const auto& rec : data.posts) {
      nlohmann::json j;
      j["user"] = rec.user;
      j["time"] = rec.time;
      j["hashtags"] = rec.hashtags;
      out << j.dump() << '\n';
    }
  });
  detail::write_file(out_dir / kTruthFile, [&](std::ostream& out) {
    write_labels_tsv(out, data.truth, meta);
  });
}

struct IngestSummary {
  std::size_t lines = 0;
  std::size_t parsed = 0;
  std::size_t malformed = 0;
  std::size_t stoplist_dropped = 0;
  std::size_t out_of_window = 0;
  std::size_t kept = 0;
  int n_days = 0;
};

/// Parses, normalizes, filters and day-bins a post file into the record store.
inline IngestSummary stage_ingest(const fs::path& out_dir, const RunConfig& cfg,
                                  const fs::path& input, InputFormat format) {
  auto in = detail::open_file(input);
  ParseResult parsed = parse_posts(in, format);

  const Stoplist stoplist = detail::make_stoplist(cfg);
  FilterOutcome filtered = apply_stoplist(std::move(parsed.records), stoplist);

  const int offset = parse_utc_offset(cfg.utc_offset);
  CivilDate start{1970, 1, 1}, end{1970, 1, 1};
  if (!cfg.window_start.empty() && !cfg.window_end.empty()) {
    start = parse_date(cfg.window_start);
    end = parse_date(cfg.window_end);
  } else if (!filtered.records.empty()) {
    std::tie(start, end) = data_window(filtered.records, offset);
  }
  BinnedDays binned = bin_by_day(filtered.records, start, end, offset);

  IngestSummary summary;
  summary.lines = parsed.stats.lines;
  summary.parsed = parsed.stats.parsed;
  summary.malformed = parsed.stats.malformed;
  summary.stoplist_dropped = filtered.dropped_records;
  summary.out_of_window = binned.discarded;
  summary.kept = filtered.records.size() - binned.discarded;
  summary.n_days = binned.binning.n_days;

  const MetaInfo meta = cfg.meta();
  RecordStore store{binned.binning, std::move(binned.days)};
  detail::write_file(out_dir / kRecordsFile, [&](std::ostream& out) {
    write_records_tsv(out, store, meta);
  });
  detail::write_file(out_dir / kIngestReport, [&](std::ostream& out) {
    nlohmann::json j;
    j["meta"] = meta_to_json(meta);
    j["lines"] = summary.lines;
    j["parsed"] = summary.parsed;
    j["malformed"] = summary.malformed;
    j["malformed_samples"] = parsed.stats.samples;
    j["stoplist_dropped"] = summary.stoplist_dropped;
    j["out_of_window"] = summary.out_of_window;
    j["kept"] = summary.kept;
    j["window_start"] = format_date(store.binning.day0);
    j["n_days"] = summary.n_days;
    out << j.dump(2) << '\n';
  });
  return summary;
}

/// Builds the network and writes the graph file plus descriptive stats.
inline void stage_build(const fs::path& out_dir, const RunConfig& cfg) {
  const RecordStore store = detail::load_records(out_dir);
  const TemporalGraph tg = detail::build_from_store(store, cfg);
  const MetaInfo meta = cfg.meta();
  detail::write_file(out_dir / kGraphFile, [&](std::ostream& out) {
    write_graph_tsv(out, tg, meta);
  });

  // Exact clustering is quadratic in neighborhood size; big graphs get the
  // seeded sampled estimate instead.
  std::optional<ClusteringSample> sample;
  if (tg.num_nodes() > 50000) {
    sample = ClusteringSample{20000, cfg.seed};
  }
  const GraphStats stats = compute_stats(tg.graph, sample);
  detail::write_file(out_dir / kStatsFile, [&](std::ostream& out) {
    out << stats_to_json(stats, meta).dump(2) << '\n';
  });
}

struct DetectSummary {
  std::size_t n_nodes = 0;
  std::size_t n_edges = 0;
  std::size_t n_modules = 0;
  double codelength_bits = 0.0;
  bool empty = false;
};

/// Builds the network from the record store and optimizes the map equation.
inline DetectSummary stage_detect(const fs::path& out_dir,
                                  const RunConfig& cfg) {
  const RecordStore store = detail::load_records(out_dir);
  const TemporalGraph tg = detail::build_from_store(store, cfg);
  const MetaInfo meta = cfg.meta();

  DetectSummary summary;
  summary.n_nodes = tg.num_nodes();
  summary.n_edges = tg.num_edges();

  Partition partition;
  CodelengthBreakdown breakdown;
  if (!tg.graph.has_edges()) {
    // Nothing to optimize; every node (if any) is its own community.
    summary.empty = true;
    partition = Partition::singletons(tg.num_nodes());
  } else {
    auto result = optimize(tg.graph, cfg.optimize_config());
    partition = std::move(result.partition);
    breakdown = result.codelength;
  }
  summary.n_modules = partition.n_modules;
  summary.codelength_bits = breakdown.total;

  detail::write_file(out_dir / kPartitionFile, [&](std::ostream& out) {
    write_labels_tsv(out, partition_rows(tg, partition), meta);
  });
  detail::write_file(out_dir / kCodelengthFile, [&](std::ostream& out) {
    out << codelength_to_json(breakdown, cfg.trials, cfg.seed, meta).dump(2)
        << '\n';
  });
  return summary;
}

namespace detail {

struct Analysis {
  RecordStore store;
  TemporalGraph graph;
  Partition partition;
  std::vector<CommunityTimeline> timelines;
};

inline Analysis analyze_run(const fs::path& out_dir, const RunConfig& cfg) {
  Analysis a;
  a.store = load_records(out_dir);
  a.graph = build_from_store(a.store, cfg);
  auto in = open_file(out_dir / kPartitionFile);
  a.partition = partition_for_graph(a.graph, read_labels_tsv(in));
  a.timelines = build_timelines(a.graph, a.partition, a.store.days,
                                static_cast<std::size_t>(cfg.size_floor));
  const TopicMap topics = load_topics(cfg);
  label_topics(a.timelines, topics);
  return a;
}

}  // namespace detail

/// Writes the per-community timelines.
inline void stage_analyze(const fs::path& out_dir, const RunConfig& cfg) {
  const auto a = detail::analyze_run(out_dir, cfg);
  detail::write_file(out_dir / kTimelinesFile, [&](std::ostream& out) {
    write_timelines_jsonl(out, a.timelines, cfg.meta());
  });
}

/// Emits figure-ready CSVs, SVG renderings and the summary report.
inline void stage_report(const fs::path& out_dir, const RunConfig& cfg) {
  const auto a = detail::analyze_run(out_dir, cfg);
  const MetaInfo meta = cfg.meta();

  // degree distribution
  const auto hist = degree_distribution(a.graph.graph);
  detail::write_file(out_dir / "fig1a_degree.csv", [&](std::ostream& out) {
    write_degree_csv(out, hist, meta);
  });
  {
    std::vector<std::pair<double, double>> bars;
    for (const auto& [deg, count] : hist) {
      bars.emplace_back(static_cast<double>(deg), static_cast<double>(count));
    }
    detail::write_file(out_dir / "fig1a_degree.svg", [&](std::ostream& out) {
      out << svg::bar_chart("Degree distribution", "degree", "nodes", bars);
    });
  }

  // ranked cumulative community sizes
  const auto curve = cumulative_size_curve(a.timelines);
  detail::write_file(out_dir / "fig1b_cumulative.csv", [&](std::ostream& out) {
    write_cumulative_csv(out, curve, meta);
  });
  {
    svg::Series s{"cumulative", {}};
    for (const auto& [rank, cum] : curve) {
      s.points.emplace_back(static_cast<double>(rank), cum);
    }
    detail::write_file(out_dir / "fig1b_cumulative.svg", [&](std::ostream& out) {
      out << svg::line_chart("Ranked communities vs cumulative users", "rank",
                             "cumulative user fraction", {s});
    });
  }

  // frame-length stability (only when frames are configured: each frame is a
  // full detection run)
  if (!cfg.frames.empty()) {
    DetectSettings settings;
    settings.mode = cfg.parsed_edge_mode();
    settings.optimize = cfg.optimize_config();
    settings.size_floor = static_cast<std::size_t>(cfg.size_floor);
    settings.threads = cfg.threads;
    const auto ratios = frame_ratio_analysis(a.store.days, cfg.frames, settings);
    detail::write_file(out_dir / "fig2_frame_ratio.csv", [&](std::ostream& out) {
      write_frame_ratio_csv(out, ratios, meta);
    });
    svg::Series s{"ratio", {}};
    for (const auto& [n, r] : ratios) {
      s.points.emplace_back(static_cast<double>(n), r);
    }
    detail::write_file(out_dir / "fig2_frame_ratio.svg", [&](std::ostream& out) {
      out << svg::line_chart("Communities in first n days vs full network",
                             "frame length (days)", "ratio", {s}, true);
    });
  }

  // per-day community/user ratio
  const auto ratios = community_user_ratio(a.graph, a.partition);
  const auto day_counts = communities_per_day(a.graph, a.partition);
  detail::write_file(out_dir / "fig4_ratio.csv", [&](std::ostream& out) {
    write_ratio_csv(out, a.graph, ratios, day_counts, meta);
  });
  {
    svg::Series s{"ratio", {}};
    for (std::size_t d = 0; d < ratios.size(); ++d) {
      if (ratios[d]) s.points.emplace_back(static_cast<double>(d), *ratios[d]);
    }
    detail::write_file(out_dir / "fig4_ratio.svg", [&](std::ostream& out) {
      out << svg::line_chart("Communities per user by day", "day",
                             "communities / users", {s});
    });
  }

  // lifespans, full set and top coverage subset
  const std::size_t top_k =
      cfg.top_k > 0 ? static_cast<std::size_t>(cfg.top_k)
                    : coverage_top_k(a.timelines, 0.5);
  const auto lifespans_all = lifespan_distribution(a.timelines);
  const auto lifespans_top = lifespan_distribution(a.timelines, top_k);
  detail::write_file(out_dir / "fig5_lifespan.csv", [&](std::ostream& out) {
    write_lifespan_csv(out, lifespans_all, lifespans_top, meta);
  });
  {
    std::vector<std::pair<double, double>> bars;
    for (const auto& [d, c] : lifespans_all) {
      bars.emplace_back(static_cast<double>(d), static_cast<double>(c));
    }
    detail::write_file(out_dir / "fig5_lifespan.svg", [&](std::ostream& out) {
      out << svg::bar_chart("Community lifespan distribution", "lifespan (days)",
                            "communities", bars);
    });
  }

  // evolution of the largest communities
  std::vector<CommunityTimeline> top(a.timelines.begin(),
                                     a.timelines.begin() +
                                         std::min(top_k, a.timelines.size()));
  detail::write_file(out_dir / "fig3_evolution.csv", [&](std::ostream& out) {
    write_evolution_csv(out, top, meta);
  });
  {
    std::vector<double> xs;
    for (std::int32_t d = 0; d < a.graph.n_days; ++d) {
      xs.push_back(static_cast<double>(d));
    }
    std::vector<svg::Series> series;
    for (const auto& tl : top) {
      svg::Series s{"c" + std::to_string(tl.id), {}};
      for (std::int32_t d = 0; d < a.graph.n_days; ++d) {
        const auto it = tl.daily_counts.find(d);
        s.points.emplace_back(static_cast<double>(d),
                              it == tl.daily_counts.end()
                                  ? 0.0
                                  : static_cast<double>(it->second));
      }
      series.push_back(std::move(s));
    }
    detail::write_file(out_dir / "fig3_evolution.svg", [&](std::ostream& out) {
      out << svg::stacked_area("Evolution of the largest communities", "day",
                               "users", xs, series);
    });
  }

  // summary
  std::size_t at_floor = 0;
  for (const auto size : a.partition.module_sizes()) {
    if (size >= static_cast<std::size_t>(cfg.size_floor)) ++at_floor;
  }
  double ratio_min = 0.0, ratio_max = 0.0;
  bool have_ratio = false;
  for (const auto& r : ratios) {
    if (!r) continue;
    if (!have_ratio) {
      ratio_min = ratio_max = *r;
      have_ratio = true;
    } else {
      ratio_min = std::min(ratio_min, *r);
      ratio_max = std::max(ratio_max, *r);
    }
  }
  detail::write_file(out_dir / kSummaryFile, [&](std::ostream& out) {
    nlohmann::json j;
    j["meta"] = meta_to_json(meta);
    j["n_nodes"] = a.graph.num_nodes();
    j["n_edges"] = a.graph.num_edges();
    j["n_days"] = a.graph.n_days;
    j["n_communities"] = at_floor;  // at the size floor
    j["n_communities_all"] = a.partition.n_modules;
    j["size_floor"] = cfg.size_floor;
    j["top_k"] = top_k;
    if (have_ratio) {
      j["community_user_ratio_min"] = ratio_min;
      j["community_user_ratio_max"] = ratio_max;
    }
    if (a.graph.graph.has_edges()) {
      const auto breakdown = codelength(a.graph.graph, a.partition);
      j["codelength"] = {{"L", breakdown.total},
                         {"index_term", breakdown.index_term},
                         {"module_term", breakdown.module_term}};
    }
    out << j.dump(2) << '\n';
  });
}

}  // namespace temponet::pipeline
