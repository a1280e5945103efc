// Command-line front end for the temponet pipeline:
//   synth -> ingest -> build -> detect -> analyze -> report
// All stages are driven by one JSON config, overridable per flag; every
// output carries the serialized config and its hash, so equal configurations
// reproduce byte-identical files regardless of --threads.

#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "temponet/pipeline.hpp"
#include "temponet/temponet.hpp"

namespace tn = temponet;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct CommonFlags {
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<std::string> window_start;
  std::optional<std::string> window_end;
  std::optional<std::string> utc_offset;
  std::optional<std::string> stoplist;
  std::optional<bool> default_stoplist;
  std::optional<std::vector<std::string>> query_keywords;
  std::optional<std::string> mode;
  std::optional<int> trials;
  std::optional<double> tolerance;
  std::optional<int> sweeps;
  std::optional<int> floor;
  std::optional<std::vector<int>> frames;
  std::optional<std::string> topics;
  std::optional<int> top_k;
};

void add_common_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "JSON config file");
  cmd->add_option("--out", f.out_dir, "output directory");
  cmd->add_option("--seed", f.seed, "master random seed");
  cmd->add_option("--threads", f.threads,
                  "worker threads (0 = hardware); never changes results");
  cmd->add_option("--window-start", f.window_start, "first day, YYYY-MM-DD");
  cmd->add_option("--window-end", f.window_end, "last day, YYYY-MM-DD");
  cmd->add_option("--utc-offset", f.utc_offset,
                  "fixed UTC offset for day boundaries, e.g. +02:00");
  cmd->add_option("--stoplist", f.stoplist, "extra stoplist file");
  cmd->add_flag("--default-stoplist,!--no-default-stoplist", f.default_stoplist,
                "apply the built-in generic stoplist");
  cmd->add_option("--query-keywords", f.query_keywords,
                  "query keywords to strip from hashtag lists")
      ->delimiter(',');
  cmd->add_option("--mode", f.mode, "edge mode: binary or weighted");
  cmd->add_option("--trials", f.trials, "optimizer restarts");
  cmd->add_option("--tolerance", f.tolerance, "optimizer sweep tolerance, bits");
  cmd->add_option("--sweeps", f.sweeps, "max sweeps per optimizer level");
  cmd->add_option("--floor", f.floor, "community size floor for reporting");
  cmd->add_option("--frames", f.frames, "frame lengths for frame-ratio analysis")
      ->delimiter(',');
  cmd->add_option("--topics", f.topics, "topic map JSON file");
  cmd->add_option("--top-k", f.top_k,
                  "communities in the evolution figure (0 = cover 50% of users)");
}

tn::RunConfig resolve_config(const CommonFlags& f) {
  tn::RunConfig cfg;
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw tn::IoError("cannot read config " + f.config_path);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) {
      throw tn::FormatError("config is not valid JSON: " + f.config_path);
    }
    cfg = tn::RunConfig::from_json(j);
  }
  if (f.out_dir) cfg.output_dir = *f.out_dir;
  if (f.seed) cfg.seed = *f.seed;
  if (f.threads) cfg.threads = *f.threads;
  if (f.window_start) cfg.window_start = *f.window_start;
  if (f.window_end) cfg.window_end = *f.window_end;
  if (f.utc_offset) cfg.utc_offset = *f.utc_offset;
  if (f.stoplist) cfg.stoplist_path = *f.stoplist;
  if (f.default_stoplist) cfg.default_stoplist = *f.default_stoplist;
  if (f.query_keywords) cfg.query_keywords = *f.query_keywords;
  if (f.mode) cfg.edge_mode = *f.mode;
  if (f.trials) cfg.trials = *f.trials;
  if (f.tolerance) cfg.tolerance = *f.tolerance;
  if (f.sweeps) cfg.max_sweeps = *f.sweeps;
  if (f.floor) cfg.size_floor = *f.floor;
  if (f.frames) cfg.frames = *f.frames;
  if (f.topics) cfg.topic_map_path = *f.topics;
  if (f.top_k) cfg.top_k = *f.top_k;

  if (cfg.trials < 1) throw tn::ArgumentError("--trials must be >= 1");
  if (cfg.size_floor < 0) throw tn::ArgumentError("--floor must be >= 0");
  cfg.parsed_edge_mode();              // validate
  tn::parse_utc_offset(cfg.utc_offset);  // validate
  return cfg;
}

tn::InputFormat format_for(const std::string& flag, const std::string& path) {
  if (flag == "jsonl") return tn::InputFormat::jsonl;
  if (flag == "csv") return tn::InputFormat::csv;
  if (!flag.empty()) {
    throw tn::ArgumentError("--format must be jsonl or csv, got '" + flag + "'");
  }
  return fs::path(path).extension() == ".csv" ? tn::InputFormat::csv
                                              : tn::InputFormat::jsonl;
}

void run_ingest(const tn::RunConfig& cfg, const std::string& input,
                const std::string& format_flag) {
  const auto summary = tn::pipeline::stage_ingest(
      cfg.output_dir, cfg, input, format_for(format_flag, input));
  std::cerr << "ingest: " << summary.parsed << " parsed, " << summary.malformed
            << " malformed, " << summary.stoplist_dropped
            << " emptied by stoplist, " << summary.out_of_window
            << " outside window, " << summary.kept << " kept over "
            << summary.n_days << " days\n";
}

void run_detect(const tn::RunConfig& cfg) {
  const auto summary = tn::pipeline::stage_detect(cfg.output_dir, cfg);
  if (summary.empty) {
    std::cerr << "warning: network has no edges; every node is its own "
                 "community\n";
  }
  std::cerr << "detect: " << summary.n_nodes << " nodes, " << summary.n_edges
            << " edges, " << summary.n_modules << " communities, L = "
            << summary.codelength_bits << " bits\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"temporal hashtag co-occurrence networks and map-equation "
               "community analysis"};
  app.require_subcommand(1);

  CommonFlags flags;

  // synth
  auto* synth = app.add_subcommand(
      "synth", "generate a planted-community post stream");
  add_common_flags(synth, flags);
  tn::PlantedSpec spec;
  synth->add_option("--communities", spec.n_communities, "planted communities");
  synth->add_option("--users", spec.users_per_community, "users per community");
  synth->add_option("--days", spec.days, "days of activity");
  synth->add_option("--pool", spec.pool_size, "hashtags per community pool");
  synth->add_option("--rate", spec.post_rate, "per-day posting probability");
  synth->add_option("--cross-talk", spec.cross_talk,
                    "probability of borrowing another community's hashtag");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "parse, filter and day-bin posts");
  add_common_flags(ingest, flags);
  std::string ingest_input;
  std::string ingest_format;
  ingest->add_option("--input", ingest_input, "post file (JSONL or CSV)")
      ->required();
  ingest->add_option("--format", ingest_format, "jsonl or csv");

  // build
  auto* build = app.add_subcommand("build", "build the network and its stats");
  add_common_flags(build, flags);

  // detect
  auto* detect = app.add_subcommand("detect",
                                    "build the network and optimize the map "
                                    "equation");
  add_common_flags(detect, flags);

  // analyze
  auto* analyze = app.add_subcommand("analyze", "write community timelines");
  add_common_flags(analyze, flags);

  // report
  auto* report = app.add_subcommand("report",
                                    "emit figure CSVs, SVG plots and summary");
  add_common_flags(report, flags);

  // all
  auto* all = app.add_subcommand("all", "ingest, build, detect, analyze, report");
  add_common_flags(all, flags);
  std::string all_input;
  std::string all_format;
  all->add_option("--input", all_input, "post file (JSONL or CSV)")->required();
  all->add_option("--format", all_format, "jsonl or csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const tn::RunConfig cfg = resolve_config(flags);
    if (synth->parsed()) {
      spec.seed = cfg.seed;
      if (!cfg.window_start.empty()) {
        spec.start_date = tn::parse_date(cfg.window_start);
      }
      tn::pipeline::stage_synth(cfg.output_dir, cfg, spec);
      std::cerr << "synth: " << spec.n_communities << " communities x "
                << spec.users_per_community << " users x " << spec.days
                << " days -> " << cfg.output_dir << "/"
                << tn::pipeline::kPostsFile << '\n';
    } else if (ingest->parsed()) {
      run_ingest(cfg, ingest_input, ingest_format);
    } else if (build->parsed()) {
      tn::pipeline::stage_build(cfg.output_dir, cfg);
      std::cerr << "build: wrote " << cfg.output_dir << "/"
                << tn::pipeline::kGraphFile << '\n';
    } else if (detect->parsed()) {
      run_detect(cfg);
    } else if (analyze->parsed()) {
      tn::pipeline::stage_analyze(cfg.output_dir, cfg);
      std::cerr << "analyze: wrote " << cfg.output_dir << "/"
                << tn::pipeline::kTimelinesFile << '\n';
    } else if (report->parsed()) {
      tn::pipeline::stage_report(cfg.output_dir, cfg);
      std::cerr << "report: wrote figures and summary to " << cfg.output_dir
                << '\n';
    } else if (all->parsed()) {
      run_ingest(cfg, all_input, all_format);
      tn::pipeline::stage_build(cfg.output_dir, cfg);
      run_detect(cfg);
      tn::pipeline::stage_analyze(cfg.output_dir, cfg);
      tn::pipeline::stage_report(cfg.output_dir, cfg);
      std::cerr << "all: pipeline complete in " << cfg.output_dir << '\n';
    }
  } catch (const tn::ArgumentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const tn::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}
