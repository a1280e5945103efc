#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "temponet/error.hpp"
#include "temponet/formats.hpp"
#include "temponet/optimizer.hpp"
#include "temponet/temporal_graph.hpp"

namespace temponet {

/// Everything that defines a pipeline run. The whole struct (minus the thread
/// count, which must not influence any output byte) is serialized into every
/// output's metadata header and hashed for reproducibility.
struct RunConfig {
  std::string window_start;  // "YYYY-MM-DD"; empty = derive from data
  std::string window_end;
  std::string utc_offset = "+00:00";
  std::string stoplist_path;  // empty = built-in default stoplist
  bool default_stoplist = true;
  std::vector<std::string> query_keywords{"expo2015"};
  std::string edge_mode = "binary";
  std::uint64_t seed = 1;
  int trials = 10;
  double tolerance = 1e-10;
  int max_sweeps = 100;
  int size_floor = 3;
  std::vector<int> frames;
  std::string topic_map_path;
  int top_k = 0;  // 0 = smallest set covering 50% of users
  std::string output_dir = "out";

  unsigned threads = 0;  // execution detail; excluded from hash and headers

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["window_start"] = window_start;
    j["window_end"] = window_end;
    j["utc_offset"] = utc_offset;
    j["stoplist_path"] = stoplist_path;
    j["default_stoplist"] = default_stoplist;
    j["query_keywords"] = query_keywords;
    j["edge_mode"] = edge_mode;
    j["seed"] = seed;
    j["trials"] = trials;
    j["tolerance"] = tolerance;
    j["max_sweeps"] = max_sweeps;
    j["size_floor"] = size_floor;
    j["frames"] = frames;
    j["topic_map_path"] = topic_map_path;
    j["top_k"] = top_k;
    j["output_dir"] = output_dir;
    return j;
  }

  static RunConfig from_json(const nlohmann::json& j) {
    RunConfig cfg;
    auto get = [&](const char* key, auto& field) {
      if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("window_start", cfg.window_start);
    get("window_end", cfg.window_end);
    get("utc_offset", cfg.utc_offset);
    get("stoplist_path", cfg.stoplist_path);
    get("default_stoplist", cfg.default_stoplist);
    get("query_keywords", cfg.query_keywords);
    get("edge_mode", cfg.edge_mode);
    get("seed", cfg.seed);
    get("trials", cfg.trials);
    get("tolerance", cfg.tolerance);
    get("max_sweeps", cfg.max_sweeps);
    get("size_floor", cfg.size_floor);
    get("frames", cfg.frames);
    get("topic_map_path", cfg.topic_map_path);
    get("top_k", cfg.top_k);
    get("output_dir", cfg.output_dir);
    return cfg;
  }

  std::string canonical_json() const { return to_json().dump(); }

  std::string hash() const { return to_hex16(fnv1a64(canonical_json())); }

  MetaInfo meta() const {
    MetaInfo meta;
    meta.config_hash = hash();
    meta.seed = seed;
    meta.config_json = canonical_json();
    return meta;
  }

  EdgeMode parsed_edge_mode() const {
    if (edge_mode == "binary") return EdgeMode::binary;
    if (edge_mode == "weighted") return EdgeMode::weighted;
    throw ArgumentError("edge_mode must be 'binary' or 'weighted', got '" +
                        edge_mode + "'");
  }

  OptimizeConfig optimize_config() const {
    OptimizeConfig cfg;
    cfg.n_trials = trials;
    cfg.seed = seed;
    cfg.max_sweeps = max_sweeps;
    cfg.tolerance = tolerance;
    cfg.threads = threads;
    return cfg;
  }
};

}  // namespace temponet
