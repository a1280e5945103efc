#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "temponet/calendar.hpp"
#include "temponet/error.hpp"
#include "temponet/labels.hpp"
#include "temponet/map_equation.hpp"
#include "temponet/posts.hpp"
#include "temponet/temporal_graph.hpp"
#include "temponet/timelines.hpp"
#include "temponet/version.hpp"

namespace temponet {

inline std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const char c : data) {
    h ^= static_cast<std::uint8_t>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string to_hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

/// Shortest stable decimal form used in TSV/CSV output.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

/// Reproducibility header carried at the top of every output file.
struct MetaInfo {
  std::string version{kVersion};
  std::string config_hash;      // hex of the canonical config serialization
  std::uint64_t seed = 0;
  std::string config_json;      // canonical single-line config JSON
};

inline void write_meta_lines(std::ostream& out, const MetaInfo& meta,
                             std::string_view prefix = "#meta ") {
  out << prefix << "version=" << meta.version << '\n';
  out << prefix << "config_hash=" << meta.config_hash << '\n';
  out << prefix << "seed=" << meta.seed << '\n';
  if (!meta.config_json.empty()) {
    out << prefix << "config=" << meta.config_json << '\n';
  }
}

inline nlohmann::json meta_to_json(const MetaInfo& meta) {
  nlohmann::json j;
  j["version"] = meta.version;
  j["config_hash"] = meta.config_hash;
  j["seed"] = meta.seed;
  if (!meta.config_json.empty()) {
    j["config"] = nlohmann::json::parse(meta.config_json);
  }
  return j;
}

namespace detail {

inline bool is_meta_line(const std::string& line) {
  return line.rfind("#meta", 0) == 0;
}

inline std::vector<std::string_view> split_tabs(const std::string& line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = line.find('\t', pos);
    if (next == std::string::npos) {
      fields.push_back(std::string_view(line).substr(pos));
      break;
    }
    fields.push_back(std::string_view(line).substr(pos, next - pos));
    pos = next + 1;
  }
  if (!fields.empty() && !fields.back().empty() && fields.back().back() == '\r') {
    fields.back().remove_suffix(1);
  }
  return fields;
}

template <typename T>
T parse_number(std::string_view s, const char* what) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw FormatError(std::string("bad ") + what + ": '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Graph file (TSV): "#nodes" section with "node_id user day" rows, then
// "#edges" with "u v weight" rows. Node ids are dense and 0-based.
// ---------------------------------------------------------------------------

inline void write_graph_tsv(std::ostream& out, const TemporalGraph& tg,
                            const MetaInfo& meta) {
  write_meta_lines(out, meta);
  out << "#days " << tg.n_days << '\n';
  out << "#nodes " << tg.num_nodes() << '\n';
  for (std::size_t i = 0; i < tg.num_nodes(); ++i) {
    out << i << '\t' << tg.nodes[i].user << '\t' << tg.nodes[i].day << '\n';
  }
  out << "#edges " << tg.num_edges() << '\n';
  tg.graph.for_each_pair([&](std::uint32_t u, std::uint32_t v, double w) {
    out << u << '\t' << v << '\t' << format_double(w) << '\n';
  });
}

inline TemporalGraph read_graph_tsv(std::istream& in) {
  if (!in.good()) throw IoError("cannot read graph file");
  TemporalGraph tg;
  std::string line;
  enum class Section { preamble, nodes, edges } section = Section::preamble;
  std::size_t n_nodes = 0, n_edges = 0;
  std::vector<WeightedEdge> edges;
  while (std::getline(in, line)) {
    if (line.empty() || detail::is_meta_line(line)) continue;
    if (line.rfind("#days ", 0) == 0) {
      tg.n_days = detail::parse_number<std::int32_t>(
          std::string_view(line).substr(6), "day count");
      continue;
    }
    if (line.rfind("#nodes", 0) == 0) {
      n_nodes = detail::parse_number<std::size_t>(
          std::string_view(line).substr(7), "node count");
      tg.nodes.reserve(n_nodes);
      section = Section::nodes;
      continue;
    }
    if (line.rfind("#edges", 0) == 0) {
      n_edges = detail::parse_number<std::size_t>(
          std::string_view(line).substr(7), "edge count");
      edges.reserve(n_edges);
      section = Section::edges;
      continue;
    }
    const auto fields = detail::split_tabs(line);
    if (section == Section::nodes) {
      if (fields.size() != 3) throw FormatError("bad node row: " + line);
      const auto id = detail::parse_number<std::size_t>(fields[0], "node id");
      if (id != tg.nodes.size()) {
        throw FormatError("node ids must be dense and ordered");
      }
      tg.nodes.push_back(TemporalNode{
          std::string(fields[1]),
          detail::parse_number<std::int32_t>(fields[2], "day")});
    } else if (section == Section::edges) {
      if (fields.size() != 3) throw FormatError("bad edge row: " + line);
      WeightedEdge e;
      e.u = detail::parse_number<std::uint32_t>(fields[0], "endpoint");
      e.v = detail::parse_number<std::uint32_t>(fields[1], "endpoint");
      e.weight = detail::parse_number<double>(fields[2], "edge weight");
      edges.push_back(e);
    } else {
      throw FormatError("unexpected line before #nodes: " + line);
    }
  }
  if (in.bad()) throw IoError("I/O failure while reading graph file");
  if (tg.nodes.size() != n_nodes || edges.size() != n_edges) {
    throw FormatError("graph file row counts do not match section headers");
  }
  for (std::size_t i = 1; i < tg.nodes.size(); ++i) {
    if (tg.nodes[i - 1].day > tg.nodes[i].day) {
      throw FormatError("graph nodes must be sorted by day");
    }
  }
  if (tg.n_days == 0) {
    for (const auto& nd : tg.nodes) {
      tg.n_days = std::max(tg.n_days, nd.day + 1);
    }
  }
  tg.day_offsets.assign(static_cast<std::size_t>(tg.n_days) + 1, 0);
  for (const auto& nd : tg.nodes) {
    ++tg.day_offsets[static_cast<std::size_t>(nd.day) + 1];
  }
  for (std::size_t d = 1; d < tg.day_offsets.size(); ++d) {
    tg.day_offsets[d] += tg.day_offsets[d - 1];
  }
  tg.graph = WeightedGraph::from_edges(tg.nodes.size(), std::move(edges));
  return tg;
}

// ---------------------------------------------------------------------------
// Label files (TSV): partition and ground truth share the format
// "user day community", sorted by (day, user).
// ---------------------------------------------------------------------------

inline void write_labels_tsv(std::ostream& out, std::vector<NodeLabel> rows,
                             const MetaInfo& meta) {
  std::sort(rows.begin(), rows.end(), label_key_less);
  write_meta_lines(out, meta);
  out << "#fields user day community\n";
  for (const auto& r : rows) {
    out << r.user << '\t' << r.day << '\t' << r.community << '\n';
  }
}

inline std::vector<NodeLabel> read_labels_tsv(std::istream& in) {
  if (!in.good()) throw IoError("cannot read label file");
  std::vector<NodeLabel> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto fields = detail::split_tabs(line);
    if (fields.size() != 3) throw FormatError("bad label row: " + line);
    rows.push_back(NodeLabel{
        std::string(fields[0]),
        detail::parse_number<std::int32_t>(fields[1], "day"),
        detail::parse_number<std::uint32_t>(fields[2], "community")});
  }
  if (in.bad()) throw IoError("I/O failure while reading label file");
  return rows;
}

/// Partition rows in file numbering: communities by decreasing node count.
inline std::vector<NodeLabel> partition_rows(const TemporalGraph& tg,
                                             const Partition& partition) {
  return node_labels(tg, renumber_by_size(partition));
}

// ---------------------------------------------------------------------------
// Normalized record store (TSV): the ingest stage's output, one row per
// retained record with its day index. The resolved window travels in the
// header so later stages re-bin identically.
// ---------------------------------------------------------------------------

struct RecordStore {
  DayBinning binning;
  std::vector<std::vector<PostRecord>> days;
};

inline void write_records_tsv(std::ostream& out, const RecordStore& store,
                              const MetaInfo& meta) {
  write_meta_lines(out, meta);
  out << "#window " << format_date(store.binning.day0) << ' '
      << format_date(civil_from_days(days_from_civil(store.binning.day0) +
                                     store.binning.n_days - 1))
      << '\n';
  out << "#fields user time day hashtags\n";
  for (std::size_t d = 0; d < store.days.size(); ++d) {
    for (const auto& rec : store.days[d]) {
      out << rec.user << '\t' << rec.time << '\t' << d << '\t';
      for (std::size_t k = 0; k < rec.hashtags.size(); ++k) {
        if (k > 0) out << ' ';
        out << rec.hashtags[k];
      }
      out << '\n';
    }
  }
}

inline RecordStore read_records_tsv(std::istream& in) {
  if (!in.good()) throw IoError("cannot read record store");
  RecordStore store;
  std::string line;
  bool window_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || detail::is_meta_line(line) ||
        line.rfind("#fields", 0) == 0) {
      continue;
    }
    if (line.rfind("#window ", 0) == 0) {
      std::istringstream ws(line.substr(8));
      std::string a, b;
      ws >> a >> b;
      store.binning.day0 = parse_date(a);
      store.binning.n_days = static_cast<int>(
          days_from_civil(parse_date(b)) - days_from_civil(parse_date(a)) + 1);
      store.days.resize(static_cast<std::size_t>(store.binning.n_days));
      window_seen = true;
      continue;
    }
    if (!window_seen) throw FormatError("record store misses #window header");
    const auto fields = detail::split_tabs(line);
    if (fields.size() != 4) throw FormatError("bad record row: " + line);
    PostRecord rec;
    rec.user = std::string(fields[0]);
    rec.time = detail::parse_number<std::int64_t>(fields[1], "time");
    const auto day = detail::parse_number<std::size_t>(fields[2], "day");
    if (day >= store.days.size()) {
      throw FormatError("record day outside the stored window");
    }
    std::string_view tags = fields[3];
    while (!tags.empty()) {
      const std::size_t sp = tags.find(' ');
      const std::string_view piece = tags.substr(0, sp);
      if (!piece.empty()) rec.hashtags.emplace_back(piece);
      if (sp == std::string_view::npos) break;
      tags.remove_prefix(sp + 1);
    }
    store.days[day].push_back(std::move(rec));
  }
  if (in.bad()) throw IoError("I/O failure while reading record store");
  if (!window_seen && !store.days.empty()) {
    throw FormatError("record store misses #window header");
  }
  return store;
}

// ---------------------------------------------------------------------------
// JSON reports
// ---------------------------------------------------------------------------

inline nlohmann::json stats_to_json(const GraphStats& stats,
                                    const MetaInfo& meta) {
  nlohmann::json j;
  j["meta"] = meta_to_json(meta);
  j["n_nodes"] = stats.n_nodes;
  j["n_edges"] = stats.n_edges;
  nlohmann::json hist = nlohmann::json::object();
  for (const auto& [deg, count] : stats.degree_histogram) {
    hist[std::to_string(deg)] = count;
  }
  j["degree_histogram"] = hist;
  if (stats.avg_local_clustering) {
    j["avg_local_clustering"] = *stats.avg_local_clustering;
  } else {
    j["avg_local_clustering"] = nullptr;
  }
  return j;
}

inline nlohmann::json codelength_to_json(const CodelengthBreakdown& breakdown,
                                         int n_trials, std::uint64_t seed,
                                         const MetaInfo& meta) {
  nlohmann::json j;
  j["meta"] = meta_to_json(meta);
  j["L"] = breakdown.total;
  j["index_term"] = breakdown.index_term;
  j["module_term"] = breakdown.module_term;
  j["n_modules"] = breakdown.n_modules;
  j["n_trials"] = n_trials;
  j["seed"] = seed;
  return j;
}

inline void write_timelines_jsonl(std::ostream& out,
                                  const std::vector<CommunityTimeline>& tls,
                                  const MetaInfo& meta) {
  nlohmann::json header;
  header["meta"] = meta_to_json(meta);
  out << header.dump() << '\n';
  for (const auto& tl : tls) {
    nlohmann::json j;
    j["id"] = tl.id;
    j["first_day"] = tl.first_day;
    j["last_day"] = tl.last_day;
    j["lifespan"] = tl.lifespan;
    j["total_users"] = tl.total_users;
    nlohmann::json daily = nlohmann::json::object();
    for (const auto& [day, count] : tl.daily_counts) {
      daily[std::to_string(day)] = count;
    }
    j["daily_counts"] = daily;
    nlohmann::json tags = nlohmann::json::array();
    for (const auto& [tag, count] : tl.top_hashtags) {
      tags.push_back(nlohmann::json::array({tag, count}));
    }
    j["top_hashtags"] = tags;
    j["topic"] = tl.topic;
    out << j.dump() << '\n';
  }
}

/// Topic map file: JSON object {"hashtag": "topic", ...}.
inline TopicMap load_topic_map(std::istream& in) {
  if (!in.good()) throw IoError("cannot read topic map");
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw FormatError("topic map must be a JSON object of hashtag -> topic");
  }
  TopicMap topics;
  for (const auto& [tag, topic] : j.items()) {
    if (!topic.is_string()) {
      throw FormatError("topic for '" + tag + "' must be a string");
    }
    topics.assignments[normalize_hashtag(tag)] = topic.get<std::string>();
  }
  return topics;
}

// ---------------------------------------------------------------------------
// Figure CSVs
// ---------------------------------------------------------------------------

inline void write_csv_meta(std::ostream& out, const MetaInfo& meta) {
  write_meta_lines(out, meta, "# meta ");
}

inline void write_degree_csv(std::ostream& out,
                             const std::map<std::size_t, std::size_t>& hist,
                             const MetaInfo& meta) {
  write_csv_meta(out, meta);
  out << "degree,count\n";
  for (const auto& [deg, count] : hist) {
    out << deg << ',' << count << '\n';
  }
}

inline void write_cumulative_csv(
    std::ostream& out, const std::vector<std::pair<std::size_t, double>>& curve,
    const MetaInfo& meta) {
  write_csv_meta(out, meta);
  out << "rank,cumulative_user_fraction\n";
  for (const auto& [rank, cum] : curve) {
    out << rank << ',' << format_double(cum) << '\n';
  }
}

inline void write_frame_ratio_csv(std::ostream& out,
                                  const std::map<int, double>& ratios,
                                  const MetaInfo& meta) {
  write_csv_meta(out, meta);
  out << "frame_days,ratio\n";
  for (const auto& [n, ratio] : ratios) {
    out << n << ',' << format_double(ratio) << '\n';
  }
}

inline void write_ratio_csv(
    std::ostream& out, const TemporalGraph& tg,
    const std::vector<std::optional<double>>& ratios,
    const std::vector<std::size_t>& communities_per_day, const MetaInfo& meta) {
  write_csv_meta(out, meta);
  out << "day,n_users,n_communities,ratio\n";
  for (std::size_t d = 0; d < ratios.size(); ++d) {
    out << d << ',' << tg.nodes_on_day(static_cast<std::int32_t>(d)) << ','
        << communities_per_day[d] << ',';
    if (ratios[d]) out << format_double(*ratios[d]);
    out << '\n';
  }
}

inline void write_lifespan_csv(std::ostream& out,
                               const std::map<int, std::size_t>& all,
                               const std::map<int, std::size_t>& top,
                               const MetaInfo& meta) {
  write_csv_meta(out, meta);
  out << "lifespan_days,count_all,count_top\n";
  std::map<int, std::pair<std::size_t, std::size_t>> merged;
  for (const auto& [d, c] : all) merged[d].first = c;
  for (const auto& [d, c] : top) merged[d].second = c;
  for (const auto& [d, counts] : merged) {
    out << d << ',' << counts.first << ',' << counts.second << '\n';
  }
}

inline void write_evolution_csv(std::ostream& out,
                                const std::vector<CommunityTimeline>& top,
                                const MetaInfo& meta) {
  write_csv_meta(out, meta);
  out << "day,community_id,topic,users\n";
  for (const auto& tl : top) {
    for (const auto& [day, count] : tl.daily_counts) {
      out << day << ',' << tl.id << ',' << tl.topic << ',' << count << '\n';
    }
  }
}

}  // namespace temponet
