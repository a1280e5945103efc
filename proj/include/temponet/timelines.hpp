#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "temponet/error.hpp"
#include "temponet/map_equation.hpp"
#include "temponet/optimizer.hpp"
#include "temponet/parallel.hpp"
#include "temponet/posts.hpp"
#include "temponet/temporal_graph.hpp"

namespace temponet {

/// How long a community lived: calendar span from first to last active day
/// (default), or the count of days it actually had members.
enum class LifespanConvention { span, active_days };

struct CommunityTimeline {
  std::uint32_t id = 0;  // community id, numbered by decreasing size
  std::int32_t first_day = 0;
  std::int32_t last_day = 0;
  int lifespan = 1;
  std::size_t total_users = 0;                      // member (user, day) nodes
  std::map<std::int32_t, std::size_t> daily_counts;  // day -> member count
  std::vector<std::pair<std::string, std::size_t>> top_hashtags;
  std::string topic = "other";
};

/// hashtag -> topic name; unmapped hashtags resolve to "other".
struct TopicMap {
  std::unordered_map<std::string, std::string> assignments;

  std::string topic_of(const std::string& tag) const {
    const auto it = assignments.find(tag);
    return it == assignments.end() ? std::string("other") : it->second;
  }
};

/// One timeline per community of at least `size_floor` nodes, ordered and
/// numbered by decreasing node count. Top hashtags are counted over the
/// members' day-specific hashtag sets.
inline std::vector<CommunityTimeline> build_timelines(
    const TemporalGraph& tg, const Partition& partition,
    const std::vector<std::vector<PostRecord>>& days,
    std::size_t size_floor = 3, std::size_t max_top_hashtags = 10,
    LifespanConvention convention = LifespanConvention::span) {
  if (partition.module_of.size() != tg.num_nodes()) {
    throw ArgumentError("partition does not cover the graph");
  }
  const Partition ranked = renumber_by_size(partition);

  auto index = detail::index_days(days);
  auto tags_of = [&](const TemporalNode& node)
      -> const std::vector<std::string>* {
    const auto d = static_cast<std::size_t>(node.day);
    if (d >= index.size()) return nullptr;
    const auto& users = index[d].users;
    const auto it = std::lower_bound(users.begin(), users.end(), node.user);
    if (it == users.end() || *it != node.user) return nullptr;
    return &index[d].tags[static_cast<std::size_t>(it - users.begin())];
  };

  std::vector<CommunityTimeline> timelines(ranked.n_modules);
  std::vector<std::unordered_map<std::string, std::size_t>> tag_counts(
      ranked.n_modules);
  for (std::uint32_t m = 0; m < ranked.n_modules; ++m) {
    timelines[m].id = m;
    timelines[m].first_day = INT32_MAX;
    timelines[m].last_day = INT32_MIN;
  }
  for (std::size_t i = 0; i < tg.num_nodes(); ++i) {
    const std::uint32_t m = ranked.module_of[i];
    auto& tl = timelines[m];
    const std::int32_t day = tg.nodes[i].day;
    tl.first_day = std::min(tl.first_day, day);
    tl.last_day = std::max(tl.last_day, day);
    ++tl.daily_counts[day];
    ++tl.total_users;
    if (const auto* tags = tags_of(tg.nodes[i])) {
      for (const auto& t : *tags) ++tag_counts[m][t];
    }
  }

  std::vector<CommunityTimeline> out;
  out.reserve(timelines.size());
  for (std::uint32_t m = 0; m < ranked.n_modules; ++m) {
    auto& tl = timelines[m];
    if (tl.total_users < size_floor) continue;
    tl.lifespan = convention == LifespanConvention::span
                      ? tl.last_day - tl.first_day + 1
                      : static_cast<int>(tl.daily_counts.size());
    std::vector<std::pair<std::string, std::size_t>> ranked_tags(
        tag_counts[m].begin(), tag_counts[m].end());
    std::sort(ranked_tags.begin(), ranked_tags.end(),
              [](const auto& a, const auto& b) {
                if (a.second != b.second) return a.second > b.second;
                return a.first < b.first;
              });
    if (ranked_tags.size() > max_top_hashtags) {
      ranked_tags.resize(max_top_hashtags);
    }
    tl.top_hashtags = std::move(ranked_tags);
    out.push_back(std::move(tl));
  }
  return out;
}

/// Labels each community with the majority topic among its top-k hashtags;
/// ties resolve to the topic of the most-used hashtag among the tied topics.
inline void label_topics(std::vector<CommunityTimeline>& timelines,
                         const TopicMap& topics, int k = 3) {
  if (k < 1) throw ArgumentError("label_topics needs k >= 1");
  for (auto& tl : timelines) {
    const std::size_t take =
        std::min(static_cast<std::size_t>(k), tl.top_hashtags.size());
    if (take == 0) {
      tl.topic = "other";
      continue;
    }
    std::vector<std::string> topic_of_rank(take);
    std::map<std::string, int> votes;
    for (std::size_t r = 0; r < take; ++r) {
      topic_of_rank[r] = topics.topic_of(tl.top_hashtags[r].first);
      ++votes[topic_of_rank[r]];
    }
    int best = 0;
    for (const auto& [_, v] : votes) best = std::max(best, v);
    for (std::size_t r = 0; r < take; ++r) {
      if (votes[topic_of_rank[r]] == best) {
        tl.topic = topic_of_rank[r];
        break;
      }
    }
  }
}

/// Histogram of community lifespans d -> D(d), optionally restricted to the
/// top_k largest communities by member count.
inline std::map<int, std::size_t> lifespan_distribution(
    const std::vector<CommunityTimeline>& timelines,
    std::optional<std::size_t> top_k = std::nullopt) {
  std::vector<const CommunityTimeline*> picked;
  picked.reserve(timelines.size());
  for (const auto& tl : timelines) picked.push_back(&tl);
  if (top_k && *top_k < picked.size()) {
    std::sort(picked.begin(), picked.end(), [](const auto* a, const auto* b) {
      if (a->total_users != b->total_users) {
        return a->total_users > b->total_users;
      }
      return a->id < b->id;
    });
    picked.resize(*top_k);
  }
  std::map<int, std::size_t> hist;
  for (const auto* tl : picked) ++hist[tl->lifespan];
  return hist;
}

/// Number of distinct communities with at least one node on each day.
inline std::vector<std::size_t> communities_per_day(
    const TemporalGraph& tg, const Partition& partition) {
  if (partition.module_of.size() != tg.num_nodes()) {
    throw ArgumentError("partition does not cover the graph");
  }
  std::vector<std::size_t> counts(static_cast<std::size_t>(tg.n_days), 0);
  std::vector<std::uint32_t> stamp(partition.n_modules, UINT32_MAX);
  for (std::int32_t d = 0; d < tg.n_days; ++d) {
    const std::size_t begin = tg.day_offsets[static_cast<std::size_t>(d)];
    const std::size_t end = tg.day_offsets[static_cast<std::size_t>(d) + 1];
    for (std::size_t i = begin; i < end; ++i) {
      auto& s = stamp[partition.module_of[i]];
      if (s != static_cast<std::uint32_t>(d)) {
        s = static_cast<std::uint32_t>(d);
        ++counts[static_cast<std::size_t>(d)];
      }
    }
  }
  return counts;
}

/// Per-day ratio of communities present to users present. Days without any
/// node are gaps (nullopt), not zeros.
inline std::vector<std::optional<double>> community_user_ratio(
    const TemporalGraph& tg, const Partition& partition) {
  const auto counts = communities_per_day(tg, partition);
  std::vector<std::optional<double>> ratios(counts.size());
  for (std::size_t d = 0; d < counts.size(); ++d) {
    const std::size_t users = tg.nodes_on_day(static_cast<std::int32_t>(d));
    if (users > 0) {
      ratios[d] = static_cast<double>(counts[d]) / static_cast<double>(users);
    }
  }
  return ratios;
}

/// Ranked community sizes as a cumulative fraction of all member nodes;
/// non-decreasing and ending at 1.
inline std::vector<std::pair<std::size_t, double>> cumulative_size_curve(
    const std::vector<CommunityTimeline>& timelines) {
  std::vector<std::size_t> sizes;
  sizes.reserve(timelines.size());
  for (const auto& tl : timelines) sizes.push_back(tl.total_users);
  std::sort(sizes.rbegin(), sizes.rend());
  double total = 0.0;
  for (const auto s : sizes) total += static_cast<double>(s);
  std::vector<std::pair<std::size_t, double>> curve;
  curve.reserve(sizes.size());
  double running = 0.0;
  for (std::size_t r = 0; r < sizes.size(); ++r) {
    running += static_cast<double>(sizes[r]);
    curve.emplace_back(r + 1, total > 0.0 ? running / total : 0.0);
  }
  return curve;
}

/// Smallest number of top communities covering `fraction` of all members.
inline std::size_t coverage_top_k(
    const std::vector<CommunityTimeline>& timelines, double fraction) {
  const auto curve = cumulative_size_curve(timelines);
  for (const auto& [rank, cum] : curve) {
    if (cum >= fraction) return rank;
  }
  return curve.size();
}

struct DetectSettings {
  EdgeMode mode = EdgeMode::binary;
  OptimizeConfig optimize;
  std::size_t size_floor = 3;
  unsigned threads = 1;  // parallelism across frame jobs
};

namespace detail {

inline std::size_t communities_at_floor(const Partition& part,
                                        std::size_t floor) {
  std::size_t count = 0;
  for (const auto size : part.module_sizes()) {
    if (size >= floor) ++count;
  }
  return count;
}

}  // namespace detail

/// For each frame length n, detects communities on the network restricted to
/// days [0, n) with the identical configuration and seed, and reports the
/// community count (at the size floor) relative to the full network. Frame
/// jobs are independent and run in parallel.
inline std::map<int, double> frame_ratio_analysis(
    const std::vector<std::vector<PostRecord>>& days,
    const std::vector<int>& frames, const DetectSettings& settings) {
  const int n_days = static_cast<int>(days.size());
  for (const auto n : frames) {
    if (n < 1 || n > n_days) {
      throw ArgumentError("frame length " + std::to_string(n) +
                          " outside [1, " + std::to_string(n_days) + "]");
    }
  }

  auto count_for = [&](int n) -> std::size_t {
    const std::vector<std::vector<PostRecord>> slice(days.begin(),
                                                     days.begin() + n);
    BuildOptions build_opts;
    build_opts.threads = 1;
    const TemporalGraph tg = build_network(slice, settings.mode, build_opts);
    if (!tg.graph.has_edges()) return 0;
    OptimizeConfig cfg = settings.optimize;
    cfg.threads = 1;  // frames are the parallel unit here
    const auto result = optimize(tg.graph, cfg);
    return detail::communities_at_floor(result.partition, settings.size_floor);
  };

  std::vector<std::size_t> counts(frames.size(), 0);
  std::size_t full_count = 0;
  parallel_for(frames.size() + 1, settings.threads, [&](std::size_t i) {
    if (i == frames.size()) {
      full_count = count_for(n_days);
    } else {
      counts[i] = count_for(frames[i]);
    }
  });
  if (full_count == 0) {
    throw DomainError("no communities at the size floor on the full network");
  }

  std::map<int, double> ratios;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    ratios[frames[i]] =
        static_cast<double>(counts[i]) / static_cast<double>(full_count);
  }
  return ratios;
}

}  // namespace temponet
