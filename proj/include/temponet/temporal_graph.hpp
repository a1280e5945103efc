#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "temponet/error.hpp"
#include "temponet/graph.hpp"
#include "temponet/parallel.hpp"
#include "temponet/posts.hpp"
#include "temponet/rng.hpp"

namespace temponet {

/// A user's presence on one day. A (user, day) node exists iff the user has
/// at least one retained record on that day.
struct TemporalNode {
  std::string user;
  std::int32_t day = 0;

  friend bool operator==(const TemporalNode&, const TemporalNode&) = default;
};

/// The connected time-dependent network: daily layers plus edges between
/// consecutive layers only, so the adjacency matrix is block-tridiagonal.
struct TemporalGraph {
  std::vector<TemporalNode> nodes;  // sorted by (day, user)
  WeightedGraph graph;
  std::int32_t n_days = 0;
  std::vector<std::size_t> day_offsets;  // size n_days + 1, ranges into nodes

  std::size_t num_nodes() const { return nodes.size(); }
  std::size_t num_edges() const { return graph.num_edges(); }

  std::size_t nodes_on_day(std::int32_t day) const {
    return day_offsets[static_cast<std::size_t>(day) + 1] -
           day_offsets[static_cast<std::size_t>(day)];
  }
};

enum class EdgeMode { binary, weighted };

struct BuildOptions {
  unsigned threads = 1;
  /// Largest (day, hashtag) user group expanded into a clique; 0 = no cap.
  std::size_t group_cap = 0;
  /// Called once per capped group when group_cap is active.
  std::function<void(const std::string&)> on_warning;
};

namespace detail {

struct DayIndex {
  std::vector<std::string> users;               // sorted
  std::vector<std::vector<std::string>> tags;   // per user, sorted unique
  std::unordered_map<std::string, std::vector<std::uint32_t>> tag_groups;
  std::uint32_t first_node = 0;                 // global id of users[0]
};

inline std::vector<DayIndex> index_days(
    const std::vector<std::vector<PostRecord>>& days) {
  std::vector<DayIndex> out(days.size());
  std::uint32_t next_node = 0;
  for (std::size_t d = 0; d < days.size(); ++d) {
    auto& idx = out[d];
    std::unordered_map<std::string, std::vector<std::string>> by_user;
    for (const auto& rec : days[d]) {
      auto& tags = by_user[rec.user];
      tags.insert(tags.end(), rec.hashtags.begin(), rec.hashtags.end());
    }
    idx.users.reserve(by_user.size());
    for (const auto& [user, _] : by_user) idx.users.push_back(user);
    std::sort(idx.users.begin(), idx.users.end());
    idx.tags.resize(idx.users.size());
    idx.first_node = next_node;
    for (std::size_t i = 0; i < idx.users.size(); ++i) {
      auto& tags = by_user[idx.users[i]];
      std::sort(tags.begin(), tags.end());
      tags.erase(std::unique(tags.begin(), tags.end()), tags.end());
      idx.tags[i] = std::move(tags);
      const std::uint32_t node = next_node + static_cast<std::uint32_t>(i);
      for (const auto& t : idx.tags[i]) idx.tag_groups[t].push_back(node);
    }
    next_node += static_cast<std::uint32_t>(idx.users.size());
  }
  return out;
}

/// Accumulates shared-tag counts per node pair; the count is exactly
/// |intersection of the two day-specific hashtag sets|.
class PairAccumulator {
 public:
  void add(std::uint32_t u, std::uint32_t v) {
    ++counts_[(static_cast<std::uint64_t>(u) << 32) | v];
  }

  std::vector<WeightedEdge> take(EdgeMode mode) {
    std::vector<WeightedEdge> edges;
    edges.reserve(counts_.size());
    for (const auto& [key, count] : counts_) {
      edges.push_back(WeightedEdge{
          static_cast<std::uint32_t>(key >> 32),
          static_cast<std::uint32_t>(key & 0xffffffffu),
          mode == EdgeMode::weighted ? static_cast<double>(count) : 1.0});
    }
    std::sort(edges.begin(), edges.end(),
              [](const WeightedEdge& a, const WeightedEdge& b) {
                return a.u != b.u ? a.u < b.u : a.v < b.v;
              });
    return edges;
  }

 private:
  std::unordered_map<std::uint64_t, std::uint32_t> counts_;
};

}  // namespace detail

/// Builds the time-dependent network from day-binned, stoplist-filtered
/// records. Intra-layer: two users who share a hashtag on the same day.
/// Inter-layer: nodes on consecutive days sharing a hashtag, evaluated on each
/// user's day-specific hashtag set (a user's own continuity edge included).
/// Weighted mode sets the weight to the intersection size. Construction is
/// per-day-pair independent; results are merged in fixed order so the output
/// never depends on the thread count.
inline TemporalGraph build_network(
    const std::vector<std::vector<PostRecord>>& days, EdgeMode mode,
    const BuildOptions& options = {}) {
  TemporalGraph tg;
  tg.n_days = static_cast<std::int32_t>(days.size());

  auto index = detail::index_days(days);

  tg.day_offsets.assign(days.size() + 1, 0);
  for (std::size_t d = 0; d < days.size(); ++d) {
    tg.day_offsets[d + 1] = tg.day_offsets[d] + index[d].users.size();
  }
  tg.nodes.reserve(tg.day_offsets.back());
  for (std::size_t d = 0; d < days.size(); ++d) {
    for (const auto& user : index[d].users) {
      tg.nodes.push_back(TemporalNode{user, static_cast<std::int32_t>(d)});
    }
  }

  const std::size_t cap = options.group_cap;
  auto capped = [&](const std::vector<std::uint32_t>& group, std::size_t day,
                    const std::string& tag) -> std::size_t {
    if (cap == 0 || group.size() <= cap) return group.size();
    if (options.on_warning) {
      options.on_warning("capping group of " + std::to_string(group.size()) +
                         " users for hashtag '" + tag + "' on day " +
                         std::to_string(day) + " to " + std::to_string(cap));
    }
    return cap;
  };

  // Task layout: even task 2d = intra-layer edges of day d,
  // odd task 2d+1 = inter-layer edges between days d and d+1.
  const std::size_t n_tasks = days.empty() ? 0 : 2 * days.size() - 1;
  std::vector<std::vector<WeightedEdge>> slots(n_tasks);
  parallel_for(n_tasks, options.threads, [&](std::size_t task) {
    detail::PairAccumulator acc;
    const std::size_t d = task / 2;
    if (task % 2 == 0) {
      for (const auto& [tag, group] : index[d].tag_groups) {
        const std::size_t k = capped(group, d, tag);
        for (std::size_t i = 0; i < k; ++i) {
          for (std::size_t j = i + 1; j < k; ++j) {
            acc.add(group[i], group[j]);
          }
        }
      }
    } else {
      const auto& next = index[d + 1].tag_groups;
      for (const auto& [tag, group] : index[d].tag_groups) {
        const auto it = next.find(tag);
        if (it == next.end()) continue;
        const std::size_t ku = capped(group, d, tag);
        const std::size_t kv = capped(it->second, d + 1, tag);
        for (std::size_t i = 0; i < ku; ++i) {
          for (std::size_t j = 0; j < kv; ++j) {
            acc.add(group[i], it->second[j]);
          }
        }
      }
    }
    slots[task] = acc.take(mode);
  });

  std::size_t total = 0;
  for (const auto& s : slots) total += s.size();
  std::vector<WeightedEdge> edges;
  edges.reserve(total);
  for (auto& s : slots) {
    edges.insert(edges.end(), s.begin(), s.end());
    s.clear();
    s.shrink_to_fit();
  }
  tg.graph = WeightedGraph::from_edges(tg.nodes.size(), std::move(edges));
  return tg;
}

struct ClusteringSample {
  std::size_t size = 0;
  std::uint64_t seed = 0;
};

/// Mean local clustering coefficient: C_i = 2·(edges among neighbors of i) /
/// (k_i (k_i - 1)), with C_i = 0 when k_i < 2. Exact by default; with a
/// sample, an unbiased node-sampled estimate with a fixed seed.
inline double avg_local_clustering(
    const WeightedGraph& g,
    const std::optional<ClusteringSample>& sample = std::nullopt) {
  const std::size_t n = g.num_nodes();
  if (n == 0) {
    throw DomainError("average local clustering is undefined on an empty graph");
  }

  std::vector<std::uint32_t> picks;
  if (sample && sample->size < n) {
    std::vector<std::uint32_t> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<std::uint32_t>(i);
    SplitMix64 rng(sample->seed);
    for (std::size_t i = 0; i < sample->size; ++i) {
      const std::size_t j =
          i + static_cast<std::size_t>(rng.next_below(n - i));
      std::swap(ids[i], ids[j]);
      picks.push_back(ids[i]);
    }
  } else {
    picks.resize(n);
    for (std::size_t i = 0; i < n; ++i) picks[i] = static_cast<std::uint32_t>(i);
  }

  std::vector<std::uint32_t> stamp(n, UINT32_MAX);
  double sum = 0.0;
  for (std::size_t pi = 0; pi < picks.size(); ++pi) {
    const std::uint32_t u = picks[pi];
    const auto nbrs = g.neighbors(u);
    const std::size_t k = nbrs.size();
    if (k < 2) continue;
    for (const auto v : nbrs) stamp[v] = static_cast<std::uint32_t>(pi);
    std::size_t links2 = 0;  // each neighbor-pair edge counted twice
    for (const auto v : nbrs) {
      for (const auto w : g.neighbors(v)) {
        if (stamp[w] == static_cast<std::uint32_t>(pi)) ++links2;
      }
    }
    sum += static_cast<double>(links2) /
           (static_cast<double>(k) * static_cast<double>(k - 1));
  }
  return sum / static_cast<double>(picks.size());
}

struct BlockViolation {
  std::uint32_t u = 0;
  std::uint32_t v = 0;
  std::int32_t day_u = 0;
  std::int32_t day_v = 0;
};

struct BlockStructureReport {
  bool ok = true;
  std::vector<BlockViolation> violations;  // at most the first 10
};

/// Checks the block-tridiagonal contract: every edge joins nodes at most
/// one day apart.
inline BlockStructureReport validate_block_structure(const TemporalGraph& tg) {
  BlockStructureReport report;
  tg.graph.for_each_pair([&](std::uint32_t u, std::uint32_t v, double) {
    const std::int32_t du = tg.nodes[u].day;
    const std::int32_t dv = tg.nodes[v].day;
    if (du > dv + 1 || dv > du + 1) {
      report.ok = false;
      if (report.violations.size() < 10) {
        report.violations.push_back(BlockViolation{u, v, du, dv});
      }
    }
  });
  return report;
}

struct GraphStats {
  std::size_t n_nodes = 0;
  std::size_t n_edges = 0;
  std::map<std::size_t, std::size_t> degree_histogram;
  std::optional<double> avg_local_clustering;
};

inline GraphStats compute_stats(
    const WeightedGraph& g,
    const std::optional<ClusteringSample>& sample = std::nullopt) {
  GraphStats stats;
  stats.n_nodes = g.num_nodes();
  stats.n_edges = g.num_edges();
  stats.degree_histogram = degree_distribution(g);
  if (g.num_nodes() > 0) {
    stats.avg_local_clustering = avg_local_clustering(g, sample);
  }
  return stats;
}

}  // namespace temponet
