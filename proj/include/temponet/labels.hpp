#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "temponet/error.hpp"
#include "temponet/map_equation.hpp"
#include "temponet/temporal_graph.hpp"

namespace temponet {

/// One (user, day) node with a community label; the row format of partition
/// and ground-truth files.
struct NodeLabel {
  std::string user;
  std::int32_t day = 0;
  std::uint32_t community = 0;

  friend bool operator==(const NodeLabel&, const NodeLabel&) = default;
};

inline bool label_key_less(const NodeLabel& a, const NodeLabel& b) {
  return a.day != b.day ? a.day < b.day : a.user < b.user;
}

inline std::vector<NodeLabel> node_labels(const TemporalGraph& tg,
                                          const Partition& part) {
  if (part.module_of.size() != tg.num_nodes()) {
    throw ArgumentError("partition does not cover the graph");
  }
  std::vector<NodeLabel> rows;
  rows.reserve(tg.num_nodes());
  for (std::size_t i = 0; i < tg.num_nodes(); ++i) {
    rows.push_back(
        NodeLabel{tg.nodes[i].user, tg.nodes[i].day, part.module_of[i]});
  }
  return rows;
}

/// Normalized mutual information with arithmetic-mean normalization:
/// 2 I(A;B) / (H(A) + H(B)), defined as 0 when either partition has zero
/// entropy. 1 iff the partitions are identical up to relabeling.
inline double nmi(std::span<const std::uint32_t> a,
                  std::span<const std::uint32_t> b) {
  if (a.size() != b.size() || a.empty()) {
    throw ArgumentError("NMI needs two label vectors over the same nodes");
  }
  const double n = static_cast<double>(a.size());
  std::map<std::uint32_t, std::size_t> ca, cb;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> joint;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++ca[a[i]];
    ++cb[b[i]];
    ++joint[{a[i], b[i]}];
  }
  double ha = 0.0, hb = 0.0;
  for (const auto& [_, c] : ca) ha -= plogp(static_cast<double>(c) / n);
  for (const auto& [_, c] : cb) hb -= plogp(static_cast<double>(c) / n);
  if (ha <= 0.0 || hb <= 0.0) return 0.0;
  double info = 0.0;
  for (const auto& [key, c] : joint) {
    const double pij = static_cast<double>(c) / n;
    const double pi = static_cast<double>(ca[key.first]) / n;
    const double pj = static_cast<double>(cb[key.second]) / n;
    info += pij * std::log2(pij / (pi * pj));
  }
  const double value = 2.0 * info / (ha + hb);
  return std::clamp(value, 0.0, 1.0);
}

/// Keyed NMI over (user, day) rows; the two label sets must cover exactly the
/// same nodes.
inline double nmi(std::vector<NodeLabel> a, std::vector<NodeLabel> b) {
  if (a.size() != b.size()) {
    throw ArgumentError("NMI: label sets cover different node sets");
  }
  std::sort(a.begin(), a.end(), label_key_less);
  std::sort(b.begin(), b.end(), label_key_less);
  std::vector<std::uint32_t> la, lb;
  la.reserve(a.size());
  lb.reserve(b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].user != b[i].user || a[i].day != b[i].day) {
      throw ArgumentError("NMI: label sets cover different node sets");
    }
    la.push_back(a[i].community);
    lb.push_back(b[i].community);
  }
  return nmi(std::span<const std::uint32_t>(la),
             std::span<const std::uint32_t>(lb));
}

}  // namespace temponet
