#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "temponet/error.hpp"

namespace temponet {

struct WeightedEdge {
  std::uint32_t u = 0;
  std::uint32_t v = 0;
  double weight = 1.0;

  friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
};

/// Undirected weighted graph in CSR form. Self-loops are kept out of the
/// adjacency rows and tracked separately; a self-loop of weight w contributes
/// 2w to its node's strength and w to the total weight, which is exactly what
/// module aggregation needs to preserve visit rates.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  /// Builds from an edge list. Duplicate (u,v) entries are summed; (u,u)
  /// entries become self-loops. Weights must be positive.
  static WeightedGraph from_edges(std::size_t n_nodes,
                                  std::vector<WeightedEdge> edges) {
    WeightedGraph g;
    g.n_ = n_nodes;
    g.self_.assign(n_nodes, 0.0);

    for (auto& e : edges) {
      if (e.u >= n_nodes || e.v >= n_nodes) {
        throw ArgumentError("edge endpoint out of range");
      }
      if (!(e.weight > 0.0)) {
        throw ArgumentError("edge weights must be positive");
      }
      if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges.begin(), edges.end(),
              [](const WeightedEdge& a, const WeightedEdge& b) {
                return a.u != b.u ? a.u < b.u : a.v < b.v;
              });

    std::vector<WeightedEdge> pairs;
    pairs.reserve(edges.size());
    for (const auto& e : edges) {
      if (e.u == e.v) {
        g.self_[e.u] += e.weight;
        continue;
      }
      if (!pairs.empty() && pairs.back().u == e.u && pairs.back().v == e.v) {
        pairs.back().weight += e.weight;
      } else {
        pairs.push_back(e);
      }
    }
    g.m_ = pairs.size();

    std::vector<std::size_t> deg(n_nodes, 0);
    for (const auto& e : pairs) {
      ++deg[e.u];
      ++deg[e.v];
    }
    g.offsets_.assign(n_nodes + 1, 0);
    for (std::size_t i = 0; i < n_nodes; ++i) {
      g.offsets_[i + 1] = g.offsets_[i] + deg[i];
    }
    g.nbr_.resize(g.offsets_[n_nodes]);
    g.w_.resize(g.offsets_[n_nodes]);
    std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    for (const auto& e : pairs) {
      g.nbr_[cursor[e.u]] = e.v;
      g.w_[cursor[e.u]++] = e.weight;
      g.nbr_[cursor[e.v]] = e.u;
      g.w_[cursor[e.v]++] = e.weight;
    }
    // rows are sorted because pairs were processed in (u,v) order for the
    // forward direction; the reverse direction needs an explicit sort
    for (std::size_t i = 0; i < n_nodes; ++i) {
      const auto b = g.offsets_[i], e = g.offsets_[i + 1];
      std::vector<std::pair<std::uint32_t, double>> row;
      row.reserve(e - b);
      for (std::size_t k = b; k < e; ++k) row.emplace_back(g.nbr_[k], g.w_[k]);
      std::sort(row.begin(), row.end());
      for (std::size_t k = b; k < e; ++k) {
        g.nbr_[k] = row[k - b].first;
        g.w_[k] = row[k - b].second;
      }
    }

    g.strength_.assign(n_nodes, 0.0);
    g.total_w_ = 0.0;
    for (std::size_t i = 0; i < n_nodes; ++i) {
      double s = 2.0 * g.self_[i];
      for (std::size_t k = g.offsets_[i]; k < g.offsets_[i + 1]; ++k) {
        s += g.w_[k];
      }
      g.strength_[i] = s;
      g.total_w_ += g.self_[i];
    }
    for (const auto& e : pairs) g.total_w_ += e.weight;
    return g;
  }

  std::size_t num_nodes() const { return n_; }
  /// Distinct unordered node pairs with an edge (self-loops not counted).
  std::size_t num_edges() const { return m_; }
  bool has_edges() const { return total_w_ > 0.0; }

  std::size_t degree(std::uint32_t u) const {
    return offsets_[u + 1] - offsets_[u];
  }
  std::span<const std::uint32_t> neighbors(std::uint32_t u) const {
    return {nbr_.data() + offsets_[u], degree(u)};
  }
  std::span<const double> edge_weights(std::uint32_t u) const {
    return {w_.data() + offsets_[u], degree(u)};
  }
  double self_loop(std::uint32_t u) const { return self_[u]; }
  /// Sum of incident edge weights; self-loops count twice.
  double strength(std::uint32_t u) const { return strength_[u]; }
  /// Total edge weight W (each pair once, self-loops once). 2W = sum of strengths.
  double total_weight() const { return total_w_; }

  bool has_edge(std::uint32_t u, std::uint32_t v) const {
    const auto row = neighbors(u);
    return std::binary_search(row.begin(), row.end(), v);
  }

  /// Visits each unordered pair (u < v, weight) once; self-loops excluded.
  template <typename Fn>
  void for_each_pair(Fn&& fn) const {
    for (std::uint32_t u = 0; u < n_; ++u) {
      for (std::size_t k = offsets_[u]; k < offsets_[u + 1]; ++k) {
        if (nbr_[k] > u) fn(u, nbr_[k], w_[k]);
      }
    }
  }

 private:
  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::uint32_t> nbr_;
  std::vector<double> w_;
  std::vector<double> self_;
  std::vector<double> strength_;
  double total_w_ = 0.0;
};

/// Exact histogram of node degrees (weights ignored).
inline std::map<std::size_t, std::size_t> degree_distribution(
    const WeightedGraph& g) {
  std::map<std::size_t, std::size_t> hist;
  for (std::uint32_t u = 0; u < g.num_nodes(); ++u) ++hist[g.degree(u)];
  return hist;
}

}  // namespace temponet
