// Shared fixtures and independent oracles for the test suite. Everything here
// deliberately avoids the library's incremental code paths: codelengths are
// evaluated through normalized entropies, clustering through raw triangle
// enumeration, so the production formulas are checked against a second route.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "temponet/graph.hpp"
#include "temponet/map_equation.hpp"
#include "temponet/posts.hpp"
#include "temponet/rng.hpp"

namespace testutil {

using temponet::Partition;
using temponet::PostRecord;
using temponet::SplitMix64;
using temponet::WeightedEdge;
using temponet::WeightedGraph;

inline WeightedGraph make_graph(std::size_t n,
                                std::vector<WeightedEdge> edges) {
  return WeightedGraph::from_edges(n, std::move(edges));
}

inline WeightedGraph path_graph(std::size_t n) {
  std::vector<WeightedEdge> edges;
  for (std::uint32_t i = 0; i + 1 < n; ++i) {
    edges.push_back({i, i + 1, 1.0});
  }
  return make_graph(n, std::move(edges));
}

inline WeightedGraph cycle_graph(std::size_t n) {
  std::vector<WeightedEdge> edges;
  for (std::uint32_t i = 0; i < n; ++i) {
    edges.push_back({i, static_cast<std::uint32_t>((i + 1) % n), 1.0});
  }
  return make_graph(n, std::move(edges));
}

inline WeightedGraph complete_graph(std::size_t n) {
  std::vector<WeightedEdge> edges;
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = i + 1; j < n; ++j) {
      edges.push_back({i, j, 1.0});
    }
  }
  return make_graph(n, std::move(edges));
}

/// Two triangles {0,1,2} and {3,4,5} joined by the bridge 2-3.
inline WeightedGraph barbell_graph() {
  return make_graph(6, {{0, 1, 1}, {0, 2, 1}, {1, 2, 1},
                        {3, 4, 1}, {3, 5, 1}, {4, 5, 1}, {2, 3, 1}});
}

inline WeightedGraph two_triangles() {
  return make_graph(6, {{0, 1, 1}, {0, 2, 1}, {1, 2, 1},
                        {3, 4, 1}, {3, 5, 1}, {4, 5, 1}});
}

/// C4 plus the 0-2 chord (the diamond graph).
inline WeightedGraph diamond_graph() {
  return make_graph(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 0, 1}, {0, 2, 1}});
}

/// Erdos-Renyi-ish random graph, guaranteed to have at least one edge.
/// With `weighted`, weights are integers in 1..3.
inline WeightedGraph random_graph(SplitMix64& rng, std::size_t n,
                                  double edge_prob, bool weighted = false) {
  std::vector<WeightedEdge> edges;
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = i + 1; j < n; ++j) {
      if (rng.next_unit() < edge_prob) {
        const double w = weighted ? 1.0 + static_cast<double>(rng.next_below(3))
                                  : 1.0;
        edges.push_back({i, j, w});
      }
    }
  }
  if (edges.empty() && n >= 2) {
    const std::uint32_t a = static_cast<std::uint32_t>(rng.next_below(n));
    std::uint32_t b = static_cast<std::uint32_t>(rng.next_below(n - 1));
    if (b >= a) ++b;
    edges.push_back({std::min(a, b), std::max(a, b), 1.0});
  }
  return make_graph(n, std::move(edges));
}

/// Uniform random labeled tree via a Prufer-like attachment.
inline WeightedGraph random_tree(SplitMix64& rng, std::size_t n) {
  std::vector<WeightedEdge> edges;
  for (std::uint32_t i = 1; i < n; ++i) {
    const std::uint32_t parent =
        static_cast<std::uint32_t>(rng.next_below(i));
    edges.push_back({parent, i, 1.0});
  }
  return make_graph(n, std::move(edges));
}

// ---------------------------------------------------------------------------
// Independent map-equation evaluation: normalized entropies, composed exactly
// as L = q H(Q) + sum_i pc_i H(P_i).
// ---------------------------------------------------------------------------

inline double entropy(const std::vector<double>& probs) {
  double h = 0.0;
  for (const double p : probs) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

inline double naive_codelength(const WeightedGraph& g,
                               const std::vector<std::uint32_t>& labels,
                               std::uint32_t n_modules) {
  const double two_w = 2.0 * g.total_weight();
  std::vector<double> p(g.num_nodes());
  for (std::uint32_t u = 0; u < g.num_nodes(); ++u) {
    p[u] = g.strength(u) / two_w;
  }
  std::vector<double> q(n_modules, 0.0);
  g.for_each_pair([&](std::uint32_t u, std::uint32_t v, double w) {
    if (labels[u] != labels[v]) {
      q[labels[u]] += w / two_w;
      q[labels[v]] += w / two_w;
    }
  });
  const double q_total = std::accumulate(q.begin(), q.end(), 0.0);

  double index_term = 0.0;
  if (q_total > 0.0) {
    std::vector<double> dist;
    for (const double qi : q) dist.push_back(qi / q_total);
    index_term = q_total * entropy(dist);
  }
  double module_term = 0.0;
  for (std::uint32_t m = 0; m < n_modules; ++m) {
    std::vector<double> dist{q[m]};
    double pc = q[m];
    for (std::uint32_t u = 0; u < g.num_nodes(); ++u) {
      if (labels[u] == m) {
        dist.push_back(p[u]);
        pc += p[u];
      }
    }
    if (pc <= 0.0) continue;
    for (auto& d : dist) d /= pc;
    module_term += pc * entropy(dist);
  }
  return index_term + module_term;
}

/// Visits every set partition of n elements as a restricted growth string.
inline void enumerate_partitions(
    std::size_t n,
    const std::function<void(const std::vector<std::uint32_t>&, std::uint32_t)>&
        visit) {
  std::vector<std::uint32_t> labels(n, 0);
  std::function<void(std::size_t, std::uint32_t)> rec =
      [&](std::size_t i, std::uint32_t max_used) {
        if (i == n) {
          visit(labels, max_used + 1);
          return;
        }
        for (std::uint32_t m = 0; m <= max_used + 1; ++m) {
          labels[i] = m;
          rec(i + 1, std::max(max_used, m));
        }
      };
  if (n == 0) return;
  rec(1, 0);
}

// ---------------------------------------------------------------------------
// Clustering oracle: count triangles by brute force over all node triples.
// ---------------------------------------------------------------------------

inline double clustering_by_triangle_enumeration(const WeightedGraph& g) {
  const std::size_t n = g.num_nodes();
  std::vector<std::size_t> triangles(n, 0);
  for (std::uint32_t a = 0; a < n; ++a) {
    for (std::uint32_t b = a + 1; b < n; ++b) {
      if (!g.has_edge(a, b)) continue;
      for (std::uint32_t c = b + 1; c < n; ++c) {
        if (g.has_edge(a, c) && g.has_edge(b, c)) {
          ++triangles[a];
          ++triangles[b];
          ++triangles[c];
        }
      }
    }
  }
  double sum = 0.0;
  for (std::uint32_t u = 0; u < n; ++u) {
    const std::size_t k = g.degree(u);
    if (k < 2) continue;
    sum += 2.0 * static_cast<double>(triangles[u]) /
           (static_cast<double>(k) * static_cast<double>(k - 1));
  }
  return sum / static_cast<double>(n);
}

inline std::size_t connected_components(const WeightedGraph& g,
                                        std::vector<std::uint32_t>* comp_out =
                                            nullptr) {
  const std::size_t n = g.num_nodes();
  std::vector<std::uint32_t> comp(n, UINT32_MAX);
  std::uint32_t next = 0;
  std::vector<std::uint32_t> stack;
  for (std::uint32_t s = 0; s < n; ++s) {
    if (comp[s] != UINT32_MAX) continue;
    comp[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const std::uint32_t u = stack.back();
      stack.pop_back();
      for (const auto v : g.neighbors(u)) {
        if (comp[v] == UINT32_MAX) {
          comp[v] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  if (comp_out) *comp_out = std::move(comp);
  return next;
}

/// Spearman rank correlation with average ranks for ties.
inline double spearman(const std::vector<double>& xs,
                       const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  auto ranks = [&](const std::vector<double>& vals) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    std::vector<double> r(n);
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j + 1 < n && vals[order[j + 1]] == vals[order[i]]) ++j;
      const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
      for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
      i = j + 1;
    }
    return r;
  };
  const auto rx = ranks(xs);
  const auto ry = ranks(ys);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double cov = 0.0, vx = 0.0, vy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cov += (rx[i] - mx) * (ry[i] - my);
    vx += (rx[i] - mx) * (rx[i] - mx);
    vy += (ry[i] - my) * (ry[i] - my);
  }
  if (vx <= 0.0 || vy <= 0.0) return 0.0;
  return cov / std::sqrt(vx * vy);
}

// ---------------------------------------------------------------------------
// Post-record helpers
// ---------------------------------------------------------------------------

inline constexpr std::int64_t kEpoch20150511 = 1431302400;  // 2015-05-11 UTC

inline PostRecord rec(const std::string& user, int day,
                      std::vector<std::string> tags, int hour = 12) {
  PostRecord r;
  r.user = user;
  r.time = kEpoch20150511 + static_cast<std::int64_t>(day) * 86400 +
           static_cast<std::int64_t>(hour) * 3600;
  r.hashtags = std::move(tags);
  return r;
}

}  // namespace testutil
