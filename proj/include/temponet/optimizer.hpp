#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "temponet/error.hpp"
#include "temponet/graph.hpp"
#include "temponet/map_equation.hpp"
#include "temponet/parallel.hpp"
#include "temponet/rng.hpp"

namespace temponet {

struct OptimizeConfig {
  int n_trials = 10;
  std::uint64_t seed = 1;
  int max_sweeps = 100;
  double tolerance = 1e-10;  // bits; a sweep gaining less ends the level
  unsigned threads = 1;
};

struct DetectionResult {
  Partition partition;
  CodelengthBreakdown codelength;
};

namespace detail {

// Below this, a "most negative" delta is floating-point dust, not a move.
inline constexpr double kMoveEps = 1e-15;

/// Greedy node sweeps on one graph level until a sweep gains less than
/// tolerance. Returns the number of applied moves.
inline std::size_t local_moves(PartitionState& state, SplitMix64& rng,
                               int max_sweeps, double tolerance) {
  const std::size_t n = state.graph().num_nodes();
  std::vector<std::uint32_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<std::uint32_t>(i);

  std::size_t applied = 0;
  double bits_before = state.structural_bits();
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    shuffle(order, rng);
    std::size_t moved = 0;
    for (const auto node : order) {
      const auto move = state.best_move(node);
      if (move.delta < -kMoveEps && move.target != state.module_of(node)) {
        state.apply_move(node, move.target);
        ++moved;
      }
    }
    applied += moved;
    const double bits_now = state.structural_bits();
    if (moved == 0 || bits_before - bits_now < tolerance) break;
    bits_before = bits_now;
  }
  return applied;
}

/// Collapses each module into a super-node. Intra-module weight (including
/// existing self-loops) becomes the super-node's self-loop, which preserves
/// visit rates and exit probabilities exactly.
inline WeightedGraph aggregate(const WeightedGraph& g,
                               const Partition& part) {
  std::vector<WeightedEdge> edges;
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> between;
  std::vector<double> self_w(part.n_modules, 0.0);
  for (std::uint32_t u = 0; u < g.num_nodes(); ++u) {
    self_w[part.module_of[u]] += g.self_loop(u);
  }
  g.for_each_pair([&](std::uint32_t u, std::uint32_t v, double w) {
    std::uint32_t mu = part.module_of[u];
    std::uint32_t mv = part.module_of[v];
    if (mu == mv) {
      self_w[mu] += w;
    } else {
      if (mu > mv) std::swap(mu, mv);
      between[{mu, mv}] += w;
    }
  });
  edges.reserve(between.size() + part.n_modules);
  for (const auto& [key, w] : between) {
    edges.push_back(WeightedEdge{key.first, key.second, w});
  }
  for (std::uint32_t m = 0; m < part.n_modules; ++m) {
    if (self_w[m] > 0.0) edges.push_back(WeightedEdge{m, m, self_w[m]});
  }
  return WeightedGraph::from_edges(part.n_modules, std::move(edges));
}

inline Partition run_trial(const WeightedGraph& g, std::uint64_t trial_seed,
                           const OptimizeConfig& cfg) {
  SplitMix64 rng(trial_seed);

  // assignment of original nodes into the current level's nodes
  std::vector<std::uint32_t> assign(g.num_nodes());
  for (std::size_t i = 0; i < assign.size(); ++i) {
    assign[i] = static_cast<std::uint32_t>(i);
  }

  WeightedGraph coarse;           // owned aggregated level, when level > 0
  const WeightedGraph* cur = &g;
  while (true) {
    PartitionState state(*cur);
    const std::size_t applied =
        local_moves(state, rng, cfg.max_sweeps, cfg.tolerance);
    if (applied == 0) break;  // aggregation converged

    const Partition level = state.partition();
    for (auto& a : assign) a = level.module_of[a];
    if (level.n_modules == cur->num_nodes()) break;

    coarse = aggregate(*cur, level);
    cur = &coarse;
  }
  return Partition::from_labels(assign);
}

}  // namespace detail

/// Two-level map-equation optimization: per trial, nodes start as singletons,
/// greedy sweeps move single nodes (new-module moves included) in seeded
/// random order, converged levels are aggregated into super-node graphs and
/// re-optimized until aggregation stops improving. The best of n_trials is
/// returned. Trials may run in parallel; the result depends only on
/// (graph, seed, n_trials, max_sweeps, tolerance), never on the thread count.
inline DetectionResult optimize(const WeightedGraph& g,
                                const OptimizeConfig& cfg = {}) {
  if (!g.has_edges()) {
    throw DomainError("cannot optimize a graph without edges");
  }
  if (cfg.n_trials < 1) throw ArgumentError("n_trials must be >= 1");

  const int n_trials = cfg.n_trials;
  std::vector<Partition> partitions(static_cast<std::size_t>(n_trials));
  std::vector<double> bits(static_cast<std::size_t>(n_trials), 0.0);
  parallel_for(static_cast<std::size_t>(n_trials), cfg.threads,
               [&](std::size_t t) {
                 partitions[t] = detail::run_trial(
                     g, derive_seed(cfg.seed, static_cast<std::uint64_t>(t)),
                     cfg);
                 bits[t] = codelength(g, partitions[t]).total;
               });

  std::size_t best = 0;
  for (std::size_t t = 1; t < partitions.size(); ++t) {
    if (bits[t] < bits[best]) best = t;
  }
  DetectionResult result;
  result.partition = std::move(partitions[best]);
  result.codelength = codelength(g, result.partition);
  return result;
}

/// Exhaustive map-equation minimum over all set partitions, for small graphs
/// only (n <= 12). Ties resolve to the lexicographically smallest restricted
/// growth string, which the enumeration order provides for free.
inline DetectionResult brute_force_optimum(const WeightedGraph& g) {
  const std::size_t n = g.num_nodes();
  if (n == 0) throw ArgumentError("empty graph");
  if (n > 12) {
    throw ArgumentError(
        "brute-force enumeration refused for more than 12 nodes (Bell-number "
        "growth)");
  }
  if (!g.has_edges()) {
    throw DomainError("cannot evaluate codelength on a graph without edges");
  }

  const FlowDistribution flow = visit_rates(g);

  std::vector<std::uint32_t> labels(n, 0);
  std::vector<std::uint32_t> best_labels;
  double best_bits = 0.0;
  bool have_best = false;

  auto evaluate = [&](std::uint32_t n_modules) {
    const auto sums = detail::accumulate_modules(g, flow, labels, n_modules);
    const double bits = detail::breakdown_from_sums(sums).total;
    if (!have_best || bits < best_bits) {
      have_best = true;
      best_bits = bits;
      best_labels = labels;
    }
  };

  // Restricted growth strings: labels[0] = 0, labels[i] <= 1 + max(prefix).
  auto recurse = [&](auto&& self, std::size_t i, std::uint32_t max_used) -> void {
    if (i == n) {
      evaluate(max_used + 1);
      return;
    }
    for (std::uint32_t m = 0; m <= max_used + 1; ++m) {
      labels[i] = m;
      self(self, i + 1, std::max(max_used, m));
    }
  };
  labels[0] = 0;
  recurse(recurse, 1, 0);

  DetectionResult result;
  result.partition = Partition::from_labels(best_labels);
  result.codelength = codelength(g, result.partition);
  return result;
}

}  // namespace temponet
