#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "temponet/error.hpp"
#include "temponet/graph.hpp"

namespace temponet {

/// x log2 x with the 0 log 0 = 0 convention.
inline double plogp(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

/// Stationary visit rates of an undirected random walk: p_a = strength_a / 2W.
struct FlowDistribution {
  std::vector<double> p;
  double total_weight = 0.0;
};

inline FlowDistribution visit_rates(const WeightedGraph& g) {
  if (!g.has_edges()) {
    throw DomainError("visit rates are undefined on a graph without edges");
  }
  FlowDistribution flow;
  flow.total_weight = g.total_weight();
  flow.p.resize(g.num_nodes());
  const double inv = 1.0 / (2.0 * flow.total_weight);
  for (std::uint32_t u = 0; u < g.num_nodes(); ++u) {
    flow.p[u] = g.strength(u) * inv;
  }
  return flow;
}

/// Assignment of every node to a module. Module ids are a contiguous 0-based
/// range over non-empty modules.
struct Partition {
  std::vector<std::uint32_t> module_of;
  std::uint32_t n_modules = 0;

  /// Canonicalizes arbitrary labels by first appearance.
  static Partition from_labels(const std::vector<std::uint32_t>& labels) {
    Partition part;
    part.module_of.resize(labels.size());
    std::vector<std::uint32_t> remap;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const std::uint32_t raw = labels[i];
      std::uint32_t mapped = UINT32_MAX;
      for (std::size_t k = 0; k < remap.size(); ++k) {
        if (remap[k] == raw) {
          mapped = static_cast<std::uint32_t>(k);
          break;
        }
      }
      if (mapped == UINT32_MAX) {
        mapped = static_cast<std::uint32_t>(remap.size());
        remap.push_back(raw);
      }
      part.module_of[i] = mapped;
    }
    part.n_modules = static_cast<std::uint32_t>(remap.size());
    return part;
  }

  static Partition singletons(std::size_t n) {
    Partition part;
    part.module_of.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      part.module_of[i] = static_cast<std::uint32_t>(i);
    }
    part.n_modules = static_cast<std::uint32_t>(n);
    return part;
  }

  static Partition one_module(std::size_t n) {
    Partition part;
    part.module_of.assign(n, 0);
    part.n_modules = n > 0 ? 1 : 0;
    return part;
  }

  std::vector<std::size_t> module_sizes() const {
    std::vector<std::size_t> sizes(n_modules, 0);
    for (const auto m : module_of) ++sizes[m];
    return sizes;
  }

  friend bool operator==(const Partition&, const Partition&) = default;
};

/// Renumbers modules by decreasing node count (ties: earliest first node),
/// the ordering used by partition files and community reports.
inline Partition renumber_by_size(const Partition& part) {
  const auto sizes = part.module_sizes();
  std::vector<std::uint32_t> first(part.n_modules, UINT32_MAX);
  for (std::size_t i = 0; i < part.module_of.size(); ++i) {
    auto& f = first[part.module_of[i]];
    if (f == UINT32_MAX) f = static_cast<std::uint32_t>(i);
  }
  std::vector<std::uint32_t> order(part.n_modules);
  for (std::uint32_t m = 0; m < part.n_modules; ++m) order[m] = m;
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (sizes[a] != sizes[b]) return sizes[a] > sizes[b];
    return first[a] < first[b];
  });
  std::vector<std::uint32_t> rank(part.n_modules);
  for (std::uint32_t r = 0; r < part.n_modules; ++r) rank[order[r]] = r;
  Partition out;
  out.n_modules = part.n_modules;
  out.module_of.resize(part.module_of.size());
  for (std::size_t i = 0; i < part.module_of.size(); ++i) {
    out.module_of[i] = rank[part.module_of[i]];
  }
  return out;
}

/// Map-equation value and its two-level split:
///   L = q H(Q) + sum_i pc_i H(P_i)
/// with q_i the exit probability of module i, q = sum q_i, and
/// pc_i = q_i + sum of visit rates inside i. The index term is 0 when q = 0.
struct CodelengthBreakdown {
  double total = 0.0;
  double index_term = 0.0;
  double module_term = 0.0;
  std::size_t n_modules = 0;
};

namespace detail {

struct ModuleSums {
  std::vector<double> sum_p;  // per module, sum of visit rates
  std::vector<double> cut_w;  // per module, raw boundary edge weight
  double node_entropy = 0.0;  // -sum_a plogp(p_a)
  double two_w = 0.0;
};

inline ModuleSums accumulate_modules(const WeightedGraph& g,
                                     const FlowDistribution& flow,
                                     const std::vector<std::uint32_t>& module_of,
                                     std::uint32_t n_modules) {
  ModuleSums sums;
  sums.sum_p.assign(n_modules, 0.0);
  sums.cut_w.assign(n_modules, 0.0);
  sums.two_w = 2.0 * flow.total_weight;
  for (std::size_t i = 0; i < flow.p.size(); ++i) {
    sums.sum_p[module_of[i]] += flow.p[i];
    sums.node_entropy -= plogp(flow.p[i]);
  }
  g.for_each_pair([&](std::uint32_t u, std::uint32_t v, double w) {
    if (module_of[u] != module_of[v]) {
      sums.cut_w[module_of[u]] += w;
      sums.cut_w[module_of[v]] += w;
    }
  });
  return sums;
}

inline CodelengthBreakdown breakdown_from_sums(const ModuleSums& sums) {
  CodelengthBreakdown out;
  out.n_modules = sums.sum_p.size();
  double total_cut = 0.0;
  double sum_plogp_q = 0.0;
  double sum_plogp_pc = 0.0;
  for (std::size_t m = 0; m < sums.sum_p.size(); ++m) {
    const double q = sums.cut_w[m] / sums.two_w;
    total_cut += sums.cut_w[m];
    sum_plogp_q += plogp(q);
    sum_plogp_pc += plogp(q + sums.sum_p[m]);
  }
  const double q_total = total_cut / sums.two_w;
  out.index_term = plogp(q_total) - sum_plogp_q;
  out.module_term = sum_plogp_pc - sum_plogp_q + sums.node_entropy;
  out.total = out.index_term + out.module_term;
  return out;
}

}  // namespace detail

/// Evaluates the two-level map equation for a partition. Deterministic, exact
/// breakdown; throws if the partition does not cover every node.
inline CodelengthBreakdown codelength(const WeightedGraph& g,
                                      const Partition& partition) {
  if (partition.module_of.size() != g.num_nodes()) {
    throw ArgumentError("partition does not cover all nodes");
  }
  for (const auto m : partition.module_of) {
    if (m >= partition.n_modules) {
      throw ArgumentError("module id out of range");
    }
  }
  const FlowDistribution flow = visit_rates(g);
  const auto sums = detail::accumulate_modules(g, flow, partition.module_of,
                                               partition.n_modules);
  return detail::breakdown_from_sums(sums);
}

/// Incrementally maintained partition of a graph, supporting O(degree)
/// codelength deltas for single-node moves. This is the optimizer's working
/// state; it starts from singletons unless given a partition.
class PartitionState {
 public:
  static constexpr std::uint32_t kNewModule = UINT32_MAX;

  explicit PartitionState(const WeightedGraph& g)
      : PartitionState(g, Partition::singletons(g.num_nodes())) {}

  PartitionState(const WeightedGraph& g, const Partition& start)
      : graph_(&g), flow_(visit_rates(g)) {
    if (start.module_of.size() != g.num_nodes()) {
      throw ArgumentError("partition does not cover all nodes");
    }
    const std::size_t n = g.num_nodes();
    module_of_ = start.module_of;
    const std::uint32_t cap = static_cast<std::uint32_t>(n);
    sum_p_.assign(cap, 0.0);
    cut_w_.assign(cap, 0.0);
    count_.assign(cap, 0);
    scratch_w_.assign(cap, 0.0);
    auto sums = detail::accumulate_modules(g, flow_, module_of_, cap);
    sum_p_ = std::move(sums.sum_p);
    cut_w_ = std::move(sums.cut_w);
    node_entropy_ = sums.node_entropy;
    two_w_ = sums.two_w;
    total_cut_ = 0.0;
    for (std::size_t i = 0; i < n; ++i) ++count_[module_of_[i]];
    n_nonempty_ = 0;
    for (std::uint32_t m = 0; m < cap; ++m) {
      total_cut_ += cut_w_[m];
      if (count_[m] > 0) {
        ++n_nonempty_;
      } else {
        free_.push_back(m);
      }
    }
    std::make_heap(free_.begin(), free_.end(), std::greater<>{});
  }

  const WeightedGraph& graph() const { return *graph_; }
  const FlowDistribution& flow() const { return flow_; }
  std::uint32_t module_of(std::uint32_t node) const { return module_of_[node]; }
  std::uint32_t n_modules() const { return n_nonempty_; }

  /// Codelength change of moving `node` to `target` (kNewModule for a fresh
  /// module). Zero for the identity move.
  double delta_codelength(std::uint32_t node, std::uint32_t target) const {
    if (node >= module_of_.size() ||
        (target != kNewModule && target >= count_.size())) {
      throw ArgumentError("node or target module out of range");
    }
    const std::uint32_t origin = module_of_[node];
    if (target == origin) return 0.0;
    double k_origin = 0.0, k_target = 0.0;
    scan_links(node, origin, target, k_origin, k_target);
    return delta_given_links(node, origin, target, k_origin, k_target);
  }

  struct Move {
    std::uint32_t target = kNewModule;
    double delta = 0.0;
  };

  /// Best single move for `node` among the modules of its neighbors plus a
  /// fresh module. Ties prefer the lowest existing module id; a fresh module
  /// wins only on strict improvement over every existing candidate.
  Move best_move(std::uint32_t node) {
    const std::uint32_t origin = module_of_[node];
    touched_.clear();
    const auto nbrs = graph_->neighbors(node);
    const auto ws = graph_->edge_weights(node);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      const std::uint32_t m = module_of_[nbrs[k]];
      if (scratch_w_[m] == 0.0) touched_.push_back(m);
      scratch_w_[m] += ws[k];
    }
    const double k_origin = scratch_w_[origin];

    std::sort(touched_.begin(), touched_.end());
    Move best{origin, 0.0};
    for (const auto m : touched_) {
      if (m == origin) continue;
      const double delta =
          delta_given_links(node, origin, m, k_origin, scratch_w_[m]);
      if (delta < best.delta) {
        best.target = m;
        best.delta = delta;
      }
    }
    if (count_[origin] > 1) {  // a fresh module is only distinct then
      const double delta =
          delta_given_links(node, origin, kNewModule, k_origin, 0.0);
      if (delta < best.delta) {
        best.target = kNewModule;
        best.delta = delta;
      }
    }
    for (const auto m : touched_) scratch_w_[m] = 0.0;
    return best;
  }

  /// Applies a move and returns the module the node landed in.
  std::uint32_t apply_move(std::uint32_t node, std::uint32_t target) {
    if (node >= module_of_.size() ||
        (target != kNewModule && target >= count_.size())) {
      throw ArgumentError("node or target module out of range");
    }
    const std::uint32_t origin = module_of_[node];
    if (target == origin) return origin;
    if (target == kNewModule) target = allocate_module();
    double k_origin = 0.0, k_target = 0.0;
    scan_links(node, origin, target, k_origin, k_target);

    const double d_ext = graph_->strength(node) - 2.0 * graph_->self_loop(node);
    const double new_cut_origin = cut_w_[origin] - d_ext + 2.0 * k_origin;
    const double new_cut_target = cut_w_[target] + d_ext - 2.0 * k_target;
    total_cut_ += (new_cut_origin - cut_w_[origin]) +
                  (new_cut_target - cut_w_[target]);
    cut_w_[origin] = new_cut_origin;
    cut_w_[target] = new_cut_target;
    sum_p_[origin] -= flow_.p[node];
    sum_p_[target] += flow_.p[node];
    if (--count_[origin] == 0) {
      --n_nonempty_;
      cut_w_[origin] = 0.0;
      sum_p_[origin] = 0.0;
      free_.push_back(origin);
      std::push_heap(free_.begin(), free_.end(), std::greater<>{});
    }
    if (count_[target]++ == 0) ++n_nonempty_;
    module_of_[node] = target;
    return target;
  }

  /// The three partition-dependent terms of L. Adding a node-entropy constant
  /// turns this into a full codelength, which is how aggregated levels stay
  /// comparable with the original graph.
  double structural_bits() const {
    double sum_plogp_q = 0.0;
    double sum_plogp_pc = 0.0;
    for (std::uint32_t m = 0; m < count_.size(); ++m) {
      if (count_[m] == 0) continue;
      const double q = cut_w_[m] / two_w_;
      sum_plogp_q += plogp(q);
      sum_plogp_pc += plogp(q + sum_p_[m]);
    }
    return plogp(total_cut_ / two_w_) - 2.0 * sum_plogp_q + sum_plogp_pc;
  }

  double node_entropy() const { return node_entropy_; }

  CodelengthBreakdown breakdown() const {
    CodelengthBreakdown out;
    out.n_modules = n_nonempty_;
    double sum_plogp_q = 0.0;
    double sum_plogp_pc = 0.0;
    for (std::uint32_t m = 0; m < count_.size(); ++m) {
      if (count_[m] == 0) continue;
      const double q = cut_w_[m] / two_w_;
      sum_plogp_q += plogp(q);
      sum_plogp_pc += plogp(q + sum_p_[m]);
    }
    out.index_term = plogp(total_cut_ / two_w_) - sum_plogp_q;
    out.module_term = sum_plogp_pc - sum_plogp_q + node_entropy_;
    out.total = out.index_term + out.module_term;
    return out;
  }

  /// Canonical partition (modules relabeled by first appearance).
  Partition partition() const { return Partition::from_labels(module_of_); }

 private:
  void scan_links(std::uint32_t node, std::uint32_t origin, std::uint32_t target,
                  double& k_origin, double& k_target) const {
    const auto nbrs = graph_->neighbors(node);
    const auto ws = graph_->edge_weights(node);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      const std::uint32_t m = module_of_[nbrs[k]];
      if (m == origin) k_origin += ws[k];
      if (m == target) k_target += ws[k];
    }
  }

  double delta_given_links(std::uint32_t node, std::uint32_t origin,
                           std::uint32_t target, double k_origin,
                           double k_target) const {
    const double p_n = flow_.p[node];
    const double d_ext = graph_->strength(node) - 2.0 * graph_->self_loop(node);

    const double cut_o = cut_w_[origin];
    const double cut_t = target == kNewModule ? 0.0 : cut_w_[target];
    const double sump_o = sum_p_[origin];
    const double sump_t = target == kNewModule ? 0.0 : sum_p_[target];

    const double cut_o2 = cut_o - d_ext + 2.0 * k_origin;
    const double cut_t2 = cut_t + d_ext - 2.0 * k_target;
    const double total2 = total_cut_ + (cut_o2 - cut_o) + (cut_t2 - cut_t);

    const double inv = 1.0 / two_w_;
    double delta = plogp(total2 * inv) - plogp(total_cut_ * inv);
    delta -= 2.0 * (plogp(cut_o2 * inv) - plogp(cut_o * inv));
    delta -= 2.0 * (plogp(cut_t2 * inv) - plogp(cut_t * inv));
    delta += plogp(cut_o2 * inv + sump_o - p_n) - plogp(cut_o * inv + sump_o);
    delta += plogp(cut_t2 * inv + sump_t + p_n) - plogp(cut_t * inv + sump_t);
    return delta;
  }

  std::uint32_t allocate_module() {
    // A freed id always exists: fresh modules only make sense when some
    // module holds more than one node, so fewer than n are occupied. Entries
    // can be stale when a caller moved a node into an empty id directly.
    while (!free_.empty()) {
      std::pop_heap(free_.begin(), free_.end(), std::greater<>{});
      const std::uint32_t id = free_.back();
      free_.pop_back();
      if (count_[id] == 0) return id;
    }
    throw Error("internal: no free module id");
  }

  const WeightedGraph* graph_;
  FlowDistribution flow_;
  std::vector<std::uint32_t> module_of_;
  std::vector<double> sum_p_;
  std::vector<double> cut_w_;
  std::vector<std::uint32_t> count_;
  std::vector<std::uint32_t> free_;  // min-heap of freed module ids
  std::vector<std::uint32_t> touched_;
  std::vector<double> scratch_w_;
  double node_entropy_ = 0.0;
  double two_w_ = 0.0;
  double total_cut_ = 0.0;
  std::uint32_t n_nonempty_ = 0;
};

}  // namespace temponet
