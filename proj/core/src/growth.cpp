#include "lsf/growth.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>
#include <utility>

#include "lsf/error.hpp"

namespace lsf {

std::string_view algorithm_name(Algorithm a) noexcept {
  switch (a) {
    case Algorithm::sra: return "sra";
    case Algorithm::sda: return "sda";
    case Algorithm::ba: return "ba";
    case Algorithm::hapa: return "hapa";
    case Algorithm::gaian: return "gaian";
  }
  return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) noexcept {
  for (Algorithm a : {Algorithm::sra, Algorithm::sda, Algorithm::ba, Algorithm::hapa, Algorithm::gaian}) {
    if (algorithm_name(a) == name) return a;
  }
  return std::nullopt;
}

bool uses_exponent(Algorithm a) noexcept { return a == Algorithm::sra || a == Algorithm::sda; }

std::span<const Degree> SdaDegreeList::for_join(std::size_t n) const {
  if (n < first_n_ || n >= last_node_count()) {
    throw Error(ErrorCode::invalid_argument,
                "SDA degree list covers joins onto " + std::to_string(first_n_) + ".." +
                    std::to_string(last_node_count() - 1) + " nodes, not " + std::to_string(n));
  }
  return std::span<const Degree>(degrees_).subspan((n - first_n_) * k_, k_);
}

SdaDegreeList sda_connection_order(const DistributionTables& tables, std::size_t n_max) {
  const Degree k = tables.spec.k;
  const Degree m = tables.spec.m;
  const std::size_t seed_n = 2 * static_cast<std::size_t>(k) + 1;
  if (n_max <= seed_n) {
    throw Error(ErrorCode::invalid_argument, "n_max must exceed the seed size 2k+1");
  }

  // Classes are indexed by degree; slot m+1 stays empty and absorbs nothing.
  std::vector<double> count(m + 2, 0.0);
  std::vector<double> expected(m + 2, 0.0);
  std::vector<double> step(m + 2, 0.0);
  std::vector<double> used(m + 2, 0.0);
  for (Degree d = k; d <= m; ++d) {
    step[d] = tables.frequency(d) / k;
    expected[d] = static_cast<double>(seed_n) * tables.frequency(d);
  }
  count[2 * k] = static_cast<double>(seed_n);

  std::vector<Degree> out;
  out.reserve((n_max - seed_n) * k);
  for (std::size_t n = seed_n; n < n_max; ++n) {
    // The joining node ends at degree k; it is counted from the start but
    // can never accept its own edge.
    count[k] += 1.0;
    std::fill(used.begin(), used.end(), 0.0);
    for (Degree c = 0; c < k; ++c) {
      double best = std::numeric_limits<double>::infinity();
      Degree choice = 0;
      for (Degree d = k; d < m; ++d) {
        const double available = count[d] - used[d] - (d == k ? 1.0 : 0.0);
        if (available <= 0.0) continue;
        const double here = count[d] - expected[d] - step[d];
        const double above = count[d + 1] - expected[d + 1] - step[d + 1];
        const double delta =
            -std::fabs(here) - std::fabs(above) + std::fabs(here - 1.0) + std::fabs(above + 1.0);
        if (delta < best) {
          best = delta;
          choice = d;
        }
      }
      if (choice == 0) {
        throw Error(ErrorCode::no_eligible_node,
                    "no degree class below the cutoff has a free node at n=" + std::to_string(n));
      }
      out.push_back(choice);
      count[choice] -= 1.0;
      count[choice + 1] += 1.0;
      used[choice + 1] += 1.0;
      for (Degree d = k; d <= m; ++d) expected[d] += step[d];
    }
  }
  return SdaDegreeList(k, seed_n, std::move(out));
}

std::vector<Degree> sra_pick_degrees(const DistributionTables& tables, Rng& rng) {
  std::vector<Degree> out(tables.spec.k);
  for (auto& d : out) d = tables.degree_for_draw(rng.uniform01());
  return out;
}

namespace {

std::optional<NodeId> pick_from_bucket(const OverlayGraph& g, Degree d,
                                       std::span<const NodeId> excluded, Rng& rng) {
  const auto bucket = g.nodes_with_degree(d);
  std::size_t blocked = 0;
  for (NodeId x : excluded) {
    if (g.degree(x) == d) ++blocked;
  }
  if (bucket.size() <= blocked) return std::nullopt;
  for (;;) {
    const NodeId v = bucket[rng.uniform_index(bucket.size())];
    if (std::find(excluded.begin(), excluded.end(), v) == excluded.end()) return v;
  }
}

void attach_new_node(OverlayGraph& g, std::span<const NodeId> acceptors) {
  const NodeId fresh = g.add_node();
  for (NodeId v : acceptors) g.add_edge(fresh, v);
}

// BFS tree used both for the flood count and for routing responses home.
struct FloodTree {
  std::vector<NodeId> order;    // BFS visit order, origin first
  std::vector<NodeId> parent;   // parent[origin] == origin
  std::uint64_t flood_msgs = 0;
};

FloodTree build_flood_tree(const OverlayGraph& g, NodeId origin) {
  const auto n = g.node_count();
  constexpr NodeId kUnseen = std::numeric_limits<NodeId>::max();
  FloodTree t;
  t.parent.assign(n, kUnseen);
  t.order.reserve(n);
  t.parent[origin] = origin;
  t.order.push_back(origin);
  for (std::size_t head = 0; head < t.order.size(); ++head) {
    const NodeId u = t.order[head];
    // Each node forwards once, to every neighbor except the one it heard from.
    for (NodeId w : g.neighbors(u)) {
      if (u != origin && w == t.parent[u]) continue;
      ++t.flood_msgs;
      if (t.parent[w] == kUnseen) {
        t.parent[w] = u;
        t.order.push_back(w);
      }
    }
  }
  return t;
}

std::uint64_t response_cost(const FloodTree& t, std::span<const char> responders,
                            std::optional<std::uint32_t> cap) {
  std::vector<std::uint64_t> load(t.parent.size(), 0);
  std::uint64_t msgs = 0;
  for (auto it = t.order.rbegin(); it != t.order.rend(); ++it) {
    const NodeId v = *it;
    const NodeId p = t.parent[v];
    std::uint64_t carried = load[v] + (responders[v] ? 1 : 0);
    if (p == v) break;  // origin hands responses straight to the joiner
    if (cap) carried = std::min<std::uint64_t>(carried, *cap);
    msgs += carried;
    load[p] += carried;
  }
  return msgs;
}

std::vector<char> degree_mask(const OverlayGraph& g, std::span<const Degree> degrees) {
  std::vector<char> mask(g.node_count(), 0);
  for (Degree d : degrees) {
    for (NodeId v : g.nodes_with_degree(d)) mask[v] = 1;
  }
  return mask;
}

NodeId bootstrap_contact(const OverlayGraph& g, Rng& accounting) {
  return static_cast<NodeId>(accounting.uniform_index(g.node_count()));
}

std::size_t eligible_count(const OverlayGraph& g) {
  std::size_t total = 0;
  for (Degree d = 1; d < g.cutoff(); ++d) total += g.count_with_degree(d);
  return total;
}

void require_eligible(const OverlayGraph& g) {
  if (eligible_count(g) < g.k()) {
    throw Error(ErrorCode::no_eligible_node,
                "fewer than k=" + std::to_string(g.k()) + " nodes are below the cutoff at n=" +
                    std::to_string(g.node_count()));
  }
}

}  // namespace

BroadcastCost broadcast_cost(const OverlayGraph& g, NodeId origin, std::span<const char> responders,
                             std::optional<std::uint32_t> per_node_forward_cap) {
  if (origin >= g.node_count()) throw Error(ErrorCode::unknown_node, "origin is not in the graph");
  if (responders.size() != g.node_count()) {
    throw Error(ErrorCode::invalid_argument, "responder mask must have one entry per node");
  }
  const FloodTree tree = build_flood_tree(g, origin);
  return {tree.flood_msgs, response_cost(tree, responders, per_node_forward_cap)};
}

SraSelection sra_select(const OverlayGraph& g, const DistributionTables& tables, Rng& rng) {
  const Degree k = tables.spec.k;
  const Degree m = tables.spec.m;
  SraSelection sel;
  sel.targets = sra_pick_degrees(tables, rng);

  for (Degree target : sel.targets) {
    std::optional<NodeId> v = pick_from_bucket(g, target, sel.acceptors, rng);
    if (!v) {
      // Re-request the nearest populated degree, walking toward 2k first
      // (the seed degree), then away from it.
      const int dir = target < 2 * k ? 1 : -1;
      std::vector<Degree> order;
      if (target != 2 * k) {
        for (int d = static_cast<int>(target) + dir; d >= static_cast<int>(k) && d < static_cast<int>(m); d += dir) {
          order.push_back(static_cast<Degree>(d));
        }
        for (int d = static_cast<int>(target) - dir; d >= static_cast<int>(k) && d < static_cast<int>(m); d -= dir) {
          order.push_back(static_cast<Degree>(d));
        }
      } else {
        for (Degree off = 1; off < m; ++off) {
          if (target >= k + off) order.push_back(target - off);
          if (target + off < m) order.push_back(target + off);
        }
      }
      for (Degree d : order) {
        v = pick_from_bucket(g, d, sel.acceptors, rng);
        if (v) {
          sel.fallback_degrees.push_back(d);
          break;
        }
      }
      if (!v) {
        throw Error(ErrorCode::no_eligible_node,
                    "SRA found no free node below the cutoff at n=" + std::to_string(g.node_count()));
      }
    }
    sel.acceptors.push_back(*v);
  }
  return sel;
}

JoinStats join_sra(OverlayGraph& g, const DistributionTables& tables, Rng& rng, Rng* accounting) {
  const Degree k = tables.spec.k;
  JoinStats stats;
  const SraSelection sel = sra_select(g, tables, rng);
  stats.fallback_broadcasts = sel.fallback_degrees.size();
  const auto& targets = sel.targets;
  const auto& fallback_degrees = sel.fallback_degrees;
  const auto& acceptors = sel.acceptors;

  if (accounting) {
    const FloodTree tree = build_flood_tree(g, bootstrap_contact(g, *accounting));
    stats.broadcast_msgs = tree.flood_msgs * (1 + stats.fallback_broadcasts);
    stats.response_msgs = response_cost(tree, degree_mask(g, targets), k);
    for (Degree d : fallback_degrees) {
      const Degree one[] = {d};
      stats.response_msgs += response_cost(tree, degree_mask(g, one), k);
    }
  }
  attach_new_node(g, acceptors);
  return stats;
}

JoinStats join_sda(OverlayGraph& g, const SdaDegreeList& order, Rng& rng, Rng* accounting) {
  JoinStats stats;
  const auto degrees = order.for_join(g.node_count());
  std::vector<NodeId> acceptors;
  for (Degree d : degrees) {
    const auto v = pick_from_bucket(g, d, acceptors, rng);
    if (!v) {
      throw Error(ErrorCode::empty_degree_bucket,
                  "SDA degree list names degree " + std::to_string(d) + " at n=" +
                      std::to_string(g.node_count()) + " but no free node has it");
    }
    acceptors.push_back(*v);
  }
  if (accounting) {
    const FloodTree tree = build_flood_tree(g, bootstrap_contact(g, *accounting));
    stats.broadcast_msgs = tree.flood_msgs;
    stats.response_msgs = response_cost(tree, degree_mask(g, degrees), order.k());
  }
  attach_new_node(g, acceptors);
  return stats;
}

WeightedSampler preferential_weights(const OverlayGraph& g) {
  WeightedSampler w;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const Degree d = g.degree(v);
    w.push_back(d < g.cutoff() ? d : 0);
  }
  return w;
}

JoinStats join_ba(OverlayGraph& g, WeightedSampler& weights, Rng& rng, Rng* accounting) {
  if (weights.size() != g.node_count()) {
    throw Error(ErrorCode::invalid_argument, "preferential weights are out of sync with the graph");
  }
  require_eligible(g);
  JoinStats stats;
  if (accounting) {
    const FloodTree tree = build_flood_tree(g, bootstrap_contact(g, *accounting));
    const std::vector<char> everyone(g.node_count(), 1);
    stats.broadcast_msgs = tree.flood_msgs;
    stats.response_msgs = response_cost(tree, everyone, std::nullopt);
  }

  std::vector<NodeId> acceptors;
  std::vector<std::uint64_t> saved;
  for (Degree i = 0; i < g.k(); ++i) {
    const auto v = static_cast<NodeId>(weights.sample(rng));
    acceptors.push_back(v);
    saved.push_back(weights.weight(v));
    weights.set(v, 0);
  }
  attach_new_node(g, acceptors);
  for (NodeId v : acceptors) {
    const Degree d = g.degree(v);
    weights.set(v, d < g.cutoff() ? d : 0);
  }
  weights.push_back(g.k() < g.cutoff() ? g.k() : 0);
  return stats;
}

JoinStats join_hapa(OverlayGraph& g, Rng& rng) {
  const Degree k = g.k();
  const Degree m = g.cutoff();
  require_eligible(g);
  const double denom = 2.0 * static_cast<double>(g.node_count()) * k;
  JoinStats stats;
  std::vector<NodeId> acceptors;
  std::uint64_t hops = 0;
  auto current = static_cast<NodeId>(rng.uniform_index(g.node_count()));
  for (;;) {
    ++stats.attempt_msgs;
    const Degree d = g.degree(current);
    if (d < m && std::find(acceptors.begin(), acceptors.end(), current) == acceptors.end() &&
        rng.uniform01() < d / denom) {
      acceptors.push_back(current);
      if (acceptors.size() == k) break;
    }
    const auto nbrs = g.neighbors(current);
    current = nbrs[rng.uniform_index(nbrs.size())];
    ++stats.attempt_msgs;
    if (++hops > kHapaHopCap) {
      throw Error(ErrorCode::hop_cap_exceeded,
                  "HAPA join exceeded " + std::to_string(kHapaHopCap) + " hops at n=" +
                      std::to_string(g.node_count()));
    }
  }
  attach_new_node(g, acceptors);
  return stats;
}

JoinStats join_gaian(OverlayGraph& g, Rng& rng, Rng* accounting) {
  const Degree k = g.k();
  const Degree m = g.cutoff();
  require_eligible(g);
  JoinStats stats;
  if (accounting) {
    const FloodTree tree = build_flood_tree(g, bootstrap_contact(g, *accounting));
    std::vector<char> eligible(g.node_count(), 0);
    for (NodeId v = 0; v < g.node_count(); ++v) eligible[v] = g.degree(v) < m ? 1 : 0;
    stats.broadcast_msgs = tree.flood_msgs;
    stats.response_msgs = response_cost(tree, eligible, k);
  }

  // Node i answers after U(0, 1/degree(i)). Within one degree class the
  // delays are i.i.d., so the k earliest answers overall are found from the
  // k smallest order statistics of each class, then assigned to uniformly
  // chosen class members.
  struct Answer {
    double time;
    Degree degree;
  };
  std::vector<Answer> answers;
  for (Degree d = 1; d < m; ++d) {
    const std::size_t size = g.count_with_degree(d);
    const std::size_t take = std::min<std::size_t>(size, k);
    double x = 0.0;
    for (std::size_t j = 0; j < take; ++j) {
      const double remaining = static_cast<double>(size - j);
      x += (1.0 - x) * (1.0 - std::pow(1.0 - rng.uniform01(), 1.0 / remaining));
      answers.push_back({x / d, d});
    }
  }
  std::stable_sort(answers.begin(), answers.end(),
                   [](const Answer& a, const Answer& b) { return a.time < b.time; });
  std::vector<std::size_t> wins(m, 0);
  for (Degree i = 0; i < k; ++i) ++wins[answers[i].degree];

  std::vector<NodeId> acceptors;
  for (Degree d = 1; d < m; ++d) {
    for (std::size_t w = 0; w < wins[d]; ++w) acceptors.push_back(*pick_from_bucket(g, d, acceptors, rng));
  }
  attach_new_node(g, acceptors);
  return stats;
}

Grower::Grower(const GrowthAlgorithm& algo, std::size_t n_max, const Rng& root)
    : algo_(algo), n_max_(n_max), root_(root), graph_(seed_graph(algo.spec.k, algo.spec.m)) {
  if (algo.spec.m <= 2 * algo.spec.k) {
    throw Error(ErrorCode::invalid_argument, "cutoff m must exceed 2k");
  }
  if (uses_exponent(algo.kind)) tables_ = compute_tables(algo.spec);
  if (algo.kind == Algorithm::sda) sda_order_ = sda_connection_order(*tables_, std::max(n_max, graph_.node_count() + 1));
  if (algo.kind == Algorithm::ba) ba_weights_ = preferential_weights(graph_);
}

JoinStats Grower::join_next(bool count_messages) {
  const std::size_t n = graph_.node_count();
  Rng rng = root_.fork(stream::join, n);
  std::optional<Rng> acc;
  if (count_messages) acc = root_.fork(stream::accounting, n);
  Rng* accounting = acc ? &*acc : nullptr;
  switch (algo_.kind) {
    case Algorithm::sra: return join_sra(graph_, *tables_, rng, accounting);
    case Algorithm::sda: return join_sda(graph_, *sda_order_, rng, accounting);
    case Algorithm::ba: return join_ba(graph_, ba_weights_, rng, accounting);
    case Algorithm::hapa: return join_hapa(graph_, rng);
    case Algorithm::gaian: return join_gaian(graph_, rng, accounting);
  }
  throw Error(ErrorCode::invalid_argument, "unknown growth algorithm");
}

GrowthResult grow(const GrowthAlgorithm& algo, std::size_t n_target, const Rng& root,
                  const GrowthOptions& options) {
  const std::size_t seed_n = 2 * static_cast<std::size_t>(algo.spec.k) + 1;
  if (n_target <= seed_n) {
    throw Error(ErrorCode::invalid_argument,
                "target size must exceed the seed size 2k+1=" + std::to_string(seed_n));
  }
  Grower grower(algo, n_target, root);
  std::vector<JoinStats> trace;
  trace.reserve(n_target - seed_n);
  while (grower.graph().node_count() < n_target) {
    const bool count = grower.graph().node_count() < options.count_messages_below;
    trace.push_back(grower.join_next(count));
    if (options.on_join) options.on_join(grower.graph(), trace.back());
  }
  return {std::move(grower.mutable_graph()), std::move(trace)};
}

}  // namespace lsf
