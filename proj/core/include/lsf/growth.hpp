#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "lsf/distribution.hpp"
#include "lsf/graph.hpp"
#include "lsf/random.hpp"
#include "lsf/weighted_sampler.hpp"

namespace lsf {

enum class Algorithm { sra, sda, ba, hapa, gaian };

std::string_view algorithm_name(Algorithm a) noexcept;
std::optional<Algorithm> parse_algorithm(std::string_view name) noexcept;
bool uses_exponent(Algorithm a) noexcept;

// A join rule plus its parameters. SRA and SDA carry a full distribution
// spec; the baselines only use k and m.
struct GrowthAlgorithm {
  Algorithm kind = Algorithm::sra;
  DistributionSpec spec;

  static GrowthAlgorithm sra(const DistributionSpec& s) { return {Algorithm::sra, s}; }
  static GrowthAlgorithm sda(const DistributionSpec& s) { return {Algorithm::sda, s}; }
  static GrowthAlgorithm ba(Degree k, Degree m) { return {Algorithm::ba, {k, m, 0.0}}; }
  static GrowthAlgorithm hapa(Degree k, Degree m) { return {Algorithm::hapa, {k, m, 0.0}}; }
  static GrowthAlgorithm gaian(Degree k, Degree m) { return {Algorithm::gaian, {k, m, 0.0}}; }
};

// Messages spent by one join. Broadcast-based joins fill the first two
// counters (plus fallback re-requests for SRA); HAPA fills attempt_msgs.
struct JoinStats {
  std::uint64_t broadcast_msgs = 0;
  std::uint64_t response_msgs = 0;
  std::uint64_t attempt_msgs = 0;
  std::uint64_t fallback_broadcasts = 0;

  std::uint64_t total() const noexcept { return broadcast_msgs + response_msgs + attempt_msgs; }
};

// Per-join acceptor degrees for SDA, computed once before growth. Entry
// (n, c) is the pre-edge degree of the node that accepts edge c of the node
// joining a graph of n nodes.
class SdaDegreeList {
 public:
  SdaDegreeList(Degree k, std::size_t first_n, std::vector<Degree> degrees)
      : k_(k), first_n_(first_n), degrees_(std::move(degrees)) {}

  Degree k() const noexcept { return k_; }
  std::size_t first_node_count() const noexcept { return first_n_; }
  std::size_t last_node_count() const noexcept { return first_n_ + degrees_.size() / k_; }
  std::span<const Degree> raw() const noexcept { return degrees_; }

  // The k entries for a join onto a graph of n nodes.
  std::span<const Degree> for_join(std::size_t n) const;

 private:
  Degree k_;
  std::size_t first_n_;
  std::vector<Degree> degrees_;
};

// Greedy connection order: for each edge of each join, pick the acceptor
// degree whose move (d -> d+1) most reduces sum |count - expected| over
// degrees k..m, among degrees with an available node. Covers joins onto
// graphs of 2k+1 .. n_max-1 nodes.
SdaDegreeList sda_connection_order(const DistributionTables& tables, std::size_t n_max);

// k independent acceptor degrees drawn through the v[] ranges.
std::vector<Degree> sra_pick_degrees(const DistributionTables& tables, Rng& rng);

// SRA acceptor choice without touching the graph: drawn target degrees,
// the chosen nodes, and the degree used by each fallback re-request.
struct SraSelection {
  std::vector<Degree> targets;
  std::vector<NodeId> acceptors;
  std::vector<Degree> fallback_degrees;
};
SraSelection sra_select(const OverlayGraph& g, const DistributionTables& tables, Rng& rng);

// Flood from origin over the current graph, then route responses back
// along the BFS tree. With a cap, each node forwards at most cap responses
// (its own included).
struct BroadcastCost {
  std::uint64_t flood = 0;
  std::uint64_t responses = 0;
};
BroadcastCost broadcast_cost(const OverlayGraph& g, NodeId origin, std::span<const char> responders,
                             std::optional<std::uint32_t> per_node_forward_cap);

// Join functions add one node with k edges. Selection draws come from rng.
// When accounting is non-null the broadcast/response traffic is simulated
// with draws from that stream, so turning accounting on never changes the
// grown graph.
JoinStats join_sra(OverlayGraph& g, const DistributionTables& tables, Rng& rng, Rng* accounting = nullptr);
JoinStats join_sda(OverlayGraph& g, const SdaDegreeList& order, Rng& rng, Rng* accounting = nullptr);
// weights must mirror g: weight(v) = degree(v) when below the cutoff, else 0.
JoinStats join_ba(OverlayGraph& g, WeightedSampler& weights, Rng& rng, Rng* accounting = nullptr);
JoinStats join_hapa(OverlayGraph& g, Rng& rng);
JoinStats join_gaian(OverlayGraph& g, Rng& rng, Rng* accounting = nullptr);

WeightedSampler preferential_weights(const OverlayGraph& g);

inline constexpr std::uint64_t kHapaHopCap = 1'000'000;

// Drives one algorithm from the seed graph, one join at a time. Join j uses
// the sub-stream root.fork(join, node count before the join).
class Grower {
 public:
  Grower(const GrowthAlgorithm& algo, std::size_t n_max, const Rng& root);

  const OverlayGraph& graph() const noexcept { return graph_; }
  OverlayGraph& mutable_graph() noexcept { return graph_; }
  const GrowthAlgorithm& algorithm() const noexcept { return algo_; }
  const std::optional<DistributionTables>& tables() const noexcept { return tables_; }

  JoinStats join_next(bool count_messages);

 private:
  GrowthAlgorithm algo_;
  std::size_t n_max_;
  Rng root_;
  std::optional<DistributionTables> tables_;
  std::optional<SdaDegreeList> sda_order_;
  WeightedSampler ba_weights_;
  OverlayGraph graph_;
};

struct GrowthOptions {
  // Simulate join traffic for joins onto graphs smaller than this.
  std::size_t count_messages_below = 0;
  // Called after every join with the graph and that join's stats.
  std::function<void(const OverlayGraph&, const JoinStats&)> on_join;
};

struct GrowthResult {
  OverlayGraph graph;
  std::vector<JoinStats> trace;
};

GrowthResult grow(const GrowthAlgorithm& algo, std::size_t n_target, const Rng& root,
                  const GrowthOptions& options = {});

}  // namespace lsf
