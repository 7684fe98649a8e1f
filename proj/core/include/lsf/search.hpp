#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "lsf/graph.hpp"
#include "lsf/random.hpp"

namespace lsf {

enum class SearchKind { fl, nf, rw };

std::string_view search_kind_name(SearchKind k) noexcept;
std::optional<SearchKind> parse_search_kind(std::string_view name) noexcept;

// One distinct item per node.
class ItemPlacement {
 public:
  static ItemPlacement identity(std::size_t n);
  static ItemPlacement shuffled(std::size_t n, Rng& rng);

  std::size_t size() const noexcept { return holder_.size(); }
  NodeId holder(std::uint32_t item) const { return holder_.at(item); }
  std::uint32_t item_at(NodeId v) const { return item_.at(v); }

 private:
  std::vector<NodeId> holder_;
  std::vector<std::uint32_t> item_;
};

struct SearchTrial {
  SearchKind kind = SearchKind::fl;
  NodeId source = 0;
  std::uint32_t target_item = 0;
  std::uint32_t ttl = 0;
};

struct SearchResult {
  bool hit = false;
  std::uint64_t messages = 0;
  std::optional<std::uint32_t> hops_to_hit;
};

// Uniform source, uniform target item other than the one the source holds.
SearchTrial draw_trial(SearchKind kind, const ItemPlacement& items, std::uint32_t ttl, Rng& rng);

// Synchronous rounds; a node handles a query on first receipt only and
// forwards to every neighbor but its sender. The holder does not forward.
SearchResult flood_search(const OverlayGraph& g, const ItemPlacement& items, const SearchTrial& trial);

// As flooding, but each node forwards to min(fanout, available) neighbors
// chosen uniformly, excluding its sender.
SearchResult nf_search(const OverlayGraph& g, const ItemPlacement& items, const SearchTrial& trial,
                       Degree fanout, Rng& rng);

// One walker stepping to a uniform neighbor other than the previous node
// (stepping back only from a dead end). TTL counts steps.
SearchResult rw_search(const OverlayGraph& g, const ItemPlacement& items, const SearchTrial& trial, Rng& rng);

// Per-round record of one query, run to the largest TTL of interest. The
// result at any smaller TTL is a prefix of it.
struct SearchTrace {
  std::optional<std::uint32_t> hops_to_hit;
  std::vector<std::uint64_t> cumulative_messages;  // index = ttl

  SearchResult at(std::uint32_t ttl) const;
};

SearchTrace trace_search(const OverlayGraph& g, const ItemPlacement& items, const SearchTrial& trial,
                         Degree fanout, Rng& rng);

struct HitPoint {
  std::uint32_t ttl = 0;
  std::uint32_t walk_ttl = 0;  // RW step budget behind this point (RW only)
  std::uint64_t trials = 0;
  std::uint64_t hits = 0;
  double hit_fraction = 0.0;
  double stderr_ = 0.0;
  double mean_messages = 0.0;
};

// Trial i draws (source, item) and its forwarding choices from
// root.fork(search_trial, i), shared by every TTL; hit fractions are thus
// coupled and non-decreasing in TTL.
std::vector<HitPoint> hit_curve(const OverlayGraph& g, const ItemPlacement& items, SearchKind kind,
                                std::uint32_t ttl_min, std::uint32_t ttl_max, std::uint64_t trials,
                                const Rng& root, Degree fanout);

// Mean NF message count at nf_ttl over the trial plan, rounded: the RW step
// budget matched to NF at that TTL.
std::uint32_t rw_ttl_budget(const OverlayGraph& g, const ItemPlacement& items, std::uint32_t nf_ttl,
                            Degree fanout, std::uint64_t trials, const Rng& root);

// RW curve indexed by NF TTL, each point walking for rw_ttl_budget steps.
std::vector<HitPoint> rw_normalized_curve(const OverlayGraph& g, const ItemPlacement& items,
                                          std::uint32_t ttl_min, std::uint32_t ttl_max,
                                          std::uint64_t trials, const Rng& root, Degree fanout);

}  // namespace lsf
