#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace lsf {

using NodeId = std::uint32_t;
using Degree = std::uint32_t;

// Append-only undirected simple graph with a degree -> nodes index.
//
// Every node carries the overlay parameters it was grown with: k is the
// number of stubs each joining node attaches, m is the hard degree cutoff.
// Nodes are numbered densely in join order.
class OverlayGraph {
 public:
  OverlayGraph(Degree k, Degree m);

  Degree k() const noexcept { return k_; }
  Degree cutoff() const noexcept { return m_; }

  std::size_t node_count() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }

  Degree degree(NodeId v) const { return static_cast<Degree>(adjacency_.at(v).size()); }
  std::span<const NodeId> neighbors(NodeId v) const { return adjacency_.at(v); }
  bool has_edge(NodeId u, NodeId v) const;

  NodeId add_node();

  // Throws Error{self_loop | duplicate_edge | cutoff_violation | unknown_node}.
  void add_edge(NodeId u, NodeId v);

  // Nodes whose current degree is exactly d, in bucket order. The order is
  // deterministic but carries no meaning; select by index.
  std::span<const NodeId> nodes_with_degree(Degree d) const;
  std::size_t count_with_degree(Degree d) const { return nodes_with_degree(d).size(); }

  // Largest degree with a non-empty bucket slot allocated (may be empty).
  Degree max_indexed_degree() const noexcept {
    return buckets_.empty() ? 0 : static_cast<Degree>(buckets_.size() - 1);
  }

  // Full rescan of adjacency symmetry, simplicity, the degree index and the
  // edge count. Returns false on any inconsistency.
  bool check_invariants() const;

 private:
  void move_bucket(NodeId v, Degree from, Degree to);

  Degree k_;
  Degree m_;
  std::size_t edge_count_ = 0;
  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<std::vector<NodeId>> buckets_;
  std::vector<std::uint32_t> bucket_pos_;
};

// Complete graph on 2k+1 nodes. Throws invalid_argument for k == 0 or when
// the cutoff is below 2k.
OverlayGraph seed_graph(Degree k, Degree m);

struct EdgeListHeader {
  std::size_t n = 0;
  Degree k = 0;
  Degree m = 0;
};

// "# n=<n> k=<k> m=<m>" followed by one "u v" line per edge with u < v,
// sorted by (u, v).
void write_edge_list(std::ostream& out, const OverlayGraph& g);
OverlayGraph read_edge_list(std::istream& in);

}  // namespace lsf
