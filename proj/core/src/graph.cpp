#include "lsf/graph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>

#include "lsf/error.hpp"

namespace lsf {

OverlayGraph::OverlayGraph(Degree k, Degree m) : k_(k), m_(m) {
  if (k == 0) throw Error(ErrorCode::invalid_argument, "k must be at least 1");
  if (m < 2 * k) throw Error(ErrorCode::invalid_argument, "cutoff m must be at least 2k");
  buckets_.resize(static_cast<std::size_t>(m) + 1);
}

bool OverlayGraph::has_edge(NodeId u, NodeId v) const {
  if (u >= node_count() || v >= node_count()) return false;
  const auto& a = adjacency_[u].size() <= adjacency_[v].size() ? adjacency_[u] : adjacency_[v];
  const NodeId other = adjacency_[u].size() <= adjacency_[v].size() ? v : u;
  return std::find(a.begin(), a.end(), other) != a.end();
}

NodeId OverlayGraph::add_node() {
  const auto id = static_cast<NodeId>(adjacency_.size());
  adjacency_.emplace_back();
  bucket_pos_.push_back(static_cast<std::uint32_t>(buckets_[0].size()));
  buckets_[0].push_back(id);
  return id;
}

void OverlayGraph::add_edge(NodeId u, NodeId v) {
  if (u >= node_count() || v >= node_count()) {
    throw Error(ErrorCode::unknown_node, "edge (" + std::to_string(u) + "," + std::to_string(v) +
                                             ") names a node that does not exist");
  }
  if (u == v) throw Error(ErrorCode::self_loop, "self-loop on node " + std::to_string(u));
  if (has_edge(u, v)) {
    throw Error(ErrorCode::duplicate_edge,
                "edge (" + std::to_string(u) + "," + std::to_string(v) + ") already present");
  }
  for (NodeId x : {u, v}) {
    if (degree(x) >= m_) {
      throw Error(ErrorCode::cutoff_violation,
                  "node " + std::to_string(x) + " is at the cutoff m=" + std::to_string(m_));
    }
  }
  const Degree du = degree(u);
  const Degree dv = degree(v);
  adjacency_[u].push_back(v);
  adjacency_[v].push_back(u);
  move_bucket(u, du, du + 1);
  move_bucket(v, dv, dv + 1);
  ++edge_count_;
}

void OverlayGraph::move_bucket(NodeId v, Degree from, Degree to) {
  auto& src = buckets_[from];
  const std::uint32_t pos = bucket_pos_[v];
  const NodeId last = src.back();
  src[pos] = last;
  bucket_pos_[last] = pos;
  src.pop_back();
  auto& dst = buckets_[to];
  bucket_pos_[v] = static_cast<std::uint32_t>(dst.size());
  dst.push_back(v);
}

std::span<const NodeId> OverlayGraph::nodes_with_degree(Degree d) const {
  if (d >= buckets_.size()) return {};
  return buckets_[d];
}

bool OverlayGraph::check_invariants() const {
  std::size_t degree_sum = 0;
  std::size_t indexed = 0;
  for (NodeId v = 0; v < node_count(); ++v) {
    const auto& adj = adjacency_[v];
    degree_sum += adj.size();
    if (adj.size() > m_) return false;
    std::vector<NodeId> sorted(adj.begin(), adj.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
    for (NodeId w : adj) {
      if (w == v || w >= node_count()) return false;
      const auto& back = adjacency_[w];
      if (std::find(back.begin(), back.end(), v) == back.end()) return false;
    }
    const auto d = adj.size();
    if (bucket_pos_[v] >= buckets_[d].size() || buckets_[d][bucket_pos_[v]] != v) return false;
  }
  for (const auto& b : buckets_) indexed += b.size();
  return indexed == node_count() && degree_sum == 2 * edge_count_;
}

OverlayGraph seed_graph(Degree k, Degree m) {
  OverlayGraph g(k, m);
  const Degree size = 2 * k + 1;
  for (Degree i = 0; i < size; ++i) g.add_node();
  for (NodeId u = 0; u < size; ++u) {
    for (NodeId v = u + 1; v < size; ++v) g.add_edge(u, v);
  }
  return g;
}

void write_edge_list(std::ostream& out, const OverlayGraph& g) {
  out << "# n=" << g.node_count() << " k=" << g.k() << " m=" << g.cutoff() << '\n';
  std::vector<NodeId> row;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    row.clear();
    for (NodeId v : g.neighbors(u)) {
      if (v > u) row.push_back(v);
    }
    std::sort(row.begin(), row.end());
    for (NodeId v : row) out << u << ' ' << v << '\n';
  }
}

namespace {

EdgeListHeader parse_header(const std::string& line) {
  EdgeListHeader h;
  std::istringstream in(line);
  std::string hash, n_field, k_field, m_field;
  in >> hash >> n_field >> k_field >> m_field;
  auto value = [&](const std::string& field, const char* key) -> unsigned long long {
    const std::string prefix = std::string(key) + "=";
    if (field.rfind(prefix, 0) != 0) {
      throw Error(ErrorCode::parse_error, "edge list header must read '# n=<n> k=<k> m=<m>'");
    }
    try {
      return std::stoull(field.substr(prefix.size()));
    } catch (const std::exception&) {
      throw Error(ErrorCode::parse_error, "bad number in edge list header field " + field);
    }
  };
  if (hash != "#") throw Error(ErrorCode::parse_error, "edge list must start with a '#' header");
  h.n = value(n_field, "n");
  h.k = static_cast<Degree>(value(k_field, "k"));
  h.m = static_cast<Degree>(value(m_field, "m"));
  return h;
}

}  // namespace

OverlayGraph read_edge_list(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::parse_error, "empty edge list");
  const EdgeListHeader h = parse_header(line);
  OverlayGraph g(h.k, h.m);
  for (std::size_t i = 0; i < h.n; ++i) g.add_node();
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    unsigned long long u = 0, v = 0;
    if (!(row >> u >> v)) {
      throw Error(ErrorCode::parse_error, "line " + std::to_string(line_no) + ": expected 'u v'");
    }
    g.add_edge(static_cast<NodeId>(u), static_cast<NodeId>(v));
  }
  return g;
}

}  // namespace lsf
