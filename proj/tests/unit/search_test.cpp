#include <algorithm>
#include <cmath>
#include <deque>

#include "doctest.h"
#include "lsf/error.hpp"
#include "lsf/growth.hpp"
#include "lsf/search.hpp"

using namespace lsf;

namespace {

OverlayGraph cycle(std::size_t len) {
  OverlayGraph g(1, 2);
  for (std::size_t i = 0; i < len; ++i) g.add_node();
  for (std::size_t i = 0; i < len; ++i) g.add_edge(NodeId(i), NodeId((i + 1) % len));
  return g;
}

// Root 0 with 3 children, every other internal node with 2: all internal
// nodes have degree 3.
OverlayGraph ternary_tree(int depth) {
  OverlayGraph g(1, 3);
  g.add_node();
  std::vector<NodeId> level{0};
  for (int d = 0; d < depth; ++d) {
    std::vector<NodeId> next;
    for (NodeId v : level) {
      const int kids = v == 0 ? 3 : 2;
      for (int c = 0; c < kids; ++c) {
        const NodeId w = g.add_node();
        g.add_edge(v, w);
        next.push_back(w);
      }
    }
    level.swap(next);
  }
  return g;
}

std::size_t diameter(const OverlayGraph& g) {
  std::size_t best = 0;
  for (NodeId s = 0; s < g.node_count(); ++s) {
    std::vector<int> dist(g.node_count(), -1);
    std::deque<NodeId> q{s};
    dist[s] = 0;
    while (!q.empty()) {
      const NodeId v = q.front();
      q.pop_front();
      for (NodeId w : g.neighbors(v)) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          best = std::max<std::size_t>(best, dist[w]);
          q.push_back(w);
        }
      }
    }
  }
  return best;
}

SearchTrial trial_for(SearchKind kind, NodeId source, std::uint32_t item, std::uint32_t ttl) {
  SearchTrial t;
  t.kind = kind;
  t.source = source;
  t.target_item = item;
  t.ttl = ttl;
  return t;
}

const OverlayGraph& sra_graph() {
  static const OverlayGraph g = grow(GrowthAlgorithm::sra({2, 20, 3.0}), 1000, Rng(17)).graph;
  return g;
}

}  // namespace

TEST_CASE("search kind names round trip") {
  for (auto k : {SearchKind::fl, SearchKind::nf, SearchKind::rw}) {
    CHECK(parse_search_kind(search_kind_name(k)) == k);
  }
  CHECK_FALSE(parse_search_kind("dfs").has_value());
}

TEST_CASE("flooding finds a neighbor's item in one hop") {
  const auto g = seed_graph(2, 20);
  const auto items = ItemPlacement::identity(g.node_count());
  const auto r = flood_search(g, items, trial_for(SearchKind::fl, 0, 3, 1));
  CHECK(r.hit);
  REQUIRE(r.hops_to_hit.has_value());
  CHECK(*r.hops_to_hit == 1);
  CHECK(r.messages == 4);
}

TEST_CASE("flooding at the graph diameter always hits") {
  const auto& g = sra_graph();
  const auto items = ItemPlacement::identity(g.node_count());
  const auto d = static_cast<std::uint32_t>(diameter(g));
  const auto curve = hit_curve(g, items, SearchKind::fl, d, d, 500, Rng(2), 2);
  CHECK(curve[0].hit_fraction == 1.0);
}

TEST_CASE("flood messages never exceed twice the edge count") {
  const auto& g = sra_graph();
  const auto items = ItemPlacement::identity(g.node_count());
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const auto t = draw_trial(SearchKind::fl, items, 30, rng);
    CHECK(flood_search(g, items, t).messages <= 2 * g.edge_count());
  }
}

TEST_CASE("ttl 0 finds nothing and sends nothing") {
  const auto& g = sra_graph();
  const auto items = ItemPlacement::identity(g.node_count());
  for (auto kind : {SearchKind::fl, SearchKind::nf, SearchKind::rw}) {
    const auto curve = hit_curve(g, items, kind, 0, 0, 300, Rng(4), 2);
    CHECK(curve[0].hit_fraction == 0.0);
    CHECK(curve[0].mean_messages == 0.0);
  }
}

TEST_CASE("draw_trial never targets the source's own item") {
  Rng rng(8);
  Rng shuffle(3);
  const auto items = ItemPlacement::shuffled(50, shuffle);
  for (int i = 0; i < 5000; ++i) {
    const auto t = draw_trial(SearchKind::nf, items, 3, rng);
    CHECK(items.holder(t.target_item) != t.source);
  }
  Rng r(1);
  CHECK_THROWS_AS(draw_trial(SearchKind::fl, ItemPlacement::identity(1), 1, r), Error);
}

TEST_CASE("NF on degree-2 nodes forwards to every neighbor but the sender") {
  const auto g = cycle(20);
  const auto items = ItemPlacement::identity(20);
  Rng rng(1);
  const auto trace = trace_search(g, items, trial_for(SearchKind::nf, 0, 10, 12), 2, rng);
  for (std::uint32_t r = 1; r < 10; ++r) CHECK(trace.cumulative_messages[r] == 2 * r);
  REQUIRE(trace.hops_to_hit.has_value());
  CHECK(*trace.hops_to_hit == 10);
}

TEST_CASE("NF with a large fanout is flooding") {
  const auto& g = sra_graph();
  const auto items = ItemPlacement::identity(g.node_count());
  Rng draws(6);
  for (int i = 0; i < 100; ++i) {
    const auto t = draw_trial(SearchKind::nf, items, 5, draws);
    Rng rng(i);
    const auto nf = nf_search(g, items, t, 1000, rng);
    const auto fl = flood_search(g, items, t);
    CHECK(nf.hit == fl.hit);
    CHECK(nf.messages == fl.messages);
  }
}

TEST_CASE("random walk reaches the source's only neighbor in one step") {
  OverlayGraph g(1, 2);
  g.add_node();
  g.add_node();
  g.add_node();
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  Rng rng(1);
  const auto r = rw_search(g, ItemPlacement::identity(3), trial_for(SearchKind::rw, 0, 1, 1), rng);
  CHECK(r.hit);
  CHECK(*r.hops_to_hit == 1);
  CHECK(r.messages == 1);
}

TEST_CASE("random walk on a cycle hits after L/2 steps on average") {
  constexpr std::size_t L = 21;
  const auto g = cycle(L);
  const auto items = ItemPlacement::identity(L);
  Rng root(12);
  double total = 0.0;
  constexpr int trials = 20000;
  for (int i = 0; i < trials; ++i) {
    Rng rng = root.fork(stream::search_trial, i);
    const auto t = draw_trial(SearchKind::rw, items, 2 * L, rng);
    const auto r = rw_search(g, items, t, rng);
    REQUIRE(r.hit);
    total += *r.hops_to_hit;
  }
  CHECK(total / trials == doctest::Approx(L / 2.0).epsilon(0.2 / (L / 2.0)));
}

TEST_CASE("NF with fanout 1 follows the walk until it revisits a node") {
  const auto& g = sra_graph();
  const auto items = ItemPlacement::identity(g.node_count());
  const Rng root(31);
  int nf_hits = 0;
  for (int i = 0; i < 3000; ++i) {
    Rng a = root.fork(stream::search_trial, i);
    Rng b = root.fork(stream::search_trial, i);
    auto t = draw_trial(SearchKind::nf, items, 12, a);
    draw_trial(SearchKind::rw, items, 12, b);
    const auto nf = trace_search(g, items, t, 1, a);
    t.kind = SearchKind::rw;
    const auto rw = trace_search(g, items, t, 1, b);
    if (nf.hops_to_hit) {
      ++nf_hits;
      CHECK(rw.hops_to_hit == nf.hops_to_hit);
    }
    for (std::uint32_t r = 0; r <= 12; ++r) {
      if (nf.cumulative_messages[r] != r) break;
      CHECK(rw.cumulative_messages[r] == r);
    }
  }
  CHECK(nf_hits > 0);
}

TEST_CASE("hit fractions are non-decreasing in ttl") {
  const auto& g = sra_graph();
  Rng shuffle(2);
  const auto items = ItemPlacement::shuffled(g.node_count(), shuffle);
  for (auto kind : {SearchKind::fl, SearchKind::nf, SearchKind::rw}) {
    const auto curve = hit_curve(g, items, kind, 1, 8, 1000, Rng(9), 2);
    for (std::size_t i = 1; i < curve.size(); ++i) {
      CHECK(curve[i].hits >= curve[i - 1].hits);
      CHECK(curve[i].mean_messages >= curve[i - 1].mean_messages);
    }
  }
}

TEST_CASE("hit curves replay under the same root") {
  const auto& g = sra_graph();
  const auto items = ItemPlacement::identity(g.node_count());
  const auto a = hit_curve(g, items, SearchKind::nf, 2, 6, 400, Rng(77), 2);
  const auto b = hit_curve(g, items, SearchKind::nf, 2, 6, 400, Rng(77), 2);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].hits == b[i].hits);
    CHECK(a[i].mean_messages == b[i].mean_messages);
  }
  CHECK_THROWS_AS(hit_curve(g, items, SearchKind::fl, 5, 4, 10, Rng(1), 2), Error);
  CHECK_THROWS_AS(hit_curve(g, items, SearchKind::fl, 1, 4, 0, Rng(1), 2), Error);
}

TEST_CASE("RW budget matches the NF branching count") {
  const auto g = cycle(1000);
  const auto items = ItemPlacement::identity(1000);
  CHECK(rw_ttl_budget(g, items, 0, 2, 100, Rng(1)) == 0);
  CHECK(rw_ttl_budget(g, items, 5, 2, 2000, Rng(1)) == 10);

  // Degree-3 tree from its root: 3 + 3*2 + 3*4 + 3*8.
  const auto tree = ternary_tree(6);
  const auto titems = ItemPlacement::identity(tree.node_count());
  Rng rng(1);
  const auto last = static_cast<std::uint32_t>(tree.node_count() - 1);
  const auto trace = trace_search(tree, titems, trial_for(SearchKind::nf, 0, last, 4), 3, rng);
  CHECK(trace.cumulative_messages[4] == 45);
}

TEST_CASE("normalized RW walks for the NF message budget") {
  const auto& g = sra_graph();
  const auto items = ItemPlacement::identity(g.node_count());
  const auto curve = rw_normalized_curve(g, items, 2, 5, 500, Rng(3), 2);
  REQUIRE(curve.size() == 4);
  for (const auto& p : curve) {
    CHECK(p.walk_ttl == rw_ttl_budget(g, items, p.ttl, 2, 500, Rng(3)));
    CHECK(p.mean_messages <= p.walk_ttl);
  }
}
