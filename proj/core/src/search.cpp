#include "lsf/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "lsf/error.hpp"

namespace lsf {

std::string_view search_kind_name(SearchKind k) noexcept {
  switch (k) {
    case SearchKind::fl: return "fl";
    case SearchKind::nf: return "nf";
    case SearchKind::rw: return "rw";
  }
  return "unknown";
}

std::optional<SearchKind> parse_search_kind(std::string_view name) noexcept {
  for (SearchKind k : {SearchKind::fl, SearchKind::nf, SearchKind::rw}) {
    if (search_kind_name(k) == name) return k;
  }
  return std::nullopt;
}

ItemPlacement ItemPlacement::identity(std::size_t n) {
  ItemPlacement p;
  p.holder_.resize(n);
  std::iota(p.holder_.begin(), p.holder_.end(), NodeId{0});
  p.item_.resize(n);
  std::iota(p.item_.begin(), p.item_.end(), std::uint32_t{0});
  return p;
}

ItemPlacement ItemPlacement::shuffled(std::size_t n, Rng& rng) {
  ItemPlacement p = identity(n);
  for (std::size_t i = n; i > 1; --i) {
    std::swap(p.holder_[i - 1], p.holder_[rng.uniform_index(i)]);
  }
  for (std::uint32_t item = 0; item < n; ++item) p.item_[p.holder_[item]] = item;
  return p;
}

SearchTrial draw_trial(SearchKind kind, const ItemPlacement& items, std::uint32_t ttl, Rng& rng) {
  if (items.size() < 2) throw Error(ErrorCode::invalid_argument, "search needs at least two nodes");
  SearchTrial t;
  t.kind = kind;
  t.ttl = ttl;
  t.source = static_cast<NodeId>(rng.uniform_index(items.size()));
  const std::uint32_t own = items.item_at(t.source);
  auto item = static_cast<std::uint32_t>(rng.uniform_index(items.size() - 1));
  if (item >= own) ++item;
  t.target_item = item;
  return t;
}

SearchResult SearchTrace::at(std::uint32_t ttl) const {
  SearchResult r;
  const std::size_t last = cumulative_messages.size() - 1;
  r.messages = cumulative_messages[std::min<std::size_t>(ttl, last)];
  if (hops_to_hit && *hops_to_hit <= ttl) {
    r.hit = true;
    r.hops_to_hit = hops_to_hit;
  }
  return r;
}

namespace {

constexpr NodeId kNoSender = std::numeric_limits<NodeId>::max();

// Neighbors of v other than sender; when fanout < available, a uniform
// fanout-subset by partial Fisher-Yates. Shared by NF and RW so that a
// fanout of 1 consumes draws exactly like a walk step.
void forward_targets(const OverlayGraph& g, NodeId v, NodeId sender, Degree fanout, Rng& rng,
                     std::vector<NodeId>& out) {
  out.clear();
  bool skipped = false;
  for (NodeId w : g.neighbors(v)) {
    if (w == sender && !skipped) {
      skipped = true;
      continue;
    }
    out.push_back(w);
  }
  if (out.size() <= fanout) return;
  for (Degree j = 0; j < fanout; ++j) {
    const auto pick = j + rng.uniform_index(out.size() - j);
    std::swap(out[j], out[pick]);
  }
  out.resize(fanout);
}

SearchTrace trace_rounds(const OverlayGraph& g, const ItemPlacement& items, const SearchTrial& trial,
                         std::optional<Degree> fanout, Rng& rng) {
  const NodeId holder = items.holder(trial.target_item);
  SearchTrace trace;
  trace.cumulative_messages.assign(trial.ttl + 1, 0);
  if (holder == trial.source) {
    trace.hops_to_hit = 0;
    return trace;
  }
  std::vector<char> seen(g.node_count(), 0);
  seen[trial.source] = 1;
  struct Hop {
    NodeId node;
    NodeId sender;
  };
  std::vector<Hop> frontier{{trial.source, kNoSender}};
  std::vector<Hop> next;
  std::vector<NodeId> targets;
  std::uint64_t messages = 0;
  for (std::uint32_t round = 1; round <= trial.ttl; ++round) {
    next.clear();
    for (const Hop& h : frontier) {
      if (fanout) {
        forward_targets(g, h.node, h.sender, *fanout, rng, targets);
      } else {
        targets.clear();
        for (NodeId w : g.neighbors(h.node)) {
          if (w != h.sender) targets.push_back(w);
        }
      }
      for (NodeId w : targets) {
        ++messages;
        if (seen[w]) continue;
        seen[w] = 1;
        if (w == holder) {
          if (!trace.hops_to_hit) trace.hops_to_hit = round;
          continue;
        }
        next.push_back({w, h.node});
      }
    }
    trace.cumulative_messages[round] = messages;
    frontier.swap(next);
  }
  return trace;
}

SearchTrace trace_walk(const OverlayGraph& g, const ItemPlacement& items, const SearchTrial& trial, Rng& rng) {
  const NodeId holder = items.holder(trial.target_item);
  SearchTrace trace;
  trace.cumulative_messages.assign(trial.ttl + 1, 0);
  if (holder == trial.source) {
    trace.hops_to_hit = 0;
    return trace;
  }
  NodeId current = trial.source;
  NodeId previous = kNoSender;
  std::vector<NodeId> targets;
  std::uint32_t step = 1;
  for (; step <= trial.ttl; ++step) {
    forward_targets(g, current, previous, 1, rng, targets);
    if (targets.empty()) {
      if (previous == kNoSender) break;  // isolated source
      targets.push_back(previous);
    }
    previous = current;
    current = targets.front();
    trace.cumulative_messages[step] = step;
    if (current == holder) {
      trace.hops_to_hit = step;
      break;
    }
  }
  for (std::uint32_t t = step + 1; t <= trial.ttl; ++t) {
    trace.cumulative_messages[t] = trace.cumulative_messages[t - 1];
  }
  return trace;
}

}  // namespace

SearchTrace trace_search(const OverlayGraph& g, const ItemPlacement& items, const SearchTrial& trial,
                         Degree fanout, Rng& rng) {
  if (trial.source >= g.node_count() || items.size() != g.node_count()) {
    throw Error(ErrorCode::invalid_argument, "search trial does not match the graph");
  }
  switch (trial.kind) {
    case SearchKind::fl: return trace_rounds(g, items, trial, std::nullopt, rng);
    case SearchKind::nf: return trace_rounds(g, items, trial, fanout, rng);
    case SearchKind::rw: return trace_walk(g, items, trial, rng);
  }
  throw Error(ErrorCode::invalid_argument, "unknown search kind");
}

SearchResult flood_search(const OverlayGraph& g, const ItemPlacement& items, const SearchTrial& trial) {
  Rng unused(0);
  SearchTrial t = trial;
  t.kind = SearchKind::fl;
  return trace_search(g, items, t, 0, unused).at(trial.ttl);
}

SearchResult nf_search(const OverlayGraph& g, const ItemPlacement& items, const SearchTrial& trial,
                       Degree fanout, Rng& rng) {
  SearchTrial t = trial;
  t.kind = SearchKind::nf;
  return trace_search(g, items, t, fanout, rng).at(trial.ttl);
}

SearchResult rw_search(const OverlayGraph& g, const ItemPlacement& items, const SearchTrial& trial, Rng& rng) {
  SearchTrial t = trial;
  t.kind = SearchKind::rw;
  return trace_search(g, items, t, 1, rng).at(trial.ttl);
}

namespace {

std::vector<SearchTrace> run_traces(const OverlayGraph& g, const ItemPlacement& items, SearchKind kind,
                                    std::uint32_t ttl_max, std::uint64_t trials, const Rng& root,
                                    Degree fanout) {
  if (trials == 0) throw Error(ErrorCode::invalid_argument, "trials must be at least 1");
  std::vector<SearchTrace> traces;
  traces.reserve(trials);
  for (std::uint64_t i = 0; i < trials; ++i) {
    Rng rng = root.fork(stream::search_trial, i);
    const SearchTrial trial = draw_trial(kind, items, ttl_max, rng);
    traces.push_back(trace_search(g, items, trial, fanout, rng));
  }
  return traces;
}

HitPoint summarize(const std::vector<SearchTrace>& traces, std::uint32_t ttl) {
  HitPoint p;
  p.ttl = ttl;
  p.trials = traces.size();
  double messages = 0.0;
  for (const auto& t : traces) {
    const SearchResult r = t.at(ttl);
    p.hits += r.hit ? 1 : 0;
    messages += static_cast<double>(r.messages);
  }
  const auto n = static_cast<double>(p.trials);
  p.hit_fraction = static_cast<double>(p.hits) / n;
  p.stderr_ = std::sqrt(p.hit_fraction * (1.0 - p.hit_fraction) / n);
  p.mean_messages = messages / n;
  return p;
}

}  // namespace

std::vector<HitPoint> hit_curve(const OverlayGraph& g, const ItemPlacement& items, SearchKind kind,
                                std::uint32_t ttl_min, std::uint32_t ttl_max, std::uint64_t trials,
                                const Rng& root, Degree fanout) {
  if (ttl_max < ttl_min) throw Error(ErrorCode::invalid_argument, "ttl_max must be >= ttl_min");
  const auto traces = run_traces(g, items, kind, ttl_max, trials, root, fanout);
  std::vector<HitPoint> out;
  for (std::uint32_t ttl = ttl_min; ttl <= ttl_max; ++ttl) {
    out.push_back(summarize(traces, ttl));
    if (kind == SearchKind::rw) out.back().walk_ttl = ttl;
  }
  return out;
}

std::uint32_t rw_ttl_budget(const OverlayGraph& g, const ItemPlacement& items, std::uint32_t nf_ttl,
                            Degree fanout, std::uint64_t trials, const Rng& root) {
  const auto traces = run_traces(g, items, SearchKind::nf, nf_ttl, trials, root, fanout);
  return static_cast<std::uint32_t>(std::llround(summarize(traces, nf_ttl).mean_messages));
}

std::vector<HitPoint> rw_normalized_curve(const OverlayGraph& g, const ItemPlacement& items,
                                          std::uint32_t ttl_min, std::uint32_t ttl_max,
                                          std::uint64_t trials, const Rng& root, Degree fanout) {
  if (ttl_max < ttl_min) throw Error(ErrorCode::invalid_argument, "ttl_max must be >= ttl_min");
  const auto nf = run_traces(g, items, SearchKind::nf, ttl_max, trials, root, fanout);
  std::vector<std::uint32_t> budgets;
  for (std::uint32_t ttl = ttl_min; ttl <= ttl_max; ++ttl) {
    budgets.push_back(static_cast<std::uint32_t>(std::llround(summarize(nf, ttl).mean_messages)));
  }
  const auto walks = run_traces(g, items, SearchKind::rw, budgets.back(), trials, root, fanout);
  std::vector<HitPoint> out;
  for (std::uint32_t ttl = ttl_min; ttl <= ttl_max; ++ttl) {
    HitPoint p = summarize(walks, budgets[ttl - ttl_min]);
    p.walk_ttl = p.ttl;
    p.ttl = ttl;
    out.push_back(p);
  }
  return out;
}

}  // namespace lsf
