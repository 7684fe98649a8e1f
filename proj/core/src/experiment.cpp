#include "lsf/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <mutex>
#include <thread>

#include "json.hpp"

#include "lsf/distribution.hpp"
#include "lsf/error.hpp"
#include "lsf/growth.hpp"

#ifndef LSF_VERSION
#define LSF_VERSION "0.0.0"
#endif

namespace lsf {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::string cell_key(Algorithm a, Degree k, Degree m, double gamma) {
  std::string s = std::string(algorithm_name(a)) + "_k" + std::to_string(k) + "_m" + std::to_string(m);
  if (uses_exponent(a)) s += "_g" + format_double(gamma);
  return s;
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& xs) {
  MeanSe out;
  if (xs.empty()) return out;
  double sum = 0.0;
  for (double x : xs) sum += x;
  out.mean = sum / xs.size();
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.se = std::sqrt(ss / (xs.size() - 1) / xs.size());
  }
  return out;
}

// Running sums for one overhead window.
struct WindowAccumulator {
  std::uint64_t joins = 0;
  double sum = 0.0;
  double sum_sq = 0.0;
  double broadcast = 0.0;
  double response = 0.0;
  double attempt = 0.0;
  double fallback = 0.0;

  void add(const JoinStats& s) {
    const double t = static_cast<double>(s.total());
    ++joins;
    sum += t;
    sum_sq += t * t;
    broadcast += static_cast<double>(s.broadcast_msgs);
    response += static_cast<double>(s.response_msgs);
    attempt += static_cast<double>(s.attempt_msgs);
    fallback += static_cast<double>(s.fallback_broadcasts);
  }

  OverheadPoint finish(std::size_t n) const {
    OverheadPoint p;
    p.n = n;
    p.joins = joins;
    if (joins == 0) return p;
    const double j = static_cast<double>(joins);
    p.mean_join_messages = sum / j;
    if (joins > 1) {
      const double var = std::max(0.0, (sum_sq - sum * sum / j) / (j - 1));
      p.stderr_ = std::sqrt(var / j);
    }
    p.mean_broadcast = broadcast / j;
    p.mean_response = response / j;
    p.mean_attempt = attempt / j;
    p.mean_fallback = fallback / j;
    return p;
  }
};

std::string describe(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    return std::string(error_name(err->code())) + ": " + err->what();
  }
  return e.what();
}

CellResult run_cell(const ExperimentConfig& cfg, CellResult cell) {
  const GrowthAlgorithm algo{cell.algorithm, DistributionSpec{cell.k, cell.m, cell.gamma}};
  const Rng root(cell.seed);

  std::size_t overhead_max = 0;
  for (std::size_t p : cfg.overhead_points) overhead_max = std::max(overhead_max, p);
  const std::size_t target = std::max({cfg.n, cfg.search_n, overhead_max});

  std::vector<std::size_t> points = cfg.overhead_points;
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  std::vector<WindowAccumulator> windows(points.size());

  Grower grower(algo, target, root);
  std::optional<OverlayGraph> search_graph;

  auto snapshot = [&](std::size_t size) {
    if (size == cfg.n) {
      cell.histogram = degree_histogram(grower.graph());
      cell.fit = fit_power_law(cell.histogram, cfg.effective_fit_min(), cfg.effective_fit_max(cell.m));
    }
    if (cfg.search_n != 0 && size == cfg.search_n) search_graph = grower.graph();
    if (cfg.write_graphs && !cfg.output_dir.empty() && (size == cfg.n || size == cfg.search_n)) {
      const fs::path dir = fs::path(cfg.output_dir) / "graphs";
      fs::create_directories(dir);
      const fs::path file = dir / (cell.label() + "_n" + std::to_string(size) + ".edges");
      std::ofstream out(file);
      if (!out) throw Error(ErrorCode::io_error, "cannot write " + file.string());
      write_edge_list(out, grower.graph());
    }
  };

  snapshot(grower.graph().node_count());
  while (grower.graph().node_count() < target) {
    const std::size_t after = grower.graph().node_count() + 1;
    bool metered = false;
    for (std::size_t i = 0; i < points.size(); ++i) {
      metered |= after <= points[i] && after + cfg.overhead_window > points[i];
    }
    const JoinStats stats = grower.join_next(metered);
    if (metered) {
      for (std::size_t i = 0; i < points.size(); ++i) {
        if (after <= points[i] && after + cfg.overhead_window > points[i]) windows[i].add(stats);
      }
    }
    snapshot(after);
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (windows[i].joins > 0) cell.overhead.push_back(windows[i].finish(points[i]));
  }

  if (search_graph) {
    Rng placement_rng = root.fork(stream::placement, 0);
    const ItemPlacement items = ItemPlacement::shuffled(search_graph->node_count(), placement_rng);
    const Degree fanout = cfg.effective_fanout();
    for (SearchKind kind : cfg.search_kinds) {
      if (kind == SearchKind::rw && cfg.rw_normalized) {
        cell.searches[kind] =
            rw_normalized_curve(*search_graph, items, cfg.ttl_min, cfg.ttl_max, cfg.trials, root, fanout);
      } else {
        cell.searches[kind] =
            hit_curve(*search_graph, items, kind, cfg.ttl_min, cfg.ttl_max, cfg.trials, root, fanout);
      }
    }
  }
  return cell;
}

GroupSummary summarize(const ExperimentConfig& cfg, const std::vector<const CellResult*>& cells) {
  const CellResult& first = *cells.front();
  GroupSummary g;
  g.algorithm = first.algorithm;
  g.k = first.k;
  g.m = first.m;
  g.gamma = first.gamma;
  for (const auto* c : cells) g.seeds.push_back(c->seed);

  std::vector<double> gh, chi;
  for (const auto* c : cells) {
    gh.push_back(c->fit.gamma_hat);
    chi.push_back(c->fit.chi_square_stat);
  }
  const auto gs = mean_se(gh);
  const auto cs = mean_se(chi);
  g.gamma_hat = gs.mean;
  g.gamma_hat_stderr = gs.se;
  g.chi_square = cs.mean;
  g.chi_square_stderr = cs.se;

  const Degree fit_lo = cfg.effective_fit_min();
  const Degree fit_hi = cfg.effective_fit_max(g.m);
  std::optional<DistributionTables> tables;
  if (uses_exponent(g.algorithm)) tables = compute_tables({g.k, g.m, g.gamma});
  double z = 0.0;
  for (Degree d = fit_lo; d <= fit_hi; ++d) z += std::pow(static_cast<double>(d), -g.gamma_hat);
  std::vector<double> in_fit;
  for (const auto* c : cells) {
    in_fit.push_back(c->histogram.n ? static_cast<double>(c->fit.n_fit) / c->histogram.n : 0.0);
  }
  const double fit_share = mean_se(in_fit).mean;

  for (Degree d = g.k; d <= g.m; ++d) {
    std::vector<double> fr;
    for (const auto* c : cells) fr.push_back(c->histogram.frequency(d));
    const auto s = mean_se(fr);
    g.frequency.push_back({static_cast<double>(d), s.mean, s.se});
    if (tables) {
      g.target_frequency.push_back(tables->frequency(d));
    } else if (d >= fit_lo && d <= fit_hi) {
      g.target_frequency.push_back(fit_share * std::pow(static_cast<double>(d), -g.gamma_hat) / z);
    } else {
      g.target_frequency.push_back(std::nan(""));
    }
  }

  for (const auto& [kind, curve] : first.searches) {
    std::vector<HitPoint> merged;
    for (std::size_t i = 0; i < curve.size(); ++i) {
      HitPoint p;
      p.ttl = curve[i].ttl;
      p.walk_ttl = curve[i].walk_ttl;
      std::vector<double> hf, msg;
      for (const auto* c : cells) {
        const HitPoint& q = c->searches.at(kind).at(i);
        p.trials += q.trials;
        p.hits += q.hits;
        hf.push_back(q.hit_fraction);
        msg.push_back(q.mean_messages);
      }
      const auto h = mean_se(hf);
      p.hit_fraction = h.mean;
      p.stderr_ = cells.size() > 1 ? h.se : curve[i].stderr_;
      p.mean_messages = mean_se(msg).mean;
      merged.push_back(p);
    }
    g.searches[kind] = std::move(merged);
  }

  for (std::size_t i = 0; i < first.overhead.size(); ++i) {
    std::vector<double> means;
    for (const auto* c : cells) means.push_back(c->overhead.at(i).mean_join_messages);
    const auto s = mean_se(means);
    g.overhead.push_back({static_cast<double>(first.overhead[i].n), s.mean,
                          cells.size() > 1 ? s.se : first.overhead[i].stderr_});
  }
  return g;
}

// JSON helpers. Non-finite doubles are stored as null.
json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }
double get_num(const json& j) { return j.is_null() ? std::nan("") : j.get<double>(); }

json hit_point_json(const HitPoint& p) {
  return {{"ttl", p.ttl},       {"walk_ttl", p.walk_ttl},          {"trials", p.trials},
          {"hits", p.hits},     {"hit_fraction", num(p.hit_fraction)}, {"stderr", num(p.stderr_)},
          {"mean_messages", num(p.mean_messages)}};
}

HitPoint hit_point_from(const json& j) {
  HitPoint p;
  p.ttl = j.at("ttl").get<std::uint32_t>();
  p.walk_ttl = j.at("walk_ttl").get<std::uint32_t>();
  p.trials = j.at("trials").get<std::uint64_t>();
  p.hits = j.at("hits").get<std::uint64_t>();
  p.hit_fraction = get_num(j.at("hit_fraction"));
  p.stderr_ = get_num(j.at("stderr"));
  p.mean_messages = get_num(j.at("mean_messages"));
  return p;
}

json series_json(const std::vector<SeriesPoint>& s) {
  json out = json::array();
  for (const auto& p : s) out.push_back({num(p.x), num(p.mean), num(p.stderr_)});
  return out;
}

std::vector<SeriesPoint> series_from(const json& j) {
  std::vector<SeriesPoint> out;
  for (const auto& p : j) out.push_back({get_num(p.at(0)), get_num(p.at(1)), get_num(p.at(2))});
  return out;
}

template <typename Fn>
json curves_json(const std::map<SearchKind, std::vector<HitPoint>>& curves, Fn&& fn) {
  json out = json::object();
  for (const auto& [kind, curve] : curves) {
    json arr = json::array();
    for (const auto& p : curve) arr.push_back(fn(p));
    out[std::string(search_kind_name(kind))] = arr;
  }
  return out;
}

std::map<SearchKind, std::vector<HitPoint>> curves_from(const json& j) {
  std::map<SearchKind, std::vector<HitPoint>> out;
  for (const auto& [name, arr] : j.items()) {
    const auto kind = parse_search_kind(name);
    if (!kind) throw Error(ErrorCode::parse_error, "unknown search kind " + name);
    for (const auto& p : arr) out[*kind].push_back(hit_point_from(p));
  }
  return out;
}

Algorithm algorithm_from(const json& j) {
  const auto a = parse_algorithm(j.get<std::string>());
  if (!a) throw Error(ErrorCode::parse_error, "unknown algorithm " + j.get<std::string>());
  return *a;
}

json cell_json(const CellResult& c) {
  json overhead = json::array();
  for (const auto& p : c.overhead) {
    overhead.push_back({{"n", p.n},
                        {"joins", p.joins},
                        {"mean_join_messages", num(p.mean_join_messages)},
                        {"stderr", num(p.stderr_)},
                        {"mean_broadcast", num(p.mean_broadcast)},
                        {"mean_response", num(p.mean_response)},
                        {"mean_attempt", num(p.mean_attempt)},
                        {"mean_fallback", num(p.mean_fallback)}});
  }
  return {{"algorithm", algorithm_name(c.algorithm)},
          {"k", c.k},
          {"m", c.m},
          {"gamma", num(c.gamma)},
          {"seed", c.seed},
          {"error", c.error},
          {"histogram", {{"n", c.histogram.n}, {"counts", c.histogram.counts}}},
          {"fit",
           {{"gamma_hat", num(c.fit.gamma_hat)},
            {"chi_square", num(c.fit.chi_square_stat)},
            {"fit_min", c.fit.fit_min},
            {"fit_max", c.fit.fit_max},
            {"n_fit", c.fit.n_fit}}},
          {"searches", curves_json(c.searches, hit_point_json)},
          {"overhead", overhead}};
}

CellResult cell_from(const json& j) {
  CellResult c;
  c.algorithm = algorithm_from(j.at("algorithm"));
  c.k = j.at("k").get<Degree>();
  c.m = j.at("m").get<Degree>();
  c.gamma = get_num(j.at("gamma"));
  c.seed = j.at("seed").get<std::uint64_t>();
  c.error = j.at("error").get<std::string>();
  c.histogram.n = j.at("histogram").at("n").get<std::uint64_t>();
  c.histogram.counts = j.at("histogram").at("counts").get<std::vector<std::uint64_t>>();
  const json& f = j.at("fit");
  c.fit.gamma_hat = get_num(f.at("gamma_hat"));
  c.fit.chi_square_stat = get_num(f.at("chi_square"));
  c.fit.fit_min = f.at("fit_min").get<Degree>();
  c.fit.fit_max = f.at("fit_max").get<Degree>();
  c.fit.n_fit = f.at("n_fit").get<std::uint64_t>();
  c.searches = curves_from(j.at("searches"));
  for (const auto& p : j.at("overhead")) {
    OverheadPoint o;
    o.n = p.at("n").get<std::size_t>();
    o.joins = p.at("joins").get<std::uint64_t>();
    o.mean_join_messages = get_num(p.at("mean_join_messages"));
    o.stderr_ = get_num(p.at("stderr"));
    o.mean_broadcast = get_num(p.at("mean_broadcast"));
    o.mean_response = get_num(p.at("mean_response"));
    o.mean_attempt = get_num(p.at("mean_attempt"));
    o.mean_fallback = get_num(p.at("mean_fallback"));
    c.overhead.push_back(o);
  }
  return c;
}

json group_json(const GroupSummary& g) {
  json target = json::array();
  for (double t : g.target_frequency) target.push_back(num(t));
  return {{"algorithm", algorithm_name(g.algorithm)},
          {"k", g.k},
          {"m", g.m},
          {"gamma", num(g.gamma)},
          {"seeds", g.seeds},
          {"gamma_hat", num(g.gamma_hat)},
          {"gamma_hat_stderr", num(g.gamma_hat_stderr)},
          {"chi_square", num(g.chi_square)},
          {"chi_square_stderr", num(g.chi_square_stderr)},
          {"frequency", series_json(g.frequency)},
          {"target_frequency", target},
          {"searches", curves_json(g.searches, hit_point_json)},
          {"overhead", series_json(g.overhead)}};
}

GroupSummary group_from(const json& j) {
  GroupSummary g;
  g.algorithm = algorithm_from(j.at("algorithm"));
  g.k = j.at("k").get<Degree>();
  g.m = j.at("m").get<Degree>();
  g.gamma = get_num(j.at("gamma"));
  g.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  g.gamma_hat = get_num(j.at("gamma_hat"));
  g.gamma_hat_stderr = get_num(j.at("gamma_hat_stderr"));
  g.chi_square = get_num(j.at("chi_square"));
  g.chi_square_stderr = get_num(j.at("chi_square_stderr"));
  g.frequency = series_from(j.at("frequency"));
  for (const auto& t : j.at("target_frequency")) g.target_frequency.push_back(get_num(t));
  g.searches = curves_from(j.at("searches"));
  g.overhead = series_from(j.at("overhead"));
  return g;
}

class CsvFile {
 public:
  explicit CsvFile(const fs::path& path) : path_(path), out_(path) {
    if (!out_) throw Error(ErrorCode::io_error, "cannot write " + path.string());
    out_.precision(17);
  }
  std::ofstream& out() { return out_; }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
  std::ofstream out_;
};

// NaN cells are left empty.
std::string cell_text(double x) { return std::isfinite(x) ? format_double(x) : std::string(); }

std::string overhead_label(const ExperimentConfig& cfg, const GroupSummary& g) {
  std::string s(algorithm_name(g.algorithm));
  if (uses_exponent(g.algorithm) && cfg.gamma.size() > 1) s += "_g" + format_double(g.gamma);
  return s;
}

}  // namespace

std::string CellResult::label() const { return cell_key(algorithm, k, m, gamma) + "_s" + std::to_string(seed); }

std::string GroupSummary::label() const { return cell_key(algorithm, k, m, gamma); }

ExperimentReport run_experiment(const ExperimentConfig& cfg, const ProgressFn& progress) {
  cfg.validate();

  std::vector<CellResult> plan;
  for (Algorithm a : cfg.algorithms) {
    for (Degree m : cfg.m) {
      const std::vector<double> gammas = uses_exponent(a) ? cfg.gamma : std::vector<double>{0.0};
      for (double g : gammas) {
        for (std::uint64_t seed : cfg.seeds) {
          CellResult c;
          c.algorithm = a;
          c.k = cfg.k;
          c.m = m;
          c.gamma = g;
          c.seed = seed;
          plan.push_back(std::move(c));
        }
      }
    }
  }

  ExperimentReport report;
  report.config = cfg;
  report.provenance = {config_hash(cfg), cfg.seeds, std::string(library_version())};
  report.cells.resize(plan.size());

  std::atomic<std::size_t> next{0};
  std::mutex progress_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < plan.size(); i = next++) {
      CellResult result;
      try {
        result = run_cell(cfg, plan[i]);
      } catch (const std::exception& e) {
        result = plan[i];
        result.error = describe(e);
      }
      report.cells[i] = std::move(result);
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(report.cells[i]);
      }
    }
  };
  const unsigned threads = std::min<std::size_t>(cfg.workers, plan.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  for (std::size_t i = 0; i < report.cells.size();) {
    const auto key = cell_key(report.cells[i].algorithm, report.cells[i].k, report.cells[i].m,
                              report.cells[i].gamma);
    std::vector<const CellResult*> ok;
    std::size_t j = i;
    for (; j < report.cells.size(); ++j) {
      const auto& c = report.cells[j];
      if (cell_key(c.algorithm, c.k, c.m, c.gamma) != key) break;
      if (c.ok()) ok.push_back(&c);
    }
    if (!ok.empty()) report.groups.push_back(summarize(cfg, ok));
    i = j;
  }
  return report;
}

std::string ExperimentReport::to_json() const {
  json cfg = json::object();
  for (const auto& [key, value] : config.entries()) cfg[key] = value;
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(provenance.config_hash));
  json cells_j = json::array();
  for (const auto& c : cells) cells_j.push_back(cell_json(c));
  json groups_j = json::array();
  for (const auto& g : groups) groups_j.push_back(group_json(g));
  const json doc = {{"provenance",
                     {{"config_hash", hash}, {"seeds", provenance.seeds}, {"version", provenance.version}}},
                    {"config", cfg},
                    {"cells", cells_j},
                    {"groups", groups_j}};
  return doc.dump(1) + "\n";
}

ExperimentReport ExperimentReport::from_json(const std::string& text) {
  ExperimentReport r;
  try {
    const json doc = json::parse(text);
    for (const auto& [key, value] : doc.at("config").items()) r.config.set(key, value.get<std::string>());
    const json& p = doc.at("provenance");
    r.provenance.config_hash = std::stoull(p.at("config_hash").get<std::string>(), nullptr, 16);
    r.provenance.seeds = p.at("seeds").get<std::vector<std::uint64_t>>();
    r.provenance.version = p.at("version").get<std::string>();
    for (const auto& c : doc.at("cells")) r.cells.push_back(cell_from(c));
    for (const auto& g : doc.at("groups")) r.groups.push_back(group_from(g));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("malformed report: ") + e.what());
  }
  return r;
}

std::string_view figure_name(Figure f) noexcept {
  switch (f) {
    case Figure::dist: return "dist";
    case Figure::search: return "search";
    case Figure::overhead: return "overhead";
    case Figure::maxm: return "maxm";
    case Figure::fit: return "fit";
  }
  return "?";
}

std::optional<Figure> parse_figure(std::string_view name) noexcept {
  for (Figure f : {Figure::dist, Figure::search, Figure::overhead, Figure::maxm, Figure::fit}) {
    if (figure_name(f) == name) return f;
  }
  return std::nullopt;
}

std::vector<fs::path> emit_figure_data(const ExperimentReport& report, Figure figure, const fs::path& dir) {
  const auto& groups = report.groups;
  auto missing = [&](const std::string& what) {
    throw Error(ErrorCode::missing_series,
                "report has no " + what + " series for figure " + std::string(figure_name(figure)));
  };
  fs::create_directories(dir);
  std::vector<fs::path> written;

  switch (figure) {
    case Figure::dist: {
      if (groups.empty()) missing("degree histogram");
      for (const auto& g : groups) {
        CsvFile csv(dir / ("dist_" + g.label() + ".csv"));
        csv.out() << "degree,empirical_frequency,target_frequency\n";
        for (std::size_t i = 0; i < g.frequency.size(); ++i) {
          csv.out() << static_cast<Degree>(g.frequency[i].x) << ',' << cell_text(g.frequency[i].mean) << ','
                    << cell_text(g.target_frequency[i]) << '\n';
        }
        written.push_back(csv.path());
      }
      break;
    }
    case Figure::search: {
      for (const auto& g : groups) {
        for (const auto& [kind, curve] : g.searches) {
          CsvFile csv(dir / ("search_" + g.label() + "_" + std::string(search_kind_name(kind)) + ".csv"));
          csv.out() << "ttl,trials,hits,hit_fraction,stderr,mean_messages\n";
          for (const auto& p : curve) {
            csv.out() << p.ttl << ',' << p.trials << ',' << p.hits << ',' << cell_text(p.hit_fraction) << ','
                      << cell_text(p.stderr_) << ',' << cell_text(p.mean_messages) << '\n';
          }
          written.push_back(csv.path());
        }
      }
      if (written.empty()) missing("search");
      break;
    }
    case Figure::overhead: {
      std::map<std::pair<Degree, Degree>, std::vector<const GroupSummary*>> panels;
      for (const auto& g : groups) {
        if (!g.overhead.empty()) panels[{g.k, g.m}].push_back(&g);
      }
      if (panels.empty()) missing("overhead");
      for (const auto& [km, members] : panels) {
        CsvFile csv(dir / ("overhead_k" + std::to_string(km.first) + "_m" + std::to_string(km.second) + ".csv"));
        csv.out() << "n,algorithm,mean_join_messages,stderr\n";
        for (const auto* g : members) {
          for (const auto& p : g->overhead) {
            csv.out() << static_cast<std::size_t>(p.x) << ',' << overhead_label(report.config, *g) << ','
                      << cell_text(p.mean) << ',' << cell_text(p.stderr_) << '\n';
          }
        }
        written.push_back(csv.path());
      }
      break;
    }
    case Figure::maxm: {
      const auto& cfg = report.config;
      if (cfg.maxm_k.empty()) missing("maxm_k");
      CsvFile csv(dir / "maxm.csv");
      csv.out() << "gamma,k,m_max\n";
      const auto steps = static_cast<long>(
          std::floor((cfg.maxm_gamma_max - cfg.maxm_gamma_min) / cfg.maxm_gamma_step + 1e-9));
      for (Degree k : cfg.maxm_k) {
        for (long s = 0; s <= steps; ++s) {
          const double g = std::round((cfg.maxm_gamma_min + s * cfg.maxm_gamma_step) * 1e9) / 1e9;
          const auto mm = max_cutoff(k, g);
          csv.out() << format_double(g) << ',' << k << ',' << (mm ? std::to_string(*mm) : "inf") << '\n';
        }
      }
      written.push_back(csv.path());
      break;
    }
    case Figure::fit: {
      if (groups.empty()) missing("fit");
      CsvFile csv(dir / "fit_table.csv");
      csv.out() << "algorithm,k,m,gamma,seeds,gamma_hat,gamma_hat_stderr,chi_square,chi_square_stderr\n";
      for (const auto& g : groups) {
        csv.out() << algorithm_name(g.algorithm) << ',' << g.k << ',' << g.m << ','
                  << (uses_exponent(g.algorithm) ? format_double(g.gamma) : std::string()) << ','
                  << g.seeds.size() << ',' << cell_text(g.gamma_hat) << ',' << cell_text(g.gamma_hat_stderr)
                  << ',' << cell_text(g.chi_square) << ',' << cell_text(g.chi_square_stderr) << '\n';
      }
      written.push_back(csv.path());
      break;
    }
  }
  return written;
}

void write_artifacts(const ExperimentReport& report, const fs::path& dir) {
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "report.json");
    if (!out) throw Error(ErrorCode::io_error, "cannot write " + (dir / "report.json").string());
    out << report.to_json();
  }
  const fs::path cells_dir = dir / "cells";
  fs::create_directories(cells_dir);
  for (const auto& c : report.cells) {
    if (!c.ok()) continue;
    CsvFile csv(cells_dir / (c.label() + "_hist.csv"));
    csv.out() << "degree,count,frequency\n";
    for (Degree d = c.histogram.min_degree(); d <= c.histogram.max_degree(); ++d) {
      csv.out() << d << ',' << c.histogram.count(d) << ',' << format_double(c.histogram.frequency(d)) << '\n';
    }
  }
  bool any_search = false;
  bool any_overhead = false;
  for (const auto& g : report.groups) {
    any_search |= !g.searches.empty();
    any_overhead |= !g.overhead.empty();
  }
  if (!report.groups.empty()) {
    emit_figure_data(report, Figure::fit, dir);
    emit_figure_data(report, Figure::dist, dir);
  }
  if (any_search) emit_figure_data(report, Figure::search, dir);
  if (any_overhead) emit_figure_data(report, Figure::overhead, dir);
}

std::string_view library_version() noexcept { return LSF_VERSION; }

}  // namespace lsf
