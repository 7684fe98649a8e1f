#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lsf/distribution.hpp"
#include "lsf/error.hpp"
#include "lsf/experiment.hpp"
#include "lsf/graph.hpp"
#include "lsf/growth.hpp"
#include "lsf/search.hpp"
#include "lsf/stats.hpp"

namespace {

using namespace lsf;

std::unique_ptr<std::ofstream> open_output(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  std::error_code ec;
  if (!parent.empty()) std::filesystem::create_directories(parent, ec);
  auto file = std::make_unique<std::ofstream>(path);
  if (!*file) throw Error(ErrorCode::io_error, "cannot write " + path);
  return file;
}

std::string fmt(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

// "-" or empty means stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = open_output(path);
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

OverlayGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open graph " + path);
  return read_edge_list(in);
}

Algorithm algorithm_arg(const std::string& name) {
  const auto a = parse_algorithm(name);
  if (!a) throw Error(ErrorCode::invalid_argument, "unknown algorithm '" + name + "'");
  return *a;
}

struct AnalyzeArgs {
  Degree k = 2;
  Degree m = 20;
  double gamma = 3.0;
  std::string out;
};

void run_analyze(const AnalyzeArgs& args) {
  const DistributionSpec spec{args.k, args.m, args.gamma};
  validate(spec);
  const auto t = compute_tables(spec);
  Output out(args.out);
  auto& os = out.stream();
  os << "degree,f,a,v\n";
  for (Degree d = spec.k; d <= spec.m; ++d) {
    os << d << ',' << fmt(t.frequency(d)) << ',' << fmt(t.transition_rate(d)) << ',';
    if (d < spec.m) os << fmt(t.range_upper(d));
    os << '\n';
  }
  std::string min_g = "none";
  try {
    min_g = fmt(min_gamma(spec.k, spec.m));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::not_bracketed) throw;
  }
  const auto uniq = unique_gamma(spec.k, spec.m);
  const auto mmax = max_cutoff(spec.k, spec.gamma);
  os << "# summary c=" << fmt(t.c) << " f_m=" << fmt(t.f_m) << " min_gamma=" << min_g
     << " unique_gamma=" << (uniq ? fmt(*uniq) : "none")
     << " max_cutoff=" << (mmax ? std::to_string(*mmax) : "inf") << '\n';
}

struct GrowArgs {
  std::string algo = "sra";
  Degree k = 2;
  Degree m = 20;
  double gamma = 3.0;
  std::size_t n = 10000;
  std::uint64_t seed = 1;
  std::string out;
  std::string stats;
};

void run_grow(const GrowArgs& args) {
  const Algorithm kind = algorithm_arg(args.algo);
  const DistributionSpec spec{args.k, args.m, uses_exponent(kind) ? args.gamma : 0.0};
  if (uses_exponent(kind)) validate(spec);
  GrowthOptions options;
  std::unique_ptr<std::ofstream> stats_file;
  if (!args.stats.empty()) {
    stats_file = open_output(args.stats);
    *stats_file << "join_index,n,broadcast_msgs,response_msgs,attempt_msgs,fallback_broadcasts\n";
    options.count_messages_below = args.n;
    options.on_join = [&, index = std::uint64_t{0}](const OverlayGraph& g, const JoinStats& s) mutable {
      *stats_file << index++ << ',' << g.node_count() << ',' << s.broadcast_msgs << ',' << s.response_msgs
                  << ',' << s.attempt_msgs << ',' << s.fallback_broadcasts << '\n';
    };
  }
  const auto result = grow(GrowthAlgorithm{kind, spec}, args.n, Rng(args.seed), options);
  Output out(args.out);
  write_edge_list(out.stream(), result.graph);
}

struct SearchArgs {
  std::string graph;
  std::string kind = "fl";
  std::uint32_t ttl_min = 2;
  std::uint32_t ttl_max = 8;
  std::uint64_t trials = 2000;
  std::uint64_t seed = 1;
  Degree fanout = 0;
  bool rw_normalized = false;
  std::string out;
};

void run_search(const SearchArgs& args) {
  const auto kind = parse_search_kind(args.kind);
  if (!kind) throw Error(ErrorCode::invalid_argument, "unknown search kind '" + args.kind + "'");
  if (args.ttl_min > args.ttl_max) throw Error(ErrorCode::invalid_argument, "ttl-min exceeds ttl-max");
  const OverlayGraph g = load_graph(args.graph);
  const Rng root(args.seed);
  Rng placement = root.fork(stream::placement, 0);
  const auto items = ItemPlacement::shuffled(g.node_count(), placement);
  const Degree fanout = args.fanout == 0 ? g.k() : args.fanout;
  const auto curve = (*kind == SearchKind::rw && args.rw_normalized)
                         ? rw_normalized_curve(g, items, args.ttl_min, args.ttl_max, args.trials, root, fanout)
                         : hit_curve(g, items, *kind, args.ttl_min, args.ttl_max, args.trials, root, fanout);
  Output out(args.out);
  auto& os = out.stream();
  os << "ttl,trials,hits,hit_fraction,stderr,mean_messages\n";
  for (const auto& p : curve) {
    os << p.ttl << ',' << p.trials << ',' << p.hits << ',' << fmt(p.hit_fraction) << ',' << fmt(p.stderr_)
       << ',' << fmt(p.mean_messages) << '\n';
  }
}

struct FitArgs {
  std::string graph;
  Degree fit_min = 0;
  Degree fit_max = 0;
  bool include_cutoff = false;
  std::string out;
  std::string hist;
};

void run_fit(const FitArgs& args) {
  const OverlayGraph g = load_graph(args.graph);
  const Degree lo = args.fit_min ? args.fit_min : g.k();
  const Degree hi = args.fit_max ? args.fit_max : (args.include_cutoff ? g.cutoff() : g.cutoff() - 1);
  const auto h = degree_histogram(g);
  const auto r = fit_power_law(h, lo, hi);
  const nlohmann::json report = {{"n", h.n},
                                 {"k", g.k()},
                                 {"m", g.cutoff()},
                                 {"fit_min", r.fit_min},
                                 {"fit_max", r.fit_max},
                                 {"n_fit", r.n_fit},
                                 {"gamma_hat", r.gamma_hat},
                                 {"chi_square", r.chi_square_stat}};
  Output out(args.out);
  out.stream() << report.dump(1) << '\n';
  if (!args.hist.empty()) {
    Output hist(args.hist);
    auto& os = hist.stream();
    os << "degree,count,frequency\n";
    for (Degree d = h.min_degree(); d <= h.max_degree(); ++d) {
      os << d << ',' << h.count(d) << ',' << fmt(h.frequency(d)) << '\n';
    }
  }
}

void apply_overrides(ExperimentConfig& cfg, const std::vector<std::string>& sets) {
  for (const auto& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::parse_error, "--set expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
}

struct ExperimentArgs {
  std::string config;
  std::vector<std::string> sets;
  std::string out_dir;
  unsigned workers = 0;
  bool quiet = false;
};

void run_experiment_cmd(const ExperimentArgs& args) {
  ExperimentConfig cfg = args.config.empty() ? ExperimentConfig{} : ExperimentConfig::load(args.config);
  apply_overrides(cfg, args.sets);
  if (!args.out_dir.empty()) cfg.output_dir = args.out_dir;
  if (args.workers) cfg.workers = args.workers;
  if (cfg.output_dir.empty()) cfg.output_dir = "results";
  const auto report = run_experiment(cfg, [&](const CellResult& c) {
    if (args.quiet) return;
    if (c.ok()) {
      std::cerr << "done " << c.label() << " gamma_hat=" << fmt(c.fit.gamma_hat)
                << " chi_square=" << fmt(c.fit.chi_square_stat) << '\n';
    } else {
      std::cerr << "failed " << c.label() << ": " << c.error << '\n';
    }
  });
  write_artifacts(report, cfg.output_dir);
  std::size_t failed = 0;
  for (const auto& c : report.cells) failed += c.ok() ? 0 : 1;
  if (failed) {
    throw Error(ErrorCode::invalid_argument,
                std::to_string(failed) + " of " + std::to_string(report.cells.size()) + " cells failed");
  }
}

struct FigureArgs {
  std::string report;
  std::string figure;
  std::string config;
  std::vector<std::string> sets;
  std::string out_dir = ".";
};

void run_figure(const FigureArgs& args) {
  const auto figure = parse_figure(args.figure);
  if (!figure) throw Error(ErrorCode::invalid_argument, "unknown figure '" + args.figure + "'");
  ExperimentReport report;
  if (!args.report.empty()) {
    std::ifstream in(args.report);
    if (!in) throw Error(ErrorCode::io_error, "cannot open report " + args.report);
    std::ostringstream ss;
    ss << in.rdbuf();
    report = ExperimentReport::from_json(ss.str());
  } else {
    report.config = args.config.empty() ? ExperimentConfig{} : ExperimentConfig::load(args.config);
  }
  apply_overrides(report.config, args.sets);
  for (const auto& path : emit_figure_data(report, *figure, args.out_dir)) std::cout << path.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Limited scale-free overlay simulator"};
  app.require_subcommand(1);

  AnalyzeArgs an;
  auto* analyze = app.add_subcommand("analyze", "Degree distribution tables for (k, m, gamma)");
  analyze->add_option("--k", an.k)->capture_default_str();
  analyze->add_option("--m", an.m)->capture_default_str();
  analyze->add_option("--gamma", an.gamma)->capture_default_str();
  analyze->add_option("--out", an.out, "CSV path (default stdout)");

  GrowArgs gr;
  auto* growc = app.add_subcommand("grow", "Grow a topology and write its edge list");
  growc->add_option("--algo", gr.algo, "sra|sda|ba|hapa|gaian")->capture_default_str();
  growc->add_option("--k", gr.k)->capture_default_str();
  growc->add_option("--m", gr.m)->capture_default_str();
  growc->add_option("--gamma", gr.gamma)->capture_default_str();
  growc->add_option("--n", gr.n)->capture_default_str();
  growc->add_option("--seed", gr.seed)->capture_default_str();
  growc->add_option("--out", gr.out, "edge list path (default stdout)");
  growc->add_option("--stats", gr.stats, "per-join message CSV");

  SearchArgs se;
  auto* searchc = app.add_subcommand("search", "Hit-ratio curve over a TTL range");
  searchc->add_option("--graph", se.graph)->required();
  searchc->add_option("--kind", se.kind, "fl|nf|rw")->capture_default_str();
  searchc->add_option("--ttl-min", se.ttl_min)->capture_default_str();
  searchc->add_option("--ttl-max", se.ttl_max)->capture_default_str();
  searchc->add_option("--trials", se.trials)->capture_default_str();
  searchc->add_option("--seed", se.seed)->capture_default_str();
  searchc->add_option("--fanout", se.fanout, "NF fanout (default k)");
  searchc->add_flag("--rw-normalized", se.rw_normalized, "RW steps matched to NF messages at each TTL");
  searchc->add_option("--out", se.out, "CSV path (default stdout)");

  FitArgs fi;
  auto* fitc = app.add_subcommand("fit", "Power-law fit of a graph's degree histogram");
  fitc->add_option("--graph", fi.graph)->required();
  fitc->add_option("--fit-min", fi.fit_min, "default k");
  fitc->add_option("--fit-max", fi.fit_max, "default m-1");
  fitc->add_flag("--include-cutoff", fi.include_cutoff, "fit up to m");
  fitc->add_option("--out", fi.out, "JSON report path (default stdout)");
  fitc->add_option("--hist", fi.hist, "histogram CSV path");

  ExperimentArgs ex;
  auto* expc = app.add_subcommand("experiment", "Run a configured experiment grid");
  expc->add_option("--config", ex.config, "key = value file");
  expc->add_option("--set", ex.sets, "override, key=value")->allow_extra_args(false);
  expc->add_option("--out-dir", ex.out_dir);
  expc->add_option("--workers", ex.workers);
  expc->add_flag("--quiet", ex.quiet);

  FigureArgs fg;
  auto* figc = app.add_subcommand("figure", "Write figure CSVs from a report");
  figc->add_option("--figure", fg.figure, "dist|search|overhead|maxm|fit")->required();
  figc->add_option("--report", fg.report, "report.json (not needed for maxm)");
  figc->add_option("--config", fg.config);
  figc->add_option("--set", fg.sets, "override, key=value")->allow_extra_args(false);
  figc->add_option("--out-dir", fg.out_dir)->capture_default_str();

  try {
    app.parse(argc, argv);
    if (*analyze) run_analyze(an);
    if (*growc) run_grow(gr);
    if (*searchc) run_search(se);
    if (*fitc) run_fit(fi);
    if (*expc) run_experiment_cmd(ex);
    if (*figc) run_figure(fg);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const Error& e) {
    std::cerr << "error: " << error_name(e.code()) << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
