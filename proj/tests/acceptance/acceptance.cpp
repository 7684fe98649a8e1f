#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lsf/distribution.hpp"
#include "lsf/error.hpp"
#include "lsf/experiment.hpp"
#include "lsf/growth.hpp"
#include "lsf/search.hpp"
#include "lsf/stats.hpp"
#include "test_support.hpp"

#ifndef LSF_ACCEPTANCE_DIR
#error "LSF_ACCEPTANCE_DIR must be defined"
#endif
#ifndef LSF_TEST_DATA_DIR
#error "LSF_TEST_DATA_DIR must be defined"
#endif

using namespace lsf;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;
  std::string failures;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      failures += " [failed: " + what + "]";
    }
  }
};

std::string fmt(double x, int prec = 6) {
  std::ostringstream ss;
  ss.precision(prec);
  ss << x;
  return ss.str();
}

ExperimentConfig load_config(const std::string& name, unsigned workers) {
  auto cfg = ExperimentConfig::load(std::string(LSF_ACCEPTANCE_DIR) + "/" + name);
  if (workers > 0) cfg.workers = workers;
  return cfg;
}

ExperimentReport load_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ExperimentReport::from_json(ss.str());
}

const GroupSummary* find_group(const ExperimentReport& r, Algorithm a, Degree m, double gamma = 0.0) {
  for (const auto& g : r.groups) {
    if (g.algorithm != a || g.m != m) continue;
    if (uses_exponent(a) && std::fabs(g.gamma - gamma) > 1e-9) continue;
    return &g;
  }
  return nullptr;
}

// ---- 1

void criterion1(Verdict& v) {
  double worst = 0.0;
  std::size_t cells = 0;
  for (Degree k = 1; k <= 4; ++k) {
    for (Degree m = 2 * k + 1; m <= 60; ++m) {
      double g0 = 0.05;
      try {
        g0 = min_gamma(k, m);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::not_bracketed) throw;
      }
      for (int s = 0;; ++s) {
        const double g = g0 + 0.05 * s;
        if (g > 4.0) break;
        const auto t = compute_tables({k, m, g});
        long double sf = t.f_m, si = static_cast<long double>(m) * t.f_m, sa = 0.0L;
        for (std::size_t i = 0; i < t.f.size(); ++i) {
          sf += t.f[i];
          si += static_cast<long double>(k + i) * t.f[i];
        }
        for (double a : t.a) sa += a;
        worst = std::max({worst, static_cast<double>(std::fabs(sf - 1.0L)),
                          static_cast<double>(std::fabs(si - 2.0L * k)), static_cast<double>(std::fabs(sa - k)),
                          std::fabs(t.v.back() - 1.0)});
        ++cells;
      }
    }
  }
  v.detail << cells << " grid cells, worst identity error " << fmt(worst, 3);
  v.require(worst <= 1e-9, "identity error above 1e-9");
}

// ---- 2

void criterion2(Verdict& v) {
  const double g10 = min_gamma(2, 10);
  const double g50 = min_gamma(2, 50);
  v.detail << "min_gamma(2,10)=" << fmt(g10) << " (want 1.53+-0.01), min_gamma(2,50)=" << fmt(g50)
           << " (want 2.46+-0.01)";
  v.require(std::fabs(g10 - 1.53) <= 0.01, "m=10");
  v.require(std::fabs(g50 - 2.46) <= 0.01, "m=50");
}

// ---- 3

void criterion3(Verdict& v) {
  int checked = 0, wrong = 0;
  for (Degree k = 1; k <= 4; ++k) {
    for (Degree m = 2 * k + 1; m <= 60; ++m) {
      const bool present = unique_gamma(k, m).has_value();
      ++checked;
      if (present != (m >= 3 * k)) {
        ++wrong;
        v.detail << " k=" << k << ",m=" << m << (present ? " present" : " absent");
      }
    }
  }
  v.detail << checked << " (k, m) pairs, " << wrong << " mismatches";
  v.require(wrong == 0, "existence boundary");
}

// ---- 4

void criterion4(Verdict& v, const ExperimentReport& r) {
  struct Row {
    Algorithm a;
    double lo, hi;
  };
  for (Row row : {Row{Algorithm::sda, 2.97, 3.03}, Row{Algorithm::sra, 2.93, 3.03}, Row{Algorithm::ba, 2.22, 2.45},
                  Row{Algorithm::gaian, 2.22, 2.45}, Row{Algorithm::hapa, 2.9, 3.45}}) {
    const auto* g = find_group(r, row.a, 20, 3.0);
    if (!g) {
      v.require(false, std::string(algorithm_name(row.a)) + " m=20 missing");
      continue;
    }
    v.detail << algorithm_name(row.a) << "=" << fmt(g->gamma_hat, 5) << "+-" << fmt(g->gamma_hat_stderr, 2) << " ";
    v.require(g->seeds.size() >= 5, std::string(algorithm_name(row.a)) + " has fewer than 5 seeds");
    v.require(g->gamma_hat >= row.lo && g->gamma_hat <= row.hi,
              std::string(algorithm_name(row.a)) + " outside [" + fmt(row.lo) + ", " + fmt(row.hi) + "]");
  }
  v.detail << "(n=" << r.config.n << ", k=" << r.config.k << ")";
}

// ---- 5

void criterion5(Verdict& v, const ExperimentReport& r) {
  for (Degree m : {Degree{20}, Degree{50}}) {
    std::map<Algorithm, double> chi;
    for (Algorithm a : {Algorithm::sda, Algorithm::sra, Algorithm::ba, Algorithm::gaian, Algorithm::hapa}) {
      const auto* g = find_group(r, a, m, 3.0);
      if (!g) {
        v.require(false, std::string(algorithm_name(a)) + " m=" + std::to_string(m) + " missing");
        return;
      }
      chi[a] = g->chi_square;
    }
    v.detail << "m=" << m << ":";
    for (auto [a, x] : chi) v.detail << " " << algorithm_name(a) << "=" << fmt(x, 3);
    v.detail << "; ";
    const std::string at = " at m=" + std::to_string(m);
    v.require(chi[Algorithm::sda] < chi[Algorithm::sra], "SDA < SRA" + at);
    v.require(chi[Algorithm::sra] < std::min(chi[Algorithm::ba], chi[Algorithm::gaian]), "SRA < min(BA, Gaian)" + at);
    if (m == 50) {
      for (Algorithm a : {Algorithm::sda, Algorithm::sra, Algorithm::ba, Algorithm::gaian}) {
        v.require(chi[Algorithm::hapa] > chi[a], std::string("HAPA worst vs ") + std::string(algorithm_name(a)));
      }
    }
  }
}

// ---- 6

// A above B: no TTL where A falls more than two standard errors below B,
// and a positive total difference over the TTL range.
bool curve_above(const std::vector<HitPoint>& a, const std::vector<HitPoint>& b, std::string& why) {
  double area = 0.0;
  bool ok = true;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    const double pa = double(a[i].hits) / a[i].trials;
    const double pb = double(b[i].hits) / b[i].trials;
    const double se = std::sqrt(pa * (1 - pa) / a[i].trials + pb * (1 - pb) / b[i].trials);
    area += pa - pb;
    if (pa < pb - 2.0 * se) {
      ok = false;
      why += " ttl " + std::to_string(a[i].ttl) + " below by " + fmt((pb - pa) / std::max(se, 1e-300), 3) + " se;";
    }
  }
  if (!(area > 0.0)) {
    ok = false;
    why += " total difference " + fmt(area, 3) + ";";
  }
  return ok;
}

void criterion6(Verdict& v, unsigned workers) {
  const auto cfg = load_config("search_trends.cfg", workers);
  const auto r = run_experiment(cfg);
  for (const auto& c : r.cells) {
    if (!c.ok()) v.require(false, c.label() + ": " + c.error);
  }
  struct Pair {
    SearchKind kind;
    Algorithm a;
    Degree ma;
    double ga;
    Algorithm b;
    Degree mb;
    double gb;
  };
  const auto sra = Algorithm::sra;
  std::vector<Pair> pairs{
      // flooding improves with gamma
      {SearchKind::fl, sra, 50, 3.0, sra, 50, 2.5},
      {SearchKind::fl, sra, 50, 3.5, sra, 50, 3.0},
      {SearchKind::fl, sra, 50, 3.5, Algorithm::ba, 50, 0},
      {SearchKind::fl, sra, 50, 3.5, Algorithm::gaian, 50, 0},
  };
  // NF and RW improve as gamma and m drop
  for (SearchKind kind : {SearchKind::nf, SearchKind::rw}) {
    for (Degree m : {Degree{20}, Degree{50}}) {
      pairs.push_back({kind, sra, m, 2.5, sra, m, 3.0});
      pairs.push_back({kind, sra, m, 3.0, sra, m, 3.5});
    }
    for (double g : {2.5, 3.0, 3.5}) pairs.push_back({kind, sra, 20, g, sra, 50, g});
  }
  int held = 0;
  for (const auto& p : pairs) {
    const auto* ga = find_group(r, p.a, p.ma, p.ga);
    const auto* gb = find_group(r, p.b, p.mb, p.gb);
    std::string name = std::string(search_kind_name(p.kind)) + " " + (ga ? ga->label() : "?") + " > " +
                       (gb ? gb->label() : "?");
    if (!ga || !gb || !ga->searches.count(p.kind) || !gb->searches.count(p.kind)) {
      v.require(false, name + " missing");
      continue;
    }
    std::string why;
    if (curve_above(ga->searches.at(p.kind), gb->searches.at(p.kind), why)) {
      ++held;
    } else {
      v.require(false, name + ":" + why);
    }
  }
  v.detail << held << "/" << pairs.size() << " orderings hold (n=" << cfg.search_n << ", "
           << cfg.trials * cfg.seeds.size() << " trials per point, TTL " << cfg.ttl_min << ".." << cfg.ttl_max
           << ")";
}

// ---- 7

void criterion7(Verdict& v, unsigned workers) {
  const auto cfg = load_config("overhead.cfg", workers);
  const auto r = run_experiment(cfg);
  const Degree m = cfg.m.front();
  const double gamma = cfg.gamma.front();
  std::map<Algorithm, const GroupSummary*> g;
  for (Algorithm a : {Algorithm::sra, Algorithm::sda, Algorithm::gaian, Algorithm::ba, Algorithm::hapa}) {
    g[a] = find_group(r, a, m, gamma);
    if (!g[a] || g[a]->overhead.size() != cfg.overhead_points.size()) {
      v.require(false, std::string(algorithm_name(a)) + " overhead missing");
      return;
    }
  }
  bool hapa_crosses = false;
  for (std::size_t i = 0; i < cfg.overhead_points.size(); ++i) {
    const double sra = g[Algorithm::sra]->overhead[i].mean;
    const double sda = g[Algorithm::sda]->overhead[i].mean;
    const double gaian = g[Algorithm::gaian]->overhead[i].mean;
    const double ba = g[Algorithm::ba]->overhead[i].mean;
    const double hapa = g[Algorithm::hapa]->overhead[i].mean;
    const auto n = static_cast<std::size_t>(g[Algorithm::sra]->overhead[i].x);
    v.detail << "n=" << n << " sra=" << fmt(sra, 4) << " sda=" << fmt(sda, 4) << " gaian=" << fmt(gaian, 4)
             << " ba=" << fmt(ba, 4) << " hapa=" << fmt(hapa, 4) << "; ";
    const std::string at = " at n=" + std::to_string(n);
    v.require(std::fabs(sra - sda) <= 0.15 * std::max(sra, sda), "SRA ~ SDA" + at);
    v.require(std::max(sra, sda) <= gaian, "SRA/SDA <= Gaian" + at);
    v.require(gaian <= ba, "Gaian <= BA" + at);
    hapa_crosses |= hapa > ba;
  }
  // HAPA attempt traffic against n, log-log least squares.
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < cfg.overhead_points.size(); ++i) {
    double attempts = 0.0;
    int seeds = 0;
    for (const auto& c : r.cells) {
      if (c.algorithm != Algorithm::hapa || !c.ok()) continue;
      attempts += c.overhead[i].mean_attempt;
      ++seeds;
    }
    xs.push_back(std::log(double(cfg.overhead_points[i])));
    ys.push_back(std::log(attempts / seeds));
  }
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  const double slope = sxy / sxx;
  v.detail << "HAPA attempt slope " << fmt(slope, 3) << (hapa_crosses ? ", crosses BA" : ", below BA");
  v.require(hapa_crosses || slope >= 0.5, "HAPA neither crosses BA nor grows with n");
}

// ---- 8

void criterion8(Verdict& v) {
  const std::string path = std::string(LSF_TEST_DATA_DIR) + "/sda_k2_m10_g3_n1000.txt";
  std::ifstream in(path);
  if (!in) {
    v.require(false, "cannot read " + path);
    return;
  }
  const auto list = sda_connection_order(compute_tables({2, 10, 3.0}), 1000);
  std::string line;
  std::getline(in, line);
  std::size_t rows = 0, mismatches = 0;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::size_t n;
    Degree d0, d1;
    ss >> n >> d0 >> d1;
    const auto got = list.for_join(n);
    if (got.size() != 2 || got[0] != d0 || got[1] != d1) ++mismatches;
    ++rows;
  }
  v.detail << rows << " joins compared, " << mismatches << " mismatches";
  v.require(rows == 1000 - 5 && mismatches == 0, "golden file differs");
}

// ---- 9

void cutoff_traces(Verdict& v) {
  std::size_t joins = 0;
  bool ok = true;
  for (DistributionSpec s : {DistributionSpec{1, 10, 3.0}, DistributionSpec{2, 10, 3.0}, DistributionSpec{2, 20, 3.0},
                             DistributionSpec{3, 30, 2.8}}) {
    for (auto algo : {GrowthAlgorithm::sra(s), GrowthAlgorithm::sda(s), GrowthAlgorithm::ba(s.k, s.m),
                      GrowthAlgorithm::hapa(s.k, s.m), GrowthAlgorithm::gaian(s.k, s.m)}) {
      GrowthOptions opt;
      opt.on_join = [&](const OverlayGraph& g, const JoinStats&) {
        const NodeId v = static_cast<NodeId>(g.node_count() - 1);
        for (NodeId w : g.neighbors(v)) ok &= g.degree(w) <= s.m;
        ++joins;
      };
      const auto g = grow(algo, 5000, Rng(91), opt).graph;
      for (NodeId w = 0; w < g.node_count(); ++w) ok &= g.degree(w) <= g.cutoff();
    }
  }
  v.detail << "cutoff held over " << joins << " joins";
  v.require(ok, "cutoff exceeded");
}

void sra_accepted_degrees(Verdict& v) {
  const DistributionSpec spec{2, 20, 3.0};
  const auto tables = compute_tables(spec);
  const auto g = grow(GrowthAlgorithm::sra(spec), 20000, Rng(5)).graph;
  const Rng root(2718);
  std::vector<std::uint64_t> counts(spec.m - spec.k, 0);
  std::uint64_t fallbacks = 0;
  constexpr int joins = 100000;
  for (int i = 0; i < joins; ++i) {
    Rng rng = root.fork(stream::join, i);
    const auto sel = sra_select(g, tables, rng);
    fallbacks += sel.fallback_degrees.size();
    for (NodeId a : sel.acceptors) counts[g.degree(a) - spec.k]++;
  }
  std::vector<double> probs;
  for (Degree d = spec.k; d < spec.m; ++d) probs.push_back(tables.a[d - spec.k] / spec.k);
  const auto fit = test::pearson(counts, probs, 0.01);
  v.detail << "; SRA accepted degrees chi2=" << fmt(fit.statistic, 4) << " (dof " << fit.dof << ", 1% critical "
           << fmt(fit.critical, 4) << ", " << fallbacks << " fallbacks)";
  v.require(fit.passes(), "SRA accepted-degree distribution");
}

// Homogeneity of two samples of hop-to-hit bins at the given level.
bool same_distribution(const std::vector<std::uint64_t>& x, const std::vector<std::uint64_t>& y, double level,
                       double& stat, double& critical) {
  double nx = 0, ny = 0;
  for (auto c : x) nx += c;
  for (auto c : y) ny += c;
  stat = 0.0;
  int cells = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double tot = double(x[i]) + double(y[i]);
    if (tot == 0) continue;
    const double ex = tot * nx / (nx + ny), ey = tot * ny / (nx + ny);
    stat += (x[i] - ex) * (x[i] - ex) / ex + (y[i] - ey) * (y[i] - ey) / ey;
    ++cells;
  }
  boost::math::chi_squared dist(std::max(cells - 1, 1));
  critical = boost::math::quantile(boost::math::complement(dist, level));
  return stat <= critical;
}

void nf1_equals_rw(Verdict& v) {
  constexpr std::uint32_t ttl = 8;
  constexpr int trials = 20000;
  const std::vector<GrowthAlgorithm> algos{GrowthAlgorithm::sra({2, 20, 3.0}), GrowthAlgorithm::sda({2, 20, 3.0}),
                                           GrowthAlgorithm::ba(2, 20), GrowthAlgorithm::hapa(2, 20),
                                           GrowthAlgorithm::gaian(2, 20)};
  const double level = 0.01 / algos.size();
  v.detail << "; NF(1) vs RW hop-to-hit homogeneity:";
  for (const auto& algo : algos) {
    const auto g = grow(algo, 1000, Rng(44)).graph;
    const auto items = ItemPlacement::identity(g.node_count());
    std::vector<std::uint64_t> nf(ttl + 1, 0), rw(ttl + 1, 0);
    const Rng nf_root(1001), rw_root(2002);
    for (int i = 0; i < trials; ++i) {
      Rng a = nf_root.fork(stream::search_trial, i);
      const auto t1 = draw_trial(SearchKind::nf, items, ttl, a);
      const auto r1 = trace_search(g, items, t1, 1, a);
      nf[r1.hops_to_hit ? *r1.hops_to_hit - 1 : ttl]++;
      Rng b = rw_root.fork(stream::search_trial, i);
      const auto t2 = draw_trial(SearchKind::rw, items, ttl, b);
      const auto r2 = trace_search(g, items, t2, 1, b);
      rw[r2.hops_to_hit ? *r2.hops_to_hit - 1 : ttl]++;
    }
    double stat = 0.0, critical = 0.0;
    const bool same = same_distribution(nf, rw, level, stat, critical);
    v.detail << " " << algorithm_name(algo.kind) << " " << fmt(stat, 3) << "/" << fmt(critical, 3);
    v.require(same, std::string("NF(1) != RW on ") + std::string(algorithm_name(algo.kind)));
  }
}

void criterion9(Verdict& v) {
  cutoff_traces(v);
  sra_accepted_degrees(v);
  nf1_equals_rw(v);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> criteria;
  std::string fit_report;
  unsigned workers = 0;
  app.add_option("-c,--criterion", criteria, "criteria to run (default: all)")->check(CLI::Range(1, 9));
  app.add_option("--fit-report", fit_report, "report.json of the n=5e4 fit grid (criteria 4 and 5)");
  app.add_option("--workers", workers, "worker threads for experiment grids");
  CLI11_PARSE(app, argc, argv);
  if (criteria.empty()) criteria = {1, 2, 3, 4, 5, 6, 7, 8, 9};

  int failed = 0;
  std::optional<ExperimentReport> report;
  for (int c : criteria) {
    Verdict v;
    try {
      switch (c) {
        case 1: criterion1(v); break;
        case 2: criterion2(v); break;
        case 3: criterion3(v); break;
        case 4:
        case 5:
          if (fit_report.empty()) throw Error(ErrorCode::invalid_argument, "--fit-report is required");
          if (!report) report = load_report(fit_report);
          c == 4 ? criterion4(v, *report) : criterion5(v, *report);
          break;
        case 6: criterion6(v, workers); break;
        case 7: criterion7(v, workers); break;
        case 8: criterion8(v); break;
        case 9: criterion9(v); break;
      }
    } catch (const std::exception& e) {
      v.require(false, std::string("error: ") + e.what());
    }
    std::printf("criterion %d: %s  %s%s\n", c, v.pass ? "PASS" : "FAIL", v.detail.str().c_str(), v.failures.c_str());
    std::fflush(stdout);
    failed += v.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
