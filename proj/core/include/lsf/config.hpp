#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lsf/graph.hpp"
#include "lsf/growth.hpp"
#include "lsf/search.hpp"

namespace lsf {

// Parameters of an experiment grid. Read from a flat "key = value" text
// file; every key can also be set from the command line.
struct ExperimentConfig {
  std::vector<Algorithm> algorithms{Algorithm::sra, Algorithm::sda, Algorithm::ba, Algorithm::hapa,
                                    Algorithm::gaian};
  Degree k = 2;
  std::vector<Degree> m{20};
  std::vector<double> gamma{3.0};
  std::size_t n = 50000;         // graph size for the degree fit
  std::size_t search_n = 10000;  // graph size for searches; 0 skips them
  std::vector<std::uint64_t> seeds{1};

  std::vector<SearchKind> search_kinds{SearchKind::fl, SearchKind::nf, SearchKind::rw};
  std::uint32_t ttl_min = 2;
  std::uint32_t ttl_max = 8;
  std::uint64_t trials = 2000;
  Degree fanout = 0;  // NF fanout; 0 means k
  bool rw_normalized = true;

  // Per-join traffic is averaged over the overhead_window joins that end at
  // each point.
  std::vector<std::size_t> overhead_points;
  std::size_t overhead_window = 100;

  Degree fit_min = 0;  // 0 means k
  Degree fit_max = 0;  // 0 means m-1, or m with include_cutoff
  bool include_cutoff = false;

  std::vector<Degree> maxm_k{1, 2, 3};
  double maxm_gamma_min = 2.05;
  double maxm_gamma_max = 3.0;
  double maxm_gamma_step = 0.05;

  unsigned workers = 1;
  std::string output_dir;
  bool write_graphs = false;

  // Throws Error(parse_error) on unknown keys or malformed values.
  void set(std::string_view key, std::string_view value);
  static ExperimentConfig parse(std::string_view text);
  static ExperimentConfig load(const std::string& path);

  // Canonical key = value listing; equal configs give equal text.
  std::string to_text() const;
  std::vector<std::pair<std::string, std::string>> entries() const;

  Degree effective_fanout() const noexcept { return fanout == 0 ? k : fanout; }
  Degree effective_fit_min() const noexcept { return fit_min == 0 ? k : fit_min; }
  Degree effective_fit_max(Degree cutoff) const noexcept;

  // Every SRA/SDA (k, m, gamma) must be feasible and seeds nonempty.
  void validate() const;
};

// FNV-1a over the canonical text.
std::uint64_t config_hash(const ExperimentConfig& cfg);

}  // namespace lsf
