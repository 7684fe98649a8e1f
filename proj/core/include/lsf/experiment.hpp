#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lsf/config.hpp"
#include "lsf/search.hpp"
#include "lsf/stats.hpp"

namespace lsf {

struct OverheadPoint {
  std::size_t n = 0;  // node count at the end of the window
  std::uint64_t joins = 0;
  double mean_join_messages = 0.0;
  double stderr_ = 0.0;
  double mean_broadcast = 0.0;
  double mean_response = 0.0;
  double mean_attempt = 0.0;
  double mean_fallback = 0.0;
};

// One (algorithm, k, m, gamma, seed) run.
struct CellResult {
  Algorithm algorithm = Algorithm::sra;
  Degree k = 0;
  Degree m = 0;
  double gamma = 0.0;  // 0 for algorithms without a target exponent
  std::uint64_t seed = 0;
  std::string error;   // nonempty when the cell failed

  DegreeHistogram histogram;
  FitReport fit;
  std::map<SearchKind, std::vector<HitPoint>> searches;
  std::vector<OverheadPoint> overhead;

  bool ok() const noexcept { return error.empty(); }
  std::string label() const;
};

struct SeriesPoint {
  double x = 0.0;
  double mean = 0.0;
  double stderr_ = 0.0;
};

// A cell group: the same configuration over all seeds, averaged.
struct GroupSummary {
  Algorithm algorithm = Algorithm::sra;
  Degree k = 0;
  Degree m = 0;
  double gamma = 0.0;
  std::vector<std::uint64_t> seeds;  // seeds that completed
  double gamma_hat = 0.0;
  double gamma_hat_stderr = 0.0;
  double chi_square = 0.0;
  double chi_square_stderr = 0.0;
  std::vector<SeriesPoint> frequency;  // x = degree
  std::vector<double> target_frequency;  // aligned with frequency
  // trials and hits summed over seeds; hit_fraction and mean_messages are
  // seed means, stderr_ the spread across seeds (binomial for one seed).
  std::map<SearchKind, std::vector<HitPoint>> searches;
  std::vector<SeriesPoint> overhead;  // x = n

  std::string label() const;
};

struct Provenance {
  std::uint64_t config_hash = 0;
  std::vector<std::uint64_t> seeds;
  std::string version;
};

struct ExperimentReport {
  ExperimentConfig config;
  Provenance provenance;
  std::vector<CellResult> cells;
  std::vector<GroupSummary> groups;

  std::string to_json() const;
  static ExperimentReport from_json(const std::string& text);
};

using ProgressFn = std::function<void(const CellResult&)>;

// Grows, fits, searches and meters every cell, then reduces over seeds.
// Throws before any growth if the config is invalid. A failing cell is
// recorded with its error and excluded from the summaries.
ExperimentReport run_experiment(const ExperimentConfig& cfg, const ProgressFn& progress = {});

enum class Figure { dist, search, overhead, maxm, fit };
std::string_view figure_name(Figure f) noexcept;
std::optional<Figure> parse_figure(std::string_view name) noexcept;

// Writes the CSVs for one figure into dir and returns their paths.
// Throws Error(missing_series) when the report lacks the data.
std::vector<std::filesystem::path> emit_figure_data(const ExperimentReport& report, Figure figure,
                                                    const std::filesystem::path& dir);

// Writes report.json, every figure with data, and optionally edge lists.
void write_artifacts(const ExperimentReport& report, const std::filesystem::path& dir);

std::string_view library_version() noexcept;

}  // namespace lsf
