#pragma once

#include <cstdint>
#include <vector>

#include "lsf/graph.hpp"

namespace lsf {

// counts[d] = number of nodes with degree d.
struct DegreeHistogram {
  std::vector<std::uint64_t> counts;
  std::uint64_t n = 0;

  std::uint64_t count(Degree d) const { return d < counts.size() ? counts[d] : 0; }
  double frequency(Degree d) const { return n == 0 ? 0.0 : static_cast<double>(count(d)) / n; }
  Degree min_degree() const;
  Degree max_degree() const;
  std::uint64_t total_in(Degree lo, Degree hi) const;
};

DegreeHistogram degree_histogram(const OverlayGraph& g);

struct FitReport {
  double gamma_hat = 0.0;
  double chi_square_stat = 0.0;
  Degree fit_min = 0;
  Degree fit_max = 0;
  std::uint64_t n_fit = 0;
};

// Exponent maximizing the log-likelihood of a discrete power law truncated to
// [fit_min, fit_max]. Golden-section search on [0, 10] to 1e-6.
double mle_gamma(const DegreeHistogram& h, Degree fit_min, Degree fit_max);

// Pearson statistic sum (obs - exp)^2 / exp over [fit_min, fit_max], with
// exp_d = n_fit * d^-gamma / Z(gamma), divided by n_fit.
double chi_square_fit(const DegreeHistogram& h, double gamma, Degree fit_min, Degree fit_max);

FitReport fit_power_law(const DegreeHistogram& h, Degree fit_min, Degree fit_max);

}  // namespace lsf
