#include "lsf/stats.hpp"

#include <cmath>
#include <string>

#include "lsf/error.hpp"

namespace lsf {

Degree DegreeHistogram::min_degree() const {
  for (Degree d = 0; d < counts.size(); ++d) {
    if (counts[d] > 0) return d;
  }
  return 0;
}

Degree DegreeHistogram::max_degree() const {
  for (auto d = static_cast<Degree>(counts.size()); d > 0; --d) {
    if (counts[d - 1] > 0) return d - 1;
  }
  return 0;
}

std::uint64_t DegreeHistogram::total_in(Degree lo, Degree hi) const {
  std::uint64_t s = 0;
  for (Degree d = lo; d <= hi; ++d) s += count(d);
  return s;
}

DegreeHistogram degree_histogram(const OverlayGraph& g) {
  DegreeHistogram h;
  h.n = g.node_count();
  h.counts.assign(static_cast<std::size_t>(g.max_indexed_degree()) + 1, 0);
  for (Degree d = 0; d <= g.max_indexed_degree(); ++d) h.counts[d] = g.count_with_degree(d);
  return h;
}

namespace {

void check_range(const DegreeHistogram& h, Degree fit_min, Degree fit_max) {
  if (fit_min < 1 || fit_max < fit_min) {
    throw Error(ErrorCode::invalid_argument, "fit range must satisfy 1 <= fit_min <= fit_max");
  }
  int populated = 0;
  for (Degree d = fit_min; d <= fit_max; ++d) populated += h.count(d) > 0 ? 1 : 0;
  if (populated < 2) {
    throw Error(ErrorCode::degenerate_histogram,
                "need at least two populated degrees in [" + std::to_string(fit_min) + ", " +
                    std::to_string(fit_max) + "]");
  }
}

double log_partition(double gamma, Degree lo, Degree hi) {
  long double z = 0.0L;
  for (Degree d = lo; d <= hi; ++d) z += std::pow(static_cast<long double>(d), -static_cast<long double>(gamma));
  return static_cast<double>(std::log(z));
}

}  // namespace

double mle_gamma(const DegreeHistogram& h, Degree fit_min, Degree fit_max) {
  check_range(h, fit_min, fit_max);
  double n_fit = 0.0;
  double sum_log = 0.0;
  for (Degree d = fit_min; d <= fit_max; ++d) {
    const auto c = static_cast<double>(h.count(d));
    n_fit += c;
    sum_log += c * std::log(static_cast<double>(d));
  }
  const double mean_log = sum_log / n_fit;
  // Per-observation log-likelihood; concave in gamma.
  auto loglik = [&](double g) { return -g * mean_log - log_partition(g, fit_min, fit_max); };

  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0, hi = 10.0;
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  double f1 = loglik(x1), f2 = loglik(x2);
  while (hi - lo > 1e-6) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = loglik(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = loglik(x1);
    }
  }
  return 0.5 * (lo + hi);
}

double chi_square_fit(const DegreeHistogram& h, double gamma, Degree fit_min, Degree fit_max) {
  if (fit_min < 1 || fit_max < fit_min) {
    throw Error(ErrorCode::invalid_argument, "fit range must satisfy 1 <= fit_min <= fit_max");
  }
  const auto n_fit = static_cast<double>(h.total_in(fit_min, fit_max));
  if (n_fit == 0.0) throw Error(ErrorCode::degenerate_histogram, "no observations in the fit range");
  const double log_z = log_partition(gamma, fit_min, fit_max);
  double stat = 0.0;
  for (Degree d = fit_min; d <= fit_max; ++d) {
    const double expected = n_fit * std::exp(-gamma * std::log(static_cast<double>(d)) - log_z);
    if (!(expected > 0.0)) {
      throw Error(ErrorCode::zero_expected_count, "expected count for degree " + std::to_string(d) + " is zero");
    }
    const double diff = static_cast<double>(h.count(d)) - expected;
    stat += diff * diff / expected;
  }
  return stat / n_fit;
}

FitReport fit_power_law(const DegreeHistogram& h, Degree fit_min, Degree fit_max) {
  FitReport r;
  r.fit_min = fit_min;
  r.fit_max = fit_max;
  r.gamma_hat = mle_gamma(h, fit_min, fit_max);
  r.chi_square_stat = chi_square_fit(h, r.gamma_hat, fit_min, fit_max);
  r.n_fit = h.total_in(fit_min, fit_max);
  return r;
}

}  // namespace lsf
