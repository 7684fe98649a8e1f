#include "lsf/distribution.hpp"

#include <boost/math/special_functions/zeta.hpp>
#include <cmath>
#include <sstream>
#include <string>

#include "lsf/error.hpp"

namespace lsf {

namespace {

// Compensated summation in extended precision.
class KahanSum {
 public:
  void add(long double x) {
    const long double y = x - carry_;
    const long double t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }
  long double value() const { return sum_; }

 private:
  long double sum_ = 0.0L;
  long double carry_ = 0.0L;
};

long double ipow(Degree i, long double exponent) {
  return std::pow(static_cast<long double>(i), exponent);
}

// sum_{i=k}^{last} (2k - i) i^-gamma. Its sign equals the sign of
// sum (2k - i) (2k / i)^gamma, which is strictly increasing in gamma, so
// bisection on the sign is sound.
long double signed_moment(Degree k, Degree last, long double gamma) {
  KahanSum s;
  for (Degree i = k; i <= last; ++i) {
    s.add((2.0L * k - i) * ipow(i, -gamma));
  }
  return s.value();
}

long double abs_moment(Degree k, Degree last, long double gamma) {
  KahanSum s;
  for (Degree i = k; i <= last; ++i) s.add(std::fabs(2.0L * k - i) * ipow(i, -gamma));
  return s.value();
}

constexpr double kFeasibilityRelTol = 1e-12;

void check_shape(Degree k, Degree m) {
  if (k < 1) throw Error(ErrorCode::invalid_argument, "k must be at least 1");
  if (m <= 2 * k) {
    throw Error(ErrorCode::invalid_argument,
                "cutoff m=" + std::to_string(m) + " must exceed 2k=" + std::to_string(2 * k));
  }
}

template <class Pred>
double bisect(double lo, double hi, double tol, Pred nonneg_at) {
  for (int it = 0; it < 400 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (nonneg_at(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace

double DistributionTables::frequency(Degree d) const {
  if (d == spec.m) return f_m;
  if (d < spec.k || d > spec.m) return 0.0;
  return f[d - spec.k];
}

double DistributionTables::transition_rate(Degree d) const {
  if (d < spec.k || d >= spec.m) return 0.0;
  return a[d - spec.k];
}

double DistributionTables::range_upper(Degree d) const {
  if (d < spec.k) return 0.0;
  if (d >= spec.m) return 1.0;
  return v[d - spec.k];
}

Degree DistributionTables::degree_for_draw(double r) const {
  // First d with r < v[d]; v is non-decreasing and ends at exactly 1.
  Degree lo = 0;
  auto hi = static_cast<Degree>(v.size() - 1);
  while (lo < hi) {
    const Degree mid = (lo + hi) / 2;
    if (r < v[mid]) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return spec.k + lo;
}

long double feasibility_residual(Degree k, Degree m, double gamma) {
  return signed_moment(k, m - 1, gamma);
}

bool is_feasible(const DistributionSpec& spec) {
  if (spec.k < 1 || spec.m <= 2 * spec.k || !(spec.gamma > 0.0) || !std::isfinite(spec.gamma)) {
    return false;
  }
  const long double r = feasibility_residual(spec.k, spec.m, spec.gamma);
  return r >= -kFeasibilityRelTol * abs_moment(spec.k, spec.m - 1, spec.gamma);
}

void validate(const DistributionSpec& spec) {
  check_shape(spec.k, spec.m);
  if (!(spec.gamma > 0.0) || !std::isfinite(spec.gamma)) {
    throw Error(ErrorCode::invalid_argument, "gamma must be a positive finite number");
  }
  if (is_feasible(spec)) return;

  KahanSum lhs, rhs;
  for (Degree i = spec.k; i < spec.m; ++i) {
    lhs.add(2.0L * spec.k * ipow(i, -spec.gamma));
    rhs.add(ipow(i, 1.0L - spec.gamma));
  }
  std::ostringstream msg;
  msg.precision(10);
  msg << "infeasible (k=" << spec.k << ", m=" << spec.m << ", gamma=" << spec.gamma
      << "): 2k*sum i^-gamma = " << static_cast<double>(lhs.value())
      << " < sum i^(1-gamma) = " << static_cast<double>(rhs.value()) << " over i in [" << spec.k
      << ", " << spec.m - 1 << "]";
  try {
    msg << "; minimum feasible gamma is " << min_gamma(spec.k, spec.m);
  } catch (const Error&) {
  }
  throw Error(ErrorCode::infeasible_spec, msg.str());
}

DistributionTables compute_tables(const DistributionSpec& spec) {
  validate(spec);
  const Degree k = spec.k;
  const Degree m = spec.m;
  const long double g = spec.gamma;

  KahanSum denom;
  for (Degree j = k; j < m; ++j) denom.add(static_cast<long double>(m - j) * ipow(j, -g));
  const long double c = static_cast<long double>(m - 2 * k) / denom.value();

  DistributionTables t;
  t.spec = spec;
  t.c = static_cast<double>(c);
  const std::size_t width = m - k;
  t.f.resize(width);
  t.a.resize(width);
  t.v.resize(width);

  std::vector<long double> fl(width);
  KahanSum cumulative;
  for (std::size_t idx = 0; idx < width; ++idx) {
    fl[idx] = c * ipow(static_cast<Degree>(k + idx), -g);
    t.f[idx] = static_cast<double>(fl[idx]);
  }
  KahanSum total;
  for (long double x : fl) total.add(x);
  long double f_m = 1.0L - total.value();
  if (f_m < 0.0L && f_m > -1e-12L) f_m = 0.0L;
  t.f_m = static_cast<double>(f_m);

  for (std::size_t idx = 0; idx + 1 < width; ++idx) {
    cumulative.add(fl[idx]);
    t.a[idx] = static_cast<double>(1.0L - cumulative.value());
  }
  t.a[width - 1] = t.f_m;

  KahanSum range;
  for (std::size_t idx = 0; idx < width; ++idx) {
    range.add(static_cast<long double>(t.a[idx]) / k);
    t.v[idx] = static_cast<double>(range.value());
  }
  if (std::fabs(t.v.back() - 1.0) > 1e-9) {
    throw Error(ErrorCode::infeasible_spec,
                "probability ranges do not close at 1 (v[m-1]=" + std::to_string(t.v.back()) + ")");
  }
  t.v.back() = 1.0;
  return t;
}

double min_gamma(Degree k, Degree m, double tol) {
  check_shape(k, m);
  constexpr double lo = 1e-6;
  constexpr double hi = 10.0;
  if (feasibility_residual(k, m, lo) >= 0.0L) {
    throw Error(ErrorCode::not_bracketed, "every gamma > 0 is feasible for k=" + std::to_string(k) +
                                              ", m=" + std::to_string(m));
  }
  if (feasibility_residual(k, m, hi) < 0.0L) {
    throw Error(ErrorCode::not_bracketed, "no feasible gamma below 10 for k=" + std::to_string(k) +
                                              ", m=" + std::to_string(m));
  }
  return bisect(lo, hi, tol, [&](double g) { return feasibility_residual(k, m, g) >= 0.0L; });
}

std::optional<double> unique_gamma(Degree k, Degree m, double tol) {
  check_shape(k, m);
  if (m < 3 * k) return std::nullopt;
  // The cutoff condition is the same signed moment taken up to m itself; at
  // gamma = 0 it equals (m-k+1)(3k-m)/2 <= 0.
  constexpr double hi = 10.0;
  if (signed_moment(k, m, hi) < 0.0L) return std::nullopt;
  const double upper = bisect(0.0, hi, tol, [&](double g) { return signed_moment(k, m, g) >= 0.0L; });
  return upper;
}

std::optional<Degree> max_cutoff(Degree k, double gamma) {
  if (k < 1) throw Error(ErrorCode::invalid_argument, "k must be at least 1");
  if (!(gamma > 0.0)) throw Error(ErrorCode::invalid_argument, "gamma must be positive");
  if (gamma >= 3.0) return std::nullopt;
  if (gamma > 2.0) {
    // Limit of the residual as m -> infinity, via Riemann zeta minus the
    // first k-1 terms.
    long double head = 0.0L, head1 = 0.0L;
    for (Degree i = 1; i < k; ++i) {
      head += ipow(i, -gamma);
      head1 += ipow(i, 1.0L - gamma);
    }
    const long double limit = 2.0L * k * (boost::math::zeta(static_cast<long double>(gamma)) - head) -
                              (boost::math::zeta(static_cast<long double>(gamma) - 1.0L) - head1);
    if (limit >= 0.0L) return std::nullopt;
  }
  // The residual only loses mass as m grows past 2k+1.
  constexpr Degree kScanLimit = 100'000'000;
  KahanSum residual;
  for (Degree i = k; i <= 2 * k; ++i) residual.add((2.0L * k - i) * ipow(i, -gamma));
  for (Degree m = 2 * k + 2; m < kScanLimit; ++m) {
    residual.add((2.0L * k - (m - 1)) * ipow(m - 1, -gamma));
    if (residual.value() < 0.0L) return m - 1;
  }
  throw Error(ErrorCode::not_bracketed, "maximum cutoff exceeds the scan limit");
}

}  // namespace lsf
