#pragma once

#include <optional>
#include <vector>

#include "lsf/graph.hpp"

namespace lsf {

// Target of a limited scale-free overlay: minimum degree k, hard cutoff m,
// exponent gamma. Valid when m > 2k, gamma > 0 and the non-negativity
// condition on the cutoff class holds (see is_feasible).
struct DistributionSpec {
  Degree k = 2;
  Degree m = 20;
  double gamma = 3.0;
};

// Precomputed per-degree tables for a feasible spec. Vectors are indexed by
// degree - k and cover degrees k..m-1.
//
//   f[d]  fraction of nodes with degree d (power law c * d^-gamma)
//   f_m   fraction of nodes sitting at the cutoff
//   a[d]  expected number of nodes moving from degree d to d+1 per join
//   v[d]  cumulative probability range used to draw an acceptor degree;
//         a uniform draw r maps to the d with v[d-1] <= r < v[d]
struct DistributionTables {
  DistributionSpec spec;
  double c = 0.0;
  std::vector<double> f;
  double f_m = 0.0;
  std::vector<double> a;
  std::vector<double> v;

  // Frequency of degree d over the full range k..m (0 outside it).
  double frequency(Degree d) const;
  double transition_rate(Degree d) const;
  double range_upper(Degree d) const;
  // Degree d with v[d-1] <= r < v[d]; r in [0, 1).
  Degree degree_for_draw(double r) const;
};

// 2k * sum_{i=k}^{m-1} i^-gamma - sum_{i=k}^{m-1} i^(1-gamma). Non-negative
// exactly when every frequency, including the cutoff class, is non-negative.
long double feasibility_residual(Degree k, Degree m, double gamma);
bool is_feasible(const DistributionSpec& spec);

// Throws invalid_argument for malformed specs and infeasible_spec (naming
// both sides of the violated inequality) for infeasible ones.
void validate(const DistributionSpec& spec);

DistributionTables compute_tables(const DistributionSpec& spec);

// Smallest gamma for which (k, m) is feasible, by bisection on [1e-6, 10].
// Throws not_bracketed when every gamma > 0 is already feasible, which is
// the case for m <= 3k + 1.
double min_gamma(Degree k, Degree m, double tol = 1e-9);

// Exponent at which the cutoff class also follows the power law, i.e.
// f_m == c * m^-gamma. Present iff m >= 3k; at m == 3k the root is gamma = 0.
std::optional<double> unique_gamma(Degree k, Degree m, double tol = 1e-12);

// Largest feasible cutoff for (k, gamma), or nullopt when every m > 2k is
// feasible (always so for gamma >= 3).
std::optional<Degree> max_cutoff(Degree k, double gamma);

}  // namespace lsf
