#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "klmchain/resource.hpp"

namespace klmchain {

struct SweepSample {
  double x;
  double p;
};

struct SweepResult {
  std::vector<SweepSample> samples;  // ascending in x
  double argmax_x = 0.0;
  double max_p = 0.0;
};

/// Maximizes f on [lo, hi] by golden-section search, assuming unimodality, until
/// the bracket is narrower than `tolerance`. Returns the argmax estimate.
double golden_section_maximize(const std::function<double(double)>& f, double lo, double hi,
                               double tolerance = 1e-6);

/// Deferred-correction success probability of `hops` chained tent-family
/// resources, evaluated on a uniform grid over [x_min, x_max] and refined around
/// the best grid point.
SweepResult sweep_x(int hops, double x_min, double x_max, int steps);

struct OptimizeOptions {
  int random_starts = 6;
  int max_iterations = 3000;
  /// Simplex size at which a Nelder-Mead run is considered converged.
  double size_tolerance = 1e-9;
};

struct CoeffOptimum {
  ResourceCoeffs coeffs;
  double p;
};

/// Euclidean projection onto the probability simplex.
std::vector<double> project_to_simplex(const std::vector<double>& v);

/// Local search over real non-negative coefficient vectors for the chain's
/// deferred-correction success probability, multi-started from the uniform point
/// and seeded random points. No global optimality guarantee.
CoeffOptimum optimize_coeffs(int n_photons, int hops, std::uint64_t seed, const OptimizeOptions& options = {});

}  // namespace klmchain
