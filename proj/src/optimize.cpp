#include "klmchain/optimize.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>
#include <gsl/gsl_vector.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "klmchain/chain.hpp"

namespace klmchain {

double golden_section_maximize(const std::function<double(double)>& f, double lo, double hi, double tolerance) {
  if (!(lo <= hi)) throw std::invalid_argument("golden section needs lo <= hi");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a >= tolerance) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

SweepResult sweep_x(int hops, double x_min, double x_max, int steps) {
  if (hops < 1) throw std::invalid_argument("hops must be >= 1");
  if (steps < 2) throw std::invalid_argument("a sweep needs at least two steps");
  if (!(x_min < x_max)) throw std::invalid_argument("sweep range must satisfy x_min < x_max");
  if (!TentParams::in_range(x_min) || !TentParams::in_range(x_max)) {
    std::ostringstream msg;
    msg << "sweep range [" << x_min << ", " << x_max << "] leaves the tent domain [-1/12, 1/9]";
    throw std::out_of_range(msg.str());
  }

  auto objective = [hops](double x) {
    return deferred_success_prob(ChainSpec::identical(tent_family({x}), hops));
  };

  SweepResult result;
  result.samples.reserve(static_cast<std::size_t>(steps));
  const double step = (x_max - x_min) / (steps - 1);
  std::size_t best = 0;
  for (int i = 0; i < steps; ++i) {
    const double x = (i == steps - 1) ? x_max : x_min + i * step;
    result.samples.push_back({x, objective(x)});
    if (result.samples.back().p > result.samples[best].p) best = result.samples.size() - 1;
  }

  const double lo = result.samples[best == 0 ? 0 : best - 1].x;
  const double hi = result.samples[std::min(best + 1, result.samples.size() - 1)].x;
  const double refined_x = golden_section_maximize(objective, lo, hi, 1e-6);
  const double refined_p = objective(refined_x);
  if (refined_p >= result.samples[best].p) {
    result.argmax_x = refined_x;
    result.max_p = refined_p;
  } else {
    result.argmax_x = result.samples[best].x;
    result.max_p = result.samples[best].p;
  }
  return result;
}

std::vector<double> project_to_simplex(const std::vector<double>& v) {
  if (v.empty()) return {};
  std::vector<double> sorted(v);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    cumulative += sorted[i];
    const double t = (cumulative - 1.0) / static_cast<double>(i + 1);
    if (sorted[i] - t > 0.0) theta = t;
  }
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [theta](double x) { return std::max(0.0, x - theta); });
  // Renormalize away rounding so downstream validation sees an exact simplex point.
  const double total = std::accumulate(out.begin(), out.end(), 0.0);
  for (auto& x : out) x /= total;
  return out;
}

namespace {

struct Objective {
  int hops;
  std::size_t dim;
};

double negative_success(const gsl_vector* x, void* params) {
  const auto* obj = static_cast<const Objective*>(params);
  std::vector<double> v(obj->dim);
  for (std::size_t i = 0; i < obj->dim; ++i) v[i] = gsl_vector_get(x, i);
  return -deferred_success_prob_grouped(from_weights(project_to_simplex(v)), obj->hops);
}

struct MinimizerDeleter {
  void operator()(gsl_multimin_fminimizer* m) const { gsl_multimin_fminimizer_free(m); }
};
struct VectorDeleter {
  void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};

// One Nelder-Mead descent from `start`; returns the best projected weights found.
std::vector<double> nelder_mead(Objective& obj, const std::vector<double>& start, const OptimizeOptions& options,
                                double step_size) {
  gsl_multimin_function fn{&negative_success, obj.dim, &obj};
  std::unique_ptr<gsl_vector, VectorDeleter> x(gsl_vector_alloc(obj.dim));
  std::unique_ptr<gsl_vector, VectorDeleter> steps(gsl_vector_alloc(obj.dim));
  for (std::size_t i = 0; i < obj.dim; ++i) gsl_vector_set(x.get(), i, start[i]);
  gsl_vector_set_all(steps.get(), step_size);

  std::unique_ptr<gsl_multimin_fminimizer, MinimizerDeleter> minimizer(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, obj.dim));
  if (gsl_multimin_fminimizer_set(minimizer.get(), &fn, x.get(), steps.get()) != GSL_SUCCESS) {
    throw std::runtime_error("failed to initialize the simplex search");
  }
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    if (gsl_multimin_fminimizer_iterate(minimizer.get()) != GSL_SUCCESS) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(minimizer.get()), options.size_tolerance) ==
        GSL_SUCCESS) {
      break;
    }
  }
  const gsl_vector* best = gsl_multimin_fminimizer_x(minimizer.get());
  std::vector<double> v(obj.dim);
  for (std::size_t i = 0; i < obj.dim; ++i) v[i] = gsl_vector_get(best, i);
  return project_to_simplex(v);
}

}  // namespace

CoeffOptimum optimize_coeffs(int n_photons, int hops, std::uint64_t seed, const OptimizeOptions& options) {
  if (n_photons < 1) throw std::invalid_argument("n_photons must be >= 1");
  if (hops < 1) throw std::invalid_argument("hops must be >= 1");
  if (lattice_size(n_photons, hops) > kDefaultLatticeBudget) {
    throw BudgetExceeded("outcome lattice N^hops exceeds the evaluation budget");
  }
  gsl_set_error_handler_off();

  const auto dim = static_cast<std::size_t>(n_photons) + 1;
  Objective obj{hops, dim};
  auto evaluate = [&](const std::vector<double>& w) { return deferred_success_prob_grouped(from_weights(w), hops); };

  std::vector<std::vector<double>> starts;
  starts.emplace_back(dim, 1.0 / static_cast<double>(dim));
  std::mt19937_64 rng(seed);
  std::gamma_distribution<double> gamma(1.0, 1.0);
  for (int s = 0; s < options.random_starts; ++s) {
    std::vector<double> w(dim);
    for (auto& x : w) x = gamma(rng);
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (auto& x : w) x /= total;
    starts.push_back(std::move(w));
  }

  std::vector<double> best_w = starts.front();
  double best_p = evaluate(best_w);
  for (const auto& start : starts) {
    std::vector<double> w = start;
    double p = evaluate(w);
    // Restart from the incumbent with a shrinking simplex until it stops improving.
    for (double step = 0.05; step > 1e-5; step *= 0.25) {
      auto candidate = nelder_mead(obj, w, options, step);
      const double cp = evaluate(candidate);
      if (cp > p) {
        w = std::move(candidate);
        p = cp;
      }
    }
    if (p > best_p) {
      best_p = p;
      best_w = std::move(w);
    }
  }

  auto coeffs = from_weights(best_w);
  return {coeffs, deferred_success_prob(ChainSpec::identical(coeffs, hops))};
}

}  // namespace klmchain
