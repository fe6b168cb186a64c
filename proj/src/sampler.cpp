#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>
#include <thread>

#include "klmchain/chain.hpp"

namespace klmchain {

namespace {

constexpr std::uint64_t kBlockTrials = 1 << 16;

struct BlockCounts {
  std::uint64_t deferred = 0;
  std::uint64_t per_hop = 0;
};

// Draws m in 0..N+1 with weights |alpha h c_m|^2 + |beta v c_{m-1}|^2.
int draw_outcome(std::mt19937_64& rng, const ResourceCoeffs& coeffs, double a2, double b2) {
  std::uniform_real_distribution<double> unif(0.0, a2 + b2);
  const double r = unif(rng);
  const int n = coeffs.n_photons();
  double acc = 0.0;
  for (int m = 0; m <= n; ++m) {
    acc += a2 * coeffs.weight(m) + b2 * coeffs.weight(m - 1);
    if (r < acc) return m;
  }
  return n + 1;
}

QubitState haar_qubit(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u = unif(rng);
  const double phi = 2.0 * std::numbers::pi * unif(rng);
  return {std::sqrt(u), std::polar(std::sqrt(1.0 - u), phi)};
}

BlockCounts run_block(const std::optional<QubitState>& fixed, const ChainSpec& spec, std::uint64_t seed,
                      std::uint64_t block, std::uint64_t trials) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int n = spec.n_photons();

  BlockCounts counts;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const QubitState qubit = fixed ? *fixed : haar_qubit(rng);
    const double a2 = std::norm(qubit.alpha);
    const double b2 = std::norm(qubit.beta);

    // Deferred: carry the distortion through every hop, correct once at the end.
    Distortion d;
    bool alive = true;
    for (int k = 0; k < spec.hops() && alive; ++k) {
      const int m = draw_outcome(rng, spec.hop(k), a2 * std::norm(d.h), b2 * std::norm(d.v));
      if (m == 0 || m == n + 1) {
        alive = false;
      } else {
        d = d.then(hop_distortion(spec.hop(k), m));
      }
    }
    if (alive) {
      const auto corrected = correct_distortion(d.apply(qubit), d);
      if (unif(rng) < corrected.success_prob) ++counts.deferred;
    }

    // Per hop: every hop restores the original qubit or fails.
    alive = true;
    for (int k = 0; k < spec.hops() && alive; ++k) {
      const int m = draw_outcome(rng, spec.hop(k), a2, b2);
      if (m == 0 || m == n + 1) {
        alive = false;
      } else {
        const Distortion hop = hop_distortion(spec.hop(k), m);
        alive = unif(rng) < correct_distortion(hop.apply(qubit), hop).success_prob;
      }
    }
    if (alive) ++counts.per_hop;
  }
  return counts;
}

}  // namespace

unsigned default_thread_count() {
  if (const char* env = std::getenv("KLMCHAIN_THREADS")) {
    const int value = std::atoi(env);
    if (value > 0) return static_cast<unsigned>(value);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

EmpiricalReport sample_chain(const std::optional<QubitState>& qubit, const ChainSpec& spec,
                             const SamplerOptions& options) {
  if (options.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (qubit) require_normalized(*qubit);

  const std::uint64_t blocks = (options.trials + kBlockTrials - 1) / kBlockTrials;
  std::vector<BlockCounts> per_block(blocks);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t b = next++; b < blocks; b = next++) {
      const std::uint64_t trials = std::min(kBlockTrials, options.trials - b * kBlockTrials);
      per_block[b] = run_block(qubit, spec, options.seed, b, trials);
    }
  };

  const unsigned threads = static_cast<unsigned>(
      std::min<std::uint64_t>(options.threads ? options.threads : default_thread_count(), blocks));
  std::vector<std::jthread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  pool.clear();

  EmpiricalReport report;
  report.trials = options.trials;
  for (const auto& c : per_block) {
    report.deferred_successes += c.deferred;
    report.per_hop_successes += c.per_hop;
  }
  const auto trials = static_cast<double>(options.trials);
  report.p_deferred = static_cast<double>(report.deferred_successes) / trials;
  report.p_per_hop = static_cast<double>(report.per_hop_successes) / trials;
  report.stderr_deferred = std::sqrt(report.p_deferred * (1.0 - report.p_deferred) / trials);
  report.stderr_per_hop = std::sqrt(report.p_per_hop * (1.0 - report.p_per_hop) / trials);
  return report;
}

}  // namespace klmchain
