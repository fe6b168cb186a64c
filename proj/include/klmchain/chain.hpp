#pragma once

// Multi-hop teleportation chains and the two correction strategies: a single
// Kraus correction after the last hop (deferred) versus correction after every
// hop.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "klmchain/resource.hpp"
#include "klmchain/teleport.hpp"

namespace klmchain {

class ChainSpec {
 public:
  /// Every hop must use the same photon number and valid coefficients.
  explicit ChainSpec(std::vector<ResourceCoeffs> coeffs_per_hop);
  static ChainSpec identical(const ResourceCoeffs& coeffs, int hops);

  int hops() const { return static_cast<int>(hops_.size()); }
  int n_photons() const { return hops_.front().n_photons(); }
  const ResourceCoeffs& hop(int k) const { return hops_.at(static_cast<std::size_t>(k)); }
  const std::vector<ResourceCoeffs>& coeffs_per_hop() const { return hops_; }
  bool is_uniform() const;

 private:
  std::vector<ResourceCoeffs> hops_;
};

/// Raised when an outcome enumeration would exceed the configured term budget.
class BudgetExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

inline constexpr std::uint64_t kDefaultLatticeBudget = 100'000'000;

/// N^M, saturating at UINT64_MAX.
std::uint64_t lattice_size(int n_photons, int hops);

struct ChainState {
  QubitState state;      // normalized (alpha prod c_{m_k}, beta prod c_{m_k - 1})
  double probability;    // joint probability of the outcome sequence
  Distortion distortion;
};

/// Conditional qubit after the outcome sequence `outcomes` (one m per hop), no
/// correction applied. Throws std::domain_error if any m_k is 0 or N+1 (qubit
/// destroyed) and std::invalid_argument on a length mismatch.
ChainState chain_state(const QubitState& qubit, const ChainSpec& spec, std::span<const int> outcomes);

/// True when the accumulated distortion is the identity up to a global phase,
/// i.e. prod c_{m_k} == prod c_{m_k - 1} within `tolerance`.
bool self_corrects(const ChainSpec& spec, std::span<const int> outcomes, double tolerance = 1e-12);

/// Joint probability of outcomes m_1..m_M and a successful final correction:
/// min(prod |c_{m_k}|^2, prod |c_{m_k - 1}|^2).
double deferred_joint_success(const ChainSpec& spec, std::span<const int> outcomes);

/// Sum of deferred_joint_success over the whole N^M outcome lattice, accumulated
/// in lexicographic order with compensated summation.
double deferred_success_prob(const ChainSpec& spec, std::uint64_t budget = kDefaultLatticeBudget);

/// Same quantity for identical hops, summed over outcome multisets with
/// multinomial weights: O(C(N+M-1, M)) terms instead of N^M.
double deferred_success_prob_grouped(const ResourceCoeffs& coeffs, int hops);

/// prod_k single_success_prob(hop k).
double per_hop_success_prob(const ChainSpec& spec);

/// Joint success probabilities for every outcome sequence, lexicographic in
/// (m_1, .., m_M) with m_k in 1..N.
struct OutcomeTable {
  int n_photons = 0;
  int hops = 0;
  std::vector<double> joint_success;

  std::vector<int> outcomes_at(std::size_t index) const;
};

OutcomeTable outcome_table(const ChainSpec& spec, std::uint64_t budget = kDefaultLatticeBudget);

struct ChainReport {
  double p_deferred = 0.0;
  double p_per_hop = 0.0;
  double self_correction_gain = 0.0;
  std::optional<OutcomeTable> outcome_table;
};

ChainReport analyze_chain(const ChainSpec& spec, bool with_table = false,
                          std::uint64_t budget = kDefaultLatticeBudget);

/// Monte Carlo estimate of both strategies from sampled outcome trajectories.
struct EmpiricalReport {
  std::uint64_t trials = 0;
  std::uint64_t deferred_successes = 0;
  std::uint64_t per_hop_successes = 0;
  double p_deferred = 0.0;
  double stderr_deferred = 0.0;
  double p_per_hop = 0.0;
  double stderr_per_hop = 0.0;
};

struct SamplerOptions {
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 0;
  /// Worker threads; 0 means default_thread_count(). Results do not depend on it.
  unsigned threads = 0;
};

/// `qubit` == nullopt draws a Haar-random input qubit per trial.
EmpiricalReport sample_chain(const std::optional<QubitState>& qubit, const ChainSpec& spec,
                             const SamplerOptions& options);

/// KLMCHAIN_THREADS if set and positive, otherwise hardware concurrency.
unsigned default_thread_count();

}  // namespace klmchain
