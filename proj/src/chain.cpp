#include "klmchain/chain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace klmchain {

namespace {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

void check_budget(const ChainSpec& spec, std::uint64_t budget) {
  const auto size = lattice_size(spec.n_photons(), spec.hops());
  if (size > budget) {
    throw BudgetExceeded("outcome lattice has " + std::to_string(spec.n_photons()) + "^" +
                         std::to_string(spec.hops()) + " terms, above the budget of " + std::to_string(budget) +
                         "; use the Monte Carlo sampler instead");
  }
}

// Walks the lattice m_k in 1..N lexicographically, calling visit(min(prod_h, prod_v))
// with prefix products maintained incrementally.
template <typename Visit>
void walk_lattice(const ChainSpec& spec, Visit&& visit) {
  const int n = spec.n_photons();
  const int hops = spec.hops();
  std::vector<std::vector<double>> w(static_cast<std::size_t>(hops));
  for (int k = 0; k < hops; ++k) w[static_cast<std::size_t>(k)] = spec.hop(k).weights();

  std::vector<int> digits(static_cast<std::size_t>(hops), 1);
  // prefix[k] = product over hops < k.
  std::vector<double> prefix_h(static_cast<std::size_t>(hops) + 1, 1.0);
  std::vector<double> prefix_v(static_cast<std::size_t>(hops) + 1, 1.0);
  int dirty = 0;
  while (true) {
    for (int k = dirty; k < hops; ++k) {
      const auto& wk = w[static_cast<std::size_t>(k)];
      const auto m = static_cast<std::size_t>(digits[static_cast<std::size_t>(k)]);
      prefix_h[static_cast<std::size_t>(k) + 1] = prefix_h[static_cast<std::size_t>(k)] * wk[m];
      prefix_v[static_cast<std::size_t>(k) + 1] = prefix_v[static_cast<std::size_t>(k)] * wk[m - 1];
    }
    visit(std::min(prefix_h.back(), prefix_v.back()));

    int k = hops - 1;
    while (k >= 0 && digits[static_cast<std::size_t>(k)] == n) {
      digits[static_cast<std::size_t>(k)] = 1;
      --k;
    }
    if (k < 0) break;
    ++digits[static_cast<std::size_t>(k)];
    dirty = k;
  }
}

}  // namespace

ChainSpec::ChainSpec(std::vector<ResourceCoeffs> coeffs_per_hop) : hops_(std::move(coeffs_per_hop)) {
  if (hops_.empty()) throw std::invalid_argument("a chain needs at least one hop");
  for (const auto& c : hops_) {
    require_valid(c);
    if (c.n_photons() != hops_.front().n_photons()) {
      throw std::invalid_argument("all hops must share the same photon number");
    }
  }
}

ChainSpec ChainSpec::identical(const ResourceCoeffs& coeffs, int hops) {
  if (hops < 1) throw std::invalid_argument("hops must be >= 1");
  return ChainSpec(std::vector<ResourceCoeffs>(static_cast<std::size_t>(hops), coeffs));
}

bool ChainSpec::is_uniform() const {
  return std::all_of(hops_.begin(), hops_.end(), [&](const auto& c) { return c == hops_.front(); });
}

std::uint64_t lattice_size(int n_photons, int hops) {
  std::uint64_t size = 1;
  const auto n = static_cast<std::uint64_t>(n_photons);
  for (int k = 0; k < hops; ++k) {
    if (size > std::numeric_limits<std::uint64_t>::max() / n) return std::numeric_limits<std::uint64_t>::max();
    size *= n;
  }
  return size;
}

ChainState chain_state(const QubitState& qubit, const ChainSpec& spec, std::span<const int> outcomes) {
  require_normalized(qubit);
  if (static_cast<int>(outcomes.size()) != spec.hops()) {
    throw std::invalid_argument("expected " + std::to_string(spec.hops()) + " outcomes, got " +
                                std::to_string(outcomes.size()));
  }
  Distortion d;
  for (int k = 0; k < spec.hops(); ++k) {
    const int m = outcomes[static_cast<std::size_t>(k)];
    if (m == 0 || m == spec.n_photons() + 1) {
      throw std::domain_error("outcome m = " + std::to_string(m) + " at hop " + std::to_string(k + 1) +
                              " destroys the qubit");
    }
    if (m < 0 || m > spec.n_photons() + 1) throw std::out_of_range("outcome m out of range");
    d = d.then(hop_distortion(spec.hop(k), m));
  }
  const QubitState raw{qubit.alpha * d.h, qubit.beta * d.v};
  const double p = raw.norm_squared();
  if (p == 0.0) throw std::domain_error("outcome sequence has zero probability");
  return ChainState{raw.normalized(), p, d};
}

bool self_corrects(const ChainSpec& spec, std::span<const int> outcomes, double tolerance) {
  Distortion d;
  for (int k = 0; k < spec.hops(); ++k) d = d.then(hop_distortion(spec.hop(k), outcomes[static_cast<std::size_t>(k)]));
  return std::abs(d.h - d.v) <= tolerance * std::max(1.0, std::abs(d.h));
}

double deferred_joint_success(const ChainSpec& spec, std::span<const int> outcomes) {
  if (static_cast<int>(outcomes.size()) != spec.hops()) throw std::invalid_argument("outcome count mismatch");
  double ph = 1.0;
  double pv = 1.0;
  for (int k = 0; k < spec.hops(); ++k) {
    const int m = outcomes[static_cast<std::size_t>(k)];
    if (m < 1 || m > spec.n_photons()) return 0.0;
    ph *= spec.hop(k).weight(m);
    pv *= spec.hop(k).weight(m - 1);
  }
  return std::min(ph, pv);
}

double deferred_success_prob(const ChainSpec& spec, std::uint64_t budget) {
  check_budget(spec, budget);
  CompensatedSum total;
  walk_lattice(spec, [&](double term) { total.add(term); });
  return total.value();
}

double deferred_success_prob_grouped(const ResourceCoeffs& coeffs, int hops) {
  require_valid(coeffs);
  if (hops < 1) throw std::invalid_argument("hops must be >= 1");
  const int n = coeffs.n_photons();
  const auto w = coeffs.weights();

  // log(k!) for the multinomial coefficient.
  std::vector<double> log_fact(static_cast<std::size_t>(hops) + 1, 0.0);
  for (int k = 1; k <= hops; ++k) log_fact[static_cast<std::size_t>(k)] = log_fact[static_cast<std::size_t>(k) - 1] + std::log(k);

  // counts[j] = how many hops report m = j + 1; enumerate compositions of `hops`.
  std::vector<int> counts(static_cast<std::size_t>(n), 0);
  CompensatedSum total;
  auto recurse = [&](auto&& self, int slot, int remaining) -> void {
    if (slot == n - 1) {
      counts[static_cast<std::size_t>(slot)] = remaining;
      double log_mult = log_fact[static_cast<std::size_t>(hops)];
      double ph = 1.0;
      double pv = 1.0;
      for (int j = 0; j < n; ++j) {
        const int c = counts[static_cast<std::size_t>(j)];
        log_mult -= log_fact[static_cast<std::size_t>(c)];
        ph *= std::pow(w[static_cast<std::size_t>(j) + 1], c);
        pv *= std::pow(w[static_cast<std::size_t>(j)], c);
      }
      total.add(std::round(std::exp(log_mult)) * std::min(ph, pv));
      return;
    }
    for (int c = 0; c <= remaining; ++c) {
      counts[static_cast<std::size_t>(slot)] = c;
      self(self, slot + 1, remaining - c);
    }
  };
  recurse(recurse, 0, hops);
  return total.value();
}

double per_hop_success_prob(const ChainSpec& spec) {
  double p = 1.0;
  for (const auto& c : spec.coeffs_per_hop()) p *= single_success_prob(c);
  return p;
}

std::vector<int> OutcomeTable::outcomes_at(std::size_t index) const {
  std::vector<int> out(static_cast<std::size_t>(hops));
  for (int k = hops - 1; k >= 0; --k) {
    out[static_cast<std::size_t>(k)] = static_cast<int>(index % static_cast<std::size_t>(n_photons)) + 1;
    index /= static_cast<std::size_t>(n_photons);
  }
  return out;
}

OutcomeTable outcome_table(const ChainSpec& spec, std::uint64_t budget) {
  check_budget(spec, budget);
  OutcomeTable table;
  table.n_photons = spec.n_photons();
  table.hops = spec.hops();
  table.joint_success.reserve(static_cast<std::size_t>(lattice_size(spec.n_photons(), spec.hops())));
  walk_lattice(spec, [&](double term) { table.joint_success.push_back(term); });
  return table;
}

ChainReport analyze_chain(const ChainSpec& spec, bool with_table, std::uint64_t budget) {
  ChainReport report;
  report.p_deferred = deferred_success_prob(spec, budget);
  report.p_per_hop = per_hop_success_prob(spec);
  report.self_correction_gain = report.p_deferred - report.p_per_hop;
  if (with_table) report.outcome_table = outcome_table(spec, budget);
  return report;
}

}  // namespace klmchain
