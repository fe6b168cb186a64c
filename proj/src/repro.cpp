#include "klmchain/repro.hpp"

#include <cmath>

#include "klmchain/chain.hpp"
#include "klmchain/optimize.hpp"
#include "klmchain/resource.hpp"
#include "klmchain/teleport.hpp"

namespace klmchain {

namespace {

ReproRow row(int group, std::string name, double expected, double actual, double tolerance) {
  return {group, std::move(name), expected, actual, tolerance, std::abs(actual - expected) <= tolerance};
}

}  // namespace

std::vector<ReproRow> run_repro() {
  std::vector<ReproRow> rows;

  for (int n = 1; n <= 12; ++n) {
    rows.push_back(row(1, "single-hop maximal N=" + std::to_string(n), n / (n + 1.0),
                       single_success_prob(maximally_entangled(n)), 1e-12));
  }

  constexpr int kHops = 6;
  constexpr double kOptimumX = 0.0366;
  const auto uniform = ChainSpec::identical(tent_family({0.0}), kHops);
  const auto tent = ChainSpec::identical(tent_family({kOptimumX}), kHops);
  const double p_uniform = deferred_success_prob(uniform);
  const double p_tent = deferred_success_prob(tent);
  const double p_tent_per_hop = per_hop_success_prob(tent);

  rows.push_back(row(2, "deferred x=0 M=6", 0.3965, p_uniform, 1e-4));
  rows.push_back(row(2, "deferred x=0 M=6 vs (6/7)^6", std::pow(6.0 / 7.0, 6), p_uniform, 1e-12));
  rows.push_back(row(2, "deferred x=0.0366 M=6", 0.4152, p_tent, 1e-4));
  rows.push_back(row(2, "per-hop x=0.0366 M=6", 0.2511, p_tent_per_hop, 1e-4));
  rows.push_back(row(2, "gain vs maximal", 0.0187, p_tent - p_uniform, 1e-4));
  rows.push_back(row(2, "gain vs per-hop", 0.1641, p_tent - p_tent_per_hop, 1e-4));
  rows.push_back(row(2, "relative gain vs maximal", 0.0471, (p_tent - p_uniform) / p_uniform, 1e-3));
  rows.push_back(row(2, "relative gain vs per-hop", 0.6535, (p_tent - p_tent_per_hop) / p_tent_per_hop, 1e-3));

  const auto six_hop = sweep_x(kHops, 0.0, 0.09, 91);
  rows.push_back(row(3, "sweep M=6 argmax x", kOptimumX, six_hop.argmax_x, 5e-4));
  rows.push_back(row(3, "sweep M=6 max p", 0.4152, six_hop.max_p, 1e-4));
  const auto one_hop = sweep_x(1, -0.05, 0.09, 91);
  rows.push_back(row(3, "sweep M=1 argmax x", 0.0, one_hop.argmax_x, 1e-4));

  return rows;
}

}  // namespace klmchain
