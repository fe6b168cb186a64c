#include "klmchain/teleport.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace klmchain {
namespace {

QubitState random_qubit(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double a2 = u(rng);
  return {std::polar(std::sqrt(a2), 2 * std::numbers::pi * u(rng)),
          std::polar(std::sqrt(1 - a2), 2 * std::numbers::pi * u(rng))};
}

ResourceCoeffs random_coeffs(std::mt19937_64& rng, int n) {
  std::gamma_distribution<double> g(1.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2 * std::numbers::pi);
  std::vector<double> w(static_cast<std::size_t>(n) + 1);
  double total = 0;
  for (auto& x : w) total += (x = g(rng));
  std::vector<Complex> c(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) c[i] = std::polar(std::sqrt(w[i] / total), phase(rng));
  return ResourceCoeffs(c);
}

TEST(OutcomeDistribution, UniformResource) {
  const QubitState q{0.6, Complex(0.0, 0.8)};
  const auto records = outcome_distribution(q, maximally_entangled(6));
  ASSERT_EQ(records.size(), 8u);
  EXPECT_NEAR(records[0].probability, 0.36 / 7, 1e-15);
  EXPECT_NEAR(records[7].probability, 0.64 / 7, 1e-15);
  for (int m = 1; m <= 6; ++m) {
    EXPECT_NEAR(records[static_cast<std::size_t>(m)].probability, 1.0 / 7, 1e-15);
    ASSERT_TRUE(records[static_cast<std::size_t>(m)].post_state);
    EXPECT_NEAR(fidelity(*records[static_cast<std::size_t>(m)].post_state, q), 1.0, 1e-15);
  }
  EXPECT_TRUE(records[0].destroyed);
  EXPECT_TRUE(records[7].destroyed);
  EXPECT_FALSE(records[0].post_state);
}

TEST(OutcomeDistribution, ConditionalStateFormula) {
  const auto tent = tent_family({0.0366});
  const QubitState q{1 / std::sqrt(2.0), 1 / std::sqrt(2.0)};
  const auto records = outcome_distribution(q, tent);
  // m = 1: (alpha c_1, beta c_0) / sqrt(p(1)); p(1) = (0.1324 + 0.0958) / 2.
  EXPECT_NEAR(records[1].probability, 0.1141, 1e-15);
  EXPECT_NEAR(records[1].post_state->alpha.real(), std::sqrt(0.1324 / 2 / 0.1141), 1e-14);
  EXPECT_NEAR(records[1].post_state->beta.real(), std::sqrt(0.0958 / 2 / 0.1141), 1e-14);
}

TEST(OutcomeDistribution, HaarAveragedFailureByQuadrature) {
  // Under the Haar measure |alpha|^2 is uniform on [0, 1]; p(0) + p(N+1) is linear in it,
  // so a midpoint rule is exact.
  const auto tent = tent_family({0.0366});
  const int points = 1000;
  double avg = 0.0;
  for (int i = 0; i < points; ++i) {
    const double a2 = (i + 0.5) / points;
    const auto r = outcome_distribution({std::sqrt(a2), std::sqrt(1 - a2)}, tent);
    avg += (r.front().probability + r.back().probability) / points;
  }
  EXPECT_NEAR(avg, haar_failure_prob(tent), 1e-12);
  EXPECT_NEAR(haar_failure_prob(tent), 0.0958, 1e-15);
  const auto haar = haar_outcome_distribution(tent);
  EXPECT_NEAR(haar.front().probability + haar.back().probability, 0.0958, 1e-15);
}

TEST(OutcomeDistribution, RejectsUnnormalizedInputs) {
  EXPECT_THROW(outcome_distribution({1.0, 1.0}, maximally_entangled(2)), std::invalid_argument);
  EXPECT_THROW(outcome_distribution({1.0, 0.0}, ResourceCoeffs({1.0, 1.0})), std::invalid_argument);
}

TEST(KrausCorrect, UniformNeedsNoCorrection) {
  const QubitState q{0.6, 0.8};
  const auto coeffs = maximally_entangled(4);
  const auto records = outcome_distribution(q, coeffs);
  for (int m = 1; m <= 4; ++m) {
    const auto ops = correction_operators(hop_distortion(coeffs, m));
    EXPECT_NEAR(std::abs(ops.success.h - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(ops.success.v - 1.0), 0.0, 1e-15);
    const auto out = kraus_correct(*records[static_cast<std::size_t>(m)].post_state, coeffs, m);
    EXPECT_NEAR(out.success_prob, 1.0, 1e-15);
  }
}

TEST(KrausCorrect, VanishingEdgeCoefficient) {
  const auto tent = tent_family({TentParams::kMaxX});
  const auto records = outcome_distribution({0.6, 0.8}, tent);
  const auto out = kraus_correct(*records[1].post_state, tent, 1);
  EXPECT_EQ(out.success_prob, 0.0);
  EXPECT_FALSE(out.corrected_state);
}

TEST(KrausCorrect, JointProbabilityAtReportedOptimum) {
  const auto tent = tent_family({0.0366});
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t) {
    const auto q = random_qubit(rng);
    const auto rec = outcome_distribution(q, tent)[1];
    const auto out = kraus_correct(*rec.post_state, tent, 1);
    EXPECT_NEAR(out.success_prob * rec.probability, 0.0958, 1e-14);
  }
}

TEST(KrausCorrect, MirroredBranch) {
  // |c_0| > |c_1|: the ratio lands on |V><V|.
  const auto coeffs = from_weights({0.5, 0.2, 0.3});
  const auto ops = correction_operators(hop_distortion(coeffs, 1));
  EXPECT_NEAR(std::abs(ops.success.h - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(ops.success.v - std::sqrt(0.2 / 0.5)), 0.0, 1e-15);
  EXPECT_EQ(ops.failure.h, Complex{});
}

TEST(KrausCorrect, Errors) {
  const auto coeffs = maximally_entangled(3);
  EXPECT_THROW(kraus_correct({1.0, 0.0}, coeffs, 0), std::out_of_range);
  EXPECT_THROW(kraus_correct({1.0, 0.0}, coeffs, 4), std::out_of_range);
  EXPECT_THROW(correction_operators({0.0, 0.0}), std::domain_error);
}

TEST(SingleSuccessProb, KnownValues) {
  EXPECT_NEAR(single_success_prob(maximally_entangled(6)), 6.0 / 7.0, 1e-15);
  EXPECT_NEAR(single_success_prob(tent_family({0.0})), 6.0 / 7.0, 1e-15);
  // 2 (|c0|^2 + |c1|^2 + |c2|^2) = 2 (0.0958 + 0.1324 + 0.1690).
  EXPECT_NEAR(single_success_prob(tent_family({0.0366})), 0.7944, 1e-14);
}

TEST(Properties, OutcomeProbabilitiesSumToOne) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 1000; ++t) {
    const auto coeffs = random_coeffs(rng, 1 + t % 8);
    double total = 0.0;
    for (const auto& r : outcome_distribution(random_qubit(rng), coeffs)) total += r.probability;
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(Properties, CorrectionRestoresInputExactly) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 1000; ++t) {
    const int n = 1 + t % 7;
    const auto coeffs = random_coeffs(rng, n);
    const auto q = random_qubit(rng);
    const int m = 1 + t % n;
    const auto records = outcome_distribution(q, coeffs);
    const auto& rec = records[static_cast<std::size_t>(m)];
    const auto out = kraus_correct(*rec.post_state, coeffs, m);
    ASSERT_TRUE(out.corrected_state);
    EXPECT_NEAR(fidelity(*out.corrected_state, q), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(out.corrected_state->alpha - q.alpha), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(out.corrected_state->beta - q.beta), 0.0, 1e-12);
    // p(S|m) p(m) = min(|c_{m-1}|^2, |c_m|^2).
    EXPECT_NEAR(out.success_prob * rec.probability, std::min(coeffs.weight(m - 1), coeffs.weight(m)), 1e-14);
  }
}

TEST(Properties, KrausPairIsComplete) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  for (int t = 0; t < 1000; ++t) {
    const auto ops = correction_operators({Complex(g(rng), g(rng)), Complex(g(rng), g(rng))});
    EXPECT_NEAR(std::norm(ops.success.h) + std::norm(ops.failure.h), 1.0, 1e-12);
    EXPECT_NEAR(std::norm(ops.success.v) + std::norm(ops.failure.v), 1.0, 1e-12);
  }
}

TEST(Properties, UniformIsSingleHopOptimal) {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 1000; ++t) {
    const int n = 1 + t % 10;
    EXPECT_LE(single_success_prob(random_coeffs(rng, n)), n / (n + 1.0) + 1e-12);
  }
  for (int n = 1; n <= 12; ++n) EXPECT_NEAR(single_success_prob(maximally_entangled(n)), n / (n + 1.0), 1e-12);
}

}  // namespace
}  // namespace klmchain
