#include "klmchain/teleport.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace klmchain {

QubitState QubitState::normalized() const {
  const double n2 = norm_squared();
  if (n2 == 0.0) throw std::domain_error("cannot normalize the zero qubit");
  const double s = 1.0 / std::sqrt(n2);
  return {alpha * s, beta * s};
}

double fidelity(const QubitState& a, const QubitState& b) {
  return std::norm(std::conj(a.alpha) * b.alpha + std::conj(a.beta) * b.beta);
}

void require_normalized(const QubitState& qubit) {
  if (!qubit.is_normalized()) {
    throw std::invalid_argument("qubit is not normalized: |alpha|^2 + |beta|^2 = " +
                                std::to_string(qubit.norm_squared()));
  }
}

std::vector<OutcomeRecord> outcome_distribution(const QubitState& qubit, const ResourceCoeffs& coeffs) {
  require_normalized(qubit);
  require_valid(coeffs);
  const int n = coeffs.n_photons();
  std::vector<OutcomeRecord> records;
  records.reserve(static_cast<std::size_t>(n) + 2);
  for (int m = 0; m <= n + 1; ++m) {
    OutcomeRecord rec;
    rec.m = m;
    const Complex h = qubit.alpha * coeffs.at(m);
    const Complex v = qubit.beta * coeffs.at(m - 1);
    rec.probability = std::norm(h) + std::norm(v);
    rec.destroyed = (m == 0 || m == n + 1);
    if (!rec.destroyed && rec.probability > 0.0) {
      const double s = 1.0 / std::sqrt(rec.probability);
      rec.post_state = QubitState{h * s, v * s};
    }
    records.push_back(rec);
  }
  return records;
}

std::vector<OutcomeRecord> haar_outcome_distribution(const ResourceCoeffs& coeffs) {
  require_valid(coeffs);
  const int n = coeffs.n_photons();
  std::vector<OutcomeRecord> records;
  for (int m = 0; m <= n + 1; ++m) {
    OutcomeRecord rec;
    rec.m = m;
    rec.probability = 0.5 * (coeffs.weight(m) + coeffs.weight(m - 1));
    rec.destroyed = (m == 0 || m == n + 1);
    records.push_back(rec);
  }
  return records;
}

double haar_failure_prob(const ResourceCoeffs& coeffs) {
  require_valid(coeffs);
  return 0.5 * (coeffs.weight(0) + coeffs.weight(coeffs.n_photons()));
}

QubitState Distortion::apply(const QubitState& qubit) const {
  return QubitState{qubit.alpha * h, qubit.beta * v}.normalized();
}

Distortion hop_distortion(const ResourceCoeffs& coeffs, int m) {
  return {coeffs.at(m), coeffs.at(m - 1)};
}

KrausPair correction_operators(const Distortion& d) {
  const double abs_h = std::abs(d.h);
  const double abs_v = std::abs(d.v);
  if (abs_h == 0.0 && abs_v == 0.0) throw std::domain_error("distortion annihilates both branches");
  KrausPair pair;
  if (abs_v <= abs_h) {
    const Complex ratio = d.v / d.h;
    pair.success = {ratio, 1.0};
    pair.failure = {std::sqrt(std::max(0.0, 1.0 - std::norm(ratio))), 0.0};
  } else {
    const Complex ratio = d.h / d.v;
    pair.success = {1.0, ratio};
    pair.failure = {0.0, std::sqrt(std::max(0.0, 1.0 - std::norm(ratio)))};
  }
  return pair;
}

CorrectionOutcome correct_distortion(const QubitState& distorted, const Distortion& distortion) {
  const auto pair = correction_operators(distortion);
  CorrectionOutcome out;
  if (std::min(std::abs(distortion.h), std::abs(distortion.v)) == 0.0) return out;

  const QubitState kept = pair.success.apply(distorted);
  out.success_prob = kept.norm_squared();
  if (out.success_prob == 0.0) return out;
  // E_S maps (alpha h, beta v) to f * (alpha, beta) with f the smaller factor.
  const Complex common = std::abs(distortion.v) <= std::abs(distortion.h) ? distortion.v : distortion.h;
  const Complex unphase = std::conj(common) / std::abs(common);
  const double s = 1.0 / std::sqrt(out.success_prob);
  out.corrected_state = QubitState{kept.alpha * unphase * s, kept.beta * unphase * s};
  return out;
}

CorrectionOutcome kraus_correct(const QubitState& post, const ResourceCoeffs& coeffs, int m) {
  require_valid(coeffs);
  const int n = coeffs.n_photons();
  if (m < 1 || m > n) {
    throw std::out_of_range("outcome m = " + std::to_string(m) + " is not correctable (need 1 <= m <= " +
                            std::to_string(n) + ")");
  }
  require_normalized(post);
  return correct_distortion(post, hop_distortion(coeffs, m));
}

double single_success_prob(const ResourceCoeffs& coeffs) {
  require_valid(coeffs);
  double total = 0.0;
  for (int m = 1; m <= coeffs.n_photons(); ++m) total += std::min(coeffs.weight(m - 1), coeffs.weight(m));
  return total;
}

}  // namespace klmchain
