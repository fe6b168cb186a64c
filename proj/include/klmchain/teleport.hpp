#pragma once

// Closed-form single-hop teleportation: outcome distribution over the detected
// vertical-photon count m, the distorted post-measurement qubit, and the
// probabilistic Kraus correction that undoes the distortion.

#include <optional>
#include <vector>

#include "klmchain/resource.hpp"

namespace klmchain {

/// alpha|H> + beta|V>.
struct QubitState {
  Complex alpha{1.0, 0.0};
  Complex beta{0.0, 0.0};

  double norm_squared() const { return std::norm(alpha) + std::norm(beta); }
  bool is_normalized(double tolerance = 1e-12) const { return std::abs(norm_squared() - 1.0) <= tolerance; }
  /// Throws std::domain_error on the zero vector.
  QubitState normalized() const;

  static QubitState horizontal() { return {1.0, 0.0}; }
  static QubitState vertical() { return {0.0, 1.0}; }
};

/// |<a|b>|^2 for normalized inputs (insensitive to global phase).
double fidelity(const QubitState& a, const QubitState& b);

/// Throws std::invalid_argument if the qubit is not normalized within 1e-12.
void require_normalized(const QubitState& qubit);

struct OutcomeRecord {
  int m = 0;
  double probability = 0.0;
  bool destroyed = false;
  std::optional<QubitState> post_state;  // only for an explicit input qubit with 1 <= m <= N
  std::optional<int> phase_exponent;     // filled in by the circuit simulator only
};

/// p(m) = |alpha c_m|^2 + |beta c_{m-1}|^2 for m = 0..N+1, with the post-phase-
/// correction conditional state (alpha c_m, beta c_{m-1}) / sqrt(p(m)).
std::vector<OutcomeRecord> outcome_distribution(const QubitState& qubit, const ResourceCoeffs& coeffs);

/// Input-averaged distribution: |alpha|^2 and |beta|^2 replaced by 1/2.
std::vector<OutcomeRecord> haar_outcome_distribution(const ResourceCoeffs& coeffs);

/// Input-averaged probability of detecting m = 0 or m = N+1.
double haar_failure_prob(const ResourceCoeffs& coeffs);

/// Accumulated distortion: the qubit is carried as (alpha * h, beta * v), up to
/// normalization. A single hop with outcome m has h = c_m, v = c_{m-1}.
struct Distortion {
  Complex h{1.0, 0.0};
  Complex v{1.0, 0.0};

  Distortion then(const Distortion& next) const { return {h * next.h, v * next.v}; }
  QubitState apply(const QubitState& qubit) const;
};

Distortion hop_distortion(const ResourceCoeffs& coeffs, int m);

/// Diagonal operator d_h|H><H| + d_v|V><V|.
struct DiagonalOp {
  Complex h;
  Complex v;

  QubitState apply(const QubitState& q) const { return {h * q.alpha, v * q.beta}; }
};

/// Two-outcome generalized measurement {E_S, E_F} undoing a distortion. E_S
/// rescales the larger-modulus branch by the ratio of the smaller to the larger
/// factor; E_F completes the pair so that E_S^dag E_S + E_F^dag E_F = I.
struct KrausPair {
  DiagonalOp success;
  DiagonalOp failure;
};

/// Throws std::domain_error when both factors vanish.
KrausPair correction_operators(const Distortion& distortion);

struct CorrectionOutcome {
  double success_prob = 0.0;
  std::optional<QubitState> corrected_state;  // absent when success is impossible
};

/// Applies the correcting Kraus pair to a normalized distorted state. On success the
/// common global phase is removed, so the result equals the undistorted qubit.
CorrectionOutcome correct_distortion(const QubitState& distorted, const Distortion& distortion);

/// Single-hop correction for outcome m (1 <= m <= N).
/// p(S|m) = min(|c_{m-1}|^2, |c_m|^2) / p(m).
CorrectionOutcome kraus_correct(const QubitState& post, const ResourceCoeffs& coeffs, int m);

/// Sum_{m=1}^{N} min(|c_{m-1}|^2, |c_m|^2). Independent of the input qubit.
double single_success_prob(const ResourceCoeffs& coeffs);

}  // namespace klmchain
