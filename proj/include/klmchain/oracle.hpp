#pragma once

// Full Fock-space simulation of one teleportation hop, used as ground truth for
// the closed-form engine.
//
// Mode layout for an N-photon resource (2N+1 modes):
//   mode 0          input qubit (one photon, H or V)
//   modes 1..N      sender half of the resource
//   modes N+1..2N   receiver half of the resource
// Term i of the resource carries V on modes 1..i, H on modes i+1..N, H on modes
// N+1..N+i and V on modes N+i+1..2N. The Fourier transform acts on modes 0..N and
// those modes are then photon-counted. For 1 <= m <= N the qubit sits in mode N+m.

#include <optional>
#include <span>
#include <vector>

#include "klmchain/fock.hpp"
#include "klmchain/resource.hpp"
#include "klmchain/teleport.hpp"

namespace klmchain {

inline constexpr int kDefaultMaxSimPhotons = 6;

SparseState prepare_input_state(const QubitState& qubit, const ResourceCoeffs& coeffs);

struct CircuitOutcome {
  std::vector<ModeOccupation> pattern;  // counts on modes 0..N
  int m = 0;                            // total V count
  double probability = 0.0;
  /// sum_j j (v_j + h_j) mod (N+1), computed from the pattern.
  int phase_exponent = 0;
  /// Exponent e with ratio of raw receiver amplitudes = w^-e times the ideal ratio;
  /// absent when either branch amplitude vanishes.
  std::optional<int> measured_phase_exponent;
  /// Receiver amplitudes of the |H> and |V> branches before phase correction.
  Complex raw_h;
  Complex raw_v;
  /// Phase-corrected, normalized qubit for 1 <= m <= N.
  std::optional<QubitState> conditional_qubit;
  std::optional<std::size_t> located_mode;
};

struct CircuitRun {
  int n_photons = 0;
  QubitState qubit;
  ResourceCoeffs coeffs;
  std::vector<CircuitOutcome> outcomes;

  /// Outcome probabilities aggregated by m = 0..N+1.
  std::vector<double> probability_by_m() const;
};

/// Throws std::out_of_range when N exceeds `max_photons` and std::logic_error when
/// a residual state does not have the expected two-branch structure.
CircuitRun run_circuit(const QubitState& qubit, const ResourceCoeffs& coeffs,
                       int max_photons = kDefaultMaxSimPhotons);

struct CaseCertification {
  QubitState qubit;
  double max_probability_deviation = 0.0;
  int worst_m = -1;
  double min_fidelity = 1.0;
  std::size_t phase_mismatches = 0;
  bool pass = false;
};

struct CertificationReport {
  bool pass = true;
  double tolerance = 0.0;
  double max_probability_deviation = 0.0;
  int worst_m = -1;
  double min_fidelity = 1.0;
  std::size_t phase_mismatches = 0;
  std::vector<CaseCertification> cases;
};

/// Simulates the circuit with `coeffs` and compares it with the closed-form engine
/// evaluated on `analytic_coeffs` (defaults to `coeffs`; pass a perturbed copy for
/// fault injection). A case passes when every p(m) deviation is <= tolerance, every
/// conditional-state fidelity is >= 1 - tolerance, and every measurable phase
/// exponent matches exactly.
CertificationReport certify(const ResourceCoeffs& coeffs, std::span<const QubitState> qubits, double tolerance,
                            const std::optional<ResourceCoeffs>& analytic_coeffs = std::nullopt,
                            int max_photons = kDefaultMaxSimPhotons);

}  // namespace klmchain
