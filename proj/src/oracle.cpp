#include "klmchain/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace klmchain {

namespace {

SparseState apply_creations(SparseState state, std::span<const std::pair<std::size_t, Polarization>> ops) {
  for (const auto& [mode, pol] : ops) state = create_photon(state, mode, pol);
  return state;
}

// Receiver register ket |H>^h_count |V>^(N - h_count).
FockVector receiver_ket(int n, int h_count) {
  FockVector ket(static_cast<std::size_t>(n));
  for (int p = 0; p < n; ++p) {
    if (p < h_count) {
      ket[static_cast<std::size_t>(p)].h_count = 1;
    } else {
      ket[static_cast<std::size_t>(p)].v_count = 1;
    }
  }
  return ket;
}

[[noreturn]] void nonconforming(int m, const std::string& what) {
  throw std::logic_error("circuit residual for m = " + std::to_string(m) + " is nonconforming: " + what);
}

}  // namespace

SparseState prepare_input_state(const QubitState& qubit, const ResourceCoeffs& coeffs) {
  const int n = coeffs.n_photons();
  const auto modes = static_cast<std::size_t>(2 * n + 1);
  SparseState state(modes);
  for (int i = 0; i <= n; ++i) {
    std::vector<std::pair<std::size_t, Polarization>> resource;
    for (int k = 1; k <= n; ++k) {
      const auto sender = static_cast<std::size_t>(k);
      const auto receiver = static_cast<std::size_t>(n + k);
      if (k <= i) {
        resource.emplace_back(sender, Polarization::V);
        resource.emplace_back(receiver, Polarization::H);
      } else {
        resource.emplace_back(sender, Polarization::H);
        resource.emplace_back(receiver, Polarization::V);
      }
    }
    const SparseState base = apply_creations(SparseState::vacuum(modes), resource);
    const Complex c = coeffs.at(i);
    state.add(create_photon(base, 0, Polarization::H), qubit.alpha * c);
    state.add(create_photon(base, 0, Polarization::V), qubit.beta * c);
  }
  return state;
}

std::vector<double> CircuitRun::probability_by_m() const {
  std::vector<double> p(static_cast<std::size_t>(n_photons) + 2, 0.0);
  for (const auto& o : outcomes) p[static_cast<std::size_t>(o.m)] += o.probability;
  return p;
}

CircuitRun run_circuit(const QubitState& qubit, const ResourceCoeffs& coeffs, int max_photons) {
  require_valid(coeffs);
  require_normalized(qubit);
  const int n = coeffs.n_photons();
  if (n > max_photons) {
    throw std::out_of_range("N = " + std::to_string(n) + " exceeds the simulator limit of " +
                            std::to_string(max_photons));
  }
  const auto order = static_cast<std::size_t>(n) + 1;

  const SparseState transformed = apply_fourier(prepare_input_state(qubit, coeffs), FourierSpec::contiguous(0, order));
  std::vector<std::size_t> measured(order);
  std::iota(measured.begin(), measured.end(), std::size_t{0});

  CircuitRun run{n, qubit, coeffs, {}};
  const double two_pi = 2.0 * std::numbers::pi;
  for (auto& outcome : measure_counting(transformed, measured)) {
    CircuitOutcome rec;
    rec.pattern = outcome.counts;
    rec.probability = outcome.probability;
    unsigned weighted = 0;
    for (std::size_t j = 0; j < order; ++j) {
      rec.m += outcome.counts[j].v_count;
      weighted += static_cast<unsigned>(j) * outcome.counts[j].total();
    }
    rec.phase_exponent = static_cast<int>(weighted % order);
    const SparseState& residual = outcome.residual;

    if (rec.m == 0 || rec.m == n + 1) {
      // Only one resource term can produce these counts; the receiver holds no qubit.
      const FockVector expected = receiver_ket(n, rec.m == 0 ? 0 : n);
      if (residual.size() != 1 || residual.terms().begin()->first != expected) {
        nonconforming(rec.m, "expected a single product ket");
      }
      run.outcomes.push_back(std::move(rec));
      continue;
    }

    const int m = rec.m;
    const FockVector ket_h = receiver_ket(n, m);
    FockVector ket_v = ket_h;
    ket_v[static_cast<std::size_t>(m - 1)] = ModeOccupation{1, 0};
    for (const auto& [ket, amp] : residual.terms()) {
      if (ket != ket_h && ket != ket_v) nonconforming(m, "support outside the two qubit branches");
    }
    rec.raw_h = residual.amplitude(ket_h);
    rec.raw_v = residual.amplitude(ket_v);
    rec.located_mode = static_cast<std::size_t>(n + m);

    const Complex correction = std::polar(1.0, two_pi * rec.phase_exponent / static_cast<double>(order));
    rec.conditional_qubit = QubitState{rec.raw_h, rec.raw_v * correction}.normalized();

    const Complex ideal_h = qubit.alpha * coeffs.at(m);
    const Complex ideal_v = qubit.beta * coeffs.at(m - 1);
    constexpr double kTiny = 1e-12;
    if (std::abs(rec.raw_h) > kTiny && std::abs(rec.raw_v) > kTiny && std::abs(ideal_h) > kTiny &&
        std::abs(ideal_v) > kTiny) {
      const Complex ratio = (rec.raw_v * ideal_h) / (rec.raw_h * ideal_v);
      const double steps = -std::arg(ratio) * static_cast<double>(order) / two_pi;
      const auto e = static_cast<long>(std::lround(steps));
      rec.measured_phase_exponent = static_cast<int>(((e % static_cast<long>(order)) + static_cast<long>(order)) %
                                                     static_cast<long>(order));
    }
    run.outcomes.push_back(std::move(rec));
  }
  return run;
}

CertificationReport certify(const ResourceCoeffs& coeffs, std::span<const QubitState> qubits, double tolerance,
                            const std::optional<ResourceCoeffs>& analytic_coeffs, int max_photons) {
  const ResourceCoeffs& analytic = analytic_coeffs ? *analytic_coeffs : coeffs;
  if (analytic.n_photons() != coeffs.n_photons()) throw std::invalid_argument("analytic photon number mismatch");

  CertificationReport report;
  report.tolerance = tolerance;
  for (const auto& qubit : qubits) {
    const CircuitRun run = run_circuit(qubit, coeffs, max_photons);
    const auto expected = outcome_distribution(qubit, analytic);
    const auto simulated = run.probability_by_m();

    CaseCertification c;
    c.qubit = qubit;
    for (std::size_t m = 0; m < simulated.size(); ++m) {
      const double dev = std::abs(simulated[m] - expected[m].probability);
      if (c.worst_m < 0 || dev > c.max_probability_deviation) {
        c.max_probability_deviation = dev;
        c.worst_m = static_cast<int>(m);
      }
    }
    for (const auto& o : run.outcomes) {
      if (o.conditional_qubit) {
        const auto& ideal = expected[static_cast<std::size_t>(o.m)].post_state;
        c.min_fidelity = std::min(c.min_fidelity, ideal ? fidelity(*ideal, *o.conditional_qubit) : 0.0);
      }
      if (o.measured_phase_exponent && *o.measured_phase_exponent != o.phase_exponent) ++c.phase_mismatches;
    }
    c.pass = c.max_probability_deviation <= tolerance && c.min_fidelity >= 1.0 - tolerance && c.phase_mismatches == 0;

    if (c.max_probability_deviation > report.max_probability_deviation || report.worst_m < 0) {
      report.max_probability_deviation = c.max_probability_deviation;
      report.worst_m = c.worst_m;
    }
    report.min_fidelity = std::min(report.min_fidelity, c.min_fidelity);
    report.phase_mismatches += c.phase_mismatches;
    report.pass = report.pass && c.pass;
    report.cases.push_back(std::move(c));
  }
  return report;
}

}  // namespace klmchain
