#include "klmchain/fock.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>

namespace klmchain {

unsigned FockVector::total_photons() const {
  unsigned total = 0;
  for (const auto& occ : modes_) total += occ.total();
  return total;
}

std::size_t FockVectorHash::operator()(const FockVector& fv) const noexcept {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (const auto& occ : fv.modes()) {
    const std::size_t word = (std::size_t{occ.v_count} << 16) | occ.h_count;
    h ^= word + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

SparseState::SparseState(std::size_t num_modes, double prune_threshold)
    : num_modes_(num_modes), prune_threshold_(prune_threshold) {
  if (prune_threshold < 0.0) throw std::invalid_argument("prune threshold must be non-negative");
}

SparseState SparseState::vacuum(std::size_t num_modes) {
  SparseState s(num_modes);
  s.add(FockVector(num_modes), 1.0);
  return s;
}

SparseState SparseState::basis(FockVector ket, Complex amplitude) {
  SparseState s(ket.size());
  s.add(std::move(ket), amplitude);
  return s;
}

void SparseState::add(const FockVector& ket, Complex amplitude) {
  add(FockVector(ket), amplitude);
}

void SparseState::add(FockVector&& ket, Complex amplitude) {
  if (ket.size() != num_modes_) throw std::invalid_argument("ket mode count does not match state");
  auto [it, inserted] = terms_.try_emplace(std::move(ket), amplitude);
  if (!inserted) it->second += amplitude;
  if (std::abs(it->second) <= prune_threshold_) terms_.erase(it);
}

void SparseState::add(const SparseState& other, Complex scale) {
  for (const auto& [ket, amp] : other.terms_) add(ket, amp * scale);
}

Complex SparseState::amplitude(const FockVector& ket) const {
  auto it = terms_.find(ket);
  return it == terms_.end() ? Complex{} : it->second;
}

double SparseState::norm_squared() const {
  double total = 0.0;
  for (const auto& [ket, amp] : sorted_terms()) total += std::norm(amp);
  return total;
}

void SparseState::normalize() {
  const double n2 = norm_squared();
  if (n2 == 0.0) throw std::domain_error("cannot normalize a zero state");
  scale(1.0 / std::sqrt(n2));
}

void SparseState::scale(Complex factor) {
  for (auto& [ket, amp] : terms_) amp *= factor;
}

void SparseState::prune(double threshold) {
  std::erase_if(terms_, [threshold](const auto& term) { return std::abs(term.second) <= threshold; });
}

std::vector<std::pair<FockVector, Complex>> SparseState::sorted_terms() const {
  std::vector<std::pair<FockVector, Complex>> out(terms_.begin(), terms_.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

SparseState create_photon(const SparseState& state, std::size_t mode, Polarization pol) {
  if (mode >= state.num_modes()) {
    throw std::out_of_range("mode " + std::to_string(mode) + " out of range for " +
                            std::to_string(state.num_modes()) + "-mode state");
  }
  SparseState out(state.num_modes(), state.prune_threshold());
  for (const auto& [ket, amp] : state.terms()) {
    FockVector raised = ket;
    auto& n = raised[mode].count(pol);
    const double factor = std::sqrt(static_cast<double>(n) + 1.0);
    ++n;
    out.add(std::move(raised), amp * factor);
  }
  return out;
}

FourierSpec::FourierSpec(std::size_t order, std::vector<std::size_t> target_modes)
    : order_(order), target_modes_(std::move(target_modes)) {
  if (order_ == 0) throw std::invalid_argument("Fourier order must be positive");
  if (target_modes_.size() != order_) {
    throw std::invalid_argument("Fourier order " + std::to_string(order_) + " does not match " +
                                std::to_string(target_modes_.size()) + " target modes");
  }
  auto sorted = target_modes_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("Fourier target modes must be distinct");
  }
}

FourierSpec FourierSpec::contiguous(std::size_t first, std::size_t order) {
  std::vector<std::size_t> modes(order);
  for (std::size_t k = 0; k < order; ++k) modes[k] = first + k;
  return FourierSpec(order, std::move(modes));
}

namespace {

// Replaces one creation operator at target position `row` by its image
// sum_l U[row][l] a_l^dagger.
SparseState spread_photon(const SparseState& partial, std::span<const Complex> unitary_row,
                          std::span<const std::size_t> targets, Polarization pol) {
  SparseState out(partial.num_modes());
  for (const auto& [ket, amp] : partial.terms()) {
    for (std::size_t l = 0; l < targets.size(); ++l) {
      FockVector raised = ket;
      auto& n = raised[targets[l]].count(pol);
      const double factor = std::sqrt(static_cast<double>(n) + 1.0);
      ++n;
      out.add(std::move(raised), amp * unitary_row[l] * factor);
    }
  }
  return out;
}

}  // namespace

SparseState apply_fourier(const SparseState& state, const FourierSpec& spec) {
  const auto targets = spec.target_modes();
  for (auto mode : targets) {
    if (mode >= state.num_modes()) {
      throw std::out_of_range("Fourier target mode " + std::to_string(mode) + " outside the " +
                              std::to_string(state.num_modes()) + "-mode state");
    }
  }

  const std::size_t n = spec.order();
  std::vector<Complex> unitary(n * n);
  const double amp = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = 0; l < n; ++l) {
      // Reduce k*l mod n first so the phase angle is exact in [0, 2pi).
      const double angle = 2.0 * std::numbers::pi * static_cast<double>((k * l) % n) / static_cast<double>(n);
      unitary[k * n + l] = std::polar(amp, angle);
    }
  }

  SparseState out(state.num_modes(), state.prune_threshold());
  for (const auto& [ket, coeff] : state.sorted_terms()) {
    // a|n> = a / sqrt(prod n!) * prod (a^dagger)^n |vac>; substitute each operator.
    FockVector base = ket;
    double factorials = 1.0;
    std::vector<std::pair<std::size_t, Polarization>> operators;
    for (std::size_t k = 0; k < n; ++k) {
      const auto occ = ket[targets[k]];
      for (auto pol : {Polarization::H, Polarization::V}) {
        for (unsigned c = 1; c <= occ.count(pol); ++c) {
          factorials *= c;
          operators.emplace_back(k, pol);
        }
      }
      base[targets[k]] = ModeOccupation{};
    }

    SparseState partial = SparseState::basis(std::move(base), coeff / std::sqrt(factorials));
    for (const auto& [k, pol] : operators) {
      partial = spread_photon(partial, std::span<const Complex>(unitary).subspan(k * n, n), targets, pol);
    }
    out.add(partial);
  }
  out.prune(std::max(kAmplitudeDust, state.prune_threshold()));
  return out;
}

std::vector<CountingOutcome> measure_counting(const SparseState& state,
                                              std::span<const std::size_t> measured_modes) {
  if (measured_modes.empty()) throw std::invalid_argument("no modes to measure");
  std::vector<bool> measured(state.num_modes(), false);
  for (auto mode : measured_modes) {
    if (mode >= state.num_modes()) throw std::out_of_range("measured mode out of range");
    if (measured[mode]) throw std::invalid_argument("measured modes must be distinct");
    measured[mode] = true;
  }
  const double norm = std::sqrt(state.norm_squared());
  if (std::abs(norm - 1.0) > 1e-6) {
    throw std::invalid_argument("measure_counting requires a normalized state (norm " + std::to_string(norm) + ")");
  }

  std::vector<std::size_t> rest;
  for (std::size_t mode = 0; mode < state.num_modes(); ++mode) {
    if (!measured[mode]) rest.push_back(mode);
  }

  std::map<std::vector<ModeOccupation>, SparseState> groups;
  for (const auto& [ket, amp] : state.sorted_terms()) {
    std::vector<ModeOccupation> pattern;
    pattern.reserve(measured_modes.size());
    for (auto mode : measured_modes) pattern.push_back(ket[mode]);
    FockVector remainder(rest.size());
    for (std::size_t r = 0; r < rest.size(); ++r) remainder[r] = ket[rest[r]];
    auto it = groups.try_emplace(std::move(pattern), rest.size(), state.prune_threshold()).first;
    it->second.add(std::move(remainder), amp);
  }

  std::vector<CountingOutcome> outcomes;
  outcomes.reserve(groups.size());
  for (auto& [pattern, residual] : groups) {
    const double p = residual.norm_squared();
    if (p == 0.0) continue;
    residual.normalize();
    outcomes.push_back(CountingOutcome{pattern, p, std::move(residual)});
  }
  return outcomes;
}

}  // namespace klmchain
