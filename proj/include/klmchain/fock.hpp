#pragma once

// Sparse state vectors over multimode, two-polarization bosonic Fock space.

#include <complex>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

namespace klmchain {

using Complex = std::complex<double>;

enum class Polarization : std::uint8_t { H, V };

struct ModeOccupation {
  std::uint16_t v_count = 0;
  std::uint16_t h_count = 0;

  std::uint16_t count(Polarization pol) const { return pol == Polarization::V ? v_count : h_count; }
  std::uint16_t& count(Polarization pol) { return pol == Polarization::V ? v_count : h_count; }
  unsigned total() const { return unsigned{v_count} + h_count; }

  auto operator<=>(const ModeOccupation&) const = default;
};

/// Occupation numbers of every mode, in ascending mode order.
class FockVector {
 public:
  FockVector() = default;
  explicit FockVector(std::size_t num_modes) : modes_(num_modes) {}
  explicit FockVector(std::vector<ModeOccupation> modes) : modes_(std::move(modes)) {}

  std::size_t size() const { return modes_.size(); }
  const ModeOccupation& operator[](std::size_t mode) const { return modes_[mode]; }
  ModeOccupation& operator[](std::size_t mode) { return modes_[mode]; }
  std::span<const ModeOccupation> modes() const { return modes_; }
  unsigned total_photons() const;

  auto operator<=>(const FockVector&) const = default;

 private:
  std::vector<ModeOccupation> modes_;
};

struct FockVectorHash {
  std::size_t operator()(const FockVector& fv) const noexcept;
};

/// Amplitudes with magnitude below this are treated as cancelled interference dust
/// after a transform.
inline constexpr double kAmplitudeDust = 1e-14;

/// Superposition of Fock basis kets. Terms whose amplitude falls to the prune
/// threshold or below are dropped on insertion (threshold 0 drops exact zeros only).
class SparseState {
 public:
  using TermMap = std::unordered_map<FockVector, Complex, FockVectorHash>;

  explicit SparseState(std::size_t num_modes, double prune_threshold = 0.0);

  static SparseState vacuum(std::size_t num_modes);
  static SparseState basis(FockVector ket, Complex amplitude = 1.0);

  std::size_t num_modes() const { return num_modes_; }
  double prune_threshold() const { return prune_threshold_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  const TermMap& terms() const { return terms_; }

  /// Accumulates `amplitude` onto `ket`.
  void add(const FockVector& ket, Complex amplitude);
  void add(FockVector&& ket, Complex amplitude);
  void add(const SparseState& other, Complex scale = 1.0);

  Complex amplitude(const FockVector& ket) const;
  double norm_squared() const;
  void normalize();
  void scale(Complex factor);
  /// Drops every term with magnitude at or below `threshold`.
  void prune(double threshold);

  /// Terms in canonical (lexicographic ket) order.
  std::vector<std::pair<FockVector, Complex>> sorted_terms() const;

 private:
  std::size_t num_modes_;
  double prune_threshold_;
  TermMap terms_;
};

/// Applies a creation operator. The result is not renormalized.
SparseState create_photon(const SparseState& state, std::size_t mode, Polarization pol);

/// (N+1)-point discrete Fourier transform acting on the creation operators of
/// `target_modes`: the photon at target position k moves to target position l
/// with amplitude exp(2*pi*i*k*l/(N+1)) / sqrt(N+1). Modes outside the target
/// set are untouched.
class FourierSpec {
 public:
  FourierSpec(std::size_t order, std::vector<std::size_t> target_modes);
  /// Targets modes first .. first+order-1.
  static FourierSpec contiguous(std::size_t first, std::size_t order);

  std::size_t order() const { return order_; }
  std::span<const std::size_t> target_modes() const { return target_modes_; }

 private:
  std::size_t order_;
  std::vector<std::size_t> target_modes_;
};

SparseState apply_fourier(const SparseState& state, const FourierSpec& spec);

struct CountingOutcome {
  std::vector<ModeOccupation> counts;  // one per measured mode, in the order requested
  double probability = 0.0;
  SparseState residual;                // normalized, over the unmeasured modes in ascending order
};

/// Projective photon counting (both polarizations) on `measured_modes`. Outcomes
/// are returned in lexicographic order of their count patterns.
std::vector<CountingOutcome> measure_counting(const SparseState& state,
                                              std::span<const std::size_t> measured_modes);

}  // namespace klmchain
