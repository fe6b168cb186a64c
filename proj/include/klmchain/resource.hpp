#pragma once

// Coefficient vectors c_0..c_N of the staircase-polarization resource state.

#include <complex>
#include <string>
#include <vector>

namespace klmchain {

using Complex = std::complex<double>;

/// N+1 coefficients of an N-photon resource. Construction checks only the
/// length; normalization is checked by validate() / require_valid() so that
/// malformed vectors can still be inspected and reported.
class ResourceCoeffs {
 public:
  explicit ResourceCoeffs(std::vector<Complex> coeffs);

  int n_photons() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<Complex>& coeffs() const { return coeffs_; }

  /// c_i, with c_{-1} = c_{N+1} = 0.
  Complex at(int i) const;
  /// |c_i|^2, with the same boundary convention.
  double weight(int i) const;
  std::vector<double> weights() const;

  ResourceCoeffs reversed() const;

  bool operator==(const ResourceCoeffs&) const = default;

 private:
  std::vector<Complex> coeffs_;
};

inline constexpr double kNormalizationTolerance = 1e-12;

struct ValidationReport {
  bool ok = true;
  double normalization_delta = 0.0;  // sum |c_i|^2 - 1
  std::vector<std::string> violations;
};

ValidationReport validate(const ResourceCoeffs& coeffs, double tolerance = kNormalizationTolerance);

/// Throws std::invalid_argument carrying the violation list when invalid.
void require_valid(const ResourceCoeffs& coeffs, double tolerance = kNormalizationTolerance);

ResourceCoeffs maximally_entangled(int n_photons);

/// Six-photon tent family: |c_i|^2 = (1 - 9x)/7 + (3 - |i - 3|) x.
struct TentParams {
  static constexpr double kMinX = -1.0 / 12.0;
  static constexpr double kMaxX = 1.0 / 9.0;

  double x = 0.0;

  static bool in_range(double x) { return x >= kMinX && x <= kMaxX; }
};

double tent_weight(int i, double x);
ResourceCoeffs tent_family(TentParams params);

/// Real non-negative coefficients sqrt(w_i) from a probability vector.
ResourceCoeffs from_weights(const std::vector<double>& weights);

}  // namespace klmchain
