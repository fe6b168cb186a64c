#include "klmchain/resource.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace klmchain {

ResourceCoeffs::ResourceCoeffs(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.size() < 2) throw std::invalid_argument("a resource needs at least two coefficients (N >= 1)");
}

Complex ResourceCoeffs::at(int i) const {
  if (i < 0 || i > n_photons()) return {};
  return coeffs_[static_cast<std::size_t>(i)];
}

double ResourceCoeffs::weight(int i) const { return std::norm(at(i)); }

std::vector<double> ResourceCoeffs::weights() const {
  std::vector<double> w(coeffs_.size());
  std::transform(coeffs_.begin(), coeffs_.end(), w.begin(), [](Complex c) { return std::norm(c); });
  return w;
}

ResourceCoeffs ResourceCoeffs::reversed() const {
  return ResourceCoeffs(std::vector<Complex>(coeffs_.rbegin(), coeffs_.rend()));
}

ValidationReport validate(const ResourceCoeffs& coeffs, double tolerance) {
  ValidationReport report;
  double total = 0.0;
  for (const auto& c : coeffs.coeffs()) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      report.ok = false;
      report.violations.emplace_back("non-finite coefficient");
    }
    total += std::norm(c);
  }
  report.normalization_delta = total - 1.0;
  if (!(std::abs(report.normalization_delta) <= tolerance)) {
    report.ok = false;
    std::ostringstream msg;
    msg << "normalization: sum |c_i|^2 = " << total << " (delta " << report.normalization_delta << ")";
    report.violations.push_back(msg.str());
  }
  return report;
}

void require_valid(const ResourceCoeffs& coeffs, double tolerance) {
  const auto report = validate(coeffs, tolerance);
  if (report.ok) return;
  std::string msg = "invalid resource coefficients:";
  for (const auto& v : report.violations) msg += " " + v + ";";
  throw std::invalid_argument(msg);
}

ResourceCoeffs maximally_entangled(int n_photons) {
  if (n_photons < 1) throw std::invalid_argument("n_photons must be >= 1");
  const double c = 1.0 / std::sqrt(static_cast<double>(n_photons) + 1.0);
  return ResourceCoeffs(std::vector<Complex>(static_cast<std::size_t>(n_photons) + 1, c));
}

double tent_weight(int i, double x) {
  return (1.0 - 9.0 * x) / 7.0 + (3.0 - std::abs(i - 3)) * x;
}

ResourceCoeffs tent_family(TentParams params) {
  if (!TentParams::in_range(params.x)) {
    std::ostringstream msg;
    msg << "tent parameter x = " << params.x << " outside [-1/12, 1/9]";
    throw std::out_of_range(msg.str());
  }
  std::vector<Complex> coeffs(7);
  for (int i = 0; i <= 6; ++i) {
    // Rounding at the range boundaries can leave -1e-17 instead of 0.
    coeffs[static_cast<std::size_t>(i)] = std::sqrt(std::max(0.0, tent_weight(i, params.x)));
  }
  return ResourceCoeffs(std::move(coeffs));
}

ResourceCoeffs from_weights(const std::vector<double>& weights) {
  std::vector<Complex> coeffs(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] < 0.0) throw std::invalid_argument("negative weight");
    coeffs[i] = std::sqrt(weights[i]);
  }
  return ResourceCoeffs(std::move(coeffs));
}

}  // namespace klmchain
