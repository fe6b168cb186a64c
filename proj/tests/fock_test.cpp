#include "klmchain/fock.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

namespace klmchain {
namespace {

FockVector ket(std::vector<ModeOccupation> modes) { return FockVector(std::move(modes)); }

constexpr ModeOccupation kEmpty{0, 0};
constexpr ModeOccupation kOneV{1, 0};
constexpr ModeOccupation kOneH{0, 1};

// Amplitude <out| F |in> for single-polarization photons from the permanent of
// the transfer submatrix: perm(U[in_i][out_j]) / sqrt(prod n_in! prod n_out!).
Complex permanent_amplitude(const std::vector<std::size_t>& in_modes, const std::vector<std::size_t>& out_modes,
                            std::size_t n) {
  if (in_modes.size() != out_modes.size()) return 0.0;
  auto u = [n](std::size_t k, std::size_t l) {
    return std::polar(1.0 / std::sqrt(double(n)), 2.0 * std::numbers::pi * double((k * l) % n) / double(n));
  };
  std::vector<std::size_t> perm(out_modes.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  Complex total = 0.0;
  do {
    Complex prod = 1.0;
    for (std::size_t i = 0; i < perm.size(); ++i) prod *= u(in_modes[i], out_modes[perm[i]]);
    total += prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  auto fact_product = [n](const std::vector<std::size_t>& modes) {
    double f = 1.0;
    for (std::size_t m = 0; m < n; ++m) {
      const auto c = std::count(modes.begin(), modes.end(), m);
      for (long i = 2; i <= c; ++i) f *= double(i);
    }
    return f;
  };
  return total / std::sqrt(fact_product(in_modes) * fact_product(out_modes));
}

std::vector<std::size_t> photon_list(const FockVector& fv, Polarization pol) {
  std::vector<std::size_t> out;
  for (std::size_t m = 0; m < fv.size(); ++m) {
    for (unsigned c = 0; c < fv[m].count(pol); ++c) out.push_back(m);
  }
  return out;
}

SparseState random_state(std::mt19937_64& rng, std::size_t modes, int photons, int terms) {
  std::uniform_int_distribution<std::size_t> mode_dist(0, modes - 1);
  std::uniform_int_distribution<int> pol_dist(0, 1);
  std::normal_distribution<double> g;
  SparseState s(modes);
  for (int t = 0; t < terms; ++t) {
    FockVector fv(modes);
    for (int p = 0; p < photons; ++p) {
      auto& occ = fv[mode_dist(rng)];
      if (pol_dist(rng)) ++occ.v_count; else ++occ.h_count;
    }
    s.add(fv, Complex(g(rng), g(rng)));
  }
  s.normalize();
  return s;
}

TEST(CreatePhoton, FromVacuum) {
  const auto s = create_photon(SparseState::vacuum(1), 0, Polarization::V);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s.amplitude(ket({kOneV})), Complex(1.0));
}

TEST(CreatePhoton, BosonicFactor) {
  const auto s = create_photon(SparseState::basis(ket({kOneV})), 0, Polarization::V);
  EXPECT_NEAR(std::abs(s.amplitude(ket({ModeOccupation{2, 0}})) - std::sqrt(2.0)), 0.0, 1e-15);
}

TEST(CreatePhoton, ResourcePatternTwoPhotons) {
  // Sender half of the N=2 resource term i=1: V on mode 1, H on mode 2.
  auto s = create_photon(SparseState::vacuum(3), 1, Polarization::V);
  s = create_photon(s, 2, Polarization::H);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s.amplitude(ket({kEmpty, kOneV, kOneH})), Complex(1.0));
}

TEST(CreatePhoton, OutOfRange) {
  EXPECT_THROW(create_photon(SparseState::vacuum(2), 2, Polarization::H), std::out_of_range);
}

TEST(CreatePhoton, SameModeCommutesWithSqrtTwo) {
  const auto vac = SparseState::vacuum(2);
  const auto same = create_photon(create_photon(vac, 0, Polarization::H), 0, Polarization::H);
  const auto distinct = create_photon(create_photon(vac, 0, Polarization::H), 1, Polarization::H);
  const auto distinct_swapped = create_photon(create_photon(vac, 1, Polarization::H), 0, Polarization::H);
  const Complex a_same = same.amplitude(ket({ModeOccupation{0, 2}, kEmpty}));
  const Complex a_distinct = distinct.amplitude(ket({kOneH, kOneH}));
  EXPECT_NEAR(std::abs(a_same / a_distinct - std::sqrt(2.0)), 0.0, 1e-15);
  EXPECT_EQ(distinct.amplitude(ket({kOneH, kOneH})), distinct_swapped.amplitude(ket({kOneH, kOneH})));
  // H and V creation on one mode commute as well.
  const auto hv = create_photon(create_photon(vac, 0, Polarization::H), 0, Polarization::V);
  const auto vh = create_photon(create_photon(vac, 0, Polarization::V), 0, Polarization::H);
  EXPECT_EQ(hv.sorted_terms(), vh.sorted_terms());
}

TEST(ApplyFourier, TwoPointRowZero) {
  const auto out = apply_fourier(SparseState::basis(ket({kOneV, kEmpty})), FourierSpec::contiguous(0, 2));
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(out.amplitude(ket({kOneV, kEmpty})) - r), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(out.amplitude(ket({kEmpty, kOneV})) - r), 0.0, 1e-15);
}

TEST(ApplyFourier, TwoPointRowOneHasMinusSign) {
  const auto out = apply_fourier(SparseState::basis(ket({kEmpty, kOneV})), FourierSpec::contiguous(0, 2));
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(out.amplitude(ket({kOneV, kEmpty})) - r), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(out.amplitude(ket({kEmpty, kOneV})) + r), 0.0, 1e-15);
}

TEST(ApplyFourier, TwoPhotonsBunchIntoModeZero) {
  const auto in = ket({kOneV, kOneV, kEmpty});
  const auto out = apply_fourier(SparseState::basis(in), FourierSpec::contiguous(0, 3));
  const auto bunched = ket({ModeOccupation{2, 0}, kEmpty, kEmpty});
  const Complex a = out.amplitude(bunched);
  EXPECT_NEAR(std::abs(a - std::sqrt(2.0) / 3.0), 0.0, 1e-15);
  const Complex oracle = permanent_amplitude({0, 1}, {0, 0}, 3);
  EXPECT_NEAR(std::abs(a - oracle), 0.0, 1e-15);
}

TEST(ApplyFourier, MatchesPermanentOracle) {
  std::mt19937_64 rng(11);
  for (std::size_t n : {2u, 3u, 4u}) {
    for (int photons = 1; photons <= 3; ++photons) {
      const auto in = random_state(rng, n, photons, 3);
      const auto out = apply_fourier(in, FourierSpec::contiguous(0, n));
      EXPECT_NEAR(out.norm_squared(), 1.0, 1e-12);
      for (const auto& [out_ket, amp] : out.terms()) {
        Complex expected = 0.0;
        for (const auto& [in_ket, in_amp] : in.terms()) {
          // Polarizations do not mix, so the amplitude factorizes.
          expected += in_amp *
                      permanent_amplitude(photon_list(in_ket, Polarization::V), photon_list(out_ket, Polarization::V), n) *
                      permanent_amplitude(photon_list(in_ket, Polarization::H), photon_list(out_ket, Polarization::H), n);
        }
        EXPECT_NEAR(std::abs(amp - expected), 0.0, 1e-12);
      }
    }
  }
}

TEST(ApplyFourier, Unitarity) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 4;
    const auto in = random_state(rng, n, 1 + trial % 4, 1 + trial % 5);
    EXPECT_NEAR(apply_fourier(in, FourierSpec::contiguous(0, n)).norm_squared(), 1.0, 1e-12);
  }
}

TEST(ApplyFourier, SquareIsParityAndFourthPowerIsIdentity) {
  for (std::size_t n = 2; n <= 7; ++n) {
    const auto spec = FourierSpec::contiguous(0, n);
    for (std::size_t k = 0; k < n; ++k) {
      FockVector in(n);
      in[k].v_count = 1;
      auto s = SparseState::basis(in);
      s = apply_fourier(apply_fourier(s, spec), spec);
      FockVector parity(n);
      parity[(n - k) % n].v_count = 1;
      EXPECT_NEAR(std::abs(s.amplitude(parity) - 1.0), 0.0, 1e-12);
      s = apply_fourier(apply_fourier(s, spec), spec);
      EXPECT_NEAR(std::abs(s.amplitude(in) - 1.0), 0.0, 1e-12);
      EXPECT_EQ(s.size(), 1u);
    }
  }
}

TEST(ApplyFourier, NonTargetModesPassThrough) {
  auto s = SparseState::basis(ket({kOneV, kEmpty, ModeOccupation{1, 1}}));
  const auto out = apply_fourier(s, FourierSpec(2, {0, 1}));
  for (const auto& [k, amp] : out.terms()) EXPECT_EQ(k[2], (ModeOccupation{1, 1}));
  EXPECT_NEAR(out.norm_squared(), 1.0, 1e-15);
}

TEST(ApplyFourier, NonContiguousTargets) {
  // Target positions (0, 1) mapped to modes (2, 0): the photon in mode 0 is at position 1.
  const auto out = apply_fourier(SparseState::basis(ket({kOneH, kEmpty, kEmpty})), FourierSpec(2, {2, 0}));
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(out.amplitude(ket({kEmpty, kEmpty, kOneH})) - r), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(out.amplitude(ket({kOneH, kEmpty, kEmpty})) + r), 0.0, 1e-15);
}

TEST(ApplyFourier, SpecErrors) {
  EXPECT_THROW(FourierSpec(3, {0, 1}), std::invalid_argument);
  EXPECT_THROW(FourierSpec(2, {1, 1}), std::invalid_argument);
  EXPECT_THROW(FourierSpec(0, {}), std::invalid_argument);
  EXPECT_THROW(apply_fourier(SparseState::vacuum(2), FourierSpec::contiguous(1, 2)), std::out_of_range);
}

TEST(SparseState, PruneThresholdDropsSmallTerms) {
  SparseState s(1, 1e-3);
  s.add(ket({kOneV}), 5e-4);
  EXPECT_TRUE(s.empty());
  s.add(ket({kOneH}), 1.0);
  s.add(ket({kOneH}), -1.0);
  EXPECT_TRUE(s.empty());
  SparseState exact(1);
  exact.add(ket({kOneV}), 1e-300);
  EXPECT_EQ(exact.size(), 1u);
}

TEST(MeasureCounting, ProductStateIsDeterministic) {
  const auto s = SparseState::basis(ket({kOneV, kOneH}));
  const std::vector<std::size_t> measured{0};
  const auto outcomes = measure_counting(s, measured);
  ASSERT_EQ(outcomes.size(), 1u);
  EXPECT_EQ(outcomes[0].counts, std::vector<ModeOccupation>{kOneV});
  EXPECT_DOUBLE_EQ(outcomes[0].probability, 1.0);
  EXPECT_NEAR(std::abs(outcomes[0].residual.amplitude(ket({kOneH})) - 1.0), 0.0, 1e-15);
}

TEST(MeasureCounting, SymmetricSuperposition) {
  SparseState s(2);
  s.add(ket({kOneV, kOneH}), 1.0 / std::sqrt(2.0));
  s.add(ket({kOneH, kOneV}), 1.0 / std::sqrt(2.0));
  const std::vector<std::size_t> measured{0};
  const auto outcomes = measure_counting(s, measured);
  ASSERT_EQ(outcomes.size(), 2u);
  for (const auto& o : outcomes) {
    EXPECT_NEAR(o.probability, 0.5, 1e-15);
    EXPECT_NEAR(o.residual.norm_squared(), 1.0, 1e-15);
  }
}

TEST(MeasureCounting, CompletenessAfterFourier) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 3 + trial % 3;
    const auto s = apply_fourier(random_state(rng, n + 2, 3, 4), FourierSpec::contiguous(0, n));
    std::vector<std::size_t> measured(n);
    for (std::size_t i = 0; i < n; ++i) measured[i] = i;
    double total = 0.0;
    for (const auto& o : measure_counting(s, measured)) total += o.probability;
    EXPECT_NEAR(total, 1.0, 1e-10);
  }
}

TEST(MeasureCounting, Errors) {
  const auto s = SparseState::basis(ket({kOneV, kOneH}));
  EXPECT_THROW(measure_counting(s, {}), std::invalid_argument);
  const std::vector<std::size_t> bad{5};
  EXPECT_THROW(measure_counting(s, bad), std::out_of_range);
  const auto unnormalized = SparseState::basis(ket({kOneV, kOneH}), 2.0);
  const std::vector<std::size_t> zero{0};
  EXPECT_THROW(measure_counting(unnormalized, zero), std::invalid_argument);
}

}  // namespace
}  // namespace klmchain
