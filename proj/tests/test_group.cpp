#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "scatterlab/group.hpp"
#include "scatterlab/signal.hpp"

using namespace scatterlab;

namespace {

std::vector<GroupSpec> fixture_groups() {
  return {GroupSpec{1}, GroupSpec{4}, GroupSpec{8}, GroupSpec{12}, GroupSpec{16}, GroupSpec{3, 5},
          GroupSpec{4, 6}, GroupSpec{2, 2, 4}, GroupSpec{64}, GroupSpec{4, 4, 4}};
}

}  // namespace

TEST(GroupSpec, IndexTupleBijection) {
  for (const auto& g : fixture_groups()) {
    for (Index i = 0; i < g.order(); ++i) EXPECT_EQ(g.to_index(g.to_tuple(i)), i);
  }
  const GroupSpec g{4, 6};
  EXPECT_EQ(g.order(), 24u);
  EXPECT_EQ(g.to_index({1, 2}), 8u);  // row-major, last factor fastest
  EXPECT_EQ(g.to_tuple(23), (std::vector<std::size_t>{3, 5}));
}

TEST(GroupSpec, GroupLaw) {
  const GroupSpec g{3, 5};
  for (Index a = 0; a < g.order(); ++a) {
    EXPECT_EQ(g.add(a, GroupSpec::identity()), a);
    EXPECT_EQ(g.add(a, g.negate(a)), GroupSpec::identity());
    for (Index b = 0; b < g.order(); ++b) EXPECT_EQ(g.add(a, b), g.add(b, a));
  }
}

TEST(GroupSpec, RejectsBadFactors) {
  EXPECT_THROW(GroupSpec(std::vector<std::size_t>{4, 0}), ValidationError);
  EXPECT_THROW(GroupSpec(std::vector<std::size_t>{}), ValidationError);
  EXPECT_THROW(GroupSpec::parse("4xx6"), ValidationError);
  EXPECT_EQ(GroupSpec::parse("4 x 6"), (GroupSpec{4, 6}));
  EXPECT_EQ(GroupSpec::parse("8"), GroupSpec{8});
  EXPECT_THROW(GroupSpec::parse("4 6"), ValidationError);
  EXPECT_THROW(GroupSpec::parse("4x"), ValidationError);
  for (const auto& g : fixture_groups()) EXPECT_EQ(GroupSpec::parse(g.to_string()), g);
}

TEST(Fourier, DeltaHasFlatSpectrum) {
  const auto spec = fourier(Signal::delta(GroupSpec{4}));
  for (const auto& c : spec.coeffs()) EXPECT_NEAR(std::abs(c - Complex(1.0)), 0.0, 1e-15);
}

TEST(Fourier, ConstantConcentratesAtIdentity) {
  const auto f = Signal::constant(GroupSpec{4});
  const auto spec = fourier(f);
  EXPECT_NEAR(std::abs(spec[0] - Complex(4.0)), 0.0, 1e-15);
  for (Index k = 1; k < 4; ++k) EXPECT_NEAR(std::abs(spec[k]), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(f.norm_squared(), 4.0);
  EXPECT_NEAR(spec.norm_squared(), 4.0, 1e-15);  // 16 / 4
}

TEST(Fourier, MatchesBruteForceDft) {
  std::mt19937_64 rng(1);
  for (const auto& g : fixture_groups()) {
    const auto f = oracle::random_signal(g, rng);
    const auto expect = oracle::dft(g, f.values());
    const auto got = fourier(f).coeffs();
    EXPECT_LE(oracle::max_abs_diff(got, expect), 1e-10 * std::sqrt(oracle::norm2(expect))) << g.to_string();
  }
}

TEST(Fourier, InverseMatchesBruteForce) {
  std::mt19937_64 rng(2);
  const GroupSpec g{12};
  const SpectralSignal spec(g, oracle::random_vector(12, rng));
  const auto expect = oracle::inverse_dft(g, spec.coeffs());
  EXPECT_LE(oracle::max_abs_diff(inverse_fourier(spec).values(), expect), 1e-12);

  const auto delta = inverse_fourier(SpectralSignal(GroupSpec{4}, std::vector<Complex>(4, 1.0)));
  EXPECT_NEAR(std::abs(delta[0] - Complex(1.0)), 0.0, 1e-15);
  for (Index x = 1; x < 4; ++x) EXPECT_NEAR(std::abs(delta[x]), 0.0, 1e-15);
}

TEST(Fourier, RoundTripAndPlancherelProperty) {
  std::mt19937_64 rng(3);
  for (const auto& g : fixture_groups()) {
    for (int trial = 0; trial < 100; ++trial) {
      const auto f = oracle::random_signal(g, rng);
      const auto spec = fourier(f);
      const double n = f.norm_squared();
      EXPECT_LE(std::abs(spec.norm_squared() - n), 1e-10 * n);
      EXPECT_LE((inverse_fourier(spec) - f).norm_squared(), 1e-20 * n);
    }
  }
}

TEST(Fourier, CharacterSpectrumIsSingleSpike) {
  const GroupSpec g{4, 6};
  const Index k = g.to_index({1, 4});
  const auto spec = fourier(Signal::character(g, k));
  for (Index xi = 0; xi < g.order(); ++xi) {
    EXPECT_NEAR(std::abs(spec[xi]), xi == k ? 24.0 : 0.0, 1e-12);
  }
}

TEST(Fourier, RejectsNonFiniteAndMismatch) {
  std::vector<Complex> bad(4, 0.0);
  bad[2] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(Signal(GroupSpec{4}, bad), ValidationError);
  EXPECT_THROW(Signal(GroupSpec{4}, std::vector<Complex>(5)), StructuralError);
  EXPECT_THROW(convolve(Signal(GroupSpec{4}), Signal(GroupSpec{2, 2})), StructuralError);
}

TEST(Convolution, DeltaIsUnit) {
  std::mt19937_64 rng(4);
  const GroupSpec g{8};
  const auto f = oracle::random_signal(g, rng);
  EXPECT_LE((convolve(f, Signal::delta(g)) - f).norm_squared(), 1e-28 * f.norm_squared());
}

TEST(Convolution, MatchesDirectSumOnAllFixtureGroups) {
  std::mt19937_64 rng(5);
  for (const auto& g : fixture_groups()) {
    if (g.order() > 64) continue;
    for (int trial = 0; trial < 5; ++trial) {
      const auto f = oracle::random_signal(g, rng);
      const auto h = oracle::random_signal(g, rng);
      const auto expect = oracle::direct_convolution(g, f.values(), h.values());
      const auto got = convolve(f, h);
      EXPECT_LE(std::sqrt((got - Signal(g, expect)).norm_squared() / oracle::norm2(expect)), 1e-10) << g.to_string();
    }
  }
}

TEST(Convolution, ConvolutionTheorem) {
  std::mt19937_64 rng(6);
  const GroupSpec g{3, 5};
  const auto f = oracle::random_signal(g, rng);
  const auto h = oracle::random_signal(g, rng);
  const auto lhs = fourier(convolve(f, h));
  const auto fh = fourier(f), hh = fourier(h);
  for (Index xi = 0; xi < g.order(); ++xi) EXPECT_LE(std::abs(lhs[xi] - fh[xi] * hh[xi]), 1e-10 * std::abs(fh[xi] * hh[xi]) + 1e-12);
}

TEST(Convolution, DisjointSpectraAnnihilate) {
  const GroupSpec g{8};
  const auto xi = Signal::character(g, 3);
  SpectralSignal psi(g);
  psi[1] = 1.0;
  psi[5] = 0.5;
  EXPECT_LE(convolve(xi, inverse_fourier(psi)).norm_squared(), 1e-26);
}

TEST(Convolution, CommutativeAndAssociativeProperty) {
  std::mt19937_64 rng(7);
  for (const auto& g : {GroupSpec{6}, GroupSpec{2, 3}, GroupSpec{24}, GroupSpec{4, 6}}) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto a = oracle::random_signal(g, rng);
      const auto b = oracle::random_signal(g, rng);
      const auto c = oracle::random_signal(g, rng);
      const auto ab = convolve(a, b);
      const double scale = ab.norm_squared();
      EXPECT_LE(std::sqrt((ab - convolve(b, a)).norm_squared() / scale), 1e-9);
      const auto left = convolve(ab, c), right = convolve(a, convolve(b, c));
      EXPECT_LE(std::sqrt((left - right).norm_squared() / left.norm_squared()), 1e-9);
    }
  }
}

// ---------------------------------------------------------------------------
// Frequency sets

TEST(FrequencySet, Measures) {
  const GroupSpec g{12};
  EXPECT_EQ(FrequencySet(g).measure(), 0.0);
  EXPECT_EQ(FrequencySet::whole(g).measure(), 1.0);
  EXPECT_DOUBLE_EQ(FrequencySet(g, {0, 1, 11}).measure(), 0.25);
}

TEST(Sumset, SmallExamples) {
  const GroupSpec g{8};
  EXPECT_EQ(sumset(FrequencySet(g, {0, 1}), FrequencySet(g, {0, 1})), FrequencySet(g, {0, 1, 2}));
  EXPECT_EQ(power_set(FrequencySet(g, {0}), 8), FrequencySet(g, {0}));
  EXPECT_EQ(power_set(FrequencySet(g, {3}), 0), FrequencySet::identity_only(g));
  EXPECT_THROW(power_set(FrequencySet(g, {0}), -1), ValidationError);
}

TEST(Sumset, PowerMatchesPairEnumeration) {
  const GroupSpec g{12};
  const FrequencySet a(g, {0, 1, 11});
  const auto expect = oracle::sumset(g, oracle::as_set(a), oracle::as_set(a));
  EXPECT_EQ(oracle::as_set(power_set(a, 2)), expect);
  EXPECT_EQ(power_set(a, 2), FrequencySet(g, {0, 1, 2, 10, 11}));
}

TEST(Sumset, PowerLawProperty) {
  std::mt19937_64 rng(8);
  for (const auto& g : {GroupSpec{12}, GroupSpec{16}, GroupSpec{3, 5}}) {
    for (int trial = 0; trial < 20; ++trial) {
      FrequencySet a(g);
      for (Index i = 0; i < g.order(); ++i) {
        if (rng() % 5 == 0) a.insert(i);
      }
      const long long p = static_cast<long long>(rng() % 4), q = static_cast<long long>(rng() % 4);
      EXPECT_EQ(power_set(a, p + q), sumset(power_set(a, p), power_set(a, q)));
      EXPECT_EQ(oracle::as_set(sumset(a, a)), oracle::sumset(g, oracle::as_set(a), oracle::as_set(a)));
    }
  }
}

TEST(Sumset, NegationAndSymmetry) {
  const GroupSpec g{12};
  EXPECT_EQ(negate(FrequencySet(g, {1, 2})), FrequencySet(g, {11, 10}));
  EXPECT_TRUE(is_symmetric(FrequencySet(g, {0, 1, 11, 6})));
  EXPECT_FALSE(is_symmetric(FrequencySet(g, {0, 1})));
  EXPECT_THROW(sumset(FrequencySet(g), FrequencySet(GroupSpec{6})), StructuralError);
}
