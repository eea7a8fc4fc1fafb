#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "scatterlab/scatterlab.hpp"

using namespace scatterlab;

namespace {

FilterBank z8_one_band() {
  const GroupSpec g{8};
  return build_ideal_partition_bank(g, FrequencySet(g, {0}), {FrequencySet(g, {1, 2, 3, 4, 5, 6, 7})});
}

// Z_64 with low-pass box(8) and three symmetric annuli.
FilterBank z64_annuli() {
  const GroupSpec g{64};
  auto ring = [&](long long lo, long long hi) {
    FrequencySet s(g);
    for (long long k = lo; k <= hi; ++k) {
      s.insert(g.wrap({k}));
      s.insert(g.wrap({-k}));
    }
    return s;
  };
  return build_ideal_partition_bank(g, FrequencySet::box(g, 8), {ring(9, 16), ring(17, 24), ring(25, 32)});
}

std::set<Index> as_set(const FrequencySet& s) { return oracle::as_set(s); }

}  // namespace

// ---------------------------------------------------------------------------
// Generic route

TEST(WitnessBound, MeanProjectorBase) {
  for (std::size_t d : {4u, 8u, 16u}) {
    const std::vector<LayerSpec> layers{complete_to_parseval(LinearOperator::matrix(mean_projector(d)))};
    const auto w = constant_witness(layers[0].output);
    EXPECT_NEAR(w.lambda, 1.0, 1e-14);
    const Signal f = Signal::delta(GroupSpec::cyclic(d));
    const auto e = witness_bound(layers, f, 5, w);
    EXPECT_NEAR(e.base, 1.0 - 1.0 / static_cast<double>(d), 1e-14);
    EXPECT_NEAR(*e.constants.c_a, 1.0 / static_cast<double>(d), 1e-14);
    // ||delta||^2 - ||A delta||^2 = 1 - 1/d
    EXPECT_NEAR(e.prefactor, 1.0 - 1.0 / static_cast<double>(d), 1e-14);
  }
}

TEST(WitnessBound, ConvolutionInstanceMatchesGroupOrder) {
  const GroupSpec g{8};
  const std::vector<LayerSpec> layers{
      complete_to_parseval(LinearOperator::convolution(SpectralSignal::indicator(FrequencySet::identity_only(g))))};
  const auto e = witness_bound(layers, Signal::delta(g), 4, constant_witness(layers[0].output));
  EXPECT_NEAR(e.base, 1.0 - 1.0 / 8.0, 1e-14);
}

TEST(WitnessBound, HypothesisViolations) {
  auto layer = complete_to_parseval(LinearOperator::matrix(mean_projector(4)));
  const Signal f = Signal::delta(GroupSpec{4});
  const auto w = constant_witness(layer.output);

  auto relu = layer;
  relu.sigma = Nonlinearity::real_relu;
  EXPECT_THROW(witness_bound({relu}, f, 3, w), HypothesisError);

  // diagonal A: the constant function is not an eigenvector of A^*A
  Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(4, 4);
  diag.diagonal() << 1.0, 0.5, 0.5, 0.25;
  const std::vector<LayerSpec> layers{complete_to_parseval(LinearOperator::matrix(diag))};
  EXPECT_THROW(witness_bound(layers, f, 3, constant_witness(layers[0].output)), HypothesisError);

  // a unit eigenvector with a zero entry gives no positive floor
  EigenWitness spike{1.0, Signal::delta(GroupSpec{4}), WitnessSource::explicit_input};
  EXPECT_THROW(witness_bound(layers, f, 3, spike), HypothesisError);
}

// ---------------------------------------------------------------------------
// Support-size route

TEST(SupportBound, BaseFromLargestSupport) {
  const auto e = support_bound(z8_one_band(), Signal::delta(GroupSpec{8}), 4);
  EXPECT_EQ(*e.constants.support_max, 7u);
  EXPECT_DOUBLE_EQ(e.base, 6.0 / 7.0);
  const auto s = support_bound(build_singleton_bank(GroupSpec{8}), Signal::delta(GroupSpec{8}), 2);
  EXPECT_EQ(s.base, 0.0);
}

TEST(SupportBound, CurveAndPrefactor) {
  const GroupSpec g{8};
  const auto f = Signal::constant(g) + Signal::character(g, 2);
  const auto e = support_bound(z8_one_band(), f, 3);
  // the low-pass keeps the constant part (energy 8) and drops the character (energy 8)
  EXPECT_NEAR(e.prefactor, 8.0, 1e-12);
  EXPECT_NEAR(e.curve(1), 8.0, 1e-12);
  EXPECT_NEAR(e.curve(3), 8.0 * 36.0 / 49.0, 1e-12);
}

TEST(SupportBound, PerStepInequalityHoldsOnRandomSignals) {
  std::mt19937_64 rng(31);
  const auto bank = z8_one_band();
  for (int trial = 0; trial < 50; ++trial) {
    const auto e = support_bound(bank, oracle::random_signal(GroupSpec{8}, rng), 2);
    for (const auto& c : e.step_checks) EXPECT_TRUE(c.ok) << c.lhs << " < " << c.rhs;
  }
}

TEST(SupportBound, NonParsevalBankIsRejected) {
  const GroupSpec g{4};
  SpectralSignal chi(g), psi(g);
  chi[0] = 1.0;
  for (Index xi = 1; xi < 4; ++xi) psi[xi] = 0.5;
  EXPECT_THROW(support_bound(FilterBank(chi, {psi}), Signal::delta(g), 2), HypothesisError);
}

// ---------------------------------------------------------------------------
// Symmetric neighbourhoods

TEST(Gamma, TrivialGapGivesIdentity) {
  const GroupSpec g{8};
  EXPECT_EQ(find_gamma(FrequencySet::identity_only(g)), FrequencySet::identity_only(g));
  EXPECT_THROW(find_gamma(FrequencySet(g, {1, 7})), ValidationError);
}

TEST(Gamma, SmallBoxIsTooSmallForAPair) {
  // {0,+-1}^8 reaches +-8, outside a radius-4 box
  const GroupSpec g{64};
  EXPECT_EQ(find_gamma(FrequencySet::box(g, 4)), FrequencySet::identity_only(g));
}

TEST(Gamma, RadiusEightBoxAdmitsUnitPair) {
  const GroupSpec g{64};
  EXPECT_EQ(find_gamma(FrequencySet::box(g, 8)), FrequencySet(g, {0, 1, 63}));
}

TEST(Gamma, SubgroupIsItsOwnNeighbourhood) {
  const GroupSpec g{12};
  const FrequencySet h(g, {0, 4, 8});
  EXPECT_EQ(find_gamma(h), h);
  EXPECT_TRUE(is_valid_gamma(h, h));
}

TEST(Gamma, CandidatesAreAllValid) {
  const GroupSpec g{16};
  const FrequencySet gap(g, {0, 1, 15, 2, 14, 8});
  for (const auto& c : gamma_candidates(gap)) EXPECT_TRUE(is_valid_gamma(c, gap)) << c.to_string();
  // {0, 8} is a subgroup inside the gap, {0,+-1} is not allowed
  EXPECT_EQ(find_gamma(gap), FrequencySet(g, {0, 8}));
}

// ---------------------------------------------------------------------------
// Covering numbers

TEST(Cover, TwoClustersNeedTwoTranslates) {
  const GroupSpec g{12};
  const FrequencySet supp(g, {2, 3, 4, 7, 8});
  const FrequencySet k(g, {0, 1, 11});
  const auto c = covering_counts(supp, k, FrequencySet::identity_only(g));
  ASSERT_TRUE(c.n_exact.has_value());
  EXPECT_EQ(*c.n_exact, 2u);
  EXPECT_EQ(c.n_greedy, 2u);
  EXPECT_EQ(c.n_ruzsa, 5u);
}

TEST(Cover, GreedyCanBeStrictlyWorse) {
  for (std::size_t n : {12u, 16u}) {
    const GroupSpec g{n};
    const FrequencySet gamma(g, {0, 1, n - 1});
    const FrequencySet supp(g, {1, 3, 6, 7, 8});
    const auto k = power_set(gamma, 2);
    const auto c = covering_counts(supp, k, gamma);
    EXPECT_EQ(*c.n_exact, 2u);
    EXPECT_EQ(c.n_greedy, 3u);
    EXPECT_EQ(oracle::brute_force_cover(g, as_set(supp), as_set(k)), 2u);
  }
}

TEST(Cover, RuzsaNeedsGammaMinusGammaInK) {
  const GroupSpec g{12};
  EXPECT_THROW(covering_counts(FrequencySet(g, {3}), FrequencySet(g, {0, 1, 11}), FrequencySet(g, {0, 1, 11})),
               ValidationError);
}

TEST(Cover, SandwichAgainstBruteForceProperty) {
  std::mt19937_64 rng(32);
  for (std::size_t n : {12u, 16u}) {
    const GroupSpec g{n};
    for (const auto& gamma : {FrequencySet::identity_only(g), FrequencySet(g, {0, 1, n - 1})}) {
      const auto k = power_set(gamma, 2);
      for (int trial = 0; trial < 30; ++trial) {
        FrequencySet supp(g);
        const std::size_t want = 1 + rng() % 12;
        while (supp.size() < want) supp.insert(rng() % n);
        const auto c = covering_counts(supp, k, gamma);
        const auto truth = oracle::brute_force_cover(g, as_set(supp), as_set(k));
        ASSERT_TRUE(c.n_exact.has_value());
        EXPECT_EQ(*c.n_exact, truth) << supp.to_string();
        EXPECT_LE(truth, c.n_greedy);
        EXPECT_LE(truth, c.n_ruzsa);
      }
    }
  }
}

TEST(Cover, AlphaIsMonotoneInCount) {
  for (std::size_t n = 1; n < 20; ++n) EXPECT_LE(alpha_from(n, 5, 9), alpha_from(n + 1, 5, 9));
  EXPECT_EQ(alpha_from(0, 5, 9), 0.0);
  EXPECT_DOUBLE_EQ(alpha_from(1, 1, 1), 0.0);
}

// ---------------------------------------------------------------------------
// Covering route

TEST(CoveringBound, IdentityGammaCollapsesToSupportBound) {
  for (const auto& bank : {z8_one_band(), z64_annuli()}) {
    const Signal f = Signal::delta(bank.group());
    const auto t3 = support_bound(bank, f, 3);
    const auto t4 = covering_bound(bank, f, 3, FrequencySet::identity_only(bank.group()));
    EXPECT_NEAR(t4.base, t3.base, 1e-15);
  }
}

TEST(CoveringBound, Z64PipelineWithUnitPair) {
  std::mt19937_64 rng(33);
  const auto bank = z64_annuli();
  const GroupSpec g{64};
  const FrequencySet gamma(g, {0, 1, 63});
  const auto f = oracle::random_signal(g, rng);
  const auto e = covering_bound(bank, f, 3, gamma);
  EXPECT_EQ(*e.constants.gamma2_size, 5u);
  EXPECT_EQ(*e.constants.gamma4_size, 9u);
  EXPECT_EQ(*e.constants.n_exact, 4u);  // each annulus is two runs of 8
  EXPECT_NEAR(e.base, 1.0 - (25.0 / 81.0) / 4.0, 1e-15);
  EXPECT_GE(e.base, 0.0);
  EXPECT_LT(e.base, 1.0);
  EXPECT_LT(e.base, support_bound(bank, f, 3).base);

  // automatic choice finds the same neighbourhood
  EXPECT_EQ(*covering_bound(bank, f, 3).constants.gamma, gamma);

  const auto ledger = propagate({scattering_layer(bank)}, f, 3).ledger;
  BoundReport report;
  report.entries.push_back(e);
  EXPECT_TRUE(certify(ledger, report).passed);
}

TEST(CoveringBound, InvalidGammaIsRejected) {
  const GroupSpec g{8};
  EXPECT_THROW(covering_bound(z8_one_band(), Signal::delta(g), 2, FrequencySet(g, {0, 1, 7})), ValidationError);
}

// ---------------------------------------------------------------------------
// Certification

TEST(Certify, PassesOnRandomSignals) {
  std::mt19937_64 rng(34);
  const auto bank = z8_one_band();
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = oracle::random_signal(GroupSpec{8}, rng);
    const auto ledger = propagate({scattering_layer(bank)}, f, 4).ledger;
    BoundReport report;
    report.entries.push_back(support_bound(bank, f, 4));
    report.entries.push_back(covering_bound(bank, f, 4));
    const auto r = certify(ledger, report);
    EXPECT_TRUE(r.passed);
    EXPECT_EQ(r.margins.size(), 8u);
    for (const auto& m : r.margins) EXPECT_GE(m.margin, -1e-9 * f.norm_squared());
  }
}

TEST(Certify, CorruptedLedgerFailsAtThatLayer) {
  std::mt19937_64 rng(35);
  const auto bank = z8_one_band();
  const auto f = oracle::random_signal(GroupSpec{8}, rng);
  auto ledger = propagate({scattering_layer(bank)}, f, 3).ledger;
  BoundReport report;
  report.entries.push_back(support_bound(bank, f, 3));
  ledger.propagated[2] = 2.0 * report.entries[0].curve(2);
  const auto r = certify(ledger, report);
  EXPECT_FALSE(r.passed);
  ASSERT_TRUE(r.first_failure.has_value());
  EXPECT_EQ(r.first_failure->layer, 2u);
  EXPECT_EQ(r.first_failure->theorem, "thm3");
  EXPECT_LT(r.first_failure->margin, 0.0);
}

TEST(Certify, ZeroSignalHasZeroMargins) {
  const auto bank = z8_one_band();
  const Signal f(GroupSpec{8});
  const auto ledger = propagate({scattering_layer(bank)}, f, 3).ledger;
  BoundReport report;
  report.entries.push_back(support_bound(bank, f, 3));
  const auto r = certify(ledger, report);
  EXPECT_TRUE(r.passed);
  for (const auto& m : r.margins) EXPECT_EQ(m.margin, 0.0);
}

TEST(Certify, MetadataMismatchIsStructural) {
  const auto bank = z8_one_band();
  const GroupSpec g{8};
  const auto ledger = propagate({scattering_layer(bank)}, Signal::delta(g), 2).ledger;
  BoundReport other;
  other.entries.push_back(support_bound(bank, Signal::constant(g), 2));
  EXPECT_THROW(certify(ledger, other), StructuralError);
  BoundReport deeper;
  deeper.entries.push_back(support_bound(bank, Signal::delta(g), 5));
  EXPECT_THROW(certify(ledger, deeper), StructuralError);
}

TEST(Certify, FailedStepCheckFailsCertificate) {
  const auto bank = z8_one_band();
  const Signal f = Signal::delta(GroupSpec{8});
  const auto ledger = propagate({scattering_layer(bank)}, f, 2).ledger;
  BoundReport report;
  report.entries.push_back(support_bound(bank, f, 2));
  report.entries[0].step_checks[0].ok = false;
  const auto r = certify(ledger, report);
  EXPECT_FALSE(r.passed);
  EXPECT_EQ(r.step_failures.size(), 1u);
}
