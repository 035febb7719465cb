#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "telecloning/measurement.hpp"
#include "telecloning/protocol.hpp"
#include "telecloning/verification.hpp"

using namespace telecloning;

namespace {

PureState after_splitter_vertical(double R) {
  return simulate_cloning(R, Jones::vertical(), InputRoute::direct).after_splitter;
}

BasisConfiguration one(const ModeLabel& m) { return BasisConfiguration({{m, 1}}); }

}  // namespace

TEST(PostSelect, SuccessProbabilityIsOneMinus3RPlus3R2) {
  for (double R : {0.0, 0.1, 0.3, 0.5, 0.77, 1.0}) {
    const auto sel = post_select(after_splitter_vertical(R), {"e", "f"});
    EXPECT_NEAR(sel.probability, 1 - 3 * R + 3 * R * R, 1e-12) << R;
    EXPECT_NEAR(sel.conditional.squared_norm(), 1.0, 1e-12);
  }
  EXPECT_NEAR(post_select(after_splitter_vertical(1.0 / 3), {"e", "f"}).probability, 1.0 / 3, 1e-12);
}

TEST(PostSelect, CertainPatternLeavesStateUnchanged) {
  const auto bell = bell_psi_minus("c", "d");
  const auto sel = post_select(bell, {"c"});
  EXPECT_NEAR(sel.probability, 1.0, 1e-15);
  EXPECT_NEAR(std::abs(inner_product(sel.conditional, bell)), 1.0, 1e-15);
}

TEST(PostSelect, ZeroProbabilityIsFlaggedNotThrown) {
  const auto sel = post_select(create_photon(vacuum(), H("b")), {"e"});
  EXPECT_TRUE(sel.empty);
  EXPECT_EQ(sel.probability, 0.0);
  EXPECT_TRUE(sel.conditional.empty());
}

TEST(PostSelect, RejectsUnnormalizedInput) {
  try {
    post_select(create_photon(vacuum(), H("b")).scaled(2.0), {"b"});
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::unnormalized_input);
  }
}

TEST(PostSelect, TwoPhotonsInOneModeAreRejected) {
  const auto s = normalize(create_photon(create_photon(vacuum(), H("e")), V("e"))).state;
  EXPECT_TRUE(post_select(s, {"e"}).empty);
}

TEST(PostSelectProperty, KeptPlusDiscardedIsOne) {
  for (int k = 0; k <= 20; ++k) {
    const double R = k / 20.0;
    const auto s = after_splitter_vertical(R);
    const CoincidencePattern pat{"e", "f"};
    double discarded = 0.0;
    for (const auto& [c, a] : s.terms())
      if (!pat.matches(c)) discarded += std::norm(a);
    EXPECT_NEAR(post_select(s, pat).probability + discarded, 1.0, 1e-10);
  }
}

TEST(PartialTrace, BellMarginalIsMaximallyMixed) {
  for (const char* side : {"c", "d"}) {
    const auto rho = partial_trace(bell_psi_minus("c", "d"), {side});
    ASSERT_EQ(rho.dimension(), 2u);
    EXPECT_NEAR(rho.element(one(H(side)), one(H(side))).real(), 0.5, 1e-15);
    EXPECT_NEAR(rho.element(one(V(side)), one(V(side))).real(), 0.5, 1e-15);
    EXPECT_NEAR(std::abs(rho.element(one(H(side)), one(V(side)))), 0.0, 1e-15);
  }
}

TEST(PartialTrace, ProductStateGivesPureFactor) {
  const auto factor = create_photon(vacuum(), "b", Jones(0.6, cplx(0, 0.8)));
  const auto rho = partial_trace(tensor(factor, bell_psi_minus("c", "d")), {"b"});
  EXPECT_NEAR(rho.trace(), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(rho.element(one(H("b")), one(V("b"))) - 0.6 * cplx(0, -0.8)), 0.0, 1e-14);
  // Pure: rho^2 = rho.
  EXPECT_LT((rho.matrix() * rho.matrix() - rho.matrix()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(PartialTrace, EveCloneAtSymmetricPoint) {
  // From the hand expansion: e holds V with weight (t^4 + (t^2 - r^2)^2) / 2P
  // and H with r^4 / 2P; at R = 1/3 these are 5/6 and 1/6, with no coherence.
  const auto sel = post_select(after_splitter_vertical(1.0 / 3), {"e", "f"});
  const auto rho = partial_trace(sel.conditional, {"e"});
  EXPECT_NEAR(rho.element(one(V("e")), one(V("e"))).real(), 5.0 / 6, 1e-12);
  EXPECT_NEAR(rho.element(one(H("e")), one(H("e"))).real(), 1.0 / 6, 1e-12);
  EXPECT_NEAR(std::abs(rho.element(one(H("e")), one(V("e")))), 0.0, 1e-12);
  EXPECT_NEAR(fidelity(rho, Jones::vertical(), "e"), 5.0 / 6, 1e-12);
}

TEST(PartialTraceProperty, TraceOneAndPositive) {
  std::mt19937_64 rng(17);
  for (int k = 0; k < 20; ++k) {
    const Matrix u = oracle::random_unitary(4, rng);
    const ModeTransform t({H("b"), V("b"), H("c"), V("c")}, {H("e"), V("e"), H("f"), V("f")}, u);
    const auto s = apply_transform(tensor(create_photon(vacuum(), "b", Jones(1.0, cplx(k, 1))),
                                          bell_psi_minus("c", "d")),
                                   t);
    for (const char* keep : {"e", "f", "d"}) {
      const auto rho = partial_trace(s, {keep});
      EXPECT_NEAR(rho.trace(), 1.0, 1e-10);
      EXPECT_LT(rho.hermiticity_residual(), 1e-10);
      EXPECT_GE(rho.min_eigenvalue(), -1e-10);
    }
  }
}

TEST(Fidelity, PureAndMixedTargets) {
  const auto pure_v = partial_trace(create_photon(vacuum(), V("b")), {"b"});
  EXPECT_NEAR(fidelity(pure_v, Jones::vertical(), "b"), 1.0, 1e-15);
  const auto mixed = partial_trace(bell_psi_minus("c", "d"), {"c"});
  for (const auto& j : {Jones::horizontal(), Jones::diagonal(), Jones::left(), Jones(0.3, cplx(0.1, -2))})
    EXPECT_NEAR(fidelity(mixed, j, "c"), 0.5, 1e-15);
}

TEST(Fidelity, RejectsWrongSubsystem) {
  const auto two = partial_trace(bell_psi_minus("c", "d"), {"c", "d"});
  try {
    fidelity(two, Jones::vertical(), "c");
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::wrong_subsystem);
  }
  const auto c_only = partial_trace(bell_psi_minus("c", "d"), {"c"});
  EXPECT_THROW(fidelity(c_only, Jones::vertical(), "d"), error);
}

TEST(FidelityProperty, GlobalPhaseInvariantAndBasisCompleteness) {
  CountingRng rng(8);
  const auto state = simulate_cloning(0.27, random_jones(rng)).selection.conditional;
  const auto rho = partial_trace(state, {"e"});
  for (int k = 0; k < 20; ++k) {
    const Jones j = random_jones(rng);
    const cplx phase = std::polar(1.0, 6.28 * rng.uniform());
    const Jones shifted(phase * j.h(), phase * j.v());
    EXPECT_NEAR(fidelity(rho, j, "e"), fidelity(rho, shifted, "e"), 1e-14);
    EXPECT_NEAR(fidelity(rho, j, "e") + fidelity(rho, j.orthogonal(), "e"), rho.trace(), 1e-10);
  }
}

TEST(Projector, BellAnticorrelation) {
  const auto bell = bell_psi_minus("a", "b");
  const auto projected = polarization_projector("a", Jones::horizontal()).apply(bell);
  EXPECT_NEAR(projected.squared_norm(), 0.5, 1e-15);
  const auto rho = partial_trace(normalize(projected).state, {"b"});
  EXPECT_NEAR(fidelity(rho, Jones::vertical(), "b"), 1.0, 1e-15);

  const auto v = create_photon(vacuum(), V("b"));
  EXPECT_NEAR(polarization_projector("b", Jones::vertical()).probability(v), 1.0, 1e-15);
  EXPECT_NEAR(polarization_projector("b", Jones::horizontal()).probability(v), 0.0, 1e-15);
}

TEST(SampleCounts, TrivialCases) {
  const std::vector<double> p1 = {1.0};
  EXPECT_EQ(sample_counts(p1, 100, 1), std::vector<std::uint64_t>{100});
  const std::vector<double> p2 = {0.2, 0.3};
  EXPECT_EQ(sample_counts(p2, 0, 1), (std::vector<std::uint64_t>{0, 0}));
}

TEST(SampleCounts, BinomialBandAndDeterminism) {
  const std::vector<double> p = {5.0 / 6, 1.0 / 6};
  const double sigma = std::sqrt(1e5 * (5.0 / 6) * (1.0 / 6));
  for (std::uint64_t seed : {1ULL, 42ULL, 20060101ULL}) {
    const auto c = sample_counts(p, 100000, seed);
    EXPECT_EQ(c[0] + c[1], 100000u);
    EXPECT_LT(std::abs(static_cast<double>(c[0]) - 1e5 * 5 / 6), 3 * sigma) << seed;
    EXPECT_EQ(c, sample_counts(p, 100000, seed));
  }
  EXPECT_NE(sample_counts(p, 1000, 1), sample_counts(p, 1000, 2));
}

TEST(SampleCounts, GeneratorSequenceIsPinned) {
  // The 10000th output of a default-seeded mt19937_64 is fixed by the C++
  // standard; the first output for seed 5489 pins the 53-bit uniform mapping.
  std::mt19937_64 ref;
  ref.discard(9999);
  EXPECT_EQ(ref(), 9981545732273789042ULL);
  CountingRng rng(5489);
  EXPECT_DOUBLE_EQ(rng.uniform(), static_cast<double>(14514284786278117030ULL >> 11) * 0x1.0p-53);
}

TEST(SampleCounts, RejectsInvalidDistributions) {
  for (const std::vector<double>& bad :
       {std::vector<double>{0.7, 0.7}, std::vector<double>{-0.1}, std::vector<double>{1.5}}) {
    try {
      sample_counts(bad, 10, 0);
      FAIL();
    } catch (const error& e) {
      EXPECT_EQ(e.code(), errc::invalid_distribution);
    }
  }
}

TEST(SplitSeed, MatchesSplitmix64Reference) {
  // First output of the reference splitmix64 generator started from state 0.
  EXPECT_EQ(split_seed(0, 0), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(split_seed(5, 3), split_seed(8, 0));
  EXPECT_NE(split_seed(5, 3), split_seed(5, 4));
}
