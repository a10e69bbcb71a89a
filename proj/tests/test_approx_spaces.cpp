#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "interp_scales/approx_spaces.hpp"

using namespace interp_scales;

namespace {

DecreasingSequence seq(std::vector<double> v) { return DecreasingSequence::from_values(std::move(v)); }

DecreasingSequence random_seq(std::mt19937_64& rng, std::size_t n) {
  std::exponential_distribution<double> d(1.0);
  std::vector<double> v(n);
  for (double& e : v) e = d(rng);
  return decreasing_rearrangement(v);
}

}  // namespace

TEST(LorentzMarcinkiewicz, Examples) {
  for (double theta : {0.1, 0.5, 2.0})
    for (double q : {0.5, 1.0, 3.0, HUGE_VAL})
      EXPECT_DOUBLE_EQ(lorentz_marcinkiewicz_norm(seq({1, 0, 0}), BoydFunction::power(theta), q), 1.0);
  EXPECT_DOUBLE_EQ(lorentz_marcinkiewicz_norm(seq({1, 1, 1}), BoydFunction::power(1.0), 1.0), 3.0);
  EXPECT_NEAR(lorentz_marcinkiewicz_norm(seq({1, 1}), BoydFunction::power(0.5), 2.0), std::sqrt(2.0), 1e-15);
  EXPECT_THROW(lorentz_marcinkiewicz_norm(seq({1}), BoydFunction::power(0.5), 0.0), InvalidParameter);
}

TEST(LorentzMarcinkiewicz, SupForm) {
  // sup_n n^(1/2) E_n over (1, 0.9, 0.1): max(1, 1.2728, 0.1732)
  EXPECT_NEAR(lorentz_marcinkiewicz_norm(seq({1, 0.9, 0.1}), BoydFunction::power(0.5), INFINITY),
              0.9 * std::sqrt(2.0), 1e-15);
}

TEST(LorentzMarcinkiewicz, ClassicalFormula) {
  std::mt19937_64 rng(21);
  for (int k = 0; k < 100; ++k) {
    const auto e = random_seq(rng, 1 + k);
    for (double pp : {0.25, 0.5, 1.5})
      for (double q : {1.0, 2.0, 3.0}) {
        long double s = 0;
        for (std::size_t n = 1; n <= e.size(); ++n) {
          const long double nd = n;
          s += std::pow(std::pow(nd, static_cast<long double>(pp)) * e.a(n), static_cast<long double>(q)) / nd;
        }
        const double direct = static_cast<double>(std::pow(s, 1.0L / q));
        EXPECT_NEAR(lorentz_marcinkiewicz_norm(e, BoydFunction::power(pp), q), direct, 1e-13 * direct);
      }
  }
}

TEST(LorentzMarcinkiewicz, PowerOneOverPIsLp) {
  std::mt19937_64 rng(22);
  for (int k = 0; k < 50; ++k) {
    const auto e = random_seq(rng, 5 + k);
    for (double p : {1.0, 2.0, 4.0})
      EXPECT_NEAR(lorentz_marcinkiewicz_norm(e, BoydFunction::power(1.0 / p), p), gp_norm(e, p),
                  1e-13 * gp_norm(e, p));
  }
}

TEST(NormIdentity, ConvexifiedEqualsPhiAlphaPLorentz) {
  std::mt19937_64 rng(23);
  for (double a : {0.25, 0.5, 0.75}) {
    const auto alpha = power_weights(a, 256);
    for (double p : {1.0, 2.0, 4.0}) {
      const auto snf = SymmetricNormingFunction::convexified(alpha, p);
      const auto phi = BoydFunction::phi_alpha_p(alpha, p);
      for (int k = 0; k < 100; ++k) {
        const auto e = random_seq(rng, 256);
        const double lhs = phi_type_norm(e, snf);
        const double rhs = lorentz_marcinkiewicz_norm(e, phi, p);
        EXPECT_NEAR(lhs, rhs, 1e-12 * lhs);
      }
    }
  }
}

TEST(PhiType, Examples) {
  EXPECT_DOUBLE_EQ(phi_type_norm(seq({3, 2, 1}), SymmetricNormingFunction::extremal_one()), 6.0);
  EXPECT_DOUBLE_EQ(phi_type_norm(seq({2.5, 0}), SymmetricNormingFunction::weighted(power_weights(0.5, 4))), 2.5);
}

TEST(GpNorm, Examples) {
  EXPECT_DOUBLE_EQ(gp_norm(seq({1, 1, 1}), 1), 3);
  EXPECT_DOUBLE_EQ(gp_norm(seq({4, 3}), 2), 5);
  EXPECT_DOUBLE_EQ(gp_norm(seq({2, 1}), INFINITY), 2);
}

TEST(AllNorms, HomogeneousAndMonotone) {
  std::mt19937_64 rng(24);
  const auto phi = BoydFunction::phi_alpha_p(power_weights(0.5, 256), 2.0);
  const auto snf = SymmetricNormingFunction::weighted(power_weights(0.5, 256));
  for (int k = 0; k < 100; ++k) {
    const auto e = random_seq(rng, 40);
    std::vector<double> bigger(e.values().begin(), e.values().end());
    for (std::size_t i = 0; i < bigger.size(); ++i) bigger[i] += 0.1 / static_cast<double>(i + 1);
    const auto f = DecreasingSequence::from_values(bigger);
    const double c = 3.7;
    for (const auto& norm : std::vector<std::function<double(const DecreasingSequence&)>>{
             [&](const DecreasingSequence& x) { return lorentz_marcinkiewicz_norm(x, phi, 2.0); },
             [&](const DecreasingSequence& x) { return lorentz_marcinkiewicz_norm(x, phi, INFINITY); },
             [&](const DecreasingSequence& x) { return phi_type_norm(x, snf); },
             [&](const DecreasingSequence& x) { return gp_norm(x, 3.0); }}) {
      EXPECT_NEAR(norm(e.scaled(c)), c * norm(e), 1e-13 * c * norm(e));
      EXPECT_LE(norm(e), norm(f));
    }
  }
}
