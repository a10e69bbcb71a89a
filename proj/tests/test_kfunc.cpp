#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "interp_scales/kfunc.hpp"

using namespace interp_scales;

namespace {

DecreasingSequence seq(std::vector<double> v) { return DecreasingSequence::from_values(std::move(v)); }

SequenceCouple couple(double p0, double p1) { return {SequenceSpaceDescriptor::lp(p0), SequenceSpaceDescriptor::lp(p1)}; }

DecreasingSequence random_seq(std::mt19937_64& rng, std::size_t n) {
  std::exponential_distribution<double> d(1.0);
  std::vector<double> v(n);
  for (double& e : v) e = d(rng);
  return decreasing_rearrangement(v);
}

// K(t) for (l1, l_inf) as inf over the clipping level lambda of
// sum (x - lambda)_+ + t lambda; the infimum sits at a breakpoint.
double k_l1_linf_by_levels(double t, const DecreasingSequence& x) {
  std::vector<double> levels(x.values().begin(), x.values().end());
  levels.push_back(0.0);
  double best = INFINITY;
  for (double lambda : levels) {
    double s = t * lambda;
    for (double v : x.values()) s += std::max(v - lambda, 0.0);
    best = std::min(best, s);
  }
  return best;
}

}  // namespace

TEST(KExact, Examples) {
  const auto e1 = seq({1, 0, 0});
  EXPECT_DOUBLE_EQ(k_exact_l1_linf(0.5, e1), 0.5);
  EXPECT_DOUBLE_EQ(k_exact_l1_linf(3.0, e1), 1.0);
  EXPECT_DOUBLE_EQ(k_exact_l1_linf(1.5, seq({2, 1})), 2.5);
  EXPECT_DOUBLE_EQ(k_exact_l1_linf(1e9, seq({2, 1, 0.5})), 3.5);
  EXPECT_THROW(k_exact_l1_linf(0.0, e1), InvalidParameter);
}

TEST(KExact, MatchesLevelOracle) {
  std::mt19937_64 rng(31);
  for (int k = 0; k < 100; ++k) {
    const auto x = random_seq(rng, 1 + k % 50);
    for (double t : {0.01, 0.7, 1.0, 2.5, 13.0, 1000.0}) {
      const double o = k_l1_linf_by_levels(t, x);
      EXPECT_NEAR(k_exact_l1_linf(t, x), o, 1e-12 * std::max(o, 1e-300));
    }
  }
}

TEST(KConvex, AgreesWithExactOnL1Linf) {
  std::mt19937_64 rng(32);
  const auto c = couple(1, INFINITY);
  for (int k = 0; k < 40; ++k) {
    const auto x = random_seq(rng, 32);
    for (int j = 0; j < 20; ++j) {
      const double t = std::exp2(-10.0 + 20.0 * j / 19.0);
      const double a = k_exact_l1_linf(t, x);
      const double b = k_convex(t, x, c);
      EXPECT_LE(std::abs(a - b) / std::max(a, b), 1e-8) << "t=" << t;
    }
  }
}

TEST(KConvex, AgreesWithWaterFillingOnL1L2) {
  // For (l1, l2) the optimal l2 part at fixed l2 norm is min(x, c), so K is a
  // one-dimensional minimum over c; on each interval between entries of x the
  // objective is convex and golden section finds it.
  auto oracle = [](double t, const DecreasingSequence& x) {
    const auto& v = x.values();
    const std::size_t n = v.size();
    double best = INFINITY;
    for (std::size_t k = 0; k <= n; ++k) {
      const double hi = k == 0 ? v[0] * 2 : v[k - 1];
      const double lo = k == n ? 0.0 : v[k];
      double tail2 = 0.0, head = 0.0;
      for (std::size_t i = k; i < n; ++i) tail2 += v[i] * v[i];
      for (std::size_t i = 0; i < k; ++i) head += v[i];
      auto f = [&](double c) { return head - static_cast<double>(k) * c + t * std::sqrt(tail2 + k * c * c); };
      double a = lo, b = std::min(hi, v[0]);
      if (b < a) continue;
      const double g = (std::sqrt(5.0) - 1) / 2;
      for (int it = 0; it < 200; ++it) {
        const double c1 = b - g * (b - a), c2 = a + g * (b - a);
        if (f(c1) < f(c2)) b = c2;
        else a = c1;
      }
      best = std::min({best, f(a), f(b), f(lo)});
    }
    return best;
  };
  std::mt19937_64 rng(42);
  for (int k = 0; k < 20; ++k) {
    const auto x = random_seq(rng, 48);
    for (double t : {0.3, 1.0, 2.0, 5.0, 40.0}) {
      const double o = oracle(t, x);
      EXPECT_LE(std::abs(k_convex(t, x, couple(1, 2)) - o) / o, 1e-8) << "t=" << t;
    }
  }
}

TEST(KConvex, TrivialCases) {
  const auto c = couple(1, 2);
  EXPECT_EQ(k_convex(1.0, seq({0, 0}), c), 0.0);
  std::mt19937_64 rng(33);
  const auto x = random_seq(rng, 20);
  for (double t : {0.1, 1.0, 10.0}) {
    EXPECT_NEAR(k_convex(t, x.scaled(3.0), c), 3.0 * k_convex(t, x, c), 1e-9 * k_convex(t, x, c));
  }
  EXPECT_THROW(k_convex(1.0, x, couple(0.5, 2)), UnsupportedParameters);
  const SequenceCouple quasi{SequenceSpaceDescriptor::lorentz(BoydFunction::power(0.5), 0.5),
                             SequenceSpaceDescriptor::lp(1)};
  EXPECT_THROW(k_convex(1.0, x, quasi), UnsupportedParameters);
}

TEST(KConvex, ConvergenceCanBeRequired) {
  std::mt19937_64 rng(34);
  const auto x = random_seq(rng, 40);
  KConvexOptions strict;
  strict.require_convergence = true;
  EXPECT_NO_THROW((void)k_convex(0.9, x, couple(2, 4), strict));

  KConvexOptions loose;
  loose.iterations = 8;
  loose.convergence_rel_tol = 0.0;
  for (double t : {0.05, 0.3, 0.9, 3.0, 20.0}) {
    const auto r = k_convex_detailed(t, x, couple(2, 4), loose);
    auto forced = loose;
    forced.require_convergence = true;
    if (r.converged) {
      EXPECT_NO_THROW((void)k_convex(t, x, couple(2, 4), forced));
    } else {
      try {
        (void)k_convex(t, x, couple(2, 4), forced);
        FAIL() << "expected NumericalFailure";
      } catch (const NumericalFailure& e) {
        EXPECT_NE(std::string(e.what()).find("best so far"), std::string::npos);
      }
    }
  }
}

TEST(KTruncation, Examples) {
  const auto c = couple(1, INFINITY);
  EXPECT_DOUBLE_EQ(k_truncation(0.5, seq({1, 0, 0}), c), 0.5);
  EXPECT_DOUBLE_EQ(k_truncation(3.0, seq({1, 0, 0}), c), 1.0);
  EXPECT_DOUBLE_EQ(k_truncation(1.5, seq({2, 1}), c), 3.0);
  EXPECT_DOUBLE_EQ(k_truncation(1.5, seq({2, 1}), c) / k_exact_l1_linf(1.5, seq({2, 1})), 1.2);
}

TEST(KTruncation, MatchesDirectEnumeration) {
  std::mt19937_64 rng(35);
  const std::vector<SequenceCouple> couples{
      couple(1, INFINITY), couple(1, 2), couple(2, 4),
      {SequenceSpaceDescriptor::lorentz(BoydFunction::power(0.6), 2), SequenceSpaceDescriptor::lorentz(BoydFunction::power(0.2), 2)},
      {SequenceSpaceDescriptor::phi_type(SymmetricNormingFunction::convexified(power_weights(0.5, 64), 2)),
       SequenceSpaceDescriptor::phi_type(SymmetricNormingFunction::weighted(power_weights(0.75, 64)))}};
  for (const auto& c : couples) {
    for (int k = 0; k < 10; ++k) {
      const auto x = random_seq(rng, 30);
      for (double t : {0.05, 1.0, 7.0}) {
        double best = INFINITY;
        for (std::size_t m = 0; m <= x.size(); ++m) {
          std::vector<double> head(x.values().begin(), x.values().begin() + static_cast<std::ptrdiff_t>(m));
          std::vector<double> tail(x.values().begin() + static_cast<std::ptrdiff_t>(m), x.values().end());
          const double h = head.empty() ? 0.0 : c.e0.norm(DecreasingSequence::from_values(head));
          const double tl = tail.empty() ? 0.0 : c.e1.norm(DecreasingSequence::from_values(tail));
          best = std::min(best, h + t * tl);
        }
        EXPECT_NEAR(k_truncation(t, x, c), best, 1e-12 * best) << c.describe();
      }
    }
  }
}

TEST(KTruncation, BoundsConvexFromAbove) {
  std::mt19937_64 rng(36);
  for (const auto& c : {couple(1, INFINITY), couple(1, 2), couple(2, 4)}) {
    for (int k = 0; k < 10; ++k) {
      const auto x = random_seq(rng, 24);
      for (double t : {0.01, 0.3, 1.0, 4.0, 100.0}) {
        const double kt = k_truncation(t, x, c);
        const double kc = k_convex(t, x, c);
        EXPECT_LE(kc, kt * (1 + 1e-15));
        EXPECT_LE(kt / kc, 4.0);
      }
    }
  }
}

TEST(KCurveTest, MonotoneConcaveUnderEnvelope) {
  std::mt19937_64 rng(37);
  for (const auto& c : {couple(1, INFINITY), couple(1, 2), couple(2, 4)}) {
    const auto x = random_seq(rng, 50);
    for (auto method : {KMethod::Truncation, KMethod::Convex}) {
      const auto curve = k_curve(x, c, method, 1e-3, 1e3, 25);
      const auto chk = check_k_curve(curve, c.e0.norm(x), c.e1.norm(x));
      EXPECT_TRUE(chk.monotone) << c.describe();
      EXPECT_TRUE(chk.envelope) << c.describe();
      if (method == KMethod::Convex) EXPECT_TRUE(chk.concave) << c.describe();
    }
  }
  const auto x = random_seq(rng, 50);
  const auto exact = k_curve(x, couple(1, INFINITY), KMethod::Exact, 1e-3, 1e3, 40);
  EXPECT_TRUE(check_k_curve(exact, lp_norm(x, 1), lp_norm(x, INFINITY)).pass());
  EXPECT_THROW(k_curve(x, couple(1, 2), KMethod::Exact, 1e-3, 1e3, 5), UnsupportedParameters);
}

TEST(KCurveTest, CheckerFlagsNonConcave) {
  KCurve c;
  c.t = {1, 2, 3};
  c.k = {1, 1.2, 2};
  EXPECT_FALSE(check_k_curve(c, 10, 10).concave);
  c.k = {1, 0.5, 0.6};
  EXPECT_FALSE(check_k_curve(c, 10, 10).monotone);
  c.k = {1, 2, 3};
  EXPECT_FALSE(check_k_curve(c, 2.5, 10).envelope);
}

TEST(InterpolationNorm, ClosedFormForUnitVector) {
  const auto x = seq({1, 0, 0, 0});
  for (double theta : {0.25, 0.5, 0.75})
    for (double q : {1.0, 2.0}) {
      const double expect = std::pow(1 / ((1 - theta) * q) + 1 / (theta * q), 1 / q);
      for (auto m : {KMethod::Exact, KMethod::Truncation}) {
        const auto r = interpolation_norm(x, couple(1, INFINITY), BoydFunction::power(theta), q, m);
        EXPECT_NEAR(r.value, expect, 1e-6 * expect);
        EXPECT_LT(r.tail_bound, 1e-6);
        EXPECT_EQ(r.panels, 4096u);
      }
    }
  const auto r = interpolation_norm(x, couple(1, INFINITY), BoydFunction::power(0.5), INFINITY);
  EXPECT_NEAR(r.value, 1.0, 1e-12);  // sup of t^(-1/2) min(t, 1)
}

TEST(InterpolationNorm, ZeroAndHomogeneity) {
  const auto c = couple(1, INFINITY);
  const auto phi = BoydFunction::power(0.4);
  EXPECT_EQ(interpolation_norm(seq({0, 0}), c, phi, 2).value, 0.0);
  std::mt19937_64 rng(38);
  const InterpolationIntegrator integ(phi, 2.0);
  for (int k = 0; k < 10; ++k) {
    const auto x = random_seq(rng, 64);
    EXPECT_NEAR(integ(x.scaled(5.0), c).value, 5.0 * integ(x, c).value, 1e-12 * 5.0 * integ(x, c).value);
  }
}

TEST(InterpolationNorm, FlatVectorsWithinDeclaredBound) {
  const auto phi = BoydFunction::power(0.5);
  const InterpolationIntegrator integ(phi, 2.0);
  const auto c = couple(1, INFINITY);
  // K(t) = min(t, n) for n ones, so the norm is exactly sqrt(2n).
  for (std::size_t n : {16, 64, 100}) {
    const auto r = integ(DecreasingSequence::from_values(std::vector<double>(n, 1.0)), c, KMethod::Exact);
    const double expect = std::sqrt(2.0 * static_cast<double>(n));
    EXPECT_LE(std::abs(r.value - expect) / expect, r.tail_bound + 1e-12) << n;
    EXPECT_LT(r.tail_bound, 1e-4);
  }
}

TEST(InterpolationNorm, RefinementWithinDeclaredBound) {
  std::mt19937_64 rng(39);
  const auto c = couple(1, 2);
  const auto phi = BoydFunction::power(0.4);
  for (int k = 0; k < 5; ++k) {
    const auto x = random_seq(rng, 64);
    const auto base = interpolation_norm(x, c, phi, 2.0);
    QuadratureOptions wide;
    wide.half_window_log2 = 40;
    wide.panels = 4096 * 4 / 3;
    wide.panels += wide.panels % 2;
    const auto widened = interpolation_norm(x, c, phi, 2.0, KMethod::Truncation, wide);
    EXPECT_LE(std::abs(widened.value - base.value) / base.value, base.tail_bound + 1e-10);
    QuadratureOptions fine;
    fine.panels = 8192;
    const auto refined = interpolation_norm(x, c, phi, 2.0, KMethod::Truncation, fine);
    EXPECT_LE(std::abs(refined.value - base.value) / base.value, base.tail_bound + 1e-10);
  }
}

TEST(InterpolationNorm, IndicesOutsideUnitIntervalDiverge) {
  const auto x = seq({1, 0.5});
  try {
    (void)interpolation_norm(x, couple(1, INFINITY), BoydFunction::power(1.2), 2.0);
    FAIL();
  } catch (const DivergentTail& e) {
    EXPECT_NE(std::string(e.what()).find("tail bound"), std::string::npos);
  }
  const InterpolationIntegrator integ(BoydFunction::power(-0.1), 2.0);
  EXPECT_THROW((void)integ(x, couple(1, INFINITY)), DivergentTail);
}

TEST(InterpolationNorm, WarnsOnIndices) {
  QuadratureOptions o;
  const InterpolationIntegrator ok(BoydFunction::power(0.5), 2.0, o);
  EXPECT_TRUE(ok(seq({1}), couple(1, INFINITY)).warnings.empty());
  const InterpolationIntegrator bad(BoydFunction::power(1.0), 2.0, o);
  EXPECT_EQ(bad(seq({0}), couple(1, INFINITY)).warnings.size(), 1u);
}

TEST(SumIntersection, Examples) {
  const auto c = couple(1, INFINITY);
  EXPECT_DOUBLE_EQ(sum_norm(seq({1, 0}), c), 1.0);
  EXPECT_DOUBLE_EQ(intersection_norm(seq({1, 0}), c), 1.0);
  EXPECT_EQ(sum_norm(seq({0, 0}), c), 0.0);
  EXPECT_EQ(intersection_norm(seq({0, 0}), c), 0.0);
  std::mt19937_64 rng(40);
  for (const auto& cc : {couple(1, INFINITY), couple(1, 2), couple(2, 4)}) {
    for (int k = 0; k < 20; ++k) {
      const auto x = random_seq(rng, 30);
      EXPECT_LE(sum_norm(x, cc), 2.0 * intersection_norm(x, cc));
      EXPECT_LE(sum_norm(x, cc), std::min(cc.e0.norm(x), cc.e1.norm(x)) * (1 + 1e-12));
    }
  }
}

TEST(Descriptors, WeightFormMatchesNorms) {
  std::mt19937_64 rng(41);
  const std::vector<SequenceSpaceDescriptor> ds{
      SequenceSpaceDescriptor::lp(1), SequenceSpaceDescriptor::lp(3), SequenceSpaceDescriptor::lp(INFINITY),
      SequenceSpaceDescriptor::lorentz(BoydFunction::power(0.3), 1.5),
      SequenceSpaceDescriptor::lorentz(BoydFunction::power(0.3), INFINITY),
      SequenceSpaceDescriptor::phi_type(SymmetricNormingFunction::extremal_one()),
      SequenceSpaceDescriptor::phi_type(SymmetricNormingFunction::extremal_infinity()),
      SequenceSpaceDescriptor::phi_type(SymmetricNormingFunction::weighted(power_weights(0.5, 64))),
      SequenceSpaceDescriptor::phi_type(SymmetricNormingFunction::convexified(power_weights(0.5, 64), 2))};
  for (const auto& d : ds) {
    for (int k = 0; k < 20; ++k) {
      const auto x = random_seq(rng, 40);
      const auto w = d.weights(x.size());
      const double a = detail::weighted_norm_sorted(w, x.values());
      EXPECT_NEAR(a, d.norm(x), 1e-13 * d.norm(x)) << d.describe();
    }
  }
  EXPECT_THROW(SequenceSpaceDescriptor::lp(0), InvalidParameter);
}
