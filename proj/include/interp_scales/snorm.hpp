#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "interp_scales/boyd.hpp"
#include "interp_scales/detail/numeric.hpp"
#include "interp_scales/error.hpp"
#include "interp_scales/sequences.hpp"

namespace interp_scales {

/// Symmetric norming function on finitely supported sequences. Inputs are
/// always passed through the decreasing rearrangement first, which is how the
/// definition on k-hat extends to bounded sequences.
class SymmetricNormingFunction {
 public:
  enum class Kind { ExtremalOne, ExtremalInfinity, Weighted, Convexified };

  static SymmetricNormingFunction extremal_one() { return SymmetricNormingFunction(Kind::ExtremalOne, {}, 1.0); }
  static SymmetricNormingFunction extremal_infinity() {
    return SymmetricNormingFunction(Kind::ExtremalInfinity, {}, 1.0);
  }
  /// sum eps_n a_n.
  static SymmetricNormingFunction weighted(WeightSequence eps) {
    return SymmetricNormingFunction(Kind::Weighted, std::move(eps), 1.0);
  }
  /// (sum eps_n a_n^p)^(1/p), 1 <= p < inf.
  static SymmetricNormingFunction convexified(WeightSequence eps, double p) {
    if (!(p >= 1.0) || !std::isfinite(p)) {
      throw InvalidParameter("convexified symmetric norming function needs 1 <= p < inf (got " + std::to_string(p) +
                             ")");
    }
    return SymmetricNormingFunction(Kind::Convexified, std::move(eps), p);
  }

  [[nodiscard]] Kind kind() const noexcept { return kind_; }
  [[nodiscard]] double p() const noexcept { return p_; }
  [[nodiscard]] const WeightSequence& weights() const noexcept { return eps_; }

  /// Evaluation on an element of k-hat (already rearranged).
  [[nodiscard]] double operator()(const DecreasingSequence& a) const {
    switch (kind_) {
      case Kind::ExtremalOne:
        return lp_norm(a, 1.0);
      case Kind::ExtremalInfinity:
        return a.empty() ? 0.0 : a.a(1);
      case Kind::Weighted: {
        detail::CompensatedSum acc;
        for (std::size_t n = 1; n <= a.size() && a.a(n) > 0.0; ++n) acc.add(eps_(n) * a.a(n));
        return acc.value();
      }
      case Kind::Convexified: {
        if (a.is_zero()) return 0.0;
        detail::CompensatedSum acc;
        for (std::size_t n = 1; n <= a.size() && a.a(n) > 0.0; ++n) {
          acc.add(p_ == 1.0 ? eps_(n) * a.a(n) : eps_(n) * std::pow(a.a(n), p_));
        }
        return p_ == 1.0 ? acc.value() : std::pow(acc.value(), 1.0 / p_);
      }
    }
    return 0.0;
  }

  [[nodiscard]] std::string describe() const {
    switch (kind_) {
      case Kind::ExtremalOne:
        return "phi1";
      case Kind::ExtremalInfinity:
        return "phiinf";
      case Kind::Weighted:
        return "eps:" + eps_.label();
      case Kind::Convexified:
        return "eps:" + eps_.label() + ",p=" + std::to_string(p_);
    }
    return {};
  }

 private:
  SymmetricNormingFunction(Kind kind, WeightSequence eps, double p) : kind_(kind), eps_(std::move(eps)), p_(p) {}

  Kind kind_;
  WeightSequence eps_;
  double p_;
};

/// Phi(a(x)) for an arbitrary finite sequence.
inline double apply(const SymmetricNormingFunction& phi, std::span<const double> x) {
  return phi(decreasing_rearrangement(x));
}

// ---------------------------------------------------------------------------
// Axiom checks
// ---------------------------------------------------------------------------

namespace detail {

/// Random element of k-hat: sorted uniforms with a random zero tail.
inline DecreasingSequence random_khat(std::mt19937_64& rng, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len_dist(1, max_len);
  std::uniform_real_distribution<double> val(0.0, 1.0);
  const std::size_t len = len_dist(rng);
  const std::size_t support = std::uniform_int_distribution<std::size_t>(1, len)(rng);
  std::vector<double> v(len, 0.0);
  for (std::size_t i = 0; i < support; ++i) v[i] = val(rng);
  std::sort(v.begin(), v.end(), std::greater<>());
  if (v.front() == 0.0) v.front() = 1.0;
  return DecreasingSequence::from_values(std::move(v));
}

/// x with sum_{n<=m} x_n <= sum_{n<=m} y_n for all m, built by averaging
/// random blocks of y (pushing mass to later coordinates) and shrinking.
inline DecreasingSequence dominated_by(const DecreasingSequence& y, std::mt19937_64& rng, std::size_t extra_len) {
  std::vector<double> v(y.values().begin(), y.values().end());
  v.resize(v.size() + extra_len, 0.0);
  std::uniform_int_distribution<int> rounds_dist(1, 3);
  const int rounds = rounds_dist(rng);
  for (int r = 0; r < rounds; ++r) {
    std::uniform_int_distribution<std::size_t> idx(0, v.size() - 1);
    std::size_t i = idx(rng);
    std::size_t j = idx(rng);
    if (i > j) std::swap(i, j);
    double sum = 0.0;
    for (std::size_t k = i; k <= j; ++k) sum += v[k];
    const double avg = sum / static_cast<double>(j - i + 1);
    for (std::size_t k = i; k <= j; ++k) v[k] = avg;
    // Averaging a block of a non-increasing vector can leave rounding-level
    // inversions at the block edges; clamp them away (this only lowers x).
    for (std::size_t k = 1; k < v.size(); ++k) v[k] = std::min(v[k], v[k - 1]);
  }
  const double shrink = std::uniform_real_distribution<double>(0.5, 1.0)(rng);
  for (double& e : v) e *= shrink;
  return DecreasingSequence::from_values(std::move(v));
}

}  // namespace detail

struct SnormAxiomReport {
  std::size_t samples = 0;
  bool positivity = true;
  bool homogeneity = true;
  bool triangle = true;
  bool normalization = true;
  bool majorization = true;
  bool triangle_required = true;
  std::vector<std::string> counterexamples;

  [[nodiscard]] bool pass() const noexcept {
    return positivity && homogeneity && normalization && majorization && (triangle || !triangle_required);
  }
};

struct SnormCheckOptions {
  std::size_t max_len = 48;
  double rel_tol = 1e-12;
  bool triangle_required = true;
};

/// Checks the five axioms of a symmetric norming function on pseudo-random
/// samples. `phi` is any callable on DecreasingSequence, so corrupted
/// candidates can be fed in as negative controls.
template <class Functional>
SnormAxiomReport check_snorm_axioms(const Functional& phi, std::size_t sample_count, std::uint64_t seed,
                                    const SnormCheckOptions& opt = {}) {
  if (sample_count < 1) throw InvalidParameter("check_snorm_axioms: sample_count must be >= 1");
  SnormAxiomReport rep;
  rep.samples = sample_count;
  rep.triangle_required = opt.triangle_required;
  std::mt19937_64 rng(seed);
  const auto note = [&rep](const std::string& what, std::size_t i) {
    if (rep.counterexamples.size() < 16) rep.counterexamples.push_back(what + " (sample " + std::to_string(i) + ")");
  };
  const auto leq = [&opt](double a, double b) { return a <= b + opt.rel_tol * std::max(std::abs(a), std::abs(b)); };

  const double unit = phi(DecreasingSequence::from_values({1.0}));
  const double unit_padded = phi(DecreasingSequence::from_values({1.0, 0.0, 0.0, 0.0}));
  if (std::abs(unit - 1.0) > 1e-15 || std::abs(unit_padded - 1.0) > 1e-15) {
    rep.normalization = false;
    note("Phi(1,0,...) != 1", 0);
  }

  for (std::size_t i = 0; i < sample_count; ++i) {
    const auto x = detail::random_khat(rng, opt.max_len);
    const auto y = detail::random_khat(rng, opt.max_len);
    const double fx = phi(x);
    const double fy = phi(y);

    if (!(fx > 0.0)) {
      rep.positivity = false;
      note("Phi(x) <= 0 for non-zero x", i);
    }

    const double c = std::uniform_real_distribution<double>(0.1, 10.0)(rng);
    const double fcx = phi(x.scaled(c));
    if (std::abs(fcx - c * fx) > opt.rel_tol * c * fx) {
      rep.homogeneity = false;
      note("Phi(cx) != c Phi(x)", i);
    }

    std::vector<double> sum(std::max(x.size(), y.size()), 0.0);
    for (std::size_t n = 1; n <= sum.size(); ++n) sum[n - 1] = x.a(n) + y.a(n);
    const double fsum = phi(decreasing_rearrangement(sum));
    if (!leq(fsum, fx + fy)) {
      rep.triangle = false;
      note("Phi(x+y) > Phi(x)+Phi(y)", i);
    }

    const auto dominated = detail::dominated_by(y, rng, opt.max_len / 4);
    if (!leq(phi(dominated), fy)) {
      rep.majorization = false;
      note("partial sums of x below those of y but Phi(x) > Phi(y)", i);
    }
  }
  return rep;
}

inline SnormAxiomReport check_snorm_axioms(const SymmetricNormingFunction& phi, std::size_t sample_count,
                                           std::uint64_t seed) {
  SnormCheckOptions opt;
  // A convexified function with p > 1 is only claimed to be symmetric, so the
  // triangle inequality is reported without being required.
  opt.triangle_required = !(phi.kind() == SymmetricNormingFunction::Kind::Convexified && phi.p() > 1.0);
  if (phi.weights().size() > 0 && !phi.weights().has_generator()) {
    opt.max_len = std::min<std::size_t>(opt.max_len * 4 / 5, phi.weights().size() * 4 / 5);
    opt.max_len = std::max<std::size_t>(opt.max_len, 1);
  }
  return check_snorm_axioms([&phi](const DecreasingSequence& a) { return phi(a); }, sample_count, seed, opt);
}

struct SandwichReport {
  std::size_t samples = 0;
  std::size_t violations = 0;
  bool pass = true;
};

/// Phi_inf(x) <= Phi(x) <= Phi_1(x) on every sample.
inline SandwichReport check_sandwich(const SymmetricNormingFunction& phi, std::span<const DecreasingSequence> samples,
                                     double slack = 1e-12) {
  SandwichReport rep;
  rep.samples = samples.size();
  for (const auto& x : samples) {
    const double lo = x.empty() ? 0.0 : x.a(1);
    const double hi = lp_norm(x, 1.0);
    const double v = phi(x);
    if (v < lo - slack * std::abs(lo) || v > hi + slack * std::abs(hi)) ++rep.violations;
  }
  rep.pass = rep.violations == 0;
  return rep;
}

}  // namespace interp_scales
