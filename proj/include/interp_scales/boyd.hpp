#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "interp_scales/detail/numeric.hpp"
#include "interp_scales/error.hpp"

namespace interp_scales {

// ---------------------------------------------------------------------------
// Weight sequences
// ---------------------------------------------------------------------------

/// 1 = w_1 >= w_2 >= ... >= 0, stored for n = 1..N, optionally extended past N
/// by a closed-form generator n -> w_n.
class WeightSequence {
 public:
  using Generator = std::function<double(std::size_t)>;

  WeightSequence() = default;

  static WeightSequence from_values(std::vector<double> values, Generator generator = {}) {
    if (values.empty()) throw InvalidInput("weight sequence: empty");
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double v = values[i];
      if (!std::isfinite(v) || v < 0.0) {
        throw InvalidInput("weight sequence: entry " + std::to_string(i + 1) + " not finite and >= 0");
      }
      if (i > 0 && v > values[i - 1]) {
        throw InvalidInput("weight sequence: increase at index " + std::to_string(i + 1));
      }
    }
    if (values.front() != 1.0) throw InvalidInput("weight sequence: first weight must equal 1");
    WeightSequence w;
    w.values_ = std::make_shared<const std::vector<double>>(std::move(values));
    w.generator_ = std::move(generator);
    return w;
  }

  /// Materializes n = 1..n_max from a generator; the generator stays attached.
  static WeightSequence from_generator(Generator generator, std::size_t n_max) {
    std::vector<double> v(n_max);
    for (std::size_t n = 1; n <= n_max; ++n) v[n - 1] = generator(n);
    return from_values(std::move(v), std::move(generator));
  }

  /// 1-based; past the stored length falls back to the generator.
  [[nodiscard]] double operator()(std::size_t n) const {
    if (n == 0) throw InvalidParameter("weight sequence index is 1-based");
    if (values_ && n <= values_->size()) return (*values_)[n - 1];
    if (generator_) return generator_(n);
    throw TruncationError("weight sequence: index " + std::to_string(n) + " beyond stored length " +
                          std::to_string(size()) + " and no generator");
  }

  [[nodiscard]] std::size_t size() const noexcept { return values_ ? values_->size() : 0; }
  [[nodiscard]] bool has_generator() const noexcept { return static_cast<bool>(generator_); }
  [[nodiscard]] const std::vector<double>& values() const {
    static const std::vector<double> empty;
    return values_ ? *values_ : empty;
  }
  [[nodiscard]] const Generator& generator() const noexcept { return generator_; }

  /// Same sequence materialized to `n_max` terms (requires a generator when growing).
  [[nodiscard]] WeightSequence resized(std::size_t n_max) const {
    if (n_max <= size()) {
      std::vector<double> v(values().begin(), values().begin() + static_cast<std::ptrdiff_t>(n_max));
      return from_values(std::move(v), generator_);
    }
    std::vector<double> v(n_max);
    for (std::size_t n = 1; n <= n_max; ++n) v[n - 1] = (*this)(n);
    return from_values(std::move(v), generator_);
  }

  [[nodiscard]] std::string label() const { return label_; }
  WeightSequence& with_label(std::string label) {
    label_ = std::move(label);
    return *this;
  }

 private:
  std::shared_ptr<const std::vector<double>> values_;
  Generator generator_;
  std::string label_ = "custom";
};

/// w_n = n^(-a), 0 <= a <= 1, with the generator attached.
inline WeightSequence power_weights(double a, std::size_t n_max) {
  if (!(a >= 0.0 && a <= 1.0)) {
    throw InvalidParameter("power_weights: exponent a must lie in [0,1] (got " + std::to_string(a) + ")");
  }
  if (n_max == 0) throw InvalidParameter("power_weights: N must be >= 1");
  auto gen = [a](std::size_t n) { return std::pow(static_cast<double>(n), -a); };
  std::ostringstream os;
  os << "n^-" << a;
  return WeightSequence::from_generator(gen, n_max).with_label(os.str());
}

// ---------------------------------------------------------------------------
// Class-B functions
// ---------------------------------------------------------------------------

/// A positive continuous function on (0, inf) with phi(1) = 1 and finite
/// dilation function. Immutable; copies share the expression tree.
///
/// Power exponents propagate through products, quotients, compositions with
/// powers and the reiteration constructor, so `exact_exponent()` is available
/// whenever the whole tree reduces to t^theta.
class BoydFunction {
 public:
  enum class Kind { Power, PhiAlphaP, Product, Quotient, ComposePower, Theorem12Rho };

  static BoydFunction power(double theta);
  static BoydFunction phi_alpha_p(WeightSequence alpha, double p);
  static BoydFunction product(BoydFunction lhs, BoydFunction rhs);
  static BoydFunction quotient(BoydFunction num, BoydFunction den);
  /// t -> outer(t^m).
  static BoydFunction compose_power(BoydFunction outer, double m);
  /// t -> phi0(t) / chi(phi0(t) / phi1(t)).
  static BoydFunction theorem12_rho(BoydFunction chi, BoydFunction phi0, BoydFunction phi1);

  /// Throws DomainError unless 0 < t < inf.
  [[nodiscard]] double operator()(double t) const;

  [[nodiscard]] Kind kind() const noexcept;
  /// theta when the function is identically t^theta.
  [[nodiscard]] std::optional<double> exact_exponent() const;
  /// Largest t at which evaluation is guaranteed not to run off a finite weight table.
  [[nodiscard]] double max_argument() const;
  [[nodiscard]] std::string describe() const;

 private:
  struct PowerNode;
  struct PhiAlphaPNode;
  struct ProductNode;
  struct QuotientNode;
  struct ComposePowerNode;
  struct RhoNode;
  struct Node;

  explicit BoydFunction(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  [[nodiscard]] double eval(double t) const;
  static double eval_phi_alpha_p(const PhiAlphaPNode& n, double t);

  std::shared_ptr<const Node> node_;
};

struct BoydFunction::PowerNode {
  double theta;
};
struct BoydFunction::PhiAlphaPNode {
  WeightSequence alpha;
  double p;
};
struct BoydFunction::ProductNode {
  BoydFunction lhs, rhs;
};
struct BoydFunction::QuotientNode {
  BoydFunction num, den;
};
struct BoydFunction::ComposePowerNode {
  BoydFunction outer;
  double m;
};
struct BoydFunction::RhoNode {
  BoydFunction chi, phi0, phi1;
};
struct BoydFunction::Node {
  std::variant<PowerNode, PhiAlphaPNode, ProductNode, QuotientNode, ComposePowerNode, RhoNode> v;
};

inline BoydFunction BoydFunction::power(double theta) {
  if (!std::isfinite(theta)) throw InvalidParameter("power exponent must be finite");
  return BoydFunction(std::make_shared<const Node>(Node{PowerNode{theta}}));
}

inline BoydFunction BoydFunction::phi_alpha_p(WeightSequence alpha, double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw InvalidParameter("phi_alpha_p: p must be finite and > 0");
  if (alpha.size() == 0) throw InvalidInput("phi_alpha_p: empty weight sequence");
  return BoydFunction(std::make_shared<const Node>(Node{PhiAlphaPNode{std::move(alpha), p}}));
}

inline BoydFunction BoydFunction::product(BoydFunction lhs, BoydFunction rhs) {
  return BoydFunction(std::make_shared<const Node>(Node{ProductNode{std::move(lhs), std::move(rhs)}}));
}

inline BoydFunction BoydFunction::quotient(BoydFunction num, BoydFunction den) {
  return BoydFunction(std::make_shared<const Node>(Node{QuotientNode{std::move(num), std::move(den)}}));
}

inline BoydFunction BoydFunction::compose_power(BoydFunction outer, double m) {
  if (!std::isfinite(m)) throw InvalidParameter("compose_power: exponent must be finite");
  return BoydFunction(std::make_shared<const Node>(Node{ComposePowerNode{std::move(outer), m}}));
}

inline BoydFunction BoydFunction::theorem12_rho(BoydFunction chi, BoydFunction phi0, BoydFunction phi1) {
  return BoydFunction(
      std::make_shared<const Node>(Node{RhoNode{std::move(chi), std::move(phi0), std::move(phi1)}}));
}

inline double BoydFunction::operator()(double t) const {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw DomainError("Boyd function evaluated at t = " + std::to_string(t) + " (need 0 < t < inf)");
  }
  return eval(t);
}

inline BoydFunction::Kind BoydFunction::kind() const noexcept {
  return std::visit(
      [](const auto& n) -> Kind {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, PowerNode>) return Kind::Power;
        else if constexpr (std::is_same_v<T, PhiAlphaPNode>) return Kind::PhiAlphaP;
        else if constexpr (std::is_same_v<T, ProductNode>) return Kind::Product;
        else if constexpr (std::is_same_v<T, QuotientNode>) return Kind::Quotient;
        else if constexpr (std::is_same_v<T, ComposePowerNode>) return Kind::ComposePower;
        else return Kind::Theorem12Rho;
      },
      node_->v);
}

inline std::optional<double> BoydFunction::exact_exponent() const {
  return std::visit(
      [](const auto& n) -> std::optional<double> {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, PowerNode>) {
          return n.theta;
        } else if constexpr (std::is_same_v<T, PhiAlphaPNode>) {
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, ProductNode>) {
          auto a = n.lhs.exact_exponent();
          auto b = n.rhs.exact_exponent();
          if (a && b) return *a + *b;
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, QuotientNode>) {
          auto a = n.num.exact_exponent();
          auto b = n.den.exact_exponent();
          if (a && b) return *a - *b;
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, ComposePowerNode>) {
          auto a = n.outer.exact_exponent();
          if (a) return *a * n.m;
          return std::nullopt;
        } else {
          auto c = n.chi.exact_exponent();
          auto a = n.phi0.exact_exponent();
          auto b = n.phi1.exact_exponent();
          if (a && b && c) return *a - *c * (*a - *b);
          return std::nullopt;
        }
      },
      node_->v);
}

inline double BoydFunction::max_argument() const {
  return std::visit(
      [](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, PowerNode>) {
          return detail::kInf;
        } else if constexpr (std::is_same_v<T, PhiAlphaPNode>) {
          return n.alpha.has_generator() ? detail::kInf : static_cast<double>(n.alpha.size());
        } else if constexpr (std::is_same_v<T, ProductNode>) {
          return std::min(n.lhs.max_argument(), n.rhs.max_argument());
        } else if constexpr (std::is_same_v<T, QuotientNode>) {
          return std::min(n.num.max_argument(), n.den.max_argument());
        } else if constexpr (std::is_same_v<T, ComposePowerNode>) {
          const double inner = n.outer.max_argument();
          if (std::isinf(inner) || n.m <= 0.0) return detail::kInf;
          return std::pow(inner, 1.0 / n.m);
        } else {
          return std::min(n.phi0.max_argument(), n.phi1.max_argument());
        }
      },
      node_->v);
}

inline std::string BoydFunction::describe() const {
  return std::visit(
      [](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        std::ostringstream os;
        if constexpr (std::is_same_v<T, PowerNode>) {
          os << "power:" << n.theta;
        } else if constexpr (std::is_same_v<T, PhiAlphaPNode>) {
          os << "phialphap:alpha=" << n.alpha.label() << ",p=" << n.p;
        } else if constexpr (std::is_same_v<T, ProductNode>) {
          os << "prod:" << n.lhs.describe() << "*" << n.rhs.describe();
        } else if constexpr (std::is_same_v<T, QuotientNode>) {
          os << "quot:" << n.num.describe() << "/" << n.den.describe();
        } else if constexpr (std::is_same_v<T, ComposePowerNode>) {
          os << "compose(" << n.outer.describe() << ",t^" << n.m << ")";
        } else {
          os << "rho12(" << n.chi.describe() << ";" << n.phi0.describe() << ";" << n.phi1.describe() << ")";
        }
        return os.str();
      },
      node_->v);
}

inline double BoydFunction::eval_phi_alpha_p(const PhiAlphaPNode& n, double t) {
  if (t < 1.0) return std::pow(t, 1.0 / n.p);
  const double whole = std::floor(t);
  const auto at_integer = [&](double k) {
    const auto idx = static_cast<std::size_t>(k);
    return std::pow(n.alpha(idx) * k, 1.0 / n.p);
  };
  const double frac = t - whole;
  if (frac == 0.0) return at_integer(whole);
  return (1.0 - frac) * at_integer(whole) + frac * at_integer(whole + 1.0);
}

inline double BoydFunction::eval(double t) const {
  return std::visit(
      [t](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, PowerNode>) {
          return std::pow(t, n.theta);
        } else if constexpr (std::is_same_v<T, PhiAlphaPNode>) {
          return eval_phi_alpha_p(n, t);
        } else if constexpr (std::is_same_v<T, ProductNode>) {
          return n.lhs.eval(t) * n.rhs.eval(t);
        } else if constexpr (std::is_same_v<T, QuotientNode>) {
          return n.num.eval(t) / n.den.eval(t);
        } else if constexpr (std::is_same_v<T, ComposePowerNode>) {
          const double inner = std::pow(t, n.m);
          if (!(inner > 0.0) || !std::isfinite(inner)) {
            throw DomainError("compose_power: t^m out of range at t = " + std::to_string(t));
          }
          return n.outer.eval(inner);
        } else {
          const double f0 = n.phi0.eval(t);
          const double ratio = f0 / n.phi1.eval(t);
          if (!(ratio > 0.0) || !std::isfinite(ratio)) {
            throw DomainError("rho12: phi0/phi1 out of range at t = " + std::to_string(t));
          }
          return f0 / n.chi.eval(ratio);
        }
      },
      node_->v);
}

// ---------------------------------------------------------------------------
// Dilation function and Boyd indices
// ---------------------------------------------------------------------------

struct DilationGrid {
  double lo = 1e-6;
  double hi = 1e6;
  std::size_t points = 2001;
};

struct DilationEstimate {
  double t = 1.0;
  double value = 1.0;
  double grid_lo = 0.0;
  double grid_hi = 0.0;
  std::size_t grid_points = 0;
  bool exact = false;
};

/// Estimate of sup_s phi(ts)/phi(s) over a log-uniform s-grid (closed form t^theta for pure powers).
/// The grid is clipped so that ts and s both stay within the evaluable range of phi.
inline DilationEstimate dilation(const BoydFunction& phi, double t, const DilationGrid& grid = {}) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("dilation: t must be in (0, inf)");
  DilationEstimate est;
  est.t = t;
  if (auto theta = phi.exact_exponent()) {
    est.value = std::pow(t, *theta);
    est.exact = true;
    return est;
  }
  const double cap = phi.max_argument();
  double hi = grid.hi;
  if (std::isfinite(cap)) hi = std::min(hi, cap / std::max(t, 1.0));
  if (hi <= grid.lo) throw NumericalFailure("dilation: evaluable s-range empty for t = " + std::to_string(t));
  est.grid_lo = grid.lo;
  est.grid_hi = hi;
  est.grid_points = grid.points;
  double best = 0.0;
  for (double s : detail::log_grid(grid.lo, hi, grid.points)) {
    const double num = phi(t * s);
    const double den = phi(s);
    const double r = num / den;
    if (!std::isfinite(r) || !(den > 0.0)) {
      throw NumericalFailure("dilation: overflow while probing phi(ts)/phi(s) at s = " + std::to_string(s));
    }
    best = std::max(best, r);
  }
  est.value = best;
  return est;
}

struct BoydIndices {
  double upper = 0.0;  ///< growth exponent of the dilation function at infinity
  double lower = 0.0;  ///< growth exponent at zero
  double probe_t_large = 0.0;
  double probe_t_small = 0.0;
  bool exact = false;
};

inline BoydIndices boyd_indices(const BoydFunction& phi, const DilationGrid& grid = {}, double probe_log2 = 20.0) {
  BoydIndices idx;
  idx.probe_t_large = std::exp2(probe_log2);
  idx.probe_t_small = std::exp2(-probe_log2);
  if (auto theta = phi.exact_exponent()) {
    idx.upper = idx.lower = *theta;
    idx.exact = true;
    return idx;
  }
  const auto big = dilation(phi, idx.probe_t_large, grid);
  const auto small = dilation(phi, idx.probe_t_small, grid);
  idx.upper = std::log(big.value) / std::log(idx.probe_t_large);
  idx.lower = std::log(small.value) / std::log(idx.probe_t_small);
  return idx;
}

// ---------------------------------------------------------------------------
// Weight-sequence validation
// ---------------------------------------------------------------------------

/// sup over ceil(p) <= n <= n_max of w_[n/p] / w_n.
inline double m_constant(const WeightSequence& w, double p, std::size_t n_max) {
  if (!(p > 1.0)) throw InvalidParameter("M(p) needs p > 1");
  const auto n_min = static_cast<std::size_t>(std::ceil(p));
  double sup = 0.0;
  for (std::size_t n = n_min; n <= n_max; ++n) {
    const auto k = static_cast<std::size_t>(std::floor(static_cast<double>(n) / p));
    const double num = w(std::max<std::size_t>(k, 1));
    const double den = w(n);
    if (den == 0.0) {
      if (num > 0.0) return detail::kInf;
      continue;
    }
    sup = std::max(sup, num / den);
  }
  return sup;
}

struct WeightValidationOptions {
  std::vector<double> p_grid{1.5, 2.0, 4.0};
  double decay_ratio = 0.9;          ///< property 2: w_N <= decay_ratio * w_{N/10}
  double divergence_increment = 0.5;  ///< property 3: sum_{N/2 < n <= N} w_n must exceed this
  double m_growth_limit = 1.5;        ///< property 4: M over n <= N vs n <= N/2
  double limit_slope_min = 0.05;      ///< M(1/t) t must decay at least like t^slope
};

struct MConstantProbe {
  double p = 0.0;
  double value = 0.0;       ///< sup over n <= N
  double value_half = 0.0;  ///< sup over n <= N/2
  bool finite = false;
};

struct WeightValidation {
  std::size_t n = 0;
  bool monotone_normalized = false;
  bool tends_to_zero = false;
  double decay_ratio = 0.0;
  bool divergent_sum = false;
  double tail_increment = 0.0;
  std::vector<MConstantProbe> m_probes;
  bool m_finite = false;
  // lim_{t->0} M(1/t) t = 0, probed at t = 2^-k.
  std::vector<double> limit_t;
  std::vector<double> limit_values;
  double limit_slope = 0.0;
  bool limit_condition = false;

  [[nodiscard]] bool definition_pass() const noexcept {
    return monotone_normalized && tends_to_zero && divergent_sum && m_finite;
  }
};

/// Numerical proxies for the four weight-sequence properties (monotone with
/// w_1 = 1, w_n -> 0, divergent sum, finite M(p)) plus the vanishing of M(1/t) t.
/// Uses the stored values only.
inline WeightValidation validate_weight_sequence(const WeightSequence& w, const WeightValidationOptions& opt = {}) {
  if (opt.p_grid.empty()) throw InvalidParameter("validate_weight_sequence: empty p grid");
  for (double p : opt.p_grid) {
    if (!(p > 1.0)) throw InvalidParameter("validate_weight_sequence: every p must exceed 1");
  }
  const auto& v = w.values();
  WeightValidation r;
  r.n = v.size();
  const std::size_t n = v.size();
  if (n < 20) throw InvalidParameter("validate_weight_sequence: need at least 20 stored weights");

  r.monotone_normalized = v.front() == 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    if (v[i] > v[i - 1] || v[i] < 0.0) r.monotone_normalized = false;
  }

  const double ref = v[n / 10 - 1];
  r.decay_ratio = ref > 0.0 ? v[n - 1] / ref : 0.0;
  r.tends_to_zero = r.decay_ratio <= opt.decay_ratio;

  detail::CompensatedSum inc;
  for (std::size_t i = n / 2; i < n; ++i) inc.add(v[i]);
  r.tail_increment = inc.value();
  r.divergent_sum = r.tail_increment > opt.divergence_increment;

  r.m_finite = true;
  for (double p : opt.p_grid) {
    MConstantProbe probe;
    probe.p = p;
    probe.value = m_constant(w.resized(n), p, n);
    probe.value_half = m_constant(w.resized(n), p, n / 2);
    probe.finite = std::isfinite(probe.value) && probe.value <= opt.m_growth_limit * probe.value_half;
    r.m_finite = r.m_finite && probe.finite;
    r.m_probes.push_back(probe);
  }

  // M(2^k) needs indices up to 2^(k+1).
  const auto stored = w.resized(n);
  for (int k = 1; std::exp2(k + 1) <= static_cast<double>(n); ++k) {
    const double t = std::exp2(-k);
    r.limit_t.push_back(t);
    r.limit_values.push_back(m_constant(stored, 1.0 / t, n) * t);
  }
  if (r.limit_t.size() >= 2) {
    // least-squares slope of log(M(1/t) t) against log t
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(r.limit_t.size());
    bool finite = true;
    for (std::size_t i = 0; i < r.limit_t.size(); ++i) {
      if (!std::isfinite(r.limit_values[i]) || !(r.limit_values[i] > 0.0)) finite = false;
      const double x = std::log(r.limit_t[i]);
      const double y = std::log(r.limit_values[i]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    r.limit_slope = finite ? (m * sxy - sx * sy) / (m * sxx - sx * sx) : -detail::kInf;
    r.limit_condition = finite && r.limit_slope >= opt.limit_slope_min;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Reiteration constructors
// ---------------------------------------------------------------------------

/// rho(t) = phi0(t) / chi(phi0(t)/phi1(t)).
inline BoydFunction rho_theorem12(const BoydFunction& chi, const BoydFunction& phi0, const BoydFunction& phi1) {
  return BoydFunction::theorem12_rho(chi, phi0, phi1);
}

/// Parameter for interpolating the couple (G_p0, G_p1) onto G_{phi,q}:
///   p1 = inf:  rho(t) = t / phi(t^p0)
///   p1 < inf:  rho(t) = t^(p1/(p1-p0)) / phi(t^(p0 p1/(p1-p0)))
inline BoydFunction rho_theorem13(const BoydFunction& phi, double p0, double p1) {
  if (!(p0 > 0.0) || !std::isfinite(p0)) throw InvalidParameter("rho_theorem13: need 0 < p0 < inf");
  if (!(p1 > p0)) throw InvalidParameter("rho_theorem13: need p0 < p1");
  if (detail::is_pos_inf(p1)) {
    return BoydFunction::quotient(BoydFunction::power(1.0), BoydFunction::compose_power(phi, p0));
  }
  const double lead = p1 / (p1 - p0);
  const double inner = p0 * p1 / (p1 - p0);
  return BoydFunction::quotient(BoydFunction::power(lead), BoydFunction::compose_power(phi, inner));
}

struct Theorem17Weights {
  double r = 0.0;
  WeightSequence gamma;
};

/// r = pql/(p+ql-q) and gamma_n = alpha_n^(r(1/p - 1/(pl))) beta_n^(r/(ql)).
/// gamma is materialized to min(|alpha|, |beta|) terms; the generator is kept
/// when both inputs have one.
inline Theorem17Weights gamma_theorem17(const WeightSequence& alpha, const WeightSequence& beta, double p, double q,
                                        double l) {
  if (!(p >= 1.0)) throw InvalidParameter("gamma_theorem17: relation violated: 1 <= p");
  if (!(p <= q)) throw InvalidParameter("gamma_theorem17: relation violated: p <= q");
  if (!std::isfinite(q)) throw InvalidParameter("gamma_theorem17: relation violated: q < inf");
  if (!(l > 1.0)) throw InvalidParameter("gamma_theorem17: relation violated: l > 1");
  if (!(p + q * l > q)) throw InvalidParameter("gamma_theorem17: relation violated: p + ql > q");
  const double r = p * q * l / (p + q * l - q);
  if (!(r > 1.0)) throw InvalidParameter("gamma_theorem17: relation violated: pql/(p+ql-q) > 1");

  const double ea = r * (1.0 / p - 1.0 / (p * l));
  const double eb = r / (q * l);
  const std::size_t n = std::min(alpha.size(), beta.size());
  WeightSequence::Generator gen;
  if (alpha.has_generator() && beta.has_generator()) {
    gen = [alpha, beta, ea, eb](std::size_t k) { return std::pow(alpha(k), ea) * std::pow(beta(k), eb); };
  }
  std::vector<double> g(n);
  for (std::size_t k = 1; k <= n; ++k) g[k - 1] = std::pow(alpha(k), ea) * std::pow(beta(k), eb);
  auto gamma = WeightSequence::from_values(std::move(g), std::move(gen));
  gamma.with_label("gamma(" + alpha.label() + "," + beta.label() + ")");
  return {r, std::move(gamma)};
}

}  // namespace interp_scales
