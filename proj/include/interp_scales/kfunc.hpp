#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "interp_scales/approx_spaces.hpp"
#include "interp_scales/boyd.hpp"
#include "interp_scales/detail/numeric.hpp"
#include "interp_scales/error.hpp"
#include "interp_scales/sequences.hpp"
#include "interp_scales/snorm.hpp"

namespace interp_scales {

// ---------------------------------------------------------------------------
// Couples
// ---------------------------------------------------------------------------

struct LpDescriptor {
  double p = 1.0;
};

/// Rearrangement-invariant quasi-norm written as (sum_n w_n (y*_n)^q)^(1/q),
/// or sup_n w_n y*_n when `sup_form` is set. Every descriptor in scope has
/// this shape, which is what the K solvers work with.
struct RearrangementWeights {
  bool sup_form = false;
  bool uniform = false;  ///< all weights equal to 1, so ordering is irrelevant
  double q = 1.0;
  std::vector<double> w;  ///< w[n-1]
};

namespace detail {

inline double powi(double v, double e) {
  if (e == 1.0) return v;
  if (e == 2.0) return v * v;
  if (e == 3.0) return v * v * v;
  if (e == 4.0) {
    const double s = v * v;
    return s * s;
  }
  if (e == 0.0) return 1.0;
  return std::pow(v, e);
}

/// Norm of an already non-increasing vector `y` (length <= w.size()).
inline double weighted_norm_sorted(const RearrangementWeights& rw, std::span<const double> y) {
  if (rw.sup_form) {
    double s = 0.0;
    for (std::size_t n = 0; n < y.size(); ++n) s = std::max(s, rw.w[n] * y[n]);
    return s;
  }
  CompensatedSum acc;
  for (std::size_t n = 0; n < y.size(); ++n) {
    if (y[n] == 0.0) continue;
    acc.add(rw.w[n] * powi(y[n], rw.q));
  }
  const double s = acc.value();
  return rw.q == 1.0 ? s : std::pow(s, 1.0 / rw.q);
}

}  // namespace detail

/// One side of an interpolation couple.
class SequenceSpaceDescriptor {
 public:
  static SequenceSpaceDescriptor lp(double p) {
    if (!(p > 0.0)) throw InvalidParameter("l_p descriptor: p must be > 0");
    return SequenceSpaceDescriptor(LpDescriptor{p});
  }
  static SequenceSpaceDescriptor lorentz(BoydFunction phi, double q) {
    if (!(q > 0.0)) throw InvalidParameter("Lorentz–Marcinkiewicz descriptor: q must be > 0");
    return SequenceSpaceDescriptor(LorentzMarcinkiewiczDescriptor{std::move(phi), q});
  }
  static SequenceSpaceDescriptor phi_type(SymmetricNormingFunction phi) {
    return SequenceSpaceDescriptor(PhiTypeDescriptor{std::move(phi)});
  }

  [[nodiscard]] double norm(const DecreasingSequence& x) const {
    return std::visit(
        [&x](const auto& d) -> double {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, LpDescriptor>) return lp_norm(x, d.p);
          else if constexpr (std::is_same_v<T, LorentzMarcinkiewiczDescriptor>)
            return lorentz_marcinkiewicz_norm(x, d.phi, d.q);
          else return phi_type_norm(x, d.phi);
        },
        v_);
  }

  /// Whether the functional is convex on non-negative vectors as far as the
  /// splitting solver is concerned (l_p with p >= 1, Lorentz–Marcinkiewicz
  /// with q >= 1, any Phi-type).
  [[nodiscard]] bool convex_regime() const {
    return std::visit(
        [](const auto& d) -> bool {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, LpDescriptor>) return d.p >= 1.0;
          else if constexpr (std::is_same_v<T, LorentzMarcinkiewiczDescriptor>) return d.q >= 1.0;
          else return true;
        },
        v_);
  }

  [[nodiscard]] std::optional<double> lp_exponent() const {
    if (const auto* d = std::get_if<LpDescriptor>(&v_)) return d->p;
    return std::nullopt;
  }

  [[nodiscard]] RearrangementWeights weights(std::size_t n) const {
    RearrangementWeights rw;
    std::visit(
        [&rw, n](const auto& d) {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, LpDescriptor>) {
            rw.sup_form = detail::is_pos_inf(d.p);
            rw.uniform = true;
            rw.q = d.p;
            rw.w.assign(n, 1.0);
          } else if constexpr (std::is_same_v<T, LorentzMarcinkiewiczDescriptor>) {
            rw.sup_form = detail::is_pos_inf(d.q);
            rw.q = d.q;
            rw.w.resize(n);
            for (std::size_t k = 1; k <= n; ++k) {
              const double kd = static_cast<double>(k);
              const double f = d.phi(kd);
              rw.w[k - 1] = rw.sup_form ? f : std::pow(f, d.q) / kd;
            }
          } else {
            using K = SymmetricNormingFunction::Kind;
            const auto& phi = d.phi;
            switch (phi.kind()) {
              case K::ExtremalOne:
                rw.q = 1.0;
                rw.uniform = true;
                rw.w.assign(n, 1.0);
                break;
              case K::ExtremalInfinity:
                rw.sup_form = true;
                rw.uniform = true;
                rw.w.assign(n, 1.0);
                break;
              case K::Weighted:
              case K::Convexified:
                rw.q = phi.kind() == K::Weighted ? 1.0 : phi.p();
                rw.w.resize(n);
                for (std::size_t k = 1; k <= n; ++k) rw.w[k - 1] = phi.weights()(k);
                break;
            }
          }
        },
        v_);
    return rw;
  }

  [[nodiscard]] std::string describe() const {
    return std::visit(
        [](const auto& d) -> std::string {
          using T = std::decay_t<decltype(d)>;
          std::ostringstream os;
          if constexpr (std::is_same_v<T, LpDescriptor>) {
            os << "l_" << d.p;
          } else if constexpr (std::is_same_v<T, LorentzMarcinkiewiczDescriptor>) {
            os << "lm(" << d.phi.describe() << ",q=" << d.q << ")";
          } else {
            os << "phi(" << d.phi.describe() << ")";
          }
          return os.str();
        },
        v_);
  }

 private:
  using Variant = std::variant<LpDescriptor, LorentzMarcinkiewiczDescriptor, PhiTypeDescriptor>;
  explicit SequenceSpaceDescriptor(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

struct SequenceCouple {
  SequenceSpaceDescriptor e0;
  SequenceSpaceDescriptor e1;

  [[nodiscard]] bool is_l1_linf() const {
    const auto p0 = e0.lp_exponent();
    const auto p1 = e1.lp_exponent();
    return p0 && p1 && *p0 == 1.0 && detail::is_pos_inf(*p1);
  }
  [[nodiscard]] std::string describe() const { return "(" + e0.describe() + ", " + e1.describe() + ")"; }
};

// ---------------------------------------------------------------------------
// K-functional
// ---------------------------------------------------------------------------

/// Closed form for the couple (l_1, l_inf): sum of the floor(t) largest terms
/// plus the fractional share of the next one.
inline double k_exact_l1_linf(double t, const DecreasingSequence& x) {
  if (!(t > 0.0)) throw InvalidParameter("K-functional needs t > 0");
  const double whole = std::floor(t);
  const double n = static_cast<double>(x.size());
  detail::CompensatedSum acc;
  const std::size_t head = whole >= n ? x.size() : static_cast<std::size_t>(whole);
  for (std::size_t k = 1; k <= head; ++k) acc.add(x.a(k));
  if (whole < n) acc.add((t - whole) * x.a(head + 1));
  return acc.value();
}

/// Head/tail norms of every truncation split of `x`: head(m) = |x 1_{n<=m}|_E0
/// and tail(m) = |x 1_{n>m}|_E1, m = 0..N. K(t) is then bracketed by
/// min_m head(m) + t tail(m).
class TruncationK {
 public:
  TruncationK(const DecreasingSequence& x, const SequenceCouple& couple) {
    const std::size_t n = x.size();
    head_.assign(n + 1, 0.0);
    tail_.assign(n + 1, 0.0);
    const auto w0 = couple.e0.weights(n);
    const auto w1 = couple.e1.weights(n);
    const auto xs = x.values();

    // head(m): prefix of a non-increasing vector keeps its ordering.
    if (w0.sup_form) {
      double s = 0.0;
      for (std::size_t m = 1; m <= n; ++m) {
        s = std::max(s, w0.w[m - 1] * xs[m - 1]);
        head_[m] = s;
      }
    } else {
      detail::CompensatedSum acc;
      for (std::size_t m = 1; m <= n; ++m) {
        acc.add(w0.w[m - 1] * detail::powi(xs[m - 1], w0.q));
        head_[m] = w0.q == 1.0 ? acc.value() : std::pow(acc.value(), 1.0 / w0.q);
      }
    }

    // tail(m): the rearrangement of x 1_{n>m} is x shifted left by m.
    if (w1.uniform) {
      if (w1.sup_form) {
        for (std::size_t m = 0; m < n; ++m) tail_[m] = xs[m];
      } else {
        detail::CompensatedSum acc;
        for (std::size_t m = n; m-- > 0;) {
          acc.add(detail::powi(xs[m], w1.q));
          tail_[m] = w1.q == 1.0 ? acc.value() : std::pow(acc.value(), 1.0 / w1.q);
        }
      }
    } else {
      for (std::size_t m = 0; m < n; ++m) {
        tail_[m] = detail::weighted_norm_sorted(w1, xs.subspan(m));
      }
    }
  }

  [[nodiscard]] double operator()(double t) const {
    double best = detail::kInf;
    for (std::size_t m = 0; m < head_.size(); ++m) best = std::min(best, head_[m] + t * tail_[m]);
    return best;
  }

  /// Split index attaining the minimum at t.
  [[nodiscard]] std::size_t argmin(double t) const {
    std::size_t arg = 0;
    double best = detail::kInf;
    for (std::size_t m = 0; m < head_.size(); ++m) {
      const double v = head_[m] + t * tail_[m];
      if (v < best) {
        best = v;
        arg = m;
      }
    }
    return arg;
  }

  [[nodiscard]] const std::vector<double>& head() const noexcept { return head_; }
  [[nodiscard]] const std::vector<double>& tail() const noexcept { return tail_; }

 private:
  std::vector<double> head_;
  std::vector<double> tail_;
};

/// min over m of |x 1_{n<=m}|_E0 + t |x 1_{n>m}|_E1. An upper bound for K.
inline double k_truncation(double t, const DecreasingSequence& x, const SequenceCouple& couple) {
  if (!(t > 0.0)) throw InvalidParameter("K-functional needs t > 0");
  if (x.empty()) return 0.0;
  return TruncationK(x, couple)(t);
}

struct KConvexOptions {
  int iterations = 2000;
  double step_scale = 0.05;  ///< step_k = step_scale * |x|_2 / sqrt(k)
  bool require_convergence = false;
  double convergence_rel_tol = 1e-9;
};

struct KConvexResult {
  double value = 0.0;
  std::vector<double> split;  ///< the E0 part y, 0 <= y <= x
  std::string best_start;
  bool converged = true;
};

namespace detail {

/// Norm and a subgradient of a rearrangement-invariant functional at an
/// arbitrary non-negative vector `v` (not necessarily sorted).
class RearrangementNormEval {
 public:
  explicit RearrangementNormEval(RearrangementWeights rw) : rw_(std::move(rw)) {}

  double value(std::span<const double> v) {
    if (rw_.uniform) return uniform_value(v);
    sort_into(v);
    return weighted_norm_sorted(rw_, sorted_);
  }

  /// Writes a subgradient into g (overwrites). Returns the value.
  double value_and_subgradient(std::span<const double> v, std::span<double> g) {
    std::fill(g.begin(), g.end(), 0.0);
    const std::size_t n = v.size();
    if (rw_.uniform) {
      const double val = uniform_value(v);
      if (rw_.sup_form) {
        const auto it = std::max_element(v.begin(), v.end());
        if (it != v.end() && *it > 0.0) g[static_cast<std::size_t>(it - v.begin())] = 1.0;
      } else if (rw_.q == 1.0) {
        std::fill(g.begin(), g.end(), 1.0);
      } else if (val > 0.0) {
        const double scale = std::pow(val, 1.0 - rw_.q);
        for (std::size_t i = 0; i < n; ++i) g[i] = powi(v[i], rw_.q - 1.0) * scale;
      }
      return val;
    }
    sort_into(v);
    const double val = weighted_norm_sorted(rw_, sorted_);
    if (rw_.sup_form) {
      std::size_t arg = 0;
      double best = -1.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double c = rw_.w[k] * sorted_[k];
        if (c > best) {
          best = c;
          arg = k;
        }
      }
      if (best > 0.0) g[order_[arg]] = rw_.w[arg];
    } else if (rw_.q == 1.0) {
      for (std::size_t k = 0; k < n; ++k) g[order_[k]] = rw_.w[k];
    } else if (val > 0.0) {
      const double scale = std::pow(val, 1.0 - rw_.q);
      for (std::size_t k = 0; k < n; ++k) g[order_[k]] = rw_.w[k] * powi(sorted_[k], rw_.q - 1.0) * scale;
    }
    return val;
  }

 private:
  double uniform_value(std::span<const double> v) const {
    if (rw_.sup_form) {
      double s = 0.0;
      for (double e : v) s = std::max(s, e);
      return s;
    }
    CompensatedSum acc;
    for (double e : v) {
      if (e != 0.0) acc.add(powi(e, rw_.q));
    }
    return rw_.q == 1.0 ? acc.value() : std::pow(acc.value(), 1.0 / rw_.q);
  }

  void sort_into(std::span<const double> v) {
    const std::size_t n = v.size();
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::stable_sort(order_.begin(), order_.end(), [&v](std::size_t a, std::size_t b) { return v[a] > v[b]; });
    sorted_.resize(n);
    for (std::size_t k = 0; k < n; ++k) sorted_[k] = v[order_[k]];
  }

  RearrangementWeights rw_;
  std::vector<std::size_t> order_;
  std::vector<double> sorted_;
};

}  // namespace detail

/// K(t, x) = inf over splittings 0 <= y <= x of |y|_E0 + t |x - y|_E1,
/// by projected subgradient descent with a small set of starting points
/// (the half split, the best truncation split, the best level split
/// y = (x - lambda)_+). Returns the best objective value seen.
inline KConvexResult k_convex_detailed(double t, const DecreasingSequence& x, const SequenceCouple& couple,
                                       const KConvexOptions& opt = {}) {
  if (!(t > 0.0)) throw InvalidParameter("K-functional needs t > 0");
  if (!couple.e0.convex_regime() || !couple.e1.convex_regime()) {
    throw UnsupportedParameters("k_convex: couple " + couple.describe() +
                                " is outside the convex regime (need p, q >= 1)");
  }
  KConvexResult res;
  const std::size_t n = x.size();
  if (x.is_zero()) {
    res.split.assign(n, 0.0);
    return res;
  }
  const auto xs = x.values();
  detail::RearrangementNormEval norm0(couple.e0.weights(n));
  detail::RearrangementNormEval norm1(couple.e1.weights(n));
  const auto w0 = couple.e0.weights(n);
  const auto w1 = couple.e1.weights(n);

  std::vector<double> rest(n);
  const auto objective = [&](std::span<const double> y) {
    for (std::size_t i = 0; i < n; ++i) rest[i] = xs[i] - y[i];
    return norm0.value(y) + t * norm1.value(rest);
  };

  // Structured candidates ------------------------------------------------------
  const TruncationK trunc(x, couple);
  const std::size_t m_best = trunc.argmin(t);
  std::vector<double> y_trunc(n, 0.0);
  for (std::size_t i = 0; i < m_best; ++i) y_trunc[i] = xs[i];

  // Level splits keep both parts non-increasing, so the sorted-norm routine applies.
  std::vector<double> lvl0(n), lvl1(n);
  const auto level_value = [&](double lambda) {
    for (std::size_t i = 0; i < n; ++i) {
      lvl0[i] = std::max(xs[i] - lambda, 0.0);
      lvl1[i] = std::min(xs[i], lambda);
    }
    return detail::weighted_norm_sorted(w0, lvl0) + t * detail::weighted_norm_sorted(w1, lvl1);
  };
  std::vector<double> breaks(xs.begin(), xs.end());
  breaks.push_back(0.0);
  std::size_t k_best = 0;
  double lvl_best = detail::kInf;
  for (std::size_t k = 0; k < breaks.size(); ++k) {
    const double v = level_value(breaks[k]);
    if (v < lvl_best) {
      lvl_best = v;
      k_best = k;
    }
  }
  double lambda_best = breaks[k_best];
  {
    // golden-section refinement on the adjacent breakpoint intervals
    const double lo = breaks[std::min(k_best + 1, breaks.size() - 1)];
    const double hi = breaks[k_best == 0 ? 0 : k_best - 1];
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = level_value(c), fd = level_value(d);
    for (int it = 0; it < 80 && b - a > 1e-16 * std::max(1.0, hi); ++it) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - gr * (b - a);
        fc = level_value(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + gr * (b - a);
        fd = level_value(d);
      }
    }
    for (double cand : {c, d}) {
      const double v = level_value(cand);
      if (v < lvl_best) {
        lvl_best = v;
        lambda_best = cand;
      }
    }
  }
  std::vector<double> y_level(n);
  for (std::size_t i = 0; i < n; ++i) y_level[i] = std::max(xs[i] - lambda_best, 0.0);

  std::vector<double> y_half(xs.begin(), xs.end());
  for (double& e : y_half) e *= 0.5;

  // Projected subgradient -----------------------------------------------------
  double x2 = 0.0;
  for (double e : xs) x2 += e * e;
  const double step0 = opt.step_scale * std::sqrt(x2);

  res.value = detail::kInf;
  std::vector<double> g0(n), g1(n), dir(n), y(n);
  const std::pair<const char*, const std::vector<double>*> starts[] = {
      {"half", &y_half}, {"truncation", &y_trunc}, {"level", &y_level}};
  double best_at_three_quarters_all = detail::kInf;
  for (const auto& [name, start] : starts) {
    y = *start;
    double best = objective(y);
    std::vector<double> best_y = y;
    double best_at_three_quarters = best;
    for (int k = 1; k <= opt.iterations; ++k) {
      for (std::size_t i = 0; i < n; ++i) rest[i] = xs[i] - y[i];
      const double v = norm0.value_and_subgradient(y, g0) + t * norm1.value_and_subgradient(rest, g1);
      if (v < best) {
        best = v;
        best_y = y;
      }
      if (k == (3 * opt.iterations) / 4) best_at_three_quarters = best;
      double gn = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        dir[i] = g0[i] - t * g1[i];
        gn += dir[i] * dir[i];
      }
      if (gn == 0.0) break;
      const double step = step0 / (std::sqrt(gn) * std::sqrt(static_cast<double>(k)));
      for (std::size_t i = 0; i < n; ++i) y[i] = std::clamp(y[i] - step * dir[i], 0.0, xs[i]);
    }
    {
      const double v = objective(y);
      if (v < best) {
        best = v;
        best_y = y;
      }
    }
    best_at_three_quarters_all = std::min(best_at_three_quarters_all, best_at_three_quarters);
    if (best < res.value) {
      res.value = best;
      res.split = best_y;
      res.best_start = name;
    }
  }
  // Converged when the last quarter of the iterations no longer moved the overall best.
  res.converged = !(res.value < best_at_three_quarters_all * (1.0 - opt.convergence_rel_tol));
  if (opt.require_convergence && !res.converged) {
    std::ostringstream os;
    os.precision(17);
    os << "k_convex: subgradient still improving at the iteration cap (best so far " << res.value << ")";
    throw NumericalFailure(os.str());
  }
  return res;
}

inline double k_convex(double t, const DecreasingSequence& x, const SequenceCouple& couple,
                       const KConvexOptions& opt = {}) {
  return k_convex_detailed(t, x, couple, opt).value;
}

enum class KMethod { Exact, Truncation, Convex };

inline const char* to_string(KMethod m) {
  switch (m) {
    case KMethod::Exact:
      return "exact";
    case KMethod::Truncation:
      return "truncation";
    case KMethod::Convex:
      return "convex";
  }
  return "?";
}

inline KMethod parse_k_method(const std::string& s) {
  if (s == "exact") return KMethod::Exact;
  if (s == "truncation") return KMethod::Truncation;
  if (s == "convex") return KMethod::Convex;
  throw InvalidParameter("unknown K method '" + s + "' (expected exact|truncation|convex)");
}

/// K(t) by the requested method; `Exact` is only available for (l_1, l_inf).
inline double k_value(double t, const DecreasingSequence& x, const SequenceCouple& couple, KMethod method) {
  switch (method) {
    case KMethod::Exact:
      if (!couple.is_l1_linf()) {
        throw UnsupportedParameters("exact K is only available for the couple (l_1, l_inf)");
      }
      return k_exact_l1_linf(t, x);
    case KMethod::Truncation:
      return k_truncation(t, x, couple);
    case KMethod::Convex:
      return k_convex(t, x, couple);
  }
  return 0.0;
}

struct KCurve {
  std::vector<double> t;
  std::vector<double> k;
  KMethod method = KMethod::Truncation;
};

inline KCurve k_curve(const DecreasingSequence& x, const SequenceCouple& couple, KMethod method, double t_min,
                      double t_max, std::size_t points) {
  if (!(t_min > 0.0) || !(t_max > t_min) || points < 2) throw InvalidParameter("k_curve: bad t-grid");
  KCurve c;
  c.method = method;
  c.t = detail::log_grid(t_min, t_max, points);
  c.k.reserve(points);
  if (method == KMethod::Truncation) {
    const TruncationK tk(x, couple);
    for (double t : c.t) c.k.push_back(x.empty() ? 0.0 : tk(t));
  } else {
    for (double t : c.t) c.k.push_back(k_value(t, x, couple, method));
  }
  return c;
}

struct KCurveCheck {
  bool monotone = true;
  bool concave = true;
  bool envelope = true;
  std::size_t worst_index = 0;
  [[nodiscard]] bool pass() const noexcept { return monotone && concave && envelope; }
};

/// Non-decreasing, concave in t (against chords on the actual t-grid), and
/// under the envelope min(|x|_E0, t |x|_E1).
inline KCurveCheck check_k_curve(const KCurve& c, double norm0, double norm1, double rel_tol = 1e-9) {
  KCurveCheck r;
  const double scale = std::max(norm0, 1e-300);
  for (std::size_t i = 0; i < c.t.size(); ++i) {
    const double env = std::min(norm0, c.t[i] * norm1);
    if (c.k[i] > env + rel_tol * scale) {
      r.envelope = false;
      r.worst_index = i;
    }
    if (i > 0 && c.k[i] < c.k[i - 1] - rel_tol * scale) {
      r.monotone = false;
      r.worst_index = i;
    }
    if (i > 0 && i + 1 < c.t.size()) {
      const double w = (c.t[i] - c.t[i - 1]) / (c.t[i + 1] - c.t[i - 1]);
      const double chord = (1.0 - w) * c.k[i - 1] + w * c.k[i + 1];
      if (c.k[i] < chord - rel_tol * scale) {
        r.concave = false;
        r.worst_index = i;
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Functional-parameter interpolation quasi-norm
// ---------------------------------------------------------------------------

struct QuadratureOptions {
  double half_window_log2 = 30.0;  ///< integrate u = log t over [-W ln2, W ln2]
  std::size_t panels = 4096;       ///< panels across the initial window; step is kept when widening
  double max_half_window_log2 = 60.0;
  double widen_step_log2 = 10.0;
  double tail_rel_tol = 1e-6;
  bool check_indices = true;
};

struct InterpolationResult {
  double value = 0.0;
  /// Declared relative error of `value`: tail uncertainty plus the
  /// discretization estimate.
  double tail_bound = 0.0;
  double tail_estimate = 0.0;   ///< tail contribution included in value, relative to the integral
  double discretization = 0.0;  ///< |fine - coarse| grid sum, relative to the integral
  std::size_t panels = 0;
  double half_window_log2 = 0.0;
  std::vector<std::string> warnings;
};

/// (int_0^inf [phi(t)^-1 K(t,x)]^q dt/t)^(1/q), or sup_t phi(t)^-1 K(t,x) for
/// q = inf.
///
/// The integral is taken in u = log t by a composite trapezoid rule applied in
/// the log domain: each panel integrates the exponential through its two end
/// values, which is exact for the power-law pieces these integrands are made
/// of. Outside the window K equals its envelope (t |x|_E1 near 0, |x|_E0 near
/// infinity, since both norms are equivalent on a finite section), so the
/// tails are integrated in closed form against a local power law fitted to phi
/// at the window edge. The reported tail bound is the disagreement between two
/// such fits, plus the whole tail whenever K has not yet met its envelope at
/// an edge; the window widens until it falls below `tail_rel_tol`. Kinks of K
/// between nodes are what the panel rule gets wrong, so the same sum on every
/// other node gives a discretization estimate that is added to the declared
/// bound.
///
/// Construction precomputes phi on the grid, so one integrator can serve many
/// sequences.
class InterpolationIntegrator {
 public:
  InterpolationIntegrator(BoydFunction phi, double q, QuadratureOptions opt = {})
      : phi_(std::move(phi)), q_(q), opt_(opt) {
    if (!(q_ > 0.0)) throw InvalidParameter("interpolation_norm: q must be > 0");
    if (opt_.panels < 2 || opt_.panels % 2 != 0) throw InvalidParameter("interpolation_norm: panels must be even");
    h_ = 2.0 * opt_.half_window_log2 * std::log(2.0) / static_cast<double>(opt_.panels);
    half_max_ = static_cast<std::size_t>(
        std::llround(opt_.max_half_window_log2 / opt_.half_window_log2 * static_cast<double>(opt_.panels / 2)));
    const std::size_t total = 2 * half_max_ + 1;
    t_.resize(total);
    phi_at_.resize(total);
    for (std::size_t i = 0; i < total; ++i) {
      const double u = (static_cast<double>(i) - static_cast<double>(half_max_)) * h_;
      t_[i] = i == half_max_ ? 1.0 : std::exp(u);
      double f = std::numeric_limits<double>::quiet_NaN();
      try {
        f = phi_(t_[i]);
      } catch (const Error&) {
      }
      phi_at_[i] = (std::isfinite(f) && f > 0.0) ? f : std::numeric_limits<double>::quiet_NaN();
    }
    if (opt_.check_indices) {
      try {
        const auto idx = boyd_indices(phi_);
        if (!(idx.lower > 0.0 && idx.upper < 1.0)) {
          std::ostringstream os;
          os << "Boyd indices of the parameter estimated at [" << idx.lower << ", " << idx.upper
             << "], outside (0,1): the integral may diverge";
          warnings_.push_back(os.str());
        }
      } catch (const Error& e) {
        warnings_.push_back(std::string("Boyd index estimate failed: ") + e.what());
      }
    }
  }

  [[nodiscard]] const BoydFunction& parameter() const noexcept { return phi_; }
  [[nodiscard]] double q() const noexcept { return q_; }

  [[nodiscard]] InterpolationResult operator()(const DecreasingSequence& x, const SequenceCouple& couple,
                                               KMethod method = KMethod::Truncation) const {
    InterpolationResult res;
    res.warnings = warnings_;
    if (x.is_zero()) {
      res.half_window_log2 = opt_.half_window_log2;
      res.panels = opt_.panels;
      return res;
    }
    if (method == KMethod::Exact && !couple.is_l1_linf()) {
      throw UnsupportedParameters("exact K is only available for the couple (l_1, l_inf)");
    }
    const double n0 = couple.e0.norm(x);
    const double n1 = couple.e1.norm(x);
    std::optional<TruncationK> trunc;
    if (method == KMethod::Truncation) trunc.emplace(x, couple);
    const auto k_at = [&](double t) {
      switch (method) {
        case KMethod::Exact:
          return k_exact_l1_linf(t, x);
        case KMethod::Truncation:
          return (*trunc)(t);
        case KMethod::Convex:
          return k_convex(t, x, couple);
      }
      return 0.0;
    };

    // K on the grid, filled outward as the window grows.
    std::vector<double> k(t_.size(), std::numeric_limits<double>::quiet_NaN());
    const auto ensure_k = [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i <= hi; ++i) {
        if (std::isnan(k[i])) k[i] = k_at(t_[i]);
      }
    };

    const std::size_t step_panels = static_cast<std::size_t>(
        std::llround(opt_.widen_step_log2 / opt_.half_window_log2 * static_cast<double>(opt_.panels / 2)));
    std::size_t half = opt_.panels / 2;
    for (;;) {
      const std::size_t lo = half_max_ - half;
      const std::size_t hi = half_max_ + half;
      ensure_k(lo, hi);
      for (std::size_t i = lo; i <= hi; ++i) {
        if (std::isnan(phi_at_[i])) {
          throw NumericalFailure("interpolation_norm: parameter not evaluable at t = " + std::to_string(t_[i]));
        }
      }
      const Window w = integrate_window(k, lo, hi, n0, n1);
      const double half_log2 = static_cast<double>(half) * h_ / std::log(2.0);
      if (w.tail_bound < opt_.tail_rel_tol * w.main || half + step_panels > half_max_) {
        if (!(w.tail_bound < opt_.tail_rel_tol * w.main)) {
          std::ostringstream os;
          os << "interpolation_norm: tail bound " << w.tail_bound / w.main << " (relative) exceeds "
             << opt_.tail_rel_tol << " at window 2^+-" << half_log2;
          throw DivergentTail(os.str());
        }
        res.panels = 2 * half;
        res.half_window_log2 = half_log2;
        res.discretization = w.discretization / w.main;
        if (detail::is_pos_inf(q_)) {
          res.value = w.main;
          res.tail_bound = res.discretization;
        } else {
          const double total = w.main + w.tail_estimate;
          res.value = std::pow(total, 1.0 / q_);
          res.tail_estimate = w.tail_estimate / w.main;
          // relative error of the integral, carried through the 1/q power
          const double rel = (w.tail_bound + w.discretization) / total;
          res.tail_bound = std::pow(1.0 + rel, 1.0 / q_) - 1.0;
        }
        return res;
      }
      half += step_panels;
    }
  }

 private:
  struct Window {
    double main = 0.0;
    double tail_estimate = 0.0;
    double tail_bound = 0.0;
    double discretization = 0.0;
  };

  [[nodiscard]] Window integrate_window(const std::vector<double>& k, std::size_t lo, std::size_t hi, double n0,
                                        double n1) const {
    Window w;
    const bool sup = detail::is_pos_inf(q_);
    // The coarse grid keeps every other node, always including t = 1.
    const auto on_coarse = [this](std::size_t i) { return (half_max_ - i) % 2 == 0; };
    if (sup) {
      double coarse = 0.0;
      for (std::size_t i = lo; i <= hi; ++i) {
        const double v = k[i] / phi_at_[i];
        w.main = std::max(w.main, v);
        if (on_coarse(i)) coarse = std::max(coarse, v);
      }
      w.discretization = w.main - coarse;
    } else {
      detail::CompensatedSum acc, coarse;
      std::vector<double> f(hi - lo + 1);
      for (std::size_t i = lo; i <= hi; ++i) f[i - lo] = detail::powi(k[i] / phi_at_[i], q_);
      for (std::size_t i = lo; i < hi; ++i) acc.add(panel(f[i - lo], f[i + 1 - lo], h_));
      for (std::size_t i = lo; i < hi;) {
        if (on_coarse(i) && i + 2 <= hi) {
          coarse.add(panel(f[i - lo], f[i + 2 - lo], 2.0 * h_));
          i += 2;
        } else {
          coarse.add(panel(f[i - lo], f[i + 1 - lo], h_));
          ++i;
        }
      }
      w.main = acc.value();
      w.discretization = std::abs(w.main - coarse.value());
    }

    // Local exponents of phi near each edge from two disjoint stretches of 5 octaves.
    const auto octaves = static_cast<std::size_t>(std::llround(5.0 * std::log(2.0) / h_));
    const auto slope = [&](std::size_t i, std::size_t j) {
      return std::log(phi_at_[j] / phi_at_[i]) / (std::log(t_[j]) - std::log(t_[i]));
    };
    const double s_lo_near = slope(lo, lo + octaves);
    const double s_lo_far = slope(lo + octaves, lo + 2 * octaves);
    const double s_hi_near = slope(hi - octaves, hi);
    const double s_hi_far = slope(hi - 2 * octaves, hi - octaves);

    const double a = t_[lo];
    const double b = t_[hi];
    const bool sat_lo = k[lo] >= (1.0 - 1e-9) * a * n1;
    const bool sat_hi = k[hi] >= (1.0 - 1e-9) * n0;

    if (sup) {
      // The envelope is monotone towards the window beyond each edge when the
      // local exponents lie in (0,1), so the supremum is attained inside.
      const bool ok = s_lo_near < 1.0 && s_lo_far < 1.0 && s_hi_near > 0.0 && s_hi_far > 0.0 && sat_lo && sat_hi;
      w.tail_bound = ok ? 0.0 : detail::kInf;
      return w;
    }

    const double env_lo = detail::powi(a * n1 / phi_at_[lo], q_);
    const double env_hi = detail::powi(n0 / phi_at_[hi], q_);
    const auto tail_lo = [&](double s) { return s < 1.0 ? env_lo / ((1.0 - s) * q_) : detail::kInf; };
    const auto tail_hi = [&](double s) { return s > 0.0 ? env_hi / (s * q_) : detail::kInf; };
    const double lo_near = tail_lo(s_lo_near);
    const double hi_near = tail_hi(s_hi_near);
    w.tail_estimate = lo_near + hi_near;
    w.tail_bound = std::abs(lo_near - tail_lo(s_lo_far)) + std::abs(hi_near - tail_hi(s_hi_far));
    if (!sat_lo) w.tail_bound += lo_near;
    if (!sat_hi) w.tail_bound += hi_near;
    if (!std::isfinite(w.tail_estimate)) w.tail_bound = detail::kInf;
    return w;
  }

  /// Integral over one panel of the exponential through (0, f0), (h, f1).
  [[nodiscard]] static double panel(double f0, double f1, double h) {
    if (f0 > 0.0 && f1 > 0.0) {
      const double r = std::log(f1 / f0);
      if (std::abs(r) > 1e-6) return h * (f1 - f0) / r;
    }
    return h * 0.5 * (f0 + f1);
  }

  BoydFunction phi_;
  double q_;
  QuadratureOptions opt_;
  double h_ = 0.0;
  std::size_t half_max_ = 0;
  std::vector<double> t_;
  std::vector<double> phi_at_;
  std::vector<std::string> warnings_;
};

inline InterpolationResult interpolation_norm(const DecreasingSequence& x, const SequenceCouple& couple,
                                              const BoydFunction& phi, double q,
                                              KMethod method = KMethod::Truncation, const QuadratureOptions& opt = {}) {
  return InterpolationIntegrator(phi, q, opt)(x, couple, method);
}

/// |x|_Sigma = K(1, x).
inline double sum_norm(const DecreasingSequence& x, const SequenceCouple& couple) {
  return k_convex(1.0, x, couple);
}

/// |x|_Delta = max(|x|_E0, |x|_E1).
inline double intersection_norm(const DecreasingSequence& x, const SequenceCouple& couple) {
  return std::max(couple.e0.norm(x), couple.e1.norm(x));
}

}  // namespace interp_scales
