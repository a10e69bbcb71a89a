#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "interp_scales/detail/numeric.hpp"
#include "interp_scales/error.hpp"

namespace interp_scales {

/// Arbitrary finite scalar sequence (a finite section of l_inf).
using RawSequence = std::vector<double>;

inline void require_finite(std::span<const double> values, const char* what) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw InvalidInput(std::string(what) + ": non-finite entry at index " + std::to_string(i + 1));
    }
  }
}

/// Finitely supported, non-negative, non-increasing sequence: an element of
/// k-hat truncated to length N. Terms past N are zero.
///
/// Indexing through `a(n)` is 1-based; `values()` exposes the storage.
class DecreasingSequence {
 public:
  DecreasingSequence() = default;

  /// Validates ordering and sign; throws InvalidInput on violation.
  static DecreasingSequence from_values(std::vector<double> values) {
    require_finite(values, "decreasing sequence");
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i] < 0.0) {
        throw InvalidInput("decreasing sequence: negative entry at index " + std::to_string(i + 1));
      }
      if (i > 0 && values[i] > values[i - 1]) {
        throw InvalidInput("decreasing sequence: increase at index " + std::to_string(i + 1));
      }
    }
    DecreasingSequence s;
    s.values_ = std::move(values);
    return s;
  }

  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] bool empty() const noexcept { return values_.empty(); }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }

  /// n-th term, 1-based; zero past the stored length.
  [[nodiscard]] double a(std::size_t n) const noexcept {
    return (n >= 1 && n <= values_.size()) ? values_[n - 1] : 0.0;
  }

  [[nodiscard]] bool is_zero() const noexcept { return values_.empty() || values_.front() == 0.0; }

  [[nodiscard]] DecreasingSequence scaled(double c) const {
    if (!(c >= 0.0) || !std::isfinite(c)) throw InvalidParameter("scale factor must be finite and >= 0");
    DecreasingSequence s = *this;
    for (double& v : s.values_) v *= c;
    return s;
  }

  friend bool operator==(const DecreasingSequence&, const DecreasingSequence&) = default;

 private:
  std::vector<double> values_;
};

/// (|x|) sorted non-increasingly: the approximation numbers a_n(x), which are
/// also the best-approximation errors E_n(x) of the sequence scheme.
inline DecreasingSequence decreasing_rearrangement(std::span<const double> x) {
  require_finite(x, "decreasing_rearrangement");
  std::vector<double> v(x.size());
  std::transform(x.begin(), x.end(), v.begin(), [](double e) { return std::abs(e); });
  std::sort(v.begin(), v.end(), std::greater<>());
  return DecreasingSequence::from_values(std::move(v));
}

/// (sum x_n^p)^(1/p); max for p = inf.
inline double lp_norm(const DecreasingSequence& x, double p) {
  if (!(p > 0.0)) throw InvalidParameter("lp_norm: p must be > 0 (got " + std::to_string(p) + ")");
  if (x.empty()) return 0.0;
  if (detail::is_pos_inf(p)) return x.a(1);
  if (x.a(1) == 0.0) return 0.0;
  detail::CompensatedSum acc;
  if (p == 1.0) {
    for (double v : x.values()) acc.add(v);
    return acc.value();
  }
  // Scale by the maximum so large p does not overflow.
  const double top = x.a(1);
  for (double v : x.values()) {
    if (v == 0.0) break;
    acc.add(std::pow(v / top, p));
  }
  return top * std::pow(acc.value(), 1.0 / p);
}

struct AxiomCheck {
  bool pass = true;
  std::vector<std::string> violations;
};

/// Monotonicity and non-negativity of a best-approximation error sequence.
inline AxiomCheck check_approximation_error_axioms(std::span<const double> errors) {
  AxiomCheck r;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!std::isfinite(errors[i])) {
      r.violations.push_back("non-finite E_" + std::to_string(i + 1));
    } else if (errors[i] < 0.0) {
      r.violations.push_back("negative E_" + std::to_string(i + 1));
    }
    if (i > 0 && errors[i] > errors[i - 1]) {
      r.violations.push_back("E_" + std::to_string(i + 1) + " > E_" + std::to_string(i));
    }
  }
  r.pass = r.violations.empty();
  return r;
}

}  // namespace interp_scales
