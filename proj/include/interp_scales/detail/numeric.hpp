#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace interp_scales::detail {

/// Neumaier compensated accumulator.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// n points log-uniform on [lo, hi]; when 1 lies inside the range it is
/// replaced by the nearest grid point so that s = 1 is always probed exactly.
inline std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  std::vector<double> g(n);
  if (n == 1) {
    g[0] = lo;
    return g;
  }
  const double a = std::log(lo);
  const double b = std::log(hi);
  const double step = (b - a) / static_cast<double>(n - 1);
  std::size_t nearest_one = n;
  double best = kInf;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = a + step * static_cast<double>(i);
    g[i] = std::exp(u);
    if (std::abs(u) < best) {
      best = std::abs(u);
      nearest_one = i;
    }
  }
  g.front() = lo;
  g.back() = hi;
  if (lo < 1.0 && hi > 1.0 && nearest_one < n) g[nearest_one] = 1.0;
  return g;
}

inline bool is_pos_inf(double v) noexcept { return std::isinf(v) && v > 0; }

}  // namespace interp_scales::detail
