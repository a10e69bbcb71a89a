#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "interp_scales/approx_spaces.hpp"
#include "interp_scales/boyd.hpp"
#include "interp_scales/error.hpp"
#include "interp_scales/sequences.hpp"

namespace interp_scales {

/// Dense real matrix, row-major.
class DenseMatrix {
 public:
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
      : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (rows_ == 0 || cols_ == 0) throw InvalidInput("matrix must be non-empty");
    if (entries_.size() != rows_ * cols_) {
      throw InvalidInput("matrix entry count " + std::to_string(entries_.size()) + " != rows*cols " +
                         std::to_string(rows_ * cols_));
    }
    require_finite(entries_, "matrix");
  }

  static DenseMatrix diagonal(std::span<const double> d) {
    std::vector<double> e(d.size() * d.size(), 0.0);
    for (std::size_t i = 0; i < d.size(); ++i) e[i * d.size() + i] = d[i];
    return DenseMatrix(d.size(), d.size(), std::move(e));
  }

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] double operator()(std::size_t r, std::size_t c) const noexcept { return entries_[r * cols_ + c]; }
  [[nodiscard]] std::span<const double> entries() const noexcept { return entries_; }

  [[nodiscard]] DenseMatrix transposed() const {
    std::vector<double> e(entries_.size());
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) e[c * rows_ + r] = entries_[r * cols_ + c];
    return DenseMatrix(cols_, rows_, std::move(e));
  }

  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols_ != b.rows_) throw InvalidInput("matrix product: inner dimensions differ");
    std::vector<double> e(a.rows_ * b.cols_, 0.0);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const double aik = a(i, k);
        for (std::size_t j = 0; j < b.cols_; ++j) e[i * b.cols_ + j] += aik * b(k, j);
      }
    return DenseMatrix(a.rows_, b.cols_, std::move(e));
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> entries_;
};

struct JacobiOptions {
  int max_sweeps = 60;
  double tolerance = 1e-12;  ///< |<a_i,a_j>| <= tol * |a_i| |a_j| for every column pair
};

/// Singular values by one-sided (Hestenes) Jacobi: columns are rotated
/// pairwise until mutually orthogonal; their norms are the singular values.
/// For Euclidean spaces these are the approximation numbers a_n(T).
inline DecreasingSequence approximation_numbers(const DenseMatrix& t, const JacobiOptions& opt = {}) {
  // Work on the orientation with fewer columns.
  const DenseMatrix a = t.cols() > t.rows() ? t.transposed() : t;
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  // Column-major working copy.
  std::vector<std::vector<double>> col(n, std::vector<double>(m));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < m; ++i) col[j][i] = a(i, j);

  const auto dot = [m](const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += x[i] * y[i];
    return s;
  };

  bool converged = n < 2;
  for (int sweep = 0; sweep < opt.max_sweeps && !converged; ++sweep) {
    converged = true;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double alpha = dot(col[p], col[p]);
        const double beta = dot(col[q], col[q]);
        const double gamma = dot(col[p], col[q]);
        if (alpha == 0.0 || beta == 0.0) continue;
        if (std::abs(gamma) <= opt.tolerance * std::sqrt(alpha * beta)) continue;
        converged = false;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double tan = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + tan * tan);
        const double s = c * tan;
        for (std::size_t i = 0; i < m; ++i) {
          const double xp = col[p][i];
          const double xq = col[q][i];
          col[p][i] = c * xp - s * xq;
          col[q][i] = s * xp + c * xq;
        }
      }
    }
  }
  if (!converged) {
    throw NumericalFailure("approximation_numbers: Jacobi iteration did not converge in " +
                           std::to_string(opt.max_sweeps) + " sweeps");
  }
  std::vector<double> sv(n);
  for (std::size_t j = 0; j < n; ++j) sv[j] = std::sqrt(dot(col[j], col[j]));
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return DecreasingSequence::from_values(std::move(sv));
}

/// Lorentz–Marcinkiewicz operator-ideal quasi-norm on the singular values.
inline double operator_ideal_norm(const DenseMatrix& t, const BoydFunction& phi, double q) {
  return lorentz_marcinkiewicz_norm(approximation_numbers(t), phi, q);
}

}  // namespace interp_scales
