#pragma once

#include <algorithm>
#include <cmath>

namespace varprod {

/// Dense 2x2 real matrix, row-major fields. Indexing through at() is 0-based.
struct Matrix2 {
  double a11 = 0.0;
  double a12 = 0.0;
  double a21 = 0.0;
  double a22 = 0.0;

  static constexpr Matrix2 identity() noexcept { return {1.0, 0.0, 0.0, 1.0}; }

  constexpr double at(int row, int col) const noexcept {
    return row == 0 ? (col == 0 ? a11 : a12) : (col == 0 ? a21 : a22);
  }
  constexpr double& at(int row, int col) noexcept {
    return row == 0 ? (col == 0 ? a11 : a12) : (col == 0 ? a21 : a22);
  }

  constexpr double trace() const noexcept { return a11 + a22; }
  constexpr double determinant() const noexcept { return a11 * a22 - a12 * a21; }
  constexpr Matrix2 transposed() const noexcept { return {a11, a21, a12, a22}; }

  /// Inverse; caller checks the determinant.
  constexpr Matrix2 inverse() const noexcept {
    const double det = determinant();
    return {a22 / det, -a12 / det, -a21 / det, a11 / det};
  }

  double max_abs() const noexcept {
    return std::max({std::fabs(a11), std::fabs(a12), std::fabs(a21), std::fabs(a22)});
  }

  friend constexpr Matrix2 operator*(const Matrix2& x, const Matrix2& y) noexcept {
    return {x.a11 * y.a11 + x.a12 * y.a21, x.a11 * y.a12 + x.a12 * y.a22,
            x.a21 * y.a11 + x.a22 * y.a21, x.a21 * y.a12 + x.a22 * y.a22};
  }
  friend constexpr Matrix2 operator*(double s, const Matrix2& x) noexcept {
    return {s * x.a11, s * x.a12, s * x.a21, s * x.a22};
  }
  friend constexpr Matrix2 operator+(const Matrix2& x, const Matrix2& y) noexcept {
    return {x.a11 + y.a11, x.a12 + y.a12, x.a21 + y.a21, x.a22 + y.a22};
  }
  friend constexpr Matrix2 operator-(const Matrix2& x, const Matrix2& y) noexcept {
    return {x.a11 - y.a11, x.a12 - y.a12, x.a21 - y.a21, x.a22 - y.a22};
  }
  friend constexpr bool operator==(const Matrix2&, const Matrix2&) = default;
};

inline double max_abs_diff(const Matrix2& x, const Matrix2& y) noexcept { return (x - y).max_abs(); }

}  // namespace varprod
