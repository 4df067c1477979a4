#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

namespace refless {

/// Small dense row-major matrix.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <class T, class U>
std::vector<std::common_type_t<T, U>> multiply(const Matrix<T>& a, std::span<const U> v) {
  using R = std::common_type_t<T, U>;
  std::vector<R> out(a.rows(), R{});
  for (std::size_t i = 0; i < a.rows(); ++i) {
    R acc{};
    for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * v[j];
    out[i] = acc;
  }
  return out;
}

/// In-place Cholesky of a symmetric positive definite matrix whose diagonal
/// is O(1) (callers equilibrate first). Returns 0 on success, otherwise the
/// 1-based index of the first pivot that fell below pivot_floor.
inline std::size_t cholesky_in_place(Matrix<double>& a, double pivot_floor) {
  const std::size_t n = a.rows();
  for (std::size_t j = 0; j < n; ++j) {
    double diag = a(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= a(j, k) * a(j, k);
    if (!(diag > pivot_floor)) return j + 1;
    const double ljj = std::sqrt(diag);
    a(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= a(i, k) * a(j, k);
      a(i, j) = s / ljj;
    }
    for (std::size_t i = 0; i < j; ++i) a(i, j) = 0.0;
  }
  return 0;
}

/// Solves L L^T x = b with L the lower factor from cholesky_in_place.
template <class T>
void cholesky_solve_in_place(const Matrix<double>& l, std::span<T> b) {
  const std::size_t n = l.rows();
  for (std::size_t i = 0; i < n; ++i) {
    T s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * b[k];
    b[i] = s / l(i, i);
  }
  for (std::size_t i = n; i-- > 0;) {
    T s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= l(k, i) * b[k];
    b[i] = s / l(i, i);
  }
}

/// LU factorization with partial pivoting of a (row-equilibrated) complex
/// or real matrix.
template <class T>
struct LuFactor {
  Matrix<T> lu;
  std::vector<std::size_t> perm;
  int parity = 1;

  T det() const {
    T d = static_cast<T>(parity);
    for (std::size_t i = 0; i < lu.rows(); ++i) d *= lu(i, i);
    return d;
  }

  template <class U>
  std::vector<T> solve(std::span<const U> b) const {
    const std::size_t n = lu.rows();
    std::vector<T> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<T>(b[perm[i]]);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < i; ++k) x[i] -= lu(i, k) * x[k];
    for (std::size_t i = n; i-- > 0;) {
      for (std::size_t k = i + 1; k < n; ++k) x[i] -= lu(i, k) * x[k];
      x[i] /= lu(i, i);
    }
    return x;
  }
};

/// Factors a in place. Rows are expected to be scaled so their largest entry
/// has modulus one; a pivot below pivot_floor is reported by its 1-based
/// column index (0 means success).
template <class T>
std::size_t lu_factor(Matrix<T> a, double pivot_floor, LuFactor<T>& out) {
  const std::size_t n = a.rows();
  out.perm.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.perm[i] = i;
  out.parity = 1;
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t p = j;
    double best = std::abs(a(j, j));
    for (std::size_t i = j + 1; i < n; ++i)
      if (std::abs(a(i, j)) > best) best = std::abs(a(i, j)), p = i;
    if (!(best > pivot_floor)) {
      out.lu = std::move(a);
      return j + 1;
    }
    if (p != j) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a(p, k), a(j, k));
      std::swap(out.perm[p], out.perm[j]);
      out.parity = -out.parity;
    }
    for (std::size_t i = j + 1; i < n; ++i) {
      const T f = a(i, j) / a(j, j);
      a(i, j) = f;
      for (std::size_t k = j + 1; k < n; ++k) a(i, k) -= f * a(j, k);
    }
  }
  out.lu = std::move(a);
  return 0;
}

/// Scales every row to unit max-modulus; returns the applied factors.
template <class T>
std::vector<double> equilibrate_rows(Matrix<T>& a) {
  std::vector<double> scale(a.rows(), 1.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double mx = 0.0;
    for (const auto& v : a.row(i)) mx = std::max(mx, std::abs(v));
    if (mx > 0.0) {
      scale[i] = 1.0 / mx;
      for (auto& v : a.row(i)) v *= scale[i];
    }
  }
  return scale;
}

}  // namespace refless
