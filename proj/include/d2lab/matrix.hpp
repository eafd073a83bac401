#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "d2lab/field.hpp"

namespace d2lab {

template <ExactField F>
using Vec = std::vector<F>;

/// Dense row-major matrix over an exact field.
template <ExactField F>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, F(0)) {}
  Matrix(std::initializer_list<std::initializer_list<F>> init) {
    rows_ = init.size();
    cols_ = rows_ == 0 ? 0 : init.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw std::invalid_argument("Matrix: ragged initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = F(1);
    return m;
  }

  /// Matrix whose columns are the given vectors (all of length `rows`).
  static Matrix from_columns(const std::vector<Vec<F>>& cols, std::size_t rows) {
    Matrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != rows) throw std::invalid_argument("Matrix: column length mismatch");
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  F& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const F& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  [[nodiscard]] Vec<F> row(std::size_t r) const {
    return Vec<F>(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                  data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
  }

  [[nodiscard]] Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("Matrix: shape mismatch in product");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const F& aik = a(i, k);
        if (aik.is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          if (!b(k, j).is_zero()) c(i, j) += aik * b(k, j);
        }
      }
    }
    return c;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("Matrix: shape mismatch in sum");
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
    return a;
  }
  friend Matrix operator-(Matrix a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("Matrix: shape mismatch in difference");
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
    return a;
  }
  friend Matrix operator*(const F& s, Matrix a) {
    for (auto& x : a.data_) x *= s;
    return a;
  }

  friend Vec<F> operator*(const Matrix& a, const Vec<F>& v) {
    if (a.cols_ != v.size()) throw std::invalid_argument("Matrix: shape mismatch in matrix-vector product");
    Vec<F> out(a.rows_, F(0));
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j)
        if (!a(i, j).is_zero() && !v[j].is_zero()) out[i] += a(i, j) * v[j];
    return out;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) = default;

  friend std::ostream& operator<<(std::ostream& os, const Matrix& m) {
    for (std::size_t i = 0; i < m.rows_; ++i) {
      os << '[';
      for (std::size_t j = 0; j < m.cols_; ++j) os << (j ? ", " : "") << m(i, j).str();
      os << "]\n";
    }
    return os;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<F> data_;
};

template <ExactField F>
struct RrefResult {
  Matrix<F> reduced;
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

/// Gauss-Jordan reduction. Within each column the pivot row is the candidate
/// with the smallest total coefficient size; the reduced form itself is unique.
template <ExactField F>
RrefResult<F> rref(Matrix<F> m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t best = m.rows();
    std::size_t best_size = 0;
    for (std::size_t i = r; i < m.rows(); ++i) {
      if (m(i, c).is_zero()) continue;
      std::size_t sz = 0;
      for (std::size_t j = c; j < m.cols(); ++j) sz += m(i, j).is_zero() ? 0 : m(i, j).size_hint();
      if (best == m.rows() || sz < best_size) {
        best = i;
        best_size = sz;
      }
    }
    if (best == m.rows()) continue;
    if (best != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(best, j), m(r, j));
    const F inv = m(r, c).inverse();
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      const F f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j)
        if (!m(r, j).is_zero()) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return {std::move(m), std::move(pivots)};
}

template <ExactField F>
std::size_t rank(const Matrix<F>& m) {
  return rref(m).pivots.size();
}

/// Basis of {v : M v = 0}, one vector per free column.
template <ExactField F>
std::vector<Vec<F>> nullspace(const Matrix<F>& m) {
  const auto [red, pivots] = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<Vec<F>> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vec<F> v(m.cols(), F(0));
    v[f] = F(1);
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -red(i, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

template <ExactField F>
struct LinearSolution {
  Vec<F> particular;
  std::vector<Vec<F>> homogeneous;
};

/// Solves M x = b exactly; absent when the system is inconsistent.
template <ExactField F>
std::optional<LinearSolution<F>> solve_linear(const Matrix<F>& m, const Vec<F>& b) {
  if (b.size() != m.rows()) throw std::invalid_argument("solve_linear: rhs length mismatch");
  Matrix<F> aug(m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[i];
  }
  const auto [red, pivots] = rref(std::move(aug));
  if (!pivots.empty() && pivots.back() == m.cols()) return std::nullopt;
  LinearSolution<F> sol;
  sol.particular.assign(m.cols(), F(0));
  for (std::size_t i = 0; i < pivots.size(); ++i) sol.particular[pivots[i]] = red(i, m.cols());
  sol.homogeneous = nullspace(m);
  return sol;
}

/// Coefficients c with sum_i c_i vectors[i] = target, or absent.
template <ExactField F>
std::optional<Vec<F>> span_membership(const std::vector<Vec<F>>& vectors, const Vec<F>& target) {
  for (const auto& v : vectors)
    if (v.size() != target.size()) throw std::invalid_argument("span_membership: length mismatch");
  if (vectors.empty()) {
    for (const auto& t : target)
      if (!t.is_zero()) return std::nullopt;
    return Vec<F>{};
  }
  const auto sol = solve_linear(Matrix<F>::from_columns(vectors, target.size()), target);
  if (!sol) return std::nullopt;
  return sol->particular;
}

}  // namespace d2lab
