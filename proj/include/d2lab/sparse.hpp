#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "d2lab/field.hpp"
#include "d2lab/matrix.hpp"

namespace d2lab {

/// Sparse vector: (index, value) pairs with strictly increasing indices and
/// no explicit zeros.
template <ExactField F>
using SparseVec = std::vector<std::pair<std::uint32_t, F>>;

template <ExactField F>
using Accumulator = std::map<std::uint32_t, F>;

template <ExactField F>
void axpy(Accumulator<F>& acc, const F& scale, const SparseVec<F>& v) {
  if (scale.is_zero()) return;
  for (const auto& [i, x] : v) {
    auto [it, inserted] = acc.try_emplace(i, F(0));
    it->second += scale * x;
    if (it->second.is_zero()) acc.erase(it);
  }
}

template <ExactField F>
void add_entry(Accumulator<F>& acc, std::uint32_t i, const F& x) {
  if (x.is_zero()) return;
  auto [it, inserted] = acc.try_emplace(i, F(0));
  it->second += x;
  if (it->second.is_zero()) acc.erase(it);
}

template <ExactField F>
SparseVec<F> to_sparse(const Accumulator<F>& acc) {
  return SparseVec<F>(acc.begin(), acc.end());
}

template <ExactField F>
SparseVec<F> to_sparse(const Vec<F>& dense) {
  SparseVec<F> out;
  for (std::size_t i = 0; i < dense.size(); ++i)
    if (!dense[i].is_zero()) out.emplace_back(static_cast<std::uint32_t>(i), dense[i]);
  return out;
}

template <ExactField F>
Vec<F> to_dense(const SparseVec<F>& v, std::size_t n) {
  Vec<F> out(n, F(0));
  for (const auto& [i, x] : v) out.at(i) = x;
  return out;
}

template <ExactField F>
SparseVec<F> scaled(const SparseVec<F>& v, const F& s) {
  if (s.is_zero()) return {};
  SparseVec<F> out = v;
  for (auto& e : out) e.second *= s;
  return out;
}

template <ExactField F>
SparseVec<F> linear_combination(const std::vector<SparseVec<F>>& vs, const Vec<F>& coeffs) {
  Accumulator<F> acc;
  for (std::size_t i = 0; i < vs.size(); ++i) axpy(acc, coeffs[i], vs[i]);
  return to_sparse(acc);
}

/// Incremental row echelon form over a fixed number of columns. Rows are
/// inserted one at a time (streamed), each reduced against the existing rows;
/// the pivot of a row is its first nonzero column, which makes the final
/// reduced form independent of insertion details. Optionally tracks, for every
/// stored row, its expression in terms of the inserted inputs.
template <ExactField F>
class SparseEchelon {
 public:
  explicit SparseEchelon(std::size_t ncols, bool track = false)
      : ncols_(ncols), track_(track), pivot_row_(ncols, -1) {}

  [[nodiscard]] std::size_t cols() const { return ncols_; }
  [[nodiscard]] std::size_t rank() const { return rows_.size(); }
  [[nodiscard]] std::size_t inputs() const { return inputs_; }
  [[nodiscard]] bool full() const { return rows_.size() == ncols_; }

  /// Inserts a row; returns true when it was independent of the stored rows.
  bool insert(const SparseVec<F>& v) {
    const auto id = static_cast<std::uint32_t>(inputs_++);
    Accumulator<F> combo;
    if (track_) combo.emplace(id, F(1));
    Accumulator<F> w(v.begin(), v.end());
    reduce_in_place(w, track_ ? &combo : nullptr);
    if (w.empty()) return false;
    const std::uint32_t pivot = w.begin()->first;
    const F inv = w.begin()->second.inverse();
    Row row;
    row.pivot = pivot;
    row.entries.reserve(w.size());
    for (const auto& [i, x] : w) row.entries.emplace_back(i, x * inv);
    if (track_) {
      for (auto& [i, x] : combo) row.combo.emplace_back(i, x * inv);
    }
    pivot_row_[pivot] = static_cast<long>(rows_.size());
    rows_.push_back(std::move(row));
    reduced_ = false;
    return true;
  }

  /// Residual of v after reduction (supported on non-pivot columns once the
  /// echelon is fully reduced), plus the combination of inputs subtracted.
  struct Reduction {
    SparseVec<F> residual;
    SparseVec<F> combo;  // v = residual + sum combo[i] * input_i (when tracking)
  };

  [[nodiscard]] Reduction reduce(const SparseVec<F>& v) const {
    Accumulator<F> w(v.begin(), v.end());
    Accumulator<F> combo;
    reduce_in_place(w, track_ ? &combo : nullptr);
    Reduction r;
    r.residual = to_sparse(w);
    for (auto& [i, x] : combo) r.combo.emplace_back(i, -x);
    return r;
  }

  [[nodiscard]] bool contains(const SparseVec<F>& v) const { return reduce(v).residual.empty(); }

  /// Coefficients over the inserted inputs expressing v, or absent.
  [[nodiscard]] std::optional<SparseVec<F>> express(const SparseVec<F>& v) const {
    if (!track_) throw std::logic_error("SparseEchelon: express requires tracking");
    Reduction r = reduce(v);
    if (!r.residual.empty()) return std::nullopt;
    return r.combo;
  }

  /// Back-substitutes so that every pivot column is zero outside its own row.
  void make_reduced() {
    if (reduced_) return;
    std::vector<std::size_t> order(rows_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return rows_[a].pivot > rows_[b].pivot; });
    for (auto idx : order) {
      Row& row = rows_[idx];
      Accumulator<F> w(row.entries.begin() + 1, row.entries.end());
      Accumulator<F> combo;
      if (track_) combo.insert(row.combo.begin(), row.combo.end());
      reduce_in_place(w, track_ ? &combo : nullptr);
      SparseVec<F> entries;
      entries.reserve(w.size() + 1);
      entries.emplace_back(row.pivot, F(1));
      for (auto& e : w) entries.push_back(e);
      row.entries = std::move(entries);
      if (track_) row.combo = to_sparse(combo);
    }
    reduced_ = true;
  }

  [[nodiscard]] std::vector<std::uint32_t> pivot_columns() const {
    std::vector<std::uint32_t> p;
    for (const auto& r : rows_) p.push_back(r.pivot);
    std::sort(p.begin(), p.end());
    return p;
  }

  [[nodiscard]] std::vector<std::uint32_t> free_columns() const {
    std::vector<std::uint32_t> f;
    for (std::size_t c = 0; c < ncols_; ++c)
      if (pivot_row_[c] < 0) f.push_back(static_cast<std::uint32_t>(c));
    return f;
  }

  /// Basis of the solution space of the stored rows viewed as homogeneous
  /// equations: one vector per free column.
  [[nodiscard]] std::vector<SparseVec<F>> nullspace() {
    make_reduced();
    const auto free = free_columns();
    std::vector<long> free_index(ncols_, -1);
    for (std::size_t k = 0; k < free.size(); ++k) free_index[free[k]] = static_cast<long>(k);
    std::vector<Accumulator<F>> acc(free.size());
    for (std::size_t k = 0; k < free.size(); ++k) acc[k].emplace(free[k], F(1));
    for (const auto& row : rows_) {
      for (std::size_t e = 1; e < row.entries.size(); ++e) {
        const auto& [c, x] = row.entries[e];
        const long k = free_index[c];
        if (k >= 0) acc[static_cast<std::size_t>(k)].emplace(row.pivot, -x);
      }
    }
    std::vector<SparseVec<F>> basis;
    basis.reserve(free.size());
    for (auto& a : acc) basis.push_back(to_sparse(a));
    return basis;
  }

  /// Coordinates of v in the quotient space F^n / rowspace, indexed by the
  /// position of each free column in free_columns().
  [[nodiscard]] SparseVec<F> quotient_coordinates(const SparseVec<F>& v, const std::vector<long>& free_index) const {
    Accumulator<F> w(v.begin(), v.end());
    reduce_in_place(w, nullptr);
    SparseVec<F> out;
    out.reserve(w.size());
    for (const auto& [c, x] : w) out.emplace_back(static_cast<std::uint32_t>(free_index[c]), x);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
  }

 private:
  struct Row {
    std::uint32_t pivot = 0;
    SparseVec<F> entries;  // first entry is (pivot, 1)
    SparseVec<F> combo;
  };

  void reduce_in_place(Accumulator<F>& w, Accumulator<F>* combo) const {
    auto it = w.begin();
    while (it != w.end()) {
      const std::uint32_t c = it->first;
      const long r = pivot_row_[c];
      if (r < 0) {
        ++it;
        continue;
      }
      const F coef = it->second;
      const Row& row = rows_[static_cast<std::size_t>(r)];
      axpy(w, -coef, row.entries);
      if (combo != nullptr) axpy(*combo, -coef, row.combo);
      it = w.upper_bound(c);
    }
  }

  std::size_t ncols_;
  bool track_;
  std::size_t inputs_ = 0;
  std::vector<long> pivot_row_;
  std::vector<Row> rows_;
  bool reduced_ = true;
};

/// Basis of the common solution space of the given sparse linear equations.
template <ExactField F>
std::vector<SparseVec<F>> sparse_nullspace(const std::vector<SparseVec<F>>& equations, std::size_t ncols) {
  SparseEchelon<F> ech(ncols);
  for (const auto& e : equations) ech.insert(e);
  return ech.nullspace();
}

/// Sparse counterpart of span_membership: coefficients over `vectors`
/// expressing `target`, or absent.
template <ExactField F>
std::optional<Vec<F>> sparse_span_membership(const std::vector<SparseVec<F>>& vectors, const SparseVec<F>& target,
                                             std::size_t ncols) {
  SparseEchelon<F> ech(ncols, true);
  for (const auto& v : vectors) ech.insert(v);
  auto combo = ech.express(target);
  if (!combo) return std::nullopt;
  return to_dense(*combo, vectors.size());
}

/// Coefficient vectors c with sum_j c_j columns[j] = 0, columns living in F^m.
template <ExactField F>
std::vector<SparseVec<F>> column_relations(const std::vector<SparseVec<F>>& columns, std::size_t m) {
  std::vector<Accumulator<F>> rows(m);
  for (std::size_t j = 0; j < columns.size(); ++j)
    for (const auto& [r, x] : columns[j]) add_entry(rows[r], static_cast<std::uint32_t>(j), x);
  SparseEchelon<F> ech(columns.size());
  for (const auto& r : rows)
    if (!r.empty()) ech.insert(to_sparse(r));
  return ech.nullspace();
}

/// One solution of the affine system sum_j row[j] x_j = rhs (one pair per
/// equation), free variables set to zero; absent when inconsistent.
template <ExactField F>
std::optional<Vec<F>> sparse_affine_solve(const std::vector<std::pair<SparseVec<F>, F>>& equations,
                                          std::size_t ncols) {
  SparseEchelon<F> ech(ncols + 1);
  const auto rhs_col = static_cast<std::uint32_t>(ncols);
  for (const auto& [row, rhs] : equations) {
    SparseVec<F> r = row;
    if (!rhs.is_zero()) r.emplace_back(rhs_col, rhs);
    ech.insert(r);
  }
  const auto pivots = ech.pivot_columns();
  if (!pivots.empty() && pivots.back() == rhs_col) return std::nullopt;
  ech.make_reduced();
  Vec<F> x(ncols, F(0));
  for (auto p : pivots) {
    const auto red = ech.reduce({{p, F(1)}});
    // e_p reduces to -(row without pivot); the rhs entry of the row is x_p
    for (const auto& [c, v] : red.residual)
      if (c == rhs_col) x[p] = -v;
  }
  return x;
}

}  // namespace d2lab
