#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "d2lab/errors.hpp"
#include "d2lab/field.hpp"
#include "d2lab/matrix.hpp"
#include "d2lab/perm_group.hpp"
#include "d2lab/sparse.hpp"

namespace d2lab {

template <ExactField F>
Vec<F> basis_vector(std::size_t n, std::size_t i) {
  Vec<F> v(n, F(0));
  v.at(i) = F(1);
  return v;
}

template <ExactField F>
bool is_zero_vec(const Vec<F>& v) {
  for (const auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

template <ExactField F>
Vec<F> operator+(Vec<F> a, const Vec<F>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

template <ExactField F>
Vec<F> operator-(Vec<F> a, const Vec<F>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

template <ExactField F>
Vec<F> operator*(const F& s, Vec<F> a) {
  for (auto& x : a) x *= s;
  return a;
}

/// Finite-dimensional unital associative algebra given by structure
/// constants: x_i x_j = sum_k c[i][j][k] x_k.
template <ExactField F>
class FDAlgebra {
 public:
  FDAlgebra(std::vector<std::string> labels, std::vector<std::vector<SparseVec<F>>> table, Vec<F> unit,
            bool validate = true)
      : labels_(std::move(labels)), table_(std::move(table)), unit_(std::move(unit)) {
    const std::size_t n = labels_.size();
    if (table_.size() != n || unit_.size() != n) throw std::invalid_argument("FDAlgebra: inconsistent dimensions");
    for (const auto& row : table_)
      if (row.size() != n) throw std::invalid_argument("FDAlgebra: structure table is not square");
    if (validate) check_axioms();
  }

  [[nodiscard]] std::size_t dim() const { return labels_.size(); }
  [[nodiscard]] const std::vector<std::string>& labels() const { return labels_; }
  [[nodiscard]] const Vec<F>& unit() const { return unit_; }
  [[nodiscard]] Vec<F> basis(std::size_t i) const { return basis_vector<F>(dim(), i); }
  [[nodiscard]] const SparseVec<F>& product(std::size_t i, std::size_t j) const { return table_[i][j]; }

  [[nodiscard]] Vec<F> mul(const Vec<F>& a, const Vec<F>& b) const {
    Vec<F> out(dim(), F(0));
    for (std::size_t i = 0; i < dim(); ++i) {
      if (a[i].is_zero()) continue;
      for (std::size_t j = 0; j < dim(); ++j) {
        if (b[j].is_zero()) continue;
        const F s = a[i] * b[j];
        for (const auto& [k, c] : table_[i][j]) out[k] += s * c;
      }
    }
    return out;
  }

  /// Basis element times a vector, and vector times basis element.
  [[nodiscard]] Vec<F> mul_basis_left(std::size_t i, const Vec<F>& b) const {
    Vec<F> out(dim(), F(0));
    for (std::size_t j = 0; j < dim(); ++j)
      if (!b[j].is_zero())
        for (const auto& [k, c] : table_[i][j]) out[k] += b[j] * c;
    return out;
  }
  [[nodiscard]] Vec<F> mul_basis_right(const Vec<F>& a, std::size_t j) const {
    Vec<F> out(dim(), F(0));
    for (std::size_t i = 0; i < dim(); ++i)
      if (!a[i].is_zero())
        for (const auto& [k, c] : table_[i][j]) out[k] += a[i] * c;
    return out;
  }

  [[nodiscard]] std::string str(const Vec<F>& v) const {
    std::string s;
    for (std::size_t i = 0; i < dim(); ++i) {
      if (v[i].is_zero()) continue;
      if (!s.empty()) s += " + ";
      if (!v[i].is_one()) s += "(" + v[i].str() + ")*";
      s += labels_[i];
    }
    return s.empty() ? "0" : s;
  }

 private:
  void check_axioms() const {
    const std::size_t n = dim();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec<F> xi = basis(i);
      if (mul(unit_, xi) != xi || mul(xi, unit_) != xi)
        throw BadUnit("unit law fails on basis element " + labels_[i]);
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const Vec<F> xij = to_dense(table_[i][j], n);
        for (std::size_t k = 0; k < n; ++k) {
          if (mul_basis_right(xij, k) != mul_basis_left(i, to_dense(table_[j][k], n)))
            throw NotAssociative("associativity fails on (" + labels_[i] + ", " + labels_[j] + ", " + labels_[k] + ")");
        }
      }
  }

  std::vector<std::string> labels_;
  std::vector<std::vector<SparseVec<F>>> table_;
  Vec<F> unit_;
};

template <ExactField F>
using AlgebraPtr = std::shared_ptr<const FDAlgebra<F>>;

// ---- builders -------------------------------------------------------------

/// M_n with matrix units e_ij (1-based labels), basis index (i-1)*n + (j-1).
template <ExactField F>
AlgebraPtr<F> matrix_algebra(std::size_t n) {
  const std::size_t d = n * n;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) labels.push_back("e" + std::to_string(i + 1) + std::to_string(j + 1));
  std::vector<std::vector<SparseVec<F>>> table(d, std::vector<SparseVec<F>>(d));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t l = 0; l < n; ++l)
        table[i * n + j][j * n + l] = {{static_cast<std::uint32_t>(i * n + l), F(1)}};
  Vec<F> unit(d, F(0));
  for (std::size_t i = 0; i < n; ++i) unit[i * n + i] = F(1);
  return std::make_shared<const FDAlgebra<F>>(std::move(labels), std::move(table), std::move(unit));
}

/// Upper triangular n x n matrices with basis e_ij, i <= j, in row-major order.
template <ExactField F>
AlgebraPtr<F> triangular_algebra(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> units;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) units.emplace_back(i, j);
  const std::size_t d = units.size();
  auto index = [&](std::size_t i, std::size_t j) {
    for (std::size_t k = 0; k < d; ++k)
      if (units[k] == std::make_pair(i, j)) return k;
    return d;
  };
  std::vector<std::string> labels;
  for (auto [i, j] : units) labels.push_back("e" + std::to_string(i + 1) + std::to_string(j + 1));
  std::vector<std::vector<SparseVec<F>>> table(d, std::vector<SparseVec<F>>(d));
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      if (units[a].second == units[b].first)
        table[a][b] = {{static_cast<std::uint32_t>(index(units[a].first, units[b].second)), F(1)}};
  Vec<F> unit(d, F(0));
  for (std::size_t i = 0; i < n; ++i) unit[index(i, i)] = F(1);
  return std::make_shared<const FDAlgebra<F>>(std::move(labels), std::move(table), std::move(unit));
}

/// K^n with orthogonal idempotents p1..pn.
template <ExactField F>
AlgebraPtr<F> product_algebra(std::size_t n) {
  std::vector<std::string> labels;
  std::vector<std::vector<SparseVec<F>>> table(n, std::vector<SparseVec<F>>(n));
  for (std::size_t i = 0; i < n; ++i) {
    labels.push_back("p" + std::to_string(i + 1));
    table[i][i] = {{static_cast<std::uint32_t>(i), F(1)}};
  }
  return std::make_shared<const FDAlgebra<F>>(std::move(labels), std::move(table), Vec<F>(n, F(1)));
}

/// Group algebra with basis the elements of G in the group's element order.
template <ExactField F>
AlgebraPtr<F> group_algebra(const PermGroup& g) {
  const std::size_t n = g.order();
  std::vector<std::string> labels;
  for (const auto& p : g.elements()) labels.push_back(p.str());
  std::vector<std::vector<SparseVec<F>>> table(n, std::vector<SparseVec<F>>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) table[i][j] = {{static_cast<std::uint32_t>(g.mul(i, j)), F(1)}};
  return std::make_shared<const FDAlgebra<F>>(std::move(labels), std::move(table), basis_vector<F>(n, g.identity_index()),
                                              n <= 8);
}

/// K[x]/(x^k) with basis 1, x, ..., x^{k-1}.
template <ExactField F>
AlgebraPtr<F> truncated_polynomial_algebra(std::size_t k) {
  std::vector<std::string> labels;
  std::vector<std::vector<SparseVec<F>>> table(k, std::vector<SparseVec<F>>(k));
  for (std::size_t i = 0; i < k; ++i) {
    labels.push_back(i == 0 ? "1" : (i == 1 ? "x" : "x^" + std::to_string(i)));
    for (std::size_t j = 0; i + j < k; ++j) table[i][j] = {{static_cast<std::uint32_t>(i + j), F(1)}};
  }
  return std::make_shared<const FDAlgebra<F>>(std::move(labels), std::move(table), basis_vector<F>(k, 0));
}

/// A = K[y]/(y^2) x K with basis u = (1,0), v = (y,0), w = (0,1). The
/// subalgebra span{u + w, v} is a copy of K[y]/(y^2) over which A is not
/// projective (the summand K = B/(y) is not).
template <ExactField F>
AlgebraPtr<F> dual_numbers_times_field() {
  std::vector<std::vector<SparseVec<F>>> table(3, std::vector<SparseVec<F>>(3));
  table[0][0] = {{0, F(1)}};
  table[0][1] = {{1, F(1)}};
  table[1][0] = {{1, F(1)}};
  table[2][2] = {{2, F(1)}};
  return std::make_shared<const FDAlgebra<F>>(std::vector<std::string>{"u", "v", "w"}, std::move(table),
                                              Vec<F>{F(1), F(0), F(1)});
}

// ---- subalgebra specs -------------------------------------------------------

template <ExactField F>
std::vector<Vec<F>> scalars_subalgebra(const FDAlgebra<F>& a) {
  return {a.unit()};
}

template <ExactField F>
std::vector<Vec<F>> whole_subalgebra(const FDAlgebra<F>& a) {
  std::vector<Vec<F>> out;
  for (std::size_t i = 0; i < a.dim(); ++i) out.push_back(a.basis(i));
  return out;
}

/// Diagonal matrix units e_ii inside matrix_algebra or triangular_algebra.
template <ExactField F>
std::vector<Vec<F>> diagonal_subalgebra(const FDAlgebra<F>& a) {
  std::vector<Vec<F>> out;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const auto& l = a.labels()[i];
    if (l.size() == 3 && l[0] == 'e' && l[1] == l[2]) out.push_back(a.basis(i));
  }
  return out;
}

/// The subgroup algebra KH inside KG (group_algebra basis).
template <ExactField F>
std::vector<Vec<F>> subgroup_subalgebra(const SubgroupEmbedding& emb) {
  std::vector<Vec<F>> out;
  for (auto i : emb.ambient_index) out.push_back(basis_vector<F>(emb.ambient->order(), i));
  return out;
}

// ---- subspaces --------------------------------------------------------------

/// Coordinates with respect to a fixed independent list of vectors.
template <ExactField F>
class SubspaceCoords {
 public:
  SubspaceCoords() = default;
  SubspaceCoords(const std::vector<Vec<F>>& basis, std::size_t n) : ech_(n, true), size_(basis.size()) {
    for (const auto& b : basis)
      if (!ech_.insert(to_sparse(b))) throw std::invalid_argument("SubspaceCoords: basis is dependent");
  }
  [[nodiscard]] std::optional<Vec<F>> try_coords(const Vec<F>& v) const {
    auto c = ech_.express(to_sparse(v));
    if (!c) return std::nullopt;
    return to_dense(*c, size_);
  }
  [[nodiscard]] Vec<F> coords(const Vec<F>& v) const {
    auto c = try_coords(v);
    if (!c) throw ConsistencyFailure("vector is not in the expected subspace");
    return *c;
  }
  [[nodiscard]] bool contains(const Vec<F>& v) const { return ech_.contains(to_sparse(v)); }

 private:
  SparseEchelon<F> ech_{0, true};
  std::size_t size_ = 0;
};

/// Basis of {x in A : xs = sx for every s in subset}.
template <ExactField F>
std::vector<Vec<F>> centralizer(const FDAlgebra<F>& a, const std::vector<Vec<F>>& subset) {
  const std::size_t n = a.dim();
  SparseEchelon<F> ech(n);
  for (const auto& s : subset) {
    // column j of (R_s - L_s) is x_j s - s x_j
    std::vector<Accumulator<F>> rows(n);
    for (std::size_t j = 0; j < n; ++j) {
      const Vec<F> col = a.mul_basis_left(j, s) - a.mul_basis_right(s, j);
      for (std::size_t r = 0; r < n; ++r)
        if (!col[r].is_zero()) add_entry(rows[r], static_cast<std::uint32_t>(j), col[r]);
    }
    for (const auto& r : rows)
      if (!r.empty()) ech.insert(to_sparse(r));
  }
  std::vector<Vec<F>> out;
  for (const auto& v : ech.nullspace()) out.push_back(to_dense(v, n));
  return out;
}

/// A unital subalgebra B of A together with its centralizer R = C_A(B) and
/// the center Z(A).
template <ExactField F>
struct ExtensionData {
  AlgebraPtr<F> A;
  std::vector<Vec<F>> B;
  std::vector<Vec<F>> R;
  std::vector<Vec<F>> Z;
  SubspaceCoords<F> B_coords;
  SubspaceCoords<F> R_coords;

  [[nodiscard]] std::size_t n() const { return A->dim(); }
};

template <ExactField F>
ExtensionData<F> build_extension(const AlgebraPtr<F>& a, const std::vector<Vec<F>>& b_vectors) {
  const std::size_t n = a->dim();
  ExtensionData<F> ext;
  ext.A = a;
  SparseEchelon<F> ech(n);
  for (const auto& v : b_vectors) {
    if (v.size() != n) throw std::invalid_argument("subalgebra vector has wrong length");
    if (ech.insert(to_sparse(v))) ext.B.push_back(v);
  }
  if (ext.B.empty()) throw UnitMissing("subalgebra is zero");
  ext.B_coords = SubspaceCoords<F>(ext.B, n);
  if (!ext.B_coords.contains(a->unit())) throw UnitMissing("subalgebra does not contain the unit");
  for (const auto& x : ext.B)
    for (const auto& y : ext.B)
      if (!ext.B_coords.contains(a->mul(x, y))) throw NotClosed("subalgebra is not closed under multiplication");
  ext.R = centralizer(*a, ext.B);
  ext.Z = centralizer(*a, whole_subalgebra(*a));
  ext.R_coords = SubspaceCoords<F>(ext.R, n);
  return ext;
}

// ---- tensor square ----------------------------------------------------------

/// A (x)_B A realized as the quotient of A (x) A (flat index i*n + k) by the
/// relations x_i b (x) x_k - x_i (x) b x_k. Quotient coordinates are indexed by
/// the free (non-pivot) flat indices of the relation echelon, so the basis
/// tensor of coordinate f is x_i (x) x_k with (i, k) = components(f).
template <ExactField F>
class TensorSquare {
 public:
  using Elem = SparseVec<F>;

  explicit TensorSquare(const ExtensionData<F>& ext) : alg_(ext.A), n_(ext.n()) {
    const FDAlgebra<F>& a = *alg_;
    const std::size_t nn = n_ * n_;
    SparseEchelon<F> ech(nn);
    for (const auto& b : ext.B) {
      std::vector<Vec<F>> b_x(n_), x_b(n_);
      for (std::size_t i = 0; i < n_; ++i) {
        b_x[i] = a.mul_basis_right(b, i);
        x_b[i] = a.mul_basis_left(i, b);
      }
      for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t k = 0; k < n_; ++k) {
          Accumulator<F> rel;
          for (std::size_t m = 0; m < n_; ++m) {
            add_entry(rel, static_cast<std::uint32_t>(m * n_ + k), x_b[i][m]);
            add_entry(rel, static_cast<std::uint32_t>(i * n_ + m), -b_x[k][m]);
          }
          if (!rel.empty()) ech.insert(to_sparse(rel));
        }
    }
    ech.make_reduced();
    free_ = ech.free_columns();
    free_index_.assign(nn, -1);
    for (std::size_t f = 0; f < free_.size(); ++f) free_index_[free_[f]] = static_cast<long>(f);
    proj_.resize(nn);
    for (std::size_t c = 0; c < nn; ++c) {
      if (free_index_[c] >= 0) {
        proj_[c] = {{static_cast<std::uint32_t>(free_index_[c]), F(1)}};
      } else {
        proj_[c] = ech.quotient_coordinates({{static_cast<std::uint32_t>(c), F(1)}}, free_index_);
      }
    }
    left_.assign(n_, std::vector<Elem>(dim()));
    right_.assign(n_, std::vector<Elem>(dim()));
    for (std::size_t l = 0; l < n_; ++l)
      for (std::size_t f = 0; f < dim(); ++f) {
        const auto [i, k] = components(f);
        Accumulator<F> accl, accr;
        for (const auto& [m, c] : a.product(l, i)) axpy(accl, c, proj_[m * n_ + k]);
        for (const auto& [m, c] : a.product(k, l)) axpy(accr, c, proj_[i * n_ + m]);
        left_[l][f] = to_sparse(accl);
        right_[l][f] = to_sparse(accr);
      }
  }

  [[nodiscard]] std::size_t dim() const { return free_.size(); }
  [[nodiscard]] std::size_t algebra_dim() const { return n_; }
  [[nodiscard]] const FDAlgebra<F>& algebra() const { return *alg_; }

  [[nodiscard]] std::pair<std::size_t, std::size_t> components(std::size_t f) const {
    return {free_[f] / n_, free_[f] % n_};
  }

  /// x_i (x) x_k
  [[nodiscard]] const Elem& simple(std::size_t i, std::size_t k) const { return proj_[i * n_ + k]; }

  /// a (x) a'
  [[nodiscard]] Elem tensor(const Vec<F>& a, const Vec<F>& b) const {
    Accumulator<F> acc;
    for (std::size_t i = 0; i < n_; ++i) {
      if (a[i].is_zero()) continue;
      for (std::size_t k = 0; k < n_; ++k)
        if (!b[k].is_zero()) axpy(acc, a[i] * b[k], proj_[i * n_ + k]);
    }
    return to_sparse(acc);
  }

  /// a u
  [[nodiscard]] Elem left(const Vec<F>& a, const Elem& u) const {
    Accumulator<F> acc;
    for (std::size_t l = 0; l < n_; ++l) {
      if (a[l].is_zero()) continue;
      for (const auto& [f, c] : u) axpy(acc, a[l] * c, left_[l][f]);
    }
    return to_sparse(acc);
  }
  [[nodiscard]] Elem left_basis(std::size_t l, const Elem& u) const {
    Accumulator<F> acc;
    for (const auto& [f, c] : u) axpy(acc, c, left_[l][f]);
    return to_sparse(acc);
  }

  /// u a
  [[nodiscard]] Elem right(const Elem& u, const Vec<F>& a) const {
    Accumulator<F> acc;
    for (std::size_t l = 0; l < n_; ++l) {
      if (a[l].is_zero()) continue;
      for (const auto& [f, c] : u) axpy(acc, a[l] * c, right_[l][f]);
    }
    return to_sparse(acc);
  }
  [[nodiscard]] Elem right_basis(const Elem& u, std::size_t l) const {
    Accumulator<F> acc;
    for (const auto& [f, c] : u) axpy(acc, c, right_[l][f]);
    return to_sparse(acc);
  }

  /// mu(u) = u^1 u^2
  [[nodiscard]] Vec<F> mu(const Elem& u) const {
    Vec<F> out(n_, F(0));
    for (const auto& [f, c] : u) {
      const auto [i, k] = components(f);
      for (const auto& [m, x] : alg_->product(i, k)) out[m] += c * x;
    }
    return out;
  }

  /// u^1 r u^2 for r in R (well defined since r commutes with B).
  [[nodiscard]] Vec<F> sandwich(const Elem& u, const Vec<F>& r) const {
    Vec<F> out(n_, F(0));
    for (const auto& [f, c] : u) {
      const auto [i, k] = components(f);
      const Vec<F> rk = alg_->mul_basis_right(r, k);
      out = out + c * alg_->mul_basis_left(i, rk);
    }
    return out;
  }

  /// Basis of {u : x u = u x for every x in `acting`}.
  [[nodiscard]] std::vector<Elem> central_elements(const std::vector<Vec<F>>& acting) const {
    SparseEchelon<F> ech(dim());
    for (const auto& x : acting) {
      std::vector<Accumulator<F>> rows(dim());
      for (std::size_t f = 0; f < dim(); ++f) {
        Accumulator<F> col;
        const Elem e{{static_cast<std::uint32_t>(f), F(1)}};
        for (const auto& [r, c] : left(x, e)) add_entry(col, r, c);
        for (const auto& [r, c] : right(e, x)) add_entry(col, r, -c);
        for (const auto& [r, c] : col) add_entry(rows[r], static_cast<std::uint32_t>(f), c);
      }
      for (const auto& r : rows)
        if (!r.empty()) ech.insert(to_sparse(r));
    }
    return ech.nullspace();
  }

  [[nodiscard]] std::string str(const Elem& u) const {
    std::string s;
    for (const auto& [f, c] : u) {
      const auto [i, k] = components(f);
      if (!s.empty()) s += " + ";
      if (!c.is_one()) s += "(" + c.str() + ")*";
      s += alg_->labels()[i] + "⊗" + alg_->labels()[k];
    }
    return s.empty() ? "0" : s;
  }

 private:
  AlgebraPtr<F> alg_;
  std::size_t n_;
  std::vector<std::uint32_t> free_;
  std::vector<long> free_index_;
  std::vector<Elem> proj_;
  std::vector<std::vector<Elem>> left_, right_;
};

// ---- endomorphism spaces ----------------------------------------------------

/// Linear map of A stored by rows: (k, a) entry is the coefficient of x_a in f(x_k).
template <ExactField F>
using LinearMap = Matrix<F>;

template <ExactField F>
Vec<F> apply_map(const LinearMap<F>& f, const Vec<F>& v) {
  Vec<F> out(f.cols(), F(0));
  for (std::size_t k = 0; k < f.rows(); ++k) {
    if (v[k].is_zero()) continue;
    for (std::size_t a = 0; a < f.cols(); ++a)
      if (!f(k, a).is_zero()) out[a] += v[k] * f(k, a);
  }
  return out;
}

template <ExactField F>
LinearMap<F> map_from_flat(const SparseVec<F>& flat, std::size_t n) {
  LinearMap<F> m(n, n);
  for (const auto& [idx, c] : flat) m(idx / n, idx % n) = c;
  return m;
}

template <ExactField F>
LinearMap<F> identity_map(std::size_t n) {
  return LinearMap<F>::identity(n);
}

/// S = End(_B A_B) and A_hat = {f in S : f(A) in B}.
template <ExactField F>
struct BimoduleEndos {
  std::vector<LinearMap<F>> S;
  std::vector<LinearMap<F>> A_hat;
};

template <ExactField F>
BimoduleEndos<F> bimodule_endos(const ExtensionData<F>& ext) {
  const FDAlgebra<F>& a = *ext.A;
  const std::size_t n = a.dim();
  std::vector<SparseVec<F>> eqs;
  for (const auto& b : ext.B) {
    std::vector<Vec<F>> bx(n), xb(n);
    for (std::size_t m = 0; m < n; ++m) {
      bx[m] = a.mul_basis_right(b, m);
      xb[m] = a.mul_basis_left(m, b);
    }
    for (int side = 0; side < 2; ++side) {
      const auto& act = side == 0 ? bx : xb;
      for (std::size_t k = 0; k < n; ++k) {
        // f(act(x_k)) - act(f(x_k)) = 0, coordinate a
        std::vector<Accumulator<F>> rows(n);
        for (std::size_t m = 0; m < n; ++m) {
          if (act[k][m].is_zero()) continue;
          for (std::size_t c = 0; c < n; ++c) add_entry(rows[c], static_cast<std::uint32_t>(m * n + c), act[k][m]);
        }
        for (std::size_t m = 0; m < n; ++m)
          for (std::size_t c = 0; c < n; ++c)
            if (!act[m][c].is_zero()) add_entry(rows[c], static_cast<std::uint32_t>(k * n + m), -act[m][c]);
        for (auto& r : rows)
          if (!r.empty()) eqs.push_back(to_sparse(r));
      }
    }
  }
  BimoduleEndos<F> out;
  {
    SparseEchelon<F> ech(n * n);
    for (const auto& e : eqs) ech.insert(e);
    for (const auto& v : ech.nullspace()) out.S.push_back(map_from_flat(v, n));
  }
  // functionals vanishing on B
  Matrix<F> bm(ext.B.size(), n);
  for (std::size_t i = 0; i < ext.B.size(); ++i)
    for (std::size_t j = 0; j < n; ++j) bm(i, j) = ext.B[i][j];
  for (const auto& phi : nullspace(bm))
    for (std::size_t k = 0; k < n; ++k) {
      SparseVec<F> e;
      for (std::size_t c = 0; c < n; ++c)
        if (!phi[c].is_zero()) e.emplace_back(static_cast<std::uint32_t>(k * n + c), phi[c]);
      eqs.push_back(std::move(e));
    }
  SparseEchelon<F> ech(n * n);
  for (const auto& e : eqs) ech.insert(e);
  for (const auto& v : ech.nullspace()) out.A_hat.push_back(map_from_flat(v, n));
  return out;
}

// ---- the ring T and its actions --------------------------------------------

/// Everything about an extension that the depth-two, separability and
/// Frobenius tests share: the tensor square, T, the Casimir elements and the
/// bimodule endomorphism spaces.
template <ExactField F>
struct ExtensionSpaces {
  using Elem = SparseVec<F>;
  ExtensionData<F> ext;
  TensorSquare<F> Q;
  std::vector<Elem> T;
  std::vector<Elem> C;
  BimoduleEndos<F> ends;

  explicit ExtensionSpaces(ExtensionData<F> e)
      : ext(std::move(e)), Q(ext), T(Q.central_elements(ext.B)), C(Q.central_elements(whole_subalgebra(*ext.A))),
        ends(bimodule_endos(ext)) {}

  [[nodiscard]] const FDAlgebra<F>& A() const { return *ext.A; }
  [[nodiscard]] std::size_t n() const { return ext.n(); }

  [[nodiscard]] Elem one_one() const { return Q.tensor(A().unit(), A().unit()); }

  /// tt' = t'^1 t^1 (x) t^2 t'^2
  [[nodiscard]] Elem t_multiply(const Elem& t, const Elem& tp) const {
    Accumulator<F> acc;
    for (const auto& [g, c] : tp) {
      const auto [i, k] = Q.components(g);
      axpy(acc, c, Q.right_basis(Q.left_basis(i, t), k));
    }
    return to_sparse(acc);
  }

  /// r . t = t^1 r t^2
  [[nodiscard]] Vec<F> rt_action(const Vec<F>& r, const Elem& t) const { return Q.sandwich(t, r); }

  [[nodiscard]] Elem sigma(const Vec<F>& r) const { return Q.tensor(A().unit(), r); }
  [[nodiscard]] Elem tau(const Vec<F>& r) const { return Q.tensor(r, A().unit()); }

  [[nodiscard]] Vec<F> eps_S(const LinearMap<F>& alpha) const { return apply_map(alpha, A().unit()); }
  [[nodiscard]] Vec<F> eps_T(const Elem& t) const { return Q.mu(t); }

  /// <alpha | t> = alpha(t^1) t^2
  [[nodiscard]] Vec<F> pairing(const LinearMap<F>& alpha, const Elem& t) const {
    Vec<F> out(n(), F(0));
    for (const auto& [f, c] : t) {
      const auto [i, k] = Q.components(f);
      out = out + c * A().mul_basis_right(apply_map(alpha, A().basis(i)), k);
    }
    return out;
  }

  [[nodiscard]] bool in_R(const Vec<F>& x) const { return ext.R_coords.contains(x); }

  [[nodiscard]] bool in_T(const Elem& u) const {
    for (const auto& b : ext.B)
      if (Q.left(b, u) != Q.right(u, b)) return false;
    return true;
  }
  [[nodiscard]] bool in_C(const Elem& u) const {
    for (std::size_t l = 0; l < n(); ++l)
      if (Q.left_basis(l, u) != Q.right_basis(u, l)) return false;
    return true;
  }
};

}  // namespace d2lab
