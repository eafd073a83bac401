#pragma once

#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "d2lab/algebra.hpp"

namespace d2lab {

enum class Side { left, right };

inline const char* side_name(Side s) { return s == Side::left ? "left" : "right"; }

// ---- generating sets --------------------------------------------------------

/// Greedy generators of A as a B-B-bimodule, taken from the basis of A.
template <ExactField F>
std::vector<std::size_t> bimodule_generators(const ExtensionData<F>& ext) {
  const FDAlgebra<F>& a = *ext.A;
  SparseEchelon<F> span(a.dim());
  std::vector<std::size_t> gens;
  for (std::size_t k = 0; k < a.dim() && !span.full(); ++k) {
    if (span.contains(to_sparse(a.basis(k)))) continue;
    gens.push_back(k);
    for (const auto& b : ext.B) {
      const Vec<F> bx = a.mul_basis_right(b, k);
      for (const auto& bp : ext.B) span.insert(to_sparse(a.mul(bx, bp)));
    }
  }
  return gens;
}

/// Greedy generators of A as a right B-module.
template <ExactField F>
std::vector<std::size_t> right_module_generators(const ExtensionData<F>& ext) {
  const FDAlgebra<F>& a = *ext.A;
  SparseEchelon<F> span(a.dim());
  std::vector<std::size_t> gens;
  for (std::size_t k = 0; k < a.dim() && !span.full(); ++k) {
    if (span.contains(to_sparse(a.basis(k)))) continue;
    gens.push_back(k);
    for (const auto& b : ext.B) span.insert(to_sparse(a.mul_basis_left(k, b)));
  }
  return gens;
}

/// Greedy generators (from the T basis) of T as a right R-module under
/// t.r = t^1 (x) t^2 r (side left) or a left R-module under r.t = r t^1 (x) t^2
/// (side right).
template <ExactField F>
std::vector<SparseVec<F>> t_module_generators(const ExtensionSpaces<F>& sp, Side side) {
  SparseEchelon<F> span(sp.Q.dim());
  std::vector<SparseVec<F>> gens;
  for (const auto& t : sp.T) {
    if (span.rank() == sp.T.size()) break;
    if (span.contains(t)) continue;
    gens.push_back(t);
    for (const auto& r : sp.ext.R) span.insert(side == Side::left ? sp.Q.right(t, r) : sp.Q.left(r, t));
  }
  return gens;
}

// ---- depth two --------------------------------------------------------------

template <ExactField F>
struct QuasibaseCertificate {
  Side side = Side::left;
  std::vector<SparseVec<F>> t;       // t_j in T
  std::vector<LinearMap<F>> beta;    // beta_j in S
};

/// Checks the quasibase identity on every x (x) 1 (left) or 1 (x) x (right).
template <ExactField F>
bool verify_quasibase(const ExtensionSpaces<F>& sp, const QuasibaseCertificate<F>& cert) {
  const FDAlgebra<F>& a = sp.A();
  for (const auto& t : cert.t)
    if (!sp.in_T(t)) return false;
  for (std::size_t x = 0; x < a.dim(); ++x) {
    Accumulator<F> acc;
    for (std::size_t j = 0; j < cert.t.size(); ++j) {
      const Vec<F> bx = apply_map(cert.beta[j], a.basis(x));
      axpy(acc, F(1), cert.side == Side::left ? sp.Q.right(cert.t[j], bx) : sp.Q.left(bx, cert.t[j]));
    }
    const auto expect =
        cert.side == Side::left ? sp.Q.tensor(a.basis(x), a.unit()) : sp.Q.tensor(a.unit(), a.basis(x));
    if (to_sparse(acc) != expect) return false;
  }
  return true;
}

template <ExactField F>
struct D2SideResult {
  Side side = Side::left;
  std::optional<QuasibaseCertificate<F>> certificate;
  std::size_t candidates = 0;
  [[nodiscard]] bool holds() const { return certificate.has_value(); }
};

/// Decides whether a (x) a' = sum_j t_j beta_j(a) a' (left) or
/// a (x) a' = sum_j a beta_j(a') t_j (right) admits a solution with t_j in T
/// and beta_j in S. Both sides of the identity are B-A (resp. A-B) bimodule
/// maps, so it is enough to compare them on x (x) 1 (resp. 1 (x) x) for x in a
/// generating set of A as a B-B-bimodule; and since t r beta = t (r beta) with
/// r beta again in S, t may range over R-module generators of T.
template <ExactField F>
D2SideResult<F> d2_test(const ExtensionSpaces<F>& sp, Side side) {
  const auto& Q = sp.Q;
  const FDAlgebra<F>& a = sp.A();
  const std::size_t q = Q.dim();
  const auto xs = bimodule_generators(sp.ext);
  const auto tgens = t_module_generators(sp, side);
  const auto& S = sp.ends.S;
  const Vec<F> one = a.unit();

  auto stacked = [&](auto&& value_at) {
    Accumulator<F> acc;
    for (std::size_t g = 0; g < xs.size(); ++g) {
      const SparseVec<F> v = value_at(xs[g]);
      for (const auto& [c, x] : v) acc.emplace(static_cast<std::uint32_t>(g * q + c), x);
    }
    return to_sparse(acc);
  };

  SparseEchelon<F> ech(xs.size() * q, true);
  std::vector<std::pair<std::size_t, std::size_t>> input_pairs;
  for (std::size_t i = 0; i < tgens.size(); ++i)
    for (std::size_t j = 0; j < S.size(); ++j) {
      const auto v = stacked([&](std::size_t x) {
        const Vec<F> bx = apply_map(S[j], a.basis(x));
        return side == Side::left ? Q.right(tgens[i], bx) : Q.left(bx, tgens[i]);
      });
      ech.insert(v);
      input_pairs.emplace_back(i, j);
    }
  const auto target = stacked([&](std::size_t x) {
    return side == Side::left ? Q.tensor(a.basis(x), one) : Q.tensor(one, a.basis(x));
  });

  D2SideResult<F> res;
  res.side = side;
  res.candidates = input_pairs.size();
  auto combo = ech.express(target);
  if (!combo) return res;

  QuasibaseCertificate<F> cert;
  cert.side = side;
  std::vector<std::optional<LinearMap<F>>> beta(tgens.size());
  for (const auto& [input, c] : *combo) {
    const auto [i, j] = input_pairs[input];
    if (!beta[i]) {
      beta[i] = c * S[j];
    } else {
      *beta[i] = *beta[i] + c * S[j];
    }
  }
  for (std::size_t i = 0; i < tgens.size(); ++i)
    if (beta[i]) {
      cert.t.push_back(tgens[i]);
      cert.beta.push_back(std::move(*beta[i]));
    }
  if (!verify_quasibase(sp, cert)) throw ConsistencyFailure("d2_test: quasibase certificate fails verification");
  res.certificate = std::move(cert);
  return res;
}

// ---- R (x)_T and End(R_T) checks -------------------------------------------------------

struct GammaReport {
  std::size_t quotient_dim = 0;
  std::size_t gamma_rank = 0;
  std::size_t algebra_dim = 0;
  [[nodiscard]] bool bijective() const { return quotient_dim == algebra_dim && gamma_rank == algebra_dim; }
};

/// R (x)_T (A (x)_B A) as the quotient of R (x) (A (x)_B A) by
/// (r.t) (x) u - r (x) (t.u) with t.(a (x) a') = a t^1 (x) t^2 a', and the map
/// gamma(r (x) a (x) a') = a r a'.
template <ExactField F>
GammaReport gamma_check(const ExtensionSpaces<F>& sp) {
  const auto& Q = sp.Q;
  const FDAlgebra<F>& a = sp.A();
  const auto& R = sp.ext.R;
  const std::size_t q = Q.dim();
  const std::size_t rdim = R.size();
  SparseEchelon<F> ech(rdim * q);
  // t.x_f for every T basis element t and quotient basis tensor x_f
  for (const auto& t : sp.T) {
    std::vector<Vec<F>> rt(rdim);
    for (std::size_t i = 0; i < rdim; ++i) rt[i] = sp.ext.R_coords.coords(sp.rt_action(R[i], t));
    for (std::size_t f = 0; f < q; ++f) {
      const auto [fi, fk] = Q.components(f);
      const SparseVec<F> tu = Q.right_basis(Q.left_basis(fi, t), fk);
      for (std::size_t i = 0; i < rdim; ++i) {
        Accumulator<F> rel;
        for (std::size_t m = 0; m < rdim; ++m) add_entry(rel, static_cast<std::uint32_t>(m * q + f), rt[i][m]);
        for (const auto& [g, c] : tu) add_entry(rel, static_cast<std::uint32_t>(i * q + g), -c);
        if (!rel.empty()) ech.insert(to_sparse(rel));
      }
    }
  }
  GammaReport rep;
  rep.algebra_dim = a.dim();
  rep.quotient_dim = rdim * q - ech.rank();
  SparseEchelon<F> image(a.dim());
  for (std::size_t i = 0; i < rdim && !image.full(); ++i)
    for (std::size_t f = 0; f < q && !image.full(); ++f) {
      const auto [fi, fk] = Q.components(f);
      image.insert(to_sparse(a.mul_basis_left(fi, a.mul_basis_right(R[i], fk))));
    }
  rep.gamma_rank = image.rank();
  return rep;
}

struct EndRTReport {
  std::size_t end_dim = 0;
  std::size_t center_dim = 0;
  bool lambda_injective = false;
  [[nodiscard]] bool equal() const { return end_dim == center_dim; }
};

/// End(R_T) = {f : R -> R linear with f(r.t) = f(r).t}, compared with Z(A)
/// embedded by left multiplication.
template <ExactField F>
EndRTReport end_rt_check(const ExtensionSpaces<F>& sp) {
  const auto& R = sp.ext.R;
  const std::size_t d = R.size();
  // P_t[m][i] = m-th coordinate of r_i . t
  std::vector<Matrix<F>> P;
  for (const auto& t : sp.T) {
    Matrix<F> p(d, d);
    for (std::size_t i = 0; i < d; ++i) {
      const Vec<F> c = sp.ext.R_coords.coords(sp.rt_action(R[i], t));
      for (std::size_t m = 0; m < d; ++m) p(m, i) = c[m];
    }
    P.push_back(std::move(p));
  }
  // unknown matrix X (index m*d + i): X P - P X = 0
  SparseEchelon<F> ech(d * d);
  for (const auto& p : P)
    for (std::size_t m = 0; m < d; ++m)
      for (std::size_t i = 0; i < d; ++i) {
        Accumulator<F> row;
        for (std::size_t k = 0; k < d; ++k) {
          add_entry(row, static_cast<std::uint32_t>(m * d + k), p(k, i));
          add_entry(row, static_cast<std::uint32_t>(k * d + i), -p(m, k));
        }
        if (!row.empty()) ech.insert(to_sparse(row));
      }
  EndRTReport rep;
  rep.end_dim = d * d - ech.rank();
  rep.center_dim = sp.ext.Z.size();
  SparseEchelon<F> lam(d * d);
  bool all_in = true;
  for (const auto& z : sp.ext.Z) {
    Accumulator<F> flat;
    for (std::size_t i = 0; i < d; ++i) {
      const Vec<F> c = sp.ext.R_coords.coords(sp.A().mul(z, R[i]));
      for (std::size_t m = 0; m < d; ++m) add_entry(flat, static_cast<std::uint32_t>(m * d + i), c[m]);
    }
    const auto v = to_sparse(flat);
    Matrix<F> x(d, d);
    for (const auto& [idx, c] : v) x(idx / d, idx % d) = c;
    for (const auto& p : P)
      if (x * p != p * x) all_in = false;
    lam.insert(v);
  }
  rep.lambda_injective = all_in && lam.rank() == sp.ext.Z.size();
  return rep;
}

// ---- separability -----------------------------------------------------------

template <ExactField F>
struct SeparabilityResult {
  std::optional<SparseVec<F>> element;
  bool in_T_prime = false;
  bool witness_identity = false;
};

/// Checks e in T': t^1 e t^2 = e eps_T(t) = eps_T(t) e for every T basis t.
template <ExactField F>
bool in_T_prime(const ExtensionSpaces<F>& sp, const SparseVec<F>& e) {
  if (!sp.in_T(e)) return false;
  for (const auto& t : sp.T) {
    const auto lhs = sp.t_multiply(e, t);
    const Vec<F> eps = sp.eps_T(t);
    if (lhs != sp.Q.right(e, eps) || lhs != sp.Q.left(eps, e)) return false;
  }
  return true;
}

template <ExactField F>
SeparabilityResult<F> separability_element(const ExtensionSpaces<F>& sp) {
  const FDAlgebra<F>& a = sp.A();
  SeparabilityResult<F> res;
  Matrix<F> m(a.dim(), sp.C.size());
  for (std::size_t k = 0; k < sp.C.size(); ++k) {
    const Vec<F> mu = sp.Q.mu(sp.C[k]);
    for (std::size_t i = 0; i < a.dim(); ++i) m(i, k) = mu[i];
  }
  const auto sol = solve_linear(m, a.unit());
  if (!sol) return res;
  const SparseVec<F> e = linear_combination(sp.C, sol->particular);
  if (sp.Q.mu(e) != a.unit() || !sp.in_C(e)) throw ConsistencyFailure("separability element fails verification");
  res.in_T_prime = in_T_prime(sp, e);
  res.witness_identity = true;
  for (const auto& r : sp.ext.R) {
    const Vec<F> e1e2 = sp.Q.mu(e);
    if (a.mul(e1e2, r) != r || a.mul(r, e1e2) != r) res.witness_identity = false;
  }
  res.element = e;
  return res;
}

/// Flip a (x) a' -> a' (x) a on the tensor square; only defined when B is central.
template <ExactField F>
SparseVec<F> flip(const ExtensionSpaces<F>& sp, const SparseVec<F>& u) {
  Accumulator<F> acc;
  for (const auto& [f, c] : u) {
    const auto [i, k] = sp.Q.components(f);
    axpy(acc, c, sp.Q.simple(k, i));
  }
  return to_sparse(acc);
}

template <ExactField F>
bool subalgebra_is_central(const ExtensionData<F>& ext) {
  SubspaceCoords<F> z(ext.Z, ext.n());
  for (const auto& b : ext.B)
    if (!z.contains(b)) return false;
  return true;
}

template <ExactField F>
struct SymmetricSeparability {
  std::optional<SparseVec<F>> element;
  std::size_t solution_space_dim = 0;  // dimension of the affine solution set
  [[nodiscard]] bool unique() const { return element && solution_space_dim == 0; }
};

/// Separability elements fixed by the flip. Requires B inside the center.
template <ExactField F>
SymmetricSeparability<F> symmetric_separability_element(const ExtensionSpaces<F>& sp) {
  if (!subalgebra_is_central(sp.ext)) throw std::invalid_argument("flip is only defined over a central subalgebra");
  const FDAlgebra<F>& a = sp.A();
  const std::size_t q = sp.Q.dim();
  const std::size_t c = sp.C.size();
  // unknowns: coefficients over C; equations: mu = 1 and flip(e) - e = 0
  Matrix<F> m(a.dim() + q, c);
  for (std::size_t k = 0; k < c; ++k) {
    const Vec<F> mu = sp.Q.mu(sp.C[k]);
    for (std::size_t i = 0; i < a.dim(); ++i) m(i, k) = mu[i];
    Accumulator<F> d;
    axpy(d, F(1), flip(sp, sp.C[k]));
    axpy(d, F(-1), sp.C[k]);
    for (const auto& [r, x] : d) m(a.dim() + r, k) = x;
  }
  Vec<F> rhs(a.dim() + q, F(0));
  for (std::size_t i = 0; i < a.dim(); ++i) rhs[i] = a.unit()[i];
  SymmetricSeparability<F> out;
  const auto sol = solve_linear(m, rhs);
  if (!sol) return out;
  out.element = linear_combination(sp.C, sol->particular);
  out.solution_space_dim = sol->homogeneous.size();
  return out;
}

// ---- H-separability ---------------------------------------------------------

template <ExactField F>
struct HSeparabilitySystem {
  std::vector<Vec<F>> r;
  std::vector<SparseVec<F>> e;
};

/// 1 (x) 1 = sum_i r_i e_i with r_i in R and e_i Casimir, or absent.
template <ExactField F>
std::optional<HSeparabilitySystem<F>> h_separability_test(const ExtensionSpaces<F>& sp) {
  std::vector<SparseVec<F>> cands;
  std::vector<std::pair<std::size_t, std::size_t>> idx;
  for (std::size_t i = 0; i < sp.ext.R.size(); ++i)
    for (std::size_t j = 0; j < sp.C.size(); ++j) {
      cands.push_back(sp.Q.left(sp.ext.R[i], sp.C[j]));
      idx.emplace_back(i, j);
    }
  const auto coeffs = sparse_span_membership(cands, sp.one_one(), sp.Q.dim());
  if (!coeffs) return std::nullopt;
  HSeparabilitySystem<F> sys;
  const std::size_t n = sp.n();
  std::vector<Vec<F>> r_of(sp.C.size(), Vec<F>(n, F(0)));
  std::vector<bool> used(sp.C.size(), false);
  for (std::size_t k = 0; k < cands.size(); ++k) {
    if ((*coeffs)[k].is_zero()) continue;
    const auto [i, j] = idx[k];
    r_of[j] = r_of[j] + (*coeffs)[k] * sp.ext.R[i];
    used[j] = true;
  }
  Accumulator<F> check;
  for (std::size_t j = 0; j < sp.C.size(); ++j)
    if (used[j] && !is_zero_vec(r_of[j])) {
      sys.r.push_back(r_of[j]);
      sys.e.push_back(sp.C[j]);
      axpy(check, F(1), sp.Q.left(r_of[j], sp.C[j]));
    }
  if (to_sparse(check) != sp.one_one()) throw ConsistencyFailure("H-separability system fails verification");
  return sys;
}

template <ExactField F>
struct DerivedSeparability {
  SparseVec<F> raw;          // sum_i e_i^1 (x) r_i e_i^2
  Vec<F> mu_raw;             // its image under mu, a central element
  std::optional<SparseVec<F>> element;  // raw normalized by mu_raw^{-1}, when invertible
};

/// The element sum_i e_i^1 (x) r_i e_i^2 built from an H-separability system.
/// It is Casimir with central mu-image z; when z is invertible, z^{-1} times it
/// is a separability element.
template <ExactField F>
DerivedSeparability<F> separability_from_h_system(const ExtensionSpaces<F>& sp, const HSeparabilitySystem<F>& sys) {
  const FDAlgebra<F>& a = sp.A();
  Accumulator<F> acc;
  for (std::size_t i = 0; i < sys.e.size(); ++i)
    for (const auto& [f, c] : sys.e[i]) {
      const auto [fi, fk] = sp.Q.components(f);
      axpy(acc, c, sp.Q.tensor(a.basis(fi), a.mul_basis_right(sys.r[i], fk)));
    }
  DerivedSeparability<F> out;
  out.raw = to_sparse(acc);
  out.mu_raw = sp.Q.mu(out.raw);
  Matrix<F> lz(a.dim(), a.dim());
  for (std::size_t j = 0; j < a.dim(); ++j) {
    const Vec<F> col = a.mul(out.mu_raw, a.basis(j));
    for (std::size_t i = 0; i < a.dim(); ++i) lz(i, j) = col[i];
  }
  if (auto inv = solve_linear(lz, a.unit())) {
    out.element = sp.Q.left(inv->particular, out.raw);
  }
  return out;
}

// ---- integrals --------------------------------------------------------------

template <ExactField F>
struct IntegralReport {
  std::vector<LinearMap<F>> left_S;                  // left integrals in S
  std::optional<LinearMap<F>> normalized_left;       // with eps_S = 1
  std::vector<SparseVec<F>> right_T;                 // right integrals in T
  std::optional<SparseVec<F>> normalized_right;      // with eps_T = 1
  bool all_A_hat_are_left_integrals = false;
};

namespace detail {

template <ExactField F>
SparseVec<F> flatten(const LinearMap<F>& m) {
  SparseVec<F> out;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (!m(r, c).is_zero()) out.emplace_back(static_cast<std::uint32_t>(r * m.cols() + c), m(r, c));
  return out;
}

// Matrix (row convention) of x -> r x and x -> x r.
template <ExactField F>
LinearMap<F> left_mult_map(const FDAlgebra<F>& a, const Vec<F>& r) {
  LinearMap<F> m(a.dim(), a.dim());
  for (std::size_t k = 0; k < a.dim(); ++k) {
    const Vec<F> v = a.mul_basis_right(r, k);
    for (std::size_t c = 0; c < a.dim(); ++c) m(k, c) = v[c];
  }
  return m;
}
template <ExactField F>
LinearMap<F> right_mult_map(const FDAlgebra<F>& a, const Vec<F>& r) {
  LinearMap<F> m(a.dim(), a.dim());
  for (std::size_t k = 0; k < a.dim(); ++k) {
    const Vec<F> v = a.mul_basis_left(k, r);
    for (std::size_t c = 0; c < a.dim(); ++c) m(k, c) = v[c];
  }
  return m;
}

}  // namespace detail

/// l in S is a left integral when alpha o l = lambda(eps_S(alpha)) o l =
/// rho(eps_S(alpha)) o l for all alpha in S. (Row convention: the matrix of
/// g o f is f * g.)
template <ExactField F>
bool is_left_integral(const ExtensionSpaces<F>& sp, const LinearMap<F>& l) {
  for (const auto& alpha : sp.ends.S) {
    const Vec<F> eps = sp.eps_S(alpha);
    const auto lhs = l * alpha;
    if (lhs != l * detail::left_mult_map(sp.A(), eps) || lhs != l * detail::right_mult_map(sp.A(), eps))
      return false;
  }
  return true;
}

template <ExactField F>
bool is_right_integral(const ExtensionSpaces<F>& sp, const SparseVec<F>& u) {
  for (const auto& t : sp.T) {
    const Vec<F> eps = sp.eps_T(t);
    const auto lhs = sp.t_multiply(u, t);
    if (lhs != sp.Q.right(u, eps) || lhs != sp.Q.left(eps, u)) return false;
  }
  return true;
}

template <ExactField F>
IntegralReport<F> integral_spaces(const ExtensionSpaces<F>& sp) {
  const FDAlgebra<F>& a = sp.A();
  const std::size_t n = a.dim();
  const auto& S = sp.ends.S;
  IntegralReport<F> rep;

  {
    // columns: for each S basis element l_s, the stacked defects over alpha
    std::vector<SparseVec<F>> cols(S.size());
    std::vector<Accumulator<F>> acc(S.size());
    const std::size_t block = n * n;
    for (std::size_t ai = 0; ai < S.size(); ++ai) {
      const Vec<F> eps = sp.eps_S(S[ai]);
      const auto lm = detail::left_mult_map(a, eps);
      const auto rm = detail::right_mult_map(a, eps);
      for (std::size_t s = 0; s < S.size(); ++s) {
        const auto d1 = S[s] * S[ai] - S[s] * lm;
        const auto d2 = S[s] * lm - S[s] * rm;
        for (const auto& [i, x] : detail::flatten(d1)) add_entry(acc[s], static_cast<std::uint32_t>(2 * ai * block + i), x);
        for (const auto& [i, x] : detail::flatten(d2))
          add_entry(acc[s], static_cast<std::uint32_t>((2 * ai + 1) * block + i), x);
      }
    }
    for (std::size_t s = 0; s < S.size(); ++s) cols[s] = to_sparse(acc[s]);
    const auto rels = column_relations(cols, 2 * S.size() * block);
    for (const auto& c : rels) {
      LinearMap<F> l(n, n);
      for (const auto& [s, x] : c)
        for (std::size_t r = 0; r < n; ++r)
          for (std::size_t k = 0; k < n; ++k) l(r, k) += x * S[s](r, k);
      rep.left_S.push_back(std::move(l));
    }
    Matrix<F> m(n, rep.left_S.size());
    for (std::size_t j = 0; j < rep.left_S.size(); ++j) {
      const Vec<F> e = sp.eps_S(rep.left_S[j]);
      for (std::size_t i = 0; i < n; ++i) m(i, j) = e[i];
    }
    if (auto sol = solve_linear(m, a.unit())) {
      LinearMap<F> l(n, n);
      for (std::size_t j = 0; j < rep.left_S.size(); ++j)
        for (std::size_t r = 0; r < n; ++r)
          for (std::size_t k = 0; k < n; ++k) l(r, k) += sol->particular[j] * rep.left_S[j](r, k);
      rep.normalized_left = std::move(l);
    }
  }

  {
    const std::size_t q = sp.Q.dim();
    std::vector<SparseVec<F>> cols;
    for (const auto& u : sp.T) {
      Accumulator<F> acc;
      for (std::size_t ti = 0; ti < sp.T.size(); ++ti) {
        const Vec<F> eps = sp.eps_T(sp.T[ti]);
        const auto ut = sp.t_multiply(u, sp.T[ti]);
        const auto ur = sp.Q.right(u, eps);
        const auto lu = sp.Q.left(eps, u);
        for (const auto& [i, x] : ut) add_entry(acc, static_cast<std::uint32_t>(2 * ti * q + i), x);
        for (const auto& [i, x] : ur) add_entry(acc, static_cast<std::uint32_t>(2 * ti * q + i), -x);
        for (const auto& [i, x] : ur) add_entry(acc, static_cast<std::uint32_t>((2 * ti + 1) * q + i), x);
        for (const auto& [i, x] : lu) add_entry(acc, static_cast<std::uint32_t>((2 * ti + 1) * q + i), -x);
      }
      cols.push_back(to_sparse(acc));
    }
    for (const auto& c : column_relations(cols, 2 * sp.T.size() * q))
      rep.right_T.push_back(linear_combination(sp.T, to_dense(c, sp.T.size())));
    Matrix<F> m(n, rep.right_T.size());
    for (std::size_t j = 0; j < rep.right_T.size(); ++j) {
      const Vec<F> e = sp.eps_T(rep.right_T[j]);
      for (std::size_t i = 0; i < n; ++i) m(i, j) = e[i];
    }
    if (auto sol = solve_linear(m, a.unit())) rep.normalized_right = linear_combination(rep.right_T, sol->particular);
  }

  rep.all_A_hat_are_left_integrals = true;
  for (const auto& f : sp.ends.A_hat)
    if (!is_left_integral(sp, f)) rep.all_A_hat_are_left_integrals = false;
  return rep;
}

// ---- projectivity -----------------------------------------------------------

/// A_B is f.g. projective iff the right B-linear epimorphism B^d -> A,
/// (b_k) -> sum_k g_k b_k, splits. Here g_1..g_d are greedy generators of A_B
/// taken from the basis; the unknown section s(x_m) = (s_{m,k}) with
/// s_{m,k} = sum_beta sigma[m][k][beta] b_beta is found by an affine solve.
template <ExactField F>
bool projectivity_test(const ExtensionData<F>& ext) {
  const FDAlgebra<F>& a = *ext.A;
  const std::size_t n = a.dim();
  const auto gens = right_module_generators(ext);
  const std::size_t d = gens.size();
  const std::size_t nb = ext.B.size();
  auto var = [&](std::size_t m, std::size_t k, std::size_t beta) {
    return static_cast<std::uint32_t>((m * d + k) * nb + beta);
  };
  std::vector<std::pair<SparseVec<F>, F>> eqs;
  // g_k b_beta and b_beta b for every B basis b
  std::vector<std::vector<Vec<F>>> gb(d, std::vector<Vec<F>>(nb));
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t be = 0; be < nb; ++be) gb[k][be] = a.mul_basis_left(gens[k], ext.B[be]);
  // pi o s = id
  for (std::size_t m = 0; m < n; ++m) {
    std::vector<Accumulator<F>> rows(n);
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t be = 0; be < nb; ++be)
        for (std::size_t c = 0; c < n; ++c) add_entry(rows[c], var(m, k, be), gb[k][be][c]);
    for (std::size_t c = 0; c < n; ++c) eqs.emplace_back(to_sparse(rows[c]), c == m ? F(1) : F(0));
  }
  // s(x_m b) = s(x_m) b
  for (const auto& b : ext.B) {
    std::vector<Vec<F>> bb(nb);
    for (std::size_t be = 0; be < nb; ++be) bb[be] = a.mul(ext.B[be], b);
    for (std::size_t m = 0; m < n; ++m) {
      const Vec<F> xb = a.mul_basis_left(m, b);
      for (std::size_t k = 0; k < d; ++k) {
        std::vector<Accumulator<F>> rows(n);
        for (std::size_t l = 0; l < n; ++l) {
          if (xb[l].is_zero()) continue;
          for (std::size_t be = 0; be < nb; ++be)
            for (std::size_t c = 0; c < n; ++c) add_entry(rows[c], var(l, k, be), xb[l] * ext.B[be][c]);
        }
        for (std::size_t be = 0; be < nb; ++be)
          for (std::size_t c = 0; c < n; ++c) add_entry(rows[c], var(m, k, be), -bb[be][c]);
        for (auto& r : rows)
          if (!r.empty()) eqs.emplace_back(to_sparse(r), F(0));
      }
    }
  }
  return sparse_affine_solve(eqs, n * d * nb).has_value();
}

// ---- randomized structure audits -------------------------------------------

struct LawAudit {
  std::size_t samples = 0;
  std::size_t failures = 0;
  [[nodiscard]] bool ok() const { return failures == 0; }
};

template <ExactField F>
SparseVec<F> random_combination(const std::vector<SparseVec<F>>& basis, std::mt19937& rng) {
  std::uniform_int_distribution<int> coef(-3, 3);
  Vec<F> c(basis.size(), F(0));
  for (auto& x : c) x = F(coef(rng));
  return linear_combination(basis, c);
}

template <ExactField F>
Vec<F> random_combination(const std::vector<Vec<F>>& basis, std::size_t n, std::mt19937& rng) {
  std::uniform_int_distribution<int> coef(-3, 3);
  Vec<F> out(n, F(0));
  for (const auto& b : basis) out = out + F(coef(rng)) * b;
  return out;
}

/// T-multiplication associativity and unit, and the right module law
/// (r.t).t' = r.(tt') with r.1 = r and r.t in R, on random samples.
template <ExactField F>
LawAudit audit_t_laws(const ExtensionSpaces<F>& sp, std::size_t samples, unsigned seed) {
  std::mt19937 rng(seed);
  LawAudit audit;
  const auto one = sp.one_one();
  for (std::size_t s = 0; s < samples; ++s) {
    const auto t1 = random_combination(sp.T, rng);
    const auto t2 = random_combination(sp.T, rng);
    const auto t3 = random_combination(sp.T, rng);
    const Vec<F> r = random_combination(sp.ext.R, sp.n(), rng);
    bool ok = sp.t_multiply(sp.t_multiply(t1, t2), t3) == sp.t_multiply(t1, sp.t_multiply(t2, t3));
    ok = ok && sp.t_multiply(one, t1) == t1 && sp.t_multiply(t1, one) == t1;
    ok = ok && sp.in_T(sp.t_multiply(t1, t2));
    const Vec<F> rt = sp.rt_action(r, t1);
    ok = ok && sp.in_R(rt);
    ok = ok && sp.rt_action(rt, t2) == sp.rt_action(r, sp.t_multiply(t1, t2));
    ok = ok && sp.rt_action(r, one) == r;
    ++audit.samples;
    if (!ok) ++audit.failures;
  }
  return audit;
}

}  // namespace d2lab
