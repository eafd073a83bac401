#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "d2lab/depth2_algebra.hpp"

namespace d2lab {

/// Psi(F (x) e) = e^1 F(e^2)
template <ExactField F>
Vec<F> psi(const ExtensionSpaces<F>& sp, const LinearMap<F>& f, const SparseVec<F>& e) {
  const FDAlgebra<F>& a = sp.A();
  Vec<F> out(a.dim(), F(0));
  for (const auto& [g, c] : e) {
    const auto [i, k] = sp.Q.components(g);
    out = out + c * a.mul_basis_left(i, apply_map(f, a.basis(k)));
  }
  return out;
}

/// Phi(e (x) F) = F(e^1) e^2
template <ExactField F>
Vec<F> phi(const ExtensionSpaces<F>& sp, const SparseVec<F>& e, const LinearMap<F>& f) {
  const FDAlgebra<F>& a = sp.A();
  Vec<F> out(a.dim(), F(0));
  for (const auto& [g, c] : e) {
    const auto [i, k] = sp.Q.components(g);
    out = out + c * a.mul_basis_right(apply_map(f, a.basis(i)), k);
  }
  return out;
}

template <ExactField F>
struct MoritaPairingReport {
  std::size_t dim_image_psi = 0;
  std::size_t dim_image_phi = 0;
  bool surjective_psi = false;
  bool surjective_phi = false;
  bool images_are_ideals = false;
  bool associativity_squares = false;
  bool cross_nonvanishing = false;
  // 1 = sum_j Psi(psi_maps[j] (x) psi_casimirs[j]), and likewise for Phi
  std::vector<LinearMap<F>> psi_maps;
  std::vector<SparseVec<F>> psi_casimirs;
  std::vector<SparseVec<F>> phi_casimirs;
  std::vector<LinearMap<F>> phi_maps;
};

namespace detail {

template <ExactField F>
bool ideal_in_R(const ExtensionSpaces<F>& sp, const std::vector<Vec<F>>& gens) {
  const FDAlgebra<F>& a = sp.A();
  SparseEchelon<F> span(a.dim());
  for (const auto& g : gens) {
    if (!sp.in_R(g)) return false;
    span.insert(to_sparse(g));
  }
  for (const auto& g : gens)
    for (const auto& r : sp.ext.R)
      if (!span.contains(to_sparse(a.mul(r, g))) || !span.contains(to_sparse(a.mul(g, r)))) return false;
  return true;
}

}  // namespace detail

template <ExactField F>
MoritaPairingReport<F> morita_pairings(const ExtensionSpaces<F>& sp) {
  const FDAlgebra<F>& a = sp.A();
  const auto& ah = sp.ends.A_hat;
  const auto& cc = sp.C;
  MoritaPairingReport<F> rep;
  std::vector<Vec<F>> psi_vals, phi_vals;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < ah.size(); ++i)
    for (std::size_t j = 0; j < cc.size(); ++j) {
      psi_vals.push_back(psi(sp, ah[i], cc[j]));
      phi_vals.push_back(phi(sp, cc[j], ah[i]));
      pairs.emplace_back(i, j);
    }
  auto span_dim = [&](const std::vector<Vec<F>>& vs) {
    SparseEchelon<F> e(a.dim());
    for (const auto& v : vs) e.insert(to_sparse(v));
    return e.rank();
  };
  rep.dim_image_psi = span_dim(psi_vals);
  rep.dim_image_phi = span_dim(phi_vals);
  std::vector<SparseVec<F>> psi_sparse, phi_sparse;
  for (const auto& v : psi_vals) psi_sparse.push_back(to_sparse(v));
  for (const auto& v : phi_vals) phi_sparse.push_back(to_sparse(v));
  const auto one = to_sparse(a.unit());
  if (auto c = sparse_span_membership(psi_sparse, one, a.dim())) {
    rep.surjective_psi = true;
    for (std::size_t k = 0; k < pairs.size(); ++k)
      if (!(*c)[k].is_zero()) {
        rep.psi_maps.push_back((*c)[k] * ah[pairs[k].first]);
        rep.psi_casimirs.push_back(cc[pairs[k].second]);
      }
  }
  if (auto c = sparse_span_membership(phi_sparse, one, a.dim())) {
    rep.surjective_phi = true;
    for (std::size_t k = 0; k < pairs.size(); ++k)
      if (!(*c)[k].is_zero()) {
        rep.phi_casimirs.push_back(scaled(cc[pairs[k].second], (*c)[k]));
        rep.phi_maps.push_back(ah[pairs[k].first]);
      }
  }
  rep.images_are_ideals = detail::ideal_in_R(sp, psi_vals) && detail::ideal_in_R(sp, phi_vals);

  // e . Psi(F (x) f) = Phi(e (x) F) . f in A (x)_B A, and
  // E . Phi(e (x) F) = Psi(E (x) e) . F in A_hat, on basis triples
  bool squares = true;
  for (const auto& fm : ah)
    for (const auto& e : cc) {
      const Vec<F> ph = phi(sp, e, fm);
      for (const auto& f : cc) {
        const Vec<F> ps = psi(sp, fm, f);
        Accumulator<F> lhs, rhs;
        for (const auto& [g, c] : e) {
          const auto [i, k] = sp.Q.components(g);
          axpy(lhs, c, sp.Q.tensor(a.mul_basis_left(i, ps), a.basis(k)));
        }
        for (const auto& [g, c] : f) {
          const auto [i, k] = sp.Q.components(g);
          axpy(rhs, c, sp.Q.tensor(a.basis(i), a.mul_basis_right(ph, k)));
        }
        if (to_sparse(lhs) != to_sparse(rhs)) squares = false;
      }
      for (const auto& em : ah) {
        const Vec<F> pse = psi(sp, em, e);
        for (std::size_t x = 0; x < a.dim() && squares; ++x)
          if (apply_map(em, a.mul_basis_right(ph, x)) != apply_map(fm, a.mul_basis_left(x, pse))) squares = false;
      }
    }
  rep.associativity_squares = squares;

  rep.cross_nonvanishing = true;
  for (const auto& e : cc) {
    bool phi_nz = false, psi_nz = false;
    for (const auto& fm : ah) {
      phi_nz = phi_nz || !is_zero_vec(phi(sp, e, fm));
      psi_nz = psi_nz || !is_zero_vec(psi(sp, fm, e));
    }
    if (phi_nz != psi_nz) rep.cross_nonvanishing = false;
  }
  return rep;
}

struct RankOneReport {
  std::size_t dim_A_hat = 0;
  std::size_t dim_casimir = 0;
  std::size_t dim_R = 0;
  [[nodiscard]] bool pass() const { return dim_A_hat == dim_R && dim_casimir == dim_R; }
};

template <ExactField F>
RankOneReport rank_one_checks(const ExtensionSpaces<F>& sp) {
  return {sp.ends.A_hat.size(), sp.C.size(), sp.ext.R.size()};
}

/// E in A_hat with E(b) = b for every b in B, or absent.
template <ExactField F>
std::optional<LinearMap<F>> conditional_expectation(const ExtensionSpaces<F>& sp) {
  const FDAlgebra<F>& a = sp.A();
  const auto& ah = sp.ends.A_hat;
  std::vector<std::pair<SparseVec<F>, F>> eqs;
  for (const auto& b : sp.ext.B)
    for (std::size_t c = 0; c < a.dim(); ++c) {
      Accumulator<F> row;
      for (std::size_t j = 0; j < ah.size(); ++j) add_entry(row, static_cast<std::uint32_t>(j), apply_map(ah[j], b)[c]);
      eqs.emplace_back(to_sparse(row), b[c]);
    }
  const auto sol = sparse_affine_solve(eqs, ah.size());
  if (!sol) return std::nullopt;
  LinearMap<F> e(a.dim(), a.dim());
  for (std::size_t j = 0; j < ah.size(); ++j) e = e + (*sol)[j] * ah[j];
  return e;
}

/// Two-sided inverse of r in R, when it exists (r x = 1 solved in R
/// coordinates, then x r = 1 checked).
template <ExactField F>
std::optional<Vec<F>> invert_in_R(const ExtensionSpaces<F>& sp, const Vec<F>& r) {
  const FDAlgebra<F>& a = sp.A();
  std::vector<Vec<F>> prods;
  for (const auto& x : sp.ext.R) prods.push_back(a.mul(r, x));
  const auto c = span_membership(prods, a.unit());
  if (!c) return std::nullopt;
  Vec<F> x(a.dim(), F(0));
  for (std::size_t i = 0; i < sp.ext.R.size(); ++i) x = x + (*c)[i] * sp.ext.R[i];
  if (a.mul(x, r) != a.unit()) throw ConsistencyFailure("one-sided inverse in R is not two-sided");
  return x;
}

template <ExactField F>
struct FrobeniusSystem {
  LinearMap<F> E;
  std::vector<Vec<F>> x;
  std::vector<Vec<F>> y;
};

/// Both halves of sum_i x_i E(y_i a) = a = sum_i E(a x_i) y_i on every basis a,
/// E in A_hat, and sum_i x_i (x) y_i Casimir.
template <ExactField F>
bool verify_frobenius_system(const ExtensionSpaces<F>& sp, const FrobeniusSystem<F>& s) {
  const FDAlgebra<F>& a = sp.A();
  for (std::size_t k = 0; k < a.dim(); ++k) {
    Vec<F> l(a.dim(), F(0)), r(a.dim(), F(0));
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      l = l + a.mul(s.x[i], apply_map(s.E, a.mul_basis_right(s.y[i], k)));
      r = r + a.mul(apply_map(s.E, a.mul_basis_left(k, s.x[i])), s.y[i]);
    }
    if (l != a.basis(k) || r != a.basis(k)) return false;
  }
  Accumulator<F> e;
  for (std::size_t i = 0; i < s.x.size(); ++i) axpy(e, F(1), sp.Q.tensor(s.x[i], s.y[i]));
  if (!sp.in_C(to_sparse(e))) return false;
  for (const auto& b : sp.ext.B)
    for (std::size_t k = 0; k < a.dim(); ++k) {
      if (apply_map(s.E, a.mul_basis_left(k, b)) != a.mul(apply_map(s.E, a.basis(k)), b)) return false;
      if (apply_map(s.E, a.mul_basis_right(b, k)) != a.mul(b, apply_map(s.E, a.basis(k)))) return false;
      if (!sp.ext.B_coords.contains(apply_map(s.E, a.basis(k)))) return false;
    }
  return true;
}

enum class FrobeniusVerdict { certified, refuted, inconclusive };

inline const char* verdict_name(FrobeniusVerdict v) {
  switch (v) {
    case FrobeniusVerdict::certified: return "certified";
    case FrobeniusVerdict::refuted: return "refuted";
    default: return "inconclusive";
  }
}

template <ExactField F>
struct FrobeniusReport {
  FrobeniusVerdict verdict = FrobeniusVerdict::inconclusive;
  RankOneReport dims;
  bool projective = false;
  bool psi_surjective = false;
  bool phi_surjective = false;
  std::string method;                  // "pairings" or "random-search" when certified
  std::optional<Vec<F>> b;             // E(f^1) f^2 from the pairing route
  bool b_invertible = false;
  std::optional<FrobeniusSystem<F>> system;
};

namespace detail {

/// Casimir e with Phi(e (x) E) = 1 (and Psi(E (x) e) = 1 when `both`).
template <ExactField F>
std::optional<SparseVec<F>> solve_casimir_for(const ExtensionSpaces<F>& sp, const LinearMap<F>& em, bool phi_side,
                                              bool both) {
  const FDAlgebra<F>& a = sp.A();
  const std::size_t n = a.dim();
  Matrix<F> m(both ? 2 * n : n, sp.C.size());
  Vec<F> rhs(both ? 2 * n : n, F(0));
  for (std::size_t j = 0; j < sp.C.size(); ++j) {
    const Vec<F> v1 = phi_side ? phi(sp, sp.C[j], em) : psi(sp, em, sp.C[j]);
    for (std::size_t i = 0; i < n; ++i) m(i, j) = v1[i];
    if (both) {
      const Vec<F> v2 = phi_side ? psi(sp, em, sp.C[j]) : phi(sp, sp.C[j], em);
      for (std::size_t i = 0; i < n; ++i) m(n + i, j) = v2[i];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    rhs[i] = a.unit()[i];
    if (both) rhs[n + i] = a.unit()[i];
  }
  const auto sol = solve_linear(m, rhs);
  if (!sol) return std::nullopt;
  return linear_combination(sp.C, sol->particular);
}

template <ExactField F>
LinearMap<F> random_map(const std::vector<LinearMap<F>>& basis, std::size_t n, std::mt19937& rng) {
  std::uniform_int_distribution<int> coef(-5, 5);
  LinearMap<F> m(n, n);
  for (const auto& b : basis) m = m + F(coef(rng)) * b;
  return m;
}

template <ExactField F>
FrobeniusSystem<F> system_from_casimir(const ExtensionSpaces<F>& sp, const LinearMap<F>& em, const SparseVec<F>& e) {
  FrobeniusSystem<F> s{em, {}, {}};
  for (const auto& [g, c] : e) {
    const auto [i, k] = sp.Q.components(g);
    s.x.push_back(c * sp.A().basis(i));
    s.y.push_back(sp.A().basis(k));
  }
  return s;
}

}  // namespace detail

/// Rank-one screen, projectivity, Morita pairings, then extraction of a
/// Frobenius system: random E, F in A_hat with Casimir e, f such that
/// Phi(e (x) E) = 1 = Psi(F (x) f); b = E(f^1) f^2 must be invertible in R, and
/// E(x) = F(bx). Dual bases come from e. A randomized search over A_hat is the
/// fallback certifier.
template <ExactField F>
FrobeniusReport<F> trace_ideal_frobenius_test(const ExtensionSpaces<F>& sp, unsigned seed = 1,
                                              std::size_t attempts = 16) {
  const FDAlgebra<F>& a = sp.A();
  FrobeniusReport<F> rep;
  rep.dims = rank_one_checks(sp);
  if (!rep.dims.pass()) {
    rep.verdict = FrobeniusVerdict::refuted;
    return rep;
  }
  rep.projective = projectivity_test(sp.ext);
  const auto pairings = morita_pairings(sp);
  rep.psi_surjective = pairings.surjective_psi;
  rep.phi_surjective = pairings.surjective_phi;
  std::mt19937 rng(seed);

  if (rep.projective && rep.psi_surjective && rep.phi_surjective) {
    for (std::size_t attempt = 0; attempt < attempts && !rep.system; ++attempt) {
      const auto em = detail::random_map(sp.ends.A_hat, a.dim(), rng);
      const auto fm = detail::random_map(sp.ends.A_hat, a.dim(), rng);
      const auto e = detail::solve_casimir_for(sp, em, true, false);
      const auto f = detail::solve_casimir_for(sp, fm, false, false);
      if (!e || !f) continue;
      const Vec<F> b = phi(sp, *f, em);
      const auto binv = invert_in_R(sp, b);
      if (!binv) continue;
      bool shifted = true;
      for (std::size_t k = 0; k < a.dim() && shifted; ++k)
        if (apply_map(em, a.basis(k)) != apply_map(fm, a.mul(b, a.basis(k)))) shifted = false;
      if (!shifted) throw ConsistencyFailure("E(x) = F(bx) fails for pairing witnesses");
      rep.b = b;
      rep.b_invertible = true;
      auto sys = detail::system_from_casimir(sp, em, *e);
      if (!verify_frobenius_system(sp, sys)) {
        const auto joint = detail::solve_casimir_for(sp, em, true, true);
        if (!joint) continue;
        sys = detail::system_from_casimir(sp, em, *joint);
      }
      if (verify_frobenius_system(sp, sys)) {
        rep.system = std::move(sys);
        rep.method = "pairings";
      }
    }
  }
  for (std::size_t attempt = 0; attempt < attempts && !rep.system; ++attempt) {
    const auto em = detail::random_map(sp.ends.A_hat, a.dim(), rng);
    if (const auto e = detail::solve_casimir_for(sp, em, true, true)) {
      auto sys = detail::system_from_casimir(sp, em, *e);
      if (verify_frobenius_system(sp, sys)) {
        rep.system = std::move(sys);
        rep.method = "random-search";
      }
    }
  }
  rep.verdict = rep.system ? FrobeniusVerdict::certified : FrobeniusVerdict::inconclusive;
  return rep;
}

}  // namespace d2lab
