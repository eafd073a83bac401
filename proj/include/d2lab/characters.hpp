#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "d2lab/cyclotomic.hpp"
#include "d2lab/errors.hpp"
#include "d2lab/perm_group.hpp"

namespace d2lab {

/// Complex class function with exact cyclotomic values, one per conjugacy
/// class of `group` (in the group's class order).
struct ClassFunction {
  GroupPtr group;
  std::vector<Cyclotomic> values;

  [[nodiscard]] const Cyclotomic& degree() const { return values.at(0); }
  [[nodiscard]] const Cyclotomic& at_element(std::size_t element_index) const {
    return values[group->class_of(element_index)];
  }

  ClassFunction& operator+=(const ClassFunction& o) {
    check_same(o);
    for (std::size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
    return *this;
  }
  ClassFunction& operator-=(const ClassFunction& o) {
    check_same(o);
    for (std::size_t i = 0; i < values.size(); ++i) values[i] -= o.values[i];
    return *this;
  }
  friend ClassFunction operator+(ClassFunction a, const ClassFunction& b) { return a += b; }
  friend ClassFunction operator-(ClassFunction a, const ClassFunction& b) { return a -= b; }
  friend ClassFunction operator*(const Cyclotomic& s, ClassFunction a) {
    for (auto& v : a.values) v *= s;
    return a;
  }
  friend bool operator==(const ClassFunction& a, const ClassFunction& b) {
    return a.group == b.group && a.values == b.values;
  }

  [[nodiscard]] std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < values.size(); ++i) s += (i ? ", " : "") + values[i].str();
    return s + ")";
  }

 private:
  void check_same(const ClassFunction& o) const {
    if (group != o.group) throw std::invalid_argument("ClassFunction: different groups");
  }
};

inline ClassFunction zero_class_function(const GroupPtr& g) {
  return {g, std::vector<Cyclotomic>(g->classes().size(), Cyclotomic(0))};
}

inline ClassFunction trivial_character(const GroupPtr& g) {
  return {g, std::vector<Cyclotomic>(g->classes().size(), Cyclotomic(1))};
}

inline ClassFunction regular_character(const GroupPtr& g) {
  ClassFunction f = zero_class_function(g);
  f.values[0] = Cyclotomic(static_cast<long>(g->order()));
  return f;
}

/// <phi, psi>_G = (1/|G|) sum_g phi(g) conj(psi(g)), summed classwise.
inline Cyclotomic inner_product(const ClassFunction& phi, const ClassFunction& psi) {
  if (phi.group != psi.group) throw std::invalid_argument("inner_product: different groups");
  const auto& classes = phi.group->classes();
  Cyclotomic sum(0);
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (phi.values[i].is_zero() || psi.values[i].is_zero()) continue;
    sum += Cyclotomic(static_cast<long>(classes[i].members.size())) * phi.values[i] * psi.values[i].conjugate();
  }
  return sum / Cyclotomic(static_cast<long>(phi.group->order()));
}

/// Restriction of chi (on G) to a subgroup H of the same degree.
inline ClassFunction restrict(const ClassFunction& chi, const GroupPtr& h) {
  const PermGroup& g = *chi.group;
  ClassFunction out = zero_class_function(h);
  for (std::size_t i = 0; i < h->classes().size(); ++i) {
    const Permutation& rep = h->element(h->classes()[i].representative);
    if (!g.contains(rep)) throw std::invalid_argument("restrict: H is not contained in G");
    out.values[i] = chi.values[g.class_of(rep)];
  }
  return out;
}

/// Induced class function psi^G(g) = (1/|H|) sum_{x in G, x^-1 g x in H} psi(x^-1 g x),
/// evaluated classwise as |C_G(g)|/|H| * sum over H-classes D inside the
/// G-class of g of |D| psi(D).
inline ClassFunction induce(const ClassFunction& psi, const GroupPtr& g) {
  const PermGroup& h = *psi.group;
  ClassFunction out = zero_class_function(g);
  std::vector<Cyclotomic> sums(g->classes().size(), Cyclotomic(0));
  for (std::size_t d = 0; d < h.classes().size(); ++d) {
    const Permutation& rep = h.element(h.classes()[d].representative);
    if (!g->contains(rep)) throw std::invalid_argument("induce: H is not contained in G");
    sums[g->class_of(rep)] += Cyclotomic(static_cast<long>(h.classes()[d].members.size())) * psi.values[d];
  }
  for (std::size_t i = 0; i < sums.size(); ++i) {
    if (sums[i].is_zero()) continue;
    out.values[i] = sums[i] * Cyclotomic(Rational(static_cast<long>(g->classes()[i].centralizer_order),
                                                  static_cast<long>(h.order())));
  }
  return out;
}

/// Irreducible characters of a group; row 0 is the trivial character and rows
/// are ordered by degree, ties broken by the printed values.
struct CharacterTable {
  GroupPtr group;
  std::vector<ClassFunction> irreducibles;

  [[nodiscard]] std::size_t size() const { return irreducibles.size(); }
  [[nodiscard]] const ClassFunction& operator[](std::size_t i) const { return irreducibles[i]; }
};

/// Multiplicities of each irreducible in phi. Throws NotACharacter when some
/// multiplicity is not a non-negative integer.
inline std::vector<long> decompose(const ClassFunction& phi, const CharacterTable& table) {
  std::vector<long> mult;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const Cyclotomic ip = inner_product(phi, table[i]);
    if (!ip.is_rational() || !ip.to_rational().is_integer() || ip.to_rational().sign() < 0) {
      throw NotACharacter("class function " + phi.str() + " has multiplicity " + ip.str() + " at irreducible " +
                          std::to_string(i + 1));
    }
    mult.push_back(ip.to_rational().numerator().get_si());
  }
  return mult;
}

namespace detail {

using u64 = std::uint64_t;

inline u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % p); }

inline u64 powmod(u64 a, u64 e, u64 p) {
  u64 r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

inline u64 invmod(u64 a, u64 p) { return powmod(a, p - 2, p); }

inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline u64 primitive_root(u64 p) {
  std::vector<u64> factors;
  u64 m = p - 1;
  for (u64 d = 2; d * d <= m; ++d) {
    if (m % d == 0) {
      factors.push_back(d);
      while (m % d == 0) m /= d;
    }
  }
  if (m > 1) factors.push_back(m);
  for (u64 g = 2; g < p; ++g) {
    bool ok = true;
    for (auto f : factors)
      if (powmod(g, (p - 1) / f, p) == 1) ok = false;
    if (ok) return g;
  }
  return 1;
}

using ModMatrix = std::vector<std::vector<u64>>;

/// Nullspace basis (as columns) of a rows x cols matrix over F_p.
inline std::vector<std::vector<u64>> nullspace_mod(ModMatrix m, std::size_t cols, u64 p) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t piv = r;
    while (piv < m.size() && m[piv][c] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[r]);
    const u64 inv = invmod(m[r][c], p);
    for (auto& x : m[r]) x = mulmod(x, inv, p);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c] == 0) continue;
      const u64 f = m[i][c];
      for (std::size_t j = 0; j < cols; ++j) m[i][j] = (m[i][j] + p - mulmod(f, m[r][j], p)) % p;
    }
    pivots.push_back(c);
    ++r;
  }
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<std::vector<u64>> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<u64> v(cols, 0);
    v[f] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = (p - m[i][f]) % p;
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace detail

/// Character table by the Burnside-Dixon method: class multiplication
/// coefficients are diagonalized simultaneously over F_p (p = 1 mod exp(G),
/// p > 2 sqrt|G|), and each character value is lifted to Q(zeta_exp) from the
/// eigenvalue multiplicities of the representing matrices, recovered by a
/// discrete Fourier sum over the powers of the class representative.
inline CharacterTable character_table(const GroupPtr& gp) {
  using detail::u64;
  const PermGroup& g = *gp;
  const auto& classes = g.classes();
  const std::size_t r = classes.size();
  const u64 order = g.order();
  const u64 e = g.exponent();

  u64 p = e + 1;
  const double bound = 2.0 * std::sqrt(static_cast<double>(order));
  while (!(detail::is_prime(p) && static_cast<double>(p) > bound)) p += e;

  // coeff[j][i][k] = #{x in C_j : x^{-1} z_k in C_i}, z_k the class representative.
  std::vector<std::vector<std::vector<u64>>> coeff(r, std::vector<std::vector<u64>>(r, std::vector<u64>(r, 0)));
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t k = 0; k < r; ++k) {
      const std::size_t z = classes[k].representative;
      for (auto x : classes[j].members) ++coeff[j][g.class_of(g.mul(g.inv(x), z))][k];
    }

  // Simultaneous eigenspaces: each space is a list of basis vectors in F_p^r.
  std::vector<std::vector<std::vector<u64>>> spaces(1);
  for (std::size_t i = 0; i < r; ++i) {
    std::vector<u64> v(r, 0);
    v[i] = 1;
    spaces[0].push_back(std::move(v));
  }
  for (std::size_t j = 1; j < r; ++j) {
    bool all_split = true;
    for (const auto& s : spaces) all_split = all_split && s.size() == 1;
    if (all_split) break;
    std::vector<std::vector<std::vector<u64>>> next;
    for (auto& space : spaces) {
      if (space.size() == 1) {
        next.push_back(std::move(space));
        continue;
      }
      const std::size_t d = space.size();
      // (M_j - lambda) V, with (M_j)[i][k] = coeff[j][i][k].
      detail::ModMatrix mv(r, std::vector<u64>(d, 0));
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t c = 0; c < d; ++c) {
          u64 s = 0;
          for (std::size_t k = 0; k < r; ++k) s = (s + detail::mulmod(coeff[j][i][k] % p, space[c][k], p)) % p;
          mv[i][c] = s;
        }
      std::size_t covered = 0;
      for (u64 lambda = 0; lambda < p && covered < d; ++lambda) {
        detail::ModMatrix sys = mv;
        for (std::size_t i = 0; i < r; ++i)
          for (std::size_t c = 0; c < d; ++c)
            sys[i][c] = (sys[i][c] + p - detail::mulmod(lambda, space[c][i], p)) % p;
        const auto null = detail::nullspace_mod(sys, d, p);
        if (null.empty()) continue;
        std::vector<std::vector<u64>> sub;
        for (const auto& cvec : null) {
          std::vector<u64> v(r, 0);
          for (std::size_t c = 0; c < d; ++c)
            for (std::size_t i = 0; i < r; ++i) v[i] = (v[i] + detail::mulmod(cvec[c], space[c][i], p)) % p;
          sub.push_back(std::move(v));
        }
        covered += sub.size();
        next.push_back(std::move(sub));
      }
      if (covered != d) throw ConsistencyFailure("character_table: class matrices not diagonalizable mod p");
    }
    spaces = std::move(next);
  }
  if (spaces.size() != r) throw ConsistencyFailure("character_table: eigenspaces did not split into lines");

  std::vector<std::size_t> inverse_class(r);
  for (std::size_t i = 0; i < r; ++i) inverse_class[i] = g.class_of(g.inv(classes[i].representative));

  const u64 z = detail::powmod(detail::primitive_root(p), (p - 1) / e, p);
  const auto max_degree = static_cast<u64>(std::floor(std::sqrt(static_cast<double>(order))));

  std::vector<ClassFunction> chars;
  for (const auto& space : spaces) {
    std::vector<u64> w = space[0];
    if (w[0] == 0) throw ConsistencyFailure("character_table: eigenvector vanishes at the identity class");
    const u64 norm = detail::invmod(w[0], p);
    for (auto& x : w) x = detail::mulmod(x, norm, p);
    u64 s = 0;
    for (std::size_t i = 0; i < r; ++i) {
      const u64 hi = classes[i].members.size() % p;
      s = (s + detail::mulmod(detail::mulmod(w[i], w[inverse_class[i]], p), detail::invmod(hi, p), p)) % p;
    }
    const u64 deg_sq = detail::mulmod(order % p, detail::invmod(s, p), p);
    u64 degree = 0;
    for (u64 d = 1; d <= max_degree; ++d)
      if (detail::mulmod(d, d, p) == deg_sq) degree = d;
    if (degree == 0) throw ConsistencyFailure("character_table: no admissible degree");

    std::vector<u64> chi_p(r);
    for (std::size_t i = 0; i < r; ++i)
      chi_p[i] = detail::mulmod(detail::mulmod(degree, w[i], p), detail::invmod(classes[i].members.size() % p, p), p);

    ClassFunction chi = zero_class_function(gp);
    for (std::size_t i = 0; i < r; ++i) {
      const std::size_t rep = classes[i].representative;
      const u64 o = g.element_order(rep);
      const u64 zo = detail::powmod(z, e / o, p);
      std::vector<u64> power_vals(o);
      std::size_t x = g.identity_index();
      for (u64 l = 0; l < o; ++l) {
        power_vals[l] = chi_p[g.class_of(x)];
        x = g.mul(rep, x);
      }
      std::vector<Rational> poly(e, Rational(0));
      const u64 inv_o = detail::invmod(o % p, p);
      for (u64 k = 0; k < o; ++k) {
        u64 m = 0;
        for (u64 l = 0; l < o; ++l) {
          const u64 root = detail::powmod(zo, (o - (k * l) % o) % o, p);
          m = (m + detail::mulmod(power_vals[l], root, p)) % p;
        }
        m = detail::mulmod(m, inv_o, p);
        if (m > degree) throw ConsistencyFailure("character_table: eigenvalue multiplicity out of range");
        poly[static_cast<std::size_t>(k * (e / o))] += Rational(static_cast<long>(m));
      }
      chi.values[i] = Cyclotomic::reduce(poly, static_cast<long>(e));
    }
    chars.push_back(std::move(chi));
  }

  std::vector<std::string> keys;
  auto is_trivial = [](const ClassFunction& c) {
    return std::all_of(c.values.begin(), c.values.end(), [](const Cyclotomic& v) { return v.is_one(); });
  };
  std::sort(chars.begin(), chars.end(), [&](const ClassFunction& a, const ClassFunction& b) {
    const bool ta = is_trivial(a);
    const bool tb = is_trivial(b);
    if (ta != tb) return ta;
    const auto da = a.degree().to_rational();
    const auto db = b.degree().to_rational();
    if (da != db) return da < db;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
      const auto sa = a.values[i].str();
      const auto sb = b.values[i].str();
      if (sa != sb) return sa < sb;
    }
    return false;
  });
  return {gp, std::move(chars)};
}

struct MackeyResult {
  ClassFunction direct;                         // Res_H Ind^G psi
  ClassFunction via_double_cosets;              // sum of the summands
  std::vector<std::size_t> representatives;     // double coset representatives (ambient indices)
  std::vector<ClassFunction> summands;          // Ind_{H cap gHg^-1}^H (conjugated psi)
  [[nodiscard]] bool agrees() const { return direct == via_double_cosets; }
};

/// Mackey decomposition of Res^G_H Ind_H^G psi over the double cosets HgH:
/// each summand is psi conjugated by g, restricted to H cap gHg^{-1} and
/// induced back to H.
inline MackeyResult mackey_decompose(const SubgroupEmbedding& emb, const ClassFunction& psi) {
  const PermGroup& g = *emb.ambient;
  const GroupPtr& h = emb.subgroup;
  if (psi.group != h) throw std::invalid_argument("mackey_decompose: psi must live on the subgroup");
  MackeyResult res;
  res.direct = restrict(induce(psi, emb.ambient), h);
  res.via_double_cosets = zero_class_function(h);
  for (auto x : emb.double_cosets) {
    const std::size_t xinv = g.inv(x);
    std::vector<Permutation> inter;
    for (auto hi : emb.ambient_index) {
      // hi in x H x^{-1}  <=>  x^{-1} hi x in H
      if (emb.contains(g.conj(xinv, hi))) inter.push_back(g.element(hi));
    }
    auto k = std::make_shared<const PermGroup>(PermGroup::from_elements(g.degree(), {}, std::move(inter)));
    ClassFunction conj_psi = zero_class_function(k);
    for (std::size_t c = 0; c < k->classes().size(); ++c) {
      const std::size_t amb = *g.index_of(k->element(k->classes()[c].representative));
      const Permutation& pre = g.element(g.conj(xinv, amb));
      conj_psi.values[c] = psi.values[h->class_of(pre)];
    }
    ClassFunction summand = induce(conj_psi, h);
    res.via_double_cosets += summand;
    res.representatives.push_back(x);
    res.summands.push_back(std::move(summand));
  }
  return res;
}

}  // namespace d2lab
