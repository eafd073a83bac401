#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <deque>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "d2lab/errors.hpp"
#include "d2lab/permutation.hpp"

namespace d2lab {

inline constexpr std::size_t kDefaultOrderCap = 5040;

/// Order cap from DEPTH2_MAX_ORDER when set, else the default.
inline std::size_t default_order_cap() {
  if (const char* env = std::getenv("DEPTH2_MAX_ORDER"); env != nullptr && *env != '\0') {
    try {
      return static_cast<std::size_t>(std::stoull(env));
    } catch (const std::exception&) {
      throw ParseError(std::string("DEPTH2_MAX_ORDER is not an integer: ") + env);
    }
  }
  return kDefaultOrderCap;
}

struct ConjugacyClass {
  std::size_t representative;        // element index
  std::vector<std::size_t> members;  // element indices, ascending
  std::size_t centralizer_order;
};

/// Finite permutation group with all elements enumerated. Elements are kept
/// in lexicographic order of their image vectors, so index 0 is the identity.
class PermGroup {
 public:
  /// Closure of the generators. Throws OrderCapExceeded past `cap` elements.
  static PermGroup generate(std::size_t degree, const std::vector<Permutation>& generators,
                            std::size_t cap = default_order_cap()) {
    for (const auto& g : generators)
      if (g.degree() != degree) throw std::invalid_argument("PermGroup: generator degree mismatch");
    std::unordered_set<Permutation> seen;
    std::vector<Permutation> elems;
    std::deque<Permutation> queue;
    const Permutation id = Permutation::identity(degree);
    seen.insert(id);
    elems.push_back(id);
    queue.push_back(id);
    while (!queue.empty()) {
      const Permutation x = queue.front();
      queue.pop_front();
      for (const auto& g : generators) {
        Permutation y = g * x;
        if (seen.insert(y).second) {
          if (seen.size() > cap) {
            throw OrderCapExceeded("group order exceeds cap " + std::to_string(cap));
          }
          elems.push_back(y);
          queue.push_back(std::move(y));
        }
      }
    }
    return PermGroup(degree, generators, std::move(elems));
  }

  /// Group from an element list that is already closed under products.
  static PermGroup from_elements(std::size_t degree, std::vector<Permutation> generators,
                                 std::vector<Permutation> elements) {
    return PermGroup(degree, std::move(generators), std::move(elements));
  }

  [[nodiscard]] std::size_t degree() const { return degree_; }
  [[nodiscard]] std::size_t order() const { return elements_.size(); }
  [[nodiscard]] const std::vector<Permutation>& generators() const { return generators_; }
  [[nodiscard]] const std::vector<Permutation>& elements() const { return elements_; }
  [[nodiscard]] const Permutation& element(std::size_t i) const { return elements_[i]; }
  [[nodiscard]] std::size_t identity_index() const { return 0; }

  [[nodiscard]] std::optional<std::size_t> index_of(const Permutation& p) const {
    auto it = index_.find(p);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  [[nodiscard]] bool contains(const Permutation& p) const { return index_.count(p) != 0; }

  [[nodiscard]] std::size_t mul(std::size_t i, std::size_t j) const {
    if (!table_.empty()) return table_[i * elements_.size() + j];
    return index_.at(elements_[i] * elements_[j]);
  }
  [[nodiscard]] std::size_t inv(std::size_t i) const { return inverse_[i]; }
  [[nodiscard]] std::size_t element_order(std::size_t i) const { return orders_[i]; }
  /// i * j * i^{-1}
  [[nodiscard]] std::size_t conj(std::size_t i, std::size_t j) const { return mul(mul(i, j), inverse_[i]); }

  [[nodiscard]] const std::vector<ConjugacyClass>& classes() const { return classes_; }
  [[nodiscard]] std::size_t class_of(std::size_t i) const { return class_of_[i]; }
  [[nodiscard]] std::size_t class_of(const Permutation& p) const { return class_of_[index_.at(p)]; }

  /// Least common multiple of element orders.
  [[nodiscard]] std::size_t exponent() const {
    std::size_t e = 1;
    for (auto o : orders_) e = std::lcm(e, o);
    return e;
  }

  [[nodiscard]] bool is_abelian() const {
    for (const auto& c : classes_)
      if (c.members.size() != 1) return false;
    return true;
  }

 private:
  static constexpr std::size_t kTableLimit = 1500;

  PermGroup(std::size_t degree, std::vector<Permutation> generators, std::vector<Permutation> elements)
      : degree_(degree), generators_(std::move(generators)), elements_(std::move(elements)) {
    std::sort(elements_.begin(), elements_.end());
    elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
    if (elements_.empty() || !elements_.front().is_identity())
      throw std::invalid_argument("PermGroup: element list must contain the identity");
    const std::size_t n = elements_.size();
    index_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) index_.emplace(elements_[i], i);
    if (n <= kTableLimit) {
      table_.resize(n * n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          auto it = index_.find(elements_[i] * elements_[j]);
          if (it == index_.end()) throw std::invalid_argument("PermGroup: element list is not closed");
          table_[i * n + j] = static_cast<std::uint32_t>(it->second);
        }
    }
    inverse_.resize(n);
    orders_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      inverse_[i] = index_.at(elements_[i].inverse());
      orders_[i] = elements_[i].order();
    }
    compute_classes();
  }

  void compute_classes() {
    const std::size_t n = elements_.size();
    class_of_.assign(n, SIZE_MAX);
    std::vector<std::size_t> gens;
    if (generators_.empty()) {
      for (std::size_t i = 0; i < n; ++i) gens.push_back(i);
    } else {
      for (const auto& g : generators_) {
        auto it = index_.find(g);
        if (it == index_.end()) throw std::invalid_argument("PermGroup: generator outside element list");
        gens.push_back(it->second);
      }
    }
    std::vector<ConjugacyClass> found;
    for (std::size_t start = 0; start < n; ++start) {
      if (class_of_[start] != SIZE_MAX) continue;
      const std::size_t id = found.size();
      ConjugacyClass cls;
      std::deque<std::size_t> queue{start};
      class_of_[start] = id;
      while (!queue.empty()) {
        const std::size_t x = queue.front();
        queue.pop_front();
        cls.members.push_back(x);
        for (auto g : gens) {
          const std::size_t y = conj(g, x);
          if (class_of_[y] == SIZE_MAX) {
            class_of_[y] = id;
            queue.push_back(y);
          }
        }
      }
      std::sort(cls.members.begin(), cls.members.end());
      cls.representative = cls.members.front();
      cls.centralizer_order = n / cls.members.size();
      found.push_back(std::move(cls));
    }
    // Classes ordered by element order, then by smallest member.
    std::vector<std::size_t> perm(found.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
      const auto oa = orders_[found[a].representative];
      const auto ob = orders_[found[b].representative];
      if (oa != ob) return oa < ob;
      return found[a].representative < found[b].representative;
    });
    classes_.clear();
    std::vector<std::size_t> renumber(found.size());
    for (std::size_t k = 0; k < perm.size(); ++k) {
      renumber[perm[k]] = k;
      classes_.push_back(std::move(found[perm[k]]));
    }
    for (auto& c : class_of_) c = renumber[c];
  }

  std::size_t degree_;
  std::vector<Permutation> generators_;
  std::vector<Permutation> elements_;
  std::unordered_map<Permutation, std::size_t> index_;
  std::vector<std::uint32_t> table_;
  std::vector<std::size_t> inverse_;
  std::vector<std::size_t> orders_;
  std::vector<ConjugacyClass> classes_;
  std::vector<std::size_t> class_of_;
};

using GroupPtr = std::shared_ptr<const PermGroup>;

inline GroupPtr make_group(std::size_t degree, const std::vector<Permutation>& generators,
                           std::size_t cap = default_order_cap()) {
  return std::make_shared<const PermGroup>(PermGroup::generate(degree, generators, cap));
}

/// Subgroup H of an ambient group G with coset data, all indices referring to
/// the ambient element list unless stated otherwise.
struct SubgroupEmbedding {
  GroupPtr ambient;
  GroupPtr subgroup;
  std::vector<std::size_t> ambient_index;   // subgroup element i -> ambient index
  std::vector<std::size_t> transversal;     // representatives g of left cosets gH
  std::vector<std::size_t> double_cosets;   // representatives g of HgH

  [[nodiscard]] std::size_t index() const { return ambient->order() / subgroup->order(); }
  [[nodiscard]] bool contains(std::size_t ambient_element) const {
    return subgroup->contains(ambient->element(ambient_element));
  }
};

/// Element indices of the subgroup generated by the given ambient indices.
inline std::vector<std::size_t> closure(const PermGroup& g, const std::vector<std::size_t>& gens) {
  std::vector<bool> in(g.order(), false);
  std::vector<std::size_t> elems{g.identity_index()};
  in[g.identity_index()] = true;
  for (std::size_t k = 0; k < elems.size(); ++k) {
    for (auto s : gens) {
      const std::size_t y = g.mul(s, elems[k]);
      if (!in[y]) {
        in[y] = true;
        elems.push_back(y);
      }
    }
  }
  std::sort(elems.begin(), elems.end());
  return elems;
}

struct DoubleCoset {
  std::size_t representative;
  std::vector<std::size_t> members;
};

/// Partition of G into double cosets H g K (subgroups given by ambient element
/// indices). Representatives are the smallest index in each double coset.
inline std::vector<DoubleCoset> double_cosets(const PermGroup& g, const std::vector<std::size_t>& h,
                                              const std::vector<std::size_t>& k) {
  std::vector<bool> done(g.order(), false);
  std::vector<DoubleCoset> out;
  for (std::size_t x = 0; x < g.order(); ++x) {
    if (done[x]) continue;
    DoubleCoset dc{x, {}};
    for (auto a : h) {
      const std::size_t ax = g.mul(a, x);
      for (auto b : k) {
        const std::size_t y = g.mul(ax, b);
        if (!done[y]) {
          done[y] = true;
          dc.members.push_back(y);
        }
      }
    }
    std::sort(dc.members.begin(), dc.members.end());
    out.push_back(std::move(dc));
  }
  return out;
}

/// Builds the embedding of the subgroup whose ambient element indices are
/// `members` (must be closed), generated by `gens` (ambient indices).
inline SubgroupEmbedding make_embedding(const GroupPtr& ambient, const std::vector<std::size_t>& members,
                                        const std::vector<std::size_t>& gens) {
  std::vector<Permutation> elems;
  elems.reserve(members.size());
  for (auto m : members) elems.push_back(ambient->element(m));
  std::vector<Permutation> gperms;
  for (auto s : gens) gperms.push_back(ambient->element(s));
  SubgroupEmbedding emb;
  emb.ambient = ambient;
  emb.subgroup = std::make_shared<const PermGroup>(
      PermGroup::from_elements(ambient->degree(), std::move(gperms), std::move(elems)));
  for (const auto& p : emb.subgroup->elements()) emb.ambient_index.push_back(*ambient->index_of(p));

  std::vector<bool> covered(ambient->order(), false);
  for (std::size_t x = 0; x < ambient->order(); ++x) {
    if (covered[x]) continue;
    emb.transversal.push_back(x);
    for (auto hi : emb.ambient_index) covered[ambient->mul(x, hi)] = true;
  }
  for (const auto& dc : double_cosets(*ambient, emb.ambient_index, emb.ambient_index))
    emb.double_cosets.push_back(dc.representative);
  return emb;
}

/// Embedding of the subgroup generated by the given permutations.
inline SubgroupEmbedding make_embedding(const GroupPtr& ambient, const std::vector<Permutation>& generators) {
  std::vector<std::size_t> gens;
  for (const auto& p : generators) {
    auto idx = ambient->index_of(p);
    if (!idx) throw std::invalid_argument("subgroup generator " + p.str() + " is not in the group");
    gens.push_back(*idx);
  }
  return make_embedding(ambient, closure(*ambient, gens), gens);
}

/// H normal in G, tested as g H g^{-1} = H for every generator g of G.
inline bool is_normal(const SubgroupEmbedding& emb) {
  const PermGroup& g = *emb.ambient;
  std::vector<std::size_t> gens;
  if (g.generators().empty()) {
    for (std::size_t i = 0; i < g.order(); ++i) gens.push_back(i);
  } else {
    for (const auto& p : g.generators()) gens.push_back(*g.index_of(p));
  }
  for (auto s : gens)
    for (auto h : emb.ambient_index)
      if (!emb.subgroup->contains(g.element(g.conj(s, h)))) return false;
  return true;
}

namespace detail {

struct BitsetHash {
  std::size_t operator()(const std::vector<std::uint64_t>& b) const noexcept {
    std::size_t h = 1469598103934665603ULL;
    for (auto w : b) {
      h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

inline std::vector<std::uint64_t> to_bits(const std::vector<std::size_t>& members, std::size_t n) {
  std::vector<std::uint64_t> bits((n + 63) / 64, 0);
  for (auto m : members) bits[m / 64] |= (std::uint64_t{1} << (m % 64));
  return bits;
}

}  // namespace detail

/// All subgroups of G by layered closure: cyclic subgroups first, then joins
/// with one more cyclic generator until nothing new appears. Ordered by size,
/// then by element set. With up_to_conjugacy, keeps the first subgroup of
/// each conjugacy class.
inline std::vector<SubgroupEmbedding> enumerate_subgroups(const GroupPtr& g, bool up_to_conjugacy = false,
                                                          std::size_t cap = default_order_cap()) {
  if (g->order() > cap) throw OrderCapExceeded("group order exceeds cap " + std::to_string(cap));
  const std::size_t n = g->order();
  struct Found {
    std::vector<std::size_t> members;
    std::vector<std::size_t> gens;
  };
  std::unordered_map<std::vector<std::uint64_t>, std::size_t, detail::BitsetHash> seen;
  std::vector<Found> all;
  std::vector<std::size_t> cyclic_gens;

  auto add = [&](std::vector<std::size_t> members, std::vector<std::size_t> gens) -> bool {
    auto bits = detail::to_bits(members, n);
    if (seen.count(bits) != 0) return false;
    seen.emplace(std::move(bits), all.size());
    all.push_back({std::move(members), std::move(gens)});
    return true;
  };

  add({g->identity_index()}, {});
  for (std::size_t x = 1; x < n; ++x) {
    if (add(closure(*g, {x}), {x})) cyclic_gens.push_back(x);
  }
  std::vector<std::size_t> frontier(all.size());
  std::iota(frontier.begin(), frontier.end(), 0);
  while (!frontier.empty()) {
    std::vector<std::size_t> next;
    for (auto idx : frontier) {
      for (auto c : cyclic_gens) {
        const auto& base = all[idx];
        if (std::binary_search(base.members.begin(), base.members.end(), c)) continue;
        std::vector<std::size_t> gens = base.gens;
        gens.push_back(c);
        if (add(closure(*g, gens), gens)) next.push_back(all.size() - 1);
      }
    }
    frontier = std::move(next);
  }

  std::sort(all.begin(), all.end(), [](const Found& a, const Found& b) {
    if (a.members.size() != b.members.size()) return a.members.size() < b.members.size();
    return a.members < b.members;
  });

  std::vector<bool> skip(all.size(), false);
  if (up_to_conjugacy) {
    std::unordered_map<std::vector<std::uint64_t>, std::size_t, detail::BitsetHash> position;
    for (std::size_t i = 0; i < all.size(); ++i) position.emplace(detail::to_bits(all[i].members, n), i);
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (skip[i]) continue;
      for (std::size_t x = 0; x < n; ++x) {
        std::vector<std::size_t> conj;
        conj.reserve(all[i].members.size());
        for (auto m : all[i].members) conj.push_back(g->conj(x, m));
        std::sort(conj.begin(), conj.end());
        const std::size_t j = position.at(detail::to_bits(conj, n));
        if (j != i) skip[j] = true;
      }
    }
  }

  std::vector<SubgroupEmbedding> out;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (skip[i]) continue;
    out.push_back(make_embedding(g, all[i].members, all[i].gens));
  }
  return out;
}

// ---- builders -------------------------------------------------------------

inline GroupPtr symmetric_group(std::size_t n, std::size_t cap = default_order_cap()) {
  if (n <= 1) return make_group(1, {}, cap);
  std::vector<int> cyc(n);
  std::iota(cyc.begin(), cyc.end(), 0);
  return make_group(n, {Permutation::from_cycles(n, {{0, 1}}), Permutation::from_cycles(n, {cyc})}, cap);
}

inline GroupPtr alternating_group(std::size_t n, std::size_t cap = default_order_cap()) {
  if (n <= 2) return make_group(std::max<std::size_t>(n, 1), {}, cap);
  std::vector<Permutation> gens;
  for (int k = 2; k < static_cast<int>(n); ++k) gens.push_back(Permutation::from_cycles(n, {{0, 1, k}}));
  return make_group(n, gens, cap);
}

inline GroupPtr cyclic_group(std::size_t n, std::size_t cap = default_order_cap()) {
  std::vector<int> cyc(n);
  std::iota(cyc.begin(), cyc.end(), 0);
  if (n <= 1) return make_group(1, {}, cap);
  return make_group(n, {Permutation::from_cycles(n, {cyc})}, cap);
}

/// Symmetries of a regular n-gon (order 2n) acting on its vertices.
inline GroupPtr dihedral_group(std::size_t n, std::size_t cap = default_order_cap()) {
  if (n < 3) throw std::invalid_argument("dihedral_group: need n >= 3");
  std::vector<int> rot(n);
  std::iota(rot.begin(), rot.end(), 0);
  std::vector<std::vector<int>> refl;
  for (int i = 1; i < static_cast<int>(n) - i; ++i) refl.push_back({i, static_cast<int>(n) - i});
  return make_group(n, {Permutation::from_cycles(n, {rot}), Permutation::from_cycles(n, refl)}, cap);
}

/// Left-regular permutation representation of a group given by its
/// multiplication table (table[i][j] = index of x_i x_j).
inline GroupPtr regular_representation(const std::vector<std::vector<std::size_t>>& table,
                                       std::size_t cap = default_order_cap()) {
  const std::size_t n = table.size();
  std::vector<Permutation> gens;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Permutation::Point> img(n);
    for (std::size_t j = 0; j < n; ++j) img[j] = static_cast<Permutation::Point>(table.at(i).at(j));
    gens.emplace_back(std::move(img));
  }
  return make_group(n, gens, cap);
}

/// Quaternion group of order 8 in its regular representation on 8 points.
/// Points 0..7 stand for 1, -1, i, -i, j, -j, k, -k.
inline GroupPtr quaternion8(std::size_t cap = default_order_cap()) {
  // Element (s, u): sign s in {0,1}, unit u in {1,i,j,k} = {0,1,2,3}.
  auto encode = [](int sign, int unit) { return static_cast<std::size_t>(2 * unit + sign); };
  // Products of units: unit_mul[a][b] = (sign, unit).
  const int sign_tab[4][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
  const int unit_tab[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  std::vector<std::vector<std::size_t>> table(8, std::vector<std::size_t>(8));
  for (int sa = 0; sa < 2; ++sa)
    for (int ua = 0; ua < 4; ++ua)
      for (int sb = 0; sb < 2; ++sb)
        for (int ub = 0; ub < 4; ++ub) {
          const int s = (sa + sb + sign_tab[ua][ub]) % 2;
          table[encode(sa, ua)][encode(sb, ub)] = encode(s, unit_tab[ua][ub]);
        }
  const auto full = regular_representation(table, cap);
  // Keep only the generators i and j.
  return make_group(8, {full->generators()[encode(0, 1)], full->generators()[encode(0, 2)]}, cap);
}

/// Direct product acting on the disjoint union of the point sets.
inline GroupPtr direct_product(const PermGroup& a, const PermGroup& b, std::size_t cap = default_order_cap()) {
  const std::size_t n = a.degree() + b.degree();
  std::vector<Permutation> gens;
  auto lift = [&](const Permutation& p, std::size_t offset) {
    std::vector<Permutation::Point> img(n);
    std::iota(img.begin(), img.end(), Permutation::Point{0});
    for (std::size_t i = 0; i < p.degree(); ++i) img[offset + i] = static_cast<Permutation::Point>(offset + p(i));
    return Permutation(std::move(img));
  };
  for (const auto& p : a.generators()) gens.push_back(lift(p, 0));
  for (const auto& p : b.generators()) gens.push_back(lift(p, a.degree()));
  return make_group(n, gens, cap);
}

}  // namespace d2lab
