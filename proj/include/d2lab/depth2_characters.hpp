#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "d2lab/characters.hpp"
#include "d2lab/errors.hpp"
#include "d2lab/perm_group.hpp"

namespace d2lab {

using IntMatrix = std::vector<std::vector<long>>;

/// a[i][j] = <psi_i^G, chi_j>_G for irreducibles psi_i of H and chi_j of G.
struct IndResTable {
  SubgroupEmbedding pair;
  CharacterTable g_table;
  CharacterTable h_table;
  IntMatrix a;
};

/// c[r][s] = <((psi_r^G)_H)^G, chi_s>_G.
struct TripleTable {
  IntMatrix c;
  std::size_t audited_row = 0;
};

struct DepthTwoVerdict {
  bool is_d2 = false;
  long minimal_N = 0;                                        // set when is_d2
  std::optional<std::pair<std::size_t, std::size_t>> witness;  // 0-based (i, j) with a = 0, c != 0
};

inline IndResTable ind_res_table(const SubgroupEmbedding& emb) {
  IndResTable t{emb, character_table(emb.ambient), character_table(emb.subgroup), {}};
  for (const auto& psi : t.h_table.irreducibles) t.a.push_back(decompose(induce(psi, emb.ambient), t.g_table));
  // reciprocity cross-check, column by column
  for (std::size_t j = 0; j < t.g_table.size(); ++j) {
    const auto col = decompose(restrict(t.g_table[j], emb.subgroup), t.h_table);
    for (std::size_t i = 0; i < col.size(); ++i)
      if (col[i] != t.a[i][j]) throw ConsistencyFailure("ind_res_table: Frobenius reciprocity fails");
  }
  return t;
}

inline IntMatrix multiply(const IntMatrix& x, const IntMatrix& y) {
  const std::size_t inner = y.size();
  const std::size_t cols = inner ? y[0].size() : 0;
  IntMatrix out(x.size(), std::vector<long>(cols, 0));
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t k = 0; k < inner; ++k)
      if (x[i][k] != 0)
        for (std::size_t j = 0; j < cols; ++j) out[i][j] += x[i][k] * y[k][j];
  return out;
}

inline IntMatrix transpose(const IntMatrix& x) {
  if (x.empty()) return {};
  IntMatrix t(x[0].size(), std::vector<long>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x[0].size(); ++j) t[j][i] = x[i][j];
  return t;
}

/// c = a a^T a, with `audit_row` recomputed by inducing, restricting and
/// inducing the character itself.
inline TripleTable triple_table(const IndResTable& t, std::size_t audit_row = 0) {
  TripleTable out{multiply(multiply(t.a, transpose(t.a)), t.a), audit_row};
  const auto& psi = t.h_table[audit_row];
  const auto direct = decompose(induce(restrict(induce(psi, t.pair.ambient), t.pair.subgroup), t.pair.ambient),
                                t.g_table);
  if (direct != out.c[audit_row]) throw ConsistencyFailure("triple_table: matrix and character routes disagree");
  return out;
}

inline DepthTwoVerdict depth_two_verdict(const IntMatrix& a, const IntMatrix& c) {
  DepthTwoVerdict v;
  long n = 1;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) {
      if (a[i][j] == 0) {
        if (c[i][j] != 0 && !v.witness) v.witness = std::make_pair(i, j);
      } else {
        n = std::max(n, (c[i][j] + a[i][j] - 1) / a[i][j]);
      }
    }
  v.is_d2 = !v.witness.has_value();
  if (v.is_d2) v.minimal_N = n;
  return v;
}

struct SweepEntry {
  SubgroupEmbedding embedding;
  bool normal = false;
  DepthTwoVerdict verdict;
  IntMatrix a;
  IntMatrix c;
};

struct SweepReport {
  GroupPtr group;
  std::vector<SweepEntry> entries;
};

/// Every subgroup (up to conjugacy unless `exhaustive`) with normality and the
/// character-theoretic depth-two verdict. Throws TheoremViolation if some
/// subgroup is normal but not D2 or vice versa, or if a normal subgroup has
/// minimal_N different from its index.
inline SweepReport normality_equivalence_sweep(const GroupPtr& g, bool exhaustive = false) {
  SweepReport rep{g, {}};
  for (auto& emb : enumerate_subgroups(g, !exhaustive)) {
    SweepEntry e;
    const auto t = ind_res_table(emb);
    e.a = t.a;
    e.c = triple_table(t).c;
    e.verdict = depth_two_verdict(e.a, e.c);
    e.normal = is_normal(emb);
    e.embedding = std::move(emb);
    std::string gens;
    for (const auto& p : e.embedding.subgroup->generators()) gens += p.str();
    if (e.normal != e.verdict.is_d2)
      throw TheoremViolation("subgroup " + gens + ": normal=" + std::to_string(e.normal) +
                             " but d2=" + std::to_string(e.verdict.is_d2));
    if (e.normal && e.verdict.minimal_N != static_cast<long>(e.embedding.index()))
      throw TheoremViolation("subgroup " + gens + ": minimal N differs from the index");
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

}  // namespace d2lab
