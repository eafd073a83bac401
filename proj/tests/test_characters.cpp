#include <gtest/gtest.h>

#include "d2lab/characters.hpp"

using namespace d2lab;

namespace {

Cyclotomic C(long x) { return Cyclotomic(x); }

std::vector<Cyclotomic> ints(std::initializer_list<long> xs) {
  std::vector<Cyclotomic> v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

// Oracle: element-wise induction formula psi^G(g) = 1/|H| sum_{x in G, x^-1 g x in H} psi(x^-1 g x).
ClassFunction brute_induce(const ClassFunction& psi, const GroupPtr& g) {
  const PermGroup& h = *psi.group;
  ClassFunction out = zero_class_function(g);
  for (std::size_t c = 0; c < g->classes().size(); ++c) {
    const Permutation& y = g->element(g->classes()[c].representative);
    Cyclotomic sum(0);
    for (const auto& x : g->elements()) {
      const Permutation z = x.inverse() * y * x;
      if (h.contains(z)) sum += psi.values[h.class_of(z)];
    }
    out.values[c] = sum / C(static_cast<long>(h.order()));
  }
  return out;
}

struct Pair {
  GroupPtr g;
  SubgroupEmbedding emb;
};

std::vector<Pair> corpus() {
  std::vector<Pair> out;
  for (const auto& g : {symmetric_group(3), dihedral_group(4), quaternion8(), alternating_group(4),
                        dihedral_group(6), symmetric_group(4)}) {
    for (auto& emb : enumerate_subgroups(g, true)) out.push_back({g, std::move(emb)});
  }
  return out;
}

}  // namespace

TEST(CharacterTable, S3) {
  auto s3 = symmetric_group(3);
  const auto t = character_table(s3);
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t[0].values, ints({1, 1, 1}));
  EXPECT_EQ(t[1].values, ints({1, -1, 1}));
  EXPECT_EQ(t[2].values, ints({2, 0, -1}));
}

TEST(CharacterTable, C3HasCyclotomicValues) {
  const auto t = character_table(cyclic_group(3));
  ASSERT_EQ(t.size(), 3u);
  std::size_t nonrational = 0;
  for (const auto& chi : t.irreducibles) {
    EXPECT_TRUE(chi.degree().is_one());
    for (const auto& v : chi.values) nonrational += v.is_rational() ? 0 : 1;
  }
  EXPECT_EQ(nonrational, 4u);
}

TEST(CharacterTable, S4Degrees) {
  const auto t = character_table(symmetric_group(4));
  std::vector<Cyclotomic> degrees;
  for (const auto& chi : t.irreducibles) degrees.push_back(chi.degree());
  EXPECT_EQ(degrees, ints({1, 1, 2, 3, 3}));
}

TEST(CharacterTable, OrthogonalityOnCorpus) {
  for (const auto& g : {symmetric_group(3), cyclic_group(5), dihedral_group(4), quaternion8(), alternating_group(4),
                        dihedral_group(6), symmetric_group(4), cyclic_group(12), alternating_group(5)}) {
    const auto t = character_table(g);
    ASSERT_EQ(t.size(), g->classes().size());
    EXPECT_TRUE(std::all_of(t[0].values.begin(), t[0].values.end(), [](const Cyclotomic& v) { return v.is_one(); }));
    Cyclotomic sum_sq(0);
    for (std::size_t i = 0; i < t.size(); ++i) {
      sum_sq += t[i].degree() * t[i].degree();
      for (std::size_t j = 0; j < t.size(); ++j)
        EXPECT_EQ(inner_product(t[i], t[j]), C(i == j ? 1 : 0));
    }
    EXPECT_EQ(sum_sq, C(static_cast<long>(g->order())));
    for (std::size_t c = 0; c < g->classes().size(); ++c) {
      Cyclotomic col(0);
      for (const auto& chi : t.irreducibles) col += chi.values[c] * chi.values[c].conjugate();
      EXPECT_EQ(col, C(static_cast<long>(g->classes()[c].centralizer_order)));
    }
  }
}

TEST(InnerProduct, RegularCharacter) {
  auto g = symmetric_group(4);
  const auto t = character_table(g);
  for (const auto& chi : t.irreducibles) EXPECT_EQ(inner_product(regular_character(g), chi), chi.degree());
}

TEST(RestrictInduce, S2InS3) {
  auto s3 = symmetric_group(3);
  auto emb = make_embedding(s3, parse_permutations("(01)", 3));
  const auto tg = character_table(s3);
  const auto th = character_table(emb.subgroup);
  EXPECT_EQ(restrict(tg[2], emb.subgroup), th[0] + th[1]);
  EXPECT_EQ(restrict(tg[2], emb.subgroup).values, ints({2, 0}));
  EXPECT_EQ(restrict(tg[0], emb.subgroup), th[0]);
  EXPECT_EQ(restrict(tg[2], s3), tg[2]);

  EXPECT_EQ(induce(th[0], s3), tg[0] + tg[2]);
  EXPECT_EQ(inner_product(induce(th[0], s3), tg[0]), C(1));
  EXPECT_EQ(induce(tg[0], s3), tg[0]);

  auto a3 = make_embedding(s3, parse_permutations("(012)", 3));
  EXPECT_EQ(induce(trivial_character(a3.subgroup), s3), tg[0] + tg[1]);
}

TEST(Decompose, Examples) {
  auto s3 = symmetric_group(3);
  auto emb = make_embedding(s3, parse_permutations("(01)", 3));
  const auto tg = character_table(s3);
  const auto th = character_table(emb.subgroup);
  EXPECT_EQ(decompose(induce(th[0], s3), tg), (std::vector<long>{1, 0, 1}));
  EXPECT_EQ(decompose(tg[1], tg), (std::vector<long>{0, 1, 0}));
  EXPECT_EQ(decompose(regular_character(s3), tg), (std::vector<long>{1, 1, 2}));
  EXPECT_THROW(decompose(tg[0] - tg[1], tg), NotACharacter);
  EXPECT_THROW(decompose(Cyclotomic(Rational(1, 2)) * tg[0], tg), NotACharacter);
}

TEST(Induce, MatchesElementwiseOracle) {
  for (const auto& [g, emb] : corpus()) {
    const auto th = character_table(emb.subgroup);
    for (const auto& psi : th.irreducibles) {
      const auto ind = induce(psi, g);
      EXPECT_EQ(ind, brute_induce(psi, g));
      EXPECT_EQ(ind.degree(), C(static_cast<long>(emb.index())) * psi.degree());
    }
  }
}

TEST(Induce, FrobeniusReciprocityOnCorpus) {
  for (const auto& [g, emb] : corpus()) {
    const auto tg = character_table(g);
    const auto th = character_table(emb.subgroup);
    for (const auto& psi : th.irreducibles)
      for (const auto& chi : tg.irreducibles)
        EXPECT_EQ(inner_product(induce(psi, g), chi), inner_product(psi, restrict(chi, emb.subgroup)));
  }
}

TEST(Mackey, Examples) {
  auto s3 = symmetric_group(3);
  auto s2 = make_embedding(s3, parse_permutations("(01)", 3));
  const auto th = character_table(s2.subgroup);
  const auto m = mackey_decompose(s2, th[0]);
  EXPECT_TRUE(m.agrees());
  EXPECT_EQ(m.direct, C(2) * th[0] + th[1]);
  ASSERT_EQ(m.summands.size(), 2u);
  EXPECT_EQ(m.summands[0], th[0]);
  EXPECT_EQ(m.summands[1], th[0] + th[1]);

  auto whole = make_embedding(s3, s3->generators());
  const auto tw = character_table(whole.subgroup);
  const auto mw = mackey_decompose(whole, tw[2]);
  EXPECT_EQ(mw.via_double_cosets, tw[2]);

  auto a3 = make_embedding(s3, parse_permutations("(012)", 3));
  const auto ta = character_table(a3.subgroup);
  const auto ma = mackey_decompose(a3, ta[0]);
  EXPECT_TRUE(ma.agrees());
  EXPECT_EQ(ma.via_double_cosets, C(2) * ta[0]);
}

TEST(Mackey, AgreesOnCorpus) {
  for (const auto& [g, emb] : corpus()) {
    const auto th = character_table(emb.subgroup);
    for (const auto& psi : th.irreducibles) EXPECT_TRUE(mackey_decompose(emb, psi).agrees());
  }
}
