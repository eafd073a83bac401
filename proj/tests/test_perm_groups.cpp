#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "d2lab/perm_group.hpp"

using namespace d2lab;

namespace {

Permutation cyc(std::size_t n, std::vector<std::vector<int>> cycles) { return Permutation::from_cycles(n, cycles); }

// Oracle: conjugation orbits by direct sweep over all x, no generators.
std::multiset<std::size_t> brute_class_sizes(const PermGroup& g) {
  std::set<std::set<Permutation>> orbits;
  for (const auto& y : g.elements()) {
    std::set<Permutation> orbit;
    for (const auto& x : g.elements()) orbit.insert(x * y * x.inverse());
    orbits.insert(orbit);
  }
  std::multiset<std::size_t> sizes;
  for (const auto& o : orbits) sizes.insert(o.size());
  return sizes;
}

// Oracle: number of subsets closed under product (feasible for |G| <= 8).
std::size_t brute_subgroup_count(const PermGroup& g) {
  const std::size_t n = g.order();
  std::size_t count = 0;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    if (!(mask & 1u)) continue;
    bool closed = true;
    for (std::size_t i = 0; i < n && closed; ++i)
      for (std::size_t j = 0; j < n && closed; ++j)
        if ((mask >> i & 1u) && (mask >> j & 1u) && !(mask >> g.mul(i, j) & 1u)) closed = false;
    if (closed) ++count;
  }
  return count;
}

}  // namespace

TEST(Permutation, ParseAndCompose) {
  const auto ps = parse_permutations("(01),(012)", 3);
  ASSERT_EQ(ps.size(), 2u);
  EXPECT_EQ(ps[0] * ps[0], Permutation::identity(3));
  EXPECT_EQ(ps[1].order(), 3u);
  EXPECT_EQ((ps[0] * ps[1])(0), ps[0](ps[1](0)));
  EXPECT_EQ(parse_permutations("(0,10,2)", 11)[0].str(), "(0,10,2)");
  EXPECT_EQ(Permutation::identity(4).str(), "()");
  EXPECT_THROW(parse_permutations("(0x)", 3), std::invalid_argument);
  EXPECT_THROW(Permutation(std::vector<Permutation::Point>{0, 0}), std::invalid_argument);
}

TEST(GenerateGroup, Examples) {
  EXPECT_EQ(make_group(3, {cyc(3, {{0, 1}}), cyc(3, {{0, 1, 2}})})->order(), 6u);
  EXPECT_EQ(make_group(4, {cyc(4, {{0, 1, 2, 3}})})->order(), 4u);
  EXPECT_EQ(make_group(4, {cyc(4, {{0, 1}, {2, 3}}), cyc(4, {{0, 2}, {1, 3}})})->order(), 4u);
}

TEST(GenerateGroup, OrderCap) {
  EXPECT_THROW(symmetric_group(8), OrderCapExceeded);
  EXPECT_THROW(symmetric_group(5, 100), OrderCapExceeded);
  EXPECT_EQ(symmetric_group(5, 120)->order(), 120u);
}

TEST(GenerateGroup, Builders) {
  EXPECT_EQ(symmetric_group(4)->order(), 24u);
  EXPECT_EQ(alternating_group(4)->order(), 12u);
  EXPECT_EQ(dihedral_group(4)->order(), 8u);
  EXPECT_EQ(dihedral_group(6)->order(), 12u);
  EXPECT_EQ(quaternion8()->order(), 8u);
  EXPECT_FALSE(quaternion8()->is_abelian());
  EXPECT_EQ(quaternion8()->exponent(), 4u);
  EXPECT_EQ(direct_product(*cyclic_group(2), *cyclic_group(3))->order(), 6u);
  EXPECT_TRUE(direct_product(*cyclic_group(2), *cyclic_group(3))->is_abelian());
}

TEST(ConjugacyClasses, Examples) {
  auto sizes = [](const PermGroup& g) {
    std::vector<std::size_t> s;
    for (const auto& c : g.classes()) s.push_back(c.members.size());
    return s;
  };
  EXPECT_EQ(sizes(*symmetric_group(3)), (std::vector<std::size_t>{1, 3, 2}));
  EXPECT_EQ(sizes(*cyclic_group(4)), (std::vector<std::size_t>{1, 1, 1, 1}));
  EXPECT_EQ(sizes(*symmetric_group(4)), (std::vector<std::size_t>{1, 6, 3, 8, 6}));
}

TEST(ConjugacyClasses, MatchBruteForceOrbits) {
  for (const auto& g : {symmetric_group(3), symmetric_group(4), dihedral_group(4), quaternion8(),
                        alternating_group(4), dihedral_group(6)}) {
    std::multiset<std::size_t> sizes;
    std::size_t total = 0;
    for (const auto& c : g->classes()) {
      sizes.insert(c.members.size());
      total += c.members.size();
      EXPECT_EQ(c.members.size() * c.centralizer_order, g->order());
      EXPECT_EQ(g->order() % c.members.size(), 0u);
    }
    EXPECT_EQ(total, g->order());
    EXPECT_EQ(sizes, brute_class_sizes(*g));
  }
}

TEST(IsNormal, Examples) {
  auto s3 = symmetric_group(3);
  EXPECT_TRUE(is_normal(make_embedding(s3, parse_permutations("(012)", 3))));
  EXPECT_FALSE(is_normal(make_embedding(s3, parse_permutations("(01)", 3))));
  EXPECT_TRUE(is_normal(make_embedding(s3, s3->generators())));
}

TEST(DoubleCosets, Examples) {
  auto s3 = symmetric_group(3);
  auto s2 = make_embedding(s3, parse_permutations("(01)", 3));
  auto dcs = double_cosets(*s3, s2.ambient_index, s2.ambient_index);
  ASSERT_EQ(dcs.size(), 2u);
  std::multiset<std::size_t> sizes{dcs[0].members.size(), dcs[1].members.size()};
  EXPECT_EQ(sizes, (std::multiset<std::size_t>{2, 4}));

  auto whole = make_embedding(s3, s3->generators());
  EXPECT_EQ(whole.double_cosets.size(), 1u);

  auto a3 = make_embedding(s3, parse_permutations("(012)", 3));
  EXPECT_EQ(a3.double_cosets.size(), 2u);
}

TEST(DoubleCosets, RefineToCosetsWhenNormal) {
  auto g = symmetric_group(4);
  for (const auto& emb : enumerate_subgroups(g)) {
    std::size_t covered = 0;
    for (const auto& dc : double_cosets(*g, emb.ambient_index, emb.ambient_index)) covered += dc.members.size();
    EXPECT_EQ(covered, g->order());
    if (is_normal(emb)) EXPECT_EQ(emb.double_cosets.size(), emb.index());
  }
}

TEST(EnumerateSubgroups, Examples) {
  EXPECT_EQ(enumerate_subgroups(symmetric_group(3)).size(), 6u);
  EXPECT_EQ(enumerate_subgroups(cyclic_group(4)).size(), 3u);
  const auto q8 = enumerate_subgroups(quaternion8());
  EXPECT_EQ(q8.size(), 6u);
  for (const auto& e : q8) EXPECT_TRUE(is_normal(e));
  EXPECT_EQ(enumerate_subgroups(symmetric_group(3), true).size(), 4u);
  EXPECT_EQ(enumerate_subgroups(symmetric_group(4)).size(), 30u);
  EXPECT_EQ(enumerate_subgroups(symmetric_group(4), true).size(), 11u);
}

TEST(EnumerateSubgroups, MatchBruteForceClosedSubsets) {
  for (const auto& g : {symmetric_group(3), cyclic_group(4), quaternion8(), dihedral_group(4), cyclic_group(6)}) {
    EXPECT_EQ(enumerate_subgroups(g).size(), brute_subgroup_count(*g));
  }
}

TEST(EnumerateSubgroups, LagrangeAndTransversal) {
  for (const auto& g : {symmetric_group(4), alternating_group(4), dihedral_group(6)}) {
    for (const auto& emb : enumerate_subgroups(g)) {
      EXPECT_EQ(g->order() % emb.subgroup->order(), 0u);
      ASSERT_EQ(emb.transversal.size(), emb.index());
      std::vector<bool> seen(g->order(), false);
      for (auto t : emb.transversal)
        for (auto h : emb.ambient_index) {
          const std::size_t x = g->mul(t, h);
          EXPECT_FALSE(seen[x]);
          seen[x] = true;
        }
      EXPECT_TRUE(std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }));
    }
  }
}
