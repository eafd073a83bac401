#include <gtest/gtest.h>

#include <random>

#include "d2lab/cyclotomic.hpp"
#include "d2lab/matrix.hpp"
#include "d2lab/rational.hpp"
#include "d2lab/sparse.hpp"

using namespace d2lab;

namespace {

Rational random_rational(std::mt19937& rng) {
  std::uniform_int_distribution<int> num(-9, 9);
  std::uniform_int_distribution<int> den(1, 7);
  return Rational(num(rng), den(rng));
}

Cyclotomic random_cyclotomic(std::mt19937& rng, long m) {
  std::vector<Rational> poly(static_cast<std::size_t>(m));
  for (auto& c : poly) c = random_rational(rng);
  return Cyclotomic::reduce(poly, m);
}

Matrix<Rational> qmat(std::initializer_list<std::initializer_list<long>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = rows.begin()->size();
  Matrix<Rational> m(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    std::size_t j = 0;
    for (long x : row) m(i, j++) = Rational(x);
    ++i;
  }
  return m;
}

Vec<Rational> qvec(std::initializer_list<long> xs) {
  Vec<Rational> v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

}  // namespace

TEST(Rational, CanonicalForm) {
  const Rational r(6, -4);
  EXPECT_EQ(r.str(), "-3/2");
  EXPECT_EQ(Rational::parse("10/4"), Rational(5, 2));
  EXPECT_EQ(Rational::parse("-7"), Rational(-7));
  EXPECT_THROW(Rational(1) / Rational(0), std::domain_error);
}

TEST(Cyclotomic, ReduceExamples) {
  EXPECT_EQ(Cyclotomic::root_of_unity(4, 2), Cyclotomic(-1));
  EXPECT_EQ(Cyclotomic::root_of_unity(3, 2), Cyclotomic(-1) - Cyclotomic::root_of_unity(3));
  const Cyclotomic z6 = Cyclotomic::root_of_unity(6);
  EXPECT_EQ(z6.coefficients().size(), 2u);
  EXPECT_EQ(Cyclotomic::root_of_unity(6, 3), Cyclotomic(-1));
  EXPECT_TRUE(Cyclotomic::root_of_unity(4, 2).is_rational());
}

TEST(Cyclotomic, ConjugateExamples) {
  const Cyclotomic i = Cyclotomic::root_of_unity(4);
  EXPECT_EQ(i.conjugate(), -i);
  EXPECT_EQ(Cyclotomic(Rational(3, 7)).conjugate(), Cyclotomic(Rational(3, 7)));
  std::mt19937 rng(7);
  for (int k = 0; k < 50; ++k) {
    const Cyclotomic x = random_cyclotomic(rng, 12);
    EXPECT_EQ(x.conjugate().conjugate(), x);
  }
}

TEST(Cyclotomic, StringRoundTrip) {
  std::mt19937 rng(11);
  for (long m : {1L, 3L, 4L, 5L, 8L, 12L}) {
    for (int k = 0; k < 20; ++k) {
      const Cyclotomic x = random_cyclotomic(rng, m);
      EXPECT_EQ(Cyclotomic::parse(x.str()), x) << x.str();
    }
  }
  EXPECT_EQ(Cyclotomic::root_of_unity(3, 2).str(), "-1 - z3");
}

TEST(Cyclotomic, FieldAxiomsRandomized) {
  std::mt19937 rng(2024);
  for (long m : {3L, 5L, 8L, 12L}) {
    for (int k = 0; k < 40; ++k) {
      const Cyclotomic a = random_cyclotomic(rng, m);
      const Cyclotomic b = random_cyclotomic(rng, m);
      const Cyclotomic c = random_cyclotomic(rng, m);
      EXPECT_EQ((a * b) * c, a * (b * c));
      EXPECT_EQ(a * (b + c), a * b + a * c);
      EXPECT_EQ(a + b, b + a);
      EXPECT_EQ((a * b).conjugate(), a.conjugate() * b.conjugate());
      EXPECT_EQ((a + b).conjugate(), a.conjugate() + b.conjugate());
      if (!a.is_zero()) EXPECT_TRUE((a * a.inverse()).is_one());
    }
  }
}

TEST(Cyclotomic, ConductorUnification) {
  std::mt19937 rng(5);
  for (int k = 0; k < 30; ++k) {
    const Cyclotomic a = random_cyclotomic(rng, 4);
    const Cyclotomic b = random_cyclotomic(rng, 6);
    EXPECT_EQ(a * b, a.embed(12) * b.embed(12));
    EXPECT_EQ(a + b, a.embed(12) + b.embed(12));
  }
}

TEST(Rational, FieldAxiomsRandomized) {
  std::mt19937 rng(99);
  for (int k = 0; k < 200; ++k) {
    const Rational a = random_rational(rng);
    const Rational b = random_rational(rng);
    const Rational c = random_rational(rng);
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    if (!a.is_zero()) EXPECT_EQ(a * a.inverse(), Rational(1));
  }
}

TEST(Nullspace, Examples) {
  EXPECT_TRUE(nullspace(Matrix<Rational>::identity(3)).empty());
  EXPECT_EQ(nullspace(Matrix<Rational>(2, 3)).size(), 3u);
  const auto ns = nullspace(qmat({{1, 1}, {2, 2}}));
  ASSERT_EQ(ns.size(), 1u);
  EXPECT_EQ(ns[0][0], -ns[0][1]);
  EXPECT_FALSE(ns[0][0].is_zero());
}

TEST(SpanMembership, Examples) {
  EXPECT_FALSE(span_membership<Rational>({qvec({1, 0})}, qvec({0, 1})).has_value());
  const auto c = span_membership<Rational>({qvec({1, 1}), qvec({1, -1})}, qvec({2, 0}));
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(*c, qvec({1, 1}));
  const auto e = span_membership<Rational>({}, qvec({0, 0}));
  ASSERT_TRUE(e.has_value());
  EXPECT_TRUE(e->empty());
}

TEST(SolveLinear, Examples) {
  auto s1 = solve_linear(Matrix<Rational>::identity(2), qvec({3, 5}));
  ASSERT_TRUE(s1.has_value());
  EXPECT_EQ(s1->particular, qvec({3, 5}));
  EXPECT_TRUE(s1->homogeneous.empty());

  auto s2 = solve_linear(qmat({{1, 1}}), qvec({2}));
  ASSERT_TRUE(s2.has_value());
  EXPECT_EQ(s2->particular, qvec({2, 0}));
  ASSERT_EQ(s2->homogeneous.size(), 1u);
  EXPECT_EQ(s2->homogeneous[0][0], -s2->homogeneous[0][1]);

  EXPECT_FALSE(solve_linear(qmat({{0}}), qvec({1})).has_value());
}

TEST(SolveLinear, RandomSystemsAreExact) {
  std::mt19937 rng(31);
  std::uniform_int_distribution<int> dim(1, 6);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t r = static_cast<std::size_t>(dim(rng));
    const std::size_t c = static_cast<std::size_t>(dim(rng));
    Matrix<Rational> m(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) m(i, j) = (rng() % 3 == 0) ? Rational(0) : random_rational(rng);
    Vec<Rational> b(r);
    for (auto& x : b) x = random_rational(rng);
    if (auto s = solve_linear(m, b)) {
      EXPECT_EQ(m * s->particular, b);
      for (const auto& v : s->homogeneous) EXPECT_EQ(m * v, Vec<Rational>(r, Rational(0)));
      EXPECT_EQ(s->homogeneous.size(), c - rank(m));
    }
    for (const auto& v : nullspace(m)) EXPECT_EQ(m * v, Vec<Rational>(r, Rational(0)));
  }
}

TEST(SparseEchelon, AgreesWithDenseElimination) {
  std::mt19937 rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t r = 1 + rng() % 7;
    const std::size_t c = 1 + rng() % 7;
    Matrix<Rational> m(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) m(i, j) = (rng() % 2 == 0) ? Rational(0) : random_rational(rng);
    SparseEchelon<Rational> ech(c, true);
    std::vector<SparseVec<Rational>> rows;
    for (std::size_t i = 0; i < r; ++i) {
      rows.push_back(to_sparse(m.row(i)));
      ech.insert(rows.back());
    }
    EXPECT_EQ(ech.rank(), rank(m));
    const auto ns = ech.nullspace();
    EXPECT_EQ(ns.size(), c - rank(m));
    for (const auto& v : ns) EXPECT_EQ(m * to_dense(v, c), Vec<Rational>(r, Rational(0)));
    // every row is expressible through the inputs
    for (const auto& row : rows) {
      const auto combo = ech.express(row);
      ASSERT_TRUE(combo.has_value());
      EXPECT_EQ(linear_combination(rows, to_dense(*combo, rows.size())), row);
    }
  }
}
