#include <gtest/gtest.h>

#include "d2lab/depth2_algebra.hpp"

using namespace d2lab;
using Q = Rational;

namespace {

ExtensionSpaces<Q> spaces(const AlgebraPtr<Q>& a, const std::vector<Vec<Q>>& b) {
  return ExtensionSpaces<Q>(build_extension(a, b));
}

ExtensionSpaces<Q> group_pair(const GroupPtr& g, const char* gens) {
  const auto emb = make_embedding(g, parse_permutations(gens, g->degree()));
  return spaces(group_algebra<Q>(*g), subgroup_subalgebra<Q>(emb));
}

ExtensionSpaces<Q> triangular() {
  auto a = triangular_algebra<Q>(2);
  return spaces(a, diagonal_subalgebra(*a));
}

// dim A (x)_B A as n^2 minus the rank of the dense relation matrix
std::size_t brute_tensor_dim(const ExtensionData<Q>& ext) {
  const auto& a = *ext.A;
  const std::size_t n = a.dim();
  std::vector<Vec<Q>> rels;
  for (const auto& b : ext.B)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        Vec<Q> r(n * n, Q(0));
        const Vec<Q> xb = a.mul(a.basis(i), b);
        const Vec<Q> bx = a.mul(b, a.basis(k));
        for (std::size_t m = 0; m < n; ++m) {
          r[m * n + k] += xb[m];
          r[i * n + m] -= bx[m];
        }
        rels.push_back(r);
      }
  return n * n - rank(Matrix<Q>::from_columns(rels, n * n));
}

// dim C_{KG}(KH): orbits of H acting on G by conjugation
std::size_t brute_centralizer_dim(const SubgroupEmbedding& emb) {
  const auto& g = *emb.ambient;
  std::vector<bool> seen(g.order(), false);
  std::size_t orbits = 0;
  for (std::size_t x = 0; x < g.order(); ++x) {
    if (seen[x]) continue;
    ++orbits;
    for (auto h : emb.ambient_index) seen[g.conj(h, x)] = true;
  }
  return orbits;
}

// dim End(_B A_B) by a dense solve over all n^2 matrix entries, imposing
// f(b x b') = b f(x) b' for all basis x and B basis b, b'
std::size_t brute_bimodule_endo_dim(const ExtensionData<Q>& ext) {
  const auto& a = *ext.A;
  const std::size_t n = a.dim();
  std::vector<Vec<Q>> rows;
  for (const auto& b : ext.B)
    for (const auto& bp : ext.B)
      for (std::size_t x = 0; x < n; ++x) {
        const Vec<Q> bxb = a.mul(a.mul(b, a.basis(x)), bp);
        // coordinate c of f(bxb) - b f(x) b'
        for (std::size_t c = 0; c < n; ++c) {
          Vec<Q> r(n * n, Q(0));
          for (std::size_t m = 0; m < n; ++m) r[m * n + c] += bxb[m];
          for (std::size_t m = 0; m < n; ++m) r[x * n + m] -= a.mul(a.mul(b, a.basis(m)), bp)[c];
          rows.push_back(r);
        }
      }
  Matrix<Q> m(rows.size(), n * n);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < n * n; ++j) m(i, j) = rows[i][j];
  return n * n - rank(m);
}

// The quasibase condition as literally stated: is the identity of A (x)_B A in
// the span of all maps a (x) a' -> t beta(a) a' over T basis x S basis?
bool brute_d2_left(const ExtensionSpaces<Q>& sp) {
  const auto& a = sp.A();
  const std::size_t q = sp.Q.dim();
  std::vector<Vec<Q>> maps;
  for (const auto& t : sp.T)
    for (const auto& beta : sp.ends.S) {
      Vec<Q> flat(q * q, Q(0));
      for (std::size_t f = 0; f < q; ++f) {
        const auto [i, k] = sp.Q.components(f);
        const auto img = sp.Q.right(t, a.mul_basis_right(apply_map(beta, a.basis(i)), k));
        for (const auto& [g, c] : img) flat[f * q + g] = c;
      }
      maps.push_back(flat);
    }
  Vec<Q> id(q * q, Q(0));
  for (std::size_t f = 0; f < q; ++f) id[f * q + f] = Q(1);
  return span_membership(maps, id).has_value();
}

}  // namespace

TEST(Algebra, Builders) {
  EXPECT_EQ(matrix_algebra<Q>(2)->dim(), 4u);
  const auto t = triangular_algebra<Q>(2);
  EXPECT_EQ(t->labels(), (std::vector<std::string>{"e11", "e12", "e22"}));
  EXPECT_EQ(group_algebra<Q>(*symmetric_group(3))->dim(), 6u);
  EXPECT_NO_THROW(group_algebra<Q>(*quaternion8()));
  EXPECT_EQ(truncated_polynomial_algebra<Q>(3)->dim(), 3u);
  EXPECT_NO_THROW(dual_numbers_times_field<Q>());
}

TEST(Algebra, RejectsBadInput) {
  std::vector<std::vector<SparseVec<Q>>> table(2, std::vector<SparseVec<Q>>(2));
  table[0][0] = {{0, Q(1)}};
  table[0][1] = {{1, Q(1)}};
  table[1][0] = {{1, Q(1)}};
  table[1][1] = {{0, Q(1)}};
  EXPECT_NO_THROW(FDAlgebra<Q>({"1", "g"}, table, {Q(1), Q(0)}));
  EXPECT_THROW(FDAlgebra<Q>({"1", "g"}, table, {Q(0), Q(1)}), BadUnit);

  // 1, a, b with a a = b, a b = a and all other products of a, b zero
  std::vector<std::vector<SparseVec<Q>>> bad(3, std::vector<SparseVec<Q>>(3));
  for (std::uint32_t i = 0; i < 3; ++i) {
    bad[0][i] = {{i, Q(1)}};
    bad[i][0] = {{i, Q(1)}};
  }
  bad[1][1] = {{2, Q(1)}};
  bad[1][2] = {{1, Q(1)}};
  EXPECT_THROW(FDAlgebra<Q>({"1", "a", "b"}, bad, {Q(1), Q(0), Q(0)}), NotAssociative);

  auto m2 = matrix_algebra<Q>(2);
  EXPECT_THROW(build_extension<Q>(m2, {m2->basis(0)}), UnitMissing);
  EXPECT_THROW(build_extension<Q>(m2, {m2->unit(), m2->basis(1), m2->basis(2)}), NotClosed);
  EXPECT_THROW(build_extension<Q>(m2, {Vec<Q>(4, Q(0))}), UnitMissing);
}

TEST(Extension, CentralizersAndCenters) {
  const auto tri = triangular();
  EXPECT_EQ(tri.ext.R.size(), 2u);
  for (const auto& r : tri.ext.R) EXPECT_TRUE(tri.ext.B_coords.contains(r));
  EXPECT_EQ(tri.ext.Z.size(), 1u);

  auto m2 = matrix_algebra<Q>(2);
  EXPECT_EQ(build_extension<Q>(m2, scalars_subalgebra(*m2)).Z.size(), 1u);

  const auto s3s2 = group_pair(symmetric_group(3), "(01)");
  EXPECT_EQ(s3s2.ext.R.size(), 4u);
  EXPECT_EQ(s3s2.ext.Z.size(), 3u);
  for (const char* gens : {"(01)", "(012)", "(01)(23)", "(0123)", "(01),(23)", "(012),(01)"}) {
    auto s4 = symmetric_group(4);
    const auto emb = make_embedding(s4, parse_permutations(gens, 4));
    const auto ext = build_extension<Q>(group_algebra<Q>(*s4), subgroup_subalgebra<Q>(emb));
    EXPECT_EQ(ext.R.size(), brute_centralizer_dim(emb)) << gens;
  }

  auto s3 = group_algebra<Q>(*symmetric_group(3));
  const auto self = build_extension<Q>(s3, whole_subalgebra(*s3));
  EXPECT_EQ(self.R.size(), self.Z.size());
}

TEST(TensorSquare, Dimensions) {
  const auto tri = triangular();
  EXPECT_EQ(tri.Q.dim(), 4u);
  EXPECT_EQ(brute_tensor_dim(tri.ext), 4u);

  const auto s3s2 = group_pair(symmetric_group(3), "(01)");
  EXPECT_EQ(s3s2.Q.dim(), 18u);
  EXPECT_EQ(brute_tensor_dim(s3s2.ext), 18u);

  auto s3 = group_algebra<Q>(*symmetric_group(3));
  EXPECT_EQ(TensorSquare<Q>(build_extension<Q>(s3, whole_subalgebra(*s3))).dim(), 6u);

  auto d = dual_numbers_times_field<Q>();
  const auto ext = build_extension<Q>(d, {d->unit(), d->basis(1)});
  EXPECT_EQ(TensorSquare<Q>(ext).dim(), brute_tensor_dim(ext));
}

TEST(TensorSquare, ActionsAreWellDefined) {
  const auto sp = group_pair(symmetric_group(3), "(01)");
  const auto& a = sp.A();
  // (a b) (x) c = a (x) (b c) for every B basis b
  for (const auto& b : sp.ext.B)
    for (std::size_t i = 0; i < a.dim(); ++i)
      for (std::size_t k = 0; k < a.dim(); ++k)
        EXPECT_EQ(sp.Q.tensor(a.mul(a.basis(i), b), a.basis(k)), sp.Q.tensor(a.basis(i), a.mul(b, a.basis(k))));
  // left and right actions commute and are associative
  const auto u = sp.Q.simple(1, 2);
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) {
      EXPECT_EQ(sp.Q.left(a.basis(i), sp.Q.right(u, a.basis(j))), sp.Q.right(sp.Q.left(a.basis(i), u), a.basis(j)));
      EXPECT_EQ(sp.Q.left(a.mul(a.basis(i), a.basis(j)), u), sp.Q.left(a.basis(i), sp.Q.left(a.basis(j), u)));
    }
}

TEST(Casimir, TriangularT) {
  const auto sp = triangular();
  ASSERT_EQ(sp.T.size(), 2u);
  const auto& a = sp.A();
  const auto e11 = sp.Q.tensor(a.basis(0), a.basis(0));
  const auto e22 = sp.Q.tensor(a.basis(2), a.basis(2));
  SparseEchelon<Q> t(sp.Q.dim());
  for (const auto& x : sp.T) t.insert(x);
  EXPECT_TRUE(t.contains(e11));
  EXPECT_TRUE(t.contains(e22));
  EXPECT_EQ(sp.t_multiply(e11, e11), e11);
  EXPECT_TRUE(sp.t_multiply(e11, e22).empty());
  EXPECT_TRUE(is_zero_vec(sp.rt_action(a.basis(0), e22)));
  EXPECT_EQ(sp.eps_T(e11), a.basis(0));
  EXPECT_EQ(sp.ends.S.size(), 3u);
  EXPECT_EQ(brute_bimodule_endo_dim(sp.ext), 3u);
}

TEST(Endomorphisms, MatchDenseSolve) {
  auto s3 = symmetric_group(3);
  auto m2 = matrix_algebra<Q>(2);
  auto d = dual_numbers_times_field<Q>();
  for (const auto& sp : {group_pair(s3, "(01)"), group_pair(s3, "(012)"), spaces(m2, diagonal_subalgebra(*m2)),
                         spaces(d, {d->unit(), d->basis(1)})})
    EXPECT_EQ(sp.ends.S.size(), brute_bimodule_endo_dim(sp.ext));
}

TEST(Casimir, MatrixAlgebra) {
  for (std::size_t n : {2u, 3u}) {
    auto m = matrix_algebra<Q>(n);
    const auto sp = spaces(m, scalars_subalgebra(*m));
    EXPECT_EQ(sp.C.size(), n * n);
  }
}

TEST(Casimir, SelfExtension) {
  auto s3 = group_algebra<Q>(*symmetric_group(3));
  const auto sp = spaces(s3, whole_subalgebra(*s3));
  EXPECT_EQ(sp.T.size(), sp.ext.Z.size());
  EXPECT_EQ(sp.ends.S.size(), sp.ext.Z.size());
}

TEST(TMultiplication, UnitAndLaws) {
  for (const auto& sp : {group_pair(symmetric_group(3), "(01)"), triangular()}) {
    for (const auto& t : sp.T) {
      EXPECT_EQ(sp.t_multiply(sp.one_one(), t), t);
      EXPECT_EQ(sp.t_multiply(t, sp.one_one()), t);
    }
    for (const auto& r : sp.ext.R) EXPECT_EQ(sp.rt_action(r, sp.one_one()), r);
    const auto audit = audit_t_laws(sp, 100, 7);
    EXPECT_EQ(audit.samples, 100u);
    EXPECT_TRUE(audit.ok());
  }
}

TEST(Counits, Examples) {
  const auto sp = group_pair(symmetric_group(3), "(01)");
  EXPECT_EQ(sp.pairing(identity_map<Q>(sp.n()), sp.one_one()), sp.A().unit());
  for (const auto& r : sp.ext.R) {
    EXPECT_TRUE(sp.in_T(sp.sigma(r)));
    EXPECT_TRUE(sp.in_T(sp.tau(r)));
    EXPECT_EQ(sp.eps_T(sp.sigma(r)), r);
    for (const auto& rp : sp.ext.R) EXPECT_EQ(sp.t_multiply(sp.sigma(r), sp.tau(rp)), sp.t_multiply(sp.tau(rp), sp.sigma(r)));
  }
  for (const auto& alpha : sp.ends.S) {
    EXPECT_TRUE(sp.in_R(sp.eps_S(alpha)));
    for (const auto& t : sp.T) EXPECT_TRUE(sp.in_R(sp.pairing(alpha, t)));
  }
  for (const auto& t : sp.T) EXPECT_TRUE(sp.in_R(sp.eps_T(t)));
}

TEST(Endomorphisms, LambdaRhoCommute) {
  const auto sp = group_pair(symmetric_group(3), "(01)");
  for (const auto& r : sp.ext.R)
    for (const auto& rp : sp.ext.R)
      for (std::size_t k = 0; k < sp.n(); ++k) {
        const Vec<Q> x = sp.A().basis(k);
        EXPECT_EQ(sp.A().mul(r, sp.A().mul(x, rp)), sp.A().mul(sp.A().mul(r, x), rp));
      }
  // the coefficient projection onto the subgroup span lies in A_hat
  const auto emb = make_embedding(symmetric_group(3), parse_permutations("(01)", 3));
  LinearMap<Q> e(6, 6);
  for (auto i : emb.ambient_index) e(i, i) = Q(1);
  std::vector<Vec<Q>> flat_basis;
  for (const auto& f : sp.ends.A_hat) flat_basis.push_back(to_dense(detail::flatten(f), 36));
  EXPECT_TRUE(span_membership(flat_basis, to_dense(detail::flatten(e), 36)).has_value());
  EXPECT_EQ(sp.eps_S(e), sp.A().unit());
}

TEST(D2Test, Triangular) {
  const auto sp = triangular();
  EXPECT_FALSE(d2_test(sp, Side::left).holds());
  EXPECT_FALSE(d2_test(sp, Side::right).holds());
  EXPECT_FALSE(brute_d2_left(sp));
  const auto rep = end_rt_check(sp);
  EXPECT_EQ(rep.end_dim, 2u);
  EXPECT_EQ(rep.center_dim, 1u);
  EXPECT_TRUE(rep.lambda_injective);
}

TEST(D2Test, MatchesLiteralDefinition) {
  auto s3 = symmetric_group(3);
  auto k2 = product_algebra<Q>(2);
  auto d = dual_numbers_times_field<Q>();
  for (const auto& sp : {group_pair(s3, "(01)"), group_pair(s3, "(012)"), spaces(k2, scalars_subalgebra(*k2)),
                         spaces(d, {d->unit(), d->basis(1)}), group_pair(s3, "(01),(012)")}) {
    const bool brute = brute_d2_left(sp);
    EXPECT_EQ(d2_test(sp, Side::left).holds(), brute);
  }
}

TEST(D2Test, GroupAlgebras) {
  auto s3 = symmetric_group(3);
  const auto a3 = group_pair(s3, "(012)");
  const auto left = d2_test(a3, Side::left);
  ASSERT_TRUE(left.holds());
  EXPECT_TRUE(verify_quasibase(a3, *left.certificate));
  EXPECT_TRUE(d2_test(a3, Side::right).holds());
  const auto s2 = group_pair(s3, "(01)");
  EXPECT_FALSE(d2_test(s2, Side::left).holds());
  EXPECT_FALSE(d2_test(s2, Side::right).holds());

  const auto self = group_pair(s3, "(01),(012)");
  const auto cert = d2_test(self, Side::left);
  ASSERT_TRUE(cert.holds());
  EXPECT_EQ(cert.certificate->t.size(), 1u);
}

TEST(ThSquare, CertifiedD2) {
  auto s3 = symmetric_group(3);
  for (const auto& sp : {group_pair(s3, "(012)"), group_pair(s3, "(01),(012)")}) {
    const auto g = gamma_check(sp);
    EXPECT_EQ(g.quotient_dim, sp.n());
    EXPECT_TRUE(g.bijective());
    EXPECT_TRUE(end_rt_check(sp).equal());
  }
  auto m2 = matrix_algebra<Q>(2);
  EXPECT_TRUE(gamma_check(spaces(m2, scalars_subalgebra(*m2))).bijective());
  EXPECT_FALSE(gamma_check(triangular()).bijective());
}

TEST(Separability, MatrixAlgebra) {
  for (std::size_t n : {2u, 3u}) {
    auto m = matrix_algebra<Q>(n);
    const auto sp = spaces(m, scalars_subalgebra(*m));
    const auto res = separability_element(sp);
    ASSERT_TRUE(res.element.has_value());
    EXPECT_TRUE(res.in_T_prime);
    EXPECT_TRUE(res.witness_identity);
    for (std::size_t j = 0; j < n; ++j) {
      Accumulator<Q> e;
      for (std::size_t i = 0; i < n; ++i) axpy(e, Q(1), sp.Q.simple(i * n + j, j * n + i));
      const auto ej = to_sparse(e);
      EXPECT_TRUE(sp.in_C(ej));
      EXPECT_EQ(sp.Q.mu(ej), m->unit());
    }
    const auto sym = symmetric_separability_element(sp);
    ASSERT_TRUE(sym.element.has_value());
    EXPECT_TRUE(sym.unique());
    Accumulator<Q> avg;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        axpy(avg, Q(1, static_cast<long>(n)), sp.Q.simple(i * n + j, j * n + i));
    EXPECT_EQ(*sym.element, to_sparse(avg));
  }
}

TEST(Separability, Examples) {
  auto s3 = group_algebra<Q>(*symmetric_group(3));
  const auto self = spaces(s3, whole_subalgebra(*s3));
  const auto e = separability_element(self);
  ASSERT_TRUE(e.element.has_value());
  EXPECT_EQ(*e.element, self.one_one());

  auto dual = truncated_polynomial_algebra<Q>(2);
  EXPECT_FALSE(separability_element(spaces(dual, scalars_subalgebra(*dual))).element.has_value());

  const auto a3 = group_pair(symmetric_group(3), "(012)");
  const auto ea3 = separability_element(a3);
  ASSERT_TRUE(ea3.element.has_value());
  EXPECT_TRUE(ea3.in_T_prime);
  EXPECT_TRUE(gamma_check(a3).bijective());
}

TEST(HSeparability, Sugano) {
  for (std::size_t n : {2u, 3u}) {
    auto k = product_algebra<Q>(n);
    const auto sp = spaces(k, scalars_subalgebra(*k));
    EXPECT_FALSE(h_separability_test(sp).has_value());
    EXPECT_TRUE(separability_element(sp).element.has_value());
    EXPECT_TRUE(d2_test(sp, Side::left).holds());
    EXPECT_TRUE(d2_test(sp, Side::right).holds());
  }
  auto m2 = matrix_algebra<Q>(2);
  const auto sp = spaces(m2, scalars_subalgebra(*m2));
  const auto sys = h_separability_test(sp);
  ASSERT_TRUE(sys.has_value());
  const auto derived = separability_from_h_system(sp, *sys);
  EXPECT_TRUE(sp.in_C(derived.raw));
  ASSERT_TRUE(derived.element.has_value());
  EXPECT_TRUE(sp.in_C(*derived.element));
  EXPECT_EQ(sp.Q.mu(*derived.element), m2->unit());

  auto s3 = group_algebra<Q>(*symmetric_group(3));
  const auto self = spaces(s3, whole_subalgebra(*s3));
  const auto selfsys = h_separability_test(self);
  ASSERT_TRUE(selfsys.has_value());
}

TEST(Integrals, Examples) {
  auto m2 = matrix_algebra<Q>(2);
  const auto sep = integral_spaces(spaces(m2, scalars_subalgebra(*m2)));
  EXPECT_TRUE(sep.normalized_right.has_value());
  EXPECT_TRUE(sep.all_A_hat_are_left_integrals);

  const auto split = group_pair(symmetric_group(3), "(01)");
  const auto rep = integral_spaces(split);
  ASSERT_TRUE(rep.normalized_left.has_value());
  EXPECT_TRUE(is_left_integral(split, *rep.normalized_left));
  EXPECT_EQ(split.eps_S(*rep.normalized_left), split.A().unit());
  EXPECT_TRUE(rep.all_A_hat_are_left_integrals);
  for (const auto& u : rep.right_T) EXPECT_TRUE(is_right_integral(split, u));

  EXPECT_TRUE(integral_spaces(triangular()).all_A_hat_are_left_integrals);
}

TEST(Projectivity, Examples) {
  EXPECT_TRUE(projectivity_test(group_pair(symmetric_group(3), "(01)").ext));
  EXPECT_TRUE(projectivity_test(triangular().ext));
  auto dual = truncated_polynomial_algebra<Q>(2);
  EXPECT_TRUE(projectivity_test(build_extension<Q>(dual, scalars_subalgebra(*dual))));
  auto d = dual_numbers_times_field<Q>();
  EXPECT_FALSE(projectivity_test(build_extension<Q>(d, {d->unit(), d->basis(1)})));
}
