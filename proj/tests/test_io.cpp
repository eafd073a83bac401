#include <gtest/gtest.h>

#include "d2lab/report.hpp"

using namespace d2lab;
using Q = Rational;

namespace {

std::string data(const std::string& name) { return std::string(D2LAB_TEST_DATA) + "/" + name; }

}  // namespace

TEST(GroupInput, Builders) {
  EXPECT_EQ(group_from_name("S4", 5040)->order(), 24u);
  EXPECT_EQ(group_from_name("A5", 5040)->order(), 60u);
  EXPECT_EQ(group_from_name("C7", 5040)->order(), 7u);
  EXPECT_EQ(group_from_name("D5", 5040)->order(), 10u);
  EXPECT_EQ(group_from_name("Q8", 5040)->order(), 8u);
  EXPECT_THROW(group_from_name("X3", 5040), ParseError);
  EXPECT_THROW(group_from_name("S0", 5040), ParseError);
  EXPECT_THROW(group_from_name("S9", 5040), OrderCapExceeded);
}

TEST(GroupInput, Files) {
  const auto j = read_json_file(data("s3_with_s2.json"));
  const auto g = group_from_json(j, 5040);
  EXPECT_EQ(g->order(), 6u);
  const auto emb = subgroup_from_json(g, j.at("subgroup"));
  EXPECT_EQ(emb.subgroup->order(), 2u);
  EXPECT_EQ(generators_string(*emb.subgroup), "(0,1)");

  EXPECT_EQ(group_from_json(read_json_file(data("q8_regular.json")), 5040)->order(), 8u);
  EXPECT_THROW(read_json_file(data("missing.json")), ParseError);
}

TEST(GroupInput, SubgroupsMustLieInTheGroup) {
  const auto g = group_from_name("A4", 5040);
  EXPECT_EQ(subgroup_from_text(g, "(01)(23)").subgroup->order(), 2u);
  EXPECT_THROW(subgroup_from_text(g, "(01)"), ParseError);
  EXPECT_THROW(subgroup_from_json(g, json::parse("[7]")), ParseError);
  EXPECT_THROW(group_from_json(json::parse(R"({"degree": 3})"), 5040), ParseError);
  EXPECT_THROW(group_from_json(json::parse(R"({"degree": 3, "generators": [[0, 5]]})"), 5040), ParseError);
}

TEST(AlgebraInput, DualNumbers) {
  const auto j = read_json_file(data("dual_numbers.json"));
  EXPECT_EQ(field_conductor(j), 1u);
  const auto a = algebra_from_json<Q>(j);
  ASSERT_EQ(a->dim(), 2u);
  const auto x = a->basis(1);
  EXPECT_TRUE(is_zero_vec(a->mul(x, x)));
  const ExtensionSpaces<Q> sp(build_extension(a, subalgebra_from_json<Q>(j.at("subalgebra"), 2)));
  EXPECT_FALSE(separability_element(sp).element.has_value());
}

TEST(AlgebraInput, CyclotomicScalars) {
  const auto j = read_json_file(data("qzeta3_squared.json"));
  EXPECT_EQ(field_conductor(j), 3u);
  const auto a = algebra_from_json<Cyclotomic>(j);
  const auto b = subalgebra_from_json<Cyclotomic>(j.at("subalgebra"), 2);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b[0], a->unit());
  const ExtensionSpaces<Cyclotomic> sp(build_extension(a, b));
  EXPECT_TRUE(d2_test(sp, Side::left).holds());
  EXPECT_TRUE(separability_element(sp).element.has_value());
  EXPECT_FALSE(h_separability_test(sp).has_value());
}

TEST(AlgebraInput, RejectsMalformedFiles) {
  EXPECT_THROW(algebra_from_json<Q>(json::parse(R"({"dim": 2})")), ParseError);
  EXPECT_THROW(algebra_from_json<Q>(json::parse(R"({"dim": 1, "structure": [[[3, 1]]], "unit": [1]})")), ParseError);
  EXPECT_THROW(algebra_from_json<Q>(json::parse(R"({"dim": 1, "structure": [[[0, "1/0"]]], "unit": [1]})")),
               std::exception);
  EXPECT_THROW(field_conductor(json::parse(R"({"field": "R"})")), ParseError);
  EXPECT_THROW(algebra_from_name<Q>("matrix", 0), ParseError);
  EXPECT_THROW(subalgebra_from_name(*matrix_algebra<Q>(2), "nonsense"), ParseError);
  EXPECT_EQ(subalgebra_from_name(*matrix_algebra<Q>(2), "span:[[1,0,0,1]]").size(), 1u);
}

TEST(Reports, OkIsRecursive) {
  EXPECT_TRUE(report_ok(json::parse(R"({"results": [{"ok": true}, {"inner": {"ok": true}}]})")));
  EXPECT_FALSE(report_ok(json::parse(R"({"results": [{"ok": true}, {"inner": [{"ok": false}]}]})")));
}

TEST(Reports, TextRenderingCarriesEveryValue) {
  const auto j = json::parse(R"({"check": "d2", "ok": true, "a": [[1, 0], [0, 1]], "witness": null})");
  const auto text = render_text(j);
  EXPECT_NE(text.find("check: d2"), std::string::npos);
  EXPECT_NE(text.find("ok: true"), std::string::npos);
  EXPECT_NE(text.find("[1, 0]"), std::string::npos);
  EXPECT_NE(text.find("witness: -"), std::string::npos);
}

TEST(Reports, GroupCheck) {
  const auto g = group_from_name("S3", 5040);
  const auto r = group_check_json(subgroup_from_text(g, "(01)"), true);
  EXPECT_FALSE(r.at("d2").get<bool>());
  EXPECT_EQ(r.at("witness"), json::parse("[1, 2]"));
  EXPECT_TRUE(report_ok(r));
  const auto table = character_table_json(character_table(g));
  EXPECT_EQ(table.at("irreducibles").size(), 3u);
}
