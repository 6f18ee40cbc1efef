#include <gtest/gtest.h>

#include <random>

#include "pvakit/errors.hpp"
#include "pvakit/sampling.hpp"

using namespace pvakit;

namespace {

ScalarExpr F(const std::string& name, MultiIndex d = {}) { return ScalarExpr::function(name, d); }
const ScalarExpr p = ScalarExpr::base(0), q = ScalarExpr::base(1);

ConditionSystem sys(std::initializer_list<ScalarExpr> eqs) {
  ConditionSystem s;
  int k = 0;
  for (const auto& e : eqs) s.add_raw(e, "e" + std::to_string(++k));
  return s;
}

std::uint64_t ref_mod(const mpz_class& z) {
  mpz_class r = z % mpz_class(std::to_string(modp::P));
  if (r < 0) r += mpz_class(std::to_string(modp::P));
  return std::stoull(r.get_str());
}

}  // namespace

TEST(ModP, AgreesWithBigIntegers) {
  std::mt19937_64 rng(5);
  mpz_class P(std::to_string(modp::P));
  for (int k = 0; k < 1000; ++k) {
    std::uint64_t a = rng() % modp::P, b = rng() % modp::P;
    mpz_class A(std::to_string(a)), B(std::to_string(b));
    EXPECT_EQ(modp::mul(a, b), ref_mod(A * B));
    EXPECT_EQ(modp::add(a, b), ref_mod(A + B));
    EXPECT_EQ(modp::sub(a, b), ref_mod(A - B));
    if (a) EXPECT_EQ(modp::mul(a, modp::inv(a)), 1u);
  }
  EXPECT_THROW(modp::inv(0), ZeroDivide);
}

TEST(ModP, ImaginaryUnit) {
  EXPECT_EQ(modp::mul(modp::I, modp::I), modp::P - 1);
  EXPECT_EQ(modp::reduce(GaussianRational(0, 1)), modp::I);
  EXPECT_EQ(modp::reduce(GaussianRational(mpq_class(1, 2))), modp::inv(2));
}

TEST(Linearize, SplitsJetsFromRest) {
  LinearExpr e = linearize(p * F("A", {1, 0}) + q * F("A") + p * q);
  EXPECT_EQ(e.order(), 1);
  EXPECT_EQ(e.coeffs.size(), 2u);
  EXPECT_EQ(e.rest, p * q);
  EXPECT_THROW(linearize(F("A") * F("B")), Error);
  EXPECT_THROW(linearize(ScalarExpr(1) / F("A")), Error);
}

TEST(Linearize, TotalPartialIsProductRule) {
  LinearExpr e = linearize(p * F("A", {0, 1}));
  LinearExpr dp = total_partial(e, 0);
  EXPECT_EQ(dp.coeffs.at(Atom::function("A", {0, 1})), ScalarExpr(1));
  EXPECT_EQ(dp.coeffs.at(Atom::function("A", {1, 1})), p);
}

TEST(Linearize, ProlongCountsDerivatives) {
  LinearExpr e = linearize(F("A", {1, 0}));
  // Orders 1..3 in two variables: 1 + 2 + 3 derivatives.
  EXPECT_EQ(prolong(e, 2, 3).size(), 6u);
  EXPECT_TRUE(prolong(e, 2, 0).empty());
}

TEST(ModSpanTest, RankAndMembership) {
  Atom a = Atom::function("A"), b = Atom::function("B"), c = Atom::function("C");
  ModSpan s;
  EXPECT_TRUE(s.add({{a, 1}, {b, 2}}));
  EXPECT_TRUE(s.add({{b, 1}, {c, 1}}));
  EXPECT_FALSE(s.add({{a, 1}, {b, 3}, {c, 1}}));
  EXPECT_EQ(s.rank(), 2u);
  EXPECT_TRUE(s.contains({{a, 2}, {b, 5}, {c, 1}}));
  EXPECT_FALSE(s.contains({{a, 1}}));
  EXPECT_FALSE(s.contains({{Atom::function("D"), 1}}));
  EXPECT_TRUE(s.contains({}));
}

TEST(ModSpanTest, PriorityElimination) {
  // Eliminating h from A = h_p, B = h_q leaves a row free of h.
  Atom h = Atom::function("h"), A = Atom::function("A"), B = Atom::function("B");
  ModSpan s([](const Atom& x) { return x.name == "h" ? 0 : 1; });
  s.add({{A, 1}, {h, modp::P - 1}});
  s.add({{B, 1}, {h, modp::P - 2}});
  auto rows = s.rows_from(1);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_FALSE(rows[0].count(h));
  EXPECT_EQ(rows[0].size(), 2u);
}

TEST(ModSpanTest, RandomAgainstRankCount) {
  // k random vectors in a space of dimension m have rank min(k, m).
  std::mt19937_64 rng(9);
  for (int m : {3, 7, 12}) {
    ModSpan s;
    for (int k = 0; k < m + 4; ++k) {
      ModVector v;
      for (int j = 0; j < m; ++j) v[Atom::function("X", {j, 0})] = rng() % modp::P;
      s.add(v);
    }
    EXPECT_EQ(s.rank(), static_cast<std::size_t>(m));
  }
}

TEST(Equivalence, SameSystemDifferentBasis) {
  auto l = sys({F("A", {1, 0}) - p * F("B"), F("B", {0, 1})});
  auto r = sys({F("A", {1, 0}) - p * F("B") + q * F("B", {0, 1}), 3 * F("B", {0, 1})});
  SamplingOptions o;
  o.samples = 5;
  EXPECT_TRUE(compare_linear_systems(l, r, 2, o).pass());
}

TEST(Equivalence, ConsequenceByProlongation) {
  // B_pq = 0 follows from B_q = 0 by differentiation.
  auto l = sys({F("B", {0, 1})});
  auto r = sys({F("B", {0, 1}), F("B", {1, 1})});
  SamplingOptions o;
  o.samples = 3;
  EXPECT_TRUE(compare_linear_systems(l, r, 2, o).pass());
}

TEST(Equivalence, PerturbationIsDetected) {
  auto l = sys({F("A", {1, 0}) - p * F("B"), F("B", {0, 1})});
  auto r = sys({F("A", {1, 0}) - q * F("B"), F("B", {0, 1})});
  SamplingOptions o;
  o.samples = 3;
  auto rep = compare_linear_systems(l, r, 2, o);
  EXPECT_EQ(rep.missing_in_right, std::vector<std::string>{"e1"});
  EXPECT_EQ(rep.missing_in_left, std::vector<std::string>{"e1"});
}

TEST(Equivalence, InhomogeneousSystems) {
  auto l = sys({F("A") - p});
  auto r = sys({F("A") - q});
  SamplingOptions o;
  o.samples = 3;
  EXPECT_FALSE(compare_linear_systems(l, r, 2, o).pass());
  EXPECT_TRUE(compare_linear_systems(l, sys({2 * F("A") - 2 * p}), 2, o).pass());
}

TEST(Equivalence, Deterministic) {
  auto l = sys({F("A", {1, 0}) - p * F("B")});
  auto r = sys({F("A", {1, 0})});
  SamplingOptions o;
  o.samples = 4;
  auto a = compare_linear_systems(l, r, 2, o), b = compare_linear_systems(l, r, 2, o);
  EXPECT_EQ(a.seeds, b.seeds);
  EXPECT_EQ(a.missing_in_left, b.missing_in_left);
}

TEST(PolynomialSpans, QuadraticSystems) {
  ScalarExpr x = F("G"), y = F("H");
  auto l = sys({x * y, x * x - y});
  auto r = sys({2 * x * y + x * x - y, x * x - y});
  SamplingOptions o;
  o.samples = 10;
  EXPECT_TRUE(compare_polynomial_spans(l, r, 2, 0, o).pass());
  auto bad = compare_polynomial_spans(l, sys({x * y}), 2, 0, o);
  EXPECT_EQ(bad.missing_in_right, std::vector<std::string>{"e2"});
  EXPECT_TRUE(bad.missing_in_left.empty());
}

TEST(PolynomialSpans, PartialsAreIncluded) {
  ScalarExpr x = F("G");
  auto l = sys({x * x});
  auto r = sys({x * x, x * F("G", {1, 0})});
  SamplingOptions o;
  o.samples = 10;
  EXPECT_FALSE(compare_polynomial_spans(l, r, 2, 0, o).pass());
  EXPECT_TRUE(compare_polynomial_spans(l, r, 2, 1, o).pass());
}

TEST(Compatibility, CurlCondition) {
  // A = h_p, B = h_q: the only condition is A_q = B_p.
  auto s = sys({F("A") - F("h", {1, 0}), F("B") - F("h", {0, 1})});
  SamplePoint at{3};
  auto conds = compatibility_conditions(s, {"h"}, 2, 2, at);
  ASSERT_EQ(conds.size(), 1u);
  EXPECT_EQ(conds[0].size(), 2u);
  EXPECT_TRUE(conds[0].count(Atom::function("A", {0, 1})));
  EXPECT_TRUE(conds[0].count(Atom::function("B", {1, 0})));
  // Gradient fields pass, a rotation does not.
  EXPECT_EQ(apply(conds[0], {{"A", 2 * p * q}, {"B", p * p}}, at), 0u);
  EXPECT_NE(apply(conds[0], {{"A", q}, {"B", -p}}, at), 0u);
}

TEST(Compatibility, AgainstReference) {
  auto s = sys({F("A") - F("h", {1, 0}), F("B") - F("h", {0, 1})});
  SamplingOptions o;
  o.samples = 3;
  auto good = compare_compatibility(s, {"h"}, sys({F("A", {0, 1}) - F("B", {1, 0})}), 2, 2, o);
  EXPECT_TRUE(good.implied_by_fixture && good.implies_fixture);
  auto bad = compare_compatibility(s, {"h"}, sys({F("A", {0, 1}) + F("B", {1, 0})}), 2, 2, o);
  EXPECT_FALSE(bad.implied_by_fixture);
  EXPECT_FALSE(bad.implies_fixture);
}

TEST(OutsideSpan, Indices) {
  auto s = sys({F("A", {1, 0})});
  SamplingOptions o;
  o.samples = 2;
  auto out = outside_span({F("A", {1, 1}), F("A", {0, 1}), p * F("A", {2, 0})}, s, 2, o);
  EXPECT_EQ(out, std::vector<std::size_t>{1});
}

TEST(PointValues, AssignedJetsAreDerivatives) {
  auto vals = point_values({{"A", p * p * q}}, 17);
  EXPECT_TRUE(vanishes_at(sys({F("A", {1, 0}) - 2 * p * q}), vals));
  EXPECT_FALSE(vanishes_at(sys({F("A", {1, 0}) - p * q}), vals));
}
