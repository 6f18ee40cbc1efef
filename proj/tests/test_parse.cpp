#include <gtest/gtest.h>

#include "gen.hpp"
#include "pvakit/errors.hpp"
#include "pvakit/parse.hpp"

using namespace pvakit;

namespace {

ParseContext ctx(Dims dm, std::vector<std::string> gens = {}) {
  ParseContext c;
  c.names = Names(dm, std::move(gens));
  c.constants = {"K"};
  return c;
}

LambdaPoly random_lambda(testgen::Gen& g, Dims dm, bool mu) {
  LambdaPoly l(dm);
  int k = g.uniform(1, 3);
  for (int t = 0; t < k; ++t) {
    MultiIndex lam, m;
    for (int s = g.uniform(0, 2); s > 0; --s) lam = lam.plus_unit(g.uniform(0, dm.d - 1));
    if (mu)
      for (int s = g.uniform(0, 1); s > 0; --s) m = m.plus_unit(g.uniform(0, dm.d - 1));
    l += g.diff_poly(dm, 2, 2) * LambdaPoly::monomial(dm, lam, m);
  }
  return l;
}

}  // namespace

TEST(Parse, Precedence) {
  auto c = ctx({1, 2}, {"p", "q"});
  ScalarExpr p = ScalarExpr::base(0), q = ScalarExpr::base(1);
  EXPECT_EQ(parse_scalar("1 + 2*p^2", c), 1 + 2 * p * p);
  EXPECT_EQ(parse_scalar("-p^2", c), -(p * p));
  EXPECT_EQ(parse_scalar("(p + q)^2 / (p - q)", c), (p + q) * (p + q) / (p - q));
  EXPECT_EQ(parse_scalar("p/q/2", c), p / q / ScalarExpr(2));
  EXPECT_EQ(parse_scalar("p^-1", c), ScalarExpr(1) / p);
}

TEST(Parse, ImaginaryUnitAndConstants) {
  auto c = ctx({1, 1});
  EXPECT_EQ(parse_scalar("i*i", c), ScalarExpr(-1));
  EXPECT_EQ(parse_scalar("c3 + K", c), ScalarExpr::constant("c3") + ScalarExpr::constant("K"));
}

TEST(Parse, FunctionJets) {
  auto c = ctx({1, 2}, {"p", "q"});
  EXPECT_EQ(parse_scalar("F[h]", c), ScalarExpr::function("h"));
  EXPECT_EQ(parse_scalar("F[h; 2, 1]", c), ScalarExpr::function("h", {2, 1}));
  EXPECT_THROW(parse_scalar("F[h; 1]", c), ParseError);
}

TEST(Parse, PartialDerivativeSyntax) {
  auto c = ctx({1, 2}, {"p", "q"});
  EXPECT_EQ(parse_scalar("D[p](p^2*q + F[h])", c), parse_scalar("2*p*q + F[h;1,0]", c));
  EXPECT_EQ(parse_scalar("D[p,q](p^2*q^2)", c), parse_scalar("4*p*q", c));
  EXPECT_EQ(parse_scalar("D[q](q/p)", c), parse_scalar("1/p", c));
}

TEST(Parse, JetsAndLambda) {
  Dims dm{2, 1};
  auto c = ctx(dm);
  DiffPoly u1x = DiffPoly::jet(dm, 0, {1, 0});
  EXPECT_EQ(parse_diff("u1_(1,0)", c), u1x);
  LambdaPoly l = parse_lambda("l2*u1 + m1", c);
  EXPECT_EQ(l.coefficient(MultiIndex{0, 1}), DiffPoly(dm, ScalarExpr::base(0)));
  EXPECT_EQ(l.coefficient({}, MultiIndex{1, 0}), DiffPoly(dm, ScalarExpr(1)));
  auto nolam = c;
  nolam.allow_lambda = false;
  EXPECT_THROW(parse_lambda("l1", nolam), ParseError);
}

TEST(Parse, ErrorsCarryPosition) {
  auto c = ctx({1, 1});
  c.line = 7;
  c.column = 10;
  try {
    parse_scalar("u1 + * 2", c);
    FAIL() << "no error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line, 7);
    EXPECT_EQ(e.column, 15);
  }
  EXPECT_THROW(parse_scalar("u1 +", c), ParseError);
  EXPECT_THROW(parse_scalar("(u1", c), ParseError);
  EXPECT_THROW(parse_scalar("w", c), ParseError);
  EXPECT_THROW(parse_scalar("u1^x", c), ParseError);
  EXPECT_THROW(parse_scalar("1/0", c), Error);
}

TEST(Parse, ErrorOnLaterLine) {
  auto c = ctx({1, 1});
  try {
    parse_scalar("u1 +\n  ?", c);
    FAIL() << "no error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line, 2);
    EXPECT_EQ(e.column, 3);
  }
}

TEST(RoundTrip, ScalarText) {
  testgen::Gen g(11);
  auto c = ctx({1, 2});
  c.constants = {"c1", "c2"};
  for (int k = 0; k < 300; ++k) {
    ScalarExpr e = g.expr(2);
    EXPECT_EQ(parse_scalar(to_text(e, c.names), c), e) << to_text(e, c.names);
  }
}

TEST(RoundTrip, DiffText) {
  testgen::Gen g(12);
  for (Dims dm : {Dims{1, 1}, Dims{2, 2}, Dims{3, 2}}) {
    auto c = ctx(dm);
    for (int k = 0; k < 100; ++k) {
      DiffPoly f = g.diff_poly(dm);
      EXPECT_EQ(parse_diff(to_text(f, c.names), c), f) << to_text(f, c.names);
    }
  }
}

TEST(RoundTrip, LambdaTextAndSexpr) {
  testgen::Gen g(13);
  for (Dims dm : {Dims{1, 1}, Dims{2, 2}}) {
    auto c = ctx(dm, dm.n == 2 ? std::vector<std::string>{"p", "q"} : std::vector<std::string>{});
    for (int k = 0; k < 100; ++k) {
      LambdaPoly l = random_lambda(g, dm, k % 2 == 1);
      EXPECT_EQ(parse_lambda(to_text(l, c.names), c), l) << to_text(l, c.names);
      EXPECT_EQ(parse_sexpr(to_sexpr(l, c.names), c), l) << to_sexpr(l, c.names);
    }
  }
}

TEST(Sexpr, Errors) {
  auto c = ctx({1, 1});
  EXPECT_THROW(parse_sexpr("(+ 1", c), ParseError);
  EXPECT_THROW(parse_sexpr("(frob 1 2)", c), ParseError);
  EXPECT_THROW(parse_sexpr("(/ 1 0)", c), ParseError);
  EXPECT_THROW(parse_sexpr("1 2", c), ParseError);
}

TEST(Latex, DisplayOnly) {
  auto c = ctx({1, 2}, {"p", "q"});
  std::string s = to_latex(parse_scalar("p^2/q + F[h;0,1]", c), c.names);
  EXPECT_NE(s.find("\\frac"), std::string::npos) << s;
}
