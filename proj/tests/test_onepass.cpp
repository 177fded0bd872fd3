#include <gtest/gtest.h>

#include "dgl/church.hpp"
#include "dgl/onepass.hpp"
#include "dgl/parser.hpp"
#include "dgl/printer.hpp"
#include "dgl/random_ast.hpp"

using namespace dgl;

namespace {

Variable v(const char* n, int o = 0) { return Variable(n, o); }

const char* kAssignEquiv = "<v:=f()>p(v) <-> p(f())";

}  // namespace

TEST(SubstTerm, ReplacementWithoutBinder) {
  USubst s = parse_subst("f() ~> -x");
  auto r = subst_term(s, VarSet{}, parse_term("f()"));
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.value(), parse_term("-x"));
}

TEST(SubstTerm, ReplacementUnderTaboo) {
  USubst s = parse_subst("f() ~> -x");
  auto r = subst_term(s, VarSet{v("x"), v("x", 1)}, parse_term("f()"));
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.clash().witness, VarSet{v("x")});
  EXPECT_EQ(r.clash().key, Symbol::function("f", 0));
}

TEST(SubstTerm, IdentityLeavesTermsAlone) {
  AstGenerator gen(3);
  USubst id;
  for (int i = 0; i < 200; ++i) {
    Term t = gen.term(5);
    auto r = subst_term(id, gen.taboo(), t);
    ASSERT_TRUE(r.ok());
    ASSERT_EQ(r.value(), t);
  }
}

TEST(SubstTerm, DifferentialMakesEverythingTaboo) {
  USubst s = parse_subst("g() ~> y");
  EXPECT_FALSE(subst_term(s, VarSet{}, parse_term("(x*g())'")).ok());
  USubst closed = parse_subst("g() ~> 2");
  auto r = subst_term(closed, VarSet{}, parse_term("(x*g())'"));
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.value(), parse_term("(x*2)'"));
}

TEST(SubstFormula, ClashAtPlaceholderOfOdeReplacement) {
  USubst s = parse_subst("p(.) ~> [{x'=.}]x>=0 ; f() ~> -x");
  auto r = us(s, parse_formula(kAssignEquiv));
  ASSERT_FALSE(r.ok());
  const ClashInfo& c = r.clash();
  EXPECT_TRUE(c.at_dot);
  EXPECT_EQ(c.key, Symbol::predicate("p", 1));
  EXPECT_EQ(c.taboo, (VarSet{v("x"), v("x", 1)}));
  EXPECT_EQ(c.witness, VarSet{v("x")});
  ASSERT_EQ(c.culprits.size(), 1u);
  EXPECT_EQ(c.culprits[0], Symbol::function("f", 0));
  // right-hand side of the equivalence, then into p's replacement
  ASSERT_GE(c.path.size(), 2u);
  EXPECT_EQ(c.path[0], 1);
  EXPECT_EQ(c.path[1], -1);
}

TEST(SubstFormula, SoundUseOfLoopReplacement) {
  USubst s = parse_subst("p(.) ~> [{x:=x+.; {x'=.}}*](x+.>=0) ; f() ~> -v");
  auto r = us(s, parse_formula(kAssignEquiv));
  ASSERT_TRUE(r.ok()) << r.clash().describe();
  EXPECT_EQ(pretty(r.value()), "<v:=-v>[{x:=x+v;{x'=v}}*]x+v>=0<->[{x:=x+-v;{x'=-v}}*]x+-v>=0");
}

TEST(SubstFormula, VectorialOdeCapturesY) {
  Formula f = parse_formula("<{x'=f(x), y'=a(x)*y}>x>=1 <-> <{x'=f(x)}>x>=1");
  auto bad = us(parse_subst("f(.) ~> .^2 ; a(.) ~> z*y"), f);
  ASSERT_FALSE(bad.ok());
  EXPECT_EQ(bad.clash().witness, VarSet{v("y")});
  EXPECT_EQ(bad.clash().key, Symbol::function("a", 1));
  EXPECT_EQ(bad.clash().taboo, (VarSet{v("x"), v("x", 1), v("y"), v("y", 1)}));

  auto good = us(parse_subst("f(.) ~> .^2 ; a(.) ~> z*.^2"), f);
  ASSERT_TRUE(good.ok());
  EXPECT_EQ(good.value(), parse_formula("<{x'=x^2, y'=z*x^2*y}>x>=1 <-> <{x'=x^2}>x>=1"));
}

TEST(SubstFormula, GameSymbolMakesEverythingTaboo) {
  auto r = us(parse_subst("q() ~> x>=0"), parse_formula("<a>q()"));
  ASSERT_FALSE(r.ok());
  EXPECT_TRUE(r.clash().taboo.is_all());
}

TEST(SubstGame, AssignmentTaboo) {
  auto r = subst_game(USubst{}, VarSet{}, parse_game("x:=x+1"));
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.value().out_taboo, VarSet{v("x")});
}

TEST(SubstGame, LoopReachesFixpointInTwoPasses) {
  USubst d = dot_subst(Term::var("v"));
  SubstStats stats;
  auto r = subst_game(d, VarSet{}, parse_game("{x:=x+.; {x'=.}}*"), {LoopMode::TwoPass, &stats});
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.value().out_taboo, (VarSet{v("x"), v("x", 1)}));
  EXPECT_EQ(r.value().game, parse_game("{x:=x+v; {x'=v}}*"));
  EXPECT_EQ(stats.assigns, 2u);
}

TEST(SubstGame, GameReplacementTaboo) {
  auto r = subst_game(parse_subst("a ~> {x:=1}"), VarSet{v("y")}, parse_game("a"));
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.value().game, parse_game("x:=1"));
  EXPECT_EQ(r.value().out_taboo, (VarSet{v("x"), v("y")}));
}

TEST(SubstGame, UnboundGameSymbolTabooIsAll) {
  auto r = subst_game(USubst{}, VarSet{}, parse_game("a;x:=1"));
  ASSERT_TRUE(r.ok());
  EXPECT_TRUE(r.value().out_taboo.is_all());
}

TEST(SubstGame, BoundVarsLoopModeAgreesWithTwoPass) {
  AstGenerator gen(11);
  int defined = 0;
  for (int i = 0; i < 2000; ++i) {
    USubst s = gen.subst();
    VarSet U = gen.taboo();
    Game g = gen.game(6);
    auto two = subst_game(s, U, g, {LoopMode::TwoPass, nullptr});
    auto bv = subst_game(s, U, g, {LoopMode::BoundVars, nullptr});
    ASSERT_EQ(two.ok(), bv.ok()) << pretty(g) << " under " << pretty(s);
    if (two.ok()) {
      ++defined;
      ASSERT_EQ(two.value().game, bv.value().game);
      ASSERT_EQ(two.value().out_taboo, bv.value().out_taboo);
    }
  }
  EXPECT_GT(defined, 200);
}

TEST(SubstGame, OutputTabooIsInputPlusBoundVariables) {
  AstGenerator gen(12);
  for (int i = 0; i < 2000; ++i) {
    USubst s = gen.subst();
    VarSet U = gen.taboo();
    Game g = gen.game(6);
    auto r = subst_game(s, U, g);
    if (!r.ok()) continue;
    ASSERT_EQ(r.value().out_taboo, U | bound_vars(r.value().game)) << pretty(g);
  }
}

TEST(SubstGame, OutputTabooIgnoresReplacementShapes) {
  // Same fv, different shapes: the taboo must not change.
  Game g = parse_game("x:=f(y); ?p(x); {z'=g()}");
  auto r1 = subst_game(parse_subst("f(.) ~> .+u ; p(.) ~> .>=u ; g() ~> u"), VarSet{v("w")}, g);
  auto r2 = subst_game(parse_subst("f(.) ~> u*u*. ; p(.) ~> !(u<.) ; g() ~> u^2"), VarSet{v("w")}, g);
  ASSERT_TRUE(r1.ok());
  ASSERT_TRUE(r2.ok());
  EXPECT_EQ(r1.value().out_taboo, r2.value().out_taboo);
}

TEST(SubstGame, Deterministic) {
  AstGenerator a(99), b(99);
  for (int i = 0; i < 300; ++i) {
    USubst s1 = a.subst(), s2 = b.subst();
    Formula f1 = a.formula(6), f2 = b.formula(6);
    auto r1 = us(s1, f1), r2 = us(s2, f2);
    ASSERT_EQ(r1.ok(), r2.ok());
    if (r1.ok()) {
      ASSERT_EQ(pretty(r1.value()), pretty(r2.value()));
    }
  }
}

TEST(Us, IdentityOnRandomFormulas) {
  AstGenerator gen(5);
  for (int i = 0; i < 500; ++i) {
    Formula f = gen.formula(6);
    auto r = us(USubst{}, f);
    ASSERT_TRUE(r.ok());
    ASSERT_EQ(r.value(), f);
  }
}

TEST(Clash, DescribeNamesIntroducingSymbol) {
  USubst s = parse_subst("p(.) ~> [{x'=.}]x>=0 ; f() ~> -x");
  auto r = us(s, parse_formula(kAssignEquiv));
  ASSERT_FALSE(r.ok());
  std::string d = r.clash().describe();
  EXPECT_NE(d.find("f()"), std::string::npos) << d;
  EXPECT_NE(d.find("{x,x'}"), std::string::npos) << d;
}
