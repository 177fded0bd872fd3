#include <gtest/gtest.h>

#include <random>

#include "dgl/parser.hpp"
#include "dgl/printer.hpp"
#include "dgl/syntax.hpp"
#include "dgl/varset.hpp"
#include "dgl/well_formed.hpp"

using namespace dgl;

namespace {

Variable v(const char* n, int o = 0) { return Variable(n, o); }

VarSet random_set(std::mt19937_64& rng) {
  static const char* names[] = {"x", "y", "z", "v", "w"};
  std::vector<Variable> members;
  for (const char* n : names)
    for (int o = 0; o < 2; ++o)
      if (rng() % 3 == 0) members.emplace_back(n, o);
  return rng() % 2 ? VarSet::finite(members) : VarSet::all_except(members);
}

}  // namespace

TEST(VarSet, AllIntersectFinite) {
  EXPECT_EQ(VarSet::all() & VarSet{v("x")}, VarSet{v("x")});
  EXPECT_EQ(VarSet{v("x")} & VarSet::all(), VarSet{v("x")});
}

TEST(VarSet, DisjointFromTabooOfClashTrace) {
  EXPECT_TRUE(disjoint(VarSet{v("x")}, VarSet{v("v")}));
  EXPECT_FALSE(disjoint(VarSet{v("x")}, VarSet{v("x"), v("x", 1)}));
  EXPECT_FALSE(disjoint(VarSet::all(), VarSet::all_except({v("x")})));
  EXPECT_TRUE(disjoint(VarSet{}, VarSet::all()));
}

TEST(VarSet, ComplementIsInvolution) {
  VarSet s{v("x"), v("y")};
  EXPECT_EQ(~~s, s);
  EXPECT_NE(~s, s);
  EXPECT_TRUE((~s).cofinite());
}

TEST(VarSet, EmptyIsNotAll) {
  EXPECT_NE(VarSet{}, VarSet::all());
  EXPECT_TRUE(VarSet{}.empty());
  EXPECT_FALSE(VarSet::all().empty());
  EXPECT_TRUE(VarSet::all().is_all());
}

TEST(VarSet, Printing) {
  EXPECT_EQ((VarSet{v("x", 1), v("x")}).str(), "{x,x'}");
  EXPECT_EQ(VarSet::all().str(), "all");
  EXPECT_EQ(VarSet::all_except({v("y")}).str(), "all\\{y}");
}

TEST(VarSet, BooleanAlgebraLawsOnRandomTriples) {
  std::mt19937_64 rng(7);
  static const char* names[] = {"x", "y", "z", "v", "w", "u"};
  for (int i = 0; i < 10000; ++i) {
    VarSet a = random_set(rng), b = random_set(rng), c = random_set(rng);
    ASSERT_EQ((a | b) & c, (a & c) | (b & c));
    ASSERT_EQ(~(a | b), ~a & ~b);
    ASSERT_EQ(~(a & b), ~a | ~b);
    ASSERT_EQ(~~a, a);
    ASSERT_EQ(a | b, b | a);
    ASSERT_EQ((a | b) | c, a | (b | c));
    ASSERT_EQ(disjoint(a, b), (a & b).empty());
    ASSERT_EQ(subset_of(a, a | b), true);
    // membership agrees with the set operations
    for (const char* n : names)
      for (int o = 0; o < 2; ++o) {
        Variable x(n, o);
        ASSERT_EQ((a | b).contains(x), a.contains(x) || b.contains(x));
        ASSERT_EQ((a & b).contains(x), a.contains(x) && b.contains(x));
        ASSERT_EQ((~a).contains(x), !a.contains(x));
      }
  }
}

TEST(WellFormed, AssignmentIsValid) {
  Game g = Game::assign(v("x"), Term::plus(Term::var("x"), Term::number(1)));
  EXPECT_TRUE(well_formed(g).empty());
}

TEST(WellFormed, DifferentialOfDifferentialVariable) {
  auto vs = well_formed(Term::differential(Term::var("x", 1)));
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_NE(vs[0].message.find("differential of differential variable"), std::string::npos);
  EXPECT_EQ(vs[0].path, std::vector<int>{0});
}

TEST(WellFormed, NestedDifferential) {
  EXPECT_FALSE(well_formed(Term::differential(Term::differential(Term::var("x")))).empty());
}

TEST(WellFormed, ControlSetMentioningOtherVariable) {
  Term rhs = Term::times(Term::var("y"), Term::var("z"));
  Formula Y = Formula::conj(Formula::geq(Term::var("y"), Term::number(0)), Formula::geq(Term::var("x"), Term::number(0)));
  Formula Z = Formula::compare(FormulaKind::Leq, Term::var("z"), Term::number(1));
  Game g = Game::diff_game({{v("x"), rhs}}, v("y"), Y, v("z"), Z);
  auto vs = well_formed(g);
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_NE(vs[0].message.find("FV(Y)"), std::string::npos);
}

TEST(WellFormed, ArityMismatch) {
  Term t = Term::apply(Symbol::function("f", 1));
  EXPECT_FALSE(well_formed(t).empty());
}

TEST(WellFormed, DuplicateOdeVariable) {
  Game g = Game::ode({{v("x"), Term::number(1)}, {v("x"), Term::number(2)}}, Formula::truth());
  EXPECT_FALSE(well_formed(g).empty());
}

TEST(WellFormed, NegativeLiteralRejected) {
  EXPECT_FALSE(well_formed(Term::number(-1)).empty());
  EXPECT_TRUE(well_formed(Term::neg(Term::number(1))).empty());
}

TEST(WellFormed, SubtreesOfWellFormedTreesAreWellFormed) {
  Formula f = parse_formula("<{x:=x+1; {x'=-x & x>=0}}*>\\exists y (y>=x & p(y))");
  EXPECT_TRUE(well_formed(f).empty());
  EXPECT_TRUE(well_formed(f.game()).empty());
  EXPECT_TRUE(well_formed(f.game().operand().right()).empty());
  EXPECT_TRUE(well_formed(f.body()).empty());
}

TEST(Syntax, StructuralEquality) {
  Term a = Term::plus(Term::var("x"), Term::number(1));
  Term b = Term::plus(Term::var("x"), Term::number(1));
  EXPECT_EQ(a, b);
  EXPECT_NE(a, Term::plus(Term::var("x"), Term::number(2)));
  EXPECT_EQ(a.size(), 3u);
}

TEST(Syntax, WrongAccessorThrows) {
  EXPECT_THROW(Term::var("x").left(), std::logic_error);
  EXPECT_THROW(Formula::truth().game(), std::logic_error);
  EXPECT_THROW(Game::symbol("a").operand(), std::logic_error);
}
