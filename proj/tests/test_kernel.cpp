#include <gtest/gtest.h>

#include <fstream>
#include <sstream>
#include <type_traits>

#include "dgl/church.hpp"
#include "dgl/kernel.hpp"
#include "dgl/proof_script.hpp"
#include "dgl/random_ast.hpp"

using namespace dgl;

namespace {

Variable v(const char* n, int o = 0) { return Variable(n, o); }

std::string read_fixture(const std::string& name) {
  std::ifstream in(std::string(DGL_FIXTURES) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Provable given(const char* f) { return Kernel::oracle(parse_formula(f)); }

const AxiomId kAxioms[] = {AxiomId::box,    AxiomId::assign_eq, AxiomId::assign_eq_d,
                           AxiomId::DS,     AxiomId::test,      AxiomId::choice,
                           AxiomId::compose, AxiomId::iterate,  AxiomId::dual};

}  // namespace

static_assert(!std::is_constructible_v<Provable, Formula>);
static_assert(!std::is_default_constructible_v<Provable>);
static_assert(!std::is_constructible_v<Inference, std::vector<Formula>, Formula>);

TEST(Axioms, StoredConcreteFormulas) {
  EXPECT_EQ(Kernel::axiom_formula(AxiomId::test), parse_formula("<{?q()}>p() <-> q() & p()"));
  EXPECT_EQ(Kernel::axiom_formula(AxiomId::iterate), parse_formula("<{a}*><c>true <-> <c>true | <a><{a}*><c>true"));
  EXPECT_EQ(Kernel::axiom_formula(AxiomId::box), parse_formula("[a]<c>true <-> !<a>!<c>true"));
  EXPECT_EQ(Kernel::axiom_formula(AxiomId::assign_eq), parse_formula("<x:=f()><c>true <-> \\exists x (x=f() & <c>true)"));
  for (AxiomId id : kAxioms) EXPECT_EQ(Kernel::axiom(id).formula(), Kernel::axiom_formula(id));
  EXPECT_TRUE(Kernel::axiom(AxiomId::DS).oracles().empty());
}

TEST(Axioms, NamesRoundTrip) {
  for (const auto& [id, name] : axiom_names()) EXPECT_EQ(axiom_from_name(name), id);
  EXPECT_FALSE(axiom_from_name("K").has_value());
}

TEST(Us, IdentityOnEveryAxiom) {
  for (AxiomId id : kAxioms) EXPECT_EQ(Kernel::us(USubst{}, Kernel::axiom(id)).formula(), Kernel::axiom_formula(id));
}

TEST(Us, ComposeInstance) {
  USubst s = parse_subst("a ~> {x:=1} ; b ~> {?x>=0} ; c ~> {?x>=0}");
  Provable p = Kernel::us(s, Kernel::axiom(AxiomId::compose));
  EXPECT_EQ(p.formula(), parse_formula("<x:=1;?x>=0><{?x>=0}>true <-> <x:=1><{?x>=0}><{?x>=0}>true"));
  auto ref = church_formula(s, Kernel::axiom_formula(AxiomId::compose));
  ASSERT_TRUE(ref.ok());
  EXPECT_EQ(ref.value(), p.formula());
}

TEST(Us, SoundAndClashingUseOnAssignmentEquivalence) {
  Provable base = given("<v:=f()>p(v) <-> p(f())");
  Provable ok = Kernel::us(parse_subst("p(.) ~> [{x:=x+.; {x'=.}}*](x+.>=0) ; f() ~> -v"), base);
  EXPECT_EQ(pretty(ok.formula()), "<v:=-v>[{x:=x+v;{x'=v}}*]x+v>=0<->[{x:=x+-v;{x'=-v}}*]x+-v>=0");
  try {
    Kernel::us(parse_subst("p(.) ~> [{x'=.}]x>=0 ; f() ~> -x"), base);
    FAIL() << "expected a clash";
  } catch (const ClashError& e) {
    EXPECT_TRUE(e.info.at_dot);
    EXPECT_EQ(e.info.taboo, (VarSet{v("x"), v("x", 1)}));
  }
}

TEST(Us, AssignmentAxiomRejectsCapturedReplacement) {
  EXPECT_THROW(Kernel::us(parse_subst("f() ~> x"), Kernel::axiom(AxiomId::assign_eq)), ClashError);
  EXPECT_THROW(Kernel::us(parse_subst("f() ~> x'"), Kernel::axiom(AxiomId::assign_eq_d)), ClashError);
  EXPECT_NO_THROW(Kernel::us(parse_subst("f() ~> x'"), Kernel::axiom(AxiomId::assign_eq)));
}

TEST(Usr, MonotonicityWithGameReplacements) {
  Inference inf = Kernel::usr(parse_subst("a ~> {x:=x+1} ; c ~> {?x>=0} ; d ~> {?x>=1}"), Kernel::rule(RuleId::M));
  ASSERT_EQ(inf.premises().size(), 1u);
  EXPECT_EQ(inf.premises()[0], parse_formula("<{?x>=0}>true -> <{?x>=1}>true"));
  EXPECT_EQ(inf.conclusion(), parse_formula("<x:=x+1><{?x>=0}>true -> <x:=x+1><{?x>=1}>true"));
  Provable premise = given("<{?x>=0}>true -> <{?x>=1}>true");
  EXPECT_EQ(Kernel::infer(inf, {premise}).formula(), inf.conclusion());
  EXPECT_THROW(Kernel::infer(inf, {given("<{?x>=1}>true -> <{?x>=0}>true")}), KernelError);
  EXPECT_THROW(Kernel::infer(inf, {}), KernelError);
}

TEST(Usr, FixpointRuleAcceptsOpenGameReplacement) {
  Inference inf = Kernel::usr(parse_subst("c ~> {?p(x)}"), Kernel::rule(RuleId::FP));
  EXPECT_EQ(inf.conclusion(), parse_formula("<{a}*><{?p(x)}>true -> <d>true"));
}

TEST(Usr, OpenPredicateReplacementClashes) {
  Inference with_p = Kernel::usr(parse_subst("c ~> {?p()}"), Kernel::rule(RuleId::M));
  try {
    Kernel::usr(parse_subst("p() ~> x>=0"), with_p);
    FAIL() << "expected a clash";
  } catch (const ClashError& e) {
    EXPECT_EQ(e.info.witness, VarSet{v("x")});
    EXPECT_TRUE(e.info.taboo.is_all());
  }
  EXPECT_NO_THROW(Kernel::usr(parse_subst("p() ~> 1>=0"), with_p));
}

TEST(Mp, ExactAntecedent) {
  Provable r = Kernel::mp(given("x>=0 -> x>=-1"), given("x>=0"));
  EXPECT_EQ(r.formula(), parse_formula("x>=-1"));
  EXPECT_EQ(r.oracles().size(), 2u);
  EXPECT_THROW(Kernel::mp(given("x>=0 -> x>=-1"), given("x>=1")), KernelError);
  EXPECT_THROW(Kernel::mp(given("x>=0"), given("x>=0")), KernelError);
}

TEST(Allgen, Quantifies) {
  EXPECT_EQ(Kernel::allgen(given("x^2>=0"), v("x")).formula(), parse_formula("\\forall x x^2>=0"));
}

TEST(Rename, Transposition) {
  EXPECT_EQ(uniform_rename(parse_formula("<x:=x+1>x>=0"), v("x"), v("y")), parse_formula("<y:=y+1>y>=0"));
  EXPECT_EQ(uniform_rename(parse_term("x*y'"), v("x"), v("y")), parse_term("y*x'"));
  EXPECT_THROW(uniform_rename(parse_formula("<a>x>=0"), v("x"), v("y")), RenameUnsupported);
}

TEST(Rename, Involution) {
  AstGenerator gen(21);
  int checked = 0;
  for (int i = 0; i < 500; ++i) {
    Formula f = gen.formula(5);
    try {
      Formula once = uniform_rename(f, v("x"), v("y"));
      ASSERT_EQ(uniform_rename(once, v("x"), v("y")), f) << pretty(f);
      ++checked;
    } catch (const RenameUnsupported&) {
    }
  }
  EXPECT_GT(checked, 50);
}

TEST(Br, AcceptsRenamedPremise) {
  Provable premise = given("z>=1 -> <x:=z+1><x':=y'>x>=2");
  Formula target = parse_formula("z>=1 -> <y:=z+1>y>=2");
  EXPECT_EQ(Kernel::br(premise, target).formula(), target);
}

TEST(Br, RejectsOccurringFreshVariable) {
  EXPECT_THROW(Kernel::br(given("z>=1 -> <x:=z+1><x':=y'>x>=x"), parse_formula("z>=1 -> <y:=z+1>y>=x")), KernelError);
  EXPECT_THROW(Kernel::br(given("z>=1 -> <x:=z+1><x':=y'>x>=x'"), parse_formula("z>=1 -> <y:=z+1>y>=x'")),
               KernelError);
}

TEST(Br, RejectsMismatchedPremise) {
  Formula target = parse_formula("z>=1 -> <y:=z+1>y>=2");
  EXPECT_THROW(Kernel::br(given("z>=1 -> <x:=z+2><x':=y'>x>=2"), target), KernelError);
  EXPECT_THROW(Kernel::br(given("z>=1 -> <x:=z+1><x':=x'>x>=2"), target), KernelError);
  EXPECT_THROW(Kernel::br(given("z>=1 -> <x:=z+1>x>=2"), target), KernelError);
  EXPECT_THROW(Kernel::br(given("z>=1 -> <x:=z+1><x':=y'>x>=2"), parse_formula("z>=1 -> [y:=z+1]y>=2")), KernelError);
}

TEST(Br, BoxVariant) {
  Formula target = parse_formula("!y>=0 -> [y:=y]!y>=0");
  EXPECT_EQ(Kernel::br(given("!y>=0 -> [x:=y][x':=y']!x>=0"), target).formula(), target);
}

TEST(Br, RejectsGameSymbols) {
  EXPECT_THROW(Kernel::br(given("true -> <x:=1><x':=y'><a>x>=0"), parse_formula("true -> <y:=1><a>y>=0")),
               RenameUnsupported);
}

TEST(Ur, SwapsEverywhere) {
  Provable p = given("y>=0 <-> <y:=y>y>=0");
  EXPECT_EQ(Kernel::ur(p, v("y"), v("x")).formula(), parse_formula("x>=0 <-> <x:=x>x>=0"));
  EXPECT_EQ(Kernel::ur(given("x'>=y"), v("x"), v("y")).formula(), parse_formula("y'>=x"));
  EXPECT_THROW(Kernel::ur(p, v("y"), v("y")), KernelError);
  EXPECT_THROW(Kernel::ur(p, v("y", 1), v("x")), KernelError);
  EXPECT_THROW(Kernel::ur(given("<a>x>=0"), v("x"), v("y")), RenameUnsupported);
}

TEST(Ce, ReplacesSelectedOccurrences) {
  Provable eq = given("x>=0 & true <-> x>=0");
  Provable base = given("<x:=1>(x>=0 & true) | (x>=0 & true)");
  EXPECT_NO_THROW(Kernel::ce(eq, base, parse_formula("<x:=1>x>=0 | (x>=0 & true)")));
  EXPECT_NO_THROW(Kernel::ce(eq, base, parse_formula("<x:=1>x>=0 | x>=0")));
  EXPECT_NO_THROW(Kernel::ce(eq, given("x>=0"), parse_formula("x>=0 & true")));
  EXPECT_THROW(Kernel::ce(eq, base, parse_formula("<x:=2>x>=0 | x>=0")), KernelError);
  EXPECT_THROW(Kernel::ce(given("x>=0 -> x>=0"), base, base.formula()), KernelError);
}

TEST(Us, AgreesWithChurchOnAxioms) {
  AstGenerator gen(31);
  int defined = 0;
  for (int i = 0; i < 1000; ++i) {
    USubst s;
    if (gen.chance(70)) s.add(Symbol::function("f", 0), gen.term(3));
    if (gen.chance(50)) s.add(Symbol::predicate("p", 0), gen.formula(3));
    if (gen.chance(50)) s.add(Symbol::predicate("q", 0), gen.formula(3));
    for (const char* g : {"a", "b", "c", "d"})
      if (gen.chance(50)) s.add(Symbol::game(g), gen.game(3));
    for (AxiomId id : kAxioms) {
      const Formula& ax = Kernel::axiom_formula(id);
      auto ref = church_formula(s, ax);
      if (!ref.ok()) continue;
      ++defined;
      Provable p = Kernel::us(s, Kernel::axiom(id));
      ASSERT_EQ(p.formula(), ref.value()) << pretty(ax) << " under " << pretty(s);
    }
  }
  EXPECT_GT(defined, 1000);
}

TEST(Script, StutteringIdentity) {
  ProofReport r = check_proof(read_fixture("stuttering.dglp"));
  ASSERT_TRUE(r.accepted) << r.error->what();
  EXPECT_EQ(r.derived.back().second, parse_formula("x>=0 <-> <x:=x>x>=0"));
  EXPECT_FALSE(r.oracles.empty());
  for (const Formula& f : r.oracles) EXPECT_TRUE(signature(Expression(f)).size() <= 2) << pretty(f);
}

TEST(Script, AssignmentRenaming) {
  ProofReport r = check_proof(read_fixture("assign_rename.dglp"));
  ASSERT_TRUE(r.accepted) << r.error->what();
  EXPECT_EQ(r.derived.back().second, parse_formula("z>=1 -> <y:=z+1>y>=2"));
  EXPECT_EQ(r.oracles.size(), 2u);
}

TEST(Script, MutantsRejectedNoEarlierThanMutation) {
  for (const char* name : {"stuttering.dglp", "assign_rename.dglp"}) {
    auto mutants = mutate_script(read_fixture(name), 50, 17);
    ASSERT_EQ(mutants.size(), 50u);
    for (const auto& m : mutants) {
      ProofReport r = check_proof(m.text);
      ASSERT_FALSE(r.accepted) << name << " step " << m.step << ": " << m.original << " => " << m.mutated;
      EXPECT_GE(r.error->step, m.step) << r.error->what();
    }
  }
}

TEST(Script, Errors) {
  auto step_of = [](const char* text) {
    ProofReport r = check_proof(text);
    EXPECT_FALSE(r.accepted);
    return r.error ? r.error->step : -1;
  };
  EXPECT_EQ(step_of("let a = axiom test\nlet b = mp a c\nqed \"true\""), 2);
  EXPECT_EQ(step_of("let a = axiom nope\n"), 1);
  EXPECT_EQ(step_of("let a = axiom test\n"), 1);
  EXPECT_EQ(step_of("# only a comment\nlet a = axiom test\nqed \"true\""), 2);
  EXPECT_EQ(step_of("let a = axiom assign_eq\nlet b = us a \"f() ~> x\"\nqed \"true\""), 2);
  EXPECT_EQ(step_of("let a = axiom test\nlet a = axiom box\nqed \"true\""), 2);
  EXPECT_EQ(step_of("garbage line"), 0);
  ProofReport ok = check_proof("let a = oracle \"1>=0\"\n\nqed \"1>=0\"\n");
  EXPECT_TRUE(ok.accepted);
  ASSERT_EQ(ok.oracles.size(), 1u);
}

TEST(Script, UsrAndInferSteps) {
  const char* text =
      "let m = usr M \"a ~> {x:=x+1} ; c ~> {?x>=0} ; d ~> {?x>=1}\"\n"
      "let h = oracle \"<{?x>=0}>true -> <{?x>=1}>true\"\n"
      "let r = infer m h\n"
      "qed \"<x:=x+1><{?x>=0}>true -> <x:=x+1><{?x>=1}>true\"\n";
  ProofReport r = check_proof(text);
  EXPECT_TRUE(r.accepted) << r.error->what();
}

TEST(Script, RenderRoundTrip) {
  std::string text = read_fixture("assign_rename.dglp");
  auto steps = parse_script(text);
  EXPECT_TRUE(check_proof(render_script(steps)).accepted);
}
