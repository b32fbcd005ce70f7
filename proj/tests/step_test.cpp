#include <gtest/gtest.h>

#include "support.hpp"

using namespace dsub;
using namespace dsub::testing;

namespace {

bool sub(const TypeEnv& g, const char* s, const char* t) { return step_subtype(g, T(s), T(t)).holds; }

std::string typ(const TypeEnv& g, const Term& t) {
  auto r = step_type(g, t);
  return is_typed(r) ? print_type(std::get<Typed>(r).type) : "untypable: " + std::get<Untypable>(r).reason;
}

const char* B = "{V: Top .. Top}";
const char* C = "{Z: Top .. Top}";

}  // namespace

TEST(Weight, Examples) {
  EXPECT_EQ(weight(TypeEnv::empty(), Type::top()), 1);
  EXPECT_EQ(weight(TypeEnv::empty(), T("{A: Top .. Top}")), 2);
  EXPECT_EQ(weight(E("x: Top;"), T("x.A")), 2);
  EXPECT_EQ(weight(TypeEnv::empty(), T("all(x: Top) x.A")), 3);
  EXPECT_EQ(weight(TypeEnv::empty(), Type::bot()), 1);
  EXPECT_THROW(weight(TypeEnv::empty(), T("x.A")), Error);
}

TEST(Weight, PathsLookThroughTheEnvironment) {
  TypeEnv g = E("x: {A: Bot .. Top}; y: {B: Bot .. x.A};");
  // 1 + weight([x: ...], {B: Bot .. x.A}) = 1 + (1 + max(1, 1 + 2)) = 5
  EXPECT_EQ(weight(g, T("y.B")), 5);
}

TEST(StepSubtype, Examples) {
  TypeEnv gs = gamma_star::env();
  EXPECT_TRUE(sub(TypeEnv::empty(), "Bot", "Top"));
  EXPECT_TRUE(sub(gs, "all(b: {V: Top .. Top}) {V: Top .. Top}", "e.E"));
  EXPECT_FALSE(sub(gs, B, C));
  EXPECT_FALSE(sub(TypeEnv::empty(), "all(x: Top) Top", "all(x: Bot) Top"));
}

TEST(StepSubtype, Rules) {
  TypeEnv g = E("x: {A: Bot .. Top}; y: {B: Bot .. x.A}; z: Bot;");
  EXPECT_TRUE(sub(g, "x.A", "x.A"));
  EXPECT_TRUE(sub(g, "y.B", "Top"));
  EXPECT_TRUE(sub(g, "Bot", "y.B"));
  EXPECT_FALSE(sub(g, "Top", "y.B"));
  EXPECT_TRUE(sub(g, "z.A", "x.A"));
  EXPECT_TRUE(sub(g, "Top", "z.C"));
  EXPECT_TRUE(sub(g, "{A: Top .. Bot}", "{A: Bot .. Top}"));
  EXPECT_FALSE(sub(g, "{A: Bot .. Top}", "{B: Bot .. Top}"));
  EXPECT_TRUE(sub(g, "all(a: x.A) Bot", "all(b: x.A) b.C"));
  EXPECT_FALSE(sub(g, "Top", "Bot"));
}

TEST(StepSubtype, UnscopedIsFalseWithDiagnostic) {
  auto r = step_subtype(TypeEnv::empty(), T("q.A"), Type::top());
  EXPECT_FALSE(r.holds);
  EXPECT_NE(r.diagnostic.find("q"), std::string::npos);
}

TEST(StepSubtype, TraceNames) {
  auto r = step_subtype(gamma_star::env(), T("all(b: {V: Top .. Top}) {V: Top .. Top}"), T("e.E"));
  ASSERT_TRUE(r.holds && r.trace);
  EXPECT_EQ(r.trace->rule, StepRule::SPathRight);
  EXPECT_EQ(std::string(rule_name(r.trace->rule)), "S-Sel-<:");
}

TEST(StepType, Examples) {
  EXPECT_EQ(typ(TypeEnv::empty(), t_("lam(x: Top) x")), "all(x: Top) Top");
  EXPECT_EQ(typ(TypeEnv::empty(), t_("{A = Top}")), "{A: Top .. Top}");
  EXPECT_EQ(typ(TypeEnv::empty(), t_("let x = {A = Top} in lam(y: x.A) y")), "all(y: Top) Top");
  EXPECT_EQ(typ(gamma_star::env(), gamma_star::w()), B);
}

TEST(StepType, Application) {
  EXPECT_EQ(typ(TypeEnv::empty(), t_("lam(f: Bot) lam(a: Top) f a")), "all(f: Bot) all(a: Top) Bot");
  // T-All-E substitutes the argument into a dependent result.
  TypeEnv g = E("f: all(a: {A: Bot .. Top}) a.A; t: {A: Bot .. Top};");
  EXPECT_EQ(typ(g, t_("f t")), "t.A");
  EXPECT_EQ(typ(g, t_("t t")).rfind("untypable: function position has non-function type", 0), 0u);
}

TEST(StepType, UntypableCarriesLocation) {
  Term t = t_("let f = lam(a: {A: Top .. Top}) a in let t = {B = Top} in f t");
  auto r = step_type(TypeEnv::empty(), t);
  ASSERT_FALSE(is_typed(r));
  const auto& u = std::get<Untypable>(r);
  EXPECT_EQ(u.location, "let.body/let.body");
  EXPECT_EQ(u.reason.rfind("argument type", 0), 0u);

  auto stuck = step_type(E("x: Top;"), t_("lam(y: x.A) y y"));
  ASSERT_FALSE(is_typed(stuck));
  EXPECT_EQ(std::get<Untypable>(stuck).reason.rfind("function position not exposable", 0), 0u);
  EXPECT_EQ(std::get<Untypable>(stuck).location, "lam.body");
}

TEST(StepType, LetPromotionStuck) {
  auto r = step_type(E("t: Top;"), t_("let u = t in lam(y: u.A) y"));
  ASSERT_FALSE(is_typed(r));
  EXPECT_EQ(std::get<Untypable>(r).reason.rfind("cannot promote let body type", 0), 0u);
}

TEST(StepType, BinderClashesAreRenamed) {
  // The lambda's binder is already bound outside.
  EXPECT_EQ(typ(E("x: {A: Bot .. Top};"), t_("lam(x: x.A) x")), "all(x1: x.A) x.A");
}

TEST(StepProperties, DeterminismAndReflexivity) {
  Universe u(3);
  std::mt19937 rng(1);
  for (const auto& g : u.envs) {
    AlgoContext ctx;
    for (const auto& t : sample(u.en.types_up_to(scope_of(g), 5), 40, rng))
      ASSERT_TRUE(step_subtype(g, t, t, ctx, false).holds) << print_env(g) << " |- " << print_type(t);
    ASSERT_EQ(ctx.stats.measure_violations, 0) << print_env(g);
  }
  for (const auto& inst : typing_instances(u, 1)) {
    auto a = step_type(inst.env, inst.term), b = step_type(inst.env, inst.term);
    ASSERT_EQ(is_typed(a), is_typed(b));
    if (is_typed(a)) ASSERT_TRUE(alpha_eq_type(std::get<Typed>(a).type, std::get<Typed>(b).type));
  }
}

TEST(StepProperties, DepthLimitIsDistinct) {
  AlgoContext ctx;
  ctx.config.max_depth = 2;
  TypeEnv g = E("x: {A: Bot .. Top}; y: {B: Bot .. x.A};");
  try {
    step_subtype(g, T("y.B"), T("Top"), ctx);
    step_subtype(g, T("{C: y.B .. Top}"), T("{C: Top .. Top}"), ctx);
    FAIL() << "expected InternalLimit";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InternalLimit);
  }
}
