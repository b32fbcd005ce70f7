#include <gtest/gtest.h>

#include "support.hpp"

using namespace dsub;
using namespace dsub::testing;

namespace {

std::string ex(const char* env, const char* type) { return describe(expose(E(env), T(type))); }

}  // namespace

TEST(Expose, Examples) {
  EXPECT_EQ(ex("x: {A: Bot .. Top};", "x.A"), "Top");
  EXPECT_EQ(ex("x: {A: Bot .. Top};", "Top"), "Top");
  EXPECT_EQ(ex("x: Bot;", "x.A"), "Bot");
  EXPECT_EQ(ex("x: {A: Bot .. Top}; y: {B: Bot .. x.A};", "y.B"), "Top");
}

TEST(Expose, NonPathsAreUnchanged) {
  EXPECT_EQ(ex("", "{A: Top .. Bot}"), "{A: Top .. Bot}");
  EXPECT_EQ(ex("x: Top;", "all(y: x.A) y.A"), "all(y: x.A) y.A");
}

TEST(Expose, Stuck) {
  auto r = expose(E("x: Top;"), T("x.A"));
  ASSERT_FALSE(is_exposed(r));
  EXPECT_TRUE(std::get<Stuck>(r).blocker.is_top());
  EXPECT_EQ(ex("x: {B: Bot .. Top};", "x.A"), "stuck: {B: Bot .. Top}");
  EXPECT_EQ(ex("x: all(y: Top) Top;", "x.A"), "stuck: all(y: Top) Top");
  // A stuck upper bound propagates.
  EXPECT_EQ(ex("x: Top; y: {A: Bot .. x.A};", "y.A"), "stuck: Top");
}

TEST(Expose, UnboundHead) {
  try {
    expose(TypeEnv::empty(), T("x.A"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnboundVariable);
  }
}

TEST(Expose, TraceRules) {
  AlgoContext ctx;
  TypeEnv g = E("x: {A: Bot .. Top}; y: {B: Bot .. x.A};");
  StepNode trace{StepRule::XOther, ExposeJ{g, Type::top(), Type::top()}, {}};
  auto r = expose(g, T("y.B"), ctx, &trace);
  ASSERT_TRUE(is_exposed(r));
  EXPECT_EQ(trace.rule, StepRule::XPath);
  ASSERT_EQ(trace.premises.size(), 2u);
  EXPECT_EQ(trace.premises[1].rule, StepRule::XPath);
}

TEST(ExposeProperties, NeverPathAndMonotoneWeight) {
  Universe u(3);
  long exposed = 0;
  for (const auto& g : u.envs) {
    AlgoContext ctx;
    for (const auto& t : u.en.types_up_to(scope_of(g), 3)) {
      auto r = expose(g, t, ctx);
      if (!is_exposed(r)) continue;
      ++exposed;
      ASSERT_FALSE(exposed_type(r).is_path());
      ASSERT_LE(weight(g, exposed_type(r)), weight(g, t)) << print_env(g) << " |- " << print_type(t);
    }
    ASSERT_EQ(ctx.stats.measure_violations, 0);
  }
  EXPECT_GT(exposed, 100000);
}

TEST(ExposeProperties, ElaborationVerifies) {
  Universe u(3);
  std::mt19937 rng(3);
  for (const auto& g : u.envs) {
    for (const auto& t : sample(u.en.types_up_to(scope_of(g), 3), 20, rng)) {
      auto r = expose(g, t);
      if (!is_exposed(r)) continue;
      auto tree = elaborate_exposure(g, t, r);
      auto v = decl_verify(tree);
      ASSERT_TRUE(v.ok) << print_env(g) << " |- " << print_type(t) << ": " << v.where() << " " << v.message;
    }
  }
}
