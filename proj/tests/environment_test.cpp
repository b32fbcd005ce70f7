#include <gtest/gtest.h>

#include "support.hpp"

using namespace dsub;
using namespace dsub::testing;

TEST(Env, Empty) {
  TypeEnv g = TypeEnv::empty();
  EXPECT_EQ(g.size(), 0u);
  EXPECT_TRUE(g.dom().empty());
  EXPECT_FALSE(g.lookup(var("x")).has_value());
}

TEST(Env, Extend) {
  TypeEnv g = TypeEnv::empty().extend(var("x"), Type::top());
  EXPECT_EQ(print_env(g), "x: Top");
  TypeEnv h = g.extend(var("y"), T("x.A"));
  ASSERT_EQ(h.size(), 2u);
  EXPECT_TRUE(alpha_eq_type(*h.lookup(var("y")), T("x.A")));
  // The original is untouched.
  EXPECT_EQ(g.size(), 1u);
}

TEST(Env, ExtendErrors) {
  auto kind_of = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Io;
  };
  TypeEnv x = TypeEnv::empty().extend(var("x"), Type::top());
  EXPECT_EQ(kind_of([&] { TypeEnv::empty().extend(var("x"), T("x.A")); }), ErrorKind::SelfReference);
  EXPECT_EQ(kind_of([&] { x.extend(var("x"), Type::bot()); }), ErrorKind::DuplicateBinding);
  // Closed scoping: forward references are rejected too.
  EXPECT_EQ(kind_of([&] { x.extend(var("y"), T("z.A")); }), ErrorKind::UnboundVariable);
}

TEST(Env, Lookup) {
  TypeEnv g = E("x: Top; y: Bot;");
  EXPECT_TRUE(g.lookup(var("x"))->is_top());
  EXPECT_TRUE(g.lookup(var("y"))->is_bot());
  EXPECT_FALSE(E("x: Top;").lookup(var("y")).has_value());
}

TEST(Env, SplitAt) {
  TypeEnv g = E("x: Top; y: Bot;");
  auto s = g.split_at(var("y"));
  ASSERT_TRUE(s);
  EXPECT_EQ(print_env(s->prefix), "x: Top");
  EXPECT_TRUE(s->type.is_bot());
  EXPECT_TRUE(s->suffix.empty());

  auto t = g.split_at(var("x"));
  ASSERT_TRUE(t);
  EXPECT_EQ(t->prefix.size(), 0u);
  EXPECT_TRUE(t->type.is_top());
  ASSERT_EQ(t->suffix.size(), 1u);
  EXPECT_EQ(t->suffix[0].var, var("y"));

  EXPECT_FALSE(TypeEnv::empty().split_at(var("x")));
}

TEST(Env, SplitOfExtendIsIdentity) {
  Universe u(1);
  for (const auto& g : u.envs) {
    TypeEnv h = g.extend(var("z"), Type::top());
    auto s = h.split_at(var("z"));
    ASSERT_TRUE(s);
    ASSERT_TRUE(env_equal(s->prefix, g));
    ASSERT_TRUE(s->suffix.empty());
  }
}

TEST(Env, FileFormat) {
  TypeEnv g = parse_env("// comment\nx : {A: Bot .. Top};\ny : {B: Bot .. x.A};\n");
  EXPECT_EQ(g.size(), 2u);
  EXPECT_TRUE(env_equal(parse_env(print_env_file(g)), g));
  EXPECT_THROW(parse_env("x : Top"), ParseError);
  EXPECT_THROW(parse_env("x : Top; x : Bot;"), Error);
}

TEST(Env, EnumeratedEnvironmentsAreWellScoped) {
  Universe u(3);
  EXPECT_EQ(u.envs.size(), count_envs(2, 3));
  for (const auto& g : u.envs) {
    VarSet seen;
    for (const auto& b : g.bindings()) {
      for (const auto& v : fv_type(b.type)) ASSERT_TRUE(seen.contains(v));
      ASSERT_FALSE(seen.contains(b.var));
      seen.insert(b.var);
    }
  }
}
