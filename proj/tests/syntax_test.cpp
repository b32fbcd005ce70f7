#include <gtest/gtest.h>

#include "support.hpp"

using namespace dsub;
using namespace dsub::testing;

namespace {

VarSet vs(std::initializer_list<const char*> names) {
  VarSet s;
  for (auto n : names) s.insert(var(n));
  return s;
}

const Type xA = Type::path(var("x"), label("A"));

}  // namespace

TEST(FreeVars, Types) {
  EXPECT_EQ(fv_type(Type::top()), vs({}));
  EXPECT_EQ(fv_type(xA), vs({"x"}));
  // The parameter type sits outside the binder.
  EXPECT_EQ(fv_type(Type::all(var("x"), xA, Type::path(var("x"), label("B")))), vs({"x"}));
  EXPECT_EQ(fv_type(T("all(x: Top) x.B")), vs({}));
}

TEST(FreeVars, Terms) {
  EXPECT_EQ(fv_term(Term::var(var("x"))), vs({"x"}));
  EXPECT_EQ(fv_term(Term::lam(var("x"), Type::top(), Term::var(var("x")))), vs({}));
  EXPECT_EQ(fv_term(Term::let(var("x"), Term::var(var("y")), Term::app(var("x"), var("z")))), vs({"y", "z"}));
  EXPECT_EQ(fv_term(t_("{A = y.B}")), vs({"y"}));
}

TEST(Subst, Examples) {
  EXPECT_TRUE(alpha_eq_type(subst_var_in_type(Type::path(var("z"), label("A")), var("z"), var("y")),
                            Type::path(var("y"), label("A"))));
  EXPECT_TRUE(alpha_eq_type(subst_var_in_type(Type::top(), var("z"), var("y")), Type::top()));

  Type captured = Type::all(var("y"), Type::top(), Type::path(var("z"), label("A")));
  Type out = subst_var_in_type(captured, var("z"), var("y"));
  ASSERT_TRUE(out.is_all());
  EXPECT_NE(as_all(out).param, var("y"));
  EXPECT_TRUE(alpha_eq_type(as_all(out).result, Type::path(var("y"), label("A"))));
  EXPECT_EQ(print_type(out), "all(y1: Top) y.A");
}

TEST(Subst, TermBindersAreRespected) {
  Term t = t_("lam(y: z.A) let w = z y in w");
  Term out = subst_var_in_term(t, var("z"), var("y"));
  EXPECT_EQ(fv_term(out), vs({"y"}));
  EXPECT_TRUE(alpha_eq_term(out, t_("lam(q: y.A) let w = y q in w")));
  // Bound occurrences stay put.
  EXPECT_TRUE(alpha_eq_term(subst_var_in_term(t_("lam(z: Top) z"), var("z"), var("y")), t_("lam(z: Top) z")));
}

TEST(Alpha, Examples) {
  EXPECT_TRUE(alpha_eq_type(T("all(x: Top) x.A"), T("all(y: Top) y.A")));
  EXPECT_FALSE(alpha_eq_type(Type::top(), Type::bot()));
  EXPECT_TRUE(alpha_eq_type(T("all(x: Top) z.A"), T("all(y: Top) z.A")));
  EXPECT_FALSE(alpha_eq_type(T("all(x: Top) x.A"), T("all(y: Top) x.A")));
  EXPECT_FALSE(alpha_eq_type(T("{A: Top .. Top}"), T("{B: Top .. Top}")));
  EXPECT_TRUE(alpha_eq_term(t_("let a = {A = Top} in a"), t_("let b = {A = Top} in b")));
  EXPECT_FALSE(alpha_eq_term(t_("lam(a: Top) a"), t_("lam(a: Top) b")));
}

TEST(Parse, Examples) {
  EXPECT_TRUE(parse_type("Top").is_top());
  Type d = parse_type("{A: Bot .. Top}");
  ASSERT_TRUE(d.is_decl());
  EXPECT_EQ(as_decl(d).label, label("A"));
  EXPECT_TRUE(as_decl(d).lower.is_bot());
  EXPECT_TRUE(as_decl(d).upper.is_top());
  EXPECT_EQ(print_type(Type::all(var("x"), Type::top(), xA)), "all(x: Top) x.A");
}

TEST(Parse, GrammarCorners) {
  // `all` extends to the right; application binds tighter than lam bodies.
  Type t = T("all(x: Top) all(y: x.A) y.B");
  EXPECT_TRUE(as_all(t).result.is_all());
  Term lam = t_("lam(f: Top) f f");
  EXPECT_EQ(as_lam(lam).body.kind(), TermKind::App);
  Term let = t_("let a = {A = Top} // a tag\n in a");
  EXPECT_EQ(let.kind(), TermKind::Let);
  EXPECT_EQ(print_term(t_("let a = lam(x: Top) x in a a")), "let a = lam(x: Top) x in a a");
}

TEST(Parse, ErrorsCarryPosition) {
  try {
    parse_type("{A: Top ..\n  Bogus}");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.column(), 3);
  }
  EXPECT_THROW(parse_type("all(X: Top) Top"), ParseError);
  EXPECT_THROW(parse_type("x.a"), ParseError);
  EXPECT_THROW(parse_term("x y z"), ParseError);
  EXPECT_THROW(parse_term("lam(x: Top)"), ParseError);
  EXPECT_THROW(parse_type("Top Top"), ParseError);
}

TEST(FreshNames, LeastCounter) {
  EXPECT_EQ(fresh_name(var("x"), vs({"x", "x1", "x3"})), var("x2"));
  EXPECT_EQ(pick_binder(var("x"), vs({"y"})), var("x"));
}

TEST(SyntaxProperties, SubstitutionFreeVarsAndIdentity) {
  Enumerator en = Enumerator::standard();
  auto ts = en.types_up_to({var("x"), var("y")}, 5);
  ASSERT_GT(ts.size(), 10000u);
  for (const auto& t : ts) {
    Type s = subst_var_in_type(t, var("x"), var("y"));
    VarSet bound = fv_type(t);
    bound.erase(var("x"));
    bound.insert(var("y"));
    for (const auto& v : fv_type(s)) ASSERT_TRUE(bound.contains(v)) << print_type(t);
    ASSERT_TRUE(alpha_eq_type(subst_var_in_type(t, var("x"), var("x")), t));
  }
}

TEST(SyntaxProperties, RoundTrip) {
  Enumerator en = Enumerator::standard();
  for (const auto& t : en.types_up_to({var("x")}, 5)) {
    std::string text = print_type(t);
    ASSERT_TRUE(alpha_eq_type(parse_type(text), t)) << text;
    ASSERT_EQ(print_type(parse_type(text)), text);
  }
  for (const auto& t : en.terms_up_to({var("x")}, 5)) {
    std::string text = print_term(t);
    ASSERT_TRUE(alpha_eq_term(parse_term(text), t)) << text;
  }
}

TEST(SyntaxProperties, AlphaIsAnEquivalence) {
  Enumerator en = Enumerator::standard();
  auto ts = en.types_up_to({var("x")}, 3);
  for (const auto& a : ts) {
    ASSERT_TRUE(alpha_eq_type(a, a));
    Type renamed = a.is_all() ? Type::all(var("q"), as_all(a).param_type,
                                          subst_var_in_type(as_all(a).result, as_all(a).param, var("q")))
                              : a;
    ASSERT_TRUE(alpha_eq_type(a, renamed));
    ASSERT_TRUE(alpha_eq_type(renamed, a));
    for (const auto& b : ts)
      if (alpha_eq_type(a, b)) ASSERT_TRUE(alpha_eq_type(renamed, b));
  }
}
