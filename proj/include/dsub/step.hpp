#pragma once

// Step Typing and Step Subtyping: syntax-directed, transitivity-free decision
// procedures, plus the weight measure that bounds subtyping recursion.

#include <algorithm>
#include <climits>
#include <optional>
#include <string>
#include <variant>

#include "dsub/bounds_shift.hpp"
#include "dsub/environment.hpp"
#include "dsub/errors.hpp"
#include "dsub/exposure.hpp"
#include "dsub/judgment.hpp"
#include "dsub/syntax.hpp"

namespace dsub {

// ---------------------------------------------------------------------------
// Weight

/// weight Γ ⊤ = weight Γ ⊥ = 1
/// weight Γ {A: S..T} = 1 + max(weight Γ S, weight Γ T)
/// weight Γ x.A = 1 + weight Γ1 T      where Γ = Γ1, x: T, Γ2
/// weight Γ ∀(x: S)T = 1 + weight (Γ, x: S) T
inline long weight(const TypeEnv& g, const Type& t) {
  switch (t.kind()) {
    case TypeKind::Top:
    case TypeKind::Bot:
      return 1;
    case TypeKind::Decl:
      return 1 + std::max(weight(g, as_decl(t).lower), weight(g, as_decl(t).upper));
    case TypeKind::Path: {
      const auto& p = as_path(t);
      auto split = g.split_at(p.var);
      if (!split) throw Error(ErrorKind::UnboundVariable, "variable '" + p.var.name + "' is not bound");
      return 1 + weight(split->prefix, split->type);
    }
    case TypeKind::All: {
      const auto& a = as_all(t);
      VarSet avoid = fv_type(a.result);
      avoid.erase(a.param);
      VarName z = binder_for(g, a.param, avoid);
      return 1 + weight(g.extend(z, a.param_type), subst_var_in_type(a.result, a.param, z));
    }
  }
  return 1;
}

// ---------------------------------------------------------------------------
// Step Subtyping

struct SubtypeOutcome {
  bool holds = false;
  std::optional<StepNode> trace;
  std::string diagnostic;
};

namespace detail {

inline bool scoped_in(const TypeEnv& g, const Type& t, std::string& why) {
  for (const auto& v : fv_type(t)) {
    if (!g.contains(v)) {
      why = "unbound variable '" + v.name + "' in " + print_type(t);
      return false;
    }
  }
  return true;
}

inline bool sub_impl(const TypeEnv& g, const Type& s, const Type& t, AlgoContext& ctx, StepNode* trace,
                     long parent_measure) {
  AlgoContext::Frame frame(ctx);
  long measure = LONG_MAX;
  if (ctx.config.check_measure) {
    measure = weight(g, s) + weight(g, t);
    if (measure >= parent_measure) {
      ++ctx.stats.measure_violations;
      ctx.stats.note("weight did not decrease at " + render(SubJ{g, s, t}));
    }
  }
  auto done = [&](StepRule r, std::vector<StepNode> ps = {}) {
    if (trace) *trace = StepNode{r, SubJ{g, s, t}, std::move(ps)};
    return true;
  };
  auto blank = [&] { return StepNode{StepRule::SBot, SubJ{g, s, t}, {}}; };

  if (s.is_bot()) return done(StepRule::SBot);
  if (t.is_top()) return done(StepRule::STop);
  if (s.is_path() && t.is_path() && as_path(s).var == as_path(t).var && as_path(s).label == as_path(t).label)
    return done(StepRule::SRefl);

  if (s.is_decl() && t.is_decl()) {
    const auto& a = as_decl(s);
    const auto& b = as_decl(t);
    if (a.label != b.label) return false;
    StepNode lo = blank(), hi = blank();
    if (sub_impl(g, b.lower, a.lower, ctx, trace ? &lo : nullptr, measure) &&
        sub_impl(g, a.upper, b.upper, ctx, trace ? &hi : nullptr, measure))
      return done(StepRule::STypTyp, {std::move(lo), std::move(hi)});
    return false;
  }

  if (s.is_all() && t.is_all()) {
    const auto& a = as_all(s);
    const auto& b = as_all(t);
    if (!alpha_eq_type(a.param_type, b.param_type)) return false;
    VarSet avoid = fv_type(a.result);
    avoid.erase(a.param);
    VarSet fb = fv_type(b.result);
    fb.erase(b.param);
    avoid.insert(fb.begin(), fb.end());
    VarName z = binder_for(g, b.param, avoid);
    TypeEnv inner = g.extend(z, a.param_type);
    StepNode body = blank();
    if (sub_impl(inner, subst_var_in_type(a.result, a.param, z), subst_var_in_type(b.result, b.param, z), ctx,
                 trace ? &body : nullptr, measure))
      return done(StepRule::SAllAll, {std::move(body)});
    return false;
  }

  if (s.is_path()) {
    const auto& p = as_path(s);
    StepNode xt = blank();
    ExposureResult hr = expose_head(g, p.var, ctx, trace ? &xt : nullptr);
    if (is_exposed(hr)) {
      const Type& ht = exposed_type(hr);
      if (ht.is_bot()) return done(StepRule::SBotLeft, {std::move(xt)});
      if (ht.is_decl() && as_decl(ht).label == p.label) {
        StepNode rest = blank();
        if (sub_impl(g, as_decl(ht).upper, t, ctx, trace ? &rest : nullptr, measure))
          return done(StepRule::SPathLeft, {std::move(xt), std::move(rest)});
      }
    }
  }

  if (t.is_path()) {
    const auto& p = as_path(t);
    StepNode xt = blank();
    ExposureResult hr = expose_head(g, p.var, ctx, trace ? &xt : nullptr);
    if (is_exposed(hr)) {
      const Type& ht = exposed_type(hr);
      if (ht.is_bot()) return done(StepRule::SBotRight, {std::move(xt)});
      if (ht.is_decl() && as_decl(ht).label == p.label) {
        StepNode rest = blank();
        if (sub_impl(g, s, as_decl(ht).lower, ctx, trace ? &rest : nullptr, measure))
          return done(StepRule::SPathRight, {std::move(xt), std::move(rest)});
      }
    }
  }
  return false;
}

}  // namespace detail

inline SubtypeOutcome step_subtype(const TypeEnv& g, const Type& s, const Type& t, AlgoContext& ctx,
                                   bool want_trace = true) {
  SubtypeOutcome out;
  if (!detail::scoped_in(g, s, out.diagnostic) || !detail::scoped_in(g, t, out.diagnostic)) return out;
  StepNode node{StepRule::SBot, SubJ{g, s, t}, {}};
  out.holds = detail::sub_impl(g, s, t, ctx, want_trace ? &node : nullptr, LONG_MAX);
  if (out.holds && want_trace) out.trace = std::move(node);
  if (!out.holds) out.diagnostic = "no step subtyping rule derives " + render(SubJ{g, s, t});
  return out;
}

inline SubtypeOutcome step_subtype(const TypeEnv& g, const Type& s, const Type& t) {
  AlgoContext ctx;
  return step_subtype(g, s, t, ctx);
}

// ---------------------------------------------------------------------------
// Step Typing

struct Typed {
  Type type;
  StepNode trace;
};

struct Untypable {
  std::string reason;
  std::string location;
};

using StepTypingOutcome = std::variant<Typed, Untypable>;

inline bool is_typed(const StepTypingOutcome& o) { return std::holds_alternative<Typed>(o); }

namespace detail {

inline std::string child_loc(const std::string& loc, const char* step) {
  return loc.empty() ? std::string(step) : loc + "/" + step;
}

inline StepTypingOutcome untypable(std::string reason, const std::string& loc) {
  return Untypable{std::move(reason), loc.empty() ? "<root>" : loc};
}

inline StepTypingOutcome type_var(const TypeEnv& g, const VarName& x, const std::string& loc) {
  auto t = g.lookup(x);
  if (!t) return untypable("unbound variable '" + x.name + "'", loc);
  return Typed{*t, StepNode{StepRule::TVar, TypJ{g, Term::var(x), *t}, {}}};
}

inline StepTypingOutcome type_impl(const TypeEnv& g, const Term& term, AlgoContext& ctx, const std::string& loc) {
  AlgoContext::Frame frame(ctx);
  std::string why;
  switch (term.kind()) {
    case TermKind::Var:
      return type_var(g, as_var(term).name, loc);

    case TermKind::Tag: {
      const auto& tg = as_tag(term);
      if (!scoped_in(g, tg.alias, why)) return untypable(why, loc);
      Type t = Type::decl(tg.label, tg.alias, tg.alias);
      return Typed{t, StepNode{StepRule::TTypI, TypJ{g, term, t}, {}}};
    }

    case TermKind::Lam: {
      const auto& l = as_lam(term);
      if (!scoped_in(g, l.param_type, why)) return untypable(why, loc);
      VarSet avoid = fv_term(l.body);
      avoid.erase(l.param);
      VarName z = binder_for(g, l.param, avoid);
      Term body = subst_var_in_term(l.body, l.param, z);
      auto r = type_impl(g.extend(z, l.param_type), body, ctx, child_loc(loc, "lam.body"));
      if (!is_typed(r)) return r;
      auto& bt = std::get<Typed>(r);
      Type t = Type::all(z, l.param_type, bt.type);
      return Typed{t, StepNode{StepRule::TAllI, TypJ{g, term, t}, {std::move(bt.trace)}}};
    }

    case TermKind::App: {
      const auto& a = as_app(term);
      auto fr = type_var(g, a.fun, loc);
      if (!is_typed(fr)) return fr;
      auto& ft = std::get<Typed>(fr);
      auto ar = type_var(g, a.arg, loc);
      if (!is_typed(ar)) return ar;
      auto& at = std::get<Typed>(ar);

      StepNode xt{StepRule::XOther, ExposeJ{g, ft.type, ft.type}, {}};
      ExposureResult er = expose(g, ft.type, ctx, &xt);
      if (!is_exposed(er)) return untypable("function position not exposable: " + describe(er), loc);
      const Type& fn = exposed_type(er);
      if (fn.is_bot()) {
        return Typed{Type::bot(), StepNode{StepRule::TAppBot, TypJ{g, term, Type::bot()},
                                           {std::move(ft.trace), std::move(xt), std::move(at.trace)}}};
      }
      if (!fn.is_all())
        return untypable("function position has non-function type " + print_type(fn), loc);
      const auto& f = as_all(fn);
      SubtypeOutcome so = step_subtype(g, at.type, f.param_type, ctx);
      if (!so.holds)
        return untypable("argument type " + print_type(at.type) + " is not a step subtype of parameter type " +
                             print_type(f.param_type),
                         loc);
      Type t = subst_var_in_type(f.result, f.param, a.arg);
      return Typed{t, StepNode{StepRule::TAllE, TypJ{g, term, t},
                               {std::move(ft.trace), std::move(xt), std::move(at.trace), std::move(*so.trace)}}};
    }

    case TermKind::Let: {
      const auto& l = as_let(term);
      auto rr = type_impl(g, l.rhs, ctx, child_loc(loc, "let.rhs"));
      if (!is_typed(rr)) return rr;
      auto& rt = std::get<Typed>(rr);
      VarSet avoid = fv_term(l.body);
      avoid.erase(l.bound);
      VarName z = binder_for(g, l.bound, avoid);
      TypeEnv inner = g.extend(z, rt.type);
      Term body = subst_var_in_term(l.body, l.bound, z);
      auto br = type_impl(inner, body, ctx, child_loc(loc, "let.body"));
      if (!is_typed(br)) return br;
      auto& bt = std::get<Typed>(br);
      StepNode pt{StepRule::PTop, ShiftJ{inner, z, bt.type, bt.type, true}, {}};
      ShiftResult pr = promote(inner, bt.type, z, ctx, &pt);
      if (!is_shifted(pr)) return untypable("cannot promote let body type: " + std::get<ShiftStuck>(pr).reason, loc);
      Type t = shifted_type(pr);
      return Typed{t, StepNode{StepRule::TLet, TypJ{g, term, t},
                               {std::move(rt.trace), std::move(bt.trace), std::move(pt)}}};
    }
  }
  return untypable("unreachable", loc);
}

}  // namespace detail

inline StepTypingOutcome step_type(const TypeEnv& g, const Term& t, AlgoContext& ctx) {
  for (const auto& v : fv_term(t))
    if (!g.contains(v)) return detail::untypable("unbound variable '" + v.name + "'", "");
  return detail::type_impl(g, t, ctx, "");
}

inline StepTypingOutcome step_type(const TypeEnv& g, const Term& t) {
  AlgoContext ctx;
  return step_type(g, t, ctx);
}

}  // namespace dsub
