#pragma once

// Declarative D<: rules as explicit derivation trees: a node-by-node schema
// checker and elaborators from algorithmic traces.

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dsub/bounds_shift.hpp"
#include "dsub/environment.hpp"
#include "dsub/errors.hpp"
#include "dsub/exposure.hpp"
#include "dsub/judgment.hpp"
#include "dsub/step.hpp"
#include "dsub/syntax.hpp"

namespace dsub {

enum class DeclRule {
  // subtyping
  Top,
  Bot,
  Refl,
  Trans,
  SubSel,   // <:-Sel   S <: x.A   from x : {A: S..T}
  SelSub,   // Sel-<:   x.A <: T   from x : {A: S..T}
  AllAll,
  TypTyp,
  // typing
  Var,
  AllI,
  AllE,
  TypI,
  Let,
  Sub,
  Unknown,
};

inline const char* rule_name(DeclRule r) {
  switch (r) {
    case DeclRule::Top: return "Top";
    case DeclRule::Bot: return "Bot";
    case DeclRule::Refl: return "Refl";
    case DeclRule::Trans: return "Trans";
    case DeclRule::SubSel: return "<:-Sel";
    case DeclRule::SelSub: return "Sel-<:";
    case DeclRule::AllAll: return "All-<:-All";
    case DeclRule::TypTyp: return "Typ-<:-Typ";
    case DeclRule::Var: return "Var";
    case DeclRule::AllI: return "All-I";
    case DeclRule::AllE: return "All-E";
    case DeclRule::TypI: return "Typ-I";
    case DeclRule::Let: return "Let";
    case DeclRule::Sub: return "Sub";
    case DeclRule::Unknown: return "?";
  }
  return "?";
}

inline DeclRule decl_rule_from_name(const std::string& s) {
  for (int i = 0; i < static_cast<int>(DeclRule::Unknown); ++i) {
    auto r = static_cast<DeclRule>(i);
    if (s == rule_name(r)) return r;
  }
  return DeclRule::Unknown;
}

struct DerivationTree {
  DeclRule rule = DeclRule::Unknown;
  Judgment conclusion;
  std::vector<DerivationTree> premises;
  std::string raw_rule;  // original spelling when rule is Unknown

  std::string rule_text() const { return rule == DeclRule::Unknown ? raw_rule : rule_name(rule); }
};

inline int tree_depth(const DerivationTree& d) {
  int m = 0;
  for (const auto& p : d.premises) m = std::max(m, tree_depth(p));
  return m + 1;
}

inline std::string render_tree(const DerivationTree& d, int indent = 0) {
  std::string out(static_cast<size_t>(indent) * 2, ' ');
  out += "[" + d.rule_text() + "] " + render(d.conclusion) + "\n";
  for (const auto& p : d.premises) out += render_tree(p, indent + 1);
  return out;
}

// ---------------------------------------------------------------------------
// Checker

struct VerifyResult {
  bool ok = true;
  std::vector<size_t> path;  // premise indices from the root to the failing node
  std::string message;

  std::string where() const {
    std::string s = "root";
    for (size_t i : path) s += "." + std::to_string(i);
    return s;
  }
};

namespace detail {

struct NodeCheck {
  std::string error;
  bool fail(std::string m) {
    if (error.empty()) error = std::move(m);
    return false;
  }
};

inline const SubJ* sub_of(const DerivationTree& d) { return std::get_if<SubJ>(&d.conclusion); }
inline const TypJ* typ_of(const DerivationTree& d) { return std::get_if<TypJ>(&d.conclusion); }

inline bool scoped(const TypeEnv& g, const Judgment& j, NodeCheck& c) {
  VarSet fv;
  if (auto* s = std::get_if<SubJ>(&j)) {
    fv = fv_type(s->lhs);
    auto r = fv_type(s->rhs);
    fv.insert(r.begin(), r.end());
  } else {
    const auto& t = std::get<TypJ>(j);
    fv = fv_term(t.term);
    auto r = fv_type(t.type);
    fv.insert(r.begin(), r.end());
  }
  for (const auto& v : fv)
    if (!g.contains(v)) return c.fail("variable '" + v.name + "' is not bound in the judgment's environment");
  return true;
}

inline bool arity(const DerivationTree& d, size_t n, NodeCheck& c) {
  if (d.premises.size() != n)
    return c.fail(d.rule_text() + " expects " + std::to_string(n) + " premise(s), got " +
                  std::to_string(d.premises.size()));
  return true;
}

inline const SubJ* sub_premise(const DerivationTree& d, size_t i, const TypeEnv& g, NodeCheck& c) {
  const SubJ* p = sub_of(d.premises[i]);
  if (!p) return c.fail("premise " + std::to_string(i) + " must be a subtyping judgment"), nullptr;
  if (!env_equal(p->env, g)) return c.fail("premise " + std::to_string(i) + " has a different environment"), nullptr;
  return p;
}

inline const TypJ* typ_premise(const DerivationTree& d, size_t i, const TypeEnv& g, NodeCheck& c) {
  const TypJ* p = typ_of(d.premises[i]);
  if (!p) return c.fail("premise " + std::to_string(i) + " must be a typing judgment"), nullptr;
  if (!env_equal(p->env, g)) return c.fail("premise " + std::to_string(i) + " has a different environment"), nullptr;
  return p;
}

inline bool same(const Type& a, const Type& b, const char* what, NodeCheck& c) {
  if (!alpha_eq_type(a, b)) return c.fail(std::string(what) + ": " + print_type(a) + " vs " + print_type(b));
  return true;
}

// Premise environment must be `g` plus one binding whose type is `bound`.
inline const Binding* extended(const TypeEnv& g, const TypeEnv& ext, const Type& bound, NodeCheck& c) {
  if (!env_extends_by_one(g, ext)) return c.fail("premise environment must extend the conclusion's by one binding"), nullptr;
  const Binding* b = ext.last();
  if (!alpha_eq_type(b->type, bound))
    return c.fail("premise binds " + b->var.name + " at " + print_type(b->type) + ", expected " + print_type(bound)),
           nullptr;
  return b;
}

// `x : {A: S..T}` typing premise shared by the selection rules.
inline const DeclType* sel_premise(const DerivationTree& d, const TypeEnv& g, const PathType& p, NodeCheck& c) {
  const TypJ* t = typ_premise(d, 0, g, c);
  if (!t) return nullptr;
  if (t->term.kind() != TermKind::Var || as_var(t->term).name != p.var)
    return c.fail("selection premise must type the variable " + p.var.name), nullptr;
  if (!t->type.is_decl() || as_decl(t->type).label != p.label)
    return c.fail("selection premise must assign a declaration of " + p.label.name), nullptr;
  return &as_decl(t->type);
}

inline bool check_sub_node(const DerivationTree& d, const SubJ& j, NodeCheck& c) {
  const TypeEnv& g = j.env;
  switch (d.rule) {
    case DeclRule::Top:
      return arity(d, 0, c) && (j.rhs.is_top() || c.fail("Top needs Top on the right"));
    case DeclRule::Bot:
      return arity(d, 0, c) && (j.lhs.is_bot() || c.fail("Bot needs Bot on the left"));
    case DeclRule::Refl:
      return arity(d, 0, c) && same(j.lhs, j.rhs, "Refl sides differ", c);
    case DeclRule::Trans: {
      if (!arity(d, 2, c)) return false;
      auto* a = sub_premise(d, 0, g, c);
      auto* b = a ? sub_premise(d, 1, g, c) : nullptr;
      return b && same(a->lhs, j.lhs, "Trans left end", c) && same(a->rhs, b->lhs, "Trans midpoint", c) &&
             same(b->rhs, j.rhs, "Trans right end", c);
    }
    case DeclRule::SubSel: {
      if (!arity(d, 1, c)) return false;
      if (!j.rhs.is_path()) return c.fail("<:-Sel needs a path on the right");
      auto* decl = sel_premise(d, g, as_path(j.rhs), c);
      return decl && same(decl->lower, j.lhs, "<:-Sel lower bound", c);
    }
    case DeclRule::SelSub: {
      if (!arity(d, 1, c)) return false;
      if (!j.lhs.is_path()) return c.fail("Sel-<: needs a path on the left");
      auto* decl = sel_premise(d, g, as_path(j.lhs), c);
      return decl && same(decl->upper, j.rhs, "Sel-<: upper bound", c);
    }
    case DeclRule::AllAll: {
      if (!arity(d, 2, c)) return false;
      if (!j.lhs.is_all() || !j.rhs.is_all()) return c.fail("All-<:-All needs function types on both sides");
      const auto& l = as_all(j.lhs);
      const auto& r = as_all(j.rhs);
      auto* p0 = sub_premise(d, 0, g, c);
      if (!p0 || !same(p0->lhs, r.param_type, "All-<:-All parameter premise left", c) ||
          !same(p0->rhs, l.param_type, "All-<:-All parameter premise right", c))
        return false;
      const SubJ* p1 = sub_of(d.premises[1]);
      if (!p1) return c.fail("premise 1 must be a subtyping judgment");
      const Binding* z = extended(g, p1->env, r.param_type, c);
      return z && same(p1->lhs, subst_var_in_type(l.result, l.param, z->var), "All-<:-All left result", c) &&
             same(p1->rhs, subst_var_in_type(r.result, r.param, z->var), "All-<:-All right result", c);
    }
    case DeclRule::TypTyp: {
      if (!arity(d, 2, c)) return false;
      if (!j.lhs.is_decl() || !j.rhs.is_decl()) return c.fail("Typ-<:-Typ needs declarations on both sides");
      const auto& l = as_decl(j.lhs);
      const auto& r = as_decl(j.rhs);
      if (l.label != r.label) return c.fail("Typ-<:-Typ labels differ");
      auto* p0 = sub_premise(d, 0, g, c);
      auto* p1 = p0 ? sub_premise(d, 1, g, c) : nullptr;
      return p1 && same(p0->lhs, r.lower, "Typ-<:-Typ lower premise left", c) &&
             same(p0->rhs, l.lower, "Typ-<:-Typ lower premise right", c) &&
             same(p1->lhs, l.upper, "Typ-<:-Typ upper premise left", c) &&
             same(p1->rhs, r.upper, "Typ-<:-Typ upper premise right", c);
    }
    default:
      return c.fail(d.rule_text() + " does not conclude a subtyping judgment");
  }
}

inline bool check_typ_node(const DerivationTree& d, const TypJ& j, NodeCheck& c) {
  const TypeEnv& g = j.env;
  switch (d.rule) {
    case DeclRule::Var: {
      if (!arity(d, 0, c)) return false;
      if (j.term.kind() != TermKind::Var) return c.fail("Var needs a variable");
      auto t = g.lookup(as_var(j.term).name);
      return t && same(*t, j.type, "Var type", c);
    }
    case DeclRule::TypI: {
      if (!arity(d, 0, c)) return false;
      if (j.term.kind() != TermKind::Tag) return c.fail("Typ-I needs a type tag");
      const auto& tg = as_tag(j.term);
      return same(j.type, Type::decl(tg.label, tg.alias, tg.alias), "Typ-I type", c);
    }
    case DeclRule::AllI: {
      if (!arity(d, 1, c)) return false;
      if (j.term.kind() != TermKind::Lam) return c.fail("All-I needs a lambda");
      if (!j.type.is_all()) return c.fail("All-I concludes a function type");
      const auto& l = as_lam(j.term);
      const auto& a = as_all(j.type);
      if (!same(a.param_type, l.param_type, "All-I parameter type", c)) return false;
      const TypJ* p = typ_of(d.premises[0]);
      if (!p) return c.fail("premise 0 must be a typing judgment");
      const Binding* z = extended(g, p->env, l.param_type, c);
      if (!z) return false;
      if (!alpha_eq_term(p->term, subst_var_in_term(l.body, l.param, z->var)))
        return c.fail("All-I body premise types a different term");
      return same(p->type, subst_var_in_type(a.result, a.param, z->var), "All-I result type", c);
    }
    case DeclRule::AllE: {
      if (!arity(d, 2, c)) return false;
      if (j.term.kind() != TermKind::App) return c.fail("All-E needs an application");
      const auto& ap = as_app(j.term);
      auto* p0 = typ_premise(d, 0, g, c);
      auto* p1 = p0 ? typ_premise(d, 1, g, c) : nullptr;
      if (!p1) return false;
      if (p0->term.kind() != TermKind::Var || as_var(p0->term).name != ap.fun)
        return c.fail("All-E premise 0 must type the function variable");
      if (p1->term.kind() != TermKind::Var || as_var(p1->term).name != ap.arg)
        return c.fail("All-E premise 1 must type the argument variable");
      if (!p0->type.is_all()) return c.fail("All-E function premise must assign a function type");
      const auto& f = as_all(p0->type);
      return same(p1->type, f.param_type, "All-E argument type", c) &&
             same(j.type, subst_var_in_type(f.result, f.param, ap.arg), "All-E result type", c);
    }
    case DeclRule::Let: {
      if (!arity(d, 2, c)) return false;
      if (j.term.kind() != TermKind::Let) return c.fail("Let needs a let term");
      const auto& l = as_let(j.term);
      auto* p0 = typ_premise(d, 0, g, c);
      if (!p0) return false;
      if (!alpha_eq_term(p0->term, l.rhs)) return c.fail("Let premise 0 types a different term");
      const TypJ* p1 = typ_of(d.premises[1]);
      if (!p1) return c.fail("premise 1 must be a typing judgment");
      const Binding* z = extended(g, p1->env, p0->type, c);
      if (!z) return false;
      if (!alpha_eq_term(p1->term, subst_var_in_term(l.body, l.bound, z->var)))
        return c.fail("Let body premise types a different term");
      if (occurs_free(z->var, j.type)) return c.fail("Let result type mentions the bound variable");
      return same(p1->type, j.type, "Let result type", c);
    }
    case DeclRule::Sub: {
      if (!arity(d, 2, c)) return false;
      auto* p0 = typ_premise(d, 0, g, c);
      auto* p1 = p0 ? sub_premise(d, 1, g, c) : nullptr;
      if (!p1) return false;
      if (!alpha_eq_term(p0->term, j.term)) return c.fail("Sub premise 0 types a different term");
      return same(p1->lhs, p0->type, "Sub premise left", c) && same(p1->rhs, j.type, "Sub premise right", c);
    }
    default:
      return c.fail(d.rule_text() + " does not conclude a typing judgment");
  }
}

inline bool verify_node(const DerivationTree& d, std::vector<size_t>& path, VerifyResult& out) {
  NodeCheck c;
  bool ok;
  if (d.rule == DeclRule::Unknown) {
    ok = c.fail("unknown rule '" + d.raw_rule + "'");
  } else {
    const TypeEnv& g = env_of(d.conclusion);
    ok = scoped(g, d.conclusion, c);
    if (ok) {
      if (auto* s = sub_of(d))
        ok = check_sub_node(d, *s, c);
      else
        ok = check_typ_node(d, *typ_of(d), c);
    }
  }
  if (!ok) {
    out.ok = false;
    out.path = path;
    out.message = "[" + d.rule_text() + "] " + render(d.conclusion) + ": " + c.error;
    return false;
  }
  for (size_t i = 0; i < d.premises.size(); ++i) {
    path.push_back(i);
    if (!verify_node(d.premises[i], path, out)) return false;
    path.pop_back();
  }
  return true;
}

}  // namespace detail

/// Checks every node against its rule schema; reports the first failing node
/// in pre-order.
inline VerifyResult decl_verify(const DerivationTree& d) {
  VerifyResult out;
  std::vector<size_t> path;
  detail::verify_node(d, path, out);
  return out;
}

// ---------------------------------------------------------------------------
// Tree builders

namespace build {

inline DerivationTree node(DeclRule r, Judgment j, std::vector<DerivationTree> ps = {}) {
  return DerivationTree{r, std::move(j), std::move(ps), {}};
}

inline DerivationTree top(const TypeEnv& g, const Type& s) { return node(DeclRule::Top, SubJ{g, s, Type::top()}); }
inline DerivationTree bot(const TypeEnv& g, const Type& t) { return node(DeclRule::Bot, SubJ{g, Type::bot(), t}); }
inline DerivationTree refl(const TypeEnv& g, const Type& t) { return node(DeclRule::Refl, SubJ{g, t, t}); }

inline const SubJ& sub(const DerivationTree& d) { return std::get<SubJ>(d.conclusion); }
inline const TypJ& typ(const DerivationTree& d) { return std::get<TypJ>(d.conclusion); }

/// Trans over two subtyping trees; Refl on either side is dropped.
inline DerivationTree trans(DerivationTree a, DerivationTree b) {
  if (a.rule == DeclRule::Refl) return b;
  if (b.rule == DeclRule::Refl) return a;
  SubJ j{sub(a).env, sub(a).lhs, sub(b).rhs};
  return node(DeclRule::Trans, std::move(j), {std::move(a), std::move(b)});
}

inline DerivationTree var(const TypeEnv& g, const VarName& x) {
  auto t = g.lookup(x);
  if (!t) throw Error(ErrorKind::UnboundVariable, "variable '" + x.name + "' is not bound");
  return node(DeclRule::Var, TypJ{g, Term::var(x), *t});
}

/// Retypes `t` along `s`; a Refl step leaves the typing tree unchanged.
inline DerivationTree subsume(DerivationTree t, DerivationTree s) {
  if (s.rule == DeclRule::Refl) return t;
  TypJ j{typ(t).env, typ(t).term, sub(s).rhs};
  return node(DeclRule::Sub, std::move(j), {std::move(t), std::move(s)});
}

/// x : D from Var plus an optional subsumption Γ(x) <: D.
inline DerivationTree var_at(const TypeEnv& g, const VarName& x, std::optional<DerivationTree> s) {
  DerivationTree v = var(g, x);
  if (!s) return v;
  return subsume(std::move(v), std::move(*s));
}

inline DerivationTree sel_sub(const TypeEnv& g, const Type& path, DerivationTree x_typing) {
  const auto& d = as_decl(typ(x_typing).type);
  return node(DeclRule::SelSub, SubJ{g, path, d.upper}, {std::move(x_typing)});
}

inline DerivationTree sub_sel(const TypeEnv& g, const Type& path, DerivationTree x_typing) {
  const auto& d = as_decl(typ(x_typing).type);
  return node(DeclRule::SubSel, SubJ{g, d.lower, path}, {std::move(x_typing)});
}

}  // namespace build

// ---------------------------------------------------------------------------
// Elaboration

namespace detail {

[[noreturn]] inline void gap(const StepNode& n, const std::string& why) {
  throw Error(ErrorKind::ElaborationGap, std::string(rule_name(n.rule)) + " at " + render(n.judgment) + ": " + why);
}

inline const ExposeJ& expose_j(const StepNode& n) {
  if (auto* j = std::get_if<ExposeJ>(&n.judgment)) return *j;
  gap(n, "expected an exposure judgment");
}
inline const ShiftJ& shift_j(const StepNode& n) {
  if (auto* j = std::get_if<ShiftJ>(&n.judgment)) return *j;
  gap(n, "expected a promotion or demotion judgment");
}
inline const SubJ& sub_j(const StepNode& n) {
  if (auto* j = std::get_if<SubJ>(&n.judgment)) return *j;
  gap(n, "expected a subtyping judgment");
}
inline const TypJ& typ_j(const StepNode& n) {
  if (auto* j = std::get_if<TypJ>(&n.judgment)) return *j;
  gap(n, "expected a typing judgment");
}

inline void need(const StepNode& n, size_t k) {
  if (n.premises.size() != k) gap(n, "expected " + std::to_string(k) + " premise(s)");
}

inline DerivationTree elab_expose(const StepNode& n);

/// x.A <: Bot when the type of x exposes to Bot.
inline DerivationTree path_to_bot(const TypeEnv& g, const Type& path, const StepNode& head) {
  const auto& p = as_path(path);
  Type bb = Type::decl(p.label, Type::bot(), Type::bot());
  auto s = build::trans(elab_expose(head), build::bot(g, bb));
  return build::sel_sub(g, path, build::var_at(g, p.var, std::move(s)));
}

/// Top <: x.A when the type of x exposes to Bot.
inline DerivationTree top_to_path(const TypeEnv& g, const Type& path, const StepNode& head) {
  const auto& p = as_path(path);
  Type tt = Type::decl(p.label, Type::top(), Type::top());
  auto s = build::trans(elab_expose(head), build::bot(g, tt));
  return build::sub_sel(g, path, build::var_at(g, p.var, std::move(s)));
}

/// x : {A: S..U} where `head` exposes Γ(x) to that declaration.
inline DerivationTree head_typing(const TypeEnv& g, const VarName& x, const StepNode& head) {
  const auto& hj = expose_j(head);
  if (!hj.to.is_decl()) gap(head, "head does not expose to a declaration");
  if (head.rule == StepRule::XOther) return build::var(g, x);
  return build::var_at(g, x, elab_expose(head));
}

inline DerivationTree elab_expose(const StepNode& n) {
  const auto& j = expose_j(n);
  const TypeEnv& g = j.env;
  switch (n.rule) {
    case StepRule::XOther:
      return build::refl(g, j.from);
    case StepRule::XBot:
      need(n, 1);
      return path_to_bot(g, j.from, n.premises[0]);
    case StepRule::XPath: {
      need(n, 2);
      const auto& p = as_path(j.from);
      auto sel = build::sel_sub(g, j.from, head_typing(g, p.var, n.premises[0]));
      return build::trans(std::move(sel), elab_expose(n.premises[1]));
    }
    default:
      gap(n, "not an exposure rule");
  }
}

inline DerivationTree elab_shift(const StepNode& n) {
  const auto& j = shift_j(n);
  const TypeEnv& g = j.env;
  switch (n.rule) {
    case StepRule::PTop:
    case StepRule::PBot:
    case StepRule::PVar:
    case StepRule::PCap:
    case StepRule::DTop:
    case StepRule::DBot:
    case StepRule::DVar:
    case StepRule::DCap:
      return build::refl(g, j.from);
    case StepRule::PUp: {
      need(n, 1);
      return build::sel_sub(g, j.from, head_typing(g, as_path(j.from).var, n.premises[0]));
    }
    case StepRule::DDown: {
      need(n, 1);
      return build::sub_sel(g, j.from, head_typing(g, as_path(j.from).var, n.premises[0]));
    }
    case StepRule::PUpBot:
      need(n, 1);
      return path_to_bot(g, j.from, n.premises[0]);
    case StepRule::DDownBot:
      need(n, 1);
      return top_to_path(g, j.from, n.premises[0]);
    case StepRule::PDecl:
    case StepRule::DDecl: {
      need(n, 2);
      auto lo = elab_shift(n.premises[0]);
      auto hi = elab_shift(n.premises[1]);
      const Type& lhs = j.promote ? j.from : j.to;
      const Type& rhs = j.promote ? j.to : j.from;
      return build::node(DeclRule::TypTyp, SubJ{g, lhs, rhs}, {std::move(lo), std::move(hi)});
    }
    case StepRule::PLam:
    case StepRule::DLam: {
      need(n, 2);
      auto param = elab_shift(n.premises[0]);
      auto body = elab_shift(n.premises[1]);
      const Type& lhs = j.promote ? j.from : j.to;
      const Type& rhs = j.promote ? j.to : j.from;
      return build::node(DeclRule::AllAll, SubJ{g, lhs, rhs}, {std::move(param), std::move(body)});
    }
    default:
      gap(n, "not a promotion or demotion rule");
  }
}

inline DerivationTree elab_sub(const StepNode& n) {
  const auto& j = sub_j(n);
  const TypeEnv& g = j.env;
  switch (n.rule) {
    case StepRule::SBot:
      return build::bot(g, j.rhs);
    case StepRule::STop:
      return build::top(g, j.lhs);
    case StepRule::SRefl:
      return build::refl(g, j.lhs);
    case StepRule::STypTyp:
      need(n, 2);
      return build::node(DeclRule::TypTyp, j, {elab_sub(n.premises[0]), elab_sub(n.premises[1])});
    case StepRule::SAllAll: {
      need(n, 1);
      const auto& r = as_all(j.rhs);
      return build::node(DeclRule::AllAll, j, {build::refl(g, r.param_type), elab_sub(n.premises[0])});
    }
    case StepRule::SPathLeft: {
      need(n, 2);
      auto sel = build::sel_sub(g, j.lhs, head_typing(g, as_path(j.lhs).var, n.premises[0]));
      return build::trans(std::move(sel), elab_sub(n.premises[1]));
    }
    case StepRule::SPathRight: {
      need(n, 2);
      auto sel = build::sub_sel(g, j.rhs, head_typing(g, as_path(j.rhs).var, n.premises[0]));
      return build::trans(elab_sub(n.premises[1]), std::move(sel));
    }
    case StepRule::SBotLeft:
      need(n, 1);
      return build::trans(path_to_bot(g, j.lhs, n.premises[0]), build::bot(g, j.rhs));
    case StepRule::SBotRight:
      need(n, 1);
      return build::trans(build::top(g, j.lhs), top_to_path(g, j.rhs, n.premises[0]));
    default:
      gap(n, "not a subtyping rule");
  }
}

inline DerivationTree elab_typ(const StepNode& n) {
  const auto& j = typ_j(n);
  const TypeEnv& g = j.env;
  switch (n.rule) {
    case StepRule::TVar:
      return build::node(DeclRule::Var, j);
    case StepRule::TTypI:
      return build::node(DeclRule::TypI, j);
    case StepRule::TAllI:
      need(n, 1);
      return build::node(DeclRule::AllI, j, {elab_typ(n.premises[0])});
    case StepRule::TAllE: {
      need(n, 4);
      auto fun = build::subsume(elab_typ(n.premises[0]), elab_expose(n.premises[1]));
      auto arg = build::subsume(elab_typ(n.premises[2]), elab_sub(n.premises[3]));
      return build::node(DeclRule::AllE, j, {std::move(fun), std::move(arg)});
    }
    case StepRule::TAppBot: {
      need(n, 3);
      auto arg = elab_typ(n.premises[2]);
      const Type& w = typ_j(n.premises[2]).type;
      Type fn = Type::all(pick_binder(var("z"), g.dom()), w, Type::bot());
      auto s = build::trans(elab_expose(n.premises[1]), build::bot(g, fn));
      auto fun = build::subsume(elab_typ(n.premises[0]), std::move(s));
      return build::node(DeclRule::AllE, j, {std::move(fun), std::move(arg)});
    }
    case StepRule::TLet: {
      need(n, 3);
      auto rhs = elab_typ(n.premises[0]);
      auto body = build::subsume(elab_typ(n.premises[1]), elab_shift(n.premises[2]));
      return build::node(DeclRule::Let, j, {std::move(rhs), std::move(body)});
    }
    default:
      gap(n, "not a typing rule");
  }
}

}  // namespace detail

/// Declarative derivation of Γ ⊢ T <: T' for an exposure of T to T'.
inline DerivationTree elaborate_exposure(const TypeEnv& g, const Type& t, const ExposureResult& result) {
  if (!is_exposed(result)) throw Error(ErrorKind::ElaborationGap, "exposure of " + print_type(t) + " is stuck");
  AlgoContext ctx;
  StepNode trace{StepRule::XOther, ExposeJ{g, t, t}, {}};
  ExposureResult again = expose(g, t, ctx, &trace);
  if (!is_exposed(again) || !alpha_eq_type(exposed_type(again), exposed_type(result)))
    throw Error(ErrorKind::ElaborationGap, "exposure result does not match the input");
  return detail::elab_expose(trace);
}

/// Declarative derivation of Γ ⊢ T <: T' (promotion) or Γ ⊢ T' <: T
/// (demotion).
inline DerivationTree elaborate_shift(const TypeEnv& g, const Type& t, const VarName& x, const ShiftResult& result,
                                      ShiftDirection dir) {
  if (!is_shifted(result))
    throw Error(ErrorKind::ElaborationGap, "shift of " + print_type(t) + " is stuck");
  AlgoContext ctx;
  StepNode trace{StepRule::PTop, ShiftJ{g, x, t, t, dir == ShiftDirection::Promote}, {}};
  ShiftResult again = shift(g, t, x, dir, ctx, &trace);
  if (!is_shifted(again) || !alpha_eq_type(shifted_type(again), shifted_type(result)))
    throw Error(ErrorKind::ElaborationGap, "shift result does not match the input");
  return detail::elab_shift(trace);
}

/// Declarative derivation for any algorithmic trace node: typing traces give
/// Γ ⊢ t : T, subtyping and exposure traces give Γ ⊢ S <: U, shift traces
/// give the subtyping in the shift's direction.
inline DerivationTree elaborate_step(const StepTrace& trace) {
  return std::visit(
      [&](const auto& j) -> DerivationTree {
        using J = std::decay_t<decltype(j)>;
        if constexpr (std::is_same_v<J, TypJ>)
          return detail::elab_typ(trace);
        else if constexpr (std::is_same_v<J, SubJ>)
          return detail::elab_sub(trace);
        else if constexpr (std::is_same_v<J, ExposeJ>)
          return detail::elab_expose(trace);
        else
          return detail::elab_shift(trace);
      },
      trace.judgment);
}

}  // namespace dsub
