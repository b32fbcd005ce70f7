#pragma once

// Abstract syntax of D<: types and terms (ANF), free variables,
// capture-avoiding variable renaming and alpha-equivalence.

#include <cassert>
#include <compare>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace dsub {

/// Term variable. Lowercase-initial identifier.
struct VarName {
  std::string name;

  auto operator<=>(const VarName&) const = default;
  bool operator==(const VarName&) const = default;
};

/// Type member label. Uppercase-initial identifier.
struct TypeLabel {
  std::string name;

  auto operator<=>(const TypeLabel&) const = default;
  bool operator==(const TypeLabel&) const = default;
};

using VarSet = std::set<VarName>;

inline VarName var(std::string s) { return VarName{std::move(s)}; }
inline TypeLabel label(std::string s) { return TypeLabel{std::move(s)}; }

// ---------------------------------------------------------------------------
// Types

struct TypeNode;

enum class TypeKind { Top, Bot, Decl, Path, All };

class Type {
 public:
  static Type top();
  static Type bot();
  static Type decl(TypeLabel l, Type lower, Type upper);
  static Type path(VarName x, TypeLabel l);
  static Type all(VarName x, Type param, Type result);

  TypeKind kind() const;
  bool is_top() const { return kind() == TypeKind::Top; }
  bool is_bot() const { return kind() == TypeKind::Bot; }
  bool is_decl() const { return kind() == TypeKind::Decl; }
  bool is_path() const { return kind() == TypeKind::Path; }
  bool is_all() const { return kind() == TypeKind::All; }

  const TypeNode& node() const { return *node_; }
  const void* identity() const { return node_.get(); }

 private:
  explicit Type(std::shared_ptr<const TypeNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const TypeNode> node_;
};

struct TopType {};
struct BotType {};
struct DeclType {
  TypeLabel label;
  Type lower;
  Type upper;
};
struct PathType {
  VarName var;
  TypeLabel label;
};
struct AllType {
  VarName param;
  Type param_type;
  Type result;
};

struct TypeNode {
  std::variant<TopType, BotType, DeclType, PathType, AllType> v;
};

inline Type Type::top() {
  static const Type t{std::make_shared<const TypeNode>(TypeNode{TopType{}})};
  return t;
}
inline Type Type::bot() {
  static const Type t{std::make_shared<const TypeNode>(TypeNode{BotType{}})};
  return t;
}
inline Type Type::decl(TypeLabel l, Type lower, Type upper) {
  return Type{std::make_shared<const TypeNode>(
      TypeNode{DeclType{std::move(l), std::move(lower), std::move(upper)}})};
}
inline Type Type::path(VarName x, TypeLabel l) {
  return Type{std::make_shared<const TypeNode>(TypeNode{PathType{std::move(x), std::move(l)}})};
}
inline Type Type::all(VarName x, Type param, Type result) {
  return Type{std::make_shared<const TypeNode>(
      TypeNode{AllType{std::move(x), std::move(param), std::move(result)}})};
}
inline TypeKind Type::kind() const { return static_cast<TypeKind>(node_->v.index()); }

inline const DeclType& as_decl(const Type& t) { return std::get<DeclType>(t.node().v); }
inline const PathType& as_path(const Type& t) { return std::get<PathType>(t.node().v); }
inline const AllType& as_all(const Type& t) { return std::get<AllType>(t.node().v); }

// ---------------------------------------------------------------------------
// Terms

struct TermNode;

enum class TermKind { Var, Tag, Lam, App, Let };

class Term {
 public:
  static Term var(VarName x);
  static Term tag(TypeLabel l, Type alias);
  static Term lam(VarName x, Type param_type, Term body);
  static Term app(VarName fun, VarName arg);
  static Term let(VarName x, Term rhs, Term body);

  TermKind kind() const;
  bool is_value() const { return kind() == TermKind::Tag || kind() == TermKind::Lam; }
  const TermNode& node() const { return *node_; }

 private:
  explicit Term(std::shared_ptr<const TermNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const TermNode> node_;
};

struct VarTerm {
  VarName name;
};
struct TagTerm {
  TypeLabel label;
  Type alias;
};
struct LamTerm {
  VarName param;
  Type param_type;
  Term body;
};
struct AppTerm {
  VarName fun;
  VarName arg;
};
struct LetTerm {
  VarName bound;
  Term rhs;
  Term body;
};

struct TermNode {
  std::variant<VarTerm, TagTerm, LamTerm, AppTerm, LetTerm> v;
};

inline Term Term::var(VarName x) {
  return Term{std::make_shared<const TermNode>(TermNode{VarTerm{std::move(x)}})};
}
inline Term Term::tag(TypeLabel l, Type alias) {
  return Term{std::make_shared<const TermNode>(TermNode{TagTerm{std::move(l), std::move(alias)}})};
}
inline Term Term::lam(VarName x, Type param_type, Term body) {
  return Term{std::make_shared<const TermNode>(
      TermNode{LamTerm{std::move(x), std::move(param_type), std::move(body)}})};
}
inline Term Term::app(VarName fun, VarName arg) {
  return Term{std::make_shared<const TermNode>(TermNode{AppTerm{std::move(fun), std::move(arg)}})};
}
inline Term Term::let(VarName x, Term rhs, Term body) {
  return Term{std::make_shared<const TermNode>(
      TermNode{LetTerm{std::move(x), std::move(rhs), std::move(body)}})};
}
inline TermKind Term::kind() const { return static_cast<TermKind>(node_->v.index()); }

inline const VarTerm& as_var(const Term& t) { return std::get<VarTerm>(t.node().v); }
inline const TagTerm& as_tag(const Term& t) { return std::get<TagTerm>(t.node().v); }
inline const LamTerm& as_lam(const Term& t) { return std::get<LamTerm>(t.node().v); }
inline const AppTerm& as_app(const Term& t) { return std::get<AppTerm>(t.node().v); }
inline const LetTerm& as_let(const Term& t) { return std::get<LetTerm>(t.node().v); }

// ---------------------------------------------------------------------------
// Free variables

namespace detail {

inline void collect_fv(const Type& t, VarSet& bound, VarSet& out) {
  switch (t.kind()) {
    case TypeKind::Top:
    case TypeKind::Bot:
      return;
    case TypeKind::Decl: {
      const auto& d = as_decl(t);
      collect_fv(d.lower, bound, out);
      collect_fv(d.upper, bound, out);
      return;
    }
    case TypeKind::Path: {
      const auto& p = as_path(t);
      if (!bound.contains(p.var)) out.insert(p.var);
      return;
    }
    case TypeKind::All: {
      const auto& a = as_all(t);
      collect_fv(a.param_type, bound, out);
      bool fresh = bound.insert(a.param).second;
      collect_fv(a.result, bound, out);
      if (fresh) bound.erase(a.param);
      return;
    }
  }
}

inline void collect_fv(const Term& t, VarSet& bound, VarSet& out) {
  auto use = [&](const VarName& x) {
    if (!bound.contains(x)) out.insert(x);
  };
  switch (t.kind()) {
    case TermKind::Var:
      use(as_var(t).name);
      return;
    case TermKind::Tag:
      collect_fv(as_tag(t).alias, bound, out);
      return;
    case TermKind::Lam: {
      const auto& l = as_lam(t);
      collect_fv(l.param_type, bound, out);
      bool fresh = bound.insert(l.param).second;
      collect_fv(l.body, bound, out);
      if (fresh) bound.erase(l.param);
      return;
    }
    case TermKind::App:
      use(as_app(t).fun);
      use(as_app(t).arg);
      return;
    case TermKind::Let: {
      const auto& l = as_let(t);
      collect_fv(l.rhs, bound, out);
      bool fresh = bound.insert(l.bound).second;
      collect_fv(l.body, bound, out);
      if (fresh) bound.erase(l.bound);
      return;
    }
  }
}

}  // namespace detail

inline VarSet fv_type(const Type& t) {
  VarSet bound, out;
  detail::collect_fv(t, bound, out);
  return out;
}

inline VarSet fv_term(const Term& t) {
  VarSet bound, out;
  detail::collect_fv(t, bound, out);
  return out;
}

inline bool occurs_free(const VarName& x, const Type& t) { return fv_type(t).contains(x); }

/// Least `base<k>` (k = 1, 2, ...) not in `avoid`.
inline VarName fresh_name(const VarName& base, const VarSet& avoid) {
  for (unsigned k = 1;; ++k) {
    VarName candidate{base.name + std::to_string(k)};
    if (!avoid.contains(candidate)) return candidate;
  }
}

/// `preferred` itself when it is not in `avoid`, otherwise a fresh variant.
inline VarName pick_binder(const VarName& preferred, const VarSet& avoid) {
  return avoid.contains(preferred) ? fresh_name(preferred, avoid) : preferred;
}

// ---------------------------------------------------------------------------
// Variable-for-variable substitution [from := to]

inline Type subst_var_in_type(const Type& t, const VarName& from, const VarName& to) {
  if (from == to) return t;
  switch (t.kind()) {
    case TypeKind::Top:
    case TypeKind::Bot:
      return t;
    case TypeKind::Decl: {
      const auto& d = as_decl(t);
      return Type::decl(d.label, subst_var_in_type(d.lower, from, to),
                        subst_var_in_type(d.upper, from, to));
    }
    case TypeKind::Path: {
      const auto& p = as_path(t);
      return p.var == from ? Type::path(to, p.label) : t;
    }
    case TypeKind::All: {
      const auto& a = as_all(t);
      Type param = subst_var_in_type(a.param_type, from, to);
      if (a.param == from) return Type::all(a.param, param, a.result);
      if (a.param == to && occurs_free(from, a.result)) {
        VarSet avoid = fv_type(a.result);
        avoid.insert(from);
        avoid.insert(to);
        VarName renamed = fresh_name(a.param, avoid);
        Type body = subst_var_in_type(a.result, a.param, renamed);
        return Type::all(renamed, param, subst_var_in_type(body, from, to));
      }
      return Type::all(a.param, param, subst_var_in_type(a.result, from, to));
    }
  }
  return t;
}

inline Term subst_var_in_term(const Term& t, const VarName& from, const VarName& to) {
  if (from == to) return t;
  auto sv = [&](const VarName& x) { return x == from ? to : x; };
  // Renames the binder of a scope when `to` would be captured.
  auto open = [&](const VarName& binder, const Term& body) -> std::pair<VarName, Term> {
    if (binder == from) return {binder, body};
    if (binder == to && fv_term(body).contains(from)) {
      VarSet avoid = fv_term(body);
      avoid.insert(from);
      avoid.insert(to);
      VarName renamed = fresh_name(binder, avoid);
      Term b = subst_var_in_term(body, binder, renamed);
      return {renamed, subst_var_in_term(b, from, to)};
    }
    return {binder, subst_var_in_term(body, from, to)};
  };
  switch (t.kind()) {
    case TermKind::Var:
      return Term::var(sv(as_var(t).name));
    case TermKind::Tag:
      return Term::tag(as_tag(t).label, subst_var_in_type(as_tag(t).alias, from, to));
    case TermKind::App:
      return Term::app(sv(as_app(t).fun), sv(as_app(t).arg));
    case TermKind::Lam: {
      const auto& l = as_lam(t);
      auto [x, body] = open(l.param, l.body);
      return Term::lam(x, subst_var_in_type(l.param_type, from, to), body);
    }
    case TermKind::Let: {
      const auto& l = as_let(t);
      auto [x, body] = open(l.bound, l.body);
      return Term::let(x, subst_var_in_term(l.rhs, from, to), body);
    }
  }
  return t;
}

// ---------------------------------------------------------------------------
// Alpha-equivalence

namespace detail {

// Binder stacks, innermost last. A variable is resolved to the depth of its
// innermost binder, or stays free.
struct AlphaScope {
  std::vector<const VarName*> left, right;

  static int depth_of(const std::vector<const VarName*>& s, const VarName& x) {
    for (int i = static_cast<int>(s.size()) - 1; i >= 0; --i)
      if (*s[static_cast<size_t>(i)] == x) return i;
    return -1;
  }

  bool same_var(const VarName& a, const VarName& b) const {
    int da = depth_of(left, a), db = depth_of(right, b);
    if (da != db) return false;
    return da >= 0 || a == b;
  }
};

inline bool alpha_eq(const Type& a, const Type& b, AlphaScope& sc) {
  if (a.kind() != b.kind()) return false;
  if (a.identity() == b.identity() && sc.left.empty()) return true;
  switch (a.kind()) {
    case TypeKind::Top:
    case TypeKind::Bot:
      return true;
    case TypeKind::Decl: {
      const auto& x = as_decl(a);
      const auto& y = as_decl(b);
      return x.label == y.label && alpha_eq(x.lower, y.lower, sc) && alpha_eq(x.upper, y.upper, sc);
    }
    case TypeKind::Path: {
      const auto& x = as_path(a);
      const auto& y = as_path(b);
      return x.label == y.label && sc.same_var(x.var, y.var);
    }
    case TypeKind::All: {
      const auto& x = as_all(a);
      const auto& y = as_all(b);
      if (!alpha_eq(x.param_type, y.param_type, sc)) return false;
      sc.left.push_back(&x.param);
      sc.right.push_back(&y.param);
      bool r = alpha_eq(x.result, y.result, sc);
      sc.left.pop_back();
      sc.right.pop_back();
      return r;
    }
  }
  return false;
}

inline bool alpha_eq(const Term& a, const Term& b, AlphaScope& sc) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TermKind::Var:
      return sc.same_var(as_var(a).name, as_var(b).name);
    case TermKind::Tag:
      return as_tag(a).label == as_tag(b).label && alpha_eq(as_tag(a).alias, as_tag(b).alias, sc);
    case TermKind::App:
      return sc.same_var(as_app(a).fun, as_app(b).fun) && sc.same_var(as_app(a).arg, as_app(b).arg);
    case TermKind::Lam: {
      const auto& x = as_lam(a);
      const auto& y = as_lam(b);
      if (!alpha_eq(x.param_type, y.param_type, sc)) return false;
      sc.left.push_back(&x.param);
      sc.right.push_back(&y.param);
      bool r = alpha_eq(x.body, y.body, sc);
      sc.left.pop_back();
      sc.right.pop_back();
      return r;
    }
    case TermKind::Let: {
      const auto& x = as_let(a);
      const auto& y = as_let(b);
      if (!alpha_eq(x.rhs, y.rhs, sc)) return false;
      sc.left.push_back(&x.bound);
      sc.right.push_back(&y.bound);
      bool r = alpha_eq(x.body, y.body, sc);
      sc.left.pop_back();
      sc.right.pop_back();
      return r;
    }
  }
  return false;
}

}  // namespace detail

inline bool alpha_eq_type(const Type& a, const Type& b) {
  detail::AlphaScope sc;
  return detail::alpha_eq(a, b, sc);
}

inline bool alpha_eq_term(const Term& a, const Term& b) {
  detail::AlphaScope sc;
  return detail::alpha_eq(a, b, sc);
}

// ---------------------------------------------------------------------------
// Structural size (node count)

inline int type_size(const Type& t) {
  switch (t.kind()) {
    case TypeKind::Top:
    case TypeKind::Bot:
    case TypeKind::Path:
      return 1;
    case TypeKind::Decl:
      return 1 + type_size(as_decl(t).lower) + type_size(as_decl(t).upper);
    case TypeKind::All:
      return 1 + type_size(as_all(t).param_type) + type_size(as_all(t).result);
  }
  return 1;
}

inline int term_size(const Term& t) {
  switch (t.kind()) {
    case TermKind::Var:
      return 1;
    case TermKind::App:
      return 2;
    case TermKind::Tag:
      return 1 + type_size(as_tag(t).alias);
    case TermKind::Lam:
      return 1 + type_size(as_lam(t).param_type) + term_size(as_lam(t).body);
    case TermKind::Let:
      return 1 + term_size(as_let(t).rhs) + term_size(as_let(t).body);
  }
  return 1;
}

/// Visits every subterm (pre-order). Subterms under binders may mention the
/// bound variable.
inline void for_each_subtype(const Type& t, const std::function<void(const Type&)>& f) {
  f(t);
  switch (t.kind()) {
    case TypeKind::Decl:
      for_each_subtype(as_decl(t).lower, f);
      for_each_subtype(as_decl(t).upper, f);
      break;
    case TypeKind::All:
      for_each_subtype(as_all(t).param_type, f);
      for_each_subtype(as_all(t).result, f);
      break;
    default:
      break;
  }
}

}  // namespace dsub
