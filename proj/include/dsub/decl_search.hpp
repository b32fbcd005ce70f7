#pragma once

// Fuel-bounded search for declarative derivations.
//
// Subtyping is decided bottom-up per environment over a finite pool of
// candidate types: level f holds the pairs with a derivation of depth <= f.
// Function-type comparison opens a child table for the extended environment.
// Typing is searched top-down over the term, reusing the tables for Sub.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "dsub/declarative.hpp"
#include "dsub/environment.hpp"
#include "dsub/exposure.hpp"
#include "dsub/step.hpp"
#include "dsub/syntax.hpp"

namespace dsub {

namespace detail {

inline void canon_key(const Type& t, std::vector<const VarName*>& bound, std::string& out) {
  switch (t.kind()) {
    case TypeKind::Top: out += 'T'; return;
    case TypeKind::Bot: out += 'B'; return;
    case TypeKind::Decl: {
      const auto& d = as_decl(t);
      out += '{';
      out += d.label.name;
      out += ':';
      canon_key(d.lower, bound, out);
      out += ',';
      canon_key(d.upper, bound, out);
      out += '}';
      return;
    }
    case TypeKind::Path: {
      const auto& p = as_path(t);
      for (size_t k = bound.size(); k-- > 0;) {
        if (*bound[k] == p.var) {
          out += '#' + std::to_string(bound.size() - 1 - k);
          out += '.' + p.label.name;
          return;
        }
      }
      out += p.var.name + '.' + p.label.name;
      return;
    }
    case TypeKind::All: {
      const auto& a = as_all(t);
      out += "A(";
      canon_key(a.param_type, bound, out);
      out += ')';
      bound.push_back(&a.param);
      canon_key(a.result, bound, out);
      bound.pop_back();
      return;
    }
  }
}

}  // namespace detail

/// Alpha-invariant key: equal keys iff alpha-equal types.
inline std::string canonical_key(const Type& t) {
  std::vector<const VarName*> bound;
  std::string out;
  detail::canon_key(t, bound, out);
  return out;
}

class DeclSearcher {
 public:
  struct PoolType {
    Type type;
    int lower = -1;  // Decl
    int upper = -1;  // Decl
    int param = -1;  // All
  };

  class Table {
   public:
    const TypeEnv& env() const { return env_; }
    const std::vector<PoolType>& pool() const { return pool_; }
    size_t size() const { return pool_.size(); }

    std::optional<int> id_of(const Type& t) const {
      auto it = index_.find(canonical_key(t));
      if (it == index_.end()) return std::nullopt;
      return it->second;
    }

    /// Derivation depth of the pair, or 0 if none within the computed levels.
    int min_level(int i, int j) const { return ml_[idx(i, j)]; }

    bool holds(int i, int j, int fuel) const {
      int m = ml_[idx(i, j)];
      return m != 0 && m <= fuel;
    }

   private:
    friend class DeclSearcher;

    size_t idx(int i, int j) const { return static_cast<size_t>(i) * pool_.size() + static_cast<size_t>(j); }

    TypeEnv env_;
    VarName binder_;
    std::set<TypeLabel> labels_;
    std::vector<PoolType> pool_;
    std::unordered_map<std::string, int> index_;
    int top_ = 0, bot_ = 1;
    int level_ = 0;
    std::vector<uint8_t> ml_;
    std::vector<uint64_t> rows_, cols_;
    size_t words_ = 0;
    std::map<VarName, int> var_type_;
    std::map<TypeLabel, std::vector<int>> decls_;
    std::map<int, std::unique_ptr<Table>> children_;
    std::vector<int> open_;  // parent All id -> id of its opened body here
    std::map<std::tuple<std::string, int, int>, std::optional<DerivationTree>> typ_memo_;
  };

  DeclSearcher(const TypeEnv& env, const std::vector<Type>& seeds, const std::vector<Term>& terms = {}) {
    std::set<TypeLabel> labels;
    auto collect = [&](const Type& t) {
      for_each_subtype(t, [&](const Type& s) {
        if (s.is_decl()) labels.insert(as_decl(s).label);
        if (s.is_path()) labels.insert(as_path(s).label);
      });
    };
    for (const auto& b : env.bindings()) collect(b.type);
    for (const auto& s : seeds) collect(s);
    std::vector<Type> all_seeds = seeds;
    for (const auto& t : terms) collect_term_types(t, all_seeds, collect);
    root_ = make_table(env, labels, all_seeds, nullptr);
  }

  Table& root() { return *root_; }
  size_t table_count() const { return tables_; }

  /// Ensures levels up to `fuel` and reports whether S <: T has a derivation
  /// of depth <= fuel. Types outside the pool are never derivable.
  bool derivable(const Type& s, const Type& t, int fuel) {
    auto i = root_->id_of(s), j = root_->id_of(t);
    if (!i || !j || fuel < 1) return false;
    ensure(*root_, fuel);
    return root_->holds(*i, *j, fuel);
  }

  std::optional<DerivationTree> sub_tree(const Type& s, const Type& t, int fuel) {
    if (!derivable(s, t, fuel)) return std::nullopt;
    return rebuild(*root_, *root_->id_of(s), *root_->id_of(t));
  }

  /// Γ ⊢ x : T by Var, or by Sub over Var.
  bool var_typable(const VarName& x, const Type& t, int fuel) {
    auto j = root_->id_of(t);
    if (!j || fuel < 1) return false;
    ensure(*root_, fuel);
    return var_typ_level(*root_, x, *j, fuel);
  }

  std::optional<DerivationTree> typ_tree(const Term& term, const Type& t, int fuel) {
    auto j = root_->id_of(t);
    if (!j || fuel < 1) return std::nullopt;
    return typ(*root_, term, *j, fuel);
  }

 private:
  template <class F>
  static void collect_term_types(const Term& t, std::vector<Type>& out, F& collect) {
    switch (t.kind()) {
      case TermKind::Var:
      case TermKind::App:
        return;
      case TermKind::Tag: {
        const auto& g = as_tag(t);
        Type d = Type::decl(g.label, g.alias, g.alias);
        collect(d);
        out.push_back(d);
        return;
      }
      case TermKind::Lam:
        collect(as_lam(t).param_type);
        out.push_back(as_lam(t).param_type);
        collect_term_types(as_lam(t).body, out, collect);
        return;
      case TermKind::Let:
        collect_term_types(as_let(t).rhs, out, collect);
        collect_term_types(as_let(t).body, out, collect);
        return;
    }
  }

  static VarName table_binder(const TypeEnv& env) {
    VarSet dom = env.dom();
    for (const char* c : {"x", "y", "z"})
      if (!dom.contains(var(c))) return var(c);
    return fresh_name(var("z"), dom);
  }

  int add(Table& tb, const Type& t) {
    std::string key = canonical_key(t);
    auto it = tb.index_.find(key);
    if (it != tb.index_.end()) return it->second;
    PoolType p{t};
    switch (t.kind()) {
      case TypeKind::Decl:
        p.lower = add(tb, as_decl(t).lower);
        p.upper = add(tb, as_decl(t).upper);
        break;
      case TypeKind::All: {
        const auto& a = as_all(t);
        p.param = add(tb, a.param_type);
        if (!occurs_free(a.param, a.result)) add(tb, a.result);
        break;
      }
      default:
        break;
    }
    int id = static_cast<int>(tb.pool_.size());
    tb.pool_.push_back(std::move(p));
    tb.index_.emplace(std::move(key), id);
    return id;
  }

  std::unique_ptr<Table> make_table(const TypeEnv& env, const std::set<TypeLabel>& labels,
                                    const std::vector<Type>& seeds, const Table* parent) {
    ++tables_;
    auto tb = std::make_unique<Table>();
    tb->env_ = env;
    tb->labels_ = labels;
    tb->binder_ = table_binder(env);
    VarSet dom = env.dom();
    auto scoped = [&](const Type& t) {
      for (const auto& v : fv_type(t))
        if (!dom.contains(v)) return false;
      return true;
    };
    add(*tb, Type::top());
    add(*tb, Type::bot());
    if (parent) {
      for (const auto& p : parent->pool_) add(*tb, p.type);
      tb->open_.assign(parent->pool_.size(), -1);
      const VarName& z = env.last()->var;
      for (size_t k = 0; k < parent->pool_.size(); ++k) {
        const auto& p = parent->pool_[k];
        if (!p.type.is_all()) continue;
        const auto& a = as_all(p.type);
        tb->open_[k] = add(*tb, subst_var_in_type(a.result, a.param, z));
      }
    }
    for (const auto& b : env.bindings()) tb->var_type_[b.var] = add(*tb, b.type);
    for (const auto& s : seeds)
      if (scoped(s)) add(*tb, s);
    for (const auto& x : dom)
      for (const auto& l : labels) add(*tb, Type::path(x, l));
    for (size_t k = 0; k < tb->pool_.size(); ++k) {
      Type t = tb->pool_[k].type;
      if (!t.is_path()) continue;
      AlgoContext ctx;
      ExposureResult r = expose(env, t, ctx);
      if (is_exposed(r)) add(*tb, exposed_type(r));
    }
    size_t n = tb->pool_.size();
    for (size_t k = 0; k < n; ++k)
      if (tb->pool_[k].type.is_decl()) tb->decls_[as_decl(tb->pool_[k].type).label].push_back(static_cast<int>(k));
    tb->ml_.assign(n * n, 0);
    tb->words_ = (n + 63) / 64;
    tb->rows_.assign(n * tb->words_, 0);
    tb->cols_.assign(n * tb->words_, 0);
    return tb;
  }

  Table& child(Table& tb, int param) {
    auto it = tb.children_.find(param);
    if (it != tb.children_.end()) return *it->second;
    TypeEnv env = tb.env_.extend(tb.binder_, tb.pool_[static_cast<size_t>(param)].type);
    auto c = make_table(env, tb.labels_, {}, &tb);
    Table& ref = *c;
    tb.children_.emplace(param, std::move(c));
    return ref;
  }

  static bool prev(const Table& tb, int i, int j, int f) {
    int m = tb.ml_[tb.idx(i, j)];
    return m != 0 && m < f;
  }

  // x : D within `level` (Var at depth 1, Sub over Var at depth >= 2).
  static bool var_typ_level(const Table& tb, const VarName& x, int d, int level) {
    auto it = tb.var_type_.find(x);
    if (it == tb.var_type_.end() || level < 1) return false;
    if (it->second == d) return true;
    return level >= 2 && prev(tb, it->second, d, level);
  }

  // Axioms between opened bodies, used where a depth-1 premise suffices.
  static std::optional<DeclRule> body_axiom(const Type& l, const Type& r) {
    if (r.is_top()) return DeclRule::Top;
    if (l.is_bot()) return DeclRule::Bot;
    if (alpha_eq_type(l, r)) return DeclRule::Refl;
    return std::nullopt;
  }

  std::pair<Type, Type> opened(const Table& tb, int i, int j) const {
    const auto& l = as_all(tb.pool_[static_cast<size_t>(i)].type);
    const auto& r = as_all(tb.pool_[static_cast<size_t>(j)].type);
    return {subst_var_in_type(l.result, l.param, tb.binder_), subst_var_in_type(r.result, r.param, tb.binder_)};
  }

  enum class Via { None, Top, Bot, Refl, TypTyp, AllAll, SelSub, SubSel, Trans };

  // First applicable rule for (i, j) at level f, using only pairs of depth
  // < f. `aux` receives the declaration or midpoint id.
  Via first_rule(Table& tb, int i, int j, int f, int& aux) {
    const auto& a = tb.pool_[static_cast<size_t>(i)];
    const auto& b = tb.pool_[static_cast<size_t>(j)];
    if (j == tb.top_) return Via::Top;
    if (i == tb.bot_) return Via::Bot;
    if (i == j) return Via::Refl;
    if (f < 2) return Via::None;
    if (a.type.is_decl() && b.type.is_decl() && as_decl(a.type).label == as_decl(b.type).label &&
        prev(tb, b.lower, a.lower, f) && prev(tb, a.upper, b.upper, f))
      return Via::TypTyp;
    if (a.type.is_all() && b.type.is_all() && prev(tb, b.param, a.param, f)) {
      if (f == 2) {
        auto [l, r] = opened(tb, i, j);
        if (body_axiom(l, r)) return Via::AllAll;
      } else {
        Table& c = child(tb, b.param);
        ensure(c, f - 1);
        if (prev(c, c.open_[static_cast<size_t>(i)], c.open_[static_cast<size_t>(j)], f)) return Via::AllAll;
      }
    }
    if (a.type.is_path()) {
      const auto& p = as_path(a.type);
      auto it = tb.decls_.find(p.label);
      if (it != tb.decls_.end())
        for (int d : it->second)
          if (tb.pool_[static_cast<size_t>(d)].upper == j && var_typ_level(tb, p.var, d, f - 1)) {
            aux = d;
            return Via::SelSub;
          }
    }
    if (b.type.is_path()) {
      const auto& p = as_path(b.type);
      auto it = tb.decls_.find(p.label);
      if (it != tb.decls_.end())
        for (int d : it->second)
          if (tb.pool_[static_cast<size_t>(d)].lower == i && var_typ_level(tb, p.var, d, f - 1)) {
            aux = d;
            return Via::SubSel;
          }
    }
    return Via::None;
  }

  void ensure(Table& tb, int fuel) {
    const size_t n = tb.pool_.size();
    const size_t w = tb.words_;
    while (tb.level_ < fuel) {
      int f = tb.level_ + 1;
      std::vector<uint64_t> rows = tb.rows_, cols = tb.cols_;
      std::vector<std::pair<int, int>> found;
      for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
          if (tb.ml_[i * n + j]) continue;
          int aux = -1;
          bool hit = first_rule(tb, static_cast<int>(i), static_cast<int>(j), f, aux) != Via::None;
          if (!hit && f >= 2) {
            const uint64_t* r = &rows[i * w];
            const uint64_t* c = &cols[j * w];
            for (size_t k = 0; k < w && !hit; ++k) hit = (r[k] & c[k]) != 0;
          }
          if (hit) found.emplace_back(static_cast<int>(i), static_cast<int>(j));
        }
      }
      for (auto [i, j] : found) {
        tb.ml_[tb.idx(i, j)] = static_cast<uint8_t>(f);
        tb.rows_[static_cast<size_t>(i) * w + static_cast<size_t>(j) / 64] |= uint64_t{1} << (j % 64);
        tb.cols_[static_cast<size_t>(j) * w + static_cast<size_t>(i) / 64] |= uint64_t{1} << (i % 64);
      }
      tb.level_ = f;
      if (f >= 255) break;
    }
  }

  DerivationTree var_tree(Table& tb, const VarName& x, int d) {
    int g = tb.var_type_.at(x);
    DerivationTree v = build::var(tb.env_, x);
    if (g == d) return v;
    return build::subsume(std::move(v), rebuild(tb, g, d));
  }

  DerivationTree rebuild(Table& tb, int i, int j) {
    int f = tb.ml_[tb.idx(i, j)];
    const Type& s = tb.pool_[static_cast<size_t>(i)].type;
    const Type& t = tb.pool_[static_cast<size_t>(j)].type;
    const TypeEnv& g = tb.env_;
    int aux = -1;
    switch (first_rule(tb, i, j, f, aux)) {
      case Via::Top:
        return build::top(g, s);
      case Via::Bot:
        return build::bot(g, t);
      case Via::Refl:
        return build::refl(g, s);
      case Via::TypTyp: {
        const auto& a = tb.pool_[static_cast<size_t>(i)];
        const auto& b = tb.pool_[static_cast<size_t>(j)];
        return build::node(DeclRule::TypTyp, SubJ{g, s, t}, {rebuild(tb, b.lower, a.lower), rebuild(tb, a.upper, b.upper)});
      }
      case Via::AllAll: {
        const auto& b = tb.pool_[static_cast<size_t>(j)];
        const auto& a = tb.pool_[static_cast<size_t>(i)];
        DerivationTree param = rebuild(tb, b.param, a.param);
        DerivationTree body = [&]() -> DerivationTree {
          if (f > 2) {
            Table& c = child(tb, b.param);
            return rebuild(c, c.open_[static_cast<size_t>(i)], c.open_[static_cast<size_t>(j)]);
          }
          auto [l, r] = opened(tb, i, j);
          TypeEnv inner = g.extend(tb.binder_, as_all(b.type).param_type);
          switch (*body_axiom(l, r)) {
            case DeclRule::Top: return build::top(inner, l);
            case DeclRule::Bot: return build::bot(inner, r);
            default: return build::node(DeclRule::Refl, SubJ{inner, l, r});
          }
        }();
        return build::node(DeclRule::AllAll, SubJ{g, s, t}, {std::move(param), std::move(body)});
      }
      case Via::SelSub:
        return build::sel_sub(g, s, var_tree(tb, as_path(s).var, aux));
      case Via::SubSel:
        return build::sub_sel(g, t, var_tree(tb, as_path(t).var, aux));
      case Via::Trans:
      case Via::None:
        break;
    }
    for (size_t k = 0; k < tb.pool_.size(); ++k) {
      int m = static_cast<int>(k);
      if (prev(tb, i, m, f) && prev(tb, m, j, f))
        return build::node(DeclRule::Trans, SubJ{g, s, t}, {rebuild(tb, i, m), rebuild(tb, m, j)});
    }
    throw Error(ErrorKind::InternalLimit, "search table lost the witness for " + render(SubJ{g, s, t}));
  }

  // Top-down typing search; the goal type is a pool id of `tb`.
  std::optional<DerivationTree> typ(Table& tb, const Term& term, int goal, int f) {
    if (f < 1) return std::nullopt;
    auto key = std::make_tuple(print_term(term), goal, f);
    auto it = tb.typ_memo_.find(key);
    if (it != tb.typ_memo_.end()) return it->second;
    auto r = typ_uncached(tb, term, goal, f);
    tb.typ_memo_.emplace(std::move(key), r);
    return r;
  }

  std::optional<DerivationTree> typ_uncached(Table& tb, const Term& term, int goal, int f) {
    const TypeEnv& g = tb.env_;
    const Type& ty = tb.pool_[static_cast<size_t>(goal)].type;
    switch (term.kind()) {
      case TermKind::Var: {
        auto it = tb.var_type_.find(as_var(term).name);
        if (it != tb.var_type_.end() && it->second == goal) return build::var(g, as_var(term).name);
        break;
      }
      case TermKind::Tag: {
        const auto& tg = as_tag(term);
        if (alpha_eq_type(ty, Type::decl(tg.label, tg.alias, tg.alias)))
          return build::node(DeclRule::TypI, TypJ{g, term, ty});
        break;
      }
      case TermKind::Lam: {
        const auto& l = as_lam(term);
        if (f < 2 || !ty.is_all()) break;
        const auto& pt = tb.pool_[static_cast<size_t>(goal)];
        if (!alpha_eq_type(as_all(ty).param_type, l.param_type)) break;
        Table& c = child(tb, pt.param);
        int body_goal = c.open_[static_cast<size_t>(goal)];
        Term body = subst_var_in_term(l.body, l.param, tb.binder_);
        if (auto d = typ(c, body, body_goal, f - 1)) return build::node(DeclRule::AllI, TypJ{g, term, ty}, {std::move(*d)});
        break;
      }
      case TermKind::App: {
        if (f < 2) break;
        const auto& ap = as_app(term);
        for (size_t k = 0; k < tb.pool_.size(); ++k) {
          const auto& p = tb.pool_[k];
          if (!p.type.is_all()) continue;
          const auto& a = as_all(p.type);
          if (!alpha_eq_type(subst_var_in_type(a.result, a.param, ap.arg), ty)) continue;
          auto fun = typ(tb, Term::var(ap.fun), static_cast<int>(k), f - 1);
          if (!fun) continue;
          auto arg = typ(tb, Term::var(ap.arg), p.param, f - 1);
          if (!arg) continue;
          return build::node(DeclRule::AllE, TypJ{g, term, ty}, {std::move(*fun), std::move(*arg)});
        }
        break;
      }
      case TermKind::Let: {
        if (f < 2) break;
        const auto& l = as_let(term);
        for (size_t k = 0; k < tb.pool_.size(); ++k) {
          auto rhs = typ(tb, l.rhs, static_cast<int>(k), f - 1);
          if (!rhs) continue;
          Table& c = child(tb, static_cast<int>(k));
          Term body = subst_var_in_term(l.body, l.bound, tb.binder_);
          auto cg = c.id_of(ty);
          if (!cg) continue;
          auto bd = typ(c, body, *cg, f - 1);
          if (!bd) continue;
          return build::node(DeclRule::Let, TypJ{g, term, ty}, {std::move(*rhs), std::move(*bd)});
        }
        break;
      }
    }
    if (f < 2) return std::nullopt;
    ensure(tb, f - 1);
    for (size_t k = 0; k < tb.pool_.size(); ++k) {
      int m = static_cast<int>(k);
      if (m == goal || !prev(tb, m, goal, f)) continue;
      auto inner = typ(tb, term, m, f - 1);
      if (!inner) continue;
      return build::node(DeclRule::Sub, TypJ{g, term, ty}, {std::move(*inner), rebuild(tb, m, goal)});
    }
    return std::nullopt;
  }

  std::unique_ptr<Table> root_;
  size_t tables_ = 0;
};

namespace detail {

inline void step_types_in(const StepNode& n, const VarSet& dom, std::vector<Type>& out) {
  if (auto* j = std::get_if<TypJ>(&n.judgment)) {
    bool ok = true;
    for (const auto& v : fv_type(j->type)) ok = ok && dom.contains(v);
    if (ok) out.push_back(j->type);
  }
  for (const auto& p : n.premises) step_types_in(p, dom, out);
}

}  // namespace detail

/// Bounded search. A result always passes decl_verify; nullopt means "not
/// found within fuel", never "underivable".
inline std::optional<DerivationTree> decl_search(const Judgment& j, int fuel) {
  if (fuel < 1) return std::nullopt;
  if (auto* s = std::get_if<SubJ>(&j)) {
    DeclSearcher ds(s->env, {s->lhs, s->rhs});
    return ds.sub_tree(s->lhs, s->rhs, fuel);
  }
  const auto& t = std::get<TypJ>(j);
  std::vector<Type> seeds{t.type};
  AlgoContext ctx;
  auto st = step_type(t.env, t.term, ctx);
  if (auto* ok = std::get_if<Typed>(&st)) detail::step_types_in(ok->trace, t.env.dom(), seeds);
  DeclSearcher ds(t.env, seeds, {t.term});
  return ds.typ_tree(t.term, t.type, fuel);
}

}  // namespace dsub
