#pragma once

// The bad-bounds environment Γ⋆, its colour predicates, falsification
// harnesses for its well-behavedness and tag statements, and the
// minimal-typing counterexample.

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dsub/decl_search.hpp"
#include "dsub/declarative.hpp"
#include "dsub/enumerate.hpp"
#include "dsub/environment.hpp"
#include "dsub/parser.hpp"
#include "dsub/step.hpp"

namespace dsub {

// ---------------------------------------------------------------------------
// Colours, parameterised by the distinguished path e.E

struct Colouring {
  VarName e = var("e");
  TypeLabel E = label("E");

  bool blue(const Type& t) const {
    if (t.is_all()) return true;
    return t.is_path() && as_path(t).var == e && as_path(t).label == E;
  }

  bool red(const Type& t) const {
    if (!t.is_decl()) return false;
    const auto& d = as_decl(t);
    return d.label == E && (d.lower.is_bot() || blue(d.lower)) && (d.upper.is_top() || blue(d.upper));
  }
};

inline bool is_blue(const Type& t, const Colouring& c = {}) { return c.blue(t); }
inline bool is_red(const Type& t, const Colouring& c = {}) { return c.red(t); }

// ---------------------------------------------------------------------------
// Corpus

namespace gamma_star {

inline Type B() { return parse_type("{V: Top .. Top}"); }
inline Type C() { return parse_type("{Z: Top .. Top}"); }
inline Type all_b_B() { return Type::all(var("b"), B(), B()); }
inline Type all_b_C() { return Type::all(var("b"), B(), C()); }
inline Type e_decl() { return Type::decl(label("E"), all_b_B(), all_b_C()); }
inline TypeEnv env() { return TypeEnv::empty().extend(var("e"), e_decl()); }

/// Body of the counterexample lambda, typed directly in Γ⋆.
inline Term w() { return parse_term("let f = lam(b: {V: Top .. Top}) b in let b1 = {V = Top} in f b1"); }

/// The full counterexample term, binding e itself.
inline Term A() { return Term::lam(var("e"), e_decl(), w()); }

inline std::vector<TypeLabel> labels() { return {label("E"), label("V"), label("Z")}; }

/// Γ ⊢ ∀(b: B)B <: ∀(b: B)C through e.E, in any environment extending Γ⋆.
inline DerivationTree bad_bounds_tree(const TypeEnv& g) {
  Type ee = Type::path(var("e"), label("E"));
  auto up = build::sub_sel(g, ee, build::var(g, var("e")));
  auto down = build::sel_sub(g, ee, build::var(g, var("e")));
  return build::trans(std::move(up), std::move(down));
}

/// Γ⋆ ⊢ w : B (`to_c` false) or Γ⋆ ⊢ w : C (`to_c` true).
inline DerivationTree w_tree(bool to_c) {
  TypeEnv g = env();
  Term w_ = w();
  const auto& outer = as_let(w_);
  const auto& inner = as_let(outer.body);

  auto lam_b = build::node(DeclRule::AllI, TypJ{g, outer.rhs, all_b_B()},
                           {build::var(g.extend(var("b"), B()), var("b"))});
  TypeEnv gf = g.extend(var("f"), all_b_B());
  auto tag = build::node(DeclRule::TypI, TypJ{gf, inner.rhs, B()});
  TypeEnv gfb = gf.extend(var("b1"), B());

  auto fun = build::var(gfb, var("f"));
  if (to_c) fun = build::subsume(std::move(fun), bad_bounds_tree(gfb));
  Type result = to_c ? C() : B();
  auto app = build::node(DeclRule::AllE, TypJ{gfb, inner.body, result}, {std::move(fun), build::var(gfb, var("b1"))});
  auto let_b1 = build::node(DeclRule::Let, TypJ{gf, outer.body, result}, {std::move(tag), std::move(app)});
  return build::node(DeclRule::Let, TypJ{g, w_, result}, {std::move(lam_b), std::move(let_b1)});
}

}  // namespace gamma_star

// ---------------------------------------------------------------------------
// Harnesses

struct LabReport {
  std::string header;
  long types = 0;
  long derivable = 0;
  long checked = 0;
  std::vector<std::string> violations;
  long witnesses_verified = 0;  // violations whose search tree passes decl_verify

  bool clean() const { return violations.empty(); }
};

namespace detail {

inline const char* bounded_note() {
  return "derivability comes from bounded search; a clean run is evidence, not proof";
}

inline void finish(LabReport& r) {
  std::sort(r.violations.begin(), r.violations.end());
  r.violations.erase(std::unique(r.violations.begin(), r.violations.end()), r.violations.end());
}

}  // namespace detail

/// Checks statements (1)-(7) about Γ⋆ on every enumerated pair with a
/// derivation found within `fuel`, plus disjointness of the colours.
inline LabReport check_wellbehaved(int max_size, int fuel, const Colouring& c = {}) {
  LabReport r;
  r.header = "Gamma* well-behaved check, types up to size " + std::to_string(max_size) + ", fuel " +
             std::to_string(fuel) + "; " + detail::bounded_note();
  Enumerator en(gamma_star::labels());
  auto ts = en.types_up_to({c.e}, max_size);
  r.types = static_cast<long>(ts.size());
  TypeEnv g = gamma_star::env();
  DeclSearcher ds(g, ts);
  std::set<std::string> witnessed;
  auto flag = [&](int k, const std::string& what, std::optional<DerivationTree> tree) {
    r.violations.push_back("(" + std::to_string(k) + ") " + what);
    if (tree && decl_verify(*tree).ok && witnessed.insert(r.violations.back()).second) ++r.witnesses_verified;
  };

  for (const auto& t : ts)
    if (c.red(t) && c.blue(t)) r.violations.push_back("colour overlap: " + print_type(t));

  for (const auto& t : ts) {
    if (!ds.var_typable(c.e, t, fuel)) continue;
    ++r.derivable;
    ++r.checked;
    if (!(t.is_top() || c.red(t)))
      flag(1, "Gamma* |- " + c.e.name + " : " + print_type(t), ds.typ_tree(Term::var(c.e), t, fuel));
  }

  for (const auto& t : ts) {
    for (const auto& s : ts) {
      if (!ds.derivable(t, s, fuel)) continue;
      ++r.derivable;
      std::string j = "Gamma* |- " + print_type(t) + " <: " + print_type(s);
      if (c.red(t)) {
        ++r.checked;
        if (!(s.is_top() || c.red(s))) flag(2, j, ds.sub_tree(t, s, fuel));
      }
      if (c.red(s)) {
        ++r.checked;
        if (!(t.is_bot() || c.red(t))) flag(3, j, ds.sub_tree(t, s, fuel));
      }
      if (c.blue(t)) {
        ++r.checked;
        if (!(s.is_top() || c.blue(s))) flag(4, j, ds.sub_tree(t, s, fuel));
      }
      if (c.blue(s)) {
        ++r.checked;
        if (!(t.is_bot() || c.blue(t))) flag(5, j, ds.sub_tree(t, s, fuel));
      }
      if (s.is_bot()) {
        ++r.checked;
        if (!t.is_bot()) flag(6, j, ds.sub_tree(t, s, fuel));
      }
      if (t.is_top()) {
        ++r.checked;
        if (!s.is_top()) flag(7, j, ds.sub_tree(t, s, fuel));
      }
    }
  }
  detail::finish(r);
  return r;
}

/// Every derivable Γ⋆ ⊢ T <: {X: X1..X2} has T = Bot or T a declaration of X.
inline LabReport check_no_tag_switch(int max_size, int fuel) {
  LabReport r;
  r.header = "Gamma* declaration tag check, types up to size " + std::to_string(max_size) + ", fuel " +
             std::to_string(fuel) + "; " + detail::bounded_note();
  Enumerator en(gamma_star::labels());
  auto ts = en.types_up_to({var("e")}, max_size);
  r.types = static_cast<long>(ts.size());
  DeclSearcher ds(gamma_star::env(), ts);
  for (const auto& t : ts) {
    for (const auto& s : ts) {
      if (!s.is_decl() || !ds.derivable(t, s, fuel)) continue;
      ++r.derivable;
      ++r.checked;
      bool ok = t.is_bot() || (t.is_decl() && as_decl(t).label == as_decl(s).label);
      if (ok) continue;
      r.violations.push_back("Gamma* |- " + print_type(t) + " <: " + print_type(s));
      auto tree = ds.sub_tree(t, s, fuel);
      if (tree && decl_verify(*tree).ok) ++r.witnesses_verified;
    }
  }
  detail::finish(r);
  return r;
}

struct MinimalityReport {
  std::string w_type;           // step_type(Γ⋆, w), or the failure reason
  bool w_typed_at_B = false;
  bool w_B_verified = false;
  bool w_C_verified = false;
  bool trans_verified = false;
  bool B_sub_C = true;
  bool C_sub_B = true;
  std::vector<std::string> notes;

  bool reproduced() const {
    return w_typed_at_B && w_B_verified && w_C_verified && trans_verified && !B_sub_C && !C_sub_B;
  }
};

inline MinimalityReport run_minimality_counterexample() {
  MinimalityReport r;
  TypeEnv g = gamma_star::env();
  auto st = step_type(g, gamma_star::w());
  if (auto* t = std::get_if<Typed>(&st)) {
    r.w_type = print_type(t->type);
    r.w_typed_at_B = alpha_eq_type(t->type, gamma_star::B());
  } else {
    r.w_type = "untypable: " + std::get<Untypable>(st).reason;
  }
  auto note = [&](const char* what, const VerifyResult& v) {
    if (!v.ok) r.notes.push_back(std::string(what) + " rejected at " + v.where() + ": " + v.message);
    return v.ok;
  };
  r.w_B_verified = note("w : B", decl_verify(gamma_star::w_tree(false)));
  r.w_C_verified = note("w : C", decl_verify(gamma_star::w_tree(true)));
  r.trans_verified = note("bad-bounds Trans", decl_verify(gamma_star::bad_bounds_tree(g)));
  r.B_sub_C = step_subtype(g, gamma_star::B(), gamma_star::C()).holds;
  r.C_sub_B = step_subtype(g, gamma_star::C(), gamma_star::B()).holds;
  return r;
}

}  // namespace dsub
