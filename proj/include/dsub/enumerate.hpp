#pragma once

// Exhaustive enumeration of types, terms and well-formed environments by
// size. Binders are named canonically, so each alpha class appears once.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dsub/environment.hpp"
#include "dsub/syntax.hpp"

namespace dsub {

/// First of x, y, z that is not in scope, otherwise a numbered z.
inline VarName enum_binder(const std::vector<VarName>& scope) {
  VarSet s(scope.begin(), scope.end());
  for (const char* c : {"x", "y", "z"})
    if (!s.contains(var(c))) return var(c);
  return fresh_name(var("z"), s);
}

class Enumerator {
 public:
  explicit Enumerator(std::vector<TypeLabel> labels) : labels_(std::move(labels)) {}

  static Enumerator standard() { return Enumerator({label("A"), label("B"), label("C")}); }

  const std::vector<TypeLabel>& labels() const { return labels_; }

  /// All types of exactly `size` nodes whose free variables are in `scope`.
  const std::vector<Type>& types(const std::vector<VarName>& scope, int size) {
    auto key = std::make_pair(scope_key(scope), size);
    auto it = types_.find(key);
    if (it != types_.end()) return it->second;
    std::vector<Type> out;
    if (size == 1) {
      out.push_back(Type::top());
      out.push_back(Type::bot());
      for (const auto& x : scope)
        for (const auto& l : labels_) out.push_back(Type::path(x, l));
    } else if (size >= 3) {
      for (int a = 1; a <= size - 2; ++a) {
        int b = size - 1 - a;
        const auto& lo = types(scope, a);
        const auto& hi = types(scope, b);
        for (const auto& l : labels_)
          for (const auto& s : lo)
            for (const auto& t : hi) out.push_back(Type::decl(l, s, t));
      }
      VarName z = enum_binder(scope);
      std::vector<VarName> inner = scope;
      inner.push_back(z);
      for (int a = 1; a <= size - 2; ++a) {
        int b = size - 1 - a;
        const auto& ps = types(scope, a);
        const auto& rs = types(inner, b);
        for (const auto& p : ps)
          for (const auto& r : rs) out.push_back(Type::all(z, p, r));
      }
    }
    return types_.emplace(key, std::move(out)).first->second;
  }

  std::vector<Type> types_up_to(const std::vector<VarName>& scope, int max_size) {
    std::vector<Type> out;
    for (int n = 1; n <= max_size; ++n) {
      const auto& v = types(scope, n);
      out.insert(out.end(), v.begin(), v.end());
    }
    return out;
  }

  /// All terms of exactly `size` nodes whose free variables are in `scope`.
  const std::vector<Term>& terms(const std::vector<VarName>& scope, int size) {
    auto key = std::make_pair(scope_key(scope), size);
    auto it = terms_.find(key);
    if (it != terms_.end()) return it->second;
    std::vector<Term> out;
    if (size == 1)
      for (const auto& x : scope) out.push_back(Term::var(x));
    if (size == 2)
      for (const auto& x : scope)
        for (const auto& y : scope) out.push_back(Term::app(x, y));
    if (size >= 2)
      for (const auto& l : labels_)
        for (const auto& t : types(scope, size - 1)) out.push_back(Term::tag(l, t));
    if (size >= 3) {
      VarName z = enum_binder(scope);
      std::vector<VarName> inner = scope;
      inner.push_back(z);
      for (int a = 1; a <= size - 2; ++a) {
        int b = size - 1 - a;
        for (const auto& p : types(scope, a))
          for (const auto& body : terms(inner, b)) out.push_back(Term::lam(z, p, body));
      }
      for (int a = 1; a <= size - 2; ++a) {
        int b = size - 1 - a;
        const auto& rs = terms(scope, a);
        const auto& bs = terms(inner, b);
        for (const auto& r : rs)
          for (const auto& body : bs) out.push_back(Term::let(z, r, body));
      }
    }
    return terms_.emplace(key, std::move(out)).first->second;
  }

  std::vector<Term> terms_up_to(const std::vector<VarName>& scope, int max_size) {
    std::vector<Term> out;
    for (int n = 1; n <= max_size; ++n) {
      const auto& v = terms(scope, n);
      out.insert(out.end(), v.begin(), v.end());
    }
    return out;
  }

  /// Well-formed environments binding a prefix of `vars` in order, each at a
  /// type of size <= max_type_size over the variables bound before it.
  std::vector<TypeEnv> envs(const std::vector<VarName>& vars, int max_type_size) {
    std::vector<TypeEnv> out{TypeEnv::empty()};
    std::vector<TypeEnv> frontier{TypeEnv::empty()};
    std::vector<VarName> scope;
    for (const auto& v : vars) {
      std::vector<TypeEnv> next;
      auto ts = types_up_to(scope, max_type_size);
      for (const auto& g : frontier)
        for (const auto& t : ts) next.push_back(g.extend(v, t));
      out.insert(out.end(), next.begin(), next.end());
      frontier = std::move(next);
      scope.push_back(v);
    }
    return out;
  }

 private:
  static std::string scope_key(const std::vector<VarName>& scope) {
    std::string k;
    for (const auto& v : scope) k += v.name + ",";
    return k;
  }

  std::vector<TypeLabel> labels_;
  std::map<std::pair<std::string, int>, std::vector<Type>> types_;
  std::map<std::pair<std::string, int>, std::vector<Term>> terms_;
};

inline std::vector<VarName> scope_of(const TypeEnv& g) {
  std::vector<VarName> out;
  for (const auto& b : g.bindings()) out.push_back(b.var);
  return out;
}

}  // namespace dsub
