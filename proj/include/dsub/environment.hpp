#pragma once

// Typing environments: append-only persistent sequences of bindings with the
// well-formedness discipline enforced on every extension.

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dsub/errors.hpp"
#include "dsub/parser.hpp"
#include "dsub/syntax.hpp"

namespace dsub {

struct Binding {
  VarName var;
  Type type;
};

class TypeEnv;

struct EnvSplit;

class TypeEnv {
 public:
  TypeEnv() = default;

  static TypeEnv empty() { return TypeEnv{}; }

  /// Appends `x: t`. Rejects a duplicate name, `x` free in `t`, and free
  /// variables of `t` that are not already bound (closed scoping).
  TypeEnv extend(const VarName& x, const Type& t) const {
    if (contains(x)) throw Error(ErrorKind::DuplicateBinding, "variable '" + x.name + "' is already bound");
    VarSet fv = fv_type(t);
    if (fv.contains(x))
      throw Error(ErrorKind::SelfReference, "variable '" + x.name + "' occurs free in its own type " + print_type(t));
    for (const auto& y : fv)
      if (!contains(y))
        throw Error(ErrorKind::UnboundVariable,
                    "type of '" + x.name + "' mentions unbound variable '" + y.name + "'");
    return TypeEnv{std::make_shared<const Node>(Node{Binding{x, t}, head_, size() + 1})};
  }

  size_t size() const { return head_ ? head_->size : 0; }
  bool is_empty() const { return !head_; }

  bool contains(const VarName& x) const {
    for (const Node* n = head_.get(); n; n = n->parent.get())
      if (n->binding.var == x) return true;
    return false;
  }

  std::optional<Type> lookup(const VarName& x) const {
    for (const Node* n = head_.get(); n; n = n->parent.get())
      if (n->binding.var == x) return n->binding.type;
    return std::nullopt;
  }

  /// Environment consisting of the bindings strictly before `x`.
  std::optional<TypeEnv> prefix_before(const VarName& x) const {
    for (const Node* n = head_.get(); n; n = n->parent.get())
      if (n->binding.var == x) return TypeEnv{n->parent};
    return std::nullopt;
  }

  std::optional<EnvSplit> split_at(const VarName& x) const;

  /// Bindings oldest first.
  std::vector<Binding> bindings() const {
    std::vector<Binding> out;
    out.reserve(size());
    for (const Node* n = head_.get(); n; n = n->parent.get()) out.push_back(n->binding);
    std::reverse(out.begin(), out.end());
    return out;
  }

  VarSet dom() const {
    VarSet out;
    for (const Node* n = head_.get(); n; n = n->parent.get()) out.insert(n->binding.var);
    return out;
  }

  bool covers(const VarSet& vars) const {
    for (const auto& v : vars)
      if (!contains(v)) return false;
    return true;
  }

  const Binding* last() const { return head_ ? &head_->binding : nullptr; }
  TypeEnv parent() const { return head_ ? TypeEnv{head_->parent} : TypeEnv{}; }

  /// Identity of the persistent node; equal handles share all bindings.
  const void* identity() const { return head_.get(); }

 private:
  struct Node {
    Binding binding;
    std::shared_ptr<const Node> parent;
    size_t size;
  };
  explicit TypeEnv(std::shared_ptr<const Node> h) : head_(std::move(h)) {}
  std::shared_ptr<const Node> head_;
};

struct EnvSplit {
  TypeEnv prefix;
  Type type;
  std::vector<Binding> suffix;
};

inline std::optional<EnvSplit> TypeEnv::split_at(const VarName& x) const {
  std::vector<Binding> suffix;
  for (const Node* n = head_.get(); n; n = n->parent.get()) {
    if (n->binding.var == x) {
      std::reverse(suffix.begin(), suffix.end());
      return EnvSplit{TypeEnv{n->parent}, n->binding.type, std::move(suffix)};
    }
    suffix.push_back(n->binding);
  }
  return std::nullopt;
}

/// Same names in the same order with alpha-equal types.
inline bool env_equal(const TypeEnv& a, const TypeEnv& b) {
  if (a.identity() == b.identity()) return true;
  if (a.size() != b.size()) return false;
  auto xs = a.bindings(), ys = b.bindings();
  for (size_t i = 0; i < xs.size(); ++i)
    if (xs[i].var != ys[i].var || !alpha_eq_type(xs[i].type, ys[i].type)) return false;
  return true;
}

/// `ext` is `base` followed by exactly one more binding.
inline bool env_extends_by_one(const TypeEnv& base, const TypeEnv& ext) {
  return ext.size() == base.size() + 1 && env_equal(ext.parent(), base);
}

/// Opens a binder in `env`: keeps `preferred` when it is not yet bound and
/// does not clash with `also_avoid`, otherwise picks a fresh variant.
inline VarName binder_for(const TypeEnv& env, const VarName& preferred, const VarSet& also_avoid = {}) {
  VarSet avoid = env.dom();
  avoid.insert(also_avoid.begin(), also_avoid.end());
  return pick_binder(preferred, avoid);
}

inline std::string print_env(const TypeEnv& env) {
  std::string out;
  bool first = true;
  for (const auto& b : env.bindings()) {
    if (!first) out += ", ";
    first = false;
    out += b.var.name;
    out += ": ";
    print_type_to(b.type, out);
  }
  return out;
}

/// Environment file: `IDENT : type ;` bindings, oldest first.
inline TypeEnv parse_env(std::string_view text) {
  Parser p(text);
  TypeEnv env;
  while (!p.at_end()) {
    const Token& start = p.peek();
    VarName x = p.ident();
    p.expect(Tok::Colon, "':'");
    Type t = p.type();
    p.expect(Tok::Semi, "';'");
    try {
      env = env.extend(x, t);
    } catch (const Error& e) {
      throw ParseError(e.what(), start.line, start.column);
    }
  }
  return env;
}

inline std::string print_env_file(const TypeEnv& env) {
  std::string out;
  for (const auto& b : env.bindings()) out += b.var.name + " : " + print_type(b.type) + ";\n";
  return out;
}

}  // namespace dsub
