#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dsub/environment.hpp"
#include "dsub/parser.hpp"
#include "dsub/syntax.hpp"

namespace dsub {

/// Γ ⊢ lhs <: rhs
struct SubJ {
  TypeEnv env;
  Type lhs;
  Type rhs;
};

/// Γ ⊢ term : type
struct TypJ {
  TypeEnv env;
  Term term;
  Type type;
};

/// Γ ⊢ from ⇑ to
struct ExposeJ {
  TypeEnv env;
  Type from;
  Type to;
};

/// Γ ⊢ from ⇑x to (promote) or Γ ⊢ from ⇓x to (demote)
struct ShiftJ {
  TypeEnv env;
  VarName var;
  Type from;
  Type to;
  bool promote;
};

using Judgment = std::variant<SubJ, TypJ>;
using StepJudgment = std::variant<TypJ, SubJ, ExposeJ, ShiftJ>;

inline const TypeEnv& env_of(const Judgment& j) {
  return std::visit([](const auto& x) -> const TypeEnv& { return x.env; }, j);
}

inline std::string render(const SubJ& j) {
  return print_env(j.env) + " |- " + print_type(j.lhs) + " <: " + print_type(j.rhs);
}
inline std::string render(const TypJ& j) {
  return print_env(j.env) + " |- " + print_term(j.term) + " : " + print_type(j.type);
}
inline std::string render(const ExposeJ& j) {
  return print_env(j.env) + " |- " + print_type(j.from) + " up " + print_type(j.to);
}
inline std::string render(const ShiftJ& j) {
  return print_env(j.env) + " |- " + print_type(j.from) + (j.promote ? " up[" : " down[") + j.var.name + "] " +
         print_type(j.to);
}
inline std::string render(const Judgment& j) {
  return std::visit([](const auto& x) { return render(x); }, j);
}
inline std::string render(const StepJudgment& j) {
  return std::visit([](const auto& x) { return render(x); }, j);
}

// ---------------------------------------------------------------------------
// Algorithmic trace

enum class StepRule {
  // typing
  TVar,
  TAllI,
  TTypI,
  TAllE,
  TAppBot,
  TLet,
  // subtyping
  SBot,
  STop,
  STypTyp,
  SRefl,
  SPathLeft,      // S-<:-Sel: x.A <: U via the upper bound
  SPathRight,     // S-Sel-<:: U <: x.A via the lower bound
  SBotRight,      // S-Bot-<:: U <: x.A, head exposes to Bot
  SBotLeft,       // S-<:-Bot: x.A <: U, head exposes to Bot
  SAllAll,
  // exposure
  XBot,
  XPath,
  XOther,
  // promotion
  PUp,
  PUpBot,
  PLam,
  PVar,
  PBot,
  PTop,
  PDecl,
  PCap,
  // demotion
  DDown,
  DDownBot,
  DLam,
  DVar,
  DBot,
  DTop,
  DDecl,
  DCap,
};

inline const char* rule_name(StepRule r) {
  switch (r) {
    case StepRule::TVar: return "T-Var";
    case StepRule::TAllI: return "T-All-I";
    case StepRule::TTypI: return "T-Typ-I";
    case StepRule::TAllE: return "T-All-E";
    case StepRule::TAppBot: return "T-App-Bot";
    case StepRule::TLet: return "T-Let";
    case StepRule::SBot: return "S-Bot";
    case StepRule::STop: return "S-Top";
    case StepRule::STypTyp: return "S-Typ-<:-Typ";
    case StepRule::SRefl: return "S-Refl";
    case StepRule::SPathLeft: return "S-<:-Sel";
    case StepRule::SPathRight: return "S-Sel-<:";
    case StepRule::SBotRight: return "S-Bot-<:";
    case StepRule::SBotLeft: return "S-<:-Bot";
    case StepRule::SAllAll: return "S-All-<:-All";
    case StepRule::XBot: return "X-Bot";
    case StepRule::XPath: return "X-Path";
    case StepRule::XOther: return "X-Other";
    case StepRule::PUp: return "P-Up";
    case StepRule::PUpBot: return "P-Up-Bot";
    case StepRule::PLam: return "P-Lam";
    case StepRule::PVar: return "P-Var";
    case StepRule::PBot: return "P-Bot";
    case StepRule::PTop: return "P-Top";
    case StepRule::PDecl: return "P-Decl";
    case StepRule::PCap: return "P-Cap";
    case StepRule::DDown: return "D-Down";
    case StepRule::DDownBot: return "D-Down-Bot";
    case StepRule::DLam: return "D-Lam";
    case StepRule::DVar: return "D-Var";
    case StepRule::DBot: return "D-Bot";
    case StepRule::DTop: return "D-Top";
    case StepRule::DDecl: return "D-Decl";
    case StepRule::DCap: return "D-Cap";
  }
  return "?";
}

inline std::optional<StepRule> step_rule_from_name(const std::string& s) {
  for (int i = 0; i <= static_cast<int>(StepRule::DCap); ++i) {
    auto r = static_cast<StepRule>(i);
    if (s == rule_name(r)) return r;
  }
  return std::nullopt;
}

/// One node of an algorithmic derivation. Premise order is fixed per rule:
///   T-All-I   [body]
///   T-All-E   [fun typing, fun exposure, arg typing, arg <: param]
///   T-App-Bot [fun typing, fun exposure, arg typing]
///   T-Let     [rhs typing, body typing, promotion of the body type]
///   S-Typ     [lower bounds (contravariant), upper bounds]
///   S-All     [results under the extended environment]
///   S-Sel     [head exposure, bound comparison]
///   S-Bot-*   [head exposure]
///   X-Bot     [head exposure]
///   X-Path    [head exposure, upper bound exposure]
///   P-Up/D-Down and the -Bot variants [head exposure]
///   P-Lam     [demote param, promote result]  D-Lam [promote param, demote result]
///   P-Decl    [demote lower, promote upper]   D-Decl [promote lower, demote upper]
struct StepNode {
  StepRule rule;
  StepJudgment judgment;
  std::vector<StepNode> premises;
};

using StepTrace = StepNode;

inline std::string render_trace(const StepNode& n, int indent = 0) {
  std::string out(static_cast<size_t>(indent) * 2, ' ');
  out += "[";
  out += rule_name(n.rule);
  out += "] ";
  out += render(n.judgment);
  out += "\n";
  for (const auto& p : n.premises) out += render_trace(p, indent + 1);
  return out;
}

}  // namespace dsub
