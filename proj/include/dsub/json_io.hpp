#pragma once

// JSON encoding shared by declarative derivations and algorithmic traces:
//   {"rule": NAME, "judgment": {"kind": ..., "env": [[var, type], ...], ...}, "premises": [...]}
// Payload types and terms are written in surface syntax.

#include <string>

#include "json.hpp"

#include "dsub/declarative.hpp"
#include "dsub/environment.hpp"
#include "dsub/errors.hpp"
#include "dsub/judgment.hpp"
#include "dsub/parser.hpp"

namespace dsub {

using json = nlohmann::json;

inline json env_to_json(const TypeEnv& g) {
  json out = json::array();
  for (const auto& b : g.bindings()) out.push_back(json::array({b.var.name, print_type(b.type)}));
  return out;
}

inline json judgment_to_json(const SubJ& j) {
  return {{"kind", "sub"}, {"env", env_to_json(j.env)}, {"lhs", print_type(j.lhs)}, {"rhs", print_type(j.rhs)}};
}
inline json judgment_to_json(const TypJ& j) {
  return {{"kind", "typ"}, {"env", env_to_json(j.env)}, {"term", print_term(j.term)}, {"type", print_type(j.type)}};
}
inline json judgment_to_json(const ExposeJ& j) {
  return {{"kind", "expose"}, {"env", env_to_json(j.env)}, {"from", print_type(j.from)}, {"to", print_type(j.to)}};
}
inline json judgment_to_json(const ShiftJ& j) {
  return {{"kind", j.promote ? "promote" : "demote"},
          {"env", env_to_json(j.env)},
          {"var", j.var.name},
          {"from", print_type(j.from)},
          {"to", print_type(j.to)}};
}
inline json judgment_to_json(const Judgment& j) {
  return std::visit([](const auto& x) { return judgment_to_json(x); }, j);
}
inline json judgment_to_json(const StepJudgment& j) {
  return std::visit([](const auto& x) { return judgment_to_json(x); }, j);
}

inline json tree_to_json(const DerivationTree& d) {
  json ps = json::array();
  for (const auto& p : d.premises) ps.push_back(tree_to_json(p));
  return {{"rule", d.rule_text()}, {"judgment", judgment_to_json(d.conclusion)}, {"premises", std::move(ps)}};
}

inline json trace_to_json(const StepNode& n) {
  json ps = json::array();
  for (const auto& p : n.premises) ps.push_back(trace_to_json(p));
  return {{"rule", rule_name(n.rule)}, {"judgment", judgment_to_json(n.judgment)}, {"premises", std::move(ps)}};
}

namespace detail {

[[noreturn]] inline void json_fail(const std::string& what) {
  throw Error(ErrorKind::Parse, "derivation JSON: " + what);
}

inline const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) json_fail(std::string("missing field '") + name + "'");
  return j.at(name);
}

inline std::string text_field(const json& j, const char* name) {
  const json& v = field(j, name);
  if (!v.is_string()) json_fail(std::string("field '") + name + "' must be a string");
  return v.get<std::string>();
}

inline TypeEnv env_from_json(const json& j) {
  if (!j.is_array()) json_fail("'env' must be an array");
  TypeEnv g;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
      json_fail("environment entries must be [variable, type] pairs");
    try {
      g = g.extend(var(e[0].get<std::string>()), parse_type(e[1].get<std::string>()));
    } catch (const Error& err) {
      json_fail(err.what());
    }
  }
  return g;
}

inline Judgment judgment_from_json(const json& j) {
  std::string kind = text_field(j, "kind");
  TypeEnv g = env_from_json(field(j, "env"));
  try {
    if (kind == "sub") return SubJ{g, parse_type(text_field(j, "lhs")), parse_type(text_field(j, "rhs"))};
    if (kind == "typ") return TypJ{g, parse_term(text_field(j, "term")), parse_type(text_field(j, "type"))};
  } catch (const ParseError& err) {
    json_fail(err.what());
  }
  json_fail("judgment kind must be 'sub' or 'typ', got '" + kind + "'");
}

}  // namespace detail

/// Reads a derivation; unknown rule names are kept (decl_verify rejects them).
inline DerivationTree tree_from_json(const json& j) {
  std::string raw = detail::text_field(j, "rule");
  DerivationTree d{decl_rule_from_name(raw), detail::judgment_from_json(detail::field(j, "judgment")), {}, raw};
  if (j.contains("premises")) {
    const json& ps = j.at("premises");
    if (!ps.is_array()) detail::json_fail("'premises' must be an array");
    for (const auto& p : ps) d.premises.push_back(tree_from_json(p));
  }
  return d;
}

inline DerivationTree tree_from_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    detail::json_fail(e.what());
  }
  return tree_from_json(j);
}

}  // namespace dsub
