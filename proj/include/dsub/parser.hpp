#pragma once

// Surface syntax:
//
//   type ::= "Top" | "Bot"
//          | "{" LABEL ":" type ".." type "}"
//          | IDENT "." LABEL
//          | "all" "(" IDENT ":" type ")" type
//   term ::= IDENT
//          | "{" LABEL "=" type "}"
//          | "lam" "(" IDENT ":" type ")" term
//          | IDENT IDENT
//          | "let" IDENT "=" term "in" term
//
// Whitespace-insensitive, `//` starts a line comment.

#include <cctype>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dsub/errors.hpp"
#include "dsub/syntax.hpp"

namespace dsub {

enum class Tok {
  Ident,
  Label,
  LBrace,
  RBrace,
  LParen,
  RParen,
  Colon,
  Semi,
  Eq,
  Dot,
  DotDot,
  Sub,    // <:
  Arrow,  // ->
  Hash,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

inline bool is_keyword(std::string_view s) {
  return s == "all" || s == "lam" || s == "let" || s == "in" || s == "Top" || s == "Bot";
}

inline bool is_ident(std::string_view s) {
  if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return !is_keyword(s);
}

inline bool is_label(std::string_view s) {
  if (s.empty() || !std::isupper(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return !is_keyword(s);
}

inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    int l = line, cl = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      std::string word(src.substr(i, j - i));
      Tok k = std::isupper(static_cast<unsigned char>(c)) ? Tok::Label : Tok::Ident;
      if (c == '_') throw ParseError("identifier may not start with '_'", l, cl);
      out.push_back({k, std::move(word), l, cl});
      advance(j - i);
      continue;
    }
    auto two = src.substr(i, 2);
    if (two == "..") {
      out.push_back({Tok::DotDot, "..", l, cl});
      advance(2);
      continue;
    }
    if (two == "<:") {
      out.push_back({Tok::Sub, "<:", l, cl});
      advance(2);
      continue;
    }
    if (two == "->") {
      out.push_back({Tok::Arrow, "->", l, cl});
      advance(2);
      continue;
    }
    Tok k;
    switch (c) {
      case '{': k = Tok::LBrace; break;
      case '}': k = Tok::RBrace; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case ':': k = Tok::Colon; break;
      case ';': k = Tok::Semi; break;
      case '=': k = Tok::Eq; break;
      case '.': k = Tok::Dot; break;
      case '#': k = Tok::Hash; break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", l, cl);
    }
    out.push_back({k, std::string(1, c), l, cl});
    advance(1);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

/// Recursive-descent parser over a token stream. Exposed so that file
/// formats built on the type grammar (environments, subtyping queries) can
/// share it.
class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(tokenize(src)) {}

  const Token& peek(size_t ahead = 0) const {
    size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_word(std::string_view w) const {
    return (at(Tok::Ident) || at(Tok::Label)) && peek().text == w;
  }
  bool at_end() const { return at(Tok::End); }

  Token expect(Tok k, const char* what) {
    if (!at(k)) fail(std::string("expected ") + what);
    return toks_[pos_++];
  }
  void expect_word(std::string_view w) {
    if (!at_word(w)) fail("expected '" + std::string(w) + "'");
    ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(msg + ", found " + found, t.line, t.column);
  }

  VarName ident() {
    if (!at(Tok::Ident) || is_keyword(peek().text)) fail("expected identifier");
    return VarName{toks_[pos_++].text};
  }

  TypeLabel type_label() {
    if (!at(Tok::Label) || is_keyword(peek().text)) fail("expected type label");
    return TypeLabel{toks_[pos_++].text};
  }

  Type type() {
    if (at_word("Top")) {
      ++pos_;
      return Type::top();
    }
    if (at_word("Bot")) {
      ++pos_;
      return Type::bot();
    }
    if (at(Tok::LBrace)) {
      ++pos_;
      TypeLabel l = type_label();
      expect(Tok::Colon, "':'");
      Type lo = type();
      expect(Tok::DotDot, "'..'");
      Type hi = type();
      expect(Tok::RBrace, "'}'");
      return Type::decl(std::move(l), std::move(lo), std::move(hi));
    }
    if (at_word("all")) {
      ++pos_;
      expect(Tok::LParen, "'('");
      VarName x = ident();
      expect(Tok::Colon, "':'");
      Type s = type();
      expect(Tok::RParen, "')'");
      Type t = type();
      return Type::all(std::move(x), std::move(s), std::move(t));
    }
    if (at(Tok::Ident)) {
      VarName x = ident();
      expect(Tok::Dot, "'.'");
      TypeLabel l = type_label();
      return Type::path(std::move(x), std::move(l));
    }
    fail("expected type");
  }

  Term term() {
    if (at(Tok::LBrace)) {
      ++pos_;
      TypeLabel l = type_label();
      expect(Tok::Eq, "'='");
      Type t = type();
      expect(Tok::RBrace, "'}'");
      return Term::tag(std::move(l), std::move(t));
    }
    if (at_word("lam")) {
      ++pos_;
      expect(Tok::LParen, "'('");
      VarName x = ident();
      expect(Tok::Colon, "':'");
      Type s = type();
      expect(Tok::RParen, "')'");
      Term body = term();
      return Term::lam(std::move(x), std::move(s), std::move(body));
    }
    if (at_word("let")) {
      ++pos_;
      VarName x = ident();
      expect(Tok::Eq, "'='");
      Term rhs = term();
      expect_word("in");
      Term body = term();
      return Term::let(std::move(x), std::move(rhs), std::move(body));
    }
    if (at(Tok::Ident)) {
      VarName f = ident();
      if (at(Tok::Ident) && !is_keyword(peek().text)) {
        VarName a = ident();
        return Term::app(std::move(f), std::move(a));
      }
      return Term::var(std::move(f));
    }
    fail("expected term");
  }

  void finish() {
    if (!at_end()) fail("unexpected trailing input");
  }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;
};

inline Type parse_type(std::string_view text) {
  Parser p(text);
  Type t = p.type();
  p.finish();
  return t;
}

inline Term parse_term(std::string_view text) {
  Parser p(text);
  Term t = p.term();
  p.finish();
  return t;
}

// ---------------------------------------------------------------------------
// Printing

inline void print_type_to(const Type& t, std::string& out) {
  switch (t.kind()) {
    case TypeKind::Top:
      out += "Top";
      return;
    case TypeKind::Bot:
      out += "Bot";
      return;
    case TypeKind::Decl: {
      const auto& d = as_decl(t);
      out += "{";
      out += d.label.name;
      out += ": ";
      print_type_to(d.lower, out);
      out += " .. ";
      print_type_to(d.upper, out);
      out += "}";
      return;
    }
    case TypeKind::Path:
      out += as_path(t).var.name;
      out += ".";
      out += as_path(t).label.name;
      return;
    case TypeKind::All: {
      const auto& a = as_all(t);
      out += "all(";
      out += a.param.name;
      out += ": ";
      print_type_to(a.param_type, out);
      out += ") ";
      print_type_to(a.result, out);
      return;
    }
  }
}

inline std::string print_type(const Type& t) {
  std::string s;
  print_type_to(t, s);
  return s;
}

inline void print_term_to(const Term& t, std::string& out) {
  switch (t.kind()) {
    case TermKind::Var:
      out += as_var(t).name.name;
      return;
    case TermKind::Tag:
      out += "{";
      out += as_tag(t).label.name;
      out += " = ";
      print_type_to(as_tag(t).alias, out);
      out += "}";
      return;
    case TermKind::Lam: {
      const auto& l = as_lam(t);
      out += "lam(";
      out += l.param.name;
      out += ": ";
      print_type_to(l.param_type, out);
      out += ") ";
      print_term_to(l.body, out);
      return;
    }
    case TermKind::App:
      out += as_app(t).fun.name;
      out += " ";
      out += as_app(t).arg.name;
      return;
    case TermKind::Let: {
      const auto& l = as_let(t);
      out += "let ";
      out += l.bound.name;
      out += " = ";
      print_term_to(l.rhs, out);
      out += " in ";
      print_term_to(l.body, out);
      return;
    }
  }
}

inline std::string print_term(const Term& t) {
  std::string s;
  print_term_to(t, s);
  return s;
}

}  // namespace dsub
