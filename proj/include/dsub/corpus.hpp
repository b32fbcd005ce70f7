#pragma once

// Golden-file corpus. Each case carries `//! key: value` header lines:
//   NAME.dsub   term;   //! env: FILE   //! expect: typed TYPE | untypable
//   NAME.sub    S <: T; //! env: FILE   //! expect: true | false
//   NAME.univ   universe file;  //! query: S <: T   //! expect: true | false   (paired in order)
//   NAME.verify //! tree: FILE.json   //! expect: accepted | rejected
// Environment (.env) and derivation (.json) files are support files.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dsub/declarative.hpp"
#include "dsub/dotty_model.hpp"
#include "dsub/environment.hpp"
#include "dsub/errors.hpp"
#include "dsub/json_io.hpp"
#include "dsub/parser.hpp"
#include "dsub/step.hpp"

namespace dsub {

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Header {
  std::string key;
  std::string value;
};

inline std::string trim(std::string s) {
  auto sp = [](unsigned char c) { return std::isspace(c) != 0; };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), sp));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), sp).base(), s.end());
  return s;
}

inline std::vector<Header> read_headers(const std::string& text) {
  std::vector<Header> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.rfind("//!", 0) != 0) continue;
    t = trim(t.substr(3));
    auto colon = t.find(':');
    if (colon == std::string::npos) continue;
    out.push_back({trim(t.substr(0, colon)), trim(t.substr(colon + 1))});
  }
  return out;
}

inline std::vector<std::string> header_values(const std::vector<Header>& hs, const std::string& key) {
  std::vector<std::string> out;
  for (const auto& h : hs)
    if (h.key == key) out.push_back(h.value);
  return out;
}

inline std::string header_value(const std::vector<Header>& hs, const std::string& key) {
  auto v = header_values(hs, key);
  if (v.empty()) throw Error(ErrorKind::Parse, "missing '//! " + key + ":' header");
  return v.front();
}

/// Splits "S <: T" at the first `<:`.
inline std::pair<std::string, std::string> split_sub(const std::string& text) {
  auto at = text.find("<:");
  if (at == std::string::npos) throw Error(ErrorKind::Parse, "expected 'S <: T'");
  return {text.substr(0, at), text.substr(at + 2)};
}

inline std::string strip_comments(const std::string& text) {
  std::string out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto c = line.find("//");
    out += (c == std::string::npos ? line : line.substr(0, c)) + "\n";
  }
  return out;
}

struct CaseResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct CorpusSummary {
  std::vector<CaseResult> cases;
  int passed() const {
    return static_cast<int>(std::count_if(cases.begin(), cases.end(), [](const CaseResult& c) { return c.pass; }));
  }
  int failed() const { return static_cast<int>(cases.size()) - passed(); }
};

namespace detail {

inline TypeEnv case_env(const std::filesystem::path& dir, const std::vector<Header>& hs) {
  auto v = header_values(hs, "env");
  if (v.empty()) return TypeEnv::empty();
  return parse_env(read_file(dir / v.front()));
}

inline CaseResult run_term_case(const std::filesystem::path& file) {
  CaseResult r{file.filename().string(), false, {}};
  std::string text = read_file(file);
  auto hs = read_headers(text);
  TypeEnv g = case_env(file.parent_path(), hs);
  std::string expect = header_value(hs, "expect");
  auto out = step_type(g, parse_term(text));
  std::string got = is_typed(out) ? "typed " + print_type(std::get<Typed>(out).type) : "untypable";
  if (expect == "untypable") {
    r.pass = !is_typed(out);
  } else if (expect.rfind("typed", 0) == 0) {
    Type want = parse_type(expect.substr(5));
    r.pass = is_typed(out) && alpha_eq_type(std::get<Typed>(out).type, want);
  } else {
    throw Error(ErrorKind::Parse, "expect must be 'typed TYPE' or 'untypable'");
  }
  if (!r.pass) r.detail = "expected " + expect + ", got " + got;
  return r;
}

inline bool parse_bool(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw Error(ErrorKind::Parse, "expected 'true' or 'false', got '" + s + "'");
}

inline CaseResult run_sub_case(const std::filesystem::path& file) {
  CaseResult r{file.filename().string(), false, {}};
  std::string text = read_file(file);
  auto hs = read_headers(text);
  TypeEnv g = case_env(file.parent_path(), hs);
  bool expect = parse_bool(header_value(hs, "expect"));
  auto [s, t] = split_sub(strip_comments(text));
  bool got = step_subtype(g, parse_type(s), parse_type(t)).holds;
  r.pass = got == expect;
  if (!r.pass) r.detail = std::string("expected ") + (expect ? "true" : "false") + ", got " + (got ? "true" : "false");
  return r;
}

inline CaseResult run_univ_case(const std::filesystem::path& file) {
  CaseResult r{file.filename().string(), false, {}};
  std::string text = read_file(file);
  auto hs = read_headers(text);
  auto u = scala::parse_universe(text);
  auto qs = header_values(hs, "query");
  auto es = header_values(hs, "expect");
  if (qs.empty() || qs.size() != es.size())
    throw Error(ErrorKind::Parse, "each '//! query:' needs a matching '//! expect:'");
  r.pass = true;
  for (size_t i = 0; i < qs.size(); ++i) {
    auto [a, b] = split_sub(qs[i]);
    bool got = scala::scala_sub(u, scala::parse_stype(a), scala::parse_stype(b)).result;
    bool want = parse_bool(es[i]);
    if (got != want) {
      r.pass = false;
      r.detail += (r.detail.empty() ? "" : "; ") + qs[i] + ": expected " + es[i] + ", got " + (got ? "true" : "false");
    }
  }
  return r;
}

inline CaseResult run_verify_case(const std::filesystem::path& file) {
  CaseResult r{file.filename().string(), false, {}};
  auto hs = read_headers(read_file(file));
  std::string expect = header_value(hs, "expect");
  if (expect != "accepted" && expect != "rejected")
    throw Error(ErrorKind::Parse, "expect must be 'accepted' or 'rejected'");
  auto tree = tree_from_text(read_file(file.parent_path() / header_value(hs, "tree")));
  VerifyResult v = decl_verify(tree);
  r.pass = v.ok == (expect == "accepted");
  if (!r.pass) r.detail = "expected " + expect + ", got " + (v.ok ? "accepted" : "rejected: " + v.message);
  return r;
}

}  // namespace detail

/// Runs every case in `dir` (sorted by name). Throws Io when the directory is
/// missing or holds no cases.
inline CorpusSummary run_corpus(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw Error(ErrorKind::Io, "corpus directory not found: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    auto ext = e.path().extension();
    if (ext == ".dsub" || ext == ".sub" || ext == ".univ" || ext == ".verify") files.push_back(e.path());
  }
  if (files.empty()) throw Error(ErrorKind::Io, "no corpus cases in " + dir.string());
  std::sort(files.begin(), files.end());
  CorpusSummary s;
  for (const auto& f : files) {
    try {
      auto ext = f.extension();
      if (ext == ".dsub")
        s.cases.push_back(detail::run_term_case(f));
      else if (ext == ".sub")
        s.cases.push_back(detail::run_sub_case(f));
      else if (ext == ".univ")
        s.cases.push_back(detail::run_univ_case(f));
      else
        s.cases.push_back(detail::run_verify_case(f));
    } catch (const Error& e) {
      s.cases.push_back({f.filename().string(), false, e.what()});
    }
  }
  return s;
}

}  // namespace dsub
