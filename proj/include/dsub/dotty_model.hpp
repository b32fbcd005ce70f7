#pragma once

// A small model of Scala's bounds-aware, non-transitive subtype check, the
// P_N family that drives it to exponential work, and a call-count benchmark.

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "dsub/errors.hpp"

namespace dsub::scala {

enum class SKind { Base, Fun, Member };

class SType {
 public:
  static SType base(std::string name) { return SType(Node{SKind::Base, std::move(name), nullptr, nullptr}); }
  static SType member(std::string name) { return SType(Node{SKind::Member, std::move(name), nullptr, nullptr}); }
  static SType fun(SType p, SType r) {
    return SType(Node{SKind::Fun, {}, std::move(p.node_), std::move(r.node_)});
  }

  SKind kind() const { return node_->kind; }
  const std::string& name() const { return node_->name; }
  SType param() const { return SType(node_->param); }
  SType result() const { return SType(node_->result); }

 private:
  struct Node {
    SKind kind;
    std::string name;
    std::shared_ptr<const Node> param, result;
  };
  explicit SType(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}
  explicit SType(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

inline bool operator==(const SType& a, const SType& b) {
  if (a.kind() != b.kind()) return false;
  if (a.kind() == SKind::Fun) return a.param() == b.param() && a.result() == b.result();
  return a.name() == b.name();
}

inline std::string print(const SType& t) {
  switch (t.kind()) {
    case SKind::Base: return t.name();
    case SKind::Member: return "#" + t.name();
    case SKind::Fun: {
      std::string p = print(t.param());
      if (t.param().kind() == SKind::Fun) p = "(" + p + ")";
      return p + " -> " + print(t.result());
    }
  }
  return "?";
}

struct MemberBounds {
  std::optional<SType> lower;
  std::optional<SType> upper;
};

class BoundsUniverse {
 public:
  void add_member(const std::string& name, std::optional<SType> lower, std::optional<SType> upper) {
    if (!members_.emplace(name, MemberBounds{std::move(lower), std::move(upper)}).second)
      throw Error(ErrorKind::Parse, "member '" + name + "' declared twice");
    order_.push_back(name);
  }
  const MemberBounds* find(const std::string& name) const {
    auto it = members_.find(name);
    return it == members_.end() ? nullptr : &it->second;
  }
  const std::vector<std::string>& names() const { return order_; }

 private:
  std::map<std::string, MemberBounds> members_;
  std::vector<std::string> order_;
};

struct SubStats {
  bool result = false;
  std::uint64_t calls = 0;
  int max_depth = 0;
};

struct ScalaConfig {
  int max_depth = 10000;
};

namespace detail {

// Pointer-linked form with member references resolved up front.
struct CNode {
  SKind kind;
  int id;  // base name id or member index
  const CNode* param = nullptr;
  const CNode* result = nullptr;
};

class Compiled {
 public:
  explicit Compiled(const BoundsUniverse& u) {
    for (size_t i = 0; i < u.names().size(); ++i) member_ids_[u.names()[i]] = static_cast<int>(i);
    lower_.assign(u.names().size(), nullptr);
    upper_.assign(u.names().size(), nullptr);
    for (size_t i = 0; i < u.names().size(); ++i) {
      const MemberBounds* b = u.find(u.names()[i]);
      if (b->lower) lower_[i] = compile(*b->lower);
      if (b->upper) upper_[i] = compile(*b->upper);
    }
  }

  const CNode* compile(const SType& t) {
    auto n = std::make_unique<CNode>();
    n->kind = t.kind();
    switch (t.kind()) {
      case SKind::Base: {
        auto it = base_ids_.emplace(t.name(), static_cast<int>(base_ids_.size())).first;
        n->id = it->second;
        break;
      }
      case SKind::Member: {
        auto it = member_ids_.find(t.name());
        if (it == member_ids_.end()) throw Error(ErrorKind::UnknownMember, "unknown member '" + t.name() + "'");
        n->id = it->second;
        break;
      }
      case SKind::Fun:
        n->id = -1;
        n->param = compile(t.param());
        n->result = compile(t.result());
        break;
    }
    nodes_.push_back(std::move(n));
    return nodes_.back().get();
  }

  const CNode* lower(int m) const { return lower_[static_cast<size_t>(m)]; }
  const CNode* upper(int m) const { return upper_[static_cast<size_t>(m)]; }

 private:
  std::map<std::string, int> member_ids_;
  std::map<std::string, int> base_ids_;
  std::vector<const CNode*> lower_, upper_;
  std::vector<std::unique_ptr<CNode>> nodes_;
};

class Checker {
 public:
  Checker(const Compiled& c, const ScalaConfig& cfg) : c_(c), cfg_(cfg) {}

  bool sub(const CNode* t1, const CNode* t2, int depth) {
    ++stats.calls;
    if (depth > stats.max_depth) stats.max_depth = depth;
    if (depth > cfg_.max_depth)
      throw Error(ErrorKind::InternalLimit,
                  "subtype check exceeded depth " + std::to_string(cfg_.max_depth) + " (cyclic bounds?)");
    bool f = false;
    if (t2->kind == SKind::Member)
      if (const CNode* l2 = c_.lower(t2->id)) f = sub(t1, l2, depth + 1);
    f = f || structural(t1, t2, depth);
    if (f) return true;
    if (t1->kind == SKind::Member)
      if (const CNode* u1 = c_.upper(t1->id)) return sub(u1, t2, depth + 1);
    return false;
  }

  SubStats stats;

 private:
  bool structural(const CNode* t1, const CNode* t2, int depth) {
    if (t1->kind != t2->kind) return false;
    switch (t1->kind) {
      case SKind::Base:
      case SKind::Member:
        return t1->id == t2->id;
      case SKind::Fun:
        return sub(t2->param, t1->param, depth + 1) && sub(t1->result, t2->result, depth + 1);
    }
    return false;
  }

  const Compiled& c_;
  const ScalaConfig& cfg_;
};

}  // namespace detail

/// Bounds-aware check: t2's lower bound first, then structure, then t1's
/// upper bound. No transitivity. `calls` counts every entry.
inline SubStats scala_sub(const BoundsUniverse& u, const SType& t1, const SType& t2, const ScalaConfig& cfg = {}) {
  detail::Compiled c(u);
  const detail::CNode* a = c.compile(t1);
  const detail::CNode* b = c.compile(t2);
  detail::Checker k(c, cfg);
  k.stats.result = k.sub(a, b, 1);
  return k.stats;
}

// ---------------------------------------------------------------------------
// P_N

struct PnInstance {
  BoundsUniverse universe;
  SType lhs;
  SType rhs;
};

inline std::string pn_member(int i) { return "T" + std::to_string(i); }

/// T1 <: T2 <: ... <: TN (TN unbounded) and T2N >: ... >: TN+1 (TN+1
/// unbounded); the query is T1 <: T2N.
inline PnInstance make_pn(int n) {
  if (n < 1) throw Error(ErrorKind::Parse, "P_N needs N >= 1");
  BoundsUniverse u;
  for (int i = 1; i <= n; ++i)
    u.add_member(pn_member(i), std::nullopt,
                 i < n ? std::optional<SType>(SType::member(pn_member(i + 1))) : std::nullopt);
  for (int j = n + 1; j <= 2 * n; ++j)
    u.add_member(pn_member(j), j > n + 1 ? std::optional<SType>(SType::member(pn_member(j - 1))) : std::nullopt,
                 std::nullopt);
  return PnInstance{std::move(u), SType::member(pn_member(1)), SType::member(pn_member(2 * n))};
}

enum class BenchMetric { Calls, Nanos };

struct BenchRow {
  int n;
  std::uint64_t value;
};

inline std::vector<BenchRow> bench_pn(int min_n, int max_n, BenchMetric metric) {
  if (min_n < 1 || max_n < min_n) throw Error(ErrorKind::Parse, "bench range needs 1 <= min <= max");
  std::vector<BenchRow> rows;
  for (int n = min_n; n <= max_n; ++n) {
    PnInstance p = make_pn(n);
    auto t0 = std::chrono::steady_clock::now();
    SubStats s = scala_sub(p.universe, p.lhs, p.rhs);
    auto t1 = std::chrono::steady_clock::now();
    std::uint64_t v = metric == BenchMetric::Calls
                          ? s.calls
                          : static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
    rows.push_back({n, v});
  }
  return rows;
}

inline void write_csv(std::ostream& os, const std::vector<BenchRow>& rows, BenchMetric metric) {
  os << "N," << (metric == BenchMetric::Calls ? "calls" : "nanos") << "\n";
  for (const auto& r : rows) os << r.n << "," << r.value << "\n";
}

// ---------------------------------------------------------------------------
// Universe files
//
//   member NAME [lower TYPE] [upper TYPE]
//   TYPE ::= NAME | #NAME | TYPE -> TYPE | ( TYPE )      (-> is right-associative)
//
// `//` starts a comment.

namespace detail {

class SParser {
 public:
  explicit SParser(std::string_view src, int line = 1) : src_(src), line_(line) {}

  bool at_end() {
    skip();
    return pos_ >= src_.size();
  }

  bool at_word(std::string_view w) {
    skip();
    size_t save = pos_;
    bool ok = src_.substr(pos_, w.size()) == w &&
              (pos_ + w.size() >= src_.size() || !ident_char(src_[pos_ + w.size()]));
    pos_ = save;
    return ok;
  }

  void word(std::string_view w) {
    if (!at_word(w)) fail("expected '" + std::string(w) + "'");
    pos_ += w.size();
  }

  std::string name() {
    skip();
    size_t start = pos_;
    while (pos_ < src_.size() && ident_char(src_[pos_])) ++pos_;
    if (start == pos_) fail("expected a name");
    return std::string(src_.substr(start, pos_ - start));
  }

  SType type() {
    SType left = atom();
    skip();
    if (src_.substr(pos_, 2) == "->") {
      pos_ += 2;
      return SType::fun(left, type());
    }
    return left;
  }

  [[noreturn]] void fail(const std::string& m) const {
    throw ParseError(m, line_, static_cast<int>(pos_) + 1);
  }

 private:
  static bool ident_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
  }

  void skip() {
    while (pos_ < src_.size()) {
      if (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\r' || src_[pos_] == '\n') {
        ++pos_;
      } else if (src_.substr(pos_, 2) == "//") {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  SType atom() {
    skip();
    if (pos_ < src_.size() && src_[pos_] == '(') {
      ++pos_;
      SType t = type();
      skip();
      if (pos_ >= src_.size() || src_[pos_] != ')') fail("expected ')'");
      ++pos_;
      return t;
    }
    if (pos_ < src_.size() && src_[pos_] == '#') {
      ++pos_;
      return SType::member(name());
    }
    return SType::base(name());
  }

  std::string_view src_;
  size_t pos_ = 0;
  int line_;
};

}  // namespace detail

inline SType parse_stype(std::string_view text) {
  detail::SParser p(text);
  SType t = p.type();
  if (!p.at_end()) p.fail("trailing input");
  return t;
}

inline BoundsUniverse parse_universe(std::string_view text) {
  BoundsUniverse u;
  int line = 0;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line;
    detail::SParser p(text.substr(start, end - start), line);
    if (!p.at_end()) {
      p.word("member");
      std::string name = p.name();
      std::optional<SType> lo, hi;
      if (p.at_word("lower")) {
        p.word("lower");
        lo = p.type();
      }
      if (p.at_word("upper")) {
        p.word("upper");
        hi = p.type();
      }
      if (!p.at_end()) p.fail("expected 'lower', 'upper' or end of line");
      try {
        u.add_member(name, lo, hi);
      } catch (const Error& e) {
        throw ParseError(e.what(), line, 1);
      }
    }
    start = end + 1;
  }
  return u;
}

/// Checks every member reference in the universe and in `extra`.
inline void resolve_all(const BoundsUniverse& u, const std::vector<SType>& extra = {}) {
  detail::Compiled c(u);
  for (const auto& t : extra) c.compile(t);
}

// ---------------------------------------------------------------------------
// The listings

/// type E >: Int => Int <: Int => String
inline BoundsUniverse bad_bounds_universe() {
  BoundsUniverse u;
  SType ii = SType::fun(SType::base("Int"), SType::base("Int"));
  SType is = SType::fun(SType::base("Int"), SType::base("String"));
  u.add_member("E", ii, is);
  return u;
}

}  // namespace dsub::scala
