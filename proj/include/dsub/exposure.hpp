#pragma once

// Exposure: Γ ⊢ T ⇑ T′ computed as a deterministic partial function that
// strips path-dependent heads by climbing declaration upper bounds.

#include <string>
#include <variant>
#include <vector>

#include "dsub/environment.hpp"
#include "dsub/errors.hpp"
#include "dsub/judgment.hpp"
#include "dsub/syntax.hpp"

namespace dsub {

/// Recursion limits and runtime-instrumentation switches shared by the
/// algorithmic relations.
struct AlgoConfig {
  int max_depth = 10000;
  bool check_measure = true;
};

/// Call-local instrumentation counters.
struct AlgoStats {
  long calls = 0;
  long measure_violations = 0;
  long size_violations = 0;
  int max_depth = 0;
  std::vector<std::string> notes;

  void note(std::string s) {
    if (notes.size() < 16) notes.push_back(std::move(s));
  }
};

struct AlgoContext {
  AlgoConfig config;
  AlgoStats stats;
  int depth = 0;

  // Scoped depth counter; throws InternalLimit past the configured bound.
  struct Frame {
    AlgoContext& ctx;
    explicit Frame(AlgoContext& c) : ctx(c) {
      ++ctx.stats.calls;
      if (++ctx.depth > ctx.config.max_depth)
        throw Error(ErrorKind::InternalLimit, "recursion depth limit " + std::to_string(ctx.config.max_depth) +
                                                  " exceeded");
      if (ctx.depth > ctx.stats.max_depth) ctx.stats.max_depth = ctx.depth;
    }
    ~Frame() { --ctx.depth; }
    Frame(const Frame&) = delete;
    Frame& operator=(const Frame&) = delete;
  };
};

struct Exposed {
  Type type;
};

/// No exposure rule applies: the head of `path` exposes to `blocker`, which
/// is neither Bot nor a declaration of the selected label.
struct Stuck {
  Type path;
  Type blocker;
};

using ExposureResult = std::variant<Exposed, Stuck>;

inline bool is_exposed(const ExposureResult& r) { return std::holds_alternative<Exposed>(r); }
inline const Type& exposed_type(const ExposureResult& r) { return std::get<Exposed>(r).type; }

namespace detail {

inline ExposureResult expose_impl(const TypeEnv& g, const Type& t, AlgoContext& ctx, StepNode* trace,
                                  bool cross_check);

inline ExposureResult expose_path(const TypeEnv& g, const Type& t, AlgoContext& ctx, StepNode* trace,
                                  bool cross_check) {
  const auto& p = as_path(t);
  auto head = g.lookup(p.var);
  if (!head) throw Error(ErrorKind::UnboundVariable, "variable '" + p.var.name + "' is not bound");

  StepNode head_trace{StepRule::XOther, ExposeJ{g, *head, *head}, {}};
  ExposureResult hr = expose_impl(g, *head, ctx, trace ? &head_trace : nullptr, cross_check);

#ifndef NDEBUG
  if (cross_check) {
    // The head's type only mentions earlier variables, so the strict prefix
    // must give the same answer.
    auto prefix = g.prefix_before(p.var);
    AlgoContext side;
    side.config = ctx.config;
    ExposureResult pr = expose_impl(*prefix, *head, side, nullptr, false);
    bool same = is_exposed(hr) == is_exposed(pr) &&
                (!is_exposed(hr) || alpha_eq_type(exposed_type(hr), exposed_type(pr)));
    assert(same && "exposure in prefix and full environment disagree");
    (void)same;
  }
#endif

  if (!is_exposed(hr)) return hr;
  const Type& ht = exposed_type(hr);
  if (ht.is_bot()) {
    if (trace) *trace = StepNode{StepRule::XBot, ExposeJ{g, t, Type::bot()}, {std::move(head_trace)}};
    return Exposed{Type::bot()};
  }
  if (ht.is_decl() && as_decl(ht).label == p.label) {
    const Type& upper = as_decl(ht).upper;
    StepNode upper_trace{StepRule::XOther, ExposeJ{g, upper, upper}, {}};
    ExposureResult ur = expose_impl(g, upper, ctx, trace ? &upper_trace : nullptr, cross_check);
    if (!is_exposed(ur)) return ur;
    if (trace)
      *trace = StepNode{StepRule::XPath, ExposeJ{g, t, exposed_type(ur)},
                        {std::move(head_trace), std::move(upper_trace)}};
    return ur;
  }
  return Stuck{t, ht};
}

inline ExposureResult expose_impl(const TypeEnv& g, const Type& t, AlgoContext& ctx, StepNode* trace,
                                  bool cross_check) {
  AlgoContext::Frame frame(ctx);
  if (!t.is_path()) {
    if (trace) *trace = StepNode{StepRule::XOther, ExposeJ{g, t, t}, {}};
    return Exposed{t};
  }
  return expose_path(g, t, ctx, trace, cross_check);
}

}  // namespace detail

/// Exposure with an optional trace (filled only on an Exposed result).
inline ExposureResult expose(const TypeEnv& g, const Type& t, AlgoContext& ctx, StepNode* trace = nullptr) {
  return detail::expose_impl(g, t, ctx, trace, true);
}

inline ExposureResult expose(const TypeEnv& g, const Type& t) {
  AlgoContext ctx;
  return expose(g, t, ctx);
}

/// Exposure of the type bound to `x` (the shared premise "Γ(x) = T, Γ ⊢ T ⇑ ...").
inline ExposureResult expose_head(const TypeEnv& g, const VarName& x, AlgoContext& ctx, StepNode* trace = nullptr) {
  auto head = g.lookup(x);
  if (!head) throw Error(ErrorKind::UnboundVariable, "variable '" + x.name + "' is not bound");
  return expose(g, *head, ctx, trace);
}

inline std::string describe(const ExposureResult& r) {
  if (is_exposed(r)) return print_type(exposed_type(r));
  const auto& s = std::get<Stuck>(r);
  return "stuck: " + print_type(s.blocker);
}

}  // namespace dsub
