#pragma once

// Promotion (Γ ⊢ T ⇑x T′) and demotion (Γ ⊢ T ⇓x T′): mutually recursive
// erasure of a variable from a type, moving up (resp. down) in subtyping.

#include <climits>
#include <string>
#include <variant>

#include "dsub/environment.hpp"
#include "dsub/exposure.hpp"
#include "dsub/judgment.hpp"
#include "dsub/syntax.hpp"

namespace dsub {

struct Shifted {
  Type type;
};

struct ShiftStuck {
  std::string reason;
};

using ShiftResult = std::variant<Shifted, ShiftStuck>;

enum class ShiftDirection { Promote, Demote };

inline bool is_shifted(const ShiftResult& r) { return std::holds_alternative<Shifted>(r); }
inline const Type& shifted_type(const ShiftResult& r) { return std::get<Shifted>(r).type; }

namespace detail {

inline ShiftResult shift_impl(const TypeEnv& g, const Type& t, const VarName& x, bool up, AlgoContext& ctx,
                              StepNode* trace, int parent_size) {
  AlgoContext::Frame frame(ctx);
  if (ctx.config.check_measure) {
    int sz = type_size(t);
    if (sz >= parent_size) {
      ++ctx.stats.size_violations;
      ctx.stats.note("shift size did not decrease at " + print_type(t));
    }
  }
  const int size = type_size(t);
  auto judge = [&](const Type& out) { return ShiftJ{g, x, t, out, up}; };
  auto leaf = [&](StepRule r) -> ShiftResult {
    if (trace) *trace = StepNode{r, judge(t), {}};
    return Shifted{t};
  };

  switch (t.kind()) {
    case TypeKind::Top:
      return leaf(up ? StepRule::PTop : StepRule::DTop);
    case TypeKind::Bot:
      return leaf(up ? StepRule::PBot : StepRule::DBot);
    case TypeKind::Path: {
      const auto& p = as_path(t);
      if (p.var != x) return leaf(up ? StepRule::PVar : StepRule::DVar);
      StepNode head_trace{StepRule::XOther, ExposeJ{g, t, t}, {}};
      ExposureResult hr = expose_head(g, x, ctx, trace ? &head_trace : nullptr);
      if (!is_exposed(hr))
        return ShiftStuck{"exposure of the type of '" + x.name + "' is stuck at " +
                          print_type(std::get<Stuck>(hr).blocker)};
      const Type& ht = exposed_type(hr);
      if (ht.is_bot()) {
        Type out = up ? Type::bot() : Type::top();
        if (trace) *trace = StepNode{up ? StepRule::PUpBot : StepRule::DDownBot, judge(out), {std::move(head_trace)}};
        return Shifted{out};
      }
      if (ht.is_decl() && as_decl(ht).label == p.label) {
        Type out = up ? as_decl(ht).upper : as_decl(ht).lower;
        if (trace) *trace = StepNode{up ? StepRule::PUp : StepRule::DDown, judge(out), {std::move(head_trace)}};
        return Shifted{out};
      }
      return ShiftStuck{"type of '" + x.name + "' exposes to " + print_type(ht) + ", which declares no member " +
                        p.label.name};
    }
    case TypeKind::Decl: {
      const auto& d = as_decl(t);
      StepNode lt{StepRule::PTop, judge(t), {}}, ut{StepRule::PTop, judge(t), {}};
      ShiftResult lr = shift_impl(g, d.lower, x, !up, ctx, trace ? &lt : nullptr, size);
      if (!is_shifted(lr)) return lr;
      ShiftResult ur = shift_impl(g, d.upper, x, up, ctx, trace ? &ut : nullptr, size);
      if (!is_shifted(ur)) return ur;
      Type out = Type::decl(d.label, shifted_type(lr), shifted_type(ur));
      if (trace) *trace = StepNode{up ? StepRule::PDecl : StepRule::DDecl, judge(out), {std::move(lt), std::move(ut)}};
      return Shifted{out};
    }
    case TypeKind::All: {
      const auto& a = as_all(t);
      if (a.param == x) return leaf(up ? StepRule::PCap : StepRule::DCap);
      StepNode pt{StepRule::PTop, judge(t), {}}, rt{StepRule::PTop, judge(t), {}};
      ShiftResult pr = shift_impl(g, a.param_type, x, !up, ctx, trace ? &pt : nullptr, size);
      if (!is_shifted(pr)) return pr;
      VarSet avoid = fv_type(a.result);
      avoid.erase(a.param);
      VarName z = binder_for(g, a.param, avoid);
      Type body = subst_var_in_type(a.result, a.param, z);
      // Promotion continues under the demoted parameter, demotion under the
      // original one.
      TypeEnv inner = g.extend(z, up ? shifted_type(pr) : a.param_type);
      ShiftResult br = shift_impl(inner, body, x, up, ctx, trace ? &rt : nullptr, size);
      if (!is_shifted(br)) return br;
      Type out = Type::all(z, shifted_type(pr), shifted_type(br));
      if (trace) *trace = StepNode{up ? StepRule::PLam : StepRule::DLam, judge(out), {std::move(pt), std::move(rt)}};
      return Shifted{out};
    }
  }
  return ShiftStuck{"unreachable"};
}

inline void require_shift_scope(const TypeEnv& g, const Type& t, const VarName& x) {
  if (!g.contains(x)) throw Error(ErrorKind::UnboundVariable, "variable '" + x.name + "' is not bound");
  for (const auto& y : fv_type(t))
    if (!g.contains(y)) throw Error(ErrorKind::UnboundVariable, "variable '" + y.name + "' is not bound");
}

}  // namespace detail

inline ShiftResult shift(const TypeEnv& g, const Type& t, const VarName& x, ShiftDirection dir, AlgoContext& ctx,
                         StepNode* trace = nullptr) {
  detail::require_shift_scope(g, t, x);
  return detail::shift_impl(g, t, x, dir == ShiftDirection::Promote, ctx, trace, INT_MAX);
}

inline ShiftResult promote(const TypeEnv& g, const Type& t, const VarName& x, AlgoContext& ctx,
                           StepNode* trace = nullptr) {
  return shift(g, t, x, ShiftDirection::Promote, ctx, trace);
}

inline ShiftResult demote(const TypeEnv& g, const Type& t, const VarName& x, AlgoContext& ctx,
                          StepNode* trace = nullptr) {
  return shift(g, t, x, ShiftDirection::Demote, ctx, trace);
}

inline ShiftResult promote(const TypeEnv& g, const Type& t, const VarName& x) {
  AlgoContext ctx;
  return promote(g, t, x, ctx);
}

inline ShiftResult demote(const TypeEnv& g, const Type& t, const VarName& x) {
  AlgoContext ctx;
  return demote(g, t, x, ctx);
}

}  // namespace dsub
