#pragma once

// Shared fixtures: parse shortcuts, deterministic instance generators and
// closed-form counting oracles for the enumerator.

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dsub/dsub.hpp"

namespace dsub::testing {

inline Type T(std::string_view s) { return parse_type(s); }
inline Term t_(std::string_view s) { return parse_term(s); }
inline TypeEnv E(std::string_view s) { return parse_env(s); }

inline std::string corpus_dir() { return DSUB_CORPUS_DIR; }

// ---------------------------------------------------------------------------
// Counting oracles (independent of the Enumerator's construction order)

/// Number of types of exactly `n` nodes over `k` variables in scope and
/// `labels` labels.
inline std::uint64_t count_types(int n, int k, int labels = 3) {
  if (n < 1 || n % 2 == 0) return 0;
  if (n == 1) return 2 + static_cast<std::uint64_t>(k) * labels;
  std::uint64_t total = 0;
  for (int a = 1; a <= n - 2; ++a) {
    int b = n - 1 - a;
    total += labels * count_types(a, k, labels) * count_types(b, k, labels);
    total += count_types(a, k, labels) * count_types(b, k + 1, labels);
  }
  return total;
}

inline std::uint64_t count_types_up_to(int m, int k, int labels = 3) {
  std::uint64_t s = 0;
  for (int n = 1; n <= m; ++n) s += count_types(n, k, labels);
  return s;
}

inline std::uint64_t count_terms(int n, int k, int labels = 3) {
  if (n < 1) return 0;
  if (n == 1) return k;
  std::uint64_t total = labels * count_types(n - 1, k, labels);
  if (n == 2) return total + static_cast<std::uint64_t>(k) * k;
  for (int a = 1; a <= n - 2; ++a) {
    int b = n - 1 - a;
    total += count_types(a, k, labels) * count_terms(b, k + 1, labels);
    total += count_terms(a, k, labels) * count_terms(b, k + 1, labels);
  }
  return total;
}

/// Environments binding a prefix of `vars` variables, each at a type of
/// size <= m over the earlier ones.
inline std::uint64_t count_envs(int vars, int m, int labels = 3) {
  std::uint64_t total = 1, layer = 1;
  for (int i = 0; i < vars; ++i) {
    layer *= count_types_up_to(m, i, labels);
    total += layer;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Instance generators over variables x, y and labels A, B, C

struct Universe {
  Enumerator en = Enumerator::standard();
  std::vector<TypeEnv> envs;

  explicit Universe(int env_type_size = 3) { envs = en.envs({var("x"), var("y")}, env_type_size); }
};

/// Deterministic sample of `k` elements (all of them when k >= size).
template <class V>
std::vector<V> sample(const std::vector<V>& from, size_t k, std::mt19937& rng) {
  if (k >= from.size()) return from;
  std::vector<V> out;
  out.reserve(k);
  std::uniform_int_distribution<size_t> pick(0, from.size() - 1);
  for (size_t i = 0; i < k; ++i) out.push_back(from[pick(rng)]);
  return out;
}

struct TypingInstance {
  TypeEnv env;
  Term term;
};

struct SubInstance {
  TypeEnv env;
  Type lhs, rhs;
};

/// Closed terms up to size 6 in the empty environment, plus `per_env` sampled
/// terms up to size 5 in each enumerated environment.
inline std::vector<TypingInstance> typing_instances(Universe& u, size_t per_env, std::uint32_t seed = 7) {
  std::mt19937 rng(seed);
  std::vector<TypingInstance> out;
  for (const auto& t : u.en.terms_up_to({}, 6)) out.push_back({TypeEnv::empty(), t});
  for (const auto& g : u.envs) {
    if (g.size() == 0) continue;
    auto ts = u.en.terms_up_to(scope_of(g), 5);
    for (const auto& t : sample(ts, per_env, rng)) out.push_back({g, t});
  }
  return out;
}

/// Sampled pairs up to size 5 per environment, with one half of each pair
/// biased towards related types (a type against its exposure or a bound).
inline std::vector<SubInstance> sub_instances(Universe& u, size_t per_env, std::uint32_t seed = 11) {
  std::mt19937 rng(seed);
  std::vector<SubInstance> out;
  for (const auto& g : u.envs) {
    auto ts = u.en.types_up_to(scope_of(g), 5);
    auto ls = sample(ts, per_env, rng);
    auto rs = sample(ts, per_env, rng);
    for (size_t i = 0; i < ls.size(); ++i) {
      out.push_back({g, ls[i], rs[i]});
      auto ex = expose(g, ls[i]);
      if (is_exposed(ex)) out.push_back({g, ls[i], exposed_type(ex)});
      if (ls[i].is_decl()) {
        const auto& d = as_decl(ls[i]);
        out.push_back({g, ls[i], Type::decl(d.label, Type::bot(), d.upper)});
        out.push_back({g, Type::decl(d.label, d.lower, Type::bot()), ls[i]});
      }
    }
  }
  return out;
}

}  // namespace dsub::testing
