#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <future>
#include <optional>
#include <vector>

#include "crn/error.hpp"
#include "crn/model.hpp"
#include "crn/structure.hpp"

namespace crn {

// Ordered reactions r_1..r_M with product(r_m) == source(r_{m+1})
// cyclically. Walking the cycle from any state x >= source(r_1) yields an
// active path (remark: firing y->y' at x >= y leaves x+y'-y >= y').
struct ReactionCycle {
  std::vector<std::size_t> reactions;

  std::size_t length() const { return reactions.size(); }
};

inline bool cycle_is_well_formed(const ReactionSystem& sys,
                                 const ReactionCycle& cyc) {
  const std::size_t m = cyc.reactions.size();
  if (m < 2) return false;
  for (std::size_t i = 0; i < m; ++i) {
    const Reaction& cur = sys.reactions[cyc.reactions[i]];
    const Reaction& nxt = sys.reactions[cyc.reactions[(i + 1) % m]];
    if (!(cur.product == nxt.source)) return false;
  }
  return true;
}

// All simple directed cycles of the complex digraph with at most max_len
// reactions, one representative per rotation (smallest reaction index
// first), sorted by (length, reaction sequence).
inline std::vector<ReactionCycle> enumerate_cycles(const ReactionSystem& sys,
                                                   std::size_t max_len) {
  ComplexGraph g(sys);
  std::vector<ReactionCycle> cycles;
  const std::size_t n = g.nodes.size();

  // DFS from each start node over nodes >= start, so every cycle is
  // found exactly once (at its minimal node).
  std::vector<std::size_t> edge_stack;
  std::vector<bool> on_path(n, false);
  std::function<void(std::size_t, std::size_t)> dfs =
      [&](std::size_t start, std::size_t v) {
        for (std::size_t r : g.out[v]) {
          std::size_t w = g.edges[r].second;
          if (w == start && edge_stack.size() >= 1) {
            edge_stack.push_back(r);
            if (edge_stack.size() >= 2) {
              ReactionCycle c{edge_stack};
              auto minit =
                  std::min_element(c.reactions.begin(), c.reactions.end());
              std::rotate(c.reactions.begin(), minit, c.reactions.end());
              cycles.push_back(std::move(c));
            }
            edge_stack.pop_back();
            continue;
          }
          if (w < start || on_path[w]) continue;
          if (edge_stack.size() + 1 >= max_len) continue;
          on_path[w] = true;
          edge_stack.push_back(r);
          dfs(start, w);
          edge_stack.pop_back();
          on_path[w] = false;
        }
      };
  for (std::size_t v = 0; v < n; ++v) {
    on_path[v] = true;
    dfs(v, v);
    on_path[v] = false;
  }
  std::sort(cycles.begin(), cycles.end(),
            [](const ReactionCycle& a, const ReactionCycle& b) {
              if (a.reactions.size() != b.reactions.size())
                return a.reactions.size() < b.reactions.size();
              return a.reactions < b.reactions;
            });
  return cycles;
}

// Symbolic growth sequence: (x_n)_i = n^{u_i} + b_i on the growth set
// I = {i : u_i > 0}, constant b_i elsewhere.
struct TierSpec {
  std::vector<std::int64_t> u;
  std::vector<std::int64_t> b;

  std::vector<std::size_t> growth_set() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < u.size(); ++i)
      if (u[i] > 0) out.push_back(i);
    return out;
  }
  bool valid() const {
    if (u.empty() || u.size() != b.size()) return false;
    std::size_t grow = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (u[i] < 0 || b[i] < 0) return false;
      if (u[i] > 0) ++grow;
    }
    return grow > 0 && grow < u.size();
  }
  State state_at(std::int64_t n) const {
    State x(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (u[i] > 0) {
        std::int64_t p = 1;
        for (std::int64_t k = 0; k < u[i]; ++k) {
          if (n != 0 && p > (std::int64_t(1) << 62) / std::max<std::int64_t>(n, 1))
            throw Error("overflow", "tier state exceeds 64-bit range");
          p *= n;
        }
        x[i] = p + b[i];
      } else {
        x[i] = b[i];
      }
    }
    return x;
  }
};

inline std::int64_t inner(const std::vector<std::int64_t>& u,
                          const Complex& y) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * y.coeffs[i];
  return s;
}

// Shift of the m-th cycle state relative to the cycle start:
// x^m_n = x_n + sum_{j<m} (product_j - source_j) = x_n + (y*_m - y*_1).
inline std::vector<std::int64_t> cycle_shift(const ReactionSystem& sys,
                                             const ReactionCycle& cyc,
                                             std::size_t m) {
  const Complex& first = sys.reactions[cyc.reactions[0]].source;
  const Complex& at_m = sys.reactions[cyc.reactions[m]].source;
  std::vector<std::int64_t> shift(first.dim());
  for (std::size_t i = 0; i < shift.size(); ++i)
    shift[i] = at_m.coeffs[i] - first.coeffs[i];
  return shift;
}

// Asymptotic degree in n of the intensity of source complex `y` along
// the shifted sequence x_n + shift. "Blocked" means the intensity is
// identically zero because a constant coordinate stays below y.
struct IntensityDegree {
  bool blocked = false;
  std::int64_t degree = 0;
};

inline IntensityDegree intensity_degree(const Complex& y, const TierSpec& tier,
                                        const std::vector<std::int64_t>& shift) {
  IntensityDegree out;
  for (std::size_t i = 0; i < tier.u.size(); ++i) {
    if (tier.u[i] > 0) continue;
    std::int64_t c = tier.b[i] + shift[i];
    if (c < 0)
      throw Error("negative-constant-coordinate",
                  "shift drives constant coordinate " + std::to_string(i) +
                      " negative");
    if (c < y.coeffs[i]) out.blocked = true;
  }
  if (!out.blocked) out.degree = inner(tier.u, y);
  return out;
}

// One (step, reaction) pair whose intensity fails to vanish relative to
// the cycle's reaction along the sequence.
struct DominanceViolation {
  std::size_t step = 0;      // 0-based position in the cycle
  std::size_t reaction = 0;  // competing reaction index
};

struct DominanceCheck {
  bool ok = false;
  std::vector<DominanceViolation> violations;
};

// Exact integer test that the cycle's reactions dominate every competing
// reaction along the tier sequence strongly enough to trap the chain:
// for each step m and competitor with source y, either the competitor is
// blocked or deg(y*_{m0}) + deg(y) < deg(y*_m).
inline DominanceCheck verify_trapping_cycle(const ReactionSystem& sys,
                                            const ReactionCycle& cyc,
                                            const TierSpec& tier,
                                            std::size_t m0) {
  if (!cycle_is_well_formed(sys, cyc))
    throw Error("invalid-cycle", "reactions do not form a cycle");
  if (m0 >= cyc.reactions.size())
    throw Error("m0-out-of-range", "m0 must index a cycle step");
  const Complex& start = sys.reactions[cyc.reactions[0]].source;
  for (std::size_t i = 0; i < start.dim(); ++i)
    if (tier.b[i] < start.coeffs[i])
      throw Error("tier-base-below-cycle-start",
                  "tier base must dominate the first cycle source");

  const Complex& anchor = sys.reactions[cyc.reactions[m0]].source;
  const std::int64_t deg_anchor = inner(tier.u, anchor);

  DominanceCheck check;
  check.ok = true;
  for (std::size_t m = 0; m < cyc.reactions.size(); ++m) {
    auto shift = cycle_shift(sys, cyc, m);
    const Complex& own = sys.reactions[cyc.reactions[m]].source;
    const std::int64_t deg_own = inner(tier.u, own);
    for (std::size_t r = 0; r < sys.reactions.size(); ++r) {
      if (r == cyc.reactions[m]) continue;
      IntensityDegree deg = intensity_degree(sys.reactions[r].source, tier, shift);
      if (deg.blocked) continue;
      if (deg_anchor + deg.degree < deg_own) continue;
      check.ok = false;
      check.violations.push_back({m, r});
    }
  }
  return check;
}

struct StructuralWitness {
  ReactionCycle cycle;
  TierSpec tier;
  std::size_t m0 = 0;
};

namespace detail {

// Lexicographically next exponent vector over {0..u_max}^d; returns false
// after the last one.
inline bool next_exponents(std::vector<std::int64_t>& u, std::int64_t u_max) {
  for (std::size_t i = u.size(); i-- > 0;) {
    if (u[i] < u_max) {
      ++u[i];
      for (std::size_t j = i + 1; j < u.size(); ++j) u[j] = 0;
      return true;
    }
  }
  return false;
}

inline std::optional<StructuralWitness> search_one_cycle(
    const ReactionSystem& sys, const ReactionCycle& cyc, std::int64_t u_max) {
  const std::size_t d = sys.dim();
  TierSpec tier;
  tier.b = sys.reactions[cyc.reactions[0]].source.coeffs;
  tier.u.assign(d, 0);
  std::vector<std::int64_t> u(d, 0);
  while (next_exponents(u, u_max)) {
    bool all_grow = true;
    for (auto e : u)
      if (e == 0) all_grow = false;
    if (all_grow) continue;  // growth set must be a proper subset
    tier.u = u;
    for (std::size_t m0 = 0; m0 < cyc.reactions.size(); ++m0) {
      if (verify_trapping_cycle(sys, cyc, tier, m0).ok)
        return StructuralWitness{cyc, tier, m0};
    }
  }
  return std::nullopt;
}

}  // namespace detail

// Exhaustive grid search for a certified cycle: cycles ordered by
// (length, reaction sequence), exponents lexicographic with base b =
// y*_1. Branches run concurrently; the canonical order decides the
// winner, so the result is deterministic.
inline std::optional<StructuralWitness> search_structural_certificate(
    const ReactionSystem& sys, std::int64_t u_max = 4,
    std::size_t max_len = 6) {
  if (u_max < 1) throw Error("parameter", "u_max must be >= 1");
  if (sys.dim() < 2) return std::nullopt;
  std::vector<ReactionCycle> cycles = enumerate_cycles(sys, max_len);
  std::vector<std::future<std::optional<StructuralWitness>>> results;
  results.reserve(cycles.size());
  for (const auto& cyc : cycles)
    results.push_back(std::async(std::launch::async, [&sys, cyc, u_max]() {
      return detail::search_one_cycle(sys, cyc, u_max);
    }));
  for (auto& fut : results) {
    auto w = fut.get();
    if (w) return w;
  }
  return std::nullopt;
}

}  // namespace crn
