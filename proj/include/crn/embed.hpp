#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "crn/exact_linalg.hpp"
#include "crn/kernel.hpp"
#include "crn/model.hpp"
#include "crn/structure.hpp"
#include "crn/tier.hpp"

namespace crn {

// Adjustment of a tier sequence into the state space reachable from x0.
// The original x_n is projected onto the lattice of reaction-achievable
// displacements that keep the constant coordinates fixed; coefficients
// are floored, so the adjusted sequence stays within bounded distance of
// the original and the same cycle still dominates along it.
struct EmbeddedSequence {
  TierSpec tier;
  State x0;
  // Lattice basis of achievable displacements with zero constant
  // coordinates, and the reaction multiplicities realizing each vector.
  std::vector<std::vector<std::int64_t>> basis;
  std::vector<std::vector<std::int64_t>> basis_multiplicity;
  // Rational coefficient polynomials: coeff[l] maps exponent e to the
  // coefficient of n^e in b^l(n).
  std::vector<std::map<std::int64_t, exact::Rational>> coeff;
  bool changed = false;  // adjusted sequence differs from x_n for some n
  std::map<std::int64_t, Path> witnesses;  // n -> active path from x0
  // Nonnegative reaction multiset realizing x(n_check) - x0.
  std::vector<std::int64_t> reaction_counts;

  State state_at(std::int64_t n) const {
    State x = x0;
    for (std::size_t l = 0; l < basis.size(); ++l) {
      // floor of sum_e coeff * n^e, evaluated exactly.
      exact::Rational val(0);
      for (const auto& [e, c] : coeff[l]) {
        exact::Int p = 1;
        for (std::int64_t k = 0; k < e; ++k) p = exact::checked_mul(p, n);
        val = val + c * exact::Rational(p);
      }
      exact::Int fl = val.num / val.den;
      if (val.num < 0 && val.num % val.den != 0) fl -= 1;
      for (std::size_t i = 0; i < x.size(); ++i)
        x[i] += static_cast<std::int64_t>(fl) * basis[l][i];
    }
    return x;
  }
};

namespace detail {

// Shortest directed complex path from -> to; returns the reaction
// indices along it. Requires weak reversibility to always succeed for
// product -> source queries.
inline std::optional<std::vector<std::size_t>> complex_path(
    const ReactionSystem& sys, const Complex& from, const Complex& to) {
  struct Node {
    Complex c;
    std::vector<std::size_t> via;
  };
  std::vector<Node> frontier{{from, {}}};
  std::vector<Complex> seen{from};
  while (!frontier.empty()) {
    std::vector<Node> next;
    for (const auto& node : frontier) {
      if (node.c == to) return node.via;
      for (std::size_t r = 0; r < sys.reactions.size(); ++r) {
        if (!(sys.reactions[r].source == node.c)) continue;
        const Complex& p = sys.reactions[r].product;
        if (std::find(seen.begin(), seen.end(), p) != seen.end()) continue;
        seen.push_back(p);
        Node nn = node;
        nn.c = p;
        nn.via.push_back(r);
        next.push_back(std::move(nn));
      }
    }
    frontier = std::move(next);
  }
  return std::nullopt;
}

}  // namespace detail

inline EmbeddedSequence embed_in_state_space(const ReactionSystem& sys,
                                             const TierSpec& tier,
                                             const ReactionCycle& cycle,
                                             const State& x0,
                                             std::int64_t n_check = 5) {
  const std::size_t d = sys.dim();
  if (!is_weakly_reversible(sys))
    throw Error("not-weakly-reversible",
                "sequence adjustment requires a weakly reversible network");
  // A comparable pair among the cycle complexes provides the pumping
  // direction used to realize arbitrary nonnegative multiplicities. A
  // nonzero nonnegative difference suffices: walking the cycle to the
  // larger complex and back raises exactly its support.
  {
    bool comparable = false;
    for (std::size_t i = 0; i < cycle.reactions.size(); ++i)
      for (std::size_t j = 0; j < cycle.reactions.size(); ++j) {
        if (i == j) continue;
        const Complex& lo = sys.reactions[cycle.reactions[i]].source;
        const Complex& hi = sys.reactions[cycle.reactions[j]].source;
        if (leq_componentwise(lo, hi) && !(lo == hi)) comparable = true;
      }
    if (!comparable)
      throw Error("no-comparable-pair",
                  "cycle complexes contain no ordered pair");
  }
  // Conservation first: each growth monomial of x_n must lie in the
  // rational span of the net changes, whatever the start.
  std::vector<std::vector<std::int64_t>> deltas;
  for (const auto& r : sys.reactions) deltas.push_back(r.net_change());
  const std::size_t span_rank = rational_rank(deltas);
  auto in_span = [&](const std::vector<std::int64_t>& v) {
    auto trial = deltas;
    trial.push_back(v);
    return rational_rank(trial) == span_rank;
  };
  std::map<std::int64_t, std::vector<std::int64_t>> monomials;  // e -> vector
  for (std::size_t i = 0; i < d; ++i)
    if (tier.u[i] > 0) {
      auto& v = monomials[tier.u[i]];
      v.resize(d, 0);
      v[i] += 1;
    }
  for (const auto& [e, v] : monomials)
    if (!in_span(v))
      throw Error("conservation-obstruction",
                  "tier sequence leaves the rational span of the net changes");

  const Complex& start = sys.reactions[cycle.reactions[0]].source;
  for (std::size_t i = 0; i < d; ++i) {
    if (x0[i] < start.coeffs[i])
      throw Error("initial-state-incompatible",
                  "initial state must dominate the first cycle source");
    if (tier.u[i] == 0 && x0[i] != tier.b[i])
      throw Error("initial-state-incompatible",
                  "initial state must match the constant coordinates");
  }
  {
    std::vector<std::int64_t> c0(d, 0);
    bool nonzero = false;
    for (std::size_t i = 0; i < d; ++i)
      if (tier.u[i] > 0 && tier.b[i] != x0[i]) {
        c0[i] = tier.b[i] - x0[i];
        nonzero = true;
      }
    if (nonzero) {
      if (!in_span(c0))
        throw Error("conservation-obstruction",
                    "base offset leaves the rational span of the net changes");
      monomials[0] = c0;
    }
  }

  // Basis of V = span{product - source} intersected with {v : v_i = 0 on
  // the constant coordinates}, as integer combinations of reaction
  // vectors: kernel of [Delta^T | -E_I].
  std::vector<std::size_t> growth = tier.growth_set();
  const std::size_t R = sys.reactions.size();
  std::vector<std::vector<std::int64_t>> mat(d);
  for (std::size_t i = 0; i < d; ++i) {
    mat[i].resize(R + growth.size(), 0);
    for (std::size_t r = 0; r < R; ++r)
      mat[i][r] = sys.reactions[r].net_change()[i];
    for (std::size_t j = 0; j < growth.size(); ++j)
      if (growth[j] == i) mat[i][R + j] = -1;
  }
  auto kernel_vecs = integer_kernel_basis(mat);

  EmbeddedSequence emb;
  emb.tier = tier;
  emb.x0 = x0;
  std::vector<std::vector<std::int64_t>> w_candidates;
  for (const auto& kv : kernel_vecs) {
    std::vector<std::int64_t> w(d, 0);
    for (std::size_t r = 0; r < R; ++r) {
      auto delta = sys.reactions[r].net_change();
      for (std::size_t i = 0; i < d; ++i) w[i] += kv[r] * delta[i];
    }
    bool zero = std::all_of(w.begin(), w.end(),
                            [](std::int64_t v) { return v == 0; });
    if (zero) continue;
    // Keep only vectors extending the rational rank.
    auto trial = emb.basis;
    trial.push_back(w);
    if (rational_rank(trial) != trial.size()) continue;
    emb.basis.push_back(w);
    emb.basis_multiplicity.emplace_back(kv.begin(), kv.begin() + R);
  }

  // Decompose x_n - x0 monomial by monomial into the basis.
  emb.coeff.assign(emb.basis.size(), {});
  for (const auto& [e, v] : monomials) {
    // Solve sum_l beta_l w_l = v exactly.
    std::vector<std::vector<std::int64_t>> aug(d);
    for (std::size_t i = 0; i < d; ++i) {
      aug[i].resize(emb.basis.size() + 1);
      for (std::size_t l = 0; l < emb.basis.size(); ++l)
        aug[i][l] = emb.basis[l][i];
      aug[i][emb.basis.size()] = v[i];
    }
    exact::Matrix m = exact::from_int(aug);
    auto pivots = exact::rref(m);
    bool solvable = true;
    for (auto p : pivots)
      if (p == emb.basis.size()) solvable = false;
    if (!solvable)
      throw Error("conservation-obstruction",
                  "tier sequence leaves the reachable lattice span");
    std::vector<exact::Rational> beta(emb.basis.size());
    for (std::size_t pr = 0; pr < pivots.size(); ++pr)
      beta[pivots[pr]] = m[pr][emb.basis.size()];
    for (std::size_t l = 0; l < emb.basis.size(); ++l)
      if (!beta[l].is_zero()) emb.coeff[l][e] = beta[l];
  }

  // Adjusted-vs-original comparison over the checked range.
  for (std::int64_t n = 1; n <= n_check; ++n)
    if (emb.state_at(n) != tier.state_at(n)) emb.changed = true;

  // Nonnegative reaction multiset for x(n_check) - x0: integer basis
  // multiplicities with negative counts rewritten through directed
  // return paths (weak reversibility supplies them).
  {
    std::vector<std::int64_t> counts(R, 0);
    for (std::size_t l = 0; l < emb.basis.size(); ++l) {
      exact::Rational val(0);
      for (const auto& [e, c] : emb.coeff[l]) {
        exact::Int p = 1;
        for (std::int64_t k = 0; k < e; ++k)
          p = exact::checked_mul(p, n_check);
        val = val + c * exact::Rational(p);
      }
      exact::Int fl = val.num / val.den;
      if (val.num < 0 && val.num % val.den != 0) fl -= 1;
      for (std::size_t r = 0; r < R; ++r)
        counts[r] += static_cast<std::int64_t>(fl) * emb.basis_multiplicity[l][r];
    }
    for (std::size_t r = 0; r < R; ++r) {
      if (counts[r] >= 0) continue;
      auto back = detail::complex_path(sys, sys.reactions[r].product,
                                       sys.reactions[r].source);
      if (!back)
        throw Error("not-weakly-reversible",
                    "no return path for a negative multiplicity");
      std::int64_t deficit = -counts[r];
      counts[r] = 0;
      for (auto rr : *back) counts[rr] += deficit;
    }
    emb.reaction_counts = counts;
  }

  // Explicit reachability witnesses on a box sized from the targets,
  // grown a few times if the first search fails.
  TransitionKernel kernel(sys, CachePolicy::memoize);
  for (std::int64_t n = 1; n <= n_check; ++n) {
    State target = emb.state_at(n);
    std::vector<std::int64_t> slack(d);
    for (std::size_t i = 0; i < d; ++i) {
      std::int64_t cmax = 0;
      for (const auto& rx : sys.reactions)
        cmax = std::max({cmax, rx.source.coeffs[i], rx.product.coeffs[i]});
      slack[i] = 2 * cmax + 4;
    }
    std::optional<Path> path;
    for (int attempt = 0; attempt < 3 && !path; ++attempt) {
      Box box;
      box.bounds.resize(d);
      for (std::size_t i = 0; i < d; ++i)
        box.bounds[i] =
            std::max(x0[i], target[i]) + slack[i] * (attempt + 1);
      if (box.size() > 20'000'000) break;
      path = reachable(kernel, x0, target, box);
    }
    if (!path)
      throw Error("membership-witness-not-found",
                  "no reachability witness found for n=" + std::to_string(n));
    emb.witnesses[n] = *path;
  }
  return emb;
}

}  // namespace crn
