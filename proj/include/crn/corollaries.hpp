#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "crn/exact_linalg.hpp"
#include "crn/model.hpp"
#include "crn/structure.hpp"
#include "crn/tier.hpp"

namespace crn {

// Piecewise-constant threshold built from the ordered cycle complexes
// ybar_1 < ... < ybar_M on axes (i1, i2): a complex below the staircase
// can outcompete the cycle, one above it cannot.
struct StaircaseF {
  std::size_t i1 = 0, i2 = 1;
  std::vector<Complex> ordered;  // ybar_1 < ... < ybar_M

  std::int64_t eval(std::int64_t ell) const {
    std::int64_t value = 0;
    for (const auto& y : ordered) {
      if (ell >= y.coeffs[i1]) value = y.coeffs[i2];
    }
    return value;
  }
};

enum class StructureClass { kNone, kCor1, kCor2, kCor3, kCor4 };

inline std::string structure_class_name(StructureClass c) {
  switch (c) {
    case StructureClass::kCor1: return "cor1";
    case StructureClass::kCor2: return "cor2";
    case StructureClass::kCor3: return "cor3";
    case StructureClass::kCor4: return "cor4";
    default: return "none";
  }
}

struct CorollaryReport {
  StructureClass which = StructureClass::kNone;
  std::optional<StructuralWitness> witness;  // on the analyzed system
  std::optional<StaircaseF> staircase;       // cor3/cor4
  std::vector<std::size_t> pair;             // species axes used (cor2-4)
  bool found() const { return which != StructureClass::kNone; }
};

namespace detail {

inline bool totally_ordered(std::vector<Complex> cs) {
  std::sort(cs.begin(), cs.end(), [](const Complex& a, const Complex& b) {
    return a.molecularity() < b.molecularity();
  });
  for (std::size_t i = 0; i + 1 < cs.size(); ++i)
    if (!(cs[i] < cs[i + 1])) return false;
  return true;
}

inline std::vector<Complex> sorted_chain(std::vector<Complex> cs) {
  std::sort(cs.begin(), cs.end(), [](const Complex& a, const Complex& b) {
    return a.molecularity() < b.molecularity();
  });
  return cs;
}

inline std::vector<Complex> cycle_sources(const ReactionSystem& sys,
                                          const ReactionCycle& cyc) {
  std::vector<Complex> out;
  for (auto r : cyc.reactions) out.push_back(sys.reactions[r].source);
  return out;
}

// Every out-reaction of each cycle complex is the cycle's own step.
inline bool cycle_sources_have_single_exit(const ReactionSystem& sys,
                                           const ReactionCycle& cyc) {
  for (std::size_t m = 0; m < cyc.reactions.size(); ++m) {
    auto from = sys.reactions_from(sys.reactions[cyc.reactions[m]].source);
    if (from.size() != 1 || from[0] != cyc.reactions[m]) return false;
  }
  return true;
}

// Ordered-gap condition on axis i1 (corrected orientation): for the
// chain ybar_1 < ... < ybar_M, every earlier complex sits strictly below
// every later one even after discounting the smallest complex:
// (ybar_k')_{i1} < (ybar_k)_{i1} - (ybar_1)_{i1} for k' < k.
inline bool ordered_gap(const std::vector<Complex>& chain, std::size_t i1) {
  for (std::size_t k2 = 0; k2 < chain.size(); ++k2)
    for (std::size_t k = k2 + 1; k < chain.size(); ++k)
      if (!(chain[k2].coeffs[i1] < chain[k].coeffs[i1] - chain[0].coeffs[i1]))
        return false;
  return true;
}

inline std::size_t rank_of_changes(const ReactionSystem& sys,
                                   const std::vector<std::size_t>& rxns) {
  std::vector<std::vector<std::int64_t>> mat;
  for (auto r : rxns) mat.push_back(sys.reactions[r].net_change());
  return rational_rank(mat);
}

inline std::size_t find_cycle_index(const ReactionSystem& sys,
                                    const ReactionCycle& cyc,
                                    const Complex& y) {
  for (std::size_t m = 0; m < cyc.reactions.size(); ++m)
    if (sys.reactions[cyc.reactions[m]].source == y) return m;
  return cyc.reactions.size();
}

inline TierSpec tier_from_axis(const ReactionSystem& sys,
                               const ReactionCycle& cyc, std::size_t i1) {
  TierSpec tier;
  tier.u.assign(sys.dim(), 0);
  tier.u[i1] = 1;
  tier.b = sys.reactions[cyc.reactions[0]].source.coeffs;
  return tier;
}

// Totally ordered complexes + single-exit cycle through the empty
// complex + an elementary vector in the stoichiometric span.
inline std::optional<CorollaryReport> check_total_order_class(
    const ReactionSystem& sys) {
  if (!is_weakly_reversible(sys)) return std::nullopt;
  if (!totally_ordered(sys.complexes())) return std::nullopt;

  std::vector<std::size_t> all(sys.reactions.size());
  for (std::size_t r = 0; r < all.size(); ++r) all[r] = r;
  std::size_t base_rank = rank_of_changes(sys, all);
  std::optional<std::size_t> i1;
  for (std::size_t i = 0; i < sys.dim() && !i1; ++i) {
    std::vector<std::vector<std::int64_t>> mat;
    for (const auto& r : sys.reactions) mat.push_back(r.net_change());
    std::vector<std::int64_t> e(sys.dim(), 0);
    e[i] = 1;
    mat.push_back(e);
    if (rational_rank(mat) == base_rank) i1 = i;
  }
  if (!i1) return std::nullopt;

  Complex empty;
  empty.coeffs.assign(sys.dim(), 0);
  for (const auto& cyc : enumerate_cycles(sys, sys.complexes().size())) {
    if (!cycle_sources_have_single_exit(sys, cyc)) continue;
    std::size_t m0 = find_cycle_index(sys, cyc, empty);
    if (m0 == cyc.reactions.size()) continue;
    CorollaryReport rep;
    rep.which = StructureClass::kCor1;
    rep.witness = StructuralWitness{cyc, tier_from_axis(sys, cyc, *i1), m0};
    return rep;
  }
  return std::nullopt;
}

// Two species, the reaction set is exactly one cycle through all
// complexes, ordered with the gap condition, full-rank changes.
inline std::optional<CorollaryReport> check_pure_cycle_class(
    const ReactionSystem& sys) {
  if (sys.dim() != 2) return std::nullopt;
  const auto complexes = sys.complexes();
  if (sys.reactions.size() != complexes.size()) return std::nullopt;
  for (const auto& cyc : enumerate_cycles(sys, sys.reactions.size())) {
    if (cyc.reactions.size() != sys.reactions.size()) continue;
    auto sources = cycle_sources(sys, cyc);
    if (!totally_ordered(sources)) continue;
    auto chain = sorted_chain(sources);
    std::optional<std::size_t> i1;
    for (std::size_t i = 0; i < 2 && !i1; ++i)
      if (ordered_gap(chain, i)) i1 = i;
    if (!i1) continue;
    std::vector<std::size_t> all(sys.reactions.size());
    for (std::size_t r = 0; r < all.size(); ++r) all[r] = r;
    if (rank_of_changes(sys, all) != 2) continue;
    std::size_t m0 = find_cycle_index(sys, cyc, chain[0]);
    CorollaryReport rep;
    rep.which = StructureClass::kCor2;
    rep.witness = StructuralWitness{cyc, tier_from_axis(sys, cyc, *i1), m0};
    rep.pair = {0, 1};
    return rep;
  }
  return std::nullopt;
}

// Staircase-dominated cycle on a two-species support (a, b). `sub_complexes`
// lists the complexes supported on the pair; `sub_reactions` the reactions
// whose complexes all live there. Checks the cycle conditions on that
// support plus the escape condition for every complex outside it.
inline std::optional<CorollaryReport> check_staircase_class(
    const ReactionSystem& sys, std::size_t a, std::size_t b,
    const std::vector<Complex>& sub_complexes,
    const std::vector<std::size_t>& sub_reactions, StructureClass tag) {
  if (sub_reactions.empty()) return std::nullopt;
  if (!is_weakly_reversible(sys)) return std::nullopt;

  // The pair subnetwork must itself be weakly reversible: each of its
  // reactions must close a directed cycle within the subnetwork.
  {
    auto reaches = [&](const Complex& from, const Complex& to) {
      std::vector<Complex> frontier{from};
      std::vector<Complex> seen{from};
      while (!frontier.empty()) {
        Complex cur = frontier.back();
        frontier.pop_back();
        if (cur == to) return true;
        for (auto r : sub_reactions)
          if (sys.reactions[r].source == cur) {
            const Complex& nxt = sys.reactions[r].product;
            if (std::find(seen.begin(), seen.end(), nxt) == seen.end()) {
              seen.push_back(nxt);
              frontier.push_back(nxt);
            }
          }
      }
      return false;
    };
    for (auto r : sub_reactions)
      if (!reaches(sys.reactions[r].product, sys.reactions[r].source))
        return std::nullopt;
  }
  if (rank_of_changes(sys, sub_reactions) != 2) return std::nullopt;

  // Cycles within the pair subnetwork, in canonical order.
  std::vector<ReactionCycle> candidates;
  for (const auto& cyc : enumerate_cycles(sys, sub_complexes.size() + 1)) {
    bool inside = true;
    for (auto r : cyc.reactions)
      if (std::find(sub_reactions.begin(), sub_reactions.end(), r) ==
          sub_reactions.end())
        inside = false;
    if (inside) candidates.push_back(cyc);
  }

  // Order and comparison restricted to the pair axes: coordinates off
  // the support are identically zero among these complexes.
  auto less_restricted = [&](const Complex& x, const Complex& y) {
    return x.coeffs[a] < y.coeffs[a] && x.coeffs[b] < y.coeffs[b];
  };
  for (const auto& cyc : candidates) {
    auto sources = cycle_sources(sys, cyc);
    auto chain = sources;
    std::sort(chain.begin(), chain.end(),
              [&](const Complex& x, const Complex& y) {
                return x.coeffs[a] + x.coeffs[b] < y.coeffs[a] + y.coeffs[b];
              });
    bool ordered = true;
    for (std::size_t k = 0; k + 1 < chain.size(); ++k)
      if (!less_restricted(chain[k], chain[k + 1])) ordered = false;
    if (!ordered) continue;
    if (!cycle_sources_have_single_exit(sys, cyc)) continue;
    std::optional<std::size_t> i1;
    for (std::size_t axis : {a, b})
      if (!i1 && ordered_gap(chain, axis)) i1 = axis;
    if (!i1) continue;
    std::size_t i2 = (*i1 == a) ? b : a;

    StaircaseF f;
    f.i1 = *i1;
    f.i2 = i2;
    f.ordered = chain;

    // Complexes on the pair support but off the cycle must clear the
    // staircase; complexes off the support must either clear it or carry
    // a third species.
    bool ok = true;
    for (const auto& y : sub_complexes) {
      if (std::find(sources.begin(), sources.end(), y) != sources.end())
        continue;
      if (!(f.eval(y.coeffs[*i1] + chain[0].coeffs[*i1]) < y.coeffs[i2])) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    for (const auto& y : sys.complexes()) {
      if (std::find(sub_complexes.begin(), sub_complexes.end(), y) !=
          sub_complexes.end())
        continue;
      bool third_species = false;
      for (std::size_t k = 0; k < sys.dim(); ++k)
        if (k != a && k != b && y.coeffs[k] > 0) third_species = true;
      if (third_species) continue;
      if (!(y.coeffs[i2] > f.eval(y.coeffs[*i1] + chain[0].coeffs[*i1]))) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;

    std::size_t m0 = find_cycle_index(sys, cyc, chain[0]);
    if (m0 == cyc.reactions.size()) continue;
    CorollaryReport rep;
    rep.which = tag;
    rep.witness = StructuralWitness{cyc, tier_from_axis(sys, cyc, *i1), m0};
    rep.staircase = f;
    rep.pair = {a, b};
    return rep;
  }
  return std::nullopt;
}

}  // namespace detail

// Tests the four structural classes in order and returns the first that
// applies, with the cycle/tier witness its proof constructs.
inline CorollaryReport check_corollary_class(const ReactionSystem& sys) {
  if (auto rep = detail::check_total_order_class(sys)) return *rep;
  if (sys.dim() == 2) {
    if (auto rep = detail::check_pure_cycle_class(sys)) return *rep;
    std::vector<Complex> all_complexes = sys.complexes();
    std::vector<std::size_t> all(sys.reactions.size());
    for (std::size_t r = 0; r < all.size(); ++r) all[r] = r;
    if (auto rep = detail::check_staircase_class(sys, 0, 1, all_complexes, all,
                                                 StructureClass::kCor3))
      return *rep;
  } else if (sys.dim() >= 3) {
    for (std::size_t a = 0; a < sys.dim(); ++a)
      for (std::size_t b = a + 1; b < sys.dim(); ++b) {
        std::vector<Complex> sub_complexes;
        for (const auto& y : sys.complexes()) {
          bool supported = true;
          for (std::size_t k = 0; k < sys.dim(); ++k)
            if (k != a && k != b && y.coeffs[k] != 0) supported = false;
          if (supported) sub_complexes.push_back(y);
        }
        std::vector<std::size_t> sub_reactions;
        for (std::size_t r = 0; r < sys.reactions.size(); ++r) {
          const auto& rx = sys.reactions[r];
          bool src_in = std::find(sub_complexes.begin(), sub_complexes.end(),
                                  rx.source) != sub_complexes.end();
          bool prod_in = std::find(sub_complexes.begin(), sub_complexes.end(),
                                   rx.product) != sub_complexes.end();
          if (src_in && prod_in) sub_reactions.push_back(r);
        }
        if (auto rep = detail::check_staircase_class(
                sys, a, b, sub_complexes, sub_reactions, StructureClass::kCor4))
          return *rep;
      }
  }
  return CorollaryReport{};
}

// ---------------------------------------------------------------------------
// Catalytic reduction

struct CatalyticReduction {
  std::vector<std::size_t> species;    // indices kept (ascending)
  std::vector<std::size_t> reactions;  // reactions forming the subnetwork
  std::vector<std::size_t> catalysts;  // kept species appearing in dropped reactions
  ReactionSystem subnetwork;           // restricted to `species` coordinates
};

inline ReactionSystem restrict_to_species(
    const ReactionSystem& sys, const std::vector<std::size_t>& keep,
    const std::vector<std::size_t>& rxns) {
  ReactionSystem sub;
  for (auto s : keep) sub.species.push_back(sys.species[s]);
  for (auto r : rxns) {
    Reaction nr;
    nr.rate = sys.reactions[r].rate;
    for (auto s : keep) {
      nr.source.coeffs.push_back(sys.reactions[r].source.coeffs[s]);
      nr.product.coeffs.push_back(sys.reactions[r].product.coeffs[s]);
    }
    sub.reactions.push_back(nr);
  }
  return sub;
}

// All species subsets whose outside reactions leave every kept species
// untouched (the kept species at most catalyze them), with their induced
// subnetworks, in (size descending, lexicographic) order. No
// certifiability filtering here.
inline std::vector<CatalyticReduction> valid_decompositions(
    const ReactionSystem& sys) {
  const std::size_t d = sys.dim();
  std::vector<std::vector<std::size_t>> subsets;
  for (std::size_t mask = 1; mask < (std::size_t(1) << d); ++mask) {
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < d; ++i)
      if (mask & (std::size_t(1) << i)) keep.push_back(i);
    subsets.push_back(keep);
  }
  std::sort(subsets.begin(), subsets.end(),
            [](const auto& x, const auto& y) {
              if (x.size() != y.size()) return x.size() > y.size();
              return x < y;
            });

  std::vector<CatalyticReduction> out;
  for (const auto& keep : subsets) {
    std::vector<std::size_t> rxns;
    for (std::size_t r = 0; r < sys.reactions.size(); ++r) {
      const auto& rx = sys.reactions[r];
      bool supported = true;
      for (std::size_t i = 0; i < d; ++i) {
        if (std::find(keep.begin(), keep.end(), i) != keep.end()) continue;
        if (rx.source.coeffs[i] != 0 || rx.product.coeffs[i] != 0)
          supported = false;
      }
      if (supported) rxns.push_back(r);
    }
    // Outside reactions must not change any kept species.
    bool valid = true;
    for (std::size_t r = 0; r < sys.reactions.size() && valid; ++r) {
      if (std::find(rxns.begin(), rxns.end(), r) != rxns.end()) continue;
      auto delta = sys.reactions[r].net_change();
      for (auto s : keep)
        if (delta[s] != 0) valid = false;
    }
    if (!valid || rxns.empty()) continue;

    CatalyticReduction red;
    red.species = keep;
    red.reactions = rxns;
    red.subnetwork = restrict_to_species(sys, keep, rxns);
    for (auto s : keep) {
      bool appears = false;
      for (std::size_t r = 0; r < sys.reactions.size(); ++r) {
        if (std::find(rxns.begin(), rxns.end(), r) != rxns.end()) continue;
        if (sys.reactions[r].source.coeffs[s] > 0 ||
            sys.reactions[r].product.coeffs[s] > 0)
          appears = true;
      }
      if (appears) red.catalysts.push_back(s);
    }
    out.push_back(std::move(red));
  }
  return out;
}

// Largest species subset whose outside reactions leave every kept
// species untouched and whose induced subnetwork itself certifies a
// trapping cycle.
inline std::optional<CatalyticReduction> catalytic_reduction(
    const ReactionSystem& sys, std::int64_t u_max = 4,
    std::size_t max_len = 6) {
  for (auto& red : valid_decompositions(sys)) {
    bool certifiable =
        check_corollary_class(red.subnetwork).found() ||
        search_structural_certificate(red.subnetwork, u_max, max_len)
            .has_value();
    if (certifiable) return red;
  }
  return std::nullopt;
}

}  // namespace crn
