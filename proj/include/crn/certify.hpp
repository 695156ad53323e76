#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "crn/corollaries.hpp"
#include "crn/embed.hpp"
#include "crn/kernel.hpp"
#include "crn/model.hpp"
#include "crn/structure.hpp"
#include "crn/tier.hpp"

namespace crn {

struct CertifyOptions {
  std::optional<double> rho;  // default 0.5 * min kappa
  std::int64_t u_max = 4;
  std::size_t max_len = 6;
  std::int64_t n_max = 100000;
  std::int64_t n_check = 5;
};

struct ReductionInfo {
  std::vector<std::string> kept_species;
  std::vector<std::string> catalysts;
};

struct TrappingCycleCertificate {
  // The certified chain; equals the input system unless a catalytic
  // reduction was applied, in which case this is the subnetwork and the
  // full chain inherits the conclusion by coupling.
  ReactionSystem system;
  ReactionCycle cycle;
  TierSpec tier;
  std::size_t m0 = 0;
  double rho = 0.0;
  std::int64_t n_star = 0;
  double f_value = 0.0;       // path MGF at the witness state, > 1
  State witness_state;        // adjusted sequence state at n_star
  Path witness_path;          // the cycle path at witness_state
  bool lattice_ok = false;
  bool sequence_adjusted = false;
  std::map<std::int64_t, Path> membership_witnesses;
  std::vector<std::int64_t> reaction_counts;  // multiset for x(n_check) - x0
  std::string ergodicity_basis;  // "zero-deficiency-weakly-reversible" | "assumed"
  std::string structure_class;   // "cor1".."cor4" | "search"
  std::optional<ReductionInfo> reduction;
  std::int64_t search_u_max = 0;
  std::size_t search_max_len = 0;
};

struct CertifyResult {
  std::optional<TrappingCycleCertificate> certificate;
  std::string reason;  // set when no certificate
};

// Post-checks every accepted certificate must satisfy: positive cycle
// intensities along the sequence, single-exit cycle sources, all other
// sources silent at the anchor step, and a bounded coordinate.
inline bool check_certificate_postconditions(
    const TrappingCycleCertificate& cert, std::string* why = nullptr) {
  const ReactionSystem& sys = cert.system;
  const auto& cyc = cert.cycle;
  if (cert.tier.growth_set().size() >= sys.dim()) {
    if (why) *why = "no bounded coordinate";
    return false;
  }
  if (!detail::cycle_sources_have_single_exit(sys, cyc)) {
    if (why) *why = "cycle source with multiple exits";
    return false;
  }
  std::vector<std::int64_t> samples{cert.n_star, cert.n_star + 1,
                                    cert.n_star + 2};
  for (auto n : samples) {
    State base = cert.tier.state_at(n);
    // Use the adjusted state when available for n_star.
    if (n == cert.n_star) base = cert.witness_state;
    for (std::size_t m = 0; m < cyc.reactions.size(); ++m) {
      auto shift = cycle_shift(sys, cyc, m);
      State xm = base;
      for (std::size_t i = 0; i < xm.size(); ++i) xm[i] += shift[i];
      if (!(evaluate_intensity(sys, cyc.reactions[m], xm) > 0.0)) {
        if (why) *why = "cycle intensity vanishes on the sequence";
        return false;
      }
    }
    auto anchor_shift = cycle_shift(sys, cyc, cert.m0);
    State xm0 = base;
    for (std::size_t i = 0; i < xm0.size(); ++i) xm0[i] += anchor_shift[i];
    const Complex& anchor = sys.reactions[cyc.reactions[cert.m0]].source;
    for (const auto& y : sys.source_complexes()) {
      if (y == anchor) continue;
      if (combinatorial_intensity(y, xm0) != 0.0) {
        if (why) *why = "competing source active at the anchor step";
        return false;
      }
    }
  }
  return true;
}

namespace detail {

inline Path cycle_path_at(const ReactionSystem& sys, const ReactionCycle& cyc,
                          const State& base) {
  Path path;
  for (std::size_t m = 0; m < cyc.reactions.size(); ++m) {
    auto shift = cycle_shift(sys, cyc, m);
    State s = base;
    for (std::size_t i = 0; i < s.size(); ++i) s[i] += shift[i];
    path.push_back(std::move(s));
  }
  path.push_back(base);
  return path;
}

struct CertifyCandidate {
  ReactionSystem target;
  StructuralWitness witness;
  std::string structure_class;
  std::optional<ReductionInfo> reduction;
  std::vector<std::size_t> kept;  // species kept (identity when empty)
};

// Attempt one candidate end to end: embed the sequence, scan for the
// first state with MGF above 1, run the post-checks. Throws Error on
// embedding failures; a null return means the scan or post-checks came
// up empty.
inline std::optional<TrappingCycleCertificate> try_candidate(
    const CertifyCandidate& cand, const ReactionSystem& full,
    const std::optional<State>& x0, const CertifyOptions& options,
    std::string* fail_reason) {
  const ReactionSystem& target = cand.target;

  // Witnesses from the class checkers are constructed, not searched;
  // re-run the exact degree test on all of them alike.
  if (!verify_trapping_cycle(target, cand.witness.cycle, cand.witness.tier,
                             cand.witness.m0)
           .ok) {
    *fail_reason = "degree-test-failed";
    return std::nullopt;
  }

  double min_kappa = min_rate_constant(target);
  double rho = options.rho ? *options.rho : 0.5 * min_kappa;
  if (!(rho > 0.0) || rho >= min_kappa)
    throw Error("parameter", "rho must lie in (0, min rate constant)");

  State x0_target;
  if (x0) {
    if (!cand.kept.empty()) {
      for (auto s : cand.kept) x0_target.push_back((*x0)[s]);
    } else {
      x0_target = *x0;
    }
  } else {
    x0_target = cand.witness.tier.b;  // always compatible
  }

  EmbeddedSequence emb = embed_in_state_space(
      target, cand.witness.tier, cand.witness.cycle, x0_target,
      options.n_check);

  // Scan the adjusted sequence for the first state whose cycle path has
  // MGF above 1. States revisiting x0 are skipped: the trapping path
  // must avoid the return base.
  TransitionKernel kernel(target, CachePolicy::memoize);
  std::optional<std::int64_t> n_star;
  double f_value = 0.0;
  State witness_state;
  Path witness_path;
  for (std::int64_t n = 1; n <= options.n_max; ++n) {
    State base;
    try {
      base = emb.state_at(n);
    } catch (const Error&) {
      break;  // coordinates left the integer range; larger n only worsen it
    }
    Path path = cycle_path_at(target, cand.witness.cycle, base);
    bool usable = true;
    for (const auto& s : path) {
      if (s == x0_target) usable = false;
      for (auto v : s)
        if (v < 0) usable = false;
    }
    if (!usable) continue;
    double f = 0.0;
    try {
      f = path_mgf(kernel, path, rho);
    } catch (const Error&) {
      continue;
    }
    if (f > 1.0) {
      n_star = n;
      f_value = f;
      witness_state = base;
      witness_path = path;
      break;
    }
  }
  if (!n_star) {
    *fail_reason = "mgf-threshold-not-reached";
    return std::nullopt;
  }

  TrappingCycleCertificate cert;
  cert.system = target;
  cert.cycle = cand.witness.cycle;
  cert.tier = cand.witness.tier;
  cert.m0 = cand.witness.m0;
  cert.rho = rho;
  cert.n_star = *n_star;
  cert.f_value = f_value;
  cert.witness_state = witness_state;
  cert.witness_path = witness_path;
  cert.lattice_ok = true;
  cert.sequence_adjusted = emb.changed;
  cert.membership_witnesses = emb.witnesses;
  cert.reaction_counts = emb.reaction_counts;
  cert.structure_class = cand.structure_class;
  cert.reduction = cand.reduction;
  cert.search_u_max = options.u_max;
  cert.search_max_len = options.max_len;

  bool zd_wr = is_weakly_reversible(full) && deficiency(full).deficiency == 0;
  if (cand.reduction)
    zd_wr = zd_wr && is_weakly_reversible(target) &&
            deficiency(target).deficiency == 0;
  cert.ergodicity_basis =
      zd_wr ? "zero-deficiency-weakly-reversible" : "assumed";

  std::string why;
  if (!check_certificate_postconditions(cert, &why)) {
    *fail_reason = "postcondition-failed: " + why;
    return std::nullopt;
  }
  return cert;
}

}  // namespace detail

// Certification pipeline: structural classes on the full network, then
// catalytic reductions (largest first), then the exhaustive grid search.
// A candidate that fails to embed or to clear the MGF threshold yields
// to the next one; the reported reason is the first failure's.
inline CertifyResult certify_non_exponential(
    const ReactionSystem& sys, std::optional<State> x0,
    const CertifyOptions& options = {}) {
  CertifyResult result;
  if (x0 && x0->size() != sys.dim()) {
    result.reason = "initial state dimension mismatch";
    return result;
  }

  std::vector<detail::CertifyCandidate> candidates;
  CorollaryReport rep = check_corollary_class(sys);
  if (rep.found())
    candidates.push_back(
        {sys, *rep.witness, structure_class_name(rep.which), std::nullopt, {}});
  for (auto& red : valid_decompositions(sys)) {
    if (red.species.size() == sys.dim()) continue;  // identity: route 3
    std::optional<StructuralWitness> w;
    std::string cls;
    CorollaryReport sub_rep = check_corollary_class(red.subnetwork);
    if (sub_rep.found()) {
      w = sub_rep.witness;
      cls = structure_class_name(sub_rep.which);
    } else {
      w = search_structural_certificate(red.subnetwork, options.u_max,
                                        options.max_len);
      cls = "search";
    }
    if (!w) continue;
    ReductionInfo info;
    for (auto s : red.species) info.kept_species.push_back(sys.species[s]);
    for (auto s : red.catalysts) info.catalysts.push_back(sys.species[s]);
    candidates.push_back({red.subnetwork, *w, cls, info, red.species});
  }
  if (auto w = search_structural_certificate(sys, options.u_max,
                                             options.max_len))
    candidates.push_back({sys, *w, "search", std::nullopt, {}});

  if (candidates.empty()) {
    result.reason = "no strong tier-1 cycle";
    return result;
  }

  std::string first_reason;
  for (const auto& cand : candidates) {
    std::string reason;
    std::optional<TrappingCycleCertificate> cert;
    try {
      cert = detail::try_candidate(cand, sys, x0, options, &reason);
    } catch (const Error& e) {
      if (e.code() == "parameter") throw;
      reason = e.code();
    }
    if (cert) {
      result.certificate = std::move(cert);
      return result;
    }
    if (first_reason.empty()) first_reason = reason;
  }
  result.reason = first_reason;
  return result;
}

}  // namespace crn
