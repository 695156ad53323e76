#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "crn/certify.hpp"
#include "crn/diagnostics.hpp"
#include "crn/model.hpp"
#include "crn/structure.hpp"

namespace crn {

using json = nlohmann::ordered_json;

inline json to_json(const Complex& c) { return json(c.coeffs); }

inline json to_json(const State& s) { return json(s); }

inline json to_json(const Path& p) {
  json arr = json::array();
  for (const auto& s : p) arr.push_back(s);
  return arr;
}

inline json to_json(const ValidationReport& report) {
  json findings = json::array();
  for (const auto& f : report.findings)
    findings.push_back({{"code", f.code},
                        {"message", f.message},
                        {"reaction", f.reaction}});
  return json{{"ok", report.ok()}, {"findings", findings}};
}

inline json to_json(const DeficiencyReport& rep) {
  return json{{"complexes", rep.complex_count},
              {"linkage_classes", rep.linkage_class_count},
              {"stoich_dimension", rep.stoich_dimension},
              {"deficiency", rep.deficiency}};
}

inline json to_json(const BalanceWitness& w) {
  return json{{"kind", w.kind == BalanceWitness::Kind::detailed ? "detailed"
                                                                : "complex"},
              {"concentrations", w.concentrations},
              {"residual", w.residual},
              {"family", w.family}};
}

inline json analysis_to_json(const ReactionSystem& sys) {
  json out;
  out["species"] = sys.species;
  json classes = json::array();
  for (const auto& cls : linkage_classes(sys)) {
    json c = json::array();
    for (const auto& cplx : cls) c.push_back(to_json(cplx));
    classes.push_back(c);
  }
  out["linkage_classes"] = classes;
  out["weakly_reversible"] = is_weakly_reversible(sys);
  out["deficiency"] = to_json(deficiency(sys));
  auto det = solve_detailed_balance(sys);
  out["detailed_balance"] = det ? to_json(*det) : json(nullptr);
  auto cb = solve_complex_balance(sys);
  out["complex_balance"] = cb ? to_json(*cb) : json(nullptr);
  return out;
}

inline json to_json(const ReactionSystem& sys,
                    const TrappingCycleCertificate& cert) {
  json out;
  out["species"] = cert.system.species;
  json cycle = json::array();
  for (auto r : cert.cycle.reactions) {
    const Reaction& rx = cert.system.reactions[r];
    cycle.push_back(json::array({to_json(rx.source), to_json(rx.product)}));
  }
  out["cycle"] = cycle;
  out["u"] = cert.tier.u;
  out["base"] = cert.tier.b;
  out["m0"] = cert.m0 + 1;  // 1-based in reports
  out["rho"] = cert.rho;
  out["n_star"] = cert.n_star;
  out["F_value"] = cert.f_value;
  out["F_margin"] = cert.f_value - 1.0;
  out["witness_state"] = cert.witness_state;
  json witnesses = json::object();
  for (const auto& [n, path] : cert.membership_witnesses)
    witnesses[std::to_string(n)] = to_json(path);
  out["membership"] = json{{"lattice", cert.lattice_ok},
                           {"sequence_adjusted", cert.sequence_adjusted},
                           {"witnesses", witnesses},
                           {"reaction_counts", cert.reaction_counts}};
  out["ergodicity_basis"] = cert.ergodicity_basis;
  out["corollary"] = cert.structure_class;
  if (cert.reduction) {
    out["reduction"] = json{{"species", cert.reduction->kept_species},
                            {"catalysts", cert.reduction->catalysts}};
  } else {
    out["reduction"] = json(nullptr);
  }
  out["search_bounds"] =
      json{{"u_max", cert.search_u_max}, {"max_len", cert.search_max_len}};
  (void)sys;
  return out;
}

inline json to_json(const CongestionReport& report) {
  json edges = json::array();
  for (const auto& [edge, term] : report.edge_terms)
    edges.push_back(json{{"from", edge.first},
                         {"to", edge.second},
                         {"term", term}});
  return json{{"supremum", report.supremum},
              {"disconnected_pairs", report.disconnected_pairs},
              {"edges", edges}};
}

inline json error_to_json(const Error& e) {
  json out{{"code", e.code()}, {"message", e.what()}};
  if (e.span()) {
    out["span"] = json{{"line", e.span()->line},
                       {"column", e.span()->column},
                       {"begin", e.span()->begin},
                       {"end", e.span()->end}};
  }
  return out;
}

}  // namespace crn
