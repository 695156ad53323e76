#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <thread>
#include <vector>

#include "crn/certify.hpp"
#include "crn/distribution.hpp"
#include "crn/forward.hpp"
#include "crn/kernel.hpp"

namespace crn {

// ---------------------------------------------------------------------------
// Total-variation decay curves

struct DecayCurve {
  State initial;
  std::vector<double> times;
  std::vector<TvInterval> tv;
  // Least-squares slope of log(tv_upper) on the window where the upper
  // bound lies in [window_lo, window_hi]; 0 when fewer than two points.
  double log_slope = 0.0;
  std::size_t window_points = 0;
};

struct TvDecayConfig {
  double window_lo = 1e-6;
  double window_hi = 0.5;
  double max_leak = 0.1;
};

inline std::vector<DecayCurve> tv_decay_report(
    const ReactionSystem& sys, const std::vector<State>& initials,
    const Box& box, const std::vector<double>& t_grid,
    const DistributionVector& target, TvDecayConfig config = {}) {
  TransitionKernel kernel(sys);
  UniformizedSolver solver(kernel, box);
  std::vector<DecayCurve> curves;
  for (const auto& x0 : initials) {
    DecayCurve curve;
    curve.initial = x0;
    DistributionVector dist = point_mass(box, x0);
    double t_cur = 0.0;
    for (double t : t_grid) {
      if (t < t_cur) throw Error("parameter", "time grid must be ascending");
      solver.advance(dist, t - t_cur);
      t_cur = t;
      if (dist.leaked > config.max_leak)
        throw Error("truncation-too-small",
                    "leaked mass exceeds " + std::to_string(config.max_leak) +
                        " at t=" + std::to_string(t));
      curve.times.push_back(t);
      curve.tv.push_back(tv_distance(dist, target));
    }
    // Slope fit over the window.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < curve.times.size(); ++i) {
      double u = curve.tv[i].upper;
      if (u < config.window_lo || u > config.window_hi) continue;
      double x = curve.times[i], y = std::log(u);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++n;
    }
    if (n >= 2 && (n * sxx - sx * sx) > 0)
      curve.log_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    curve.window_points = n;
    curves.push_back(std::move(curve));
  }
  return curves;
}

// ---------------------------------------------------------------------------
// Divergence witness: compounded return-path MGF lower bounds

// L_j = F(in, rho) * F(cycle, rho)^j * F(out, rho), a lower bound on the
// exponential moment of the return time to x0. Unbounded growth in j
// witnesses a divergent moment.
struct DivergenceWitness {
  Path connector_in;   // x0 -> cycle base, avoiding x0 in the interior
  Path connector_out;  // cycle base -> x0
  double f_in = 0.0;
  double f_out = 0.0;
  double f_cycle = 0.0;
  std::vector<double> lower_bounds;  // L_1..L_jmax
};

inline DivergenceWitness divergence_witness(const TransitionKernel& kernel,
                                            const TrappingCycleCertificate& cert,
                                            const State& x0, const Box& box,
                                            std::size_t j_max) {
  DivergenceWitness w;
  const State& base = cert.witness_state;
  std::vector<State> avoid{x0};
  auto in = reachable(kernel, x0, base, box, avoid);
  if (!in)
    throw Error("connector-not-found",
                "no active path from the base state to the cycle in the box");
  auto out = reachable(kernel, base, x0, box, avoid);
  if (!out)
    throw Error("connector-not-found",
                "no active path from the cycle back to the base state");
  w.connector_in = *in;
  w.connector_out = *out;
  w.f_in = w.connector_in.size() >= 2 ? path_mgf(kernel, w.connector_in, cert.rho)
                                      : 1.0;
  w.f_out = w.connector_out.size() >= 2
                ? path_mgf(kernel, w.connector_out, cert.rho)
                : 1.0;
  w.f_cycle = path_mgf(kernel, cert.witness_path, cert.rho);
  double l = w.f_in * w.f_out;
  for (std::size_t j = 1; j <= j_max; ++j) {
    l *= w.f_cycle;
    w.lower_bounds.push_back(l);
  }
  return w;
}

// ---------------------------------------------------------------------------
// Generic trapping-cycle search over a truncated box

// Exhaustive search over closed active paths with at most max_len states
// (including the repeated endpoint) for path MGF > 1. Works on any
// kernel; no structural input. When a base state is supplied, cycles
// through it are excluded (a trapping path must avoid the return base).
// Deterministic: states scan in box index order, transitions in kernel
// order, and the first maximizer is kept.
inline std::optional<std::pair<Path, double>> find_trapping_cycle(
    const TransitionKernel& kernel, double rho, const Box& box,
    std::size_t max_len, std::optional<State> base = std::nullopt) {
  if (rho < 0.0) throw Error("rho-out-of-range", "rho must be >= 0");
  std::optional<std::pair<Path, double>> best;
  const std::size_t n = box.size();
  std::vector<double> qcache(n, -1.0);
  auto total = [&](const State& s) {
    std::size_t idx = box.index_of(s);
    if (qcache[idx] < 0.0) qcache[idx] = kernel.total_rate(s);
    return qcache[idx];
  };
  // rho must stay below every holding rate on the path.
  Path stack;
  std::function<void(const State&, const State&, double)> dfs =
      [&](const State& start, const State& cur, double product) {
        for (const auto& tr : kernel.out_transitions(cur)) {
          if (!box.contains(tr.target)) continue;
          double q = total(cur);
          if (rho >= q) continue;
          double factor = tr.rate / (q - rho);
          if (tr.target == start && stack.size() >= 2) {
            double f = product * factor;
            if (f > 1.0 && (!best || f > best->second)) {
              Path cycle = stack;
              cycle.push_back(start);
              best = {cycle, f};
            }
          }
          if (stack.size() + 1 < max_len) {
            // Only descend to states above the start in box order, so
            // each cycle is visited once (at its minimal state).
            if (box.index_of(tr.target) <= box.index_of(start)) continue;
            if (base && tr.target == *base) continue;
            stack.push_back(tr.target);
            dfs(start, tr.target, product * factor);
            stack.pop_back();
          }
        }
      };
  for (std::size_t idx = 0; idx < n; ++idx) {
    State s = box.state_at(idx);
    if (base && s == *base) continue;
    stack = {s};
    dfs(s, s, 1.0);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Congestion ratio

struct CongestionReport {
  // Directed edges with their load terms, in deterministic order.
  std::vector<std::pair<std::pair<State, State>, double>> edge_terms;
  double supremum = 0.0;
  std::size_t disconnected_pairs = 0;
};

// Path-congestion diagnostic: one shortest active path per unordered
// communicating state pair, oriented from the box-order larger state
// toward the smaller (outbound traffic from far states accumulates on
// their exit edges). Edge load = sum |gamma| pi(z) pi(w) over routed
// pairs divided by the edge capacity q_{s,u} pi(s). Work is chunked
// deterministically, so the result does not depend on the thread count.
inline CongestionReport congestion_ratio(const TransitionKernel& kernel,
                                         const DistributionVector& pi,
                                         const Box& box) {
  const std::size_t n = box.size();
  // Adjacency restricted to the box.
  std::vector<std::vector<std::pair<std::size_t, double>>> adj(n);
  for (std::size_t i = 0; i < n; ++i) {
    State z = box.state_at(i);
    for (const auto& tr : kernel.out_transitions(z))
      if (box.contains(tr.target))
        adj[i].push_back({box.index_of(tr.target), tr.rate});
  }

  const std::size_t chunk_count = 8;  // fixed for determinism
  struct ChunkResult {
    std::map<std::pair<std::size_t, std::size_t>, double> load;
    std::size_t disconnected = 0;
  };
  std::vector<ChunkResult> chunks(chunk_count);

  auto run_chunk = [&](std::size_t c) {
    ChunkResult& out = chunks[c];
    for (std::size_t src = c; src < n; src += chunk_count) {
      // BFS tree from src; parent expansion in adjacency order gives a
      // deterministic shortest path per target.
      std::vector<std::size_t> parent(n, SIZE_MAX);
      std::vector<std::size_t> depth(n, 0);
      std::vector<std::size_t> order;
      parent[src] = src;
      order.push_back(src);
      for (std::size_t head = 0; head < order.size(); ++head) {
        std::size_t u = order[head];
        for (const auto& [v, rate] : adj[u]) {
          if (parent[v] != SIZE_MAX) continue;
          parent[v] = u;
          depth[v] = depth[u] + 1;
          order.push_back(v);
        }
      }
      for (std::size_t dst = 0; dst < src; ++dst) {
        if (parent[dst] == SIZE_MAX) {
          ++out.disconnected;
          continue;
        }
        double weight =
            static_cast<double>(depth[dst] + 1) * pi.mass[src] * pi.mass[dst];
        std::size_t v = dst;
        while (v != src) {
          std::size_t u = parent[v];
          out.load[{u, v}] += weight;
          v = u;
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t c = 0; c < chunk_count; ++c)
    pool.emplace_back(run_chunk, c);
  for (auto& th : pool) th.join();

  std::map<std::pair<std::size_t, std::size_t>, double> load;
  std::size_t disconnected = 0;
  for (const auto& chunk : chunks) {
    for (const auto& [edge, v] : chunk.load) load[edge] += v;
    disconnected += chunk.disconnected;
  }

  CongestionReport report;
  report.disconnected_pairs = disconnected;
  for (std::size_t i = 0; i < n; ++i) {
    State s = box.state_at(i);
    for (const auto& [j, rate] : adj[i]) {
      auto it = load.find({i, j});
      double sum = it == load.end() ? 0.0 : it->second;
      double capacity = rate * pi.mass[i];
      double term = capacity > 0.0 ? sum / capacity : 0.0;
      report.edge_terms.push_back({{s, box.state_at(j)}, term});
      report.supremum = std::max(report.supremum, term);
    }
  }
  return report;
}

inline double congestion_edge_term(const CongestionReport& report,
                                   const State& from, const State& to) {
  for (const auto& [edge, term] : report.edge_terms)
    if (edge.first == from && edge.second == to) return term;
  return 0.0;
}

}  // namespace crn
