#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <thread>
#include <vector>

#include "crn/distribution.hpp"
#include "crn/kernel.hpp"

namespace crn {

struct Trajectory {
  std::vector<double> times;   // jump times, starting with 0
  std::vector<State> states;   // states entered at those times
};

namespace detail {
// Stable stream-splitting so ensemble results do not depend on the
// thread count.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline double uniform01(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}
}  // namespace detail

// Exact stochastic simulation: exponential holding times with rate q_z,
// next state proportional to q_{z,w}. Deterministic given the seed.
inline Trajectory simulate_ssa(const TransitionKernel& kernel, const State& x0,
                               double t_end, std::uint64_t seed,
                               std::size_t max_jumps = 10'000'000) {
  if (!(t_end > 0.0)) throw Error("negative-time", "t_end must be > 0");
  std::mt19937_64 rng(detail::splitmix64(seed));
  Trajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(x0);
  State z = x0;
  double t = 0.0;
  for (std::size_t jumps = 0;; ++jumps) {
    if (jumps >= max_jumps)
      throw Error("jump-budget-exceeded",
                  "trajectory exceeded " + std::to_string(max_jumps) +
                      " jumps before t_end");
    auto trans = kernel.out_transitions(z);
    double q = 0.0;
    for (const auto& tr : trans) q += tr.rate;
    if (q <= 0.0) break;  // absorbing
    t += -std::log(detail::uniform01(rng)) / q;
    if (t >= t_end) break;
    double u = detail::uniform01(rng) * q;
    std::size_t pick = trans.size() - 1;
    double csum = 0.0;
    for (std::size_t i = 0; i < trans.size(); ++i) {
      csum += trans[i].rate;
      if (u <= csum) {
        pick = i;
        break;
      }
    }
    z = trans[pick].target;
    traj.times.push_back(t);
    traj.states.push_back(z);
  }
  return traj;
}

inline State trajectory_state_at(const Trajectory& traj, double t) {
  std::size_t lo = 0;
  for (std::size_t i = 0; i < traj.times.size(); ++i)
    if (traj.times[i] <= t) lo = i;
  return traj.states[lo];
}

// Empirical law at time t over `runs` independent trajectories; mass on
// states outside the box is reported as leaked. Runs are distributed
// over threads with per-run derived seeds, so the result is identical
// for any thread count.
inline DistributionVector empirical_distribution(const TransitionKernel& kernel,
                                                 const State& x0, double t,
                                                 std::size_t runs,
                                                 std::uint64_t seed,
                                                 const Box& box,
                                                 std::size_t threads = 0) {
  if (threads == 0)
    threads = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  std::vector<std::vector<double>> partial(
      threads, std::vector<double>(box.size(), 0.0));
  std::vector<double> partial_leak(threads, 0.0);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&, w]() {
      for (std::size_t r = w; r < runs; r += threads) {
        Trajectory traj = simulate_ssa(kernel, x0, t + 1e-12,
                                       detail::splitmix64(seed) + r);
        State s = trajectory_state_at(traj, t);
        if (box.contains(s))
          partial[w][box.index_of(s)] += 1.0;
        else
          partial_leak[w] += 1.0;
      }
    });
  }
  for (auto& th : pool) th.join();
  DistributionVector d;
  d.box = box;
  d.mass.assign(box.size(), 0.0);
  for (std::size_t w = 0; w < threads; ++w) {
    for (std::size_t i = 0; i < d.mass.size(); ++i)
      d.mass[i] += partial[w][i];
    d.leaked += partial_leak[w];
  }
  double inv = 1.0 / static_cast<double>(runs);
  for (auto& m : d.mass) m *= inv;
  d.leaked *= inv;
  return d;
}

}  // namespace crn
