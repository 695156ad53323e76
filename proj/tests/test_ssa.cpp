#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "crn/forward.hpp"
#include "crn/parser.hpp"
#include "crn/ssa.hpp"
#include "nets.hpp"

using namespace crn;

TEST_CASE("first jump from the boundary ray is forced") {
  ReactionSystem sys = parse_network(nets::kAbb);
  TransitionKernel kernel(sys);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Trajectory traj = simulate_ssa(kernel, {7, 0}, 0.5, seed);
    if (traj.states.size() < 2) continue;
    CHECK(traj.states[1] == State{8, 1});
  }
}

TEST_CASE("trajectories are deterministic given the seed") {
  ReactionSystem sys = parse_network(nets::kAbb);
  TransitionKernel kernel(sys);
  Trajectory a = simulate_ssa(kernel, {0, 0}, 25.0, 42);
  Trajectory b = simulate_ssa(kernel, {0, 0}, 25.0, 42);
  CHECK(a.times == b.times);
  CHECK(a.states == b.states);
  Trajectory c = simulate_ssa(kernel, {0, 0}, 25.0, 43);
  CHECK(a.times != c.times);
}

TEST_CASE("mean first holding time at the origin is 1") {
  ReactionSystem sys = parse_network(nets::kAbb);
  TransitionKernel kernel(sys);
  const std::size_t runs = 100000;
  double sum = 0.0;
  for (std::size_t r = 0; r < runs; ++r) {
    Trajectory traj = simulate_ssa(kernel, {0, 0}, 60.0, r);
    REQUIRE(traj.times.size() >= 2);
    sum += traj.times[1];
  }
  CHECK(std::abs(sum / runs - 1.0) < 0.01);
}

TEST_CASE("jump budget violation raises a structured signal") {
  ReactionSystem sys = parse_network(nets::kAbb);
  TransitionKernel kernel(sys);
  try {
    simulate_ssa(kernel, {0, 0}, 1e9, 7, 100);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == "jump-budget-exceeded");
  }
}

TEST_CASE("empirical law at t=5 matches the forward solve") {
  ReactionSystem sys = parse_network(nets::kAbb);
  TransitionKernel kernel(sys);
  Box box{{25, 25}};
  DistributionVector empirical =
      empirical_distribution(kernel, {0, 0}, 5.0, 100000, 2024, box);
  DistributionVector exact = forward_distribution(kernel, {0, 0}, 5.0, box);
  CHECK(tv_distance(empirical, exact).upper < 0.02);
}

TEST_CASE("ensemble result is independent of the thread count") {
  ReactionSystem sys = parse_network(nets::kAbb);
  TransitionKernel kernel(sys);
  Box box{{15, 15}};
  DistributionVector one =
      empirical_distribution(kernel, {0, 0}, 2.0, 4000, 9, box, 1);
  DistributionVector four =
      empirical_distribution(kernel, {0, 0}, 2.0, 4000, 9, box, 4);
  CHECK(one.mass == four.mass);
  CHECK(one.leaked == four.leaked);
}
