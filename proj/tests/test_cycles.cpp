#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "crn/parser.hpp"
#include "crn/tier.hpp"
#include "nets.hpp"

using namespace crn;

TEST_CASE("reversible pairs give exactly the two 2-cycles") {
  ReactionSystem sys = parse_network(nets::kAbb);
  auto cycles = enumerate_cycles(sys, 2);
  REQUIRE(cycles.size() == 2);
  for (const auto& c : cycles) {
    CHECK(c.reactions.size() == 2);
    CHECK(cycle_is_well_formed(sys, c));
  }
  // Canonical order: by reaction index sequence.
  CHECK(cycles[0].reactions == std::vector<std::size_t>{0, 1});
  CHECK(cycles[1].reactions == std::vector<std::size_t>{2, 3});
}

TEST_CASE("three-cycle is found in the totally ordered network") {
  ReactionSystem sys = parse_network(nets::kStructural1);
  auto cycles = enumerate_cycles(sys, 6);
  bool found = false;
  for (const auto& c : cycles)
    if (c.reactions == std::vector<std::size_t>{0, 1, 2}) found = true;
  CHECK(found);
}

TEST_CASE("acyclic network yields no cycles") {
  ReactionSystem sys = parse_network("A -> B");
  CHECK(enumerate_cycles(sys, 6).empty());
}

TEST_CASE("max length bounds the enumeration") {
  ReactionSystem sys = parse_network(nets::kStructural4);
  auto short_only = enumerate_cycles(sys, 2);
  REQUIRE(short_only.size() == 1);
  CHECK(short_only[0].reactions == std::vector<std::size_t>{3, 4});
  auto all = enumerate_cycles(sys, 3);
  CHECK(all.size() == 2);
  CHECK(all[0].reactions == std::vector<std::size_t>{3, 4});
  CHECK(all[1].reactions == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("every enumerated cycle is well formed and rotation-canonical") {
  ReactionSystem sys = parse_network(nets::kDetail1);
  for (const auto& c : enumerate_cycles(sys, 6)) {
    CHECK(cycle_is_well_formed(sys, c));
    CHECK(*std::min_element(c.reactions.begin(), c.reactions.end()) ==
          c.reactions.front());
  }
}
