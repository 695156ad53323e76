#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "crn/corollaries.hpp"
#include "crn/parser.hpp"
#include "nets.hpp"

using namespace crn;

TEST_CASE("totally ordered single-exit cycle through 0 classifies as cor1") {
  ReactionSystem sys = parse_network(nets::kStructural1);
  auto rep = check_corollary_class(sys);
  CHECK(rep.which == StructureClass::kCor1);
  REQUIRE(rep.witness.has_value());
  CHECK(rep.witness->cycle.reactions == std::vector<std::size_t>{0, 1, 2});
  CHECK(rep.witness->tier.u == std::vector<std::int64_t>{1, 0, 0});
  CHECK(sys.reactions[rep.witness->cycle.reactions[rep.witness->m0]]
            .source.is_empty());
}

TEST_CASE("pure two-species cycle classifies as cor2") {
  ReactionSystem sys = parse_network(nets::kStructure2);
  auto rep = check_corollary_class(sys);
  CHECK(rep.which == StructureClass::kCor2);
  REQUIRE(rep.witness.has_value());
  // anchor is the minimal complex A+B
  const Complex& anchor =
      sys.reactions[rep.witness->cycle.reactions[rep.witness->m0]].source;
  CHECK(anchor.coeffs == std::vector<std::int64_t>{1, 1});
  CHECK(rep.witness->tier.u == std::vector<std::int64_t>{1, 0});
  CHECK(rep.witness->tier.b == std::vector<std::int64_t>{1, 1});
}

TEST_CASE("reference network classifies as cor3") {
  ReactionSystem sys = parse_network(nets::kAbb);
  auto rep = check_corollary_class(sys);
  CHECK(rep.which == StructureClass::kCor3);
  REQUIRE(rep.staircase.has_value());
  CHECK(rep.staircase->i1 == 0);
  CHECK(rep.staircase->i2 == 1);
  // f(0) = 0, f(l) = 1 for l >= 1 for the chain (0,0) < (1,1).
  CHECK(rep.staircase->eval(0) == 0);
  CHECK(rep.staircase->eval(1) == 1);
  CHECK(rep.staircase->eval(10) == 1);
}

TEST_CASE("three-species extension classifies as cor4") {
  ReactionSystem sys = parse_network(nets::kExtension);
  auto rep = check_corollary_class(sys);
  CHECK(rep.which == StructureClass::kCor4);
  REQUIRE(rep.witness.has_value());
  CHECK(rep.pair == std::vector<std::size_t>{0, 1});
  CHECK(rep.witness->tier.u == std::vector<std::int64_t>{1, 0, 0});
}

TEST_CASE("exponentially ergodic comparison matches no class") {
  ReactionSystem sys = parse_network(nets::kComparison);
  CHECK(check_corollary_class(sys).which == StructureClass::kNone);
}

TEST_CASE("bare reversible pair matches no class") {
  ReactionSystem sys = parse_network(nets::kAbbOnly);
  CHECK(check_corollary_class(sys).which == StructureClass::kNone);
}

TEST_CASE("catalyzed extension fails cor4 but reduces to the subnetwork") {
  ReactionSystem sys = parse_network(nets::kDetail1);
  CHECK(check_corollary_class(sys).which == StructureClass::kNone);
  auto red = catalytic_reduction(sys);
  REQUIRE(red.has_value());
  CHECK(red->species == std::vector<std::size_t>{0, 1});
  CHECK(red->catalysts == std::vector<std::size_t>{0});
  CHECK(red->subnetwork.species == std::vector<std::string>{"A", "B"});
  CHECK(red->subnetwork.reactions.size() == 4);
  CHECK(serialize_network(red->subnetwork) ==
        "0 <-> A+B [1, 1]\nB <-> 2B [1, 1]");
  CHECK(check_corollary_class(red->subnetwork).which == StructureClass::kCor3);
}

TEST_CASE("reduction keeps the whole network when nothing is catalyzed") {
  ReactionSystem sys = parse_network(nets::kAbb);
  auto red = catalytic_reduction(sys);
  REQUIRE(red.has_value());
  CHECK(red->species == std::vector<std::size_t>{0, 1});
  CHECK(red->catalysts.empty());
  CHECK(red->reactions.size() == sys.reactions.size());
}

TEST_CASE("reduction fails when no subnetwork certifies") {
  ReactionSystem sys = parse_network(nets::kComparison);
  CHECK(!catalytic_reduction(sys).has_value());
}

TEST_CASE("staircase helper reproduces the step function") {
  ReactionSystem sys = parse_network(nets::kStructure2);
  StaircaseF f;
  f.i1 = 0;
  f.i2 = 1;
  f.ordered = {Complex({1, 1}), Complex({3, 2}), Complex({6, 3})};
  CHECK(f.eval(0) == 0);
  CHECK(f.eval(1) == 1);
  CHECK(f.eval(2) == 1);
  CHECK(f.eval(3) == 2);
  CHECK(f.eval(5) == 2);
  CHECK(f.eval(6) == 3);
  CHECK(f.eval(100) == 3);
}

TEST_CASE("cor4 direct classification of the remaining catalytic examples") {
  // C+B <-> B keeps its third-species complex off the pair support, so
  // the staircase never sees it.
  ReactionSystem d3 = parse_network(nets::kDetail3);
  CHECK(check_corollary_class(d3).which == StructureClass::kCor4);

  ReactionSystem cne = parse_network(nets::kComplexNonexpo);
  auto rep = check_corollary_class(cne);
  CHECK(rep.which == StructureClass::kCor4);
  REQUIRE(rep.witness.has_value());
  CHECK(rep.witness->tier.u == std::vector<std::int64_t>{1, 0, 0, 0});

  // A free-standing complex A on the pair support blocks cor4.
  ReactionSystem d2 = parse_network(nets::kDetail2);
  CHECK(check_corollary_class(d2).which == StructureClass::kNone);
  auto red = catalytic_reduction(d2);
  REQUIRE(red.has_value());
  CHECK(red->subnetwork.species == std::vector<std::string>{"A", "B"});
}

TEST_CASE("four-species cycle needs the grid search, not a corollary") {
  ReactionSystem sys = parse_network(nets::kFourSpecies);
  CHECK(check_corollary_class(sys).which == StructureClass::kNone);
  // No proper species subset decouples; only the identity decomposition
  // remains, and it certifies through the grid search.
  auto red = catalytic_reduction(sys);
  REQUIRE(red.has_value());
  CHECK(red->species.size() == sys.dim());
  CHECK(red->catalysts.empty());
}
