#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "crn/parser.hpp"
#include "nets.hpp"

using namespace crn;

TEST_CASE("reference network parses to four unit-rate reactions") {
  ReactionSystem sys = parse_network("0 <-> A+B\nB <-> 2B");
  CHECK(sys.species == std::vector<std::string>{"A", "B"});
  REQUIRE(sys.reactions.size() == 4);
  for (const auto& r : sys.reactions) CHECK(r.rate == 1.0);
  CHECK(sys.has_reaction(Complex({0, 0}), Complex({1, 1})));
  CHECK(sys.has_reaction(Complex({1, 1}), Complex({0, 0})));
  CHECK(sys.has_reaction(Complex({0, 1}), Complex({0, 2})));
  CHECK(sys.has_reaction(Complex({0, 2}), Complex({0, 1})));
}

TEST_CASE("coefficients and explicit rates") {
  ReactionSystem sys = parse_network("A+B -> 6A+3B [2.5]");
  REQUIRE(sys.reactions.size() == 1);
  CHECK(sys.reactions[0].source.coeffs == std::vector<std::int64_t>{1, 1});
  CHECK(sys.reactions[0].product.coeffs == std::vector<std::int64_t>{6, 3});
  CHECK(sys.reactions[0].rate == 2.5);
}

TEST_CASE("reversible rate conventions") {
  ReactionSystem one = parse_network("A <-> B [3]");
  REQUIRE(one.reactions.size() == 2);
  CHECK(one.reactions[0].rate == 3.0);
  CHECK(one.reactions[1].rate == 3.0);

  ReactionSystem two = parse_network("A <-> B [3, 7]");
  CHECK(two.reactions[0].rate == 3.0);
  CHECK(two.reactions[1].rate == 7.0);
}

TEST_CASE("errors carry spans inside the offending token") {
  auto expect_error = [](const char* text, const char* code) {
    try {
      parse_network(text);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == code);
      REQUIRE(e.span().has_value());
      CHECK(e.span()->end <= std::string(text).size() + 1);
    }
  };
  expect_error("A -> A", "self-loop");
  expect_error("A -> B [1, 2]", "syntax");    // two rates, one direction
  expect_error("A -> 0B", "syntax");          // zero coefficient
  expect_error("A -> ", "syntax");
  expect_error("A => B", "syntax");
  expect_error("A + -> B", "syntax");
}

TEST_CASE("comments and blank lines are ignored") {
  ReactionSystem sys =
      parse_network("# header\n\n0 <-> A+B  # trailing note\n\n# end\n");
  CHECK(sys.reactions.size() == 2);
}

TEST_CASE("error line numbers point at the offending line") {
  try {
    parse_network("0 <-> A+B\n# fine\nA -> A\n");
    CHECK(false);
  } catch (const Error& e) {
    REQUIRE(e.span().has_value());
    CHECK(e.span()->line == 3);
  }
}

TEST_CASE("canonical serialization of the reference network") {
  ReactionSystem sys = parse_network(nets::kAbb);
  CHECK(serialize_network(sys) == "0 <-> A+B [1, 1]\nB <-> 2B [1, 1]");
}

TEST_CASE("empty network serializes to the empty string") {
  ReactionSystem sys;
  CHECK(serialize_network(sys).empty());
}

TEST_CASE("round trip preserves all reactions of a larger network") {
  ReactionSystem sys = parse_network(nets::kDetail1);
  CHECK(sys.reactions.size() == 8);
  ReactionSystem again = parse_network(serialize_network(sys));
  CHECK(again.reactions.size() == 8);
  for (const auto& r : sys.reactions) {
    bool found = false;
    for (const auto& r2 : again.reactions)
      if (r2.source == r.source && r2.product == r.product &&
          r2.rate == r.rate)
        found = true;
    CHECK(found);
  }
}

TEST_CASE("property: arbitrary byte soup never escapes the error contract") {
  std::mt19937_64 rng(424242);
  const char alphabet[] = "AB012 +-<>[],.#\n\t\\xff";
  for (int trial = 0; trial < 3000; ++trial) {
    std::string text;
    std::size_t len = rng() % 40;
    for (std::size_t i = 0; i < len; ++i)
      text += alphabet[rng() % (sizeof(alphabet) - 1)];
    try {
      ReactionSystem sys = parse_network(text);
      // Whatever parses must serialize and reparse cleanly.
      parse_network(serialize_network(sys));
    } catch (const Error& e) {
      CHECK(!e.code().empty());
    }
  }
}

TEST_CASE("property: parse-serialize-parse is stable on random networks") {
  std::mt19937_64 rng(20240817);
  auto random_complex = [&](std::size_t d) {
    Complex c;
    for (std::size_t i = 0; i < d; ++i)
      c.coeffs.push_back(static_cast<std::int64_t>(rng() % 4));
    return c;
  };
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t d = 1 + rng() % 4;
    ReactionSystem sys;
    for (std::size_t i = 0; i < d; ++i)
      sys.species.push_back(std::string(1, static_cast<char>('A' + i)));
    std::size_t want = 1 + rng() % 5;
    for (std::size_t k = 0; k < want; ++k) {
      Reaction r;
      r.source = random_complex(d);
      r.product = random_complex(d);
      if (r.source == r.product) continue;
      if (sys.has_reaction(r.source, r.product)) continue;
      r.rate = std::ldexp(static_cast<double>(1 + rng() % (1 << 20)), -10);
      sys.reactions.push_back(r);
    }
    if (sys.reactions.empty()) continue;

    ReactionSystem p1 = parse_network(serialize_network(sys));
    std::string s1 = serialize_network(p1);
    ReactionSystem p2 = parse_network(s1);
    std::string s2 = serialize_network(p2);
    CHECK(s1 == s2);
    CHECK(p1.reactions.size() == sys.reactions.size());
    for (const auto& r : sys.reactions) {
      bool found = false;
      for (const auto& r2 : p2.reactions) {
        // Species order may differ; compare through names.
        bool same = r2.rate == r.rate;
        for (std::size_t i = 0; i < d && same; ++i) {
          std::size_t j = 0;
          while (j < p2.species.size() && p2.species[j] != sys.species[i]) ++j;
          if (j == p2.species.size()) {
            // Species absent from every reaction; must be zero here too.
            same = r.source.coeffs[i] == 0 && r.product.coeffs[i] == 0;
          } else {
            same = r2.source.coeffs[j] == r.source.coeffs[i] &&
                   r2.product.coeffs[j] == r.product.coeffs[i];
          }
        }
        if (same) found = true;
      }
      CHECK(found);
    }
  }
}
