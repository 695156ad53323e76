#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "crn/model.hpp"
#include "crn/parser.hpp"
#include "nets.hpp"

using namespace crn;

namespace {
std::size_t find_reaction(const ReactionSystem& sys,
                          const std::vector<std::int64_t>& src,
                          const std::vector<std::int64_t>& prod) {
  for (std::size_t r = 0; r < sys.reactions.size(); ++r)
    if (sys.reactions[r].source.coeffs == src &&
        sys.reactions[r].product.coeffs == prod)
      return r;
  REQUIRE(false);
  return 0;
}
}  // namespace

TEST_CASE("mass-action intensity counts ordered combinations") {
  ReactionSystem sys = parse_network(nets::kAbb);
  std::size_t consume = find_reaction(sys, {1, 1}, {0, 0});
  CHECK(evaluate_intensity(sys, consume, {3, 2}) == doctest::Approx(6.0));

  std::size_t merge = find_reaction(sys, {0, 2}, {0, 1});
  CHECK(evaluate_intensity(sys, merge, {5, 1}) == 0.0);

  std::size_t branch = find_reaction(sys, {0, 1}, {0, 2});
  for (std::int64_t n : {0, 1, 5, 100})
    CHECK(evaluate_intensity(sys, branch, {n + 1, 1}) == doctest::Approx(1.0));
}

TEST_CASE("intensity positivity matches componentwise domination") {
  ReactionSystem sys = parse_network("2A+B -> A\n");
  const Complex& y = sys.reactions[0].source;
  for (std::int64_t a = 0; a <= 4; ++a)
    for (std::int64_t b = 0; b <= 4; ++b) {
      bool dominated = a >= 2 && b >= 1;
      CHECK((combinatorial_intensity(y, {a, b}) > 0.0) == dominated);
    }
}

TEST_CASE("intensity is monotone above the source") {
  ReactionSystem sys = parse_network("2A+B -> A\n");
  for (std::int64_t a = 2; a <= 6; ++a)
    for (std::int64_t b = 1; b <= 6; ++b) {
      double base = evaluate_intensity(sys, 0, {a, b});
      CHECK(evaluate_intensity(sys, 0, {a + 1, b}) >= base);
      CHECK(evaluate_intensity(sys, 0, {a, b + 1}) >= base);
    }
}

TEST_CASE("empty-source intensity is the bare rate constant") {
  ReactionSystem sys = parse_network("0 -> A+B [2.5]\n");
  for (std::int64_t a = 0; a <= 7; a += 3)
    for (std::int64_t b = 0; b <= 7; b += 3)
      CHECK(evaluate_intensity(sys, 0, {a, b}) == doctest::Approx(2.5));
}

TEST_CASE("exact and floating intensities agree on small states") {
  ReactionSystem sys = parse_network("2A+3B -> A\n");
  const Complex& y = sys.reactions[0].source;
  for (std::int64_t a = 0; a <= 8; ++a)
    for (std::int64_t b = 0; b <= 8; ++b) {
      double exact_val =
          static_cast<double>(combinatorial_intensity_exact(y, {a, b}));
      CHECK(exact_val == doctest::Approx(combinatorial_intensity(y, {a, b})));
    }
}

TEST_CASE("dimension mismatch raises a structured error") {
  ReactionSystem sys = parse_network(nets::kAbb);
  try {
    evaluate_intensity(sys, 0, {1, 2, 3});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == "dimension-mismatch");
    CHECK(std::string(e.what()).find("0") != std::string::npos);
  }
}

TEST_CASE("validate_network accepts the reference network") {
  ReactionSystem sys = parse_network(nets::kAbb);
  CHECK(validate_network(sys).ok());
  CHECK(sys.reactions.size() == 4);
  CHECK(sys.species == std::vector<std::string>{"A", "B"});
}

TEST_CASE("validate_network reports violations") {
  ReactionSystem sys;
  sys.species = {"A"};
  Reaction self;
  self.source.coeffs = {1};
  self.product.coeffs = {1};
  self.rate = 1.0;
  sys.reactions.push_back(self);
  Reaction dead;
  dead.source.coeffs = {1};
  dead.product.coeffs = {0};
  dead.rate = 0.0;
  sys.reactions.push_back(dead);
  sys.reactions.push_back(dead);  // duplicate

  auto report = validate_network(sys);
  CHECK(!report.ok());
  auto has = [&](const std::string& code) {
    for (const auto& f : report.findings)
      if (f.code == code) return true;
    return false;
  };
  CHECK(has("self-loop"));
  CHECK(has("nonpositive-rate"));
  CHECK(has("duplicate-reaction"));
}
