#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "crn/error.hpp"

namespace crn {

using State = std::vector<std::int64_t>;

// A complex is a formal nonnegative-integer combination of species,
// stored as a coefficient vector in species declaration order.
struct Complex {
  std::vector<std::int64_t> coeffs;

  Complex() = default;
  explicit Complex(std::vector<std::int64_t> c) : coeffs(std::move(c)) {}

  std::size_t dim() const { return coeffs.size(); }
  std::int64_t operator[](std::size_t i) const { return coeffs[i]; }
  bool is_empty() const {
    return std::all_of(coeffs.begin(), coeffs.end(),
                       [](std::int64_t c) { return c == 0; });
  }
  std::int64_t molecularity() const {
    std::int64_t total = 0;
    for (auto c : coeffs) total += c;
    return total;
  }

  friend bool operator==(const Complex& a, const Complex& b) {
    return a.coeffs == b.coeffs;
  }
  // Componentwise strict order; only a partial order.
  friend bool operator<(const Complex& a, const Complex& b) {
    if (a.dim() != b.dim()) return false;
    for (std::size_t i = 0; i < a.dim(); ++i)
      if (a.coeffs[i] >= b.coeffs[i]) return false;
    return true;
  }
};

inline bool leq_componentwise(const Complex& a, const Complex& b) {
  if (a.dim() != b.dim()) return false;
  for (std::size_t i = 0; i < a.dim(); ++i)
    if (a.coeffs[i] > b.coeffs[i]) return false;
  return true;
}

struct Reaction {
  Complex source;
  Complex product;
  double rate = 1.0;  // kappa, per combination per unit time

  std::vector<std::int64_t> net_change() const {
    std::vector<std::int64_t> v(source.dim());
    for (std::size_t i = 0; i < v.size(); ++i)
      v[i] = product.coeffs[i] - source.coeffs[i];
    return v;
  }
};

struct ReactionSystem {
  std::vector<std::string> species;
  std::vector<Reaction> reactions;

  std::size_t dim() const { return species.size(); }

  // Distinct complexes in first-appearance order (sources before products
  // within each reaction).
  std::vector<Complex> complexes() const {
    std::vector<Complex> out;
    auto add = [&](const Complex& c) {
      if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
    };
    for (const auto& r : reactions) {
      add(r.source);
      add(r.product);
    }
    return out;
  }

  std::vector<Complex> source_complexes() const {
    std::vector<Complex> out;
    for (const auto& r : reactions)
      if (std::find(out.begin(), out.end(), r.source) == out.end())
        out.push_back(r.source);
    return out;
  }

  // Indices of reactions whose source is `y`.
  std::vector<std::size_t> reactions_from(const Complex& y) const {
    std::vector<std::size_t> out;
    for (std::size_t r = 0; r < reactions.size(); ++r)
      if (reactions[r].source == y) out.push_back(r);
    return out;
  }

  bool has_reaction(const Complex& src, const Complex& prod) const {
    for (const auto& r : reactions)
      if (r.source == src && r.product == prod) return true;
    return false;
  }
};

// Number of ordered reactant combinations: prod_i x_i!/(x_i-y_i)!,
// zero unless x >= y componentwise.
inline double combinatorial_intensity(const Complex& y, const State& x) {
  if (y.dim() != x.size())
    throw Error("dimension-mismatch",
                "complex has dimension " + std::to_string(y.dim()) +
                    " but state has dimension " + std::to_string(x.size()));
  double prod = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < y.coeffs[i]) return 0.0;
    for (std::int64_t k = 0; k < y.coeffs[i]; ++k)
      prod *= static_cast<double>(x[i] - k);
  }
  return prod;
}

// Exact integer value of the combinatorial part, for structural checks
// that compare ratios. Throws on overflow rather than wrapping.
inline __int128 combinatorial_intensity_exact(const Complex& y,
                                              const State& x) {
  if (y.dim() != x.size())
    throw Error("dimension-mismatch", "state/complex dimension mismatch");
  __int128 prod = 1;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < y.coeffs[i]) return 0;
    for (std::int64_t k = 0; k < y.coeffs[i]; ++k) {
      __int128 f = x[i] - k;
      if (f != 0 && prod > (__int128(1) << 120) / f)
        throw Error("overflow", "exact intensity exceeds 128-bit range");
      prod *= f;
    }
  }
  return prod;
}

// log of the combinatorial part; -inf when blocked. Used where the exact
// value would overflow.
inline double log_combinatorial_intensity(const Complex& y, const State& x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < y.coeffs[i])
      return -std::numeric_limits<double>::infinity();
    for (std::int64_t k = 0; k < y.coeffs[i]; ++k)
      s += std::log(static_cast<double>(x[i] - k));
  }
  return s;
}

inline double evaluate_intensity(const ReactionSystem& sys,
                                 std::size_t reaction_index, const State& x) {
  if (reaction_index >= sys.reactions.size())
    throw Error("dimension-mismatch",
                "reaction index " + std::to_string(reaction_index) +
                    " out of range");
  const Reaction& r = sys.reactions[reaction_index];
  if (x.size() != sys.dim())
    throw Error("dimension-mismatch",
                "state has dimension " + std::to_string(x.size()) +
                    " but reaction " + std::to_string(reaction_index) +
                    " expects " + std::to_string(sys.dim()));
  return r.rate * combinatorial_intensity(r.source, x);
}

inline double min_rate_constant(const ReactionSystem& sys) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& r : sys.reactions) m = std::min(m, r.rate);
  return m;
}

struct ValidationFinding {
  std::string code;     // "self-loop", "nonpositive-rate", ...
  std::string message;
  std::size_t reaction = 0;
};

struct ValidationReport {
  std::vector<ValidationFinding> findings;
  bool ok() const { return findings.empty(); }
};

inline ValidationReport validate_network(const ReactionSystem& sys) {
  ValidationReport report;
  const std::size_t d = sys.dim();
  for (std::size_t i = 0; i < sys.reactions.size(); ++i) {
    const Reaction& r = sys.reactions[i];
    if (r.source.dim() != d || r.product.dim() != d) {
      report.findings.push_back(
          {"dimension-mismatch",
           "reaction " + std::to_string(i) + " complex dimension differs from species count",
           i});
      continue;
    }
    if (r.source == r.product)
      report.findings.push_back(
          {"self-loop", "reaction " + std::to_string(i) + " has equal source and product", i});
    if (!(r.rate > 0.0))
      report.findings.push_back(
          {"nonpositive-rate", "reaction " + std::to_string(i) + " has rate <= 0", i});
    for (auto c : r.source.coeffs)
      if (c < 0)
        report.findings.push_back(
            {"negative-coefficient", "reaction " + std::to_string(i) + " source coefficient < 0", i});
    for (auto c : r.product.coeffs)
      if (c < 0)
        report.findings.push_back(
            {"negative-coefficient", "reaction " + std::to_string(i) + " product coefficient < 0", i});
    for (std::size_t j = 0; j < i; ++j)
      if (sys.reactions[j].source == r.source &&
          sys.reactions[j].product == r.product) {
        report.findings.push_back(
            {"duplicate-reaction",
             "reactions " + std::to_string(j) + " and " + std::to_string(i) + " coincide", i});
        break;
      }
  }
  return report;
}

}  // namespace crn
