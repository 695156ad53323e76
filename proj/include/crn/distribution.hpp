#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "crn/error.hpp"
#include "crn/kernel.hpp"

namespace crn {

// Probability mass over a truncated box plus a rigorous upper bound on
// the mass that left the box. sum(mass) + leaked stays within 1e-12 of 1.
struct DistributionVector {
  Box box;
  std::vector<double> mass;   // indexed by Box::index_of
  double leaked = 0.0;

  double at(const State& s) const {
    return box.contains(s) ? mass[box.index_of(s)] : 0.0;
  }
  double total() const {
    double t = 0.0;
    for (double m : mass) t += m;
    return t;
  }
};

inline DistributionVector point_mass(const Box& box, const State& x) {
  if (!box.contains(x))
    throw Error("box-mismatch", "state outside the truncation box");
  DistributionVector d;
  d.box = box;
  d.mass.assign(box.size(), 0.0);
  d.mass[box.index_of(x)] = 1.0;
  return d;
}

// TV between the underlying (untruncated) laws is bracketed by folding
// each argument's leaked mass in as worst case.
struct TvInterval {
  double lower = 0.0;
  double upper = 0.0;
};

inline TvInterval tv_distance(const DistributionVector& p,
                              const DistributionVector& q) {
  if (p.box.bounds != q.box.bounds)
    throw Error("box-mismatch", "distributions live on different boxes");
  double l1 = 0.0;
  for (std::size_t i = 0; i < p.mass.size(); ++i)
    l1 += std::abs(p.mass[i] - q.mass[i]);
  double half = 0.5 * l1;
  double slack = 0.5 * (p.leaked + q.leaked);
  TvInterval iv;
  iv.lower = std::max(0.0, half - slack);
  iv.upper = std::min(1.0, half + slack);
  return iv;
}

// Wire format: one "# leaked: v" header line, a column header, then one
// row per state carrying positive mass.
inline std::string distribution_to_csv(const DistributionVector& d) {
  std::string out = "# leaked: ";
  {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), d.leaked);
    out.append(buf, res.ptr);
  }
  out += "\n";
  for (std::size_t i = 0; i < d.box.bounds.size(); ++i)
    out += "x" + std::to_string(i + 1) + ",";
  out += "mass\n";
  for (std::size_t idx = 0; idx < d.mass.size(); ++idx) {
    if (d.mass[idx] == 0.0) continue;
    State s = d.box.state_at(idx);
    for (auto v : s) out += std::to_string(v) + ",";
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), d.mass[idx]);
    out.append(buf, res.ptr);
    out += "\n";
  }
  return out;
}

// Product of Poisson(c_i) marginals restricted to the box; leaked is the
// exact tail mass.
inline DistributionVector product_poisson(const std::vector<double>& c,
                                          const Box& box) {
  if (c.size() != box.bounds.size())
    throw Error("dimension-mismatch", "mean vector does not match box");
  // Per-coordinate pmf tables.
  std::vector<std::vector<double>> pmf(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    pmf[i].resize(static_cast<std::size_t>(box.bounds[i]) + 1);
    double p = std::exp(-c[i]);
    for (std::size_t k = 0; k < pmf[i].size(); ++k) {
      pmf[i][k] = p;
      p *= c[i] / static_cast<double>(k + 1);
    }
  }
  DistributionVector d;
  d.box = box;
  d.mass.assign(box.size(), 0.0);
  const std::size_t n = d.mass.size();
  for (std::size_t idx = 0; idx < n; ++idx) {
    State s = box.state_at(idx);
    double m = 1.0;
    for (std::size_t i = 0; i < s.size(); ++i)
      m *= pmf[i][static_cast<std::size_t>(s[i])];
    d.mass[idx] = m;
  }
  d.leaked = std::max(0.0, 1.0 - d.total());
  return d;
}

}  // namespace crn
