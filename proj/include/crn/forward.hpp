#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "crn/distribution.hpp"
#include "crn/kernel.hpp"

namespace crn {

// Transient solver for the Kolmogorov forward equation on a truncated
// box via uniformization. Transitions leaving the box route their mass
// to an absorbing leak slot, so `leaked` upper-bounds the truncation
// error in total variation. The Poisson series is truncated once its
// remainder drops below 1e-12; the remainder is folded into the leak.
class UniformizedSolver {
 public:
  UniformizedSolver(const TransitionKernel& kernel, Box box)
      : box_(std::move(box)) {
    const std::size_t n = box_.size();
    row_begin_.assign(n + 1, 0);
    stay_.assign(n, 0.0);
    leak_rate_.assign(n, 0.0);
    std::vector<std::vector<std::pair<std::size_t, double>>> rows(n);
    uniform_rate_ = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      State z = box_.state_at(i);
      double q = 0.0;
      for (const auto& t : kernel.out_transitions(z)) {
        q += t.rate;
        if (box_.contains(t.target))
          rows[i].push_back({box_.index_of(t.target), t.rate});
        else
          leak_rate_[i] += t.rate;
      }
      total_rate_max_ = std::max(total_rate_max_, q);
    }
    uniform_rate_ = total_rate_max_;
    if (uniform_rate_ <= 0.0) uniform_rate_ = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      row_begin_[i + 1] = row_begin_[i] + rows[i].size();
      double q = leak_rate_[i];
      for (auto& [j, rate] : rows[i]) {
        q += rate;
        col_.push_back(j);
        prob_.push_back(rate / uniform_rate_);
      }
      stay_[i] = 1.0 - q / uniform_rate_;
      leak_rate_[i] /= uniform_rate_;
    }
  }

  const Box& box() const { return box_; }
  double uniformization_rate() const { return uniform_rate_; }

  // Advance `dist` (which must live on this box) by dt >= 0.
  void advance(DistributionVector& dist, double dt) const {
    if (dt < 0.0) throw Error("negative-time", "time step must be >= 0");
    if (dist.box.bounds != box_.bounds)
      throw Error("box-mismatch", "distribution not on the solver box");
    if (dt == 0.0) return;
    const std::size_t n = dist.mass.size();
    const double lt = uniform_rate_ * dt;
    std::vector<double> cur = dist.mass;
    double cur_leak = dist.leaked;
    std::vector<double> acc(n, 0.0);
    double acc_leak = 0.0;

    double cum = 0.0;
    std::size_t k = 0;
    const std::size_t k_cap =
        static_cast<std::size_t>(lt + 12.0 * std::sqrt(lt + 1.0) + 64.0);
    while (true) {
      double logw = static_cast<double>(k) * std::log(lt) - lt -
                    std::lgamma(static_cast<double>(k) + 1.0);
      double w = std::exp(logw);
      cum += w;
      if (w > 0.0) {
        for (std::size_t i = 0; i < n; ++i) acc[i] += w * cur[i];
        acc_leak += w * cur_leak;
      }
      if (cum >= 1.0 - 1e-12 || k >= k_cap) break;
      // One uniformized DTMC step.
      if (scratch_.size() != n) scratch_.assign(n, 0.0);
      std::fill(scratch_.begin(), scratch_.end(), 0.0);
      double next_leak = cur_leak;
      for (std::size_t i = 0; i < n; ++i) {
        double v = cur[i];
        if (v == 0.0) continue;
        scratch_[i] += v * stay_[i];
        next_leak += v * leak_rate_[i];
        for (std::size_t e = row_begin_[i]; e < row_begin_[i + 1]; ++e)
          scratch_[col_[e]] += v * prob_[e];
      }
      cur.swap(scratch_);
      cur_leak = next_leak;
      ++k;
    }
    double remainder = std::max(0.0, 1.0 - cum);
    dist.mass = std::move(acc);
    dist.leaked = acc_leak + remainder;
  }

 private:
  Box box_;
  double uniform_rate_ = 1.0;
  double total_rate_max_ = 0.0;
  std::vector<std::size_t> row_begin_;
  std::vector<std::size_t> col_;
  std::vector<double> prob_;
  std::vector<double> stay_;
  std::vector<double> leak_rate_;
  mutable std::vector<double> scratch_;
};

inline DistributionVector forward_distribution(const TransitionKernel& kernel,
                                               const State& x0, double t,
                                               const Box& box) {
  if (t < 0.0) throw Error("negative-time", "time must be >= 0");
  DistributionVector d = point_mass(box, x0);
  if (t == 0.0) return d;
  UniformizedSolver solver(kernel, box);
  solver.advance(d, t);
  return d;
}

}  // namespace crn
